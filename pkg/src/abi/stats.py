"""Nonparametric tests used by the history analytics.

Pure Python implementations with exact small-sample distributions:

- Wilcoxon signed-rank with zero discarding and average ranks; the exact
  null distribution (enumeration over sign assignments, done as a
  shift-and-add convolution over doubled ranks) is used up to 25
  effective pairs, a tie-corrected normal approximation with continuity
  correction beyond that.
- Mann-Whitney U with exact enumeration for small untied samples and
  the tie-corrected normal approximation otherwise.
- Pearson chi-square test of independence with the statistic computed
  in exact rational arithmetic and the p-value from an in-house
  regularized upper incomplete gamma function.

Statistics and p-values are returned as Decimals; exact p-values from
the sign-assignment null are exact by construction (denominator is a
power of two).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .errors import AbiError, InvalidValue

WILCOXON_EXACT_LIMIT = 25
MANN_WHITNEY_EXACT_LIMIT = 12

_DECIMAL_PRECISION = 60


class EmptySample(AbiError, ValueError):
    """A test received no data to work with."""


class AllZeroDifferences(AbiError, ValueError):
    """Every paired difference is zero, leaving nothing to rank."""


class DegenerateTable(AbiError, ValueError):
    """A contingency table with an empty row or column margin."""


class Hypothesis(str, Enum):
    TWO_SIDED = "two_sided"
    GREATER = "greater"
    LESS = "less"


@dataclass(frozen=True)
class TestResult:
    method: str
    statistic: Decimal
    p_value: Decimal
    alternative: str
    n_effective: int
    exact: bool
    degrees_of_freedom: int | None = None

    def to_json_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "method": self.method,
            "statistic": str(self.statistic),
            "p_value": str(self.p_value),
            "alternative": self.alternative,
            "n_effective": self.n_effective,
            "exact": self.exact,
        }
        if self.degrees_of_freedom is not None:
            data["degrees_of_freedom"] = self.degrees_of_freedom
        return data


def _to_decimal(x: Any) -> Decimal:
    if isinstance(x, Decimal):
        return x
    if isinstance(x, bool):
        raise InvalidValue(f"expected a number, got {x!r}")
    if isinstance(x, int):
        return Decimal(x)
    if isinstance(x, float):
        return Decimal(repr(x))
    if isinstance(x, str):
        return Decimal(x)
    raise InvalidValue(f"expected a number, got {type(x).__name__}")


def _fraction_to_decimal(fr: Fraction, prec: int = _DECIMAL_PRECISION) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = prec
        return Decimal(fr.numerator) / Decimal(fr.denominator)


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _average_ranks(values: Sequence[Decimal]) -> tuple[list[Fraction], list[int]]:
    """Ranks 1..n with ties sharing their average; also the tie sizes."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks: list[Fraction] = [Fraction(0)] * len(values)
    tie_sizes: list[int] = []
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = Fraction((i + 1) + (j + 1), 2)
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        tie_sizes.append(j - i + 1)
        i = j + 1
    return ranks, tie_sizes


def _hypothesis(alternative: str | Hypothesis) -> Hypothesis:
    try:
        return Hypothesis(alternative)
    except ValueError as exc:
        raise InvalidValue(
            f"alternative must be one of {[h.value for h in Hypothesis]}, got {alternative!r}"
        ) from exc


# ---------------------------------------------------------------------------
# Wilcoxon signed-rank
# ---------------------------------------------------------------------------


def _signed_rank_counts(doubled_ranks: Sequence[int]) -> list[int]:
    """counts[s] = number of sign assignments with doubled W+ equal to s."""
    total = sum(doubled_ranks)
    counts = [0] * (total + 1)
    counts[0] = 1
    for r in doubled_ranks:
        # iterate downward so each rank is used at most once
        for s in range(total, r - 1, -1):
            if counts[s - r]:
                counts[s] += counts[s - r]
    return counts


def wilcoxon_signed_rank(
    pairs: Iterable[tuple[Any, Any]],
    alternative: str | Hypothesis = Hypothesis.GREATER.value,
    zero_policy: str = "discard",
) -> TestResult:
    """Paired signed-rank test on (before, after) pairs, d = after - before.

    Zero differences are discarded before ranking (the only supported
    zero policy); tied absolute differences share average ranks.  The
    statistic is W+, the sum of ranks of positive differences.
    """
    if zero_policy != "discard":
        raise InvalidValue(f"zero_policy must be 'discard', got {zero_policy!r}")
    hyp = _hypothesis(alternative)
    diffs = [_to_decimal(after) - _to_decimal(before) for before, after in pairs]
    if not diffs:
        raise EmptySample("wilcoxon_signed_rank needs at least one pair")
    nonzero = [d for d in diffs if d != 0]
    n = len(nonzero)
    if n == 0:
        raise AllZeroDifferences("every paired difference is zero")

    ranks, tie_sizes = _average_ranks([abs(d) for d in nonzero])
    w_plus = sum((r for d, r in zip(nonzero, ranks) if d > 0), Fraction(0))
    statistic = _fraction_to_decimal(w_plus)

    if n <= WILCOXON_EXACT_LIMIT:
        doubled = [int(2 * r) for r in ranks]
        counts = _signed_rank_counts(doubled)
        total = 2**n
        w2 = int(2 * w_plus)
        ge = sum(counts[w2:])
        le = sum(counts[: w2 + 1])
        if hyp is Hypothesis.GREATER:
            p = Fraction(ge, total)
        elif hyp is Hypothesis.LESS:
            p = Fraction(le, total)
        else:
            p = min(2 * Fraction(min(ge, le), total), Fraction(1))
        return TestResult(
            method="wilcoxon_signed_rank",
            statistic=statistic,
            p_value=_fraction_to_decimal(p),
            alternative=hyp.value,
            n_effective=n,
            exact=True,
        )

    mean = n * (n + 1) / 4.0
    tie_term = sum(t**3 - t for t in tie_sizes) / 48.0
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term
    w = float(w_plus)
    if variance <= 0:
        p_float = 1.0
    elif hyp is Hypothesis.GREATER:
        p_float = _normal_sf((w - mean - 0.5) / math.sqrt(variance))
    elif hyp is Hypothesis.LESS:
        p_float = _normal_sf((mean - w - 0.5) / math.sqrt(variance))
    else:
        z = max(abs(w - mean) - 0.5, 0.0) / math.sqrt(variance)
        p_float = min(2.0 * _normal_sf(z), 1.0)
    return TestResult(
        method="wilcoxon_signed_rank",
        statistic=statistic,
        p_value=Decimal(repr(p_float)),
        alternative=hyp.value,
        n_effective=n,
        exact=False,
    )


# ---------------------------------------------------------------------------
# Mann-Whitney U
# ---------------------------------------------------------------------------


def _rank_sum_counts(n: int, k: int) -> dict[int, int]:
    """counts[s] = number of k-subsets of ranks {1..n} with rank sum s."""
    # f[j][s] after processing rank r: subsets of size j summing to s
    f: list[dict[int, int]] = [dict() for _ in range(k + 1)]
    f[0][0] = 1
    for r in range(1, n + 1):
        for j in range(min(r, k), 0, -1):
            for s, c in list(f[j - 1].items()):
                f[j][s + r] = f[j].get(s + r, 0) + c
    return f[k]


def mann_whitney_u(
    a: Iterable[Any],
    b: Iterable[Any],
    alternative: str | Hypothesis = Hypothesis.TWO_SIDED.value,
) -> TestResult:
    """Rank-sum test of two independent samples; statistic is U for a.

    U_a counts pairs won by sample a (ties count one half).  Small
    untied samples (combined size <= 12) get the exact permutation
    distribution; otherwise the tie-corrected normal approximation with
    continuity correction.  Zero variance (all values identical) yields
    p = 1.
    """
    hyp = _hypothesis(alternative)
    xs = [_to_decimal(v) for v in a]
    ys = [_to_decimal(v) for v in b]
    n_a, n_b = len(xs), len(ys)
    if n_a == 0 or n_b == 0:
        raise EmptySample("mann_whitney_u needs both samples non-empty")
    n = n_a + n_b

    ranks, tie_sizes = _average_ranks(xs + ys)
    r_a = sum(ranks[:n_a], Fraction(0))
    u_a = r_a - Fraction(n_a * (n_a + 1), 2)
    statistic = _fraction_to_decimal(u_a)
    has_ties = any(t > 1 for t in tie_sizes)

    if not has_ties and n <= MANN_WHITNEY_EXACT_LIMIT:
        counts = _rank_sum_counts(n, n_a)
        total = math.comb(n, n_a)
        offset = n_a * (n_a + 1) // 2  # U = rank sum - offset
        u_obs = int(u_a)
        ge = sum(c for s, c in counts.items() if s - offset >= u_obs)
        le = sum(c for s, c in counts.items() if s - offset <= u_obs)
        if hyp is Hypothesis.GREATER:
            p = Fraction(ge, total)
        elif hyp is Hypothesis.LESS:
            p = Fraction(le, total)
        else:
            p = min(2 * Fraction(min(ge, le), total), Fraction(1))
        return TestResult(
            method="mann_whitney_u",
            statistic=statistic,
            p_value=_fraction_to_decimal(p),
            alternative=hyp.value,
            n_effective=n,
            exact=True,
        )

    mean = n_a * n_b / 2.0
    tie_term = sum(t**3 - t for t in tie_sizes)
    variance = (n_a * n_b / 12.0) * ((n + 1) - tie_term / (n * (n - 1)))
    u = float(u_a)
    if variance <= 0:
        p_float = 1.0
    elif hyp is Hypothesis.GREATER:
        p_float = _normal_sf((u - mean - 0.5) / math.sqrt(variance))
    elif hyp is Hypothesis.LESS:
        p_float = _normal_sf((mean - u - 0.5) / math.sqrt(variance))
    else:
        z = max(abs(u - mean) - 0.5, 0.0) / math.sqrt(variance)
        p_float = min(2.0 * _normal_sf(z), 1.0)
    return TestResult(
        method="mann_whitney_u",
        statistic=statistic,
        p_value=Decimal(repr(p_float)),
        alternative=hyp.value,
        n_effective=n,
        exact=False,
    )


# ---------------------------------------------------------------------------
# chi-square independence
# ---------------------------------------------------------------------------


def _gamma_p_series(a: float, x: float) -> float:
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(10000):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-17:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_contfrac(a: float, x: float) -> float:
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0 else 1.0 / tiny
    h = d
    for i in range(1, 10000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def regularized_gamma_q(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x) for a > 0, x >= 0."""
    if a <= 0:
        raise InvalidValue(f"shape parameter must be positive, got {a}")
    if x < 0:
        raise InvalidValue(f"x must be non-negative, got {x}")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return max(0.0, min(1.0, 1.0 - _gamma_p_series(a, x)))
    return max(0.0, min(1.0, _gamma_q_contfrac(a, x)))


def chi_square_sf(statistic: float, dof: int) -> float:
    """Survival function of the chi-square distribution."""
    if dof < 1:
        raise InvalidValue(f"degrees of freedom must be >= 1, got {dof}")
    return regularized_gamma_q(dof / 2.0, statistic / 2.0)


def chi_square_independence(table: Sequence[Sequence[Any]]) -> TestResult:
    """Pearson chi-square test of independence on an r x c count table.

    Expected counts come from the margins; the statistic is computed in
    exact rational arithmetic, the p-value from the chi-square survival
    function with (r-1)(c-1) degrees of freedom.
    """
    rows = [list(row) for row in table]
    if len(rows) < 2 or any(len(row) < 2 for row in rows):
        raise DegenerateTable("table must be at least 2 x 2")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise DegenerateTable("table rows must have equal length")
    counts: list[list[Fraction]] = []
    for row in rows:
        converted = []
        for cell in row:
            value = Fraction(_to_decimal(cell))
            if value < 0:
                raise InvalidValue(f"counts must be non-negative, got {cell!r}")
            converted.append(value)
        counts.append(converted)

    row_sums = [sum(row, Fraction(0)) for row in counts]
    col_sums = [sum(col, Fraction(0)) for col in zip(*counts)]
    total = sum(row_sums, Fraction(0))
    if any(s == 0 for s in row_sums) or any(s == 0 for s in col_sums):
        raise DegenerateTable("a row or column margin is zero")

    stat = Fraction(0)
    for i, row in enumerate(counts):
        for j, observed in enumerate(row):
            expected = row_sums[i] * col_sums[j] / total
            diff = observed - expected
            stat += diff * diff / expected
    dof = (len(rows) - 1) * (width - 1)
    p_float = chi_square_sf(float(stat), dof)
    return TestResult(
        method="chi_square_independence",
        statistic=_fraction_to_decimal(stat, prec=40),
        p_value=Decimal(repr(p_float)),
        alternative=Hypothesis.TWO_SIDED.value,
        n_effective=int(total),
        exact=False,
        degrees_of_freedom=dof,
    )
