"""Torus-equivariant bivector fields as (A, alpha) chart data.

An equivariant bivector field on the dense torus is determined by an
antisymmetric coefficient matrix A and a multidegree alpha: the (i, j)
coefficient function is a_ij * z^alpha * z_i * z_j. Changing to the chart
of a maximal cone with ray basis R (columns in the source basis) turns the
data into B = S A S^t and beta = R^t alpha with S = R^-1; the rank is
unchanged. Regularity on a chart means every nonzero entry has nonnegative
exponents there, i.e. the local coefficient functions are polynomial.

Indices are 0-based throughout; reports that prefer 1-based coordinate
labels z_1..z_n are the CLI's concern.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

from .exact_linalg import IntMatrix, RatMatrix, unimodular_inverse
from .toric_fans import Fan, InvalidFanError, chart_frame, validate_fan

__all__ = [
    "EquivariantBivector",
    "ChartPresentation",
    "RegularityViolation",
    "DiagonalEntryError",
    "NoBaseChartError",
    "UndefinedEntryError",
    "NotRegularError",
    "transition",
    "entry_exponents",
    "is_regular_on_chart",
    "is_regular_global",
    "first_regularity_violation",
    "poisson_check",
    "poisson_witness",
    "evaluate_matrix",
    "chart_presentations",
    "resolve_base_frame",
]


class DiagonalEntryError(ValueError):
    """Entry exponents are only defined for off-diagonal entries."""


class NoBaseChartError(ValueError):
    """No maximal cone is the standard orthant and no base frame was given."""


class UndefinedEntryError(ValueError):
    """A zero coordinate is raised to a negative exponent."""


class NotRegularError(ValueError):
    """The bivector field is not regular on every chart of the fan."""

    def __init__(self, violation: "RegularityViolation"):
        self.violation = violation
        super().__init__(
            f"chart {violation.chart}: entry {violation.entry} has exponent vector "
            f"{violation.exponents} with a negative component"
        )


@dataclass(frozen=True)
class EquivariantBivector:
    """The pair (A, alpha): antisymmetric rational matrix and multidegree."""

    n: int
    alpha: tuple[int, ...]
    a: RatMatrix

    def __post_init__(self) -> None:
        if len(self.alpha) != self.n:
            raise ValueError("multidegree length does not match the dimension")
        object.__setattr__(self, "alpha", tuple(int(x) for x in self.alpha))
        if self.a.rows != self.n or self.a.cols != self.n:
            raise ValueError("coefficient matrix shape does not match the dimension")
        if not self.a.is_antisymmetric():
            raise ValueError("coefficient matrix must be antisymmetric")

    @classmethod
    def from_entries(
        cls,
        n: int,
        alpha: Sequence[int],
        entries: Sequence[tuple[int, int, Fraction | int | str]],
    ) -> "EquivariantBivector":
        """Build from upper-triangular entries (i, j, value) with i < j."""
        grid = [[Fraction(0)] * n for _ in range(n)]
        for i, j, value in entries:
            if not 0 <= i < j < n:
                raise ValueError(f"entry index pair ({i}, {j}) out of range or not i < j")
            if grid[i][j] != 0:
                raise ValueError(f"duplicate entry pair ({i}, {j})")
            v = Fraction(value)
            grid[i][j] = v
            grid[j][i] = -v
        return cls(n, tuple(alpha), RatMatrix.from_rows(grid, n))

    def is_zero(self) -> bool:
        return self.a.is_zero()


@dataclass(frozen=True)
class ChartPresentation:
    """The (B, beta) data of the field in the chart of one maximal cone."""

    chart: Optional[int]
    b: RatMatrix
    beta: tuple[int, ...]

    def as_field(self) -> EquivariantBivector:
        """The presentation reread as base data (for composing transitions)."""
        return EquivariantBivector(self.b.rows, self.beta, self.b)


class RegularityViolation(NamedTuple):
    chart: int
    entry: tuple[int, int]
    exponents: tuple[int, ...]


def transition(bv: EquivariantBivector, r: IntMatrix, chart: Optional[int] = None) -> ChartPresentation:
    """Chart change along the unimodular matrix r (columns = target basis).

    Returns B = S A S^t and beta = R^t alpha with S = R^-1. Raises
    NotUnimodularError / NotSquareError for an inadmissible r.
    """
    s = unimodular_inverse(r).to_rational()
    b = s @ bv.a @ s.transpose()
    beta = tuple(
        sum(r.entries[m][h] * bv.alpha[m] for m in range(bv.n)) for h in range(bv.n)
    )
    return ChartPresentation(chart=chart, b=b, beta=beta)


def entry_exponents(beta: Sequence[int], i: int, j: int) -> tuple[int, ...]:
    """Exponent vector of the (i, j) coefficient monomial: beta + e_i + e_j."""
    if i == j:
        raise DiagonalEntryError("diagonal entries of an antisymmetric field are zero")
    return tuple(beta[h] + (h == i) + (h == j) for h in range(len(beta)))


def is_regular_on_chart(cp: ChartPresentation) -> bool:
    """True iff every nonzero entry has all exponents >= 0 on this chart."""
    n = cp.b.rows
    for i in range(n):
        for j in range(i + 1, n):
            if cp.b[i, j] != 0 and any(e < 0 for e in entry_exponents(cp.beta, i, j)):
                return False
    return True


def resolve_base_frame(f: Fan, base_frame: Optional[IntMatrix]) -> IntMatrix:
    """The frame in which the (A, alpha) data is expressed.

    An explicit frame must be unimodular. Without one, the standard basis is
    used, which is only legitimate when some maximal cone is the standard
    orthant; otherwise NoBaseChartError is raised.
    """
    n = f.ambient_dim
    if base_frame is not None:
        if base_frame.rows != n or base_frame.cols != n:
            raise ValueError("base frame shape does not match the fan dimension")
        unimodular_inverse(base_frame)  # raises if not unimodular
        return base_frame
    standard = {tuple(int(j == i) for j in range(n)) for i in range(n)}
    for mc in f.max_cones:
        if {f.rays[i] for i in mc} == standard:
            return IntMatrix.identity(n)
    raise NoBaseChartError(
        "no maximal cone is the standard orthant; supply an explicit base frame"
    )


@lru_cache(maxsize=None)
def chart_presentations(
    bv: EquivariantBivector, f: Fan, base_frame: Optional[IntMatrix] = None
) -> tuple[ChartPresentation, ...]:
    """The (B, beta) presentation of bv on every maximal cone of the fan."""
    report = validate_fan(f)
    if not report.valid:
        raise InvalidFanError("; ".join(v.detail for v in report.errors))
    frame = resolve_base_frame(f, base_frame)
    frame_inv = unimodular_inverse(frame)
    out = []
    for k in range(len(f.max_cones)):
        r = frame_inv @ chart_frame(f, k)
        out.append(transition(bv, r, chart=k))
    return tuple(out)


@lru_cache(maxsize=None)
def first_regularity_violation(
    bv: EquivariantBivector, f: Fan, base_frame: Optional[IntMatrix] = None
) -> Optional[RegularityViolation]:
    """First chart/entry where some exponent goes negative, or None.

    Charts of non-full-dimensional maximal cones are checked through their
    completed frames, which is conservative: exponents must be nonnegative
    in the completed coordinates as well.
    """
    for k, cp in enumerate(chart_presentations(bv, f, base_frame)):
        n = cp.b.rows
        for i in range(n):
            for j in range(i + 1, n):
                if cp.b[i, j] == 0:
                    continue
                exps = entry_exponents(cp.beta, i, j)
                if any(e < 0 for e in exps):
                    return RegularityViolation(chart=k, entry=(i, j), exponents=exps)
    return None


def is_regular_global(
    bv: EquivariantBivector, f: Fan, base_frame: Optional[IntMatrix] = None
) -> bool:
    """True iff the field is regular on every chart of the fan."""
    return first_regularity_violation(bv, f, base_frame) is None


def poisson_witness(
    bv: EquivariantBivector,
) -> Optional[tuple[tuple[int, int, int], Fraction]]:
    """First violating triple (j, h, k) of the Poisson criterion, with the
    nonzero sum, or None when the field is Poisson.

    The criterion: for all distinct j < h < k,
    sum over i not in {j, h, k} of
    alpha_i * (a_ij a_hk + a_ih a_kj + a_ik a_jh) must vanish. Other triple
    orders only flip signs, and for n = 3 the sum is empty.
    """
    a = bv.a
    for j in range(bv.n):
        for h in range(j + 1, bv.n):
            for k in range(h + 1, bv.n):
                total = Fraction(0)
                for i in range(bv.n):
                    if i in (j, h, k) or bv.alpha[i] == 0:
                        continue
                    total += bv.alpha[i] * (
                        a[i, j] * a[h, k] + a[i, h] * a[k, j] + a[i, k] * a[j, h]
                    )
                if total != 0:
                    return (j, h, k), total
    return None


def poisson_check(bv: EquivariantBivector) -> bool:
    """True iff the field defines a Poisson structure (vanishing self-bracket)."""
    return poisson_witness(bv) is None


def evaluate_matrix(cp: ChartPresentation, z: Sequence[Fraction | int]) -> RatMatrix:
    """The exact antisymmetric matrix of the field at a chart point z.

    Entry (i, j) is b_ij times z raised to the entry exponents. A zero
    coordinate with positive exponent contributes 0, with exponent 0
    contributes nothing (the factor is absent), and with negative exponent
    makes the entry undefined (UndefinedEntryError).
    """
    n = cp.b.rows
    point = [Fraction(x) for x in z]
    if len(point) != n:
        raise ValueError("point length does not match the chart dimension")
    grid = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            coeff = cp.b[i, j]
            if coeff == 0:
                continue
            value = coeff
            for m, e in enumerate(entry_exponents(cp.beta, i, j)):
                if point[m] == 0:
                    if e > 0:
                        value = Fraction(0)
                        break
                    if e < 0:
                        raise UndefinedEntryError(
                            f"entry ({i}, {j}) has exponent {e} at zero coordinate {m}"
                        )
                elif e != 0:
                    value *= point[m] ** e
            grid[i][j] = value
            grid[j][i] = -value
    return RatMatrix.from_rows(grid, n)
