"""Rank stratification and degeneracy loci of equivariant bivector fields.

The rank of an equivariant field is constant on each torus orbit, so the
degeneracy locus X_{<=2k} is a union of orbit closures and is fully
described by the upward-closed set of fan cones whose orbits have rank at
most 2k. The face-minimal cones of such a set name the irreducible
components of the locus; the component through the orbit of a cone spanned
by d rays has dimension n - d.

rank_on_orbit computes the rank by a closed-form vanishing-pattern analysis
of the chart data; numeric_rank_oracle recomputes it by sampling points on
the orbit and taking exact matrix ranks, which keeps the two routes
independent of each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

from .bivector import (
    ChartPresentation,
    EquivariantBivector,
    NotRegularError,
    chart_presentations,
    entry_exponents,
    evaluate_matrix,
    first_regularity_violation,
)
from .exact_linalg import IntMatrix, rational_rank
from .orbits import (
    ChartOrbit,
    OrbitRef,
    containing_charts,
    enumerate_cones,
    orbit_sort_key,
    sample_orbit_point,
)
from .toric_fans import Fan, InvalidFanError, is_complete, validate_fan

__all__ = [
    "OrbitRank",
    "Stratification",
    "ClauseResult",
    "TheoremCertificate",
    "ConeNotInFanError",
    "ZeroBivectorError",
    "OracleDisagreementError",
    "rank_on_orbit",
    "stratify",
    "components",
    "certify_main_theorem",
    "numeric_rank_oracle",
]


class ConeNotInFanError(ValueError):
    """The requested cone is not a face of any (or of the given) maximal cone."""


class ZeroBivectorError(ValueError):
    """The certifier rejects the identically zero field."""


class OracleDisagreementError(AssertionError):
    """Sampled ranks disagree across charts or seeds: rank is constant on an
    orbit, so a disagreement signals a genuine bug."""


class OrbitRank(NamedTuple):
    orbit: OrbitRef
    rank: int


@dataclass(frozen=True, eq=False)
class Stratification:
    """Ranks of all orbits plus, per even bound 2k, the cone set of X_{<=2k}.

    by_bound maps each even bound to the upward-closed set of cones whose
    orbit rank is <= the bound; minimal holds the face-minimal cones of that
    set, whose orbit closures are the components of the locus.
    """

    n: int
    ranks: tuple[OrbitRank, ...]
    by_bound: dict[int, frozenset[OrbitRef]]
    minimal: dict[int, tuple[OrbitRef, ...]]

    def rank_of(self, t: OrbitRef) -> int:
        for orbit, rank in self.ranks:
            if orbit == t:
                return rank
        raise ConeNotInFanError(f"rays {sorted(t.rays)} span no cone of the fan")

    @property
    def bounds(self) -> tuple[int, ...]:
        return tuple(sorted(self.by_bound))


@dataclass(frozen=True)
class ClauseResult:
    """One clause of the certificate: for bound 2k, the locus is nonempty and
    has a component of dimension >= 2k + 1 (for k = 0: of dimension >= 1,
    with nonemptiness required only on complete fans)."""

    k: int
    nonempty: bool
    witness: Optional[OrbitRef]
    component_dim: Optional[int]
    satisfied: bool
    note: str = ""


@dataclass(frozen=True)
class TheoremCertificate:
    fan_complete: bool
    bivector_regular: bool
    clauses: tuple[ClauseResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.satisfied for c in self.clauses)


def _require_valid(f: Fan) -> None:
    report = validate_fan(f)
    if not report.valid:
        raise InvalidFanError("; ".join(v.detail for v in report.errors))


def _require_regular(
    bv: EquivariantBivector, f: Fan, base_frame: Optional[IntMatrix]
) -> tuple[ChartPresentation, ...]:
    violation = first_regularity_violation(bv, f, base_frame)
    if violation is not None:
        raise NotRegularError(violation)
    return chart_presentations(bv, f, base_frame)


def _rank_from_chart(cp: ChartPresentation, vanishing: Sequence[int]) -> int:
    """Rank on the orbit with the given vanishing positions, from chart data.

    An entry survives on the orbit iff its exponent is 0 at every vanishing
    coordinate. For a regular field the case split on the vanishing
    positions where beta is -1 settles the rank without evaluating points.
    """
    beta = cp.beta
    n = cp.b.rows
    vanish = set(vanishing)
    if any(beta[h] >= 1 for h in vanish):
        return 0  # every entry carries a positive power of a vanishing coordinate
    minus_one = sorted(h for h in vanish if beta[h] == -1)
    if len(minus_one) >= 3:
        return 0
    if len(minus_one) == 2:
        p, q = minus_one
        return 2 if cp.b[p, q] != 0 else 0
    if len(minus_one) == 1:
        p = minus_one[0]
        live = any(cp.b[p, j] != 0 for j in range(n) if j not in vanish)
        return 2 if live else 0
    keep = [i for i in range(n) if i not in vanish]
    return rational_rank(cp.b.submatrix(keep, keep))


def _vanishing_positions(f: Fan, chart: int, t: OrbitRef) -> tuple[int, ...]:
    return tuple(pos for pos, ray in enumerate(f.max_cones[chart]) if ray in t.rays)


def rank_on_orbit(
    bv: EquivariantBivector,
    f: Fan,
    t: OrbitRef,
    chart: Optional[int] = None,
    base_frame: Optional[IntMatrix] = None,
) -> int:
    """Rank of the field on the orbit of cone t (always even).

    The rank is constant on the orbit and independent of the chart used,
    so `chart` only pins which containing maximal cone does the computing
    (default: the first one).
    """
    _require_valid(f)
    presentations = _require_regular(bv, f, base_frame)
    charts = containing_charts(t, f)
    if not charts:
        raise ConeNotInFanError(f"rays {sorted(t.rays)} span no cone of the fan")
    if chart is None:
        chart = charts[0]
    elif chart not in charts:
        raise ConeNotInFanError(f"maximal cone {chart} does not contain rays {sorted(t.rays)}")
    return _rank_from_chart(presentations[chart], _vanishing_positions(f, chart, t))


def stratify(
    bv: EquivariantBivector, f: Fan, base_frame: Optional[IntMatrix] = None
) -> Stratification:
    """Orbit ranks and the cone sets of every degeneracy locus X_{<=2k}.

    Bounds run over the even integers in [0, n]. Each bound set is upward
    closed under the face relation (rank can only drop on orbit closures)
    and the sets nest as the bound grows.
    """
    _require_valid(f)
    presentations = _require_regular(bv, f, base_frame)
    n = f.ambient_dim
    ranks = []
    for t in enumerate_cones(f):
        chart = containing_charts(t, f)[0]
        rank = _rank_from_chart(presentations[chart], _vanishing_positions(f, chart, t))
        ranks.append(OrbitRank(t, rank))

    by_bound: dict[int, frozenset[OrbitRef]] = {}
    minimal: dict[int, tuple[OrbitRef, ...]] = {}
    for bound in range(0, n + 1, 2):
        cones = frozenset(t for t, rank in ranks if rank <= bound)
        mins = tuple(
            sorted(
                (t for t in cones if not any(o.rays < t.rays for o in cones)),
                key=orbit_sort_key,
            )
        )
        by_bound[bound] = cones
        minimal[bound] = mins
    return Stratification(n=n, ranks=tuple(ranks), by_bound=by_bound, minimal=minimal)


def components(s: Stratification, k: int) -> list[tuple[OrbitRef, int]]:
    """Components of X_{<=2k}: (minimal cone, dimension of its orbit closure)."""
    if not 0 <= 2 * k <= s.n:
        raise ValueError(f"bound 2k = {2 * k} outside [0, {s.n}]")
    return [(t, t.dim) for t in s.minimal[2 * k]]


def certify_main_theorem(
    bv: EquivariantBivector, f: Fan, base_frame: Optional[IntMatrix] = None
) -> TheoremCertificate:
    """Check the degeneracy-locus lower bounds clause by clause, with witnesses.

    For every k > 0 with 2k < n: X_{<=2k} must be nonempty with a component
    of dimension >= 2k + 1. For k = 0: a nonempty X_{<=0} must contain a
    curve, and on a complete fan X_{<=0} must be nonempty; on a non-complete
    fan an empty rank-0 stratum passes vacuously (with a note). A failing
    clause on valid input is reported, never suppressed: it means a library
    bug or a counterexample.
    """
    _require_valid(f)
    if bv.is_zero():
        raise ZeroBivectorError("the identically zero field is excluded from certification")
    strata = stratify(bv, f, base_frame)
    complete = is_complete(f)
    n = f.ambient_dim
    clauses = []

    if 0 < n:
        stratum = strata.minimal[0]
        nonempty = bool(strata.by_bound[0])
        witness = next((t for t in stratum if t.dim >= 1), None)
        if nonempty:
            satisfied = witness is not None
            note = "" if satisfied else "rank-0 stratum has no component of dimension >= 1"
        elif complete:
            satisfied = False
            note = "complete fan requires a nonempty rank-0 stratum"
        else:
            satisfied = True
            note = "stratum empty, fan not complete; clause vacuous"
        clauses.append(
            ClauseResult(
                k=0,
                nonempty=nonempty,
                witness=witness,
                component_dim=None if witness is None else witness.dim,
                satisfied=satisfied,
                note=note,
            )
        )

    for k in range(1, (n + 1) // 2):
        bound = 2 * k
        nonempty = bool(strata.by_bound[bound])
        witness = next((t for t in strata.minimal[bound] if t.dim >= bound + 1), None)
        clauses.append(
            ClauseResult(
                k=k,
                nonempty=nonempty,
                witness=witness,
                component_dim=None if witness is None else witness.dim,
                satisfied=nonempty and witness is not None,
                note="" if nonempty and witness is not None else "expected component missing",
            )
        )

    return TheoremCertificate(
        fan_complete=complete, bivector_regular=True, clauses=tuple(clauses)
    )


def numeric_rank_oracle(
    bv: EquivariantBivector,
    f: Fan,
    t: OrbitRef,
    seeds: Sequence[int],
    base_frame: Optional[IntMatrix] = None,
) -> int:
    """Rank on the orbit by sampling: independent cross-check of rank_on_orbit.

    For each seed and each maximal cone containing the orbit, a point of the
    orbit is sampled in that chart and the exact rank of the evaluated
    matrix is taken. All values must agree (the rank is constant on the
    orbit); a disagreement raises OracleDisagreementError.
    """
    if not seeds:
        raise ValueError("at least one seed is required")
    _require_valid(f)
    presentations = _require_regular(bv, f, base_frame)
    charts = containing_charts(t, f)
    if not charts:
        raise ConeNotInFanError(f"rays {sorted(t.rays)} span no cone of the fan")
    values = []
    for k in charts:
        co = ChartOrbit(
            max_cone=k,
            vanishing=frozenset(_vanishing_positions(f, k, t)),
            n=f.ambient_dim,
        )
        for seed in seeds:
            point = sample_orbit_point(co, seed)
            values.append(rational_rank(evaluate_matrix(presentations[k], point)))
    if len(set(values)) != 1:
        raise OracleDisagreementError(
            f"sampled ranks {sorted(set(values))} disagree on orbit {sorted(t.rays)}"
        )
    return values[0]
