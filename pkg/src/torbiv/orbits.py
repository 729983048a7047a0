"""Orbit-cone correspondence for valid smooth fans.

Each cone of the fan (every face of every maximal cone) corresponds to one
torus orbit; the orbit of a cone spanned by d rays has dimension n - d.
Orbits are identified by their global ray-index sets so that rank queries
are chart-independent; ChartOrbit is the per-chart view, describing the
orbit inside one affine chart by the set of vanishing local coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .toric_fans import Fan, InvalidFanError, validate_fan

__all__ = [
    "OrbitRef",
    "ChartOrbit",
    "NoContainingMaxConeError",
    "enumerate_cones",
    "orbit_in_chart",
    "closure_cones",
    "sample_orbit_point",
]


class NoContainingMaxConeError(ValueError):
    """The ray-index set is not a face of any maximal cone of the fan."""


@dataclass(frozen=True)
class OrbitRef:
    """A torus orbit, named by the ray-index set of its cone.

    dim is the dimension of the orbit itself: ambient dimension minus the
    number of spanning rays (the fan is smooth, hence simplicial).
    """

    rays: frozenset[int]
    dim: int


@dataclass(frozen=True)
class ChartOrbit:
    """An orbit seen inside the chart of one maximal cone.

    In that chart the orbit is exactly the locus where the local coordinates
    indexed by `vanishing` (0-based positions in the cone's generator list)
    are zero and all other coordinates are nonzero.
    """

    max_cone: int
    vanishing: frozenset[int]
    n: int


def orbit_sort_key(t: OrbitRef) -> tuple[int, tuple[int, ...]]:
    return (len(t.rays), tuple(sorted(t.rays)))


@lru_cache(maxsize=None)
def enumerate_cones(f: Fan) -> tuple[OrbitRef, ...]:
    """All cones of the fan as orbit references, deduplicated and sorted.

    Includes the zero cone (the dense torus orbit) and the maximal cones
    (the torus-fixed points when the fan is full-dimensional).
    """
    report = validate_fan(f)
    if not report.valid:
        raise InvalidFanError("; ".join(v.detail for v in report.errors))
    seen: set[frozenset[int]] = set()
    for mc in f.max_cones:
        for size in range(len(mc) + 1):
            for combo in combinations(mc, size):
                seen.add(frozenset(combo))
    refs = [OrbitRef(rays=s, dim=f.ambient_dim - len(s)) for s in seen]
    refs.sort(key=orbit_sort_key)
    return tuple(refs)


def containing_charts(t: OrbitRef, f: Fan) -> tuple[int, ...]:
    """Indices of the maximal cones having t's cone as a face."""
    return tuple(k for k, mc in enumerate(f.max_cones) if t.rays <= set(mc))


def orbit_in_chart(t: OrbitRef, f: Fan) -> ChartOrbit:
    """The orbit in the first (listed order) maximal cone containing it.

    The vanishing set holds the positions of t's rays inside that cone's
    ordered generator list; the remaining local coordinates stay nonzero
    on the orbit.
    """
    charts = containing_charts(t, f)
    if not charts:
        raise NoContainingMaxConeError(f"rays {sorted(t.rays)} span no face of the fan")
    k = charts[0]
    positions = frozenset(
        pos for pos, ray_idx in enumerate(f.max_cones[k]) if ray_idx in t.rays
    )
    return ChartOrbit(max_cone=k, vanishing=positions, n=f.ambient_dim)


def closure_cones(t: OrbitRef, f: Fan) -> tuple[OrbitRef, ...]:
    """Cones whose orbits make up the closure of t's orbit (superset scan)."""
    return tuple(c for c in enumerate_cones(f) if t.rays <= c.rays)


def sample_orbit_point(co: ChartOrbit, seed: int) -> tuple[Fraction, ...]:
    """Deterministic pseudo-random point on the orbit, in chart coordinates.

    Vanishing coordinates are 0; the rest are nonzero rationals with
    numerator and denominator bounded by 97, drawn from a generator seeded
    only by `seed`, so equal seeds give equal points.
    """
    rng = random.Random(seed)
    point = []
    for i in range(co.n):
        if i in co.vanishing:
            point.append(Fraction(0))
        else:
            num = rng.randint(1, 97) * rng.choice((1, -1))
            den = rng.randint(1, 97)
            point.append(Fraction(num, den))
    return tuple(point)
