"""Cones and fans of smooth toric varieties.

Construction and validation of fans, smoothness and completeness tests,
dual frames of smooth cones, face enumeration, exact cone intersection,
the halfspace-ray search, and a small gallery of standard fans.

Conventions: a cone is given by its primitive ray generators; a fan by a
global ray list plus index sets for the maximal cones. Everything is an
immutable value type and all queries are pure (and freely memoizable).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, NamedTuple, Optional, Sequence

from .exact_linalg import (
    IntMatrix,
    RatMatrix,
    rational_kernel,
    smith_normal_form,
    unimodular_inverse,
)

__all__ = [
    "Cone",
    "Fan",
    "HRep",
    "Violation",
    "ValidationReport",
    "NotSmoothError",
    "NotFullDimensionalError",
    "InvalidFanError",
    "UnknownNameError",
    "BadParamsError",
    "primitive",
    "is_smooth_cone",
    "dual_frame",
    "extend_to_basis",
    "cone_faces",
    "intersect_cones",
    "cone_contains",
    "validate_fan",
    "is_complete",
    "halfspace_ray",
    "builtin_fan",
    "chart_frame",
    "GALLERY_NAMES",
]


class NotSmoothError(ValueError):
    """The cone's ray generators do not extend to a basis of the lattice."""


class NotFullDimensionalError(ValueError):
    """A full-dimensional cone was required."""


class InvalidFanError(ValueError):
    """The fan data violates the fan axioms."""


class UnknownNameError(ValueError):
    """No gallery fan with that name."""


class BadParamsError(ValueError):
    """Gallery fan parameters out of range or of the wrong arity."""


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g <= 1:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class Cone:
    """A strongly convex rational cone given by its primitive ray generators.

    Generators are normalized to primitive vectors at construction; zero or
    duplicate generators are rejected. The empty generator tuple is the
    zero cone {0}.
    """

    ambient_dim: int
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.ambient_dim < 1:
            raise ValueError("ambient dimension must be positive")
        gens = []
        for g in self.generators:
            if len(g) != self.ambient_dim:
                raise ValueError("generator length does not match ambient dimension")
            if all(x == 0 for x in g):
                raise ValueError("zero vector cannot generate a ray")
            gens.append(primitive(g))
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate ray generators")
        object.__setattr__(self, "generators", tuple(gens))

    @property
    def dim(self) -> int:
        """Dimension of the linear span (equals #generators for smooth cones)."""
        if not self.generators:
            return 0
        from .exact_linalg import rational_rank

        return rational_rank(self.generator_matrix())

    def generator_matrix(self) -> IntMatrix:
        """Generators as columns of an ambient_dim x len(generators) matrix."""
        return IntMatrix.from_columns(self.generators, self.ambient_dim)


class HRep(NamedTuple):
    """Halfspace representation: <m, x> >= 0 and <m, x> = 0 constraint rows."""

    inequalities: tuple[tuple[int, ...], ...]
    equalities: tuple[tuple[int, ...], ...]


class Violation(NamedTuple):
    code: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Violation, ...]
    warnings: tuple[Violation, ...]

    @property
    def valid(self) -> bool:
        return not self.errors

    def lines(self) -> list[str]:
        out = [f"error[{v.code}]: {v.detail}" for v in self.errors]
        out += [f"warning[{v.code}]: {v.detail}" for v in self.warnings]
        return out


@dataclass(frozen=True)
class Fan:
    """A fan: global primitive rays plus the maximal cones as ray-index tuples.

    Rays are normalized to primitive at ingestion (the indices of rescaled
    input rays are kept for validate_fan to warn about). Structural breakage
    (bad indices, wrong vector lengths) raises InvalidFanError immediately;
    the fan axioms themselves are checked by validate_fan.
    """

    ambient_dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]
    nonprimitive_input: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.ambient_dim < 1:
            raise InvalidFanError("ambient dimension must be positive")
        rays = []
        rescaled = []
        for i, r in enumerate(self.rays):
            if len(r) != self.ambient_dim:
                raise InvalidFanError(f"ray {i} has length {len(r)}, expected {self.ambient_dim}")
            p = primitive(r)
            if p != tuple(r):
                rescaled.append(i)
            rays.append(p)
        cones = []
        for k, c in enumerate(self.max_cones):
            idx = tuple(int(i) for i in c)
            if len(set(idx)) != len(idx):
                raise InvalidFanError(f"maximal cone {k} repeats a ray index")
            for i in idx:
                if not 0 <= i < len(rays):
                    raise InvalidFanError(f"maximal cone {k} refers to missing ray {i}")
            cones.append(idx)
        if not cones:
            raise InvalidFanError("a fan needs at least one maximal cone")
        object.__setattr__(self, "rays", tuple(rays))
        object.__setattr__(self, "max_cones", tuple(cones))
        object.__setattr__(self, "nonprimitive_input", tuple(rescaled))

    def max_cone(self, k: int) -> Cone:
        """The k-th maximal cone, generators in the listed ray order."""
        return Cone(self.ambient_dim, tuple(self.rays[i] for i in self.max_cones[k]))


def is_smooth_cone(c: Cone) -> bool:
    """True iff the generators are independent and extend to a lattice basis.

    Checked via the Smith normal form of the generator matrix: the cone is
    smooth iff there are exactly len(generators) invariant factors, all 1.
    """
    d = len(c.generators)
    if d == 0:
        return True
    if d > c.ambient_dim:
        return False
    _, snf, _ = smith_normal_form(c.generator_matrix())
    factors = [snf[i, i] for i in range(d)]
    return all(f == 1 for f in factors)


def dual_frame(c: Cone) -> tuple[IntMatrix, IntMatrix, HRep]:
    """Frame (r, s, h) of a smooth full-dimensional cone.

    r has the generators as columns, s = r^-1, and the rows of s are the
    dual basis covectors: x lies in the cone iff s @ x >= 0 componentwise.
    """
    if not is_smooth_cone(c):
        raise NotSmoothError("dual frame needs a smooth cone")
    if len(c.generators) != c.ambient_dim:
        raise NotFullDimensionalError(
            f"cone has dimension {len(c.generators)} in ambient {c.ambient_dim}"
        )
    r = c.generator_matrix()
    s = unimodular_inverse(r)
    return r, s, HRep(inequalities=s.entries, equalities=())


def extend_to_basis(c: Cone) -> IntMatrix:
    """Unimodular matrix whose first len(generators) columns are the generators.

    Realizes "the generators are part of a lattice basis" constructively via
    the Smith normal form, so the completion is deterministic.
    """
    if not is_smooth_cone(c):
        raise NotSmoothError("only smooth cones extend to a basis")
    n = c.ambient_dim
    d = len(c.generators)
    if d == 0:
        return IntMatrix.identity(n)
    u, _, _ = smith_normal_form(c.generator_matrix())
    uinv = unimodular_inverse(u)
    columns = list(c.generators) + [uinv.column(j) for j in range(d, n)]
    ext = IntMatrix.from_columns(columns, n)
    if not ext.is_unimodular():  # cannot happen for a smooth cone
        raise NotSmoothError("basis completion failed")
    return ext


def cone_faces(c: Cone) -> list[Cone]:
    """All faces of a smooth cone: one per generator subset, {0} and c included."""
    if not is_smooth_cone(c):
        raise NotSmoothError("face enumeration by generator subsets needs a smooth cone")
    faces = []
    for size in range(len(c.generators) + 1):
        for combo in combinations(range(len(c.generators)), size):
            faces.append(Cone(c.ambient_dim, tuple(c.generators[i] for i in combo)))
    return faces


def _extended_hrep(c: Cone) -> HRep:
    """H-representation of a smooth cone of any dimension.

    Uses the inverse of the extended frame: the first dim rows constrain with
    >= 0, the remaining rows cut out the linear span with = 0.
    """
    d = len(c.generators)
    s = unimodular_inverse(extend_to_basis(c))
    return HRep(inequalities=s.entries[:d], equalities=s.entries[d:])


def cone_contains(c: Cone, x: Sequence[int]) -> bool:
    """Exact membership of a lattice (or rational) point in a smooth cone."""
    h = _extended_hrep(c)
    return all(_dot(row, x) >= 0 for row in h.inequalities) and all(
        _dot(row, x) == 0 for row in h.equalities
    )


def _primitive_from_rational(vec: Sequence[Fraction]) -> tuple[int, ...]:
    lcm = 1
    for e in vec:
        lcm = lcm * e.denominator // math.gcd(lcm, e.denominator)
    return primitive([int(e * lcm) for e in vec])


def _extreme_rays(
    n: int,
    inequalities: Sequence[Sequence[int]],
    equalities: Sequence[Sequence[int]],
) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {x : ineqs @ x >= 0, eqs @ x = 0}.

    Works inside the kernel of the equalities and enumerates candidate rays
    as 1-dimensional kernels of (d-1)-subsets of the projected inequalities;
    for a pointed cone this enumeration is exhaustive. Desk scale only.
    """
    if equalities:
        basis = rational_kernel(RatMatrix.from_rows(equalities, n))
    else:
        basis = tuple(
            tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
        )
    d = len(basis)
    if d == 0:
        return []
    projected = [tuple(_dot(q, b) for b in basis) for q in inequalities]

    found: set[tuple[int, ...]] = set()
    for subset in combinations(range(len(projected)), d - 1):
        rows = [projected[i] for i in subset]
        kernel = rational_kernel(RatMatrix.from_rows(rows, d)) if rows else (
            tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d))
        )
        if len(kernel) != 1:
            continue
        w = kernel[0]
        pairings = [_dot(row, w) for row in projected]
        nonneg = all(p >= 0 for p in pairings)
        nonpos = all(p <= 0 for p in pairings)
        if nonneg and nonpos:
            raise ValueError("cone contains a line; inputs were not strongly convex")
        if nonpos:
            w = tuple(-x for x in w)
        elif not nonneg:
            continue
        ray = tuple(sum((w[j] * basis[j][i] for j in range(d)), Fraction(0)) for i in range(n))
        found.add(_primitive_from_rational(ray))
    return sorted(found)


def intersect_cones(c1: Cone, c2: Cone) -> list[tuple[int, ...]]:
    """Primitive ray generators of the intersection of two smooth cones.

    Computed exactly from the combined H-representations; the result is
    deduplicated and sorted. The empty list means the intersection is {0}.
    """
    if c1.ambient_dim != c2.ambient_dim:
        raise ValueError("cones live in different lattices")
    h1 = _extended_hrep(c1)
    h2 = _extended_hrep(c2)
    return _extreme_rays(
        c1.ambient_dim,
        tuple(h1.inequalities) + tuple(h2.inequalities),
        tuple(h1.equalities) + tuple(h2.equalities),
    )


@lru_cache(maxsize=None)
def validate_fan(f: Fan) -> ValidationReport:
    """Check the fan axioms and report all violations.

    Errors: zero or duplicate rays, non-smooth maximal cones, a maximal cone
    contained in another, and pairs of maximal cones whose intersection is
    not the cone spanned by their shared rays. Rescaled input rays are
    warnings, not errors.
    """
    errors: list[Violation] = []
    warnings = [
        Violation("NonPrimitiveRay", f"ray {i} was rescaled to a primitive vector")
        for i in f.nonprimitive_input
    ]

    for i, r in enumerate(f.rays):
        if all(x == 0 for x in r):
            errors.append(Violation("ZeroRay", f"ray {i} is the zero vector"))
    seen: dict[tuple[int, ...], int] = {}
    for i, r in enumerate(f.rays):
        if r in seen:
            errors.append(Violation("DuplicateRay", f"rays {seen[r]} and {i} coincide"))
        else:
            seen[r] = i

    cones: dict[int, Cone] = {}
    for k in range(len(f.max_cones)):
        try:
            c = f.max_cone(k)
        except ValueError as exc:
            errors.append(Violation("BadCone", f"maximal cone {k}: {exc}"))
            continue
        if not is_smooth_cone(c):
            errors.append(
                Violation("NotSmooth", f"maximal cone {k} (rays {f.max_cones[k]}) is not smooth")
            )
            continue
        cones[k] = c

    sets = {k: frozenset(f.max_cones[k]) for k in range(len(f.max_cones))}
    for k1, k2 in combinations(range(len(f.max_cones)), 2):
        if sets[k1] <= sets[k2] or sets[k2] <= sets[k1]:
            errors.append(
                Violation("RedundantMaxCone", f"maximal cone {k1} and {k2} are nested")
            )

    for k1, k2 in combinations(sorted(cones), 2):
        shared = {f.rays[i] for i in sets[k1] & sets[k2]}
        meet = set(intersect_cones(cones[k1], cones[k2]))
        if meet != shared:
            errors.append(
                Violation(
                    "FaceMismatch",
                    f"maximal cones {k1} and {k2} intersect in {sorted(meet)}, "
                    f"not in their shared rays {sorted(shared)}",
                )
            )

    return ValidationReport(errors=tuple(errors), warnings=tuple(warnings))


def is_complete(f: Fan) -> bool:
    """True iff the support of the fan is the whole ambient space.

    For n >= 2: every maximal cone is full-dimensional and each of its
    facets is shared by exactly two maximal cones. For n = 1: both rays
    +1 and -1 are present. Raises InvalidFanError on an invalid fan.
    """
    report = validate_fan(f)
    if not report.valid:
        raise InvalidFanError("; ".join(v.detail for v in report.errors))
    n = f.ambient_dim
    if n == 1:
        values = {f.rays[c[0]][0] for c in f.max_cones if c}
        return 1 in values and -1 in values
    if any(len(c) != n for c in f.max_cones):
        return False
    facet_count: dict[frozenset[int], int] = {}
    for c in f.max_cones:
        for facet in combinations(sorted(c), n - 1):
            key = frozenset(facet)
            facet_count[key] = facet_count.get(key, 0) + 1
    return all(count == 2 for count in facet_count.values())


def halfspace_ray(c: Cone, a: Sequence[int]) -> Optional[int]:
    """Index of a generator lying in the halfspace {x : <a, x> <= 0}.

    Returns the first generator pairing strictly negatively with a; if none
    does but the cone still meets the halfspace off the origin (some
    generator pairs to exactly 0), returns the first such index. Returns
    None when the cone meets the halfspace only in {0}.
    """
    pairings = [_dot(a, g) for g in c.generators]
    for i, p in enumerate(pairings):
        if p < 0:
            return i
    for i, p in enumerate(pairings):
        if p == 0:
            return i
    return None


GALLERY_NAMES = (
    "projective_space",
    "affine_space",
    "product_p1_p1",
    "hirzebruch",
    "blowup_c2",
)


def builtin_fan(name: str, params: Sequence[int] = ()) -> Fan:
    """Standard smooth fans by name.

    projective_space(n) and hirzebruch(a) are complete; affine_space(n) and
    blowup_c2 are not. Raises UnknownNameError / BadParamsError.
    """
    params = tuple(int(p) for p in params)

    def one_param(minimum: int) -> int:
        if len(params) != 1:
            raise BadParamsError(f"{name} takes exactly one integer parameter")
        if params[0] < minimum:
            raise BadParamsError(f"{name} parameter must be >= {minimum}, got {params[0]}")
        return params[0]

    def no_params() -> None:
        if params:
            raise BadParamsError(f"{name} takes no parameters")

    def e(i: int, n: int) -> tuple[int, ...]:
        return tuple(int(j == i) for j in range(n))

    if name == "projective_space":
        n = one_param(1)
        rays = [e(i, n) for i in range(n)] + [tuple(-1 for _ in range(n))]
        cones = [tuple(c) for c in combinations(range(n + 1), n)]
        return Fan(n, tuple(rays), tuple(cones))
    if name == "affine_space":
        n = one_param(1)
        return Fan(n, tuple(e(i, n) for i in range(n)), (tuple(range(n)),))
    if name == "product_p1_p1":
        no_params()
        rays = ((1, 0), (0, 1), (-1, 0), (0, -1))
        return Fan(2, rays, ((0, 1), (1, 2), (2, 3), (3, 0)))
    if name == "hirzebruch":
        a = one_param(0)
        rays = ((1, 0), (0, 1), (-1, a), (0, -1))
        return Fan(2, rays, ((0, 1), (1, 2), (2, 3), (3, 0)))
    if name == "blowup_c2":
        no_params()
        rays = ((1, 0), (1, 1), (0, 1))
        return Fan(2, rays, ((0, 1), (1, 2)))
    raise UnknownNameError(f"no gallery fan named {name!r}")


@lru_cache(maxsize=None)
def chart_frame(f: Fan, k: int) -> IntMatrix:
    """Unimodular frame of maximal cone k: its rays (in listed order) come
    first as columns, completed to a lattice basis when the cone is not
    full-dimensional."""
    return extend_to_basis(f.max_cone(k))
