"""Vertex/halfspace duality for small rational polytopes.

Facets are found by brute force: every affinely independent subset of
``h`` points (``h`` the hull dimension) spans a candidate hyperplane, which
is kept when all points lie weakly on one side of it.  This is exponential
but exact, and the inputs here have at most a few dozen points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, SearchError, SizeError, SpinCorrError
from .exact_lp import Infeasible, membership, membership_system
from .spin_core import (
    MAX_N,
    BellInequality,
    CorrelationMatrix,
    UnitDiagonalMatrix,
    as_fraction,
    check_bell,
    extreme_points,
    random_rational,
)

MAX_FACET_POINTS = 64
MAX_FACET_DIM = 10

Vector = tuple[Fraction, ...]


def _vector(values) -> Vector:
    return tuple(as_fraction(v) for v in values)


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns, in exact arithmetic."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c]
        m[r] = [v / inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """A basis of ``{x : rows @ x = 0}``."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def canonical_scaling(coeffs: Sequence[Fraction], allow_flip: bool = False) -> Vector:
    """Scale so the first nonzero coefficient has absolute value 1.

    Positive scaling only, unless ``allow_flip`` (for equalities), in which
    case the first nonzero coefficient becomes exactly ``+1``.
    """
    coeffs = _vector(coeffs)
    lead = next((v for v in coeffs if v), None)
    if lead is None:
        raise SpinCorrError("cannot scale the zero vector")
    scale = lead if allow_flip else abs(lead)
    return tuple(v / scale for v in coeffs)


@dataclass(frozen=True)
class VRepresentation:
    """A finite point set in ``Q^dim``; its convex hull is the polytope."""

    dim: int
    points: tuple[Vector, ...]

    def __post_init__(self):
        points = tuple(_vector(p) for p in self.points)
        for p in points:
            if len(p) != self.dim:
                raise DimensionError(f"point {p} does not have dimension {self.dim}")
        if len(set(points)) != len(points):
            raise SpinCorrError("points must be distinct")
        object.__setattr__(self, "points", points)

    @classmethod
    def from_points(cls, points) -> "VRepresentation":
        """Build from any iterable of points, dropping duplicates in order."""
        unique = list(dict.fromkeys(_vector(p) for p in points))
        if not unique:
            raise SpinCorrError("at least one point is required")
        return cls(len(unique[0]), tuple(unique))

    @classmethod
    def of_correlation_polytope(cls, n: int) -> "VRepresentation":
        """Extreme points of the spin correlation polytope as upper triangles."""
        return cls(n * (n - 1) // 2, tuple(v.upper for v in extreme_points(n)))


@dataclass(frozen=True)
class HalfSpace:
    """``normal . x + offset >= 0``, canonically scaled."""

    normal: Vector
    offset: Fraction

    def __post_init__(self):
        normal = _vector(self.normal)
        if not any(normal):
            raise SpinCorrError("halfspace normal must be nonzero")
        scaled = canonical_scaling((self.offset,) + normal)
        object.__setattr__(self, "offset", scaled[0])
        object.__setattr__(self, "normal", scaled[1:])

    def value(self, x) -> Fraction:
        return _dot(self.normal, x) + self.offset

    def key(self):
        return (self.offset,) + self.normal

    @classmethod
    def from_bell(cls, ineq: BellInequality, n: int) -> "HalfSpace":
        offset, normal = ineq.coefficients(n)
        return cls(normal, Fraction(offset))


@dataclass(frozen=True)
class Equality:
    """``normal . x + offset == 0``, scaled so the leading coefficient is 1."""

    normal: Vector
    offset: Fraction

    def __post_init__(self):
        scaled = canonical_scaling((self.offset,) + _vector(self.normal), allow_flip=True)
        object.__setattr__(self, "offset", scaled[0])
        object.__setattr__(self, "normal", scaled[1:])

    def value(self, x) -> Fraction:
        return _dot(self.normal, x) + self.offset


@dataclass(frozen=True)
class HRepresentation:
    dim: int
    halfspaces: tuple[HalfSpace, ...]
    affine_equalities: tuple[Equality, ...] = ()

    def __post_init__(self):
        for h in self.halfspaces + self.affine_equalities:
            if len(h.normal) != self.dim:
                raise DimensionError(f"constraint has dimension {len(h.normal)}, expected {self.dim}")
        if len(set(self.halfspaces)) != len(self.halfspaces):
            raise SpinCorrError("duplicate halfspaces")


@dataclass(frozen=True)
class AffineHull:
    """Result of :func:`affine_hull_dim`."""

    dim: int
    directions: tuple[Vector, ...]
    independent: tuple[int, ...] = field(default=())

    def __int__(self):
        return self.dim


def affine_hull_dim(v: VRepresentation) -> AffineHull:
    """Dimension of the affine hull, a basis of its direction space and the
    indices of ``dim + 1`` affinely independent points (the first is 0)."""
    if not v.points:
        raise SpinCorrError("affine hull of an empty set is undefined")
    base = v.points[0]
    chosen = [0]
    directions: list[list[Fraction]] = []
    for idx, p in enumerate(v.points[1:], start=1):
        d = [a - b for a, b in zip(p, base)]
        if len(rref(directions + [d], v.dim)[1]) > len(directions):
            directions.append(d)
            chosen.append(idx)
    red, _ = rref(directions, v.dim)
    return AffineHull(len(directions), tuple(tuple(r) for r in red), tuple(chosen))


def is_simplex(v: VRepresentation) -> bool:
    return len(v.points) == affine_hull_dim(v).dim + 1


def simplex_count_identity(n: int) -> bool:
    """Whether ``2^(n-1) == n(n-1)/2 + 1``: vertex count of the correlation
    polytope equals the point count of a full-dimensional simplex."""
    if n < 2:
        raise SpinCorrError(f"n must be at least 2, got {n}")
    return 2 ** (n - 1) == n * (n - 1) // 2 + 1


def facet_enumerate(v: VRepresentation) -> HRepresentation:
    """Facet-defining halfspaces and affine-hull equalities of ``conv(v)``.

    Halfspace normals are taken inside the direction space of the hull, so
    each facet has a unique canonical form even for lower-dimensional input.
    The result is sorted by ``(offset, normal)``.
    """
    if len(v.points) > MAX_FACET_POINTS or v.dim > MAX_FACET_DIM:
        raise SizeError(
            f"facet enumeration is limited to {MAX_FACET_POINTS} points in "
            f"dimension {MAX_FACET_DIM}; got {len(v.points)} in {v.dim}"
        )
    hull = affine_hull_dim(v)
    base = v.points[0]

    equalities = []
    for e in nullspace(hull.directions, v.dim):
        equalities.append(Equality(tuple(e), -_dot(e, base)))
    equalities.sort(key=lambda q: (q.offset,) + q.normal)

    h = hull.dim
    if h == 0:
        return HRepresentation(v.dim, (), tuple(equalities))

    # local coordinates q = D p; D is injective on the hull's direction space
    D = hull.directions
    local = [tuple(_dot(row, p) for row in D) for p in v.points]

    found: dict[tuple, HalfSpace] = {}
    for subset in itertools.combinations(range(len(local)), h):
        # hyperplane t . q + c = 0 through the subset
        system = [[Fraction(1)] + list(local[i]) for i in subset]
        ns = nullspace(system, h + 1)
        if len(ns) != 1:
            continue
        c, t = ns[0][0], ns[0][1:]
        values = [c + _dot(t, q) for q in local]
        if all(x >= 0 for x in values):
            sign = 1
        elif all(x <= 0 for x in values):
            sign = -1
        else:
            continue
        normal = tuple(sign * sum((t[r] * D[r][col] for r in range(h)), Fraction(0))
                       for col in range(v.dim))
        hs = HalfSpace(normal, sign * c)
        found.setdefault(hs.key(), hs)
    halfspaces = tuple(found[k] for k in sorted(found))
    return HRepresentation(v.dim, halfspaces, tuple(equalities))


def h_membership(h: HRepresentation, x) -> bool:
    x = _vector(x)
    if len(x) != h.dim:
        raise DimensionError(f"point has dimension {len(x)}, expected {h.dim}")
    return (all(e.value(x) == 0 for e in h.affine_equalities)
            and all(hs.value(x) >= 0 for hs in h.halfspaces))


def tight_halfspaces(h: HRepresentation, x) -> list[HalfSpace]:
    """Halfspaces that hold with equality at ``x``."""
    x = _vector(x)
    return [hs for hs in h.halfspaces if hs.value(x) == 0]


@dataclass(frozen=True)
class GapWitness:
    """A Bell-satisfying matrix outside the correlation polytope."""

    sigma: CorrelationMatrix
    certificate: Infeasible
    strategy: str


def _qualifies(sigma: UnitDiagonalMatrix) -> Optional[Infeasible]:
    if check_bell(sigma):
        return None
    result = membership(sigma)
    return result if isinstance(result, Infeasible) else None


def all_equal_candidates():
    """Constant off-diagonal values in [-1/3, 0): ``-k/d`` for ``d`` in
    10, 100, 1000, scanned from the most negative value upward."""
    seen = set()
    for d in (10, 100, 1000):
        for k in range(d // 3, 0, -1):
            c = Fraction(-k, d)
            if c >= Fraction(-1, 3) and c not in seen:
                seen.add(c)
                yield c


def gap_search(n: int, seed: int = 0, random_trials: int = 2000) -> GapWitness:
    """Find a matrix satisfying every Bell inequality yet outside the polytope.

    The all-equal family is scanned first; seeded random rational points
    are the fallback.  The returned certificate has been verified exactly.
    """
    if not isinstance(n, int) or not 5 <= n <= MAX_N:
        raise SizeError(f"gap search needs 5 <= n <= {MAX_N}, got {n!r}")
    for c in all_equal_candidates():
        sigma = CorrelationMatrix.constant(n, c)
        cert = _qualifies(sigma)
        if cert is not None:
            return GapWitness(sigma, cert, "all-equal")
    rng = np.random.default_rng(seed)
    size = n * (n - 1) // 2
    for _ in range(random_trials):
        upper = [random_rational(rng, Fraction(-1), Fraction(1), 20) for _ in range(size)]
        sigma = CorrelationMatrix(n, tuple(upper))
        cert = _qualifies(sigma)
        if cert is not None:
            return GapWitness(sigma, cert, "random")
    raise SearchError(f"no Bell-satisfying non-member found for n={n}")


def verify_gap_witness(w: GapWitness) -> bool:
    """Independent exact re-check of both halves of a gap witness."""
    return not check_bell(w.sigma) and w.certificate.verify(membership_system(w.sigma))
