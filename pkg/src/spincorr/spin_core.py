"""Spin correlation matrices, their extreme points and Bell inequalities.

All correctness-bearing arithmetic uses :class:`fractions.Fraction`.

Ordering conventions
--------------------
* Upper-triangle entries are stored in lexicographic ``(i, j)`` order,
  ``(1,2), (1,3), ..., (1,n), (2,3), ...`` with 1-based indices.
* A sign class ``{w, -w}`` is represented by the member whose first entry
  is ``+1``.  Classes are numbered by binary counting over the remaining
  entries: class ``c`` has ``w[k] = -1`` exactly when bit ``k - 1`` of ``c``
  is set (0-based ``k >= 1``).  For ``n = 3`` this yields
  ``(+,+,+), (+,-,+), (+,+,-), (+,-,-)``, i.e. the tetrahedron vertices in
  the classical order.  Bell sign patterns use the same order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    AffineConstraintError,
    DimensionError,
    ProbabilityError,
    SizeError,
    SpinCorrError,
)

MAX_N = 12

#: The 4x4 sign matrix mapping ``(1, s12, s13, s23)`` to the four Bell
#: left-hand sides.  Its columns are the tetrahedron vertices.
BELL_MATRIX: tuple[tuple[int, ...], ...] = (
    (1, 1, 1, 1),
    (1, -1, 1, -1),
    (1, 1, -1, -1),
    (1, -1, -1, 1),
)


def as_fraction(value) -> Fraction:
    """Convert ``int``, ``Fraction`` or a ``"p/q"`` string to a Fraction.

    Floats are refused so that rounding cannot leak into exact paths.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _check_guard(n: int) -> None:
    if not isinstance(n, int) or not 1 <= n <= MAX_N:
        raise SizeError(f"n must be an integer in [1, {MAX_N}], got {n!r}")


def upper_pairs(n: int) -> list[tuple[int, int]]:
    """1-based index pairs ``(i, j)``, ``i < j``, in storage order."""
    return list(itertools.combinations(range(1, n + 1), 2))


def pair_index(i: int, j: int, n: int) -> int:
    """Position of ``sigma_ij`` inside the upper-triangle tuple."""
    if i > j:
        i, j = j, i
    if not 1 <= i < j <= n:
        raise DimensionError(f"invalid pair ({i}, {j}) for n={n}")
    # rows 1..i-1 contribute (n-1) + (n-2) + ... + (n-i+1) entries
    return (i - 1) * n - (i - 1) * i // 2 + (j - i - 1)


@dataclass(frozen=True)
class SignVector:
    """A point of ``{-1, +1}^n``."""

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries:
            raise DimensionError("a sign vector needs at least one entry")
        for e in entries:
            if e not in (1, -1) or isinstance(e, bool):
                raise SpinCorrError(f"sign entries must be +1 or -1, got {e!r}")
        object.__setattr__(self, "entries", tuple(int(e) for e in entries))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __neg__(self) -> "SignVector":
        return SignVector(tuple(-e for e in self.entries))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    @property
    def is_canonical(self) -> bool:
        return self.entries[0] == 1

    def canonical(self) -> "SignVector":
        return self if self.is_canonical else -self

    def class_index(self) -> int:
        """Index of the sign class ``{w, -w}`` in class order."""
        w = self.canonical().entries
        return sum(1 << (k - 1) for k in range(1, len(w)) if w[k] == -1)

    def outer_upper(self) -> tuple[int, ...]:
        """Upper triangle of the rank-one matrix ``w w^T``."""
        w = self.entries
        return tuple(w[i - 1] * w[j - 1] for i, j in upper_pairs(len(w)))

    def __str__(self):
        return "(" + ",".join("+" if e > 0 else "-" for e in self.entries) + ")"


def sign_classes(n: int) -> list[SignVector]:
    """Canonical representatives of the ``2^(n-1)`` sign classes, in class order."""
    _check_guard(n)
    return [
        SignVector((1,) + tuple(-1 if (c >> (k - 1)) & 1 else 1 for k in range(1, n)))
        for c in range(1 << (n - 1))
    ]


@dataclass(frozen=True)
class UnitDiagonalMatrix:
    """Symmetric matrix with unit diagonal, stored by its upper triangle.

    Entries are not range checked; use :class:`CorrelationMatrix` for that.
    """

    n: int
    upper: tuple[Fraction, ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise DimensionError(f"n must be a positive integer, got {self.n!r}")
        upper = tuple(as_fraction(v) for v in self.upper)
        expected = self.n * (self.n - 1) // 2
        if len(upper) != expected:
            raise DimensionError(
                f"n={self.n} needs {expected} upper entries, got {len(upper)}"
            )
        object.__setattr__(self, "upper", upper)

    @property
    def is_correlation(self) -> bool:
        return all(-1 <= v <= 1 for v in self.upper)

    def entry(self, i: int, j: int) -> Fraction:
        """Entry ``sigma_ij`` with 1-based indices."""
        if i == j:
            if not 1 <= i <= self.n:
                raise DimensionError(f"index {i} out of range for n={self.n}")
            return Fraction(1)
        return self.upper[pair_index(i, j, self.n)]

    def full(self) -> list[list[Fraction]]:
        return [
            [self.entry(i, j) for j in range(1, self.n + 1)]
            for i in range(1, self.n + 1)
        ]

    @classmethod
    def from_full(cls, rows: Sequence[Sequence]):
        n = len(rows)
        m = [[as_fraction(v) for v in row] for row in rows]
        if any(len(row) != n for row in m):
            raise DimensionError("matrix must be square")
        for i in range(n):
            if m[i][i] != 1:
                raise SpinCorrError("diagonal entries must equal 1")
            for j in range(i + 1, n):
                if m[i][j] != m[j][i]:
                    raise SpinCorrError("matrix must be symmetric")
        return cls(n, tuple(m[i - 1][j - 1] for i, j in upper_pairs(n)))

    @classmethod
    def identity(cls, n: int):
        return cls(n, (Fraction(0),) * (n * (n - 1) // 2))

    @classmethod
    def constant(cls, n: int, value):
        """Matrix with every off-diagonal entry equal to ``value``."""
        return cls(n, (as_fraction(value),) * (n * (n - 1) // 2))


class CorrelationMatrix(UnitDiagonalMatrix):
    """Unit-diagonal symmetric matrix with off-diagonal entries in [-1, 1]."""

    def __post_init__(self):
        super().__post_init__()
        for v in self.upper:
            if not -1 <= v <= 1:
                raise SpinCorrError(f"correlation {v} outside [-1, 1]")


def _matrix(n: int, upper) -> UnitDiagonalMatrix:
    upper = tuple(as_fraction(v) for v in upper)
    if all(-1 <= v <= 1 for v in upper):
        return CorrelationMatrix(n, upper)
    return UnitDiagonalMatrix(n, upper)


def extreme_points(n: int) -> list[CorrelationMatrix]:
    """The ``2^(n-1)`` rank-one matrices ``w w^T``, one per sign class."""
    _check_guard(n)
    return [CorrelationMatrix(n, w.outer_upper()) for w in sign_classes(n)]


@dataclass(frozen=True)
class BellInequality:
    """``1 + e_i e_j s_ij + e_i e_k s_ik + e_j e_k s_jk >= 0``.

    ``signs`` is normalised so that the first sign is ``+1``.
    """

    triple: tuple[int, int, int]
    signs: tuple[int, int, int] = (1, 1, 1)

    def __post_init__(self):
        triple = tuple(int(t) for t in self.triple)
        if len(triple) != 3 or not 1 <= triple[0] < triple[1] < triple[2]:
            raise DimensionError(f"triple must satisfy 1 <= i < j < k, got {triple}")
        signs = SignVector(tuple(self.signs))
        if signs.n != 3:
            raise DimensionError("a Bell inequality needs exactly three signs")
        object.__setattr__(self, "triple", triple)
        object.__setattr__(self, "signs", signs.canonical().entries)

    def terms(self) -> list[tuple[tuple[int, int], int]]:
        """``((i, j), e_i * e_j)`` for the three pairs of the triple."""
        (i, j, k), (a, b, c) = self.triple, self.signs
        return [((i, j), a * b), ((i, k), a * c), ((j, k), b * c)]

    def coefficients(self, n: int) -> tuple[int, tuple[int, ...]]:
        """``(offset, normal)`` of the inequality over the upper-triangle space."""
        if self.triple[2] > n:
            raise DimensionError(f"{self} does not fit n={n}")
        normal = [0] * (n * (n - 1) // 2)
        for (i, j), s in self.terms():
            normal[pair_index(i, j, n)] = s
        return 1, tuple(normal)

    def sort_key(self):
        return self.triple, SignVector(self.signs).class_index()

    def __str__(self):
        parts = ["1"]
        for (i, j), s in self.terms():
            parts.append(f"{'+' if s > 0 else '-'} s{i}{j}")
        return " ".join(parts) + " >= 0"


def bell_system(n: int) -> list[BellInequality]:
    """All ``4 * C(n, 3)`` Bell inequalities, sorted by triple then signs."""
    if not isinstance(n, int) or n < 1:
        raise SizeError(f"n must be a positive integer, got {n!r}")
    patterns = [w.entries for w in sign_classes(3)]
    return [
        BellInequality(t, s)
        for t in itertools.combinations(range(1, n + 1), 3)
        for s in patterns
    ]


def evaluate_bell(ineq: BellInequality, sigma: UnitDiagonalMatrix) -> Fraction:
    """Exact left-hand side of ``ineq`` at ``sigma``."""
    if ineq.triple[2] > sigma.n:
        raise DimensionError(f"{ineq} references index {ineq.triple[2]} > n={sigma.n}")
    return 1 + sum(s * sigma.entry(i, j) for (i, j), s in ineq.terms())


def check_bell(sigma: UnitDiagonalMatrix) -> list[BellInequality]:
    """Bell inequalities strictly violated by ``sigma`` (empty if none)."""
    return [q for q in bell_system(sigma.n) if evaluate_bell(q, sigma) < 0]


def _fraction_tuple(values, size: int, what: str) -> tuple[Fraction, ...]:
    values = tuple(as_fraction(v) for v in values)
    if len(values) != size:
        raise DimensionError(f"{what} needs {size} components, got {len(values)}")
    return values


@dataclass(frozen=True)
class MomentVector:
    """``(1, s12, s13, s23)`` for a 3x3 unit-diagonal matrix."""

    x: tuple[Fraction, ...]

    def __post_init__(self):
        x = _fraction_tuple(self.x, 4, "a moment vector")
        if x[0] != 1:
            raise SpinCorrError("first moment component must be 1")
        object.__setattr__(self, "x", x)


@dataclass(frozen=True)
class BellEvaluation:
    """The four Bell left-hand sides for ``n = 3``."""

    y: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "y", _fraction_tuple(self.y, 4, "a Bell evaluation"))

    @property
    def nonnegative(self) -> bool:
        return all(v >= 0 for v in self.y)


@dataclass(frozen=True)
class BarycentricCoords:
    """Affine coordinates with respect to the four tetrahedron vertices."""

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        w = _fraction_tuple(self.weights, 4, "barycentric coordinates")
        if sum(w) != 1:
            raise AffineConstraintError(f"barycentric weights sum to {sum(w)}, not 1")
        object.__setattr__(self, "weights", w)

    @property
    def nonnegative(self) -> bool:
        return all(v >= 0 for v in self.weights)


def _apply_bell_matrix(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in BELL_MATRIX)


def moment_vector(sigma: UnitDiagonalMatrix) -> MomentVector:
    if sigma.n != 3:
        raise DimensionError(f"moment vectors are defined for n=3 only, got n={sigma.n}")
    return MomentVector((Fraction(1),) + sigma.upper)


def bell_transform(x: MomentVector) -> BellEvaluation:
    return BellEvaluation(_apply_bell_matrix(x.x))


def barycentric3(sigma: UnitDiagonalMatrix) -> BarycentricCoords:
    """Barycentric coordinates of a 3x3 matrix w.r.t. the tetrahedron vertices.

    Since ``A @ A == 4 I``, the coordinates are ``A x / 4``; ``sigma`` lies
    in the tetrahedron iff all of them are nonnegative.
    """
    y = bell_transform(moment_vector(sigma)).y
    return BarycentricCoords(tuple(v / 4 for v in y))


def compose3(weights) -> UnitDiagonalMatrix:
    """Affine combination of the four tetrahedron vertices.

    Returns a :class:`CorrelationMatrix` when every entry lies in [-1, 1],
    otherwise a bare :class:`UnitDiagonalMatrix` (``is_correlation`` False).
    """
    if isinstance(weights, BarycentricCoords):
        lam = weights.weights
    else:
        lam = _fraction_tuple(weights, 4, "barycentric coordinates")
    x = _apply_bell_matrix(lam)
    if x[0] != 1:
        raise AffineConstraintError(f"barycentric weights sum to {x[0]}, not 1")
    return _matrix(3, x[1:])


@dataclass(frozen=True, eq=True)
class JointSpinDistribution:
    """Sign-symmetric probability law on ``{-1, +1}^n``.

    ``weights`` maps :class:`SignVector` atoms to exact probabilities; atoms
    of weight zero are dropped.
    """

    n: int
    weights: Mapping[SignVector, Fraction] = field(compare=False)

    def __post_init__(self):
        clean: dict[SignVector, Fraction] = {}
        for atom, w in self.weights.items():
            atom = atom if isinstance(atom, SignVector) else SignVector(tuple(atom))
            if atom.n != self.n:
                raise DimensionError(f"atom {atom} does not have length {self.n}")
            w = as_fraction(w)
            if w < 0:
                raise ProbabilityError(f"negative weight {w} on {atom}")
            if w:
                clean[atom] = clean.get(atom, Fraction(0)) + w
        if sum(clean.values()) != 1:
            raise ProbabilityError(f"weights sum to {sum(clean.values())}, not 1")
        for atom, w in clean.items():
            if clean.get(-atom, 0) != w:
                raise ProbabilityError(f"weight of {atom} differs from its negation")
        ordered = dict(sorted(clean.items(), key=lambda kv: kv[0].entries, reverse=True))
        object.__setattr__(self, "weights", MappingProxyType(ordered))

    def __eq__(self, other):
        if not isinstance(other, JointSpinDistribution):
            return NotImplemented
        return self.n == other.n and dict(self.weights) == dict(other.weights)

    __hash__ = None

    def weight(self, atom) -> Fraction:
        atom = atom if isinstance(atom, SignVector) else SignVector(tuple(atom))
        return self.weights.get(atom, Fraction(0))

    def marginal_plus(self, i: int) -> Fraction:
        """``P(xi_i = +1)`` with a 1-based index."""
        return sum((w for a, w in self.weights.items() if a[i - 1] == 1), Fraction(0))


def realize(weights: Sequence, n: int) -> JointSpinDistribution:
    """Spin distribution whose correlation matrix is ``sum_c weights[c] w_c w_c^T``.

    Each class weight is split evenly between ``w_c`` and ``-w_c``.
    """
    classes = sign_classes(n)
    lam = [as_fraction(v) for v in weights]
    if len(lam) != len(classes):
        raise DimensionError(f"n={n} has {len(classes)} sign classes, got {len(lam)} weights")
    if any(v < 0 for v in lam):
        raise ProbabilityError("class weights must be nonnegative")
    if sum(lam) != 1:
        raise ProbabilityError(f"class weights sum to {sum(lam)}, not 1")
    atoms: dict[SignVector, Fraction] = {}
    for w, v in zip(classes, lam):
        if v:
            atoms[w] = v / 2
            atoms[-w] = v / 2
    return JointSpinDistribution(n, atoms)


def correlations_of(dist: JointSpinDistribution) -> CorrelationMatrix:
    """Exact ``E[xi xi^T]`` of ``dist``."""
    upper = [Fraction(0)] * (dist.n * (dist.n - 1) // 2)
    for atom, w in dist.weights.items():
        for k, s in enumerate(atom.outer_upper()):
            upper[k] += s * w
    return CorrelationMatrix(dist.n, tuple(upper))


def mixture(weights: Sequence, n: int) -> UnitDiagonalMatrix:
    """``sum_c weights[c] * V_c`` over the extreme points, computed directly."""
    vertices = extreme_points(n)
    lam = [as_fraction(v) for v in weights]
    if len(lam) != len(vertices):
        raise DimensionError(f"expected {len(vertices)} weights, got {len(lam)}")
    upper = [sum((l * v.upper[k] for l, v in zip(lam, vertices)), Fraction(0))
             for k in range(n * (n - 1) // 2)]
    return _matrix(n, upper)


@dataclass(frozen=True)
class SampleEstimate:
    """Monte-Carlo estimate of a correlation matrix."""

    n: int
    sigma_hat: tuple[float, ...]
    stderr: tuple[float, ...]
    count: int
    seed: int
    generator: str = "numpy.random.PCG64"


def sample_correlations(dist: JointSpinDistribution, count: int, seed: int = 0) -> SampleEstimate:
    """Empirical correlations from ``count`` i.i.d. draws of ``dist``.

    Deterministic for a fixed ``seed``.  The standard error of each entry is
    estimated as ``sqrt((1 - s^2) / count)``.
    """
    if not isinstance(count, int) or count < 1:
        raise SpinCorrError(f"count must be a positive integer, got {count!r}")
    if not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise SpinCorrError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    atoms = list(dist.weights)
    probs = np.array([float(w) for w in dist.weights.values()])
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = rng.choice(len(atoms), size=count, p=probs / probs.sum())
    hits = np.bincount(draws, minlength=len(atoms))
    products = np.array([a.outer_upper() for a in atoms], dtype=np.int64).reshape(len(atoms), -1)
    totals = hits @ products
    sigma_hat = tuple(float(Fraction(int(t), count)) for t in totals)
    stderr = tuple(math.sqrt(max(0.0, 1.0 - s * s) / count) for s in sigma_hat)
    return SampleEstimate(dist.n, sigma_hat, stderr, count, seed)


def random_rational(rng, low: Fraction, high: Fraction, denominator: int) -> Fraction:
    """Uniform draw from the grid ``low + k / denominator`` inside [low, high]."""
    steps = int((high - low) * denominator)
    return low + Fraction(int(rng.integers(0, steps + 1)), denominator)


def random_simplex_weights(rng, k: int, denominator: int = 1000,
                           allow_zero: bool = True) -> list[Fraction]:
    """Random exact point of the probability simplex with ``k`` entries."""
    lo = 0 if allow_zero else 1
    raw = [int(v) for v in rng.integers(lo, denominator + 1, size=k)]
    if sum(raw) == 0:
        raw[0] = 1
    total = sum(raw)
    return [Fraction(v, total) for v in raw]


def iter_grid(n_entries: int, step: Fraction) -> Iterable[tuple[Fraction, ...]]:
    """All points of ``[-1, 1]^n_entries`` on the grid of the given step."""
    count = int(2 / step)
    axis = [Fraction(-1) + k * step for k in range(count + 1)]
    return itertools.product(axis, repeat=n_entries)
