"""Exact rational LP feasibility: find ``lam >= 0`` with ``M lam = b``.

The solver is a dense phase-I simplex over :class:`~fractions.Fraction`
with Bland's pivoting rule.  Every answer carries a witness that is checked
again, in exact arithmetic, before it is returned:

* :class:`Feasible` holds a basic solution ``point``.
* :class:`Infeasible` holds a Farkas vector ``y`` with ``y^T M <= 0`` and
  ``y^T b > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import CertificateError, DimensionError, SizeError
from .spin_core import (
    JointSpinDistribution,
    UnitDiagonalMatrix,
    as_fraction,
    extreme_points,
    realize,
)

MAX_COLUMNS = 2**12


@dataclass(frozen=True)
class FeasibilitySystem:
    """``M lam = b``, ``lam >= 0`` with ``M`` of shape ``m x k``."""

    M: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]

    def __post_init__(self):
        M = tuple(tuple(as_fraction(v) for v in row) for row in self.M)
        b = tuple(as_fraction(v) for v in self.b)
        if len(M) != len(b):
            raise DimensionError(f"M has {len(M)} rows but b has {len(b)} entries")
        widths = {len(row) for row in M}
        if len(widths) > 1:
            raise DimensionError("rows of M have different lengths")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "b", b)

    @property
    def m(self) -> int:
        return len(self.M)

    @property
    def k(self) -> int:
        return len(self.M[0]) if self.M else 0


@dataclass(frozen=True)
class Feasible:
    point: tuple[Fraction, ...]

    feasible = True

    def verify(self, system: FeasibilitySystem) -> bool:
        if len(self.point) != system.k or any(v < 0 for v in self.point):
            return False
        return all(
            sum(a * v for a, v in zip(row, self.point)) == rhs
            for row, rhs in zip(system.M, system.b)
        )


@dataclass(frozen=True)
class Infeasible:
    certificate: tuple[Fraction, ...]

    feasible = False

    def verify(self, system: FeasibilitySystem) -> bool:
        y = self.certificate
        if len(y) != system.m:
            return False
        for col in range(system.k):
            if sum(y[r] * system.M[r][col] for r in range(system.m)) > 0:
                return False
        return sum(a * v for a, v in zip(y, system.b)) > 0


FeasibilityResult = Union[Feasible, Infeasible]


def solve_feasibility(system: FeasibilitySystem) -> FeasibilityResult:
    """Decide ``exists lam >= 0: M lam = b`` and return a verified witness.

    Phase I minimises the sum of one artificial variable per row with a
    revised simplex and Bland's rule.  A positive optimum means
    infeasibility; the phase-I duals then form the Farkas certificate.

    Arithmetic is fraction-free: rows are scaled to integers and the basis
    inverse is kept as an integer matrix over a common denominator, updated
    by exact division.  Pricing is screened in floating point, but every
    sign that decides a pivot is confirmed with integers.
    """
    m, k = system.m, system.k
    if k > MAX_COLUMNS:
        raise SizeError(f"{k} columns exceed the limit of {MAX_COLUMNS}")

    # scale each row to integers, sign chosen so the right-hand side is >= 0
    scale = []
    for row, rhs in zip(system.M, system.b):
        s = math.lcm(*(v.denominator for v in row), rhs.denominator)
        scale.append(-s if rhs < 0 else s)
    A = [[int(v * scale[r]) for v in system.M[r]] for r in range(m)]
    X = [int(system.b[r] * scale[r]) for r in range(m)]
    columns = [[(r, A[r][j]) for r in range(m) if A[r][j]] for j in range(k)]
    dense = np.array(A, dtype=float).reshape(m, k).T
    dense_abs = np.abs(dense)

    basis = [k + r for r in range(m)]
    binv = [[int(i == j) for j in range(m)] for i in range(m)]
    denom = 1  # basis inverse is binv / denom; basic values are X / denom

    while True:
        # duals y = Y / denom of the phase-I costs (1 on artificials)
        Y = [0] * m
        for r, var in enumerate(basis):
            if var >= k:
                for c, v in enumerate(binv[r]):
                    Y[c] += v
        entering = _first_improving(columns, dense, dense_abs, Y, denom, basis, k, m)
        if entering is None:
            break
        if entering < k:
            U = [sum(binv[i][r] * a for r, a in columns[entering]) for i in range(m)]
        else:
            U = [binv[i][entering - k] for i in range(m)]
        leaving = None
        for r in range(m):
            if U[r] > 0:
                if leaving is None:
                    leaving = r
                    continue
                lhs, rhs = X[r] * U[leaving], X[leaving] * U[r]
                if lhs < rhs or (lhs == rhs and basis[r] < basis[leaving]):
                    leaving = r
        # phase I is bounded below by zero, so a ratio row always exists
        assert leaving is not None
        denom = _pivot(binv, X, U, leaving, denom)
        basis[leaving] = entering

    if sum(X[r] for r in range(m) if basis[r] >= k) == 0:
        point = [Fraction(0)] * k
        for r, var in enumerate(basis):
            if var < k:
                point[var] = Fraction(X[r], denom)
        result: FeasibilityResult = Feasible(tuple(point))
    else:
        result = Infeasible(tuple(scale[r] * Fraction(Y[r], denom) for r in range(m)))

    if not result.verify(system):
        raise CertificateError(f"solver produced an invalid witness: {result}")
    return result


def _first_improving(columns, dense, dense_abs, Y, denom, basis, k, m):
    """Smallest-index nonbasic variable with negative reduced cost.

    A structural column ``j`` improves iff ``Y . A_j > 0``; an artificial
    ``r`` iff ``Y_r > denom``.
    """
    in_basis = set(basis)
    if k:
        yf = np.array([Y[r] / denom for r in range(m)])
        approx = dense @ yf
        slack = (dense_abs @ np.abs(yf)) * 1e-9 + 1e-300
        for j in np.flatnonzero(approx > -slack):
            j = int(j)
            if j in in_basis:
                continue
            if approx[j] > slack[j] or sum(Y[r] * a for r, a in columns[j]) > 0:
                return j
    for r in range(m):
        if k + r not in in_basis and Y[r] > denom:
            return k + r
    return None


def _pivot(binv, X, U, r, denom):
    """Integer pivot on row ``r``; returns the new common denominator."""
    p = U[r]
    pivot_row = binv[r]
    xr = X[r]
    for i, row in enumerate(binv):
        if i == r:
            continue
        f = U[i]
        if f:
            binv[i] = [(p * a - f * b) // denom for a, b in zip(row, pivot_row)]
            X[i] = (p * X[i] - f * xr) // denom
        elif p != denom:
            binv[i] = [p * a // denom for a in row]
            X[i] = p * X[i] // denom
    return p


def membership_system(sigma: UnitDiagonalMatrix) -> FeasibilitySystem:
    """Convex-combination system: vertex upper triangles over a row of ones."""
    vertices = extreme_points(sigma.n)
    size = len(sigma.upper)
    M = [[v.upper[e] for v in vertices] for e in range(size)]
    M.append([1] * len(vertices))
    return FeasibilitySystem(tuple(map(tuple, M)), tuple(sigma.upper) + (1,))


def membership(sigma: UnitDiagonalMatrix) -> FeasibilityResult:
    """Decide whether ``sigma`` is a convex combination of the extreme points.

    A feasible point is a vector of class weights in sign-class order.
    """
    return solve_feasibility(membership_system(sigma))


def realizability(sigma: UnitDiagonalMatrix) -> Union[JointSpinDistribution, Infeasible]:
    """A spin distribution with correlation matrix ``sigma``, or a certificate."""
    result = membership(sigma)
    if isinstance(result, Infeasible):
        return result
    return realize(result.point, sigma.n)


def certificate_value(result: Infeasible, system: FeasibilitySystem) -> Fraction:
    """``y^T b`` for a Farkas certificate."""
    return sum((a * v for a, v in zip(result.certificate, system.b)), Fraction(0))
