import itertools
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import affine_weights, simplex_weights, unit_rationals
from spincorr.errors import (
    AffineConstraintError,
    DimensionError,
    ProbabilityError,
    SizeError,
    SpinCorrError,
)
from spincorr.spin_core import (
    BELL_MATRIX,
    BarycentricCoords,
    BellInequality,
    CorrelationMatrix,
    JointSpinDistribution,
    MomentVector,
    SignVector,
    UnitDiagonalMatrix,
    barycentric3,
    bell_system,
    bell_transform,
    check_bell,
    compose3,
    correlations_of,
    evaluate_bell,
    extreme_points,
    mixture,
    moment_vector,
    pair_index,
    realize,
    sample_correlations,
    sign_classes,
    upper_pairs,
)

# The four vertex matrices exactly as printed for the three-spin tetrahedron.
SIGMA_1 = [[1, 1, 1], [1, 1, 1], [1, 1, 1]]
SIGMA_2 = [[1, -1, 1], [-1, 1, -1], [1, -1, 1]]
SIGMA_3 = [[1, 1, -1], [1, 1, -1], [-1, -1, 1]]
SIGMA_4 = [[1, -1, -1], [-1, 1, 1], [-1, 1, 1]]
PRINTED = [SIGMA_1, SIGMA_2, SIGMA_3, SIGMA_4]

IDENTITY3 = CorrelationMatrix.identity(3)


def bell_lhs_direct(sigma, i, j, k, ei, ej, ek):
    """Bell left-hand side written out term by term (any sign pattern)."""
    s = sigma.full()
    return 1 + ei * ej * s[i - 1][j - 1] + ei * ek * s[i - 1][k - 1] + ej * ek * s[j - 1][k - 1]


def bell_lhs_n3(s12, s13, s23):
    """The four n=3 Bell left-hand sides, written out one by one."""
    return (1 + s12 + s13 + s23, 1 - s12 + s13 - s23,
            1 + s12 - s13 - s23, 1 - s12 - s13 + s23)


class TestSignVector:
    def test_rejects_non_signs(self):
        with pytest.raises(SpinCorrError):
            SignVector((1, 0, -1))
        with pytest.raises(DimensionError):
            SignVector(())

    def test_canonical_has_leading_plus(self):
        w = SignVector((-1, 1, -1))
        assert w.canonical() == SignVector((1, -1, 1))
        assert (-w).canonical() == w.canonical()

    def test_class_order_n3(self):
        assert [w.entries for w in sign_classes(3)] == [
            (1, 1, 1), (1, -1, 1), (1, 1, -1), (1, -1, -1)]

    @given(st.lists(st.sampled_from([1, -1]), min_size=1, max_size=8))
    def test_class_index_roundtrip(self, entries):
        w = SignVector(tuple(entries))
        assert sign_classes(w.n)[w.class_index()] == w.canonical()


class TestStorage:
    @pytest.mark.parametrize("n", range(1, 8))
    def test_pair_index_matches_enumeration(self, n):
        for pos, (i, j) in enumerate(upper_pairs(n)):
            assert pair_index(i, j, n) == pos
            assert pair_index(j, i, n) == pos

    def test_range_check(self):
        with pytest.raises(SpinCorrError):
            CorrelationMatrix(3, (F(3, 2), 0, 0))
        raw = UnitDiagonalMatrix(3, (F(3, 2), 0, 0))
        assert not raw.is_correlation

    def test_length_check(self):
        with pytest.raises(DimensionError):
            CorrelationMatrix(3, (0, 0))

    def test_floats_refused(self):
        with pytest.raises(TypeError):
            CorrelationMatrix(2, (0.5,))

    def test_from_full(self):
        m = CorrelationMatrix.from_full(SIGMA_4)
        assert m.upper == (-1, -1, 1)
        assert m.full() == [[F(v) for v in row] for row in SIGMA_4]
        with pytest.raises(SpinCorrError):
            CorrelationMatrix.from_full([[1, 0], [1, 1]])


class TestExtremePoints:
    def test_n3_matches_printed_matrices(self):
        got = [v.full() for v in extreme_points(3)]
        assert got == [[[F(x) for x in row] for row in m] for m in PRINTED]

    def test_sigma4_upper(self):
        assert extreme_points(3)[3].upper == (-1, -1, 1)

    def test_n1(self):
        (only,) = extreme_points(1)
        assert only.upper == () and only.full() == [[1]]

    @pytest.mark.parametrize("n", range(1, 11))
    def test_count_and_entries(self, n):
        pts = extreme_points(n)
        assert len(pts) == 2 ** (n - 1)
        assert len({p.upper for p in pts}) == len(pts)
        assert all(abs(v) == 1 for p in pts for v in p.upper)

    def test_n4_has_eight(self):
        assert len(extreme_points(4)) == 8

    @pytest.mark.parametrize("n", [0, 13, -1])
    def test_guard(self, n):
        with pytest.raises(SizeError):
            extreme_points(n)


class TestBellSystem:
    def test_n3_matches_written_inequalities(self):
        s12, s13, s23 = sympy.symbols("s12 s13 s23")
        exprs = []
        for q in bell_system(3):
            offset, normal = q.coefficients(3)
            exprs.append(offset + normal[0] * s12 + normal[1] * s13 + normal[2] * s23)
        assert exprs == list(bell_lhs_n3(s12, s13, s23))

    @pytest.mark.parametrize("n,count", [(1, 0), (2, 0), (3, 4), (4, 16), (5, 40), (6, 80)])
    def test_counts(self, n, count):
        assert len(bell_system(n)) == count

    def test_sorted_and_canonical(self):
        system = bell_system(5)
        assert system == sorted(system, key=BellInequality.sort_key)
        assert all(q.signs[0] == 1 for q in system)
        assert len(set(system)) == len(system)

    def test_negated_signs_give_same_inequality(self):
        assert BellInequality((1, 2, 3), (-1, 1, 1)) == BellInequality((1, 2, 3), (1, -1, -1))

    def test_bad_triple(self):
        with pytest.raises(DimensionError):
            BellInequality((2, 1, 3))


class TestEvaluateBell:
    def test_identity_gives_one(self):
        for q in bell_system(4):
            assert evaluate_bell(q, CorrelationMatrix.identity(4)) == 1

    def test_all_minus_one(self):
        sigma = CorrelationMatrix(3, (-1, -1, -1))
        assert evaluate_bell(BellInequality((1, 2, 3)), sigma) == -2

    def test_sigma1_mixed(self):
        s1 = extreme_points(3)[0]
        assert evaluate_bell(BellInequality((1, 2, 3), (1, -1, -1)), s1) == 0

    def test_index_out_of_range(self):
        with pytest.raises(DimensionError):
            evaluate_bell(BellInequality((1, 2, 4)), IDENTITY3)

    @given(st.lists(unit_rationals, min_size=6, max_size=6))
    def test_matches_direct_formula_over_all_patterns(self, upper):
        sigma = CorrelationMatrix(4, tuple(upper))
        for i, j, k in itertools.combinations(range(1, 5), 3):
            for eps in itertools.product((1, -1), repeat=3):
                q = BellInequality((i, j, k), eps)
                assert evaluate_bell(q, sigma) == bell_lhs_direct(sigma, i, j, k, *eps)


class TestCheckBell:
    @pytest.mark.parametrize("n", range(1, 8))
    def test_vertices_pass_and_are_tight(self, n):
        for v in extreme_points(n):
            assert check_bell(v) == []
            if n >= 3:
                assert any(evaluate_bell(q, v) == 0 for q in bell_system(n))

    def test_all_minus_one_n3(self):
        assert check_bell(CorrelationMatrix(3, (-1, -1, -1))) == [BellInequality((1, 2, 3))]

    def test_n5_all_equal_minus_three_tenths(self):
        sigma = CorrelationMatrix.constant(5, F(-3, 10))
        # oracle: every triple, every one of the 8 sign patterns
        values = {bell_lhs_direct(sigma, i, j, k, *eps)
                  for i, j, k in itertools.combinations(range(1, 6), 3)
                  for eps in itertools.product((1, -1), repeat=3)}
        assert values == {F(1, 10), F(13, 10)}
        assert check_bell(sigma) == []


class TestThreeSpinTransform:
    def test_involution(self):
        A = sympy.Matrix(BELL_MATRIX)
        assert A * A == 4 * sympy.eye(4)

    def test_columns_are_vertices(self):
        for col, v in enumerate(extreme_points(3)):
            assert tuple(row[col] for row in BELL_MATRIX) == (1,) + v.upper

    def test_moment_vector(self):
        assert moment_vector(extreme_points(3)[0]).x == (1, 1, 1, 1)
        assert moment_vector(IDENTITY3).x == (1, 0, 0, 0)
        assert moment_vector(CorrelationMatrix(3, (F(1, 2), 0, 0))).x == (1, F(1, 2), 0, 0)
        with pytest.raises(DimensionError):
            moment_vector(CorrelationMatrix.identity(4))
        with pytest.raises(SpinCorrError):
            MomentVector((2, 0, 0, 0))

    @pytest.mark.parametrize("x", [(1, 1, 1, 1), (1, 0, 0, 0), (1, F(1, 2), 0, 0)])
    def test_bell_transform_matches_written_inequalities(self, x):
        assert bell_transform(MomentVector(x)).y == bell_lhs_n3(*x[1:])

    def test_bell_transform_examples(self):
        assert bell_transform(MomentVector((1, 1, 1, 1))).y == (4, 0, 0, 0)
        assert bell_transform(MomentVector((1, 0, 0, 0))).y == (1, 1, 1, 1)
        assert bell_transform(MomentVector((1, F(1, 2), 0, 0))).y == (
            F(3, 2), F(1, 2), F(3, 2), F(1, 2))

    def test_barycentric_examples(self):
        assert barycentric3(extreme_points(3)[0]).weights == (1, 0, 0, 0)
        assert barycentric3(IDENTITY3).weights == (F(1, 4),) * 4
        assert barycentric3(CorrelationMatrix(3, (-1, -1, -1))).weights == (
            F(-1, 2), F(1, 2), F(1, 2), F(1, 2))

    @pytest.mark.parametrize("upper", [(-1, -1, -1), (F(1, 2), 0, F(-1, 3)), (0, 0, 0)])
    def test_barycentric_against_linear_solve(self, upper):
        lam = sympy.symbols("l1:5")
        eqs = [sum(lam)-1] + [
            sum(l * v.upper[e] for l, v in zip(lam, extreme_points(3))) - sympy.Rational(str(upper[e]))
            for e in range(3)]
        sol = sympy.solve(eqs, lam, dict=True)[0]
        expected = tuple(F(str(sol[l])) for l in lam)
        assert barycentric3(CorrelationMatrix(3, upper)).weights == expected

    def test_barycentric_wrong_n(self):
        with pytest.raises(DimensionError):
            barycentric3(CorrelationMatrix.identity(4))

    def test_compose_examples(self):
        assert compose3((1, 0, 0, 0)) == extreme_points(3)[0]
        assert compose3((F(1, 4),) * 4) == IDENTITY3
        avg = [[F(a + b, 2) for a, b in zip(r1, r2)] for r1, r2 in zip(SIGMA_1, SIGMA_2)]
        assert compose3((F(1, 2), F(1, 2), 0, 0)) == CorrelationMatrix.from_full(avg)
        assert compose3((F(1, 2), F(1, 2), 0, 0)).upper == (0, 1, 0)

    def test_compose_requires_affine(self):
        with pytest.raises(AffineConstraintError):
            compose3((1, 1, 0, 0))
        with pytest.raises(AffineConstraintError):
            BarycentricCoords((1, 1, 0, 0))

    def test_compose_flags_non_correlation(self):
        m = compose3((2, -1, 0, 0))
        assert type(m) is UnitDiagonalMatrix and not m.is_correlation
        assert barycentric3(m).weights == (2, -1, 0, 0)

    @given(affine_weights())
    def test_round_trip(self, lam):
        assert barycentric3(compose3(lam)).weights == tuple(lam)

    @given(st.lists(unit_rationals, min_size=3, max_size=3))
    def test_three_way_equivalence(self, upper):
        sigma = CorrelationMatrix(3, tuple(upper))
        bell_ok = not check_bell(sigma)
        assert bell_ok == barycentric3(sigma).nonnegative
        assert bell_ok == bell_transform(moment_vector(sigma)).nonnegative


class TestDistributions:
    def test_validation(self):
        with pytest.raises(ProbabilityError):
            JointSpinDistribution(2, {(1, 1): F(1, 2), (-1, -1): F(1, 4)})
        with pytest.raises(ProbabilityError):
            JointSpinDistribution(2, {(1, 1): 1})
        with pytest.raises(ProbabilityError):
            JointSpinDistribution(1, {(1,): F(3, 2), (-1,): F(-1, 2)})

    def test_realize_examples(self):
        d = realize((1, 0, 0, 0), 3)
        assert dict(d.weights) == {SignVector((1, 1, 1)): F(1, 2), SignVector((-1, -1, -1)): F(1, 2)}
        d = realize((F(1, 4),) * 4, 3)
        assert len(d.weights) == 8 and set(d.weights.values()) == {F(1, 8)}
        d = realize((1, 0), 2)
        assert dict(d.weights) == {SignVector((1, 1)): F(1, 2), SignVector((-1, -1)): F(1, 2)}
        assert correlations_of(d).upper == (1,)

    def test_realize_errors(self):
        with pytest.raises(ProbabilityError):
            realize((F(3, 2), F(-1, 2), 0, 0), 3)
        with pytest.raises(ProbabilityError):
            realize((F(1, 2), 0, 0, 0), 3)
        with pytest.raises(DimensionError):
            realize((1, 0), 3)

    def test_correlations_examples(self):
        uniform = JointSpinDistribution(
            3, {w: F(1, 8) for w in itertools.product((1, -1), repeat=3)})
        assert correlations_of(uniform) == IDENTITY3
        pair = JointSpinDistribution(3, {(1, 1, 1): F(1, 2), (-1, -1, -1): F(1, 2)})
        assert correlations_of(pair) == extreme_points(3)[0]
        assert correlations_of(realize((F(1, 2), F(1, 2), 0, 0), 3)).upper == (0, 1, 0)

    @settings(max_examples=60)
    @given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), simplex_weights(2 ** (n - 1)))))
    def test_realization_consistency_and_fairness(self, case):
        n, lam = case
        dist = realize(lam, n)
        assert correlations_of(dist) == mixture(lam, n)
        for i in range(1, n + 1):
            assert dist.marginal_plus(i) == F(1, 2)


class TestSampling:
    def test_degenerate(self):
        pair = realize((1, 0, 0, 0), 3)
        est = sample_correlations(pair, 500, seed=9)
        assert est.sigma_hat == (1.0, 1.0, 1.0)
        assert est.stderr == (0.0, 0.0, 0.0)

    def test_deterministic(self):
        d = realize((F(1, 4),) * 4, 3)
        assert sample_correlations(d, 1000, 7) == sample_correlations(d, 1000, 7)
        assert sample_correlations(d, 1000, 7) != sample_correlations(d, 1000, 8)

    def test_uniform_is_near_zero(self):
        d = realize((F(1, 4),) * 4, 3)
        est = sample_correlations(d, 10**5, seed=2024)
        assert all(abs(s) < 0.02 for s in est.sigma_hat)
        assert est.generator

    @pytest.mark.parametrize("seed", range(5))
    def test_single_draw_is_rank_one(self, seed):
        est = sample_correlations(realize((F(1, 4),) * 4, 3), 1, seed)
        assert all(s in (-1.0, 1.0) for s in est.sigma_hat)

    def test_bad_arguments(self):
        d = realize((1, 0), 2)
        with pytest.raises(SpinCorrError):
            sample_correlations(d, 0, 1)
        with pytest.raises(SpinCorrError):
            sample_correlations(d, 10, -1)
