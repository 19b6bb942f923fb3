from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as O
from unitroot.context import PrimeContext
from unitroot.errors import ContractError
from unitroot.generate import random_isocrystal, trial_rng
from unitroot.isocrystal import (ElementaryTransform, IsocrystalMatrix, check_condition, congruence_level,
                                 det_step_frobenius, determinant, exterior_power, newton_data,
                                 newton_data_from_exponents, recursive_coordinate_check, reduce_lower_left,
                                 reduce_to_rank_one_form, skew_conjugate, solve_unit_root, twist,
                                 unit_root_residuals, validate_diagonal_congruence)
from unitroot.series import PadicLaurentSeries, frobenius_apply
from unitroot.twist import twist_to_minimal
from unitroot.monodromy import break_sequence_extract
from unitroot.pipeline import with_window_retry

P = 3


def ctx(prec=5, window=3 ** 8, e=1):
    return PrimeContext(P, e=e, prec=prec, window=window)


def mat(c, rows, exps):
    return IsocrystalMatrix(c, [[PadicLaurentSeries.from_ints(c, d) for d in row] for row in rows], exps)


def as_dicts(A):
    return [[O.to_dict(x) for x in row] for row in A.entries]


def naive_conjugate(Ad, u, v, a, p, N):
    """``L A sigma(L)^-1`` for ``L = 1 + a E_uv`` by explicit matrix products."""
    n = len(Ad)
    L = [[{0: 1} if i == j else {} for j in range(n)] for i in range(n)]
    Linv = [[{0: 1} if i == j else {} for j in range(n)] for i in range(n)]
    L[u][v] = a
    Linv[u][v] = O.neg(a, p, N)
    sLinv = [[O.sigma(x, p) for x in row] for row in Linv]

    def mm(X, Y):
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = {}
                for k in range(n):
                    acc = O.add(acc, O.mul(X[i][k], Y[k][j], p, N), p, N)
                row.append(acc)
            out.append(row)
        return out

    return mm(mm(L, Ad), sLinv)


HAND = [[{0: 1}, {-1: 27}], [{-1: 27}, {0: 3}]]


class TestCongruenceAndNewton:

    def test_congruence_examples(self):
        c = ctx()
        assert validate_diagonal_congruence(mat(c, [[{0: 1}, {-1: 27}], [{-2: 27}, {0: 3}]], [0, 1]), 3)
        assert not validate_diagonal_congruence(mat(c, [[{0: 1}, {0: 1}], [{}, {0: 3}]], [0, 1]), 2)
        c2 = ctx(e=2)
        D = IsocrystalMatrix.diagonal(c2, [0, 2])
        assert validate_diagonal_congruence(D, c2.prec)
        assert congruence_level(D) == c2.prec

    def test_newton_examples(self):
        nd = newton_data_from_exponents([0, 1])
        assert nd.slopes == (0, 1) and nd.breaks[0] == 1 and nd.np_valid
        nd = newton_data_from_exponents([0, 0, 2])
        assert nd.breaks[0] == 2 and not nd.np1
        nd = newton_data_from_exponents([0, 1], e=2)
        assert nd.slopes == (0, Fraction(1, 2)) and nd.rate == 2 and nd.s == 1

    def test_newton_requires_congruence(self):
        with pytest.raises(ContractError):
            newton_data(mat(ctx(), [[{0: 1}, {0: 1}], [{}, {0: 3}]], [0, 1]))

    def test_matrix_invariants(self):
        c = ctx()
        with pytest.raises(ContractError):
            IsocrystalMatrix.diagonal(c, [1, 0])
        with pytest.raises(ContractError):
            IsocrystalMatrix(c, [[PadicLaurentSeries.one(c)]], [0, 1])


class TestSkewConjugation:

    def test_identity(self):
        A = mat(ctx(), HAND, [0, 1])
        assert skew_conjugate(A, ElementaryTransform.identity(A.ctx, 2)) == A

    @given(st.integers(-3, -1), st.integers(1, 8), st.sampled_from([(1, 0), (0, 1)]))
    def test_elementary_matches_matrix_product(self, n, c, uv):
        cx = ctx()
        A = mat(cx, HAND, [0, 1])
        a = PadicLaurentSeries.from_ints(cx, {n: c})
        B = ElementaryTransform.identity(cx, 2).then(*uv, a)
        got = skew_conjugate(A, B)
        assert as_dicts(got) == naive_conjugate(as_dicts(A), *uv, {n: c}, P, cx.prec)

    def test_functorial(self):
        cx = ctx()
        A = mat(cx, HAND, [0, 1])
        a = PadicLaurentSeries.from_ints(cx, {-1: 3})
        b = PadicLaurentSeries.from_ints(cx, {-2: 9})
        B1 = ElementaryTransform.identity(cx, 2).then(1, 0, a)
        B2 = ElementaryTransform.identity(cx, 2).then(0, 1, b)
        assert skew_conjugate(skew_conjugate(A, B1), B2) == skew_conjugate(A, B1.compose(B2))

    def test_determinant_rule(self):
        cx = ctx()
        A = mat(cx, HAND, [0, 1])
        a = PadicLaurentSeries.from_ints(cx, {-1: 5})
        B = ElementaryTransform.identity(cx, 2).then(1, 0, a)
        # elementary B has det 1, so det is invariant
        assert determinant(skew_conjugate(A, B).rows()) == determinant(A.rows())
        assert exterior_power(A, 2).entries[0][0] == determinant(A.rows())
        assert exterior_power(A, 1) == A


class TestUnitRoot:

    def test_diagonal(self):
        sol = solve_unit_root(IsocrystalMatrix.diagonal(ctx(), [0, 1]))
        assert sol.lam == PadicLaurentSeries.one(sol.lam.ctx)
        assert sol.epsilon[1].is_zero()

    def test_hand_example(self):
        cx = ctx()
        sol = solve_unit_root(mat(cx, HAND, [0, 1]))
        assert sol.epsilon[1] == PadicLaurentSeries.from_ints(cx, {-1: 27, -3: 81})
        assert sol.lam == PadicLaurentSeries.one(cx)
        assert sol.residual_level >= cx.prec
        assert recursive_coordinate_check(mat(cx, HAND, [0, 1]), sol)

    def test_needs_np1(self):
        with pytest.raises(ContractError):
            solve_unit_root(IsocrystalMatrix.diagonal(ctx(), [0, 0, 1]))

    def test_needs_contraction_level(self):
        with pytest.raises(ContractError):
            solve_unit_root(mat(ctx(), [[{0: 1}, {-1: 3}], [{-1: 3}, {0: 3}]], [0, 1]))

    @pytest.mark.parametrize("trial", range(6))
    @pytest.mark.parametrize("exps", [(0, 1), (0, 1, 2), (0, 2)])
    def test_random_residuals(self, trial, exps):
        A = random_isocrystal(trial_rng(11, trial), P, exps, window=3 ** 9)
        sol, A = with_window_retry(solve_unit_root, A)
        assert all(r.valuation() >= sol.residual_level for r in unit_root_residuals(A, sol.epsilon, sol.lam))
        assert sol.residual_level == A.ctx.prec
        ok, _ = with_window_retry(lambda M: recursive_coordinate_check(M, solve_unit_root(M)), A)
        assert ok


class TestTwistAndExterior:

    def test_twist(self):
        cx = ctx()
        A = IsocrystalMatrix.diagonal(cx, [2, 3])
        assert twist(A, -2) == IsocrystalMatrix.diagonal(cx, [0, 1])
        assert twist(A, 0) == A
        assert twist(A, 1).slopes() == (3, 4)

    def test_exterior_exponents(self):
        A = random_isocrystal(trial_rng(3, 0), P, (0, 1, 3), window=3 ** 9)
        assert exterior_power(A, 2).diag_exponents == (1, 3, 4)

    def test_det_step(self):
        A = mat(ctx(), [[{0: 1, -1: 27}, {-1: 27}], [{-1: 27}, {0: 3}]], [0, 1])
        assert det_step_frobenius(A, 1) == solve_unit_root(A).lam
        assert det_step_frobenius(A, 2) == determinant(A.rows())


class TestReduction:

    def test_lower_left_example(self):
        cx = ctx()
        A = mat(cx, [[{0: 1}, {}], [{-1: 27}, {0: 3}]], [0, 1])
        A2, B = reduce_lower_left(A, 1, 4)
        assert A2[1, 0].valuation() >= 4
        assert len(B.steps) == 1
        assert skew_conjugate(A, B) == A2

    def test_already_reduced(self):
        A = IsocrystalMatrix.diagonal(ctx(), [0, 1])
        A2, B = reduce_lower_left(A, 1, 4)
        assert A2 == A and not B.steps

    def test_rank_one_form_diagonal(self):
        A = IsocrystalMatrix.diagonal(ctx(), [0, 1])
        A2, B, rep = reduce_to_rank_one_form(A, 3)
        assert A2 == A and all(rep.conditions.values())

    def test_rank_one_form_example(self):
        cx = ctx(prec=4)
        A = mat(cx, [[{0: 1, -1: 27}, {3: 27}], [{-1: 27}, {0: 3}]], [0, 1])
        A2, B, rep = reduce_to_rank_one_form(A, 4)
        assert all(rep.conditions.values())
        assert skew_conjugate(A, B) == A2
        assert check_condition(A2, "iv", N0=4, r=rep.r, c=rep.c, d=rep.d)

    @pytest.mark.parametrize("trial", range(4))
    def test_random_rank3(self, trial):
        A = random_isocrystal(trial_rng(5, trial), P, (0, 1, 2), window=3 ** 10, reduced=False)
        N0 = congruence_level(A) + 1
        A2, B, rep = reduce_to_rank_one_form(A, N0)
        assert skew_conjugate(A, B) == A2
        assert all(ok for k, ok in rep.conditions.items() if k not in rep.unattained)

    def test_unit_root_class_invariant(self):
        A = random_isocrystal(trial_rng(9, 0), P, (0, 1), window=3 ** 10)
        a = PadicLaurentSeries.from_ints(A.ctx, {-1: 3 ** congruence_level(A)})
        A2 = skew_conjugate(A, ElementaryTransform.identity(A.ctx, 2).then(1, 0, a))
        K = A.ctx.prec - 1
        lam1 = with_window_retry(solve_unit_root, A)[0].lam
        lam2 = with_window_retry(solve_unit_root, A2)[0].lam
        b1 = break_sequence_extract(twist_to_minimal(lam1)[0], K)
        b2 = break_sequence_extract(twist_to_minimal(lam2)[0], K)
        assert b1 == b2
