import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as O
from conftest import int_series
from unitroot.context import PrimeContext
from unitroot.errors import ContextMismatch, ContractError, NotAUnit, PrecisionError, WindowOverflow
from unitroot.series import (INF, PadicLaurentSeries, circ_split, frobenius_apply, in_circ,
                             partial_valuation)

CTX = PrimeContext(3, prec=5, window=3 ** 7)
P, N, Q = 3, 5, 3
S = int_series(CTX)


def T(d, ctx=CTX):
    return PadicLaurentSeries.from_ints(ctx, d)


class TestContext:

    def test_rejects_bad_prime(self):
        with pytest.raises(ContractError):
            PrimeContext(4)
        with pytest.raises(ContractError):
            PrimeContext(2)

    def test_roundtrip(self):
        c = PrimeContext(5, f=2, e=3, prec=7, window=99)
        assert PrimeContext.from_dict(c.to_dict()) == c
        assert c.q == 25

    def test_moduli_ramified(self):
        c = PrimeContext(3, e=2, prec=5)
        # pi-digits 0..4: digit 0 carries pi^0, pi^2, pi^4; digit 1 carries pi^1, pi^3
        assert c.moduli == (27, 9)

    def test_coefficient_inverse(self):
        c = PrimeContext(3, e=2, prec=6)
        x = c.reduce((2, 5))
        assert c.mul(x, c.inverse(x)) == c.one_digits
        with pytest.raises(NotAUnit):
            c.inverse(c.reduce((3, 1)))


class TestArithmetic:

    @given(S, S)
    def test_add_matches_oracle(self, x, y):
        assert O.to_dict(x + y) == O.add(O.to_dict(x), O.to_dict(y), P, N)

    @given(S, S)
    def test_mul_matches_oracle(self, x, y):
        assert O.to_dict(x * y) == O.mul(O.to_dict(x), O.to_dict(y), P, N)

    @given(S, S, S)
    def test_ring_axioms(self, x, y, z):
        assert x * (y + z) == x * y + x * z
        assert (x * y) * z == x * (y * z)
        assert x * y == y * x

    @given(S, S)
    def test_frobenius_is_ring_hom(self, x, y):
        assert frobenius_apply(x * y) == frobenius_apply(x) * frobenius_apply(y)
        assert frobenius_apply(x + y) == frobenius_apply(x) + frobenius_apply(y)

    def test_frobenius_example(self):
        assert frobenius_apply(T({-1: 1, 0: 2})) == T({-3: 1, 0: 2})

    @given(int_series(CTX, lo=-3, hi=-1, min_pi=1))
    def test_invert_roundtrip(self, h):
        x = PadicLaurentSeries.one(CTX) + h
        assert x * x.invert() == PadicLaurentSeries.one(CTX)

    def test_invert_geometric(self):
        x = T({0: 1, -1: 3})
        expect = T({0: 1, -1: -3, -2: 9, -3: -27, -4: 81})
        assert x.invert() == expect

    def test_invert_shifted_unit(self):
        x = T({0: 3, -1: 1})
        assert x * x.invert() == PadicLaurentSeries.one(CTX)

    def test_invert_non_unit(self):
        with pytest.raises(NotAUnit):
            T({0: 3, -1: 9}).invert()
        with pytest.raises(ContractError):
            T({0: 1, -1: 1}).invert()

    @given(st.integers(2, 4), st.integers(1, 3))
    def test_invert_ramified(self, e, k):
        c = PrimeContext(3, e=e, prec=6, window=200)
        x = PadicLaurentSeries.one(c) + PadicLaurentSeries.monomial(c, -k, 1, pi_exp=1)
        assert x * x.invert() == PadicLaurentSeries.one(c)

    def test_context_mismatch(self):
        other = PrimeContext(3, prec=4, window=3 ** 7)
        with pytest.raises(ContextMismatch):
            T({0: 1}) + T({0: 1}, other)

    def test_window_overflow_reports_requirement(self):
        c = PrimeContext(3, prec=3, window=10)
        x = PadicLaurentSeries.from_ints(c, {-4: 1})
        with pytest.raises(WindowOverflow) as info:
            frobenius_apply(x)
        assert info.value.required == 12
        with pytest.raises(WindowOverflow):
            x * x * x

    def test_precision_truncates(self):
        assert T({0: 3 ** 5}).is_zero()
        assert T({0: 3 ** 5 + 1}) == PadicLaurentSeries.one(CTX)


class TestPartialValuations:

    def test_example(self):
        x = T({0: 1, -2: 3, -7: 9})
        assert [partial_valuation(x, k) for k in range(4)] == [0, -2, -7, -7]

    def test_zero_is_inf(self):
        assert partial_valuation(PadicLaurentSeries.zero(CTX), 2) == INF

    def test_level_beyond_precision(self):
        with pytest.raises(PrecisionError):
            partial_valuation(T({0: 1}), N)

    def test_fractional_levels(self):
        c = PrimeContext(3, e=2, prec=6, window=50)
        x = PadicLaurentSeries.monomial(c, -5, 1, pi_exp=1) + PadicLaurentSeries.one(c)
        assert partial_valuation(x, 0) == 0
        assert partial_valuation(x, "1/2") == -5
        with pytest.raises(ContractError):
            partial_valuation(x, "1/3")

    @given(S, st.integers(0, N - 1))
    def test_matches_oracle(self, x, k):
        assert partial_valuation(x, k) == O.w(O.to_dict(x), k, P, N)

    @given(S, S, st.integers(0, N - 1))
    def test_colmez_inequalities(self, x, y, k):
        wx, wy = partial_valuation(x, k), partial_valuation(y, k)
        assert partial_valuation(x + y, k) >= min(wx, wy)
        if wx != wy:
            assert partial_valuation(x + y, k) == min(wx, wy)
        # product: w_k(xy) >= min over i+j=k of w_i(x) + w_j(y)
        bound = min(partial_valuation(x, i) + partial_valuation(y, k - i) for i in range(k + 1))
        assert partial_valuation(x * y, k) >= bound

    @given(S, st.integers(0, N - 1))
    def test_frobenius_scales(self, x, k):
        w = partial_valuation(x, k)
        assert partial_valuation(frobenius_apply(x), k) == (w * Q if w != INF else INF)


class TestCirc:

    @given(int_series(CTX, lo=-9, hi=9, max_terms=6))
    def test_split_recombines(self, x):
        circ, down = circ_split(x)
        assert in_circ(circ)
        assert circ + frobenius_apply(down) == x

    def test_example(self):
        circ, down = circ_split(T({-1: 1, -3: 2, 0: 1}))
        assert circ == T({-1: 1})
        assert down == T({-1: 2, 0: 1})


class TestSerialization:

    @given(S)
    def test_json_roundtrip(self, x):
        assert PadicLaurentSeries.from_json(x.to_json()) == x

    def test_digits_length_checked(self):
        obj = T({0: 1}).to_json()
        obj["terms"] = [[0, ["1", "2"]]]
        with pytest.raises(ContractError):
            PadicLaurentSeries.from_json(obj)
