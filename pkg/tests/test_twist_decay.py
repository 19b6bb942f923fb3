import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unitroot.context import PrimeContext
from unitroot.decay import (DecayProfile, Inconclusive, LogDecay, Overconvergent, decay_classify,
                            decay_profile)
from unitroot.errors import ContractError
from unitroot.series import INF, PadicLaurentSeries, frobenius_apply
from unitroot.twist import twist_to_minimal

CTX = PrimeContext(3, prec=3, window=3 ** 7)


def T(d, ctx=CTX):
    return PadicLaurentSeries.from_ints(ctx, d)


class TestTwist:

    def test_removes_q_divisible_term(self):
        lam = T({0: 1, -3: 3})
        lam_min, a = twist_to_minimal(lam)
        assert lam_min == T({0: 1, -1: 3})
        assert a == T({0: 1, -1: -3, -2: 9})

    def test_already_minimal(self):
        lam = T({0: 1, -1: 3})
        assert twist_to_minimal(lam) == (lam, PadicLaurentSeries.one(CTX))
        one = PadicLaurentSeries.one(CTX)
        assert twist_to_minimal(one) == (one, one)

    def test_precondition(self):
        with pytest.raises(ContractError):
            twist_to_minimal(T({0: 2}))

    @given(st.dictionaries(st.integers(-12, -1), st.integers(1, 26), max_size=4))
    def test_audit_identity(self, raw):
        ctx = PrimeContext(3, prec=4, window=3 ** 9)
        lam = T({0: 1, **{n: 3 * c for n, c in raw.items()}}, ctx)
        lam_min, a = twist_to_minimal(lam)
        assert a * lam_min == frobenius_apply(a) * lam
        assert all(n == 0 or n % 3 for n in lam_min.terms)
        assert (a - PadicLaurentSeries.one(ctx)).valuation() >= 1


class TestProfile:

    def test_examples(self):
        assert decay_profile(PadicLaurentSeries.one(CTX), 2).values() == [0, 0, 0]
        assert decay_profile(PadicLaurentSeries.zero(CTX), 2).values() == [INF] * 3

    def test_ramified_levels(self):
        ctx = PrimeContext(3, e=2, prec=5, window=100)
        x = PadicLaurentSeries.one(ctx) + PadicLaurentSeries.monomial(ctx, -3, 1, pi_exp=1)
        prof = decay_profile(x, 2)
        assert [k for k, _ in prof.entries] == [Fraction(i, 2) for i in range(5)]
        assert prof.values() == [0, -3, -3, -3, -3]
        with pytest.raises(ContractError):
            decay_profile(x, Fraction(1, 3))


def prof(values, p=3):
    return DecayProfile.from_values(PrimeContext(p, prec=len(values) + 1), values)


class TestClassify:

    def test_linear(self):
        c = decay_classify(prof([-2 * k - 1 for k in range(11)]))
        assert isinstance(c, Overconvergent)
        assert (c.m, c.c) == (2, 1)

    def test_exponential(self):
        c = decay_classify(prof([-3 ** k for k in range(11)]))
        assert isinstance(c, LogDecay)
        assert (c.r, c.c) == (1, 1)

    def test_half_rate(self):
        c = decay_classify(prof([-math.ceil(3 ** (k / 2)) for k in range(1, 11)]))
        assert isinstance(c, LogDecay)
        assert Fraction(2, 5) <= c.r <= Fraction(3, 5)

    def test_too_short(self):
        with pytest.raises(ContractError):
            decay_classify(prof([0, -1, INF, INF, INF]))

    def test_slow_exponential_is_inconclusive(self):
        # ratios 1.08 beat 1 + 2/k late in the range yet round to rate 0
        c = decay_classify(prof([-math.ceil(100 * 1.08 ** k) for k in range(41)]))
        assert isinstance(c, Inconclusive)

    def test_superexponential_bound_is_verified(self):
        values = [-(3 ** (k * k // 2)) for k in range(9)]
        c = decay_classify(prof(values))
        assert all(c.holds(k, w) for k, w in enumerate(values))

    @given(st.integers(0, 6), st.integers(0, 20), st.integers(8, 14))
    def test_linear_laws_roundtrip(self, m, c, K):
        values = [-(m * k + c) for k in range(K + 1)]
        cls = decay_classify(prof(values))
        assert isinstance(cls, Overconvergent)
        assert (cls.m, cls.c) == (m, c)

    @given(st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)]),
           st.integers(1, 9), st.integers(8, 12))
    def test_exponential_laws_roundtrip(self, r, c, K):
        values = [-math.ceil(c * 3 ** float(r * k)) for k in range(K + 1)]
        cls = decay_classify(prof(values))
        assert isinstance(cls, LogDecay)
        assert cls.r == r
        assert all(cls.holds(k, w) for k, w in enumerate(values))
