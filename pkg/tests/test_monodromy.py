from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unitroot.context import PrimeContext
from unitroot.decay import DecayProfile
from unitroot.errors import ContractError
from unitroot.monodromy import (HYPOTHESES_TAG, BreakSequence, break_sequence_extract, check_log_bounded,
                                fit_pseudo_stable, min_over_conjugates)
from unitroot.series import INF, PadicLaurentSeries

CTX = PrimeContext(3, prec=5, window=3 ** 8)


def lam_from_breaks(s, ctx=CTX):
    """``1 + sum_k p^k T^-s_k``: the minimal Frobenius with breaks s."""
    return PadicLaurentSeries.from_ints(ctx, {0: 1, **{-int(x): ctx.p ** k for k, x in enumerate(s, 1)}})


@st.composite
def valid_breaks(draw, p=3, n=4, top=3 ** 8):
    s = [draw(st.sampled_from([x for x in range(1, 6) if x % p]))]
    for _ in range(n - 1):
        x = draw(st.integers(p * s[-1] + 1, p * s[-1] + 3 * p))
        s.append(x + 1 if x % p == 0 else x)
    return [x for x in s if x <= top]


class TestBreakSequence:

    def test_invariants(self):
        with pytest.raises(ContractError):
            BreakSequence((3, 2), 3)
        with pytest.raises(ContractError):
            BreakSequence((-1,), 3)
        with pytest.raises(ContractError):
            BreakSequence((Fraction(1, 2),), 3)
        assert BreakSequence((Fraction(1, 2),), 3, e=2).breaks == (Fraction(1, 2),)

    def test_violations(self):
        s = BreakSequence((1, 2, 6), 3)
        assert not s.validated
        v = s.violations()
        assert any("s_2" in x for x in v) and any("p divides s_3" in x for x in v)

    def test_roundtrip_dict(self):
        s = BreakSequence((2, 7, 22), 3, start=2)
        assert BreakSequence.from_dict(s.to_dict()) == s


class TestExtract:

    def test_example(self):
        lam = PadicLaurentSeries.from_ints(CTX, {0: 1, -2: 3, -7: 9, -22: 27})
        s = break_sequence_extract(lam, 3)
        assert s.breaks == (2, 7, 22) and s.validated and s.hypotheses_met
        assert s.to_csv() == "k,w_k,s_k,validated\n1,-2,2,true\n2,-7,7,true\n3,-22,22,true\n"

    def test_trivial(self):
        assert len(break_sequence_extract(PadicLaurentSeries.one(CTX), 4)) == 0

    def test_not_validated(self):
        lam = PadicLaurentSeries.from_ints(CTX, {0: 1, -1: 3, -2: 9})
        s = break_sequence_extract(lam, 2)
        assert s.breaks == (1, 2) and not s.validated

    def test_unramified_levels_dropped(self):
        lam = PadicLaurentSeries.from_ints(CTX, {0: 1, -2: 9})
        s = break_sequence_extract(lam, 3)
        assert s.start == 2 and s.breaks == (2, 2)

    def test_precondition(self):
        with pytest.raises(ContractError):
            break_sequence_extract(PadicLaurentSeries.from_ints(CTX, {0: 1, -1: 1}), 2)

    @given(valid_breaks())
    def test_roundtrip(self, s):
        got = break_sequence_extract(lam_from_breaks(s), len(s))
        assert list(got.breaks) == s and got.hypotheses_met


class TestConjugates:

    def prof(self, ws):
        return DecayProfile.from_values(CTX, [0] + list(ws))

    def test_pointwise_min(self):
        s = min_over_conjugates([self.prof([-2, -7]), self.prof([-3, -5])])
        assert s.breaks == (3, 7)

    def test_single_and_infinite(self):
        a = self.prof([-2, -7])
        assert min_over_conjugates([a]).breaks == (2, 7)
        assert min_over_conjugates([a, self.prof([INF, INF])]).breaks == (2, 7)


class TestFits:

    def test_examples(self):
        f = fit_pseudo_stable(BreakSequence((2, 7, 22), 3), 1, 1)
        assert (f.a, f.b, f.k0) == ((Fraction(5, 6),), (Fraction(-1, 2),), 1) and not f.tags
        f = fit_pseudo_stable(BreakSequence((1, 3, 9), 3), 1, 1)
        assert (f.a, f.b) == ((Fraction(1, 3),), (0,)) and HYPOTHESES_TAG in f.tags
        assert fit_pseudo_stable(BreakSequence((1, 2, 3, 4), 3), 1, 1) is None

    def test_contract(self):
        with pytest.raises(ContractError):
            fit_pseudo_stable(BreakSequence((1, 4, 13), 3), Fraction(1, 2), 1)
        with pytest.raises(ContractError):
            fit_pseudo_stable(BreakSequence((1, 4), 3), 1, 1)

    def test_period_two(self):
        # s_(2k+i) = a_i 3^k + b_i with r = 1/2
        a, b = (Fraction(2), Fraction(5)), (Fraction(1), Fraction(-2))
        s = [a[n % 2] * 3 ** (n // 2) + b[n % 2] for n in range(1, 9)]
        f = fit_pseudo_stable(BreakSequence(tuple(s), 3), Fraction(1, 2), 2)
        assert f.a == (2, 5) and f.b == (1, -2)
        assert all(f.predict(n) == x for n, x in enumerate(s, 1))

    @given(st.integers(1, 20), st.integers(-2, 5), st.integers(0, 3))
    def test_recovers_law_after_onset(self, a, b, junk):
        law = [a * 3 ** k + b for k in range(1, 8)]
        s = [x - 1 if j < junk else x for j, x in enumerate(law)]
        f = fit_pseudo_stable(BreakSequence(tuple(s), 3), 1, 1)
        assert f.a == (a,) and f.b == (b,)
        assert f.k0 == junk + 1


class TestLogBounded:

    def test_examples(self):
        s = BreakSequence((2, 7, 22), 3)
        assert check_log_bounded(s, 1) == Fraction(22, 27)
        assert check_log_bounded(s, Fraction(1, 2)) is None
        assert check_log_bounded(BreakSequence((1,), 3), 1) == Fraction(1, 3)

    def test_bound_verified(self):
        s = BreakSequence((1, 4, 13, 40), 3)
        c = check_log_bounded(s, Fraction(3, 2))
        assert all(x <= c * 3 ** (1.5 * n) + 1e-9 for n, x in s.items())
