"""Partial-valuation profiles and their growth classification.

A profile lists ``(k, w_k)`` for ``k = 0, 1/e, ..., K``.  Two growth laws are
distinguished: linear (``w_k >= -(m k + c)``, the overconvergent case) and
exponential (``w_k >= -c p^(r k)``, r-log-decay).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import median

from .context import PrimeContext
from .errors import ContractError
from .series import INF, PadicLaurentSeries, partial_valuation_at_level


@dataclass(frozen=True)
class DecayProfile:
    ctx: PrimeContext
    entries: tuple  # tuple[(Fraction k, int | INF)]

    def finite(self) -> list:
        return [(k, w) for k, w in self.entries if w != INF]

    def values(self) -> list:
        return [w for _, w in self.entries]

    def __len__(self):
        return len(self.entries)

    @classmethod
    def from_values(cls, ctx: PrimeContext, values) -> DecayProfile:
        """Profile from ``w`` values listed at k = 0, 1/e, 2/e, ..."""
        return cls(ctx, tuple((Fraction(i, ctx.e), w) for i, w in enumerate(values)))


@dataclass(frozen=True)
class Overconvergent:
    m: Fraction
    c: Fraction
    residual: Fraction = Fraction(0)
    range_used: tuple = ()

    kind = "overconvergent"

    def bound(self, k) -> Fraction:
        return -(self.m * Fraction(k) + self.c)

    def holds(self, k, w) -> bool:
        return w == INF or w >= self.bound(k)

    def to_dict(self) -> dict:
        return {"class": self.kind, "m": str(self.m), "c": str(self.c),
                "residual": str(self.residual), "range": [str(k) for k in self.range_used]}


@dataclass(frozen=True)
class LogDecay:
    r: Fraction
    c: Fraction
    p: int
    residual: float = 0.0
    range_used: tuple = ()

    kind = "log-decay"

    def holds(self, k, w) -> bool:
        """Exact test of ``w >= -c p^(r k)``."""
        if w == INF or w >= 0:
            return True
        g = Fraction(-w)
        x = self.r * Fraction(k)
        # g <= c p^x  <=>  (g/c)^den <= p^num
        ratio = g / self.c
        return ratio ** x.denominator <= Fraction(self.p) ** x.numerator

    def to_dict(self) -> dict:
        return {"class": self.kind, "r": str(self.r), "c": str(self.c),
                "residual": self.residual, "range": [str(k) for k in self.range_used]}


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    range_used: tuple = ()

    kind = "inconclusive"

    def holds(self, k, w) -> bool:
        return True

    def to_dict(self) -> dict:
        return {"class": self.kind, "reason": self.reason,
                "range": [str(k) for k in self.range_used]}


DecayClass = Overconvergent | LogDecay | Inconclusive


def decay_profile(x: PadicLaurentSeries, K) -> DecayProfile:
    """``(k, w_k(x))`` for ``k = 0, 1/e, ..., K``."""
    e = x.ctx.e
    top = Fraction(K) * e
    if top.denominator != 1 or top < 0:
        raise ContractError("decay_profile", "K must lie in (1/e)Z>=0", f"K={K}")
    entries = tuple((Fraction(level, e), partial_valuation_at_level(x, level))
                    for level in range(int(top) + 1))
    return DecayProfile(x.ctx, entries)


def _round_up_fraction(x: float, denom: int = 10**6) -> Fraction:
    return Fraction(math.ceil(x * denom), denom)


def decay_classify(profile: DecayProfile) -> DecayClass:
    """Classify the growth of ``-w_k`` as linear, exponential or neither.

    Growth is measured by consecutive ratios ``rho = (-w_{k+1/e}) / (-w_k)`` over
    the last half of the finite entries.  Ratios staying below ``1 + 2/k``
    mean linear growth.  Otherwise the rate is ``r = e * log_p(rho)`` (median,
    rounded to the nearest ``1/(2e)``).  The returned bound is verified on
    every profiled entry before it is returned.
    """
    ctx = profile.ctx
    p, e = ctx.p, ctx.e
    finite = profile.finite()
    if len(finite) < 4:
        raise ContractError("decay_classify", "profile needs at least 4 finite entries",
                            f"got {len(finite)}")
    growth = [(k, max(-w, 0)) for k, w in finite]
    half = growth[len(growth) // 2:]
    if len(half) < 2:
        half = growth[-2:]
    rng = (half[0][0], half[-1][0])
    step = Fraction(1, e)
    ratios = []
    for (k0, g0), (k1, g1) in zip(half, half[1:]):
        if k1 - k0 != step or g0 <= 0:
            continue
        ratios.append((k0, Fraction(g1, g0)))

    if not ratios or all(rho <= 1 + Fraction(2) / max(k, step) for k, rho in ratios):
        (ka, ga), (kb, gb) = half[0], half[-1]
        m = Fraction(gb - ga) / (kb - ka) if kb != ka else Fraction(0)
        m = max(m, Fraction(0))
        c = max(Fraction(g) - m * k for k, g in growth)
        residual = max(Fraction(g) - m * k for k, g in half) - min(Fraction(g) - m * k for k, g in half)
        cls = Overconvergent(m=m, c=c, residual=residual, range_used=rng)
        assert all(cls.holds(k, w) for k, w in profile.entries)
        return cls

    logs = [e * math.log(float(rho), p) for _, rho in ratios if rho > 0]
    r = Fraction(round(median(logs) * 2 * e), 2 * e)
    if r <= 0:
        return Inconclusive("growth neither linear nor exponential", rng)
    normalized = [(k, g / p ** float(r * k)) for k, g in growth]
    tail = [v for k, v in normalized if rng[0] <= k <= rng[1] and v > 0]
    if len(tail) >= 3 and all(b > a * 1.000001 for a, b in zip(tail, tail[1:])):
        return Inconclusive(f"normalized ratios increase at rate {r}", rng)
    c = _round_up_fraction(max(v for _, v in normalized))
    cls = LogDecay(r=r, c=c, p=p, residual=max(logs) - min(logs), range_used=rng)
    # float rounding guard: bump c until the exact check passes everywhere
    while not all(cls.holds(k, w) for k, w in profile.entries):
        c = c * Fraction(1000001, 1000000)
        cls = LogDecay(r=r, c=c, p=p, residual=cls.residual, range_used=rng)
    return cls
