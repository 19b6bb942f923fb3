"""Ramification breaks read off minimal Frobenius elements, and their growth laws.

For a minimal Frobenius ``lam`` (no exponent divisible by q) of a rank-one
unit-root object, the upper ramification breaks of the associated Z_p-tower
are ``s_k = -w_k(lam)``.  Two growth laws are fitted to such sequences:

* pseudo-stable: ``s_(km+i) = a_i p^(m r k) + b_i`` for ``k >> 0``;
* log-bounded:   ``s_k <= c p^(r k)``.

Everything here is exact rational arithmetic.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import median
from typing import Sequence

from .context import PrimeContext
from .decay import DecayProfile
from .errors import ContractError
from .series import INF, PadicLaurentSeries, partial_valuation

HYPOTHESES_TAG = "hypotheses of the monodromy theorem not met"


@dataclass(frozen=True)
class BreakSequence:
    """Breaks ``s_start, s_start+1, ...`` of a Z_p-tower.

    ``start`` is the index of the first break; levels before it carry no
    ramification (they are dropped on extraction).  The sequence is required
    to be nondecreasing; strict increase is recorded in :attr:`validated`.
    """

    breaks: tuple
    p: int
    e: int = 1
    start: int = 1
    ctx: PrimeContext | None = field(default=None, compare=False)

    def __post_init__(self):
        b = tuple(Fraction(x) for x in self.breaks)
        object.__setattr__(self, "breaks", b)
        if self.start < 1:
            raise ContractError("BreakSequence", "start index must be >= 1", f"start={self.start}")
        if any(x < 0 for x in b):
            raise ContractError("BreakSequence", "breaks must be nonnegative")
        if any(x > y for x, y in zip(b, b[1:])):
            raise ContractError("BreakSequence", "breaks must be nondecreasing")
        if any((x * self.e).denominator != 1 for x in b):
            raise ContractError("BreakSequence", "break denominators must divide e")

    def __len__(self):
        return len(self.breaks)

    def __iter__(self):
        return iter(self.breaks)

    def __getitem__(self, j):
        return self.breaks[j]

    @property
    def indices(self) -> range:
        return range(self.start, self.start + len(self.breaks))

    def items(self):
        """Pairs ``(n, s_n)``."""
        return list(zip(self.indices, self.breaks))

    def at(self, n: int) -> Fraction:
        j = n - self.start
        if not 0 <= j < len(self.breaks):
            raise ContractError("BreakSequence", "break index out of range", f"n={n}")
        return self.breaks[j]

    @property
    def strictly_increasing(self) -> bool:
        return all(x < y for x, y in zip(self.breaks, self.breaks[1:]))

    @property
    def validated(self) -> bool:
        """``s_(n+1) >= p s_n`` throughout, and strictly increasing."""
        p = self.p
        return self.strictly_increasing and all(y >= p * x for x, y in zip(self.breaks, self.breaks[1:]))

    def violations(self) -> list[str]:
        """Every failure of ``s_(n+1) > p s_n`` or ``p does not divide s_n``."""
        p = self.p
        out = []
        items = self.items()
        for (n, x), (_, y) in zip(items, items[1:]):
            if not y > p * x:
                out.append(f"s_{n + 1} = {y} <= p*s_{n} = {p * x}")
        for n, x in items:
            if x.denominator == 1 and x.numerator % p == 0:
                out.append(f"p divides s_{n} = {x}")
        return out

    @property
    def hypotheses_met(self) -> bool:
        return not self.violations()

    def row_flags(self) -> list[bool]:
        """Per-index check of ``s_n >= p s_(n-1)`` (the first row is vacuous)."""
        flags = [True]
        for x, y in zip(self.breaks, self.breaks[1:]):
            flags.append(y > x and y >= self.p * x)
        return flags[:len(self.breaks)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "w_k", "s_k", "validated"])
        for (n, s), ok in zip(self.items(), self.row_flags()):
            w.writerow([n, _fmt(-s), _fmt(s), str(ok).lower()])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"p": self.p, "e": self.e, "start": self.start,
                "breaks": [_fmt(x) for x in self.breaks], "validated": self.validated,
                "violations": self.violations()}

    @classmethod
    def from_dict(cls, d: dict) -> BreakSequence:
        return cls(tuple(Fraction(x) for x in d["breaks"]), int(d["p"]), int(d.get("e", 1)),
                   int(d.get("start", 1)))


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else str(x)


def _from_w_values(ws: Sequence, p: int, e: int, ctx=None) -> BreakSequence:
    """Breaks from ``w_1, w_2, ...``: stop at the first +inf, drop leading zeros."""
    s = []
    for w in ws:
        if w == INF:
            break
        s.append(-Fraction(w))
    start = 1
    while s and s[0] == 0:
        s.pop(0)
        start += 1
    return BreakSequence(tuple(s), p, e, start, ctx)


def break_sequence_extract(lam_min: PadicLaurentSeries, K: int) -> BreakSequence:
    """``s_k = -w_k(lam_min)`` for ``k = 1..K``.

    Leading levels with ``s_k = 0`` (a Frobenius congruent to 1 modulo a
    higher power of pi) are unramified and dropped; ``start`` records the
    first ramified level.  A +inf reading ends the sequence early.
    """
    ctx = lam_min.ctx
    if partial_valuation(lam_min, 0) != 0:
        raise ContractError("break_sequence_extract", "w_0(lam_min) = 0 required",
                            f"w_0={partial_valuation(lam_min, 0)}")
    if K < 0:
        raise ContractError("break_sequence_extract", "K must be nonnegative", f"K={K}")
    ws = [partial_valuation(lam_min, k) for k in range(1, K + 1)]
    return _from_w_values(ws, ctx.p, ctx.e, ctx)


def min_over_conjugates(profiles: Sequence[DecayProfile]) -> BreakSequence:
    """``s_k = -min_g w_k(lam_g)`` over the integer levels ``k >= 1``."""
    if not profiles:
        raise ContractError("min_over_conjugates", "need at least one profile")
    ctx = profiles[0].ctx
    keys = [k for k, _ in profiles[0].entries]
    for pr in profiles[1:]:
        if not pr.ctx.compatible(ctx):
            raise ContractError("min_over_conjugates", "profiles must share one context")
        if [k for k, _ in pr.entries] != keys:
            raise ContractError("min_over_conjugates", "profiles must cover the same levels")
    ws = []
    for idx, k in enumerate(keys):
        if k < 1 or Fraction(k).denominator != 1:
            continue
        ws.append(min(pr.entries[idx][1] for pr in profiles))
    return _from_w_values(ws, ctx.p, ctx.e, ctx)


# -- fits -----------------------------------------------------------------------


@dataclass(frozen=True)
class PseudoStableFit:
    m: int
    r: Fraction
    a: tuple
    b: tuple
    k0: int
    p: int
    tags: tuple = ()

    def predict(self, n: int) -> Fraction:
        k, i = divmod(n, self.m)
        return self.a[i] * Fraction(self.p) ** int(self.m * self.r * k) + self.b[i]

    def to_dict(self) -> dict:
        return {"m": self.m, "r": str(self.r), "a": [str(x) for x in self.a],
                "b": [str(x) for x in self.b], "k0": self.k0, "tags": list(self.tags)}


def fit_pseudo_stable(s: BreakSequence, r, m: int) -> PseudoStableFit | None:
    """Exact fit of ``s_(km+i) = a_i p^(m r k) + b_i`` (``0 <= i < m``).

    ``a_i, b_i`` come from the last two points of each residue class; the
    onset ``k0`` is the least period index from which every point matches.
    A fit must be confirmed by at least one point per class beyond the two
    it was solved from, otherwise None is returned.
    """
    r = Fraction(r)
    if m < 1:
        raise ContractError("fit_pseudo_stable", "period m must be >= 1", f"m={m}")
    if (m * r).denominator != 1 or r <= 0:
        raise ContractError("fit_pseudo_stable", "m*r must be a positive integer", f"m={m}, r={r}")
    if len(s) < 3 * m:
        raise ContractError("fit_pseudo_stable", "need at least 3 full periods of data",
                            f"len={len(s)}, m={m}")
    p = s.p
    step = int(m * r)
    classes: dict[int, list] = {i: [] for i in range(m)}
    for n, v in s.items():
        k, i = divmod(n, m)
        classes[i].append((k, v))
    a, b = [], []
    for i in range(m):
        pts = classes[i]
        (k1, v1), (k2, v2) = pts[-2], pts[-1]
        ai = Fraction(v2 - v1) / (p ** (step * k2) - p ** (step * k1))
        if ai <= 0:
            return None
        a.append(ai)
        b.append(v2 - ai * p ** (step * k2))

    def ok(i, k, v):
        return a[i] * Fraction(p) ** (step * k) + b[i] == v

    # scan the onset backwards from the last period index
    k_hi = max(k for pts in classes.values() for k, _ in pts)
    k0 = k_hi + 1
    while True:
        cand = k0 - 1
        if not all(ok(i, k, v) for i, pts in classes.items() for k, v in pts if k == cand):
            break
        k0 = cand
        if not any(k < k0 for pts in classes.values() for k, _ in pts):
            break
    if any(sum(1 for k, _ in pts if k >= k0) < 3 for pts in classes.values()):
        return None
    tags = (HYPOTHESES_TAG,) + tuple(s.violations()) if s.violations() else ()
    return PseudoStableFit(m, r, tuple(a), tuple(b), k0, p, tags)


def _bound_holds(v: Fraction, c: Fraction, p: int, x: Fraction) -> bool:
    """Exact test of ``v <= c p^x``."""
    if v <= 0:
        return True
    ratio = v / c
    return ratio ** x.denominator <= Fraction(p) ** x.numerator


def check_log_bounded(s: BreakSequence, r) -> Fraction | None:
    """Evidence for ``s_k <= c p^(r k)``: the constant ``c``, or None.

    None is returned when the normalized ratios ``s_k / p^(r k)`` increase
    throughout the last half of the range and the observed growth rate
    ``log_p(s_(k+1)/s_k)`` (rounded to the nearest ``1/(2e)``) exceeds ``r``.
    The returned ``c`` is exact when ``r k`` is an integer at the maximizing
    index and otherwise a rational upper bound; either way the bound is
    verified exactly on every observed index.
    """
    r = Fraction(r)
    if len(s) == 0:
        raise ContractError("check_log_bounded", "break sequence must be nonempty")
    p, e = s.p, s.e
    items = s.items()
    ratios = [float(v) / p ** float(r * n) for n, v in items]
    half = ratios[len(ratios) // 2:]
    if len(half) >= 2 and all(y > x for x, y in zip(half, half[1:])):
        tail = items[len(items) // 2:]
        rates = [math.log(float(y) / float(x), p) for (_, x), (_, y) in zip(tail, tail[1:]) if x > 0]
        if rates and Fraction(round(median(rates) * 2 * e), 2 * e) > r:
            return None
    best_n, best_v = max(items, key=lambda nv: float(nv[1]) / p ** float(r * nv[0]))
    x = r * best_n
    if x.denominator == 1:
        c = best_v / Fraction(p) ** x.numerator
    else:
        c = Fraction(math.ceil(float(best_v) / p ** float(x) * 10**12), 10**12)
    while not all(_bound_holds(v, c, p, r * n) for n, v in items):
        c *= Fraction(10**12 + 1, 10**12)
    return c
