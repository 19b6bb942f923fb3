"""Truncated p-adic Laurent series.

A :class:`PadicLaurentSeries` is a finite sparse sum ``sum a_n T^n`` with
``a_n`` in ``Z_p[pi]/(pi^e - p)``, exact modulo ``pi^prec`` and restricted to
exponents in ``[-window, window]``.  Nothing is ever truncated silently: any
operation whose result needs an exponent outside the window raises
:class:`~unitroot.errors.WindowOverflow`.

The Frobenius is ``sigma_T : T -> T^q`` and acts trivially on constants.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

from .context import CoeffElem, Digits, PrimeContext, format_digits
from .errors import ContextMismatch, ContractError, NotAUnit, PrecisionError, WindowOverflow

INF = math.inf


class PadicLaurentSeries:
    __slots__ = ("ctx", "terms", "_vals", "_hash")

    def __init__(self, ctx: PrimeContext, terms: Mapping[int, Digits] | None = None, *,
                 _canonical: bool = False):
        self.ctx = ctx
        if terms is None:
            terms = {}
        if _canonical:
            self.terms = dict(terms)
        else:
            W = ctx.window
            clean = {}
            for n, d in terms.items():
                if isinstance(d, CoeffElem):
                    d = d.digits
                elif isinstance(d, int):
                    d = ctx.from_int(d)
                else:
                    d = ctx.reduce(tuple(d))
                if any(d):
                    if not -W <= n <= W:
                        raise WindowOverflow("PadicLaurentSeries", abs(n), f"exponent {n}")
                    clean[int(n)] = d
            self.terms = clean
        self._vals = None
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ctx: PrimeContext) -> PadicLaurentSeries:
        return cls(ctx, {}, _canonical=True)

    @classmethod
    def one(cls, ctx: PrimeContext) -> PadicLaurentSeries:
        return cls.constant(ctx, 1)

    @classmethod
    def constant(cls, ctx: PrimeContext, c) -> PadicLaurentSeries:
        return cls(ctx, {0: c})

    @classmethod
    def monomial(cls, ctx: PrimeContext, n: int, c=1, pi_exp: int = 0) -> PadicLaurentSeries:
        """``c * pi^pi_exp * T^n``."""
        d = c.digits if isinstance(c, CoeffElem) else (ctx.from_int(c) if isinstance(c, int)
                                                       else ctx.reduce(tuple(c)))
        if pi_exp:
            d = ctx.mul(d, ctx.pi_power(pi_exp))
        return cls(ctx, {n: d})

    @classmethod
    def from_ints(cls, ctx: PrimeContext, coeffs: Mapping[int, int]) -> PadicLaurentSeries:
        """Series from ``{exponent: integer coefficient}`` (pi^0 digit)."""
        return cls(ctx, {n: ctx.from_int(c) for n, c in coeffs.items()})

    # -- basic queries --------------------------------------------------------

    def _check(self, other: PadicLaurentSeries, op: str) -> None:
        if not self.ctx.compatible(other.ctx):
            raise ContextMismatch(op, "operands must share one context")

    def coeff(self, n: int) -> CoeffElem:
        return CoeffElem(self.ctx, self.terms.get(n, self.ctx.zero_digits))

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[int]:
        return sorted(self.terms)

    def term_valuations(self) -> dict[int, int]:
        if self._vals is None:
            val = self.ctx.valuation
            self._vals = {n: val(d) for n, d in self.terms.items()}
        return self._vals

    def valuation(self) -> int:
        """pi-adic valuation of the series (``prec`` for zero)."""
        vals = self.term_valuations()
        return min(vals.values()) if vals else self.ctx.prec

    def max_abs_exponent(self) -> int:
        return max((abs(n) for n in self.terms), default=0)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = PadicLaurentSeries.constant(self.ctx, other)
        if not isinstance(other, PadicLaurentSeries):
            return NotImplemented
        return self.ctx.compatible(other.ctx) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for n in sorted(self.terms, reverse=True):
            c = format_digits(self.terms[n])
            if " + " in c:
                c = f"({c})"
            if n == 0:
                parts.append(c)
            else:
                mono = "T" if n == 1 else f"T^{n}"
                parts.append(mono if c == "1" else f"{c}*{mono}")
        return " + ".join(parts)

    # -- ring operations ------------------------------------------------------

    def _coerce(self, other) -> PadicLaurentSeries:
        if isinstance(other, PadicLaurentSeries):
            return other
        if isinstance(other, (int, CoeffElem)):
            return PadicLaurentSeries.constant(self.ctx, other)
        raise TypeError(f"cannot combine series with {type(other).__name__}")

    def __add__(self, other) -> PadicLaurentSeries:
        other = self._coerce(other)
        self._check(other, "series_add")
        ctx = self.ctx
        out = dict(self.terms)
        add = ctx.add
        for n, d in other.terms.items():
            if n in out:
                s = add(out[n], d)
                if any(s):
                    out[n] = s
                else:
                    del out[n]
            else:
                out[n] = d
        return PadicLaurentSeries(ctx, out, _canonical=True)

    __radd__ = __add__

    def __neg__(self) -> PadicLaurentSeries:
        neg = self.ctx.neg
        return PadicLaurentSeries(self.ctx, {n: neg(d) for n, d in self.terms.items()},
                                  _canonical=True)

    def __sub__(self, other) -> PadicLaurentSeries:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> PadicLaurentSeries:
        return self._coerce(other) - self

    def __mul__(self, other) -> PadicLaurentSeries:
        if isinstance(other, (int, CoeffElem)):
            return self.scale(other)
        other = self._coerce(other)
        self._check(other, "series_mul")
        return _multiply(self, other)

    __rmul__ = __mul__

    def scale(self, c) -> PadicLaurentSeries:
        """Multiply by a constant coefficient."""
        ctx = self.ctx
        d = c.digits if isinstance(c, CoeffElem) else ctx.from_int(c)
        mul = ctx.mul
        out = {}
        for n, x in self.terms.items():
            y = mul(x, d)
            if any(y):
                out[n] = y
        return PadicLaurentSeries(ctx, out, _canonical=True)

    def shift(self, m: int) -> PadicLaurentSeries:
        """Multiply by ``T^m``."""
        W = self.ctx.window
        out = {}
        for n, d in self.terms.items():
            if not -W <= n + m <= W:
                raise WindowOverflow("shift", abs(n + m))
            out[n + m] = d
        return PadicLaurentSeries(self.ctx, out, _canonical=True)

    def mul_pi(self, k: int) -> PadicLaurentSeries:
        if k < 0:
            return self.div_pi(-k)
        return self.scale(CoeffElem.pi(self.ctx, k)) if k else self

    def div_pi(self, k: int) -> PadicLaurentSeries:
        """Exact quotient by ``pi^k``; requires ``v_pi >= k``.

        The quotient is only determined modulo ``pi^(prec-k)``; the top digits
        are taken to be zero.
        """
        if k == 0:
            return self
        if self.valuation() < k:
            raise ContractError("div_pi", "series not divisible by pi^k", f"k={k}")
        ctx = self.ctx
        out = {}
        for n, d in self.terms.items():
            y = ctx.div_pi(d, k)
            if any(y):
                out[n] = y
        return PadicLaurentSeries(ctx, out, _canonical=True)

    def __pow__(self, k: int) -> PadicLaurentSeries:
        if k < 0:
            return self.invert() ** (-k)
        result = PadicLaurentSeries.one(self.ctx)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def invert(self) -> PadicLaurentSeries:
        return series_invert(self)

    def frobenius(self, iterate: int = 1) -> PadicLaurentSeries:
        return frobenius_apply(self, iterate)

    def reduce_mod_pi(self, level: int) -> PadicLaurentSeries:
        """Image modulo ``pi^level`` (``level <= prec``), as a series in the same context."""
        vals = self.term_valuations()
        if level >= self.ctx.prec:
            return self
        ctx = self.ctx
        mod_ctx_moduli = tuple(ctx.p ** max(0, -(-(level - j) // ctx.e)) for j in range(ctx.e))
        out = {}
        for n, d in self.terms.items():
            if vals[n] >= level:
                continue
            y = tuple(x % m for x, m in zip(d, mod_ctx_moduli))
            if any(y):
                out[n] = y
        return PadicLaurentSeries(ctx, out, _canonical=True)

    def restrict(self, predicate) -> PadicLaurentSeries:
        """Keep the terms whose exponent satisfies ``predicate``."""
        return PadicLaurentSeries(self.ctx, {n: d for n, d in self.terms.items() if predicate(n)},
                                  _canonical=True)

    # -- partial valuations ----------------------------------------------------

    def partial_valuation(self, k) -> int | float:
        return partial_valuation(self, k)

    # -- serialization -----------------------------------------------------------

    def to_json(self) -> dict:
        d = self.ctx.to_dict()
        d["terms"] = [[n, [str(x) for x in self.terms[n]]] for n in sorted(self.terms)]
        return d

    @classmethod
    def from_json(cls, obj: dict, ctx: PrimeContext | None = None) -> PadicLaurentSeries:
        if ctx is None:
            ctx = PrimeContext.from_dict(obj)
        terms: dict[int, Digits] = {}
        for n, digits in obj.get("terms", []):
            d = ctx.digits_from_strings(digits)
            n = int(n)
            terms[n] = ctx.add(terms[n], d) if n in terms else d
        return cls(ctx, terms)


def _multiply(x: PadicLaurentSeries, y: PadicLaurentSeries) -> PadicLaurentSeries:
    ctx = x.ctx
    N, W = ctx.prec, ctx.window
    if not x.terms or not y.terms:
        return PadicLaurentSeries.zero(ctx)
    if len(x.terms) > len(y.terms):
        x, y = y, x
    # bucket y by pi-valuation so that products already divisible by pi^N are skipped
    yv = y.term_valuations()
    buckets: dict[int, list] = {}
    for n, d in y.terms.items():
        buckets.setdefault(yv[n], []).append((n, d))
    levels = sorted(buckets.items())
    xv = x.term_valuations()
    if ctx.e == 1:
        acc: dict[int, int] = {}
        get = acc.get
        for n1, d1 in x.terms.items():
            v1 = xv[n1]
            c1 = d1[0]
            for v2, lst in levels:
                if v1 + v2 >= N:
                    break
                for n2, d2 in lst:
                    k = n1 + n2
                    acc[k] = get(k, 0) + c1 * d2[0]
        M = ctx.moduli[0]
        out = {}
        for k, c in acc.items():
            c %= M
            if c:
                out[k] = (c,)
    else:
        e = ctx.e
        acc2: dict[int, list] = {}
        mul_raw = ctx.mul_raw
        for n1, d1 in x.terms.items():
            v1 = xv[n1]
            for v2, lst in levels:
                if v1 + v2 >= N:
                    break
                for n2, d2 in lst:
                    k = n1 + n2
                    prod = mul_raw(d1, d2)
                    cur = acc2.get(k)
                    if cur is None:
                        acc2[k] = prod
                    else:
                        for j in range(e):
                            cur[j] += prod[j]
        out = {}
        reduce = ctx.reduce
        for k, c in acc2.items():
            r = reduce(c)
            if any(r):
                out[k] = r
    if out:
        lo, hi = min(out), max(out)
        if lo < -W or hi > W:
            raise WindowOverflow("series_mul", max(-lo, hi))
    return PadicLaurentSeries(ctx, out, _canonical=True)


# -- module-level operations ------------------------------------------------------


def series_add(x: PadicLaurentSeries, y: PadicLaurentSeries) -> PadicLaurentSeries:
    return x + y


def series_mul(x: PadicLaurentSeries, y: PadicLaurentSeries) -> PadicLaurentSeries:
    return x * y


def series_invert(x: PadicLaurentSeries) -> PadicLaurentSeries:
    """Inverse of a unit whose reduction modulo pi is a single monomial ``c T^m``.

    The monomial is normalized to exponent 0 first, then the inverse is
    found by Newton iteration ``z <- z (2 - x z)``.
    """
    ctx = x.ctx
    vals = x.term_valuations()
    unit_exps = [n for n, v in vals.items() if v == 0]
    if not unit_exps:
        raise NotAUnit("series_invert", "series is not a unit (no term with v_pi = 0)")
    if len(unit_exps) > 1:
        raise ContractError(
            "series_invert",
            "reduction mod pi must be a single monomial; its inverse is not a finite series",
            f"unit-level exponents {sorted(unit_exps)}")
    m = unit_exps[0]
    y = x.shift(-m) if m else x
    z = PadicLaurentSeries.constant(ctx, ctx.inverse(y.terms[0]))
    two = PadicLaurentSeries.constant(ctx, 2)
    for _ in range(ctx.prec.bit_length() + 1):
        z = z * (two - y * z)
    if y * z != PadicLaurentSeries.one(ctx):
        # the doubling bound above is always sufficient; keep iterating defensively
        for _ in range(ctx.prec):
            z = z * (two - y * z)
            if y * z == 1:
                break
    return z.shift(-m) if m else z


def frobenius_apply(x: PadicLaurentSeries, iterate: int = 1) -> PadicLaurentSeries:
    """``sigma_T^iterate``: exponent ``n -> n q^iterate``; constants fixed."""
    if iterate < 0:
        raise ContractError("frobenius_apply", "iterate must be nonnegative")
    if iterate == 0 or not x.terms:
        return x
    factor = x.ctx.q ** iterate
    need = factor * x.max_abs_exponent()
    if need > x.ctx.window:
        raise WindowOverflow("frobenius_apply", need)
    return PadicLaurentSeries(x.ctx, {n * factor: d for n, d in x.terms.items()}, _canonical=True)


def _level_of(k, e: int) -> int:
    level = Fraction(k) * e
    if level.denominator != 1 or level < 0:
        raise ContractError("partial_valuation", "k must lie in (1/e)Z>=0", f"k={k}, e={e}")
    return int(level)


def partial_valuation(x: PadicLaurentSeries, k) -> int | float:
    """``w_k(x) = min{ n : v_pi(a_n) <= k e }``, or ``INF`` when there is none.

    This is the T-adic valuation of ``x`` reduced modulo ``pi^(ke+1)``.
    Requires ``k e <= prec - 1``: higher levels are not determined.
    """
    level = _level_of(k, x.ctx.e)
    return partial_valuation_at_level(x, level)


def partial_valuation_at_level(x: PadicLaurentSeries, level: int) -> int | float:
    if level > x.ctx.prec - 1:
        raise PrecisionError("partial_valuation", "k*e must be at most prec - 1",
                             f"level={level}, prec={x.ctx.prec}")
    best = INF
    for n, v in x.term_valuations().items():
        if v <= level and n < best:
            best = n
    return best


def circ_split(x: PadicLaurentSeries) -> tuple[PadicLaurentSeries, PadicLaurentSeries]:
    """Split ``x = x_circ + sigma(descended)`` with no exponent of ``x_circ`` divisible by q."""
    q = x.ctx.q
    circ = {}
    down = {}
    for n, d in x.terms.items():
        if n % q:
            circ[n] = d
        else:
            down[n // q] = d
    return (PadicLaurentSeries(x.ctx, circ, _canonical=True),
            PadicLaurentSeries(x.ctx, down, _canonical=True))


def in_circ(x: PadicLaurentSeries) -> bool:
    q = x.ctx.q
    return all(n % q for n in x.terms)


def sum_series(ctx: PrimeContext, items: Iterable[PadicLaurentSeries]) -> PadicLaurentSeries:
    total = PadicLaurentSeries.zero(ctx)
    for s in items:
        total = total + s
    return total
