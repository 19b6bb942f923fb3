"""Arithmetic universe: the prime, the Eisenstein coefficient ring and the
truncation levels.

Coefficients live in ``Z_p[pi]/(pi^e - p)`` and are known modulo ``pi^prec``.
They are stored as tuples of ``e`` digits, digit ``j`` being the integer
coefficient of ``pi^j``; digit ``j`` is reduced modulo
``p^ceil((prec - j)/e)``, which makes the representation canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

from .errors import ContractError, NotAUnit

Digits = tuple  # tuple[int, ...] of length e


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def vp_int(n: int, p: int) -> int | None:
    """p-adic valuation of a nonzero integer; None for 0."""
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PrimeContext:
    p: int
    f: int = 1
    e: int = 1
    prec: int = 6
    window: int = 1000

    def __post_init__(self):
        if not is_prime(self.p) or self.p < 3:
            raise ContractError("PrimeContext", "p must be a prime >= 3", f"p={self.p}")
        if self.f < 1 or self.e < 1:
            raise ContractError("PrimeContext", "f and e must be >= 1", f"f={self.f}, e={self.e}")
        if self.prec < 1 or self.window < 1:
            raise ContractError("PrimeContext", "prec and window must be positive",
                                f"prec={self.prec}, window={self.window}")

    @property
    def q(self) -> int:
        return self.p ** self.f

    def with_(self, **changes) -> PrimeContext:
        return replace(self, **changes)

    def compatible(self, other: PrimeContext) -> bool:
        return (self.p, self.f, self.e, self.prec, self.window) == (
            other.p, other.f, other.e, other.prec, other.window)

    # -- digit arithmetic ---------------------------------------------------

    @cached_property
    def moduli(self) -> tuple[int, ...]:
        N, e, p = self.prec, self.e, self.p
        return tuple(p ** max(0, -(-(N - j) // e)) for j in range(e))

    @cached_property
    def zero_digits(self) -> Digits:
        return (0,) * self.e

    @cached_property
    def one_digits(self) -> Digits:
        return self.reduce((1,) + (0,) * (self.e - 1))

    def reduce(self, d) -> Digits:
        return tuple(x % m for x, m in zip(d, self.moduli))

    def from_int(self, n: int) -> Digits:
        return self.reduce((n,) + (0,) * (self.e - 1))

    def pi_power(self, k: int, unit: int = 1) -> Digits:
        """Digits of ``unit * pi^k`` for k >= 0."""
        if k < 0:
            raise ContractError("pi_power", "exponent must be nonnegative", f"k={k}")
        a, b = divmod(k, self.e)
        d = [0] * self.e
        d[b] = unit * self.p ** a
        return self.reduce(d)

    def add(self, x: Digits, y: Digits) -> Digits:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def sub(self, x: Digits, y: Digits) -> Digits:
        return tuple((a - b) % m for a, b, m in zip(x, y, self.moduli))

    def neg(self, x: Digits) -> Digits:
        return tuple((-a) % m for a, m in zip(x, self.moduli))

    def mul_raw(self, x: Digits, y: Digits) -> list[int]:
        """Unreduced product digits (pi^e folded back into p)."""
        e = self.e
        if e == 1:
            return [x[0] * y[0]]
        out = [0] * e
        p = self.p
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                k = i + j
                if k >= e:
                    out[k - e] += p * a * b
                else:
                    out[k] += a * b
        return out

    def mul(self, x: Digits, y: Digits) -> Digits:
        return self.reduce(self.mul_raw(x, y))

    def valuation(self, x: Digits) -> int:
        """pi-adic valuation, capped at prec (= zero at this precision)."""
        best = self.prec
        e, p = self.e, self.p
        for j, d in enumerate(x):
            if d:
                v = j
                while d % p == 0:
                    d //= p
                    v += e
                best = min(best, v)
        return best

    def is_zero(self, x: Digits) -> bool:
        return not any(x)

    def inverse(self, x: Digits) -> Digits:
        if x[0] % self.p == 0:
            raise NotAUnit("coefficient inverse", "coefficient is not a unit")
        inv = self.from_int(pow(x[0], -1, self.p))
        two = self.from_int(2)
        # Newton iteration doubles the number of correct pi-digits each pass.
        for _ in range(self.prec.bit_length() + 2):
            inv = self.mul(inv, self.sub(two, self.mul(x, inv)))
        return inv

    def div_pi(self, x: Digits, k: int = 1) -> Digits:
        """Exact quotient x / pi^k for v_pi(x) >= k.

        The top k pi-digits of the quotient are not determined by x; they are
        taken to be zero.
        """
        if k == 0:
            return x
        if self.valuation(x) < k:
            raise ContractError("div_pi", "coefficient not divisible by pi^k", f"k={k}")
        e, p = self.e, self.p
        d = list(x)
        for _ in range(k):
            # x = d0 + d1 pi + ...; d0 = p*c so d0/pi = c*pi^(e-1)
            c = d[0] // p
            d = d[1:] + [c] if e > 1 else [c]
        return self.reduce(d)

    def unit_part(self, x: Digits) -> tuple[int, Digits]:
        """Return (v, u) with x = pi^v * u, u a unit (top digits of u zero)."""
        v = self.valuation(x)
        if v >= self.prec:
            raise ContractError("unit_part", "coefficient is zero at this precision")
        return v, self.div_pi(x, v)

    def digits_from_strings(self, strs) -> Digits:
        if len(strs) != self.e:
            raise ContractError("series literal", "digits array must have length e",
                                f"got {len(strs)}, e={self.e}")
        return self.reduce(tuple(int(s) for s in strs))

    def to_dict(self) -> dict:
        return {"p": self.p, "f": self.f, "e": self.e, "prec": self.prec, "window": self.window}

    @classmethod
    def from_dict(cls, d: dict) -> PrimeContext:
        return cls(p=int(d["p"]), f=int(d.get("f", 1)), e=int(d.get("e", 1)),
                   prec=int(d["prec"]), window=int(d["window"]))


@dataclass(frozen=True)
class CoeffElem:
    """An element of ``Z_p[pi]/(pi^e - p)`` modulo ``pi^prec``."""

    ctx: PrimeContext
    digits: Digits

    def __post_init__(self):
        object.__setattr__(self, "digits", self.ctx.reduce(tuple(self.digits)))

    @classmethod
    def from_int(cls, ctx: PrimeContext, n: int) -> CoeffElem:
        return cls(ctx, ctx.from_int(n))

    @classmethod
    def pi(cls, ctx: PrimeContext, k: int = 1) -> CoeffElem:
        return cls(ctx, ctx.pi_power(k))

    def _check(self, other):
        if isinstance(other, int):
            return self.ctx.from_int(other)
        if not self.ctx.compatible(other.ctx):
            from .errors import ContextMismatch
            raise ContextMismatch("CoeffElem", "operands have different contexts")
        return other.digits

    def __add__(self, other):
        return CoeffElem(self.ctx, self.ctx.add(self.digits, self._check(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return CoeffElem(self.ctx, self.ctx.sub(self.digits, self._check(other)))

    def __rsub__(self, other):
        return CoeffElem(self.ctx, self.ctx.sub(self._check(other), self.digits))

    def __neg__(self):
        return CoeffElem(self.ctx, self.ctx.neg(self.digits))

    def __mul__(self, other):
        return CoeffElem(self.ctx, self.ctx.mul(self.digits, self._check(other)))

    __rmul__ = __mul__

    def inverse(self) -> CoeffElem:
        return CoeffElem(self.ctx, self.ctx.inverse(self.digits))

    @property
    def valuation(self) -> int:
        return self.ctx.valuation(self.digits)

    def is_zero(self) -> bool:
        return not any(self.digits)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.digits == self.ctx.from_int(other)
        if isinstance(other, CoeffElem):
            return self.ctx.compatible(other.ctx) and self.digits == other.digits
        return NotImplemented

    def __hash__(self):
        return hash(self.digits)

    def __repr__(self):
        return f"CoeffElem({format_digits(self.digits)})"


def format_digits(d: Digits) -> str:
    """Human-readable form, e.g. ``3 + 2*pi``."""
    parts = []
    for j, c in enumerate(d):
        if not c:
            continue
        if j == 0:
            parts.append(str(c))
        elif j == 1:
            parts.append(f"{c}*pi" if c != 1 else "pi")
        else:
            parts.append(f"{c}*pi^{j}" if c != 1 else f"pi^{j}")
    return " + ".join(parts) if parts else "0"
