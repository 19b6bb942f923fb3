"""Solvers for recursive Frobenius equations.

``R(a, b)`` is the unique solution of ``x = a sigma(x) + b`` when
``v_pi(a) >= 1``::

    R(a, b) = b + a b^s + a^(1+s) b^(s^2) + a^(1+s+s^2) b^(s^3) + ...

``S`` iterates it: ``S(a_1..a_i; b_1..b_i) = S(a_1..a_{i-1}; b_1..b_{i-2}, b_{i-1} sigma(R(a_i, b_i)))``
and ``T(pi^s; b_1..b_i)`` is ``S`` with every ``a_j = pi^s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ContractError, WindowOverflow
from .series import PadicLaurentSeries, frobenius_apply


@dataclass(frozen=True)
class IteratedEquation:
    a_list: tuple
    b_list: tuple

    def __post_init__(self):
        a, b = tuple(self.a_list), tuple(self.b_list)
        object.__setattr__(self, "a_list", a)
        object.__setattr__(self, "b_list", b)
        if not a or len(a) != len(b):
            raise ContractError("IteratedEquation", "a_list and b_list must be nonempty and equal length")
        ctx = a[0].ctx
        if not all(x.ctx.compatible(ctx) for x in a + b):
            raise ContractError("IteratedEquation", "all entries must share one context")
        for x in a:
            if x.valuation() < 1:
                raise ContractError("IteratedEquation", "every a_i needs v_pi(a_i) >= 1")

    @property
    def ctx(self):
        return self.a_list[0].ctx


def _window_needed(a: PadicLaurentSeries, b: PadicLaurentSeries, depth: int) -> int:
    """Largest exponent magnitude touched by the first ``depth`` terms of R(a, b)."""
    q = a.ctx.q
    ea, eb = a.max_abs_exponent(), b.max_abs_exponent()
    need = eb
    acc = 0
    for i in range(depth):
        need = max(need, acc + q ** i * eb)
        acc += q ** i * ea
    return need


def solve_R(a: PadicLaurentSeries, b: PadicLaurentSeries) -> PadicLaurentSeries:
    """Solve ``x = a sigma(x) + b`` exactly at the working precision."""
    ctx = a.ctx
    if not b.ctx.compatible(ctx):
        raise ContractError("solve_R", "a and b must share one context")
    va = a.valuation()
    if va < 1:
        raise ContractError("solve_R", "v_pi(a) >= 1 required (series diverges)", f"v_pi(a)={va}")
    if b.is_zero():
        return b
    N = ctx.prec
    vb = b.valuation()
    # term i has valuation >= vb + i*va; it vanishes once that reaches N
    depth = max(0, -(-(N - vb) // va))
    need = _window_needed(a, b, depth)
    if need > ctx.window:
        raise WindowOverflow("solve_R", need)
    total = b
    prefix = PadicLaurentSeries.one(ctx)  # a^(1 + s + ... + s^(i-1))
    sa = a
    sb = b
    for i in range(1, depth):
        if i > 1:
            sa = frobenius_apply(sa)
        prefix = prefix * sa
        if prefix.is_zero():
            break
        sb = frobenius_apply(sb)
        total = total + prefix * sb
    return total


def solve_S(eq: IteratedEquation | None = None, *, a_list=None, b_list=None) -> PadicLaurentSeries:
    """``S(a_1..a_i; b_1..b_i)`` through the recursion on the last slot."""
    if eq is None:
        eq = IteratedEquation(tuple(a_list), tuple(b_list))
    a, b = eq.a_list, eq.b_list
    y = solve_R(a[-1], b[-1])
    for j in range(len(a) - 2, -1, -1):
        if y.is_zero():
            return y
        y = solve_R(a[j], b[j] * frobenius_apply(y))
    return y


def solve_T_iter(s: int, b_list: Sequence[PadicLaurentSeries]) -> PadicLaurentSeries:
    """``T(pi^s; b_1..b_i)``: ``S`` with every ``a_j = pi^s``."""
    if s < 1:
        raise ContractError("solve_T_iter", "s >= 1 required", f"s={s}")
    if not b_list:
        raise ContractError("solve_T_iter", "b_list must be nonempty")
    ctx = b_list[0].ctx
    pis = PadicLaurentSeries.monomial(ctx, 0, 1, pi_exp=s)
    return solve_S(IteratedEquation((pis,) * len(b_list), tuple(b_list)))


def mu_product(m_list: Sequence[PadicLaurentSeries], a_list: Sequence[int]) -> PadicLaurentSeries:
    """``prod_i sigma^(a_i)(m_i)`` for nondecreasing ``a_i >= 0``."""
    if len(m_list) != len(a_list) or not m_list:
        raise ContractError("mu_product", "m_list and a_list must be nonempty and equal length")
    if any(x < 0 for x in a_list) or any(x > y for x, y in zip(a_list, a_list[1:])):
        raise ContractError("mu_product", "a_list must be nondecreasing and nonnegative")
    out = PadicLaurentSeries.one(m_list[0].ctx)
    for m, k in zip(m_list, a_list):
        out = out * frobenius_apply(m, k)
    return out


def expansion_terms(a: PadicLaurentSeries, b: PadicLaurentSeries, c: PadicLaurentSeries):
    """The summands ``S(a^(k+1); b^k, c)`` of ``R(a + b, c)``, until they vanish."""
    ctx = a.ctx
    vb = b.valuation()
    k = 0
    while k * vb < ctx.prec:
        yield solve_S(IteratedEquation((a,) * (k + 1), (b,) * k + (c,)))
        k += 1
