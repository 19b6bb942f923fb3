"""Minimal Frobenius representatives of rank-one unit-root objects.

A unit-root Frobenius ``lam`` is only defined up to ``sigma(a)/a``.  The minimal
representative is the unique ``sigma(a)/a * lam`` with no term at a nonzero
exponent divisible by q.
"""

from __future__ import annotations

from .errors import ContractError, ConvergenceError
from .series import PadicLaurentSeries, frobenius_apply


def _offending(lam: PadicLaurentSeries):
    """The q-divisible nonzero exponent of lowest pi-level (most negative on ties)."""
    q = lam.ctx.q
    vals = lam.term_valuations()
    best = None
    for n, v in vals.items():
        if n == 0 or n % q:
            continue
        key = (v, n)
        if best is None or key < best:
            best = key
    return best


def twist_to_minimal(lam: PadicLaurentSeries, budget: int | None = None
                     ) -> tuple[PadicLaurentSeries, PadicLaurentSeries]:
    """Return ``(lam_min, a)`` with ``a * lam_min == sigma(a) * lam`` and ``a = 1 mod pi``.

    Each step removes the worst offending term ``b T^(q m)`` by multiplying
    ``a`` with ``1 - b T^m``; the pi-level of the worst offender never drops and
    the exponent magnitude shrinks on ties, so the loop terminates.
    """
    ctx = lam.ctx
    one = PadicLaurentSeries.one(ctx)
    if lam.is_zero() or (lam - one).valuation() < 1:
        raise ContractError("twist_to_minimal", "lam must be congruent to 1 mod pi")
    if budget is None:
        budget = 4 * ctx.prec * max(1, len(lam)) + 16
    a = one
    cur = lam
    for _ in range(budget):
        off = _offending(cur)
        if off is None:
            return cur, a
        _, n = off
        b = cur.terms[n]
        step = PadicLaurentSeries(ctx, {0: ctx.one_digits, n // ctx.q: ctx.neg(b)})
        a = a * step
        cur = frobenius_apply(a) * lam * a.invert()
    raise ConvergenceError("twist_to_minimal", "iteration budget exhausted",
                           f"budget={budget}; window may be too small")
