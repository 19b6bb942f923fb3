"""Seeded random Frobenius matrices.

Algorithm (fixed, so sweeps are reproducible bit for bit):

* Trial ``t`` of a sweep with seed ``S`` draws from
  ``numpy.random.Generator(PCG64(SeedSequence([S, t])))``; trials are independent
  of how many others run and of their order.
* The congruence level ``N_c`` is uniform on ``[s + 2, s + 4]``, where ``s`` is
  the first slope gap of the diagonal exponents.
* Every entry is ``pi^(r_i) [i == j] + pi^(N_c) * (1 or 2 monomials)``; monomial
  exponents are uniform on ``[-8, -1]`` and coefficients are ``u + p*h`` with
  ``u`` uniform on ``[1, p-1]`` and ``h`` uniform on ``[0, p^min(prec, 12))``.
* Reduced inputs draw row-1 off-diagonal exponents prime to ``q`` (so they lie
  in ``O^circ``); unreduced ones do not, and their column-1 entries below the
  diagonal also get one positive exponent uniform on ``[1, 4]``.
* ``split`` instances are ``B U sigma(B)^-1`` with ``U`` upper triangular in the
  first column (a genuine unit-root sub-object) and ``B = L_(2,1)(b)`` for a
  random ``b`` of the same shape as the off-diagonal entries.
"""

from __future__ import annotations

import numpy as np

from .context import PrimeContext
from .errors import ContractError
from .isocrystal import ElementaryTransform, IsocrystalMatrix, newton_data_from_exponents, skew_conjugate
from .series import PadicLaurentSeries

EXP_LO, EXP_HI = -8, -1


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    if seed < 0 or seed >= 2 ** 64:
        raise ContractError("sweep", "seed must be an unsigned 64-bit integer", f"seed={seed}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


def _coeff(rng, p: int, prec: int) -> int:
    return int(rng.integers(1, p)) + p * int(rng.integers(0, p ** min(prec, 12)))


def random_series(rng, ctx: PrimeContext, level: int, *, circ: bool = False, positive: bool = False,
                  count: int | None = None) -> PadicLaurentSeries:
    """``pi^level`` times 1-2 random monomials with exponents in [-8, -1]."""
    if count is None:
        count = int(rng.integers(1, 3))
    out = PadicLaurentSeries.zero(ctx)
    for _ in range(count):
        while True:
            n = int(rng.integers(EXP_LO, EXP_HI + 1))
            if not circ or n % ctx.q:
                break
        out = out + PadicLaurentSeries.monomial(ctx, n, _coeff(rng, ctx.p, ctx.prec), pi_exp=level)
    if positive:
        n = int(rng.integers(1, 5))
        out = out + PadicLaurentSeries.monomial(ctx, n, _coeff(rng, ctx.p, ctx.prec), pi_exp=level)
    return out


def draw_level(rng, exponents) -> int:
    nd = newton_data_from_exponents(exponents)
    s = nd.s or 1
    return int(rng.integers(s + 2, s + 5))


def random_isocrystal(rng, p: int, exponents, *, level: int | None = None, prec: int | None = None,
                      window: int = 3 ** 8, e: int = 1, f: int = 1, reduced: bool = True
                      ) -> IsocrystalMatrix:
    """Random matrix congruent to ``diag(pi^r_i)`` modulo ``pi^level``."""
    exponents = [int(r) for r in exponents]
    if level is None:
        level = draw_level(rng, exponents)
    if prec is None:
        prec = 2 * level + 3
    if level > prec:
        raise ContractError("random_isocrystal", "congruence level must be <= prec",
                            f"level={level}, prec={prec}")
    ctx = PrimeContext(p, f=f, e=e, prec=prec, window=window)
    n = len(exponents)
    M = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                x = PadicLaurentSeries.monomial(ctx, 0, 1, pi_exp=exponents[i])
                x = x + random_series(rng, ctx, level)
            elif i == 0:
                x = random_series(rng, ctx, level, circ=reduced)
            else:
                x = random_series(rng, ctx, level, positive=(not reduced and j == 0))
            row.append(x)
        M.append(row)
    return IsocrystalMatrix(ctx, M, exponents)


def random_split_isocrystal(rng, p: int, exponents, *, level: int | None = None,
                            prec: int | None = None, window: int = 3 ** 8) -> IsocrystalMatrix:
    """Random matrix whose unit-root line is defined over polynomials in ``T^-1``."""
    A = random_isocrystal(rng, p, exponents, level=level, prec=prec, window=window)
    ctx = A.ctx
    zero = PadicLaurentSeries.zero(ctx)
    rows = A.rows()
    for i in range(1, A.n):
        rows[i][0] = zero
    U = A.with_entries(rows)
    lvl = draw_level(rng, exponents) if level is None else level
    b = random_series(rng, ctx, lvl)
    B = ElementaryTransform.identity(ctx, A.n).then(1, 0, b)
    return skew_conjugate(U, B)
