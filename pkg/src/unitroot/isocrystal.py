"""Frobenius matrices of F-isocrystals and the unit-root subspace.

Convention: a Frobenius matrix ``A`` acts on coordinate vectors by
``eps -> A sigma(eps)``.  The unit-root line is spanned by
``u = (1, eps_2, ..., eps_n)`` with ``A sigma(u) = lam u``, i.e.::

    lam      = a_11 + a_12 sigma(eps_2) + ... + a_1n sigma(eps_n)
    lam eps_i = a_i1 + a_i2 sigma(eps_2) + ... + a_in sigma(eps_n)

A change of basis by ``B`` replaces ``A`` with ``B A sigma(B)^-1`` and ``u`` with
``B u``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .context import PrimeContext
from .errors import ContractError, ConvergenceError
from .series import PadicLaurentSeries, circ_split, frobenius_apply, in_circ, partial_valuation_at_level

Matrix = list  # list[list[PadicLaurentSeries]]


# -- plain matrix helpers -------------------------------------------------------


def identity(ctx: PrimeContext, n: int) -> Matrix:
    one, zero = PadicLaurentSeries.one(ctx), PadicLaurentSeries.zero(ctx)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(X: Matrix, Y: Matrix) -> Matrix:
    n, m, k = len(X), len(Y), len(Y[0])
    ctx = X[0][0].ctx
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = PadicLaurentSeries.zero(ctx)
            for t in range(m):
                if X[i][t].terms and Y[t][j].terms:
                    acc = acc + X[i][t] * Y[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_sigma(X: Matrix, iterate: int = 1) -> Matrix:
    return [[frobenius_apply(x, iterate) for x in row] for row in X]


def mat_equal(X: Matrix, Y: Matrix) -> bool:
    return all(x == y for rx, ry in zip(X, Y) for x, y in zip(rx, ry))


def mat_inverse(X: Matrix) -> Matrix:
    """Gauss-Jordan inverse; pivots must be invertible series."""
    n = len(X)
    ctx = X[0][0].ctx
    A = [list(row) + list(irow) for row, irow in zip(X, identity(ctx, n))]
    for col in range(n):
        piv = None
        for r in range(col, n):
            x = A[r][col]
            if x.terms and sum(1 for v in x.term_valuations().values() if v == 0) == 1:
                piv = r
                break
        if piv is None:
            raise ContractError("mat_inverse", "matrix is singular at this precision",
                                f"no invertible pivot in column {col}")
        A[col], A[piv] = A[piv], A[col]
        inv = A[col][col].invert()
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col].terms:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def determinant(X: Matrix) -> PadicLaurentSeries:
    """Laplace expansion along the first row (small ranks only)."""
    n = len(X)
    if n == 1:
        return X[0][0]
    if n == 2:
        return X[0][0] * X[1][1] - X[0][1] * X[1][0]
    ctx = X[0][0].ctx
    total = PadicLaurentSeries.zero(ctx)
    for j in range(n):
        if not X[0][j].terms:
            continue
        minor = [row[:j] + row[j + 1:] for row in X[1:]]
        term = X[0][j] * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


# -- domain types -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class IsocrystalMatrix:
    ctx: PrimeContext
    entries: tuple
    diag_exponents: tuple

    def __post_init__(self):
        entries = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "diag_exponents", tuple(int(r) for r in self.diag_exponents))
        n = len(entries)
        if n == 0 or any(len(row) != n for row in entries):
            raise ContractError("IsocrystalMatrix", "matrix must be square and nonempty")
        if len(self.diag_exponents) != n:
            raise ContractError("IsocrystalMatrix", "need one diagonal exponent per row")
        if any(a > b for a, b in zip(self.diag_exponents, self.diag_exponents[1:])):
            raise ContractError("IsocrystalMatrix", "diagonal exponents must be nondecreasing")
        for row in entries:
            for x in row:
                if not x.ctx.compatible(self.ctx):
                    raise ContractError("IsocrystalMatrix", "all entries must share the context")

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij) -> PadicLaurentSeries:
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> Matrix:
        return [list(row) for row in self.entries]

    def slopes(self) -> tuple:
        ef = self.ctx.e * self.ctx.f
        return tuple(Fraction(r, ef) for r in self.diag_exponents)

    def with_entries(self, M: Matrix) -> IsocrystalMatrix:
        return IsocrystalMatrix(self.ctx, M, self.diag_exponents)

    def __eq__(self, other):
        if not isinstance(other, IsocrystalMatrix):
            return NotImplemented
        return (self.ctx.compatible(other.ctx) and self.diag_exponents == other.diag_exponents
                and self.entries == other.entries)

    __hash__ = None

    def __repr__(self):
        rows = ",\n ".join("[" + ", ".join(repr(x) for x in row) + "]" for row in self.entries)
        return f"IsocrystalMatrix(r={list(self.diag_exponents)},\n[{rows}])"

    @classmethod
    def diagonal(cls, ctx: PrimeContext, exponents: Sequence[int]) -> IsocrystalMatrix:
        n = len(exponents)
        zero = PadicLaurentSeries.zero(ctx)
        M = [[PadicLaurentSeries.monomial(ctx, 0, 1, pi_exp=exponents[i]) if i == j else zero
              for j in range(n)] for i in range(n)]
        return cls(ctx, M, exponents)

    def to_json(self) -> dict:
        return {"context": self.ctx.to_dict(), "diag_exponents": list(self.diag_exponents),
                "entries": [[{"terms": x.to_json()["terms"]} for x in row] for row in self.entries]}

    @classmethod
    def from_json(cls, obj: dict, ctx: PrimeContext | None = None) -> IsocrystalMatrix:
        if ctx is None:
            ctx = PrimeContext.from_dict(obj["context"])
        M = [[PadicLaurentSeries.from_json(x, ctx) for x in row] for row in obj["entries"]]
        return cls(ctx, M, obj["diag_exponents"])


@dataclass(frozen=True)
class NewtonData:
    slopes: tuple
    breaks: tuple  # b_1 < ... < b_nu, the last one equal to the rank
    s: int | None
    np1: bool
    np2: bool
    np3: bool

    @property
    def rate(self) -> Fraction | None:
        """``r = 1/(alpha_{b_1+1} - alpha_{b_1})``."""
        if len(self.breaks) < 2:
            return None
        i = self.breaks[0]
        return 1 / (self.slopes[i] - self.slopes[i - 1])

    @property
    def np_valid(self) -> bool:
        return self.np1 and self.np2 and self.np3


@dataclass(frozen=True, eq=False)
class ElementaryTransform:
    """Accumulated change of basis ``B`` (with its inverse) built from ``L_{u,v}(a)`` steps."""

    matrix: tuple
    inverse: tuple
    steps: tuple = ()

    @classmethod
    def identity(cls, ctx: PrimeContext, n: int) -> ElementaryTransform:
        I = identity(ctx, n)
        return cls(tuple(map(tuple, I)), tuple(map(tuple, I)))

    @property
    def u(self):
        return self.steps[-1][0] if self.steps else None

    @property
    def v(self):
        return self.steps[-1][1] if self.steps else None

    @property
    def a(self):
        return self.steps[-1][2] if self.steps else None

    def then(self, u: int, v: int, a: PadicLaurentSeries) -> ElementaryTransform:
        """Compose ``L_{u,v}(a)`` on the left."""
        B = [list(r) for r in self.matrix]
        Binv = [list(r) for r in self.inverse]
        # L B: row u += a * row v
        B[u] = [x + a * y for x, y in zip(B[u], B[v])]
        # B^-1 L^-1: column v -= a * column u
        for row in Binv:
            row[v] = row[v] - row[u] * a
        return ElementaryTransform(tuple(map(tuple, B)), tuple(map(tuple, Binv)),
                                   self.steps + ((u, v, a),))

    def compose(self, other: ElementaryTransform) -> ElementaryTransform:
        """``other`` applied after ``self``: matrix ``other.B @ self.B``."""
        out = self
        for u, v, a in other.steps:
            out = out.then(u, v, a)
        return out

    def rows(self) -> Matrix:
        return [list(r) for r in self.matrix]


@dataclass(frozen=True)
class UnitRootSolution:
    epsilon: tuple
    lam: PadicLaurentSeries
    residual_level: int
    iterations: int = 0

    @property
    def lambda_(self):
        return self.lam


# -- operations ------------------------------------------------------------------------


def validate_diagonal_congruence(A: IsocrystalMatrix, level: int) -> bool:
    """True iff ``A = diag(pi^r_1, ..., pi^r_n) mod pi^level``."""
    if level > A.ctx.prec:
        raise ContractError("validate_diagonal_congruence", "level must be <= prec",
                            f"level={level}, prec={A.ctx.prec}")
    ctx = A.ctx
    for i in range(A.n):
        for j in range(A.n):
            x = A[i, j]
            if i == j:
                x = x - PadicLaurentSeries.monomial(ctx, 0, 1, pi_exp=A.diag_exponents[i])
            if x.valuation() < level:
                return False
    return True


def congruence_level(A: IsocrystalMatrix) -> int:
    """Largest level at which the diagonal congruence holds."""
    ctx = A.ctx
    best = ctx.prec
    for i in range(A.n):
        for j in range(A.n):
            x = A[i, j]
            if i == j:
                x = x - PadicLaurentSeries.monomial(ctx, 0, 1, pi_exp=A.diag_exponents[i])
            best = min(best, x.valuation())
    return best


def newton_data(A: IsocrystalMatrix) -> NewtonData:
    if not validate_diagonal_congruence(A, 1):
        raise ContractError("newton_data", "diagonal congruence must hold at level >= 1")
    return newton_data_from_exponents(A.diag_exponents, A.ctx.e, A.ctx.f)


def newton_data_from_exponents(r: Sequence[int], e: int = 1, f: int = 1) -> NewtonData:
    n = len(r)
    slopes = tuple(Fraction(x, e * f) for x in r)
    breaks = tuple(i for i in range(1, n) if r[i - 1] < r[i]) + (n,)
    if len(breaks) < 2:
        return NewtonData(slopes, breaks, None, breaks[0] == 1, False, False)
    b1 = breaks[0]
    s = r[b1] - r[b1 - 1]
    np1 = b1 == 1
    np2 = r[breaks[1] - 1] - r[0] == s
    np3 = len(breaks) < 3 or r[breaks[2] - 1] - r[breaks[1] - 1] >= s
    return NewtonData(slopes, breaks, s, np1, np2, np3)


def skew_conjugate(A: IsocrystalMatrix, B: Matrix | ElementaryTransform,
                   B_inverse: Matrix | None = None) -> IsocrystalMatrix:
    """``B A sigma(B)^-1``."""
    if isinstance(B, ElementaryTransform):
        B_inverse = B.inverse
        B = B.matrix
    B = [list(r) for r in B]
    if B_inverse is None:
        B_inverse = mat_inverse(B)
    Binv_s = mat_sigma([list(r) for r in B_inverse])
    return A.with_entries(mat_mul(mat_mul(B, A.rows()), Binv_s))


def apply_elementary(A: Matrix, u: int, v: int, a: PadicLaurentSeries) -> Matrix:
    """``L_{u,v}(a) A sigma(L_{u,v}(a))^-1`` as a row and a column operation."""
    M = [list(r) for r in A]
    M[u] = [x + a * y for x, y in zip(M[u], M[v])]
    sa = frobenius_apply(a)
    for row in M:
        if row[u].terms:
            row[v] = row[v] - row[u] * sa
    return M


def twist(A: IsocrystalMatrix, j: int) -> IsocrystalMatrix:
    """Multiply every entry by ``pi^j``; negative ``j`` needs exact divisibility."""
    M = [[x.mul_pi(j) for x in row] for row in A.entries]
    return IsocrystalMatrix(A.ctx, M, tuple(r + j for r in A.diag_exponents))


def exterior_power(A: IsocrystalMatrix, k: int) -> IsocrystalMatrix:
    """Matrix of k x k minors.

    Basis vectors ``e_I`` are ordered by their diagonal exponent sum, ties in
    lexicographic order; for sorted exponents this is usually plain lexicographic
    order.
    """
    n = A.n
    if not 1 <= k <= n:
        raise ContractError("exterior_power", "need 1 <= k <= n", f"k={k}, n={n}")
    r = A.diag_exponents
    subsets = sorted(itertools.combinations(range(n), k), key=lambda I: (sum(r[i] for i in I), I))
    rows = A.rows()
    M = []
    for I in subsets:
        row = []
        for J in subsets:
            row.append(determinant([[rows[i][j] for j in J] for i in I]))
        M.append(row)
    return IsocrystalMatrix(A.ctx, M, tuple(sum(r[i] for i in I) for I in subsets))


def solve_unit_root(A: IsocrystalMatrix, *, check_level: bool = True,
                    max_iter: int | None = None) -> UnitRootSolution:
    """Unit-root eigenvector ``(1, eps_2, ..)`` and eigenvalue ``lam`` by fixed-point iteration.

    The map ``eps_i <- (a_i1 + sum_j a_ij sigma(eps_j)) / lam`` gains at least one
    pi-adic digit per pass, so it stabilizes exactly after at most ``prec + 1``
    passes.
    """
    ctx = A.ctx
    nd = newton_data(A)
    if not nd.np1:
        raise ContractError("solve_unit_root", "NP-1 required: unit-root part must have rank one")
    if check_level and nd.s is not None and not validate_diagonal_congruence(A, min(nd.s + 2, ctx.prec)):
        raise ContractError("solve_unit_root", "diagonal congruence needed at level >= s + 2",
                            f"s={nd.s}, level={congruence_level(A)}")
    n = A.n
    rows = A.rows()
    one, zero = PadicLaurentSeries.one(ctx), PadicLaurentSeries.zero(ctx)
    eps = [one] + [zero] * (n - 1)
    budget = max_iter if max_iter is not None else 2 * ctx.prec + 4
    lam = rows[0][0]
    for it in range(1, budget + 1):
        seps = [frobenius_apply(x) for x in eps]
        images = [_row_apply(rows[i], seps, ctx) for i in range(n)]
        lam = images[0]
        lam_inv = lam.invert()
        new = [one] + [images[i] * lam_inv for i in range(1, n)]
        if new == eps:
            break
        eps = new
    else:
        raise ConvergenceError("solve_unit_root", "fixed-point iteration did not stabilize",
                               f"budget={budget}; congruence level too low?")
    level = residual_level(A, eps, lam)
    return UnitRootSolution(tuple(eps), lam, level, it)


def _row_apply(row, seps, ctx) -> PadicLaurentSeries:
    acc = PadicLaurentSeries.zero(ctx)
    for a, x in zip(row, seps):
        if a.terms and x.terms:
            acc = acc + a * x
    return acc


def unit_root_residuals(A: IsocrystalMatrix, eps, lam) -> list[PadicLaurentSeries]:
    """``lam eps_i - (a_i1 + sum_j a_ij sigma(eps_j))`` for every row."""
    ctx = A.ctx
    seps = [frobenius_apply(x) for x in eps]
    return [lam * eps[i] - _row_apply(A.entries[i], seps, ctx) for i in range(A.n)]


def residual_level(A: IsocrystalMatrix, eps, lam) -> int:
    return min(r.valuation() for r in unit_root_residuals(A, eps, lam))


def recursive_coordinate_check(A: IsocrystalMatrix, sol: UnitRootSolution) -> bool:
    """Cross-check ``eps_i = R(b_ii, x_i)`` with ``b_ij = a_ij / a_11``."""
    from .frobsolve import solve_R

    ctx = A.ctx
    inv11 = A[0, 0].invert()
    n = A.n
    b = [[A[i, j] * inv11 for j in range(n)] for i in range(n)]
    eps = sol.epsilon
    seps = [frobenius_apply(x) for x in eps]
    drift = PadicLaurentSeries.zero(ctx)
    for j in range(1, n):
        drift = drift + b[0][j] * seps[j]
    for i in range(1, n):
        x = PadicLaurentSeries.zero(ctx)
        for j in range(n):
            if j != i:
                x = x + b[i][j] * seps[j]
        x = x - drift * eps[i]
        if solve_R(b[i][i], x) != eps[i]:
            return False
    return True


def det_step_frobenius(A: IsocrystalMatrix, i: int) -> PadicLaurentSeries:
    """Frobenius of ``det(M_i)``: unit-root eigenvalue of the twisted ``b_i``-th exterior power."""
    nd = newton_data(A)
    if not 1 <= i <= len(nd.breaks):
        raise ContractError("det_step_frobenius", "step index out of range", f"i={i}")
    k = nd.breaks[i - 1]
    P = exterior_power(A, k)
    j0 = P.diag_exponents[0]
    if len(P.diag_exponents) > 1 and P.diag_exponents[1] == j0:
        raise ContractError("det_step_frobenius", "NP-1 fails on the exterior power",
                            "minimal slope sum has multiplicity > 1")
    Q = twist(P, -j0)
    sol = solve_unit_root(Q)
    return sol.lam.mul_pi(j0)


# -- decay-bound predicates and the reduction procedures ---------------------------------


def decay_bound_holds(x: PadicLaurentSeries, r: Fraction, c: Fraction, top_level: int | None = None) -> bool:
    """``x`` in ``O^{r,c}``: ``w_0 >= 0`` and ``w_k >= -c p^(r k)`` for ``k >= 1``."""
    ctx = x.ctx
    e, p = ctx.e, ctx.p
    top = ctx.prec - 1 if top_level is None else top_level
    if partial_valuation_at_level(x, 0) < 0:
        return False
    for level in range(e, top + 1):
        w = partial_valuation_at_level(x, level)
        if w == math.inf or w >= 0:
            continue
        kk = Fraction(level, e) * r
        ratio = Fraction(-w) / c
        if ratio ** kk.denominator > Fraction(p) ** kk.numerator:
            return False
    return True


def decay_constant(x: PadicLaurentSeries, r: Fraction) -> Fraction:
    """Smallest ``c`` (rounded up to 1e-9) with ``x`` in ``O^{r,c}`` ignoring ``w_0``."""
    ctx = x.ctx
    e, p = ctx.e, ctx.p
    best = Fraction(0)
    for level in range(e, ctx.prec):
        w = partial_valuation_at_level(x, level)
        if w == math.inf or w >= 0:
            continue
        val = -w / p ** float(r * Fraction(level, e))
        cand = Fraction(math.ceil(val * 10**9), 10**9)
        if cand > best:
            best = cand
    # float guard
    while best > 0 and not decay_bound_holds(x, r, best):
        best *= Fraction(1000000001, 1000000000)
    return best


def matrix_decay_constant(A: IsocrystalMatrix, r: Fraction) -> Fraction:
    return max(decay_constant(x, r) for row in A.entries for x in row)


def _nonpositive(x: PadicLaurentSeries) -> bool:
    return all(n <= 0 for n in x.terms)


@dataclass(frozen=True)
class ReductionReport:
    conditions: dict
    unattained: dict = field(default_factory=dict)
    c: Fraction | None = None
    d: Fraction | None = None
    r: Fraction | None = None
    N0: int | None = None


def check_condition(A: IsocrystalMatrix, which: str, *, N0: int, r: Fraction, c: Fraction,
                    d: Fraction) -> bool:
    """Evaluate one of the conditions ``i`` .. ``v`` of the rank-one normal form."""
    nd = newton_data_from_exponents(A.diag_exponents, A.ctx.e, A.ctx.f)
    n = A.n
    b2 = nd.breaks[1] if len(nd.breaks) > 1 else n
    idx = range(n)
    if which == "i":
        return all(decay_bound_holds(A[i, j], r, c) for i in idx for j in idx)
    if which == "ii":
        ok = all(A[i, 0].valuation() >= N0 for i in range(1, b2))
        ok = ok and all(A[i, j].valuation() >= N0 for i in range(b2, n) for j in range(1, b2))
        return ok
    if which == "iii":
        return all(decay_bound_holds(A[0, j], r, d) for j in range(b2, n))
    if which == "iv":
        return all(in_circ(A[0, j]) for j in range(1, n))
    if which == "v":
        ok = all(_nonpositive(A[i, j]) for i in range(1, b2) for j in range(1, b2))
        return ok and all(_nonpositive(A[0, j]) for j in range(b2))
    raise ContractError("check_condition", "which must be one of i, ii, iii, iv, v", which)


def _lower_left_pairs(nd_breaks, i, n):
    b = nd_breaks[i - 1]
    return [(u, v) for v in range(b) for u in range(b, n)]


def reduce_lower_left(A: IsocrystalMatrix, break_index: int, target_level: int,
                      transform: ElementaryTransform | None = None
                      ) -> tuple[IsocrystalMatrix, ElementaryTransform]:
    """Make ``pi^N0`` divide every entry below-left of the break ``b_i``.

    Uses ``T_{u,v} = L_{u,v}(-a_uv / pi^r_v)``; each application raises the
    pi-valuation of ``a_uv`` by at least ``min(s, N - r_v)``.
    """
    ctx = A.ctx
    nd = newton_data(A)
    if not 1 <= break_index < len(nd.breaks):
        raise ContractError("reduce_lower_left", "break index must name an interior break",
                            f"i={break_index}, breaks={nd.breaks}")
    if target_level > ctx.prec:
        raise ContractError("reduce_lower_left", "target level must be <= prec")
    b = nd.breaks[break_index - 1]
    r = A.diag_exponents
    if r[b] - r[b - 1] < (nd.s or 0):
        raise ContractError("reduce_lower_left", "slope gap r_{b_i+1} - r_{b_i} >= s required")
    level = congruence_level(A)
    if level <= r[b - 1]:
        raise ContractError("reduce_lower_left", "congruence level must exceed r_{b_i}",
                            f"level={level}, r_b={r[b - 1]}")
    if transform is None:
        transform = ElementaryTransform.identity(ctx, A.n)
    M = A.rows()
    pairs = _lower_left_pairs(nd.breaks, break_index, A.n)
    budget = 4 * ctx.prec * max(1, len(pairs)) + 8
    for _ in range(budget):
        todo = [(u, v) for u, v in pairs if M[u][v].valuation() < target_level]
        if not todo:
            return A.with_entries(M), transform
        u, v = min(todo, key=lambda uv: M[uv[0]][uv[1]].valuation())
        a = -M[u][v].div_pi(r[v])
        M = apply_elementary(M, u, v, a)
        transform = transform.then(u, v, a)
    raise ConvergenceError("reduce_lower_left", "entries did not reach the target level",
                           f"target={target_level}")


def _step_row_one_circ(M, r, n, q) -> tuple | None:
    """Worst q-divisible term in row 1 (off the diagonal); returns (v, t)."""
    best = None
    for v in range(1, n):
        x = M[0][v]
        _, down = circ_split(x)
        if down.is_zero():
            continue
        lv = down.valuation()
        if best is None or lv < best[0]:
            best = (lv, v, down.reduce_mod_pi(lv + 1))
    if best is None:
        return None
    _, v, t = best
    return v, t


def _step_column_one_positive(M, b2, N0) -> tuple | None:
    """Worst positive-exponent part of ``a_u1`` for ``2 <= u <= b_2``."""
    best = None
    for u in range(1, b2):
        pos = M[u][0].restrict(lambda m: m > 0)
        if pos.is_zero():
            continue
        lv = pos.valuation()
        if best is None or lv < best[0]:
            best = (lv, u, pos.reduce_mod_pi(lv + 1))
    if best is None:
        return None
    _, u, t = best
    return u, t


def reduce_to_rank_one_form(A: IsocrystalMatrix, N0: int, d: Fraction | None = None
                            ) -> tuple[IsocrystalMatrix, ElementaryTransform, ReductionReport]:
    """Change basis towards the rank-one normal form (conditions i-v).

    Lower-left blocks at ``b_1`` and ``b_2`` are cleared to ``pi^N0``; row 1 is
    pushed into exponents prime to q by ``L_{1,v}(t)`` with ``sigma(t)`` the
    q-divisible part; positive exponents in column 1 are pushed to higher
    pi-levels by ``L_{u,1}(-t)``.  Removing positive exponents from ``a_11`` or
    the slope-``1/r`` block needs an Artin-Schreier equation over the residue
    field with no finite solution; when such terms are present condition ``v``
    is reported unattained.
    """
    ctx = A.ctx
    nd = newton_data(A)
    if not nd.np_valid:
        raise ContractError("reduce_to_rank_one_form", "NP-1, NP-2 and NP-3 required",
                            f"np1={nd.np1}, np2={nd.np2}, np3={nd.np3}")
    if nd.s is not None and not validate_diagonal_congruence(A, min(nd.s + 2, ctx.prec)):
        raise ContractError("reduce_to_rank_one_form", "diagonal congruence needed at level >= s + 2")
    n = A.n
    if nd.s is None or n == 1:
        rep = ReductionReport({k: True for k in ("i", "ii", "iii", "iv", "v")})
        return A, ElementaryTransform.identity(ctx, n), rep
    r_rate = Fraction(ctx.e * ctx.f, nd.s)
    c = max(matrix_decay_constant(A, r_rate), Fraction(1, 10**9))
    if d is None:
        d = c
    b2 = nd.breaks[1]
    q = ctx.q
    T = ElementaryTransform.identity(ctx, n)
    cur = A
    budget = 8 * ctx.prec * n * n + 16
    for _ in range(budget):
        changed = False
        for bi in (1, 2):
            if bi < len(nd.breaks):
                pairs = _lower_left_pairs(nd.breaks, bi, n)
                if any(cur[u, v].valuation() < N0 for u, v in pairs):
                    cur, T = reduce_lower_left(cur, bi, N0, T)
                    changed = True
        M = cur.rows()
        step = _step_row_one_circ(M, cur.diag_exponents, n, q)
        if step is not None:
            v, t = step
            M = apply_elementary(M, 0, v, t)
            T = T.then(0, v, t)
            changed = True
        else:
            step = _step_column_one_positive(M, b2, N0)
            if step is not None:
                u, t = step
                M = apply_elementary(M, u, 0, -t)
                T = T.then(u, 0, -t)
                changed = True
        cur = cur.with_entries(M)
        if not changed:
            break
    else:
        raise ConvergenceError("reduce_to_rank_one_form", "iteration budget exhausted")
    conds = {k: check_condition(cur, k, N0=N0, r=r_rate, c=c, d=d) for k in ("i", "ii", "iii", "iv", "v")}
    unattained = {}
    if not conds["v"]:
        unattained["v"] = ("positive exponents in a_11 or the slope-1/r block need an "
                           "Artin-Schreier solution over the residue field")
    if not conds["iii"]:
        unattained["iii"] = "row-1 entries beyond b_2 exceed the decay bound d"
    if not conds["i"]:
        unattained["i"] = "reduction raised a decay constant above c"
    rep = ReductionReport(conds, unattained, c, d, r_rate, N0)
    return cur, T, rep
