"""Ramification arithmetic of Z_p-towers.

Upper breaks ``s_n`` and lower breaks ``lambda_n`` of a tower with
``Gal(F_n/F) = Z/p^n`` are related by::

    lambda_n = sum_{i<n} (s_(i+1) - s_i) p^i,      s_n = sum_{i<n} (lambda_(i+1) - lambda_i) / p^i

with ``s_0 = lambda_0 = 0``.  The different of ``F_n/F`` is
``sum_{i=1..n} (p^i - p^(i-1)) (s_i + 1)`` and Riemann-Hurwitz gives the genus of
the n-th layer of a tower of curves.  All arithmetic is exact.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ContractError
from .monodromy import BreakSequence


def _seq(s: BreakSequence | Sequence, p: int | None = None) -> tuple[tuple, int]:
    if isinstance(s, BreakSequence):
        if s.start != 1:
            raise ContractError("ramification", "break sequence must start at index 1",
                                f"start={s.start}")
        return s.breaks, s.p
    if p is None:
        raise ContractError("ramification", "p is required for a plain sequence")
    return tuple(Fraction(x) for x in s), p


def _strict(values, op: str):
    if any(x >= y for x, y in zip(values, values[1:])) or (values and values[0] <= 0):
        raise ContractError(op, "breaks must be positive and strictly increasing")


@dataclass(frozen=True)
class LowerBreaks:
    values: tuple
    p: int

    def __post_init__(self):
        v = tuple(Fraction(x) for x in self.values)
        object.__setattr__(self, "values", v)
        _strict(v, "LowerBreaks")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def lower_from_upper(s: BreakSequence) -> LowerBreaks:
    """``lambda_n = sum_{i=0}^{n-1} (s_(i+1) - s_i) p^i``."""
    vals, p = _seq(s)
    _strict(vals, "lower_from_upper")
    out, acc, prev = [], Fraction(0), Fraction(0)
    for i, x in enumerate(vals):
        acc += (x - prev) * p ** i
        prev = x
        out.append(acc)
    return LowerBreaks(tuple(out), p)


def upper_from_lower(lam: LowerBreaks) -> BreakSequence:
    """``s_n = sum_{i=0}^{n-1} (lambda_(i+1) - lambda_i) / p^i``."""
    out, acc, prev = [], Fraction(0), Fraction(0)
    for i, x in enumerate(lam.values):
        acc += Fraction(x - prev, lam.p ** i)
        prev = x
        out.append(acc)
    e = math.lcm(*(x.denominator for x in out)) if out else 1
    return BreakSequence(tuple(out), lam.p, e=e)


def different_of_level(s: BreakSequence, n: int) -> Fraction:
    """Different exponent of ``F_n/F``: ``sum_{i=1}^n (p^i - p^(i-1)) (s_i + 1)``."""
    vals, p = _seq(s)
    if not 0 <= n <= len(vals):
        raise ContractError("different_of_level", "n must not exceed the number of breaks",
                            f"n={n}, len={len(vals)}")
    return sum(((p ** i - p ** (i - 1)) * (vals[i - 1] + 1) for i in range(1, n + 1)), Fraction(0))


@dataclass(frozen=True)
class HerbrandFunction:
    """Piecewise-linear ``psi`` with slope ``p^i`` on ``(s_i, s_(i+1))``."""

    breakpoints: tuple
    p: int

    def __call__(self, y) -> Fraction:
        y = Fraction(y)
        if y < 0:
            raise ContractError("herbrand_psi", "y must be nonnegative", f"y={y}")
        acc, prev = Fraction(0), Fraction(0)
        for i, b in enumerate(self.breakpoints):
            if y <= b:
                return acc + (y - prev) * self.p ** i
            acc += (b - prev) * self.p ** i
            prev = b
        return acc + (y - prev) * self.p ** len(self.breakpoints)

    def inverse(self, x) -> Fraction:
        """``phi = psi^-1``."""
        x = Fraction(x)
        if x < 0:
            raise ContractError("herbrand_phi", "x must be nonnegative", f"x={x}")
        acc, prev = Fraction(0), Fraction(0)
        for i, b in enumerate(self.breakpoints):
            nxt = acc + (b - prev) * self.p ** i
            if x <= nxt:
                return prev + (x - acc) / self.p ** i
            acc, prev = nxt, b
        return prev + (x - acc) / self.p ** len(self.breakpoints)


def herbrand_psi(s: BreakSequence, y) -> Fraction:
    vals, p = _seq(s)
    return HerbrandFunction(vals, p)(y)


@dataclass(frozen=True)
class TowerRamificationData:
    g0: Fraction
    p: int
    points: tuple  # ((label, BreakSequence), ...)

    def __post_init__(self):
        object.__setattr__(self, "g0", Fraction(self.g0))
        pts = tuple((str(lbl), s if isinstance(s, BreakSequence) else BreakSequence(tuple(s), self.p))
                    for lbl, s in self.points)
        object.__setattr__(self, "points", pts)
        for lbl, s in pts:
            _strict(s.breaks, "TowerRamificationData")
            if s.p != self.p:
                raise ContractError("TowerRamificationData", "point primes must match", lbl)

    @classmethod
    def from_json(cls, obj: dict) -> TowerRamificationData:
        try:
            p = int(obj["p"])
            pts = tuple((pt["label"], BreakSequence(tuple(Fraction(x) for x in pt["breaks"]), p))
                        for pt in obj.get("points", []))
            return cls(Fraction(obj["g0"]), p, pts)
        except (KeyError, TypeError, ValueError) as exc:
            raise ContractError("tower literal", "schema violation", repr(exc)) from exc

    def to_json(self) -> dict:
        return {"g0": str(self.g0), "p": self.p,
                "points": [{"label": lbl, "breaks": [str(x) for x in s.breaks]} for lbl, s in self.points]}


@dataclass(frozen=True)
class GenusTable:
    p: int
    values: tuple  # g_0, g_1, ..., g_nmax as Fractions

    @property
    def integral(self) -> tuple:
        return tuple(g.denominator == 1 for g in self.values)

    def __len__(self):
        return len(self.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "g_n", "integral"])
        for n, (g, ok) in enumerate(zip(self.values, self.integral)):
            w.writerow([n, str(g), str(ok).lower()])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"p": self.p, "g": [str(g) for g in self.values], "integral": list(self.integral)}


def genus_sequence(data: TowerRamificationData, n_max: int) -> GenusTable:
    """``g_n = p^n (g_0 - 1) + 1 + sum_x delta_(x,n) / 2`` for ``n = 0..n_max``."""
    p = data.p
    for lbl, s in data.points:
        if len(s) < n_max:
            raise ContractError("genus_sequence", "insufficient break data",
                                f"point {lbl} has {len(s)} breaks, need {n_max}")
    vals = []
    for n in range(n_max + 1):
        delta = sum((different_of_level(s, n) for _, s in data.points), Fraction(0))
        vals.append(p ** n * (data.g0 - 1) + 1 + delta / 2)
    return GenusTable(p, tuple(vals))


def base_change_up_tower(s: BreakSequence, n: int) -> BreakSequence:
    """Breaks of the tower over ``K = F_n``: ``p^n s_(n+k) - p^n s_n + lambda_n``."""
    vals, p = _seq(s)
    if not 0 <= n < len(vals):
        raise ContractError("base_change_up_tower", "insufficient break data",
                            f"n={n}, len={len(vals)}")
    if n == 0:
        return BreakSequence(vals, p)
    lam_n = lower_from_upper(s).values[n - 1]
    sn = vals[n - 1]
    return BreakSequence(tuple(p ** n * vals[n + k - 1] - p ** n * sn + lam_n
                               for k in range(1, len(vals) - n + 1)), p)


def base_change_disjoint_p(s: BreakSequence, s_prime) -> BreakSequence:
    """Breaks after base change to a disjoint degree-p extension with break ``s_prime``.

    With ``j`` the least index having ``s_prime < s_j`` and ``c = (p-1) s_prime``,
    ``s_K,n = s_n`` for ``n < j`` and ``p s_n - c`` for ``n >= j``.
    """
    vals, p = _seq(s)
    sp = Fraction(s_prime)
    if sp <= 0:
        raise ContractError("base_change_disjoint_p", "s_prime must be positive", f"s'={sp}")
    c = (p - 1) * sp
    out, hit = [], False
    for x in vals:
        hit = hit or sp < x
        out.append(p * x - c if hit else x)
    return BreakSequence(tuple(out), p)


# -- genus polynomials ----------------------------------------------------------------


@dataclass(frozen=True)
class GenusFit:
    m: int
    polys: tuple  # per residue class: coefficients low -> high, Fractions
    degree: int
    onset: int
    p: int

    def evaluate(self, n: int) -> Fraction:
        k, i = divmod(n, self.m)
        x = Fraction(self.p) ** k
        return sum((c * x ** j for j, c in enumerate(self.polys[i])), Fraction(0))

    def to_dict(self) -> dict:
        return {"m": self.m, "degree": self.degree, "onset": self.onset,
                "polynomials": [[str(c) for c in poly] for poly in self.polys]}


def _interpolate(xs, ys) -> list[Fraction]:
    """Coefficients (low -> high) of the polynomial through the points."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xs[j] * basis[t + 1]
            denom *= xs[i] - xs[j]
        for t in range(n):
            coeffs[t] += ys[i] * basis[t] / denom
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def fit_genus_polynomials(g: GenusTable, m: int, d: int, r) -> GenusFit | None:
    """Exact fit of ``g_(km+i) = a_i(p^k)`` with ``deg a_i <= m (r + d)``.

    Each residue class is interpolated through its last ``deg + 1`` points;
    the onset is the least index from which every point matches.  At least
    one point per class beyond the interpolation nodes must confirm the fit.
    """
    r = Fraction(r)
    if m < 1 or (m * r).denominator != 1:
        raise ContractError("fit_genus_polynomials", "m >= 1 and m*r integral required",
                            f"m={m}, r={r}")
    deg = int(m * (r + d))
    p = g.p
    classes: dict[int, list] = {i: [] for i in range(m)}
    for n, v in enumerate(g.values):
        k, i = divmod(n, m)
        classes[i].append((k, v))
    if any(len(pts) < deg + 1 for pts in classes.values()):
        raise ContractError("fit_genus_polynomials", "insufficient data for interpolation",
                            f"need {deg + 1} points per residue class")
    polys = []
    for i in range(m):
        nodes = classes[i][-(deg + 1):]
        polys.append(tuple(_interpolate([Fraction(p) ** k for k, _ in nodes], [v for _, v in nodes])))
    fit = GenusFit(m, tuple(polys), deg, 0, p)
    onset = len(g.values)
    while onset > 0 and fit.evaluate(onset - 1) == g.values[onset - 1]:
        onset -= 1
    if any(sum(1 for k, _ in pts if k * m + i >= onset) < deg + 2 for i, pts in classes.items()):
        return None
    return GenusFit(m, tuple(polys), deg, onset, p)
