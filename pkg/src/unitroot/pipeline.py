"""End-to-end runs: unit-root solve, minimal twist, breaks, fits; and seeded sweeps."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction

from .decay import decay_classify, decay_profile
from .errors import UnitRootError, WindowOverflow
from .generate import random_isocrystal, random_split_isocrystal, trial_rng
from .isocrystal import IsocrystalMatrix, newton_data, solve_unit_root
from .monodromy import break_sequence_extract, fit_pseudo_stable
from .twist import twist_to_minimal

DEFAULT_MAX_WINDOW = 3 ** 12


def max_window() -> int:
    """Upper limit for the exponent window (``UNITROOT_MAX_WINDOW``)."""
    raw = os.environ.get("UNITROOT_MAX_WINDOW")
    if raw is None:
        return DEFAULT_MAX_WINDOW
    try:
        val = int(raw)
    except ValueError:
        val = 0
    if val < 1:
        from .errors import ContractError
        raise ContractError("UNITROOT_MAX_WINDOW", "must be a positive integer", raw)
    return val


def with_window_retry(fn, A: IsocrystalMatrix):
    """Run ``fn(A)``, enlarging the window to the reported requirement on overflow.

    Stops with the overflow error once the requirement exceeds the cap.
    """
    while True:
        try:
            return fn(A), A
        except WindowOverflow as exc:
            need = exc.required
            if need is None or need > max_window() or need <= A.ctx.window:
                raise
            A = IsocrystalMatrix.from_json(A.to_json(), A.ctx.with_(window=need))


def unit_root_pipeline(A: IsocrystalMatrix, *, m: int | None = None) -> dict:
    """Solve, minimize, extract breaks and fit the law predicted by the first slope gap."""
    nd = newton_data(A)
    sol = solve_unit_root(A)
    lam_min, _ = twist_to_minimal(sol.lam)
    K = A.ctx.prec - 1
    breaks = break_sequence_extract(lam_min, K)
    rate = nd.rate
    out = {"np": [nd.np1, nd.np2, nd.np3], "residual_level": sol.residual_level,
           "iterations": sol.iterations, "lambda_min": lam_min, "breaks": breaks,
           "rate": rate, "fit": None, "fit_error": None}
    if rate is not None:
        period = m if m is not None else rate.denominator
        try:
            out["fit"] = fit_pseudo_stable(breaks, rate, period)
        except UnitRootError as exc:
            out["fit_error"] = exc.condition
    prof = decay_profile(lam_min, K // A.ctx.e if A.ctx.e > 1 else K)
    try:
        out["decay"] = decay_classify(prof)
    except UnitRootError as exc:
        out["decay"] = None
        out["decay_error"] = exc.condition
    out["profile"] = prof
    return out


@dataclass
class SweepReport:
    seed: int
    trials: int
    p: int
    exponents: tuple
    family: str
    records: list = field(default_factory=list)

    def aggregate(self) -> dict:
        n = len(self.records)
        fits = sum(1 for r in self.records if r.get("fit") is not None)
        untagged = sum(1 for r in self.records if r.get("fit") is not None and not r["fit"]["tags"])
        tagged = sum(1 for r in self.records if r.get("tags"))
        errors = sum(1 for r in self.records if "error" in r)
        classes: dict[str, int] = {}
        for r in self.records:
            c = (r.get("decay") or {}).get("class", "none")
            classes[c] = classes.get(c, 0) + 1
        return {"trials": n, "fit_success": fits, "untagged_fit_success": untagged,
                "hypotheses_tagged": tagged, "errors": errors, "decay_classes": classes}

    def to_dict(self) -> dict:
        return {"seed": self.seed, "trials": self.trials, "p": self.p,
                "diag_exponents": list(self.exponents), "family": self.family,
                "records": sorted(self.records, key=lambda r: r["trial"]),
                "aggregate": self.aggregate()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _record(trial: int, A: IsocrystalMatrix, res: dict) -> dict:
    br = res["breaks"]
    fit = res["fit"]
    return {
        "trial": trial,
        "level": _congruence(A),
        "prec": A.ctx.prec,
        "window": A.ctx.window,
        "np": res["np"],
        "residual_level": res["residual_level"],
        "breaks": [str(x) for x in br.breaks],
        "break_start": br.start,
        "validated": br.validated,
        "tags": br.violations(),
        "rate": str(res["rate"]) if res["rate"] is not None else None,
        "fit": fit.to_dict() if fit is not None else None,
        "fit_error": res["fit_error"],
        "decay": res["decay"].to_dict() if res.get("decay") is not None else None,
    }


def _congruence(A):
    from .isocrystal import congruence_level
    return congruence_level(A)


def run_sweep(seed: int, trials: int, exponents, *, p: int = 3, prec: int | None = None,
              window: int = 3 ** 8, family: str = "random") -> SweepReport:
    """Seeded sweep over random matrices with the given diagonal exponents."""
    rep = SweepReport(seed, trials, p, tuple(int(r) for r in exponents), family)
    make = random_split_isocrystal if family == "split" else random_isocrystal
    for t in range(trials):
        rng = trial_rng(seed, t)
        A = make(rng, p, exponents, prec=prec, window=min(window, max_window()))
        try:
            res, A = with_window_retry(unit_root_pipeline, A)
            rep.records.append(_record(t, A, res))
        except UnitRootError as exc:
            rep.records.append({"trial": t, "error": exc.as_dict()})
    return rep


def fraction_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else str(x)
