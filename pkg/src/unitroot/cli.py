"""Command line front end.

Exit status: 0 success, 2 usage error, 3 contract (precondition or schema)
failure, 4 window overflow, 5 non-convergence.  Failures print a JSON error
object on stderr naming the operation and the violated condition.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .context import PrimeContext
from .decay import decay_classify, decay_profile
from .errors import ContractError, ConvergenceError, UnitRootError, WindowOverflow
from .isocrystal import IsocrystalMatrix, reduce_to_rank_one_form, solve_unit_root
from .monodromy import BreakSequence, break_sequence_extract, fit_pseudo_stable
from .pipeline import max_window, run_sweep, with_window_retry
from .ramification import (LowerBreaks, TowerRamificationData, fit_genus_polynomials,
                           genus_sequence, lower_from_upper, upper_from_lower)
from .schemas import validate
from .series import PadicLaurentSeries
from .twist import twist_to_minimal

EXIT_OK, EXIT_USAGE, EXIT_CONTRACT, EXIT_WINDOW, EXIT_CONVERGENCE = 0, 2, 3, 4, 5
COMMANDS = ("solve", "breaks", "genus", "decay", "reduce", "sweep", "convert")


@dataclass
class JobSpec:
    command: str
    inputs: list = field(default_factory=list)
    out: str | None = None
    fmt: str | None = None
    prec: int | None = None
    window: int | None = None
    K: int | None = None
    seed: int | None = None
    trials: int | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ContractError("JobSpec", "unknown command", self.command)
        if (self.seed is not None) != (self.command == "sweep"):
            raise ContractError("JobSpec", "seed must be given exactly for sweep", self.command)


# -- input handling ----------------------------------------------------------------


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ContractError("input", "cannot read input file", f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ContractError("input", "input is not valid JSON", f"{path}: {exc}") from None


def _override_context(ctx_dict: dict, job: JobSpec, where: str) -> dict:
    d = dict(ctx_dict)
    if job.prec is not None:
        if job.prec > int(d["prec"]):
            raise ContractError(where, "--prec cannot exceed the precision of the input",
                                f"input prec={d['prec']}, requested {job.prec}")
        d["prec"] = job.prec
    if job.window is not None:
        d["window"] = job.window
    d["window"] = min(int(d["window"]), max_window())
    return d


def load_series(path: str, job: JobSpec) -> PadicLaurentSeries:
    obj = _load_json(path)
    validate(obj, "series literal")
    ctx = PrimeContext.from_dict(_override_context(obj, job, "series literal"))
    return PadicLaurentSeries.from_json(obj, ctx)


def load_matrix(path: str, job: JobSpec) -> IsocrystalMatrix:
    obj = _load_json(path)
    validate(obj, "matrix literal")
    ctx = PrimeContext.from_dict(_override_context(obj["context"], job, "matrix literal"))
    n = len(obj["entries"])
    if any(len(row) != n for row in obj["entries"]) or len(obj["diag_exponents"]) != n:
        raise ContractError("matrix literal", "schema violation", "matrix must be square")
    return IsocrystalMatrix.from_json(obj, ctx)


def _rationals(text: str) -> list[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise ContractError("argument", "expected a comma separated list of rationals", text) from None


# -- output helpers --------------------------------------------------------------------


def _fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else str(x)


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _w_str(w) -> str:
    return "inf" if w == float("inf") else str(w)


# -- commands --------------------------------------------------------------------------


def cmd_solve(job: JobSpec) -> str:
    A = load_matrix(job.inputs[0], job)
    sol, A = with_window_retry(solve_unit_root, A)
    if job.fmt == "csv":
        return _csv([["i", "epsilon_i"]] + [[i + 1, repr(x)] for i, x in enumerate(sol.epsilon)]
                    + [["lambda", repr(sol.lam)]])
    return _json({"lambda": repr(sol.lam), "epsilon": [repr(x) for x in sol.epsilon],
                  "residual_level": sol.residual_level, "iterations": sol.iterations,
                  "window": A.ctx.window, "lambda_series": sol.lam.to_json(),
                  "epsilon_series": [x.to_json() for x in sol.epsilon]})


def cmd_breaks(job: JobSpec) -> str:
    lam = load_series(job.inputs[0], job)
    if job.options.get("minimize"):
        lam, _ = twist_to_minimal(lam)
    K = job.K if job.K is not None else lam.ctx.prec - 1
    s = break_sequence_extract(lam, K)
    if (job.fmt or "csv") == "csv":
        return s.to_csv()
    out = s.to_dict()
    r = job.options.get("fit_r")
    if r is not None:
        fit = fit_pseudo_stable(s, r, job.options.get("fit_m") or 1)
        out["fit"] = fit.to_dict() if fit is not None else None
    return _json(out)


def cmd_genus(job: JobSpec) -> str:
    obj = _load_json(job.inputs[0])
    validate(obj, "tower literal")
    data = TowerRamificationData.from_json(obj)
    n = job.options.get("n")
    if n is None:
        n = min((len(s) for _, s in data.points), default=0)
    table = genus_sequence(data, n)
    if (job.fmt or "csv") == "csv":
        return table.to_csv()
    out = table.to_dict()
    d = job.options.get("fit_d")
    if d is not None:
        fit = fit_genus_polynomials(table, job.options.get("fit_m") or 1, d,
                                    job.options.get("fit_r") or 1)
        out["fit"] = fit.to_dict() if fit is not None else None
    return _json(out)


def cmd_decay(job: JobSpec) -> str:
    x = load_series(job.inputs[0], job)
    ctx = x.ctx
    K = Fraction(job.K) if job.K is not None else Fraction(ctx.prec - 1, ctx.e)
    prof = decay_profile(x, K)
    if job.fmt == "csv":
        return _csv([["k", "w_k"]] + [[_fmt(k), _w_str(w)] for k, w in prof.entries])
    return _json({"profile": [[_fmt(k), _w_str(w)] for k, w in prof.entries],
                  "class": decay_classify(prof).to_dict()})


def cmd_reduce(job: JobSpec) -> str:
    A = load_matrix(job.inputs[0], job)
    N0 = job.options.get("level")
    if N0 is None:
        raise ContractError("reduce", "--level is required")
    (A2, T, rep), A = with_window_retry(lambda M: reduce_to_rank_one_form(M, N0), A)
    out = {"matrix": A2.to_json(),
           "transform": [[x.to_json() for x in row] for row in T.matrix],
           "steps": [[u + 1, v + 1, repr(a)] for u, v, a in T.steps],
           "conditions": rep.conditions, "unattained": rep.unattained,
           "c": _fmt(rep.c) if rep.c is not None else None,
           "d": _fmt(rep.d) if rep.d is not None else None,
           "r": _fmt(rep.r) if rep.r is not None else None, "N0": rep.N0}
    if job.fmt == "csv":
        return _csv([["condition", "holds"]] + [[k, str(v).lower()] for k, v in rep.conditions.items()])
    return _json(out)


def cmd_sweep(job: JobSpec) -> str:
    slopes = job.options.get("slopes") or []
    rank = job.options.get("rank")
    if rank is not None and rank != len(slopes):
        raise ContractError("sweep", "--rank must equal the number of slopes",
                            f"rank={rank}, slopes={len(slopes)}")
    if any(a.denominator != 1 for a in slopes):
        raise ContractError("sweep", "slopes must be integers (e = f = 1)")
    if job.trials is None or job.trials < 0:
        raise ContractError("sweep", "--trials must be a nonnegative integer")
    window = job.window if job.window is not None else 3 ** 8
    rep = run_sweep(job.seed, job.trials, [int(a) for a in slopes], p=job.options.get("p", 3),
                    prec=job.prec, window=min(window, max_window()),
                    family=job.options.get("family", "random"))
    if job.fmt == "csv":
        rows = [["trial", "level", "breaks", "fit", "tags", "decay_class", "error"]]
        for r in rep.to_dict()["records"]:
            rows.append([r["trial"], r.get("level", ""), " ".join(r.get("breaks", [])),
                         "yes" if r.get("fit") else "no", len(r.get("tags", [])),
                         (r.get("decay") or {}).get("class", ""),
                         (r.get("error") or {}).get("error", "")])
        return _csv(rows)
    return rep.to_json()


def cmd_convert(job: JobSpec) -> str:
    if job.inputs:
        obj = _load_json(job.inputs[0])
        validate(obj, "breaks literal")
        p, values = int(obj["p"]), [Fraction(x) for x in obj["breaks"]]
    else:
        p, values = job.options.get("p"), job.options.get("values")
        if p is None or values is None:
            raise ContractError("convert", "need an input file or both --p and --values")
    if job.options.get("direction", "to-lower") == "to-lower":
        upper = BreakSequence(tuple(values), p)
        lower = lower_from_upper(upper)
    else:
        lower = LowerBreaks(tuple(values), p)
        upper = upper_from_lower(lower)
    if (job.fmt or "csv") == "csv":
        return _csv([["n", "s_n", "lambda_n"]]
                    + [[i + 1, _fmt(s), _fmt(l)] for i, (s, l) in enumerate(zip(upper, lower))])
    return _json({"p": p, "upper": [_fmt(x) for x in upper], "lower": [_fmt(x) for x in lower]})


_HANDLERS = {"solve": cmd_solve, "breaks": cmd_breaks, "genus": cmd_genus, "decay": cmd_decay,
             "reduce": cmd_reduce, "sweep": cmd_sweep, "convert": cmd_convert}


def run_job(job: JobSpec, stdout=None, stderr=None) -> int:
    """Run one command; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        text = _HANDLERS[job.command](job)
    except WindowOverflow as exc:
        stderr.write(_json(exc.as_dict()))
        return EXIT_WINDOW
    except ConvergenceError as exc:
        stderr.write(_json(exc.as_dict()))
        return EXIT_CONVERGENCE
    except UnitRootError as exc:
        stderr.write(_json(exc.as_dict()))
        return EXIT_CONTRACT
    if job.out:
        with open(job.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


# -- argument parsing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, help="pi-adic precision (may only lower the input's)")
    common.add_argument("--window", type=int, help="exponent window W")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), dest="fmt")

    ap = argparse.ArgumentParser(prog="unitroot", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="unit-root eigenvector and eigenvalue")
    p.add_argument("input")

    p = sub.add_parser("breaks", parents=[common], help="ramification breaks of a minimal Frobenius")
    p.add_argument("input")
    p.add_argument("--K", type=int)
    p.add_argument("--minimize", action="store_true", help="twist to the minimal representative first")
    p.add_argument("--fit-r", type=Fraction, dest="fit_r")
    p.add_argument("--fit-m", type=int, dest="fit_m")

    p = sub.add_parser("genus", parents=[common], help="genus sequence of a Z_p-tower")
    p.add_argument("input")
    p.add_argument("--n", type=int)
    p.add_argument("--fit-d", type=int, dest="fit_d")
    p.add_argument("--fit-r", type=Fraction, dest="fit_r")
    p.add_argument("--fit-m", type=int, dest="fit_m")

    p = sub.add_parser("decay", parents=[common], help="partial-valuation profile and growth class")
    p.add_argument("input")
    p.add_argument("--K", type=Fraction)

    p = sub.add_parser("reduce", parents=[common], help="change of basis towards the rank-one form")
    p.add_argument("input")
    p.add_argument("--level", type=int, required=True)

    p = sub.add_parser("sweep", parents=[common], help="seeded random pipeline sweep")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--slopes", required=True, help="comma separated diagonal slopes, e.g. 0,1")
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--family", choices=("random", "split"), default="random")

    p = sub.add_parser("convert", parents=[common], help="upper <-> lower numbering")
    p.add_argument("input", nargs="?")
    p.add_argument("--direction", choices=("to-lower", "to-upper"), default="to-lower")
    p.add_argument("--p", type=int)
    p.add_argument("--values", help="comma separated breaks")
    return ap


def job_from_args(ns: argparse.Namespace) -> JobSpec:
    opts = {}
    for key in ("minimize", "fit_r", "fit_m", "fit_d", "n", "level", "rank", "family", "direction"):
        if getattr(ns, key, None) is not None:
            opts[key] = getattr(ns, key)
    if ns.command in ("sweep", "convert") and getattr(ns, "p", None) is not None:
        opts["p"] = ns.p
    if getattr(ns, "slopes", None) is not None:
        opts["slopes"] = _rationals(ns.slopes)
    if getattr(ns, "values", None) is not None:
        opts["values"] = _rationals(ns.values)
    inputs = [ns.input] if getattr(ns, "input", None) else []
    K = getattr(ns, "K", None)
    return JobSpec(ns.command, inputs, ns.out, ns.fmt, ns.prec, ns.window, K,
                   getattr(ns, "seed", None), getattr(ns, "trials", None), opts)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        job = job_from_args(ns)
    except UnitRootError as exc:
        sys.stderr.write(_json(exc.as_dict()))
        return EXIT_CONTRACT
    return run_job(job)


if __name__ == "__main__":
    sys.exit(main())
