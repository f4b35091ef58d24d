"""Command-line front end: ``lurye analyze|verify|search|simulate|sweep``.

Inputs are JSON files, outputs are JSON on stdout (keys sorted, so reruns
are byte-identical) plus CSV files written under ``--out`` when given.

Exit codes: 0 every requested gate passed, 1 a gate failed, 2 bad input,
3 multiplier on the boundary of its class (``verify`` only).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from pathlib import Path
from typing import Optional

from . import bounds as _bounds
from .errors import Infeasible, LuryeError
from .lti import Domain, RationalPlant, continuous_grid, dc_gain, discrete_grid
from .multiplier import multiplier_from_dict
from .search import SearchConfig, max_feasible_B, parse_lags, search_delay_multiplier, search_multiplier
from .sim import ConvergedTo, LimitCycle, LuryeLoop, equilibrium_state, run_schedule
from .sweep import b_sweep, offset_sweep
from .verify import certify, positivity_profile

log = logging.getLogger("lurye")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BOUNDARY = 0, 1, 2, 3


class InputError(Exception):
    pass


def _clean(x):
    # JSON has no inf/nan; spell them as strings
    if isinstance(x, float) and not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if hasattr(x, "item"):
        return _clean(x.item())
    return x


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2)


def _load(path: Optional[str], what: str):
    if path is None:
        raise InputError(f"--{what} is required")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _build(what: str, path: str, fn):
    d = _load(path, what)
    try:
        return fn(d)
    except KeyError as exc:
        raise InputError(f"{path}: missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _plant(args) -> RationalPlant:
    return _build("plant", args.plant, RationalPlant.from_dict)


def _quartet(args):
    return _build("bounds", args.bounds, _bounds.bounds_from_dict)


def _grid(plant: RationalPlant, n: int):
    return discrete_grid(n) if plant.domain is Domain.DISCRETE else continuous_grid(n)


def _k_list(text: str) -> list[float]:
    try:
        ks = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"--k: {exc}") from exc
    if not ks or any(k < 0 for k in ks):
        raise InputError("--k needs nonnegative values")
    return ks


def _sector(q, k: float):
    return _bounds.transformed_sector(q, k) if k > 0 else _bounds.summarize(q)


def _out_dir(args) -> Optional[Path]:
    if args.out is None:
        return None
    p = Path(args.out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _write_csv(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(v)) if isinstance(v, float) else v for v in r])


def _emit(args, name: str, payload) -> None:
    text = dumps(payload)
    out = _out_dir(args)
    if out is not None:
        (out / f"{name}.json").write_text(text + "\n")
    print(text)


def cmd_analyze(args) -> int:
    q = _quartet(args)
    rep = {"bounds": q.to_dict(), "summary": _bounds.summarize(q).to_dict()}
    if args.k is not None:
        rep["transformed"] = [_bounds.transformed_sector(q, k).to_dict() for k in _k_list(args.k)]
    if args.offset is not None:
        if q.kind != "asym_sat":
            raise InputError("--offset needs an asym_sat bounds file")
        level = min(q.params["m"], q.params["n"])
        rep["offset"] = {"u_s": args.offset, "level": level,
                         "B_k": _bounds.bk_for_offset_saturation(level, args.offset)}
    _emit(args, "analyze", rep)
    return EXIT_OK


def cmd_verify(args) -> int:
    plant = _plant(args)
    m = _build("multiplier", args.multiplier, multiplier_from_dict)
    k = _k_list(args.k or "0")[0]
    if args.bounds is not None:
        A, B = _sector(_quartet(args), k).weights
    else:
        A, B = 1.0, 1.0
    A = args.A if args.A is not None else A
    B = args.B if args.B is not None else B
    grid = _grid(plant, args.grid_n)
    cert = certify(m, plant, k, A, B, grid)
    gates = {"norm": cert.norm_status == "inside", "positivity": cert.frequency_ok}
    rep = dict(cert.to_dict(), A=A, B=B, k=k, gates=gates, multiplier=m.to_dict())
    out = _out_dir(args)
    if out is not None:
        prof = positivity_profile(m, plant, k, grid)
        _write_csv(out / "verify_profile.csv", ["omega", "re", "im"],
                   zip(grid.points.tolist(), prof.real.tolist(), prof.imag.tolist()))
    _emit(args, "verify", rep)
    if cert.verdict == "pass":
        return EXIT_OK
    return EXIT_BOUNDARY if cert.verdict == "boundary" else EXIT_FAIL


def _search_cfg(args, plant) -> SearchConfig:
    kw = {"grid": _grid(plant, args.grid_n)}
    if args.lags:
        try:
            kw["lags"] = parse_lags(args.lags)
        except ValueError as exc:
            raise InputError(f"--lags: {exc}") from exc
    if args.B_cap is not None:
        kw["B_cap"] = args.B_cap
    return SearchConfig(**kw)


def cmd_search(args) -> int:
    plant = _plant(args)
    q = _quartet(args) if args.bounds is not None else None
    runs, ok = [], True
    for k in _k_list(args.k or "1"):
        A, B = _sector(q, k).weights if q is not None else (1.0, 1.0)
        A = args.A if args.A is not None else A
        B = args.B if args.B is not None else B
        run = {"k": k, "A": A}
        try:
            if plant.domain is Domain.CONTINUOUS:
                margin, mult = search_delay_multiplier(plant, k, A, _grid(plant, args.grid_n))
                run.update(B=B, margin=margin, multiplier=mult.to_dict(), feasible=True)
            elif args.bisect_B:
                bs = max_feasible_B(plant, k, A, _search_cfg(args, plant))
                run.update(bs.to_dict(), multiplier=bs.witness.multiplier.to_dict(), feasible=True)
            else:
                res = search_multiplier(plant, k, A, B, _search_cfg(args, plant))
                run.update(res.to_dict(), B=B, feasible=True)
        except Infeasible as exc:
            run.update(feasible=False, error=str(exc), margin=exc.margin)
            ok = False
        runs.append(run)
    out = _out_dir(args)
    if out is not None:
        for i, run in enumerate(runs):
            if run.get("feasible"):
                (out / f"multiplier_{i}.json").write_text(dumps(run["multiplier"]) + "\n")
    _emit(args, "search", {"runs": runs})
    return EXIT_OK if ok else EXIT_FAIL


def _nonlinearity(args):
    if args.nonlinearity is None:
        return _bounds.PwlMonotone.saturation(1.0, 1.0, 1.0)

    def build(d):
        if d.get("kind") == "saturation":
            return _bounds.PwlMonotone.saturation(d.get("s", 1.0), d["m"], d["n"])
        return _bounds.PwlMonotone(d["breakpoints"], d["values"], d.get("left_slope", 0.0),
                                   d.get("right_slope", 0.0))

    return _build("nonlinearity", args.nonlinearity, build)


def _schedule(args):
    if args.schedule is None:
        return [(args.steps, args.r2)]
    d = _load(args.schedule, "schedule")
    segs = d.get("segments") if isinstance(d, dict) else d
    try:
        return [(int(n), float(v)) for n, v in segs]
    except (TypeError, ValueError) as exc:
        raise InputError(f"{args.schedule}: segments must be [duration, level] pairs") from exc


def cmd_simulate(args) -> int:
    plant = _plant(args)
    phi = _nonlinearity(args)
    sched = _schedule(args)
    loop = LuryeLoop(plant, phi, args.r1)
    init = None
    if args.start_level is not None:
        init = equilibrium_state(loop, args.r1, args.start_level)
    n_total = args.steps if args.schedule is not None and args.repeat else None
    tr = run_schedule(loop, sched, n_total, init)
    g1 = dc_gain(plant)
    level_sat = min(-phi.values[0], phi.values[-1]) if phi.left_slope == phi.right_slope == 0 else None
    segments, stable = [], True
    for start, stop, lvl, v in tr.segments:
        u_s = lvl / (1.0 + g1)
        row = {"start": start, "stop": stop, "r2": lvl, "abs_r2": abs(lvl), "verdict": v.to_dict()}
        if isinstance(v, ConvergedTo):
            note = "settled" if v.settled else f"converging, residual {v.residual:.1e}"
            row.update(abs_u2=abs(v.value), stable="yes", comment=note)
        elif isinstance(v, LimitCycle):
            row.update(abs_u2=abs(u_s), stable="no", comment=f"period-{v.period} limit cycle")
            stable = False
        else:
            row.update(abs_u2=None, stable="unknown", comment=v.reason)
            stable = False
        if level_sat is not None:
            try:
                row["B_k"] = _bounds.bk_for_offset_saturation(level_sat, u_s)
            except LuryeError as exc:
                row["B_k"] = None
                row["comment"] += f"; {exc}"
        segments.append(row)
    out = _out_dir(args)
    if out is not None:
        _write_csv(out / "trace.csv", ["t", "r2", "u2", "y1", "y2"], tr.rows())
    _emit(args, "simulate", {"steps": len(tr), "segments": segments, "stable": stable})
    return EXIT_OK if stable else EXIT_FAIL


def cmd_sweep(args) -> int:
    plant = _plant(args)
    k = _k_list(args.k or "1")[0]
    cfg = _search_cfg(args, plant)
    if args.B_values is not None:
        Bs = [float(x) for x in args.B_values.split(",") if x.strip()]
        rows = [r.to_dict() for r in b_sweep(plant, Bs, k=k, cfg=cfg)]
        header = ["B", "feasible", "margin"]
    else:
        levels = [float(x) for x in (args.levels or "").split(",") if x.strip()]
        m = 1.0
        if args.bounds is not None:
            q = _quartet(args)
            if q.kind != "asym_sat":
                raise InputError("offset sweep needs an asym_sat bounds file")
            m = min(q.params["m"], q.params["n"])
        rows = [r.to_dict() for r in offset_sweep(plant, levels, m=m, k=k, cfg=cfg, n_steps=args.steps,
                                                  start_level=args.start_level)]
        header = ["B_k", "abs_u2", "abs_r2", "stable", "comment"]
    out = _out_dir(args)
    if out is not None:
        _write_csv(out / "sweep.csv", header,
                   ([_clean(r.get(h)) for h in header] for r in rows))
    _emit(args, "sweep", {"rows": rows})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lurye", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *names):
        if "plant" in names:
            sp.add_argument("--plant", help="plant JSON file")
        if "bounds" in names:
            sp.add_argument("--bounds", help="bounds JSON file")
        sp.add_argument("--out", help="directory for JSON/CSV outputs")
        return sp

    a = common(sub.add_parser("analyze", help="ratios A, B (and A_k, B_k) of a bounds file"), "bounds")
    a.add_argument("--k", help="loop-transform gain(s), comma separated")
    a.add_argument("--offset", type=float, help="operating point u_s for the offset-saturation ratio")
    a.set_defaults(func=cmd_analyze)

    v = common(sub.add_parser("verify", help="check a multiplier certificate"), "plant", "bounds")
    v.add_argument("--multiplier", help="multiplier JSON file")
    v.add_argument("--k", help="loop-transform gain (0 for none)")
    v.add_argument("--A", type=float, help="override A")
    v.add_argument("--B", type=float, help="override B")
    v.add_argument("--grid-n", type=int, default=4096)
    v.set_defaults(func=cmd_verify)

    s = common(sub.add_parser("search", help="LP search for a multiplier"), "plant", "bounds")
    s.add_argument("--k", help="loop-transform gain(s), comma separated")
    s.add_argument("--A", type=float)
    s.add_argument("--B", type=float)
    s.add_argument("--lags", help='lag range "-1:3" or list "-1,1,2,3"')
    s.add_argument("--grid-n", type=int, default=4096)
    s.add_argument("--bisect-B", action="store_true", help="bisect for the largest certifiable B")
    s.add_argument("--B-cap", type=float)
    s.set_defaults(func=cmd_search)

    m = common(sub.add_parser("simulate", help="simulate the discrete loop"), "plant")
    m.add_argument("--nonlinearity", help="nonlinearity JSON (default unit saturation)")
    m.add_argument("--schedule", help="JSON list of [duration, r2] segments")
    m.add_argument("--repeat", action="store_true", help="repeat the schedule up to --steps")
    m.add_argument("--steps", type=int, default=2000)
    m.add_argument("--r1", type=float, default=0.0)
    m.add_argument("--r2", type=float, default=0.0, help="constant r2 when no schedule is given")
    m.add_argument("--start-level", type=float, help="start at rest at the operating point of this r2")
    m.set_defaults(func=cmd_simulate)

    w = common(sub.add_parser("sweep", help="stability table over r2 levels or B values"), "plant", "bounds")
    w.add_argument("--k")
    w.add_argument("--levels", help="comma-separated r2 levels")
    w.add_argument("--B-values", help="comma-separated B values (instead of levels)")
    w.add_argument("--lags")
    w.add_argument("--grid-n", type=int, default=4096)
    w.add_argument("--B-cap", type=float)
    w.add_argument("--steps", type=int, default=2000)
    w.add_argument("--start-level", type=float, default=-1.0)
    w.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    level = os.environ.get("LURYE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    log.info("running %s", args.command)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"lurye {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LuryeError as exc:
        print(f"lurye {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
