"""Command-line interface: ``kadapt {generate,solve,bounds,regions,sweep}``.

Exit codes: 0 success, 2 usage or bad input, 3 two-stage infeasibility,
4 size guard exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import arrangement, bounds
from .errors import GuardExceeded, InstanceFormatError, TwoStageInfeasible, UncoverableScenarios
from .generators import builtin_example, builtin_names, generate_knapsack, reduce_set_cover
from .greedy import greedy_min_k, guarantee_ratio
from .model import AffineInstance, FiniteInstance, validate
from .oracle import brute_force_min_k
from .rational import render
from .serialization import SCHEMA_VERSION, dumps, load

EXIT_USAGE, EXIT_INFEASIBLE, EXIT_GUARD = 2, 3, 4

SWEEP_COLUMNS = ["sweep_var", "value", "rep", "seed", "v_star", "k_lb", "k_ub", "runtime_ms", "guarantee_bound"]


class UsageError(Exception):
    pass


def _emit(doc: dict):
    print(json.dumps({"schema_version": SCHEMA_VERSION, **doc}, indent=1))


def _load(path, kind=None):
    try:
        inst = load(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    problems = validate(inst)
    if problems:
        raise UsageError(f"invalid instance {path}: " + "; ".join(problems))
    if kind is not None and not isinstance(inst, kind):
        raise UsageError(f"{path}: expected a {'finite' if kind is FiniteInstance else 'affine'} instance")
    return inst


# ---------------------------------------------------------------------------
# generate


def cmd_generate(args):
    if args.kind == "knapsack":
        if args.n < 1 or args.t < 1:
            raise UsageError("--n and --t must be positive")
        inst = generate_knapsack(args.n, args.t, args.seed)
        g, b = inst.info["gamma"], inst.info["b"]
        summary = f"knapsack n_y={inst.n_y} t={inst.t} Γ={g} b={render(b)} seed={args.seed}"
    elif args.kind == "setcover":
        try:
            subsets = json.loads(Path(args.subsets).read_text())
            inst = reduce_set_cover(args.universe, subsets)
        except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
            raise UsageError(f"bad set-cover input: {exc}") from None
        summary = f"setcover |V|={args.universe} subsets={len(subsets)} n_y={inst.n_y} t={inst.t}"
    else:
        try:
            inst = builtin_example(args.name, args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if isinstance(inst, FiniteInstance):
            summary = f"{inst.name} n_y={inst.n_y} t={inst.t}"
        else:
            summary = f"{inst.name} n_y={inst.n_y} n_xi={inst.n_xi} m={inst.m}"
    text = dumps(inst)
    if args.output:
        Path(args.output).write_text(text)
        print(summary)
    else:
        print(text)
    return 0


# ---------------------------------------------------------------------------
# solve


def cmd_solve(args):
    inst = _load(args.instance, FiniteInstance)
    fl = args.float
    res = greedy_min_k(inst)
    k_opt = None
    oracle_note = None
    if args.oracle:
        try:
            k_opt, _ = brute_force_min_k(inst)
        except GuardExceeded as exc:
            oracle_note = str(exc)
    if args.json:
        doc = {"command": "solve", "instance": inst.name, "t": inst.t, "n_y": inst.n_y, **res.to_dict()}
        doc["v_star"] = render(res.optimal_value, fl) if fl else doc["v_star"]
        doc["guarantee_ratio"] = guarantee_ratio(inst.t)
        if args.oracle:
            doc["k_opt"] = k_opt
            if oracle_note:
                doc["oracle_note"] = oracle_note
        _emit(doc)
        return 0
    line = f"v*={render(res.optimal_value, fl)} k_lb={res.k_lb} k_ub={res.k_ub}"
    if args.oracle:
        line += f" k_opt={k_opt if k_opt is not None else 'unavailable'}"
    print(line)
    if oracle_note:
        print(f"oracle skipped: {oracle_note}")
    for i, step in enumerate(res.trace):
        print(f"policy {i}: y={list(step.policy)} covers {step.newly_covered} new scenarios {step.scenarios}")
    return 0


# ---------------------------------------------------------------------------
# bounds


def _report(args, rep: bounds.BoundReport):
    if getattr(args, "json", False):
        _emit({"command": "bounds", **rep.to_dict()})
        return 0
    d = rep.to_dict()
    print(f"{d['name']}: {d['value']}")
    for a in d["assumptions"]:
        print(f"  assumption: {a}")
    for k, v in d["formula_trace"].items():
        print(f"  {k} = {v}")
    return 0


def cmd_bounds(args):
    try:
        if args.which == "objective":
            k = bounds.objective_bound(args.nxi)
            rep = bounds.BoundReport("objective_bound", k, ["uncertainty only in the objective"], {"n_xi": args.nxi, "formula": "n_xi+1"})
        elif args.which == "gap":
            v = bounds.approx_gap(args.L, args.diam, args.s, args.k)
            rep = bounds.BoundReport("approx_gap", v, [], {"L": args.L, "diam_Y": args.diam, "s": args.s, "k": args.k, "formula": "L*diam*ln(k/s)"})
        elif args.which == "alpha":
            k = bounds.policies_for_alpha(args.L, args.diam, args.nxi, args.alpha)
            rep = bounds.BoundReport("policies_for_alpha", k, [], {"L": args.L, "diam_Y": args.diam, "n_xi": args.nxi, "alpha": args.alpha, "formula": "ceil((n_xi+1)*exp(-alpha/(L*diam)))"})
        elif args.which == "constraint":
            inst = _load(args.instance, AffineInstance)
            rep = bounds.constraint_k_bound(
                inst,
                fixed_recourse=True if args.fixed_recourse else None,
                objective_uncertain=False if args.obj_certain else None,
                eta=args.eta,
                trim_rhs=args.trim_rhs,
            )
        else:
            v = bounds.constraint_approx_gap(args.L, args.diam, args.nxi, args.R, args.s)
            rep = bounds.BoundReport("constraint_approx_gap", v, [f"cover by R={args.R} regions"], {"L": args.L, "diam_Y": args.diam, "n_xi": args.nxi, "R": args.R, "s": args.s, "k": args.R * args.s, "formula": "L*diam*ln((n_xi+1)/s)"})
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return _report(args, rep)


# ---------------------------------------------------------------------------
# regions


def cmd_regions(args):
    inst = _load(args.instance, AffineInstance)
    if not 0 <= args.x < len(inst.X):
        raise UsageError(f"--x must index the first-stage list (0..{len(inst.X) - 1})")
    x = inst.X[args.x]
    planes, regions = arrangement.regions_for(inst, x)
    gaps = arrangement.cover_gaps(regions, planes, inst.U)
    eta_emp = max(1, len(planes))
    counts = {
        "eta_empirical": eta_emp,
        "R_empirical": len(regions),
        "R_bound": bounds.region_count_bound(eta_emp, inst.n_xi),
        "eta_integer_bound": bounds.eta_integer_x(inst),
        "eta_mixed_bound": bounds.eta_mixed_x(inst),
        "cover_ok": not gaps,
    }
    if args.csv:
        Path(args.csv).write_text(arrangement.regions_csv(regions))
    if args.output:
        Path(args.output).write_text(arrangement.regions_json(regions, planes))
    if args.json:
        doc = json.loads(arrangement.regions_json(regions, planes))
        _emit({"command": "regions", "x": list(x), **counts, **doc})
        return 0
    for k, v in counts.items():
        print(f"{k}={v}")
    for i, r in enumerate(regions):
        d = r.to_dict()
        print(f"region {i}: signs={''.join(d['signs'])} witness=({', '.join(map(str, d['witness']))}) Y_D={[list(y) for y in r.feasible_set]}")
    return 0


# ---------------------------------------------------------------------------
# sweep


def parse_values(text: str) -> list[int]:
    """``"20,40,...,100"``, ``"10..20"`` or a plain comma list."""
    text = text.strip()
    if not text:
        raise UsageError("empty value list")
    try:
        if ".." in text and "," not in text:
            a, b = text.split("..")
            vals = list(range(int(a), int(b) + 1))
        else:
            parts = [p.strip() for p in text.split(",") if p.strip()]
            if "..." in parts:
                i = parts.index("...")
                if i != 2 or len(parts) != 4:
                    raise UsageError(f"bad progression {text!r}; use a,b,...,c")
                a, b, c = int(parts[0]), int(parts[1]), int(parts[3])
                if b <= a:
                    raise UsageError("progression must increase")
                vals = list(range(a, c + 1, b - a))
            else:
                vals = [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"bad value list {text!r}") from None
    if not vals:
        raise UsageError("empty value list")
    return vals


def run_seed(base: int, rep: int) -> int:
    # common random numbers: the same seed for every sweep value, so larger-t
    # instances extend the scenario list of smaller ones
    return base * 1000 + rep


def _sweep_run(job):
    var, value, rep, seed, n, t = job
    n_y, tt = (value, t) if var == "n" else (n, value)
    inst = generate_knapsack(n_y, tt, seed)
    start = time.perf_counter()
    res = greedy_min_k(inst)
    ms = (time.perf_counter() - start) * 1000
    return {
        "sweep_var": var,
        "value": value,
        "rep": rep,
        "seed": seed,
        "v_star": render(res.optimal_value),
        "k_lb": res.k_lb,
        "k_ub": res.k_ub,
        "runtime_ms": f"{ms:.1f}",
        "guarantee_bound": f"{guarantee_ratio(tt):.6f}",
    }


def sweep_rows(var, values, n, t, reps, seed, parallel=1):
    jobs = [(var, v, r, run_seed(seed, r), n, t) for v in sorted(values) for r in range(reps)]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as ex:
            return list(ex.map(_sweep_run, jobs))
    return [_sweep_run(j) for j in jobs]


def cmd_sweep(args):
    values = parse_values(args.values)
    if args.reps < 1:
        raise UsageError("--reps must be >= 1")
    if any(v < 1 for v in values) or args.n < 1 or args.t < 1:
        raise UsageError("sizes must be positive")
    rows = sweep_rows(args.var, values, args.n, args.t, args.reps, args.seed, args.parallel)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.DictWriter(out, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    finally:
        if args.output:
            out.close()
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kadapt", description="Minimal k for k-adaptability: greedy, oracles, bounds, regions.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write an instance as JSON")
    gs = g.add_subparsers(dest="kind", required=True)
    k = gs.add_parser("knapsack", help="robust knapsack benchmark instance")
    k.add_argument("--n", type=int, required=True, help="n_y")
    k.add_argument("--t", type=int, required=True, help="number of scenarios")
    k.add_argument("--seed", type=int, default=0)
    s = gs.add_parser("setcover", help="reduction from minimum set cover")
    s.add_argument("--universe", type=int, required=True)
    s.add_argument("--subsets", required=True, help="JSON file: list of lists of 0-based elements")
    b = gs.add_parser("builtin", help="built-in example: " + ", ".join(builtin_names()))
    b.add_argument("--name", required=True)
    b.add_argument("--n", type=int, default=None)
    for q in (k, s, b):
        q.add_argument("-o", "--output")

    sv = sub.add_parser("solve", help="greedy minimal k on a finite instance")
    sv.add_argument("instance")
    sv.add_argument("--oracle", action="store_true", help="add the exact k_opt when small enough")
    sv.add_argument("--json", action="store_true")
    sv.add_argument("--float", action="store_true", help="decimal instead of p/q output")

    bd = sub.add_parser("bounds", help="closed-form policy-count bounds")
    bs = bd.add_subparsers(dest="which", required=True)
    o = bs.add_parser("objective")
    o.add_argument("--nxi", type=int, required=True)
    gp = bs.add_parser("gap")
    gp.add_argument("--L", type=float, required=True)
    gp.add_argument("--diam", type=float, required=True)
    gp.add_argument("--s", type=int, required=True)
    gp.add_argument("--k", type=int, required=True)
    al = bs.add_parser("alpha")
    al.add_argument("--L", type=float, required=True)
    al.add_argument("--diam", type=float, required=True)
    al.add_argument("--nxi", type=int, required=True)
    al.add_argument("--alpha", type=float, required=True)
    c = bs.add_parser("constraint")
    c.add_argument("instance")
    c.add_argument("--fixed-recourse", action="store_true")
    c.add_argument("--obj-certain", action="store_true", help="objective does not depend on ξ")
    c.add_argument("--eta", type=int, default=None, help="use this η instead of the computed bound")
    c.add_argument("--trim-rhs", action="store_true")
    cg = bs.add_parser("constraint-gap")
    cg.add_argument("--L", type=float, required=True)
    cg.add_argument("--diam", type=float, required=True)
    cg.add_argument("--nxi", type=int, required=True)
    cg.add_argument("--R", type=int, required=True)
    cg.add_argument("--s", type=int, required=True)
    for q in (o, gp, al, c, cg):
        q.add_argument("--json", action="store_true")

    rg = sub.add_parser("regions", help="hyperplane arrangement and recourse-stable regions")
    rg.add_argument("instance")
    rg.add_argument("--x", type=int, default=0, help="index into the first-stage list")
    rg.add_argument("-o", "--output", help="write the region dump as JSON")
    rg.add_argument("--csv", help="write one CSV row per region")
    rg.add_argument("--json", action="store_true")

    sw = sub.add_parser("sweep", help="greedy runs on generated knapsack instances, as CSV")
    sw.add_argument("--var", choices=["t", "n"], required=True)
    sw.add_argument("--values", required=True, help='e.g. "20,40,...,100" or "10..20"')
    sw.add_argument("--n", type=int, default=20, help="n_y when sweeping t")
    sw.add_argument("--t", type=int, default=100, help="t when sweeping n")
    sw.add_argument("--reps", type=int, default=5)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--parallel", type=int, default=1)
    sw.add_argument("-o", "--output")
    return p


HANDLERS = {
    "generate": cmd_generate,
    "solve": cmd_solve,
    "bounds": cmd_bounds,
    "regions": cmd_regions,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return HANDLERS[args.command](args)
    except (UsageError, InstanceFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TwoStageInfeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except UncoverableScenarios as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
