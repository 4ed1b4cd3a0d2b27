"""Command-line surface: list | rates | kernel | evolve | sample | verify.

Exit codes: 0 success, 1 validation error, 2 numerical-budget failure,
3 internal-consistency failure.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io, models, oracle, spectral, verify
from .defaults import defaults_table
from .models import (
    ConstraintViolationError,
    ModelDegeneracyError,
    NonNormalizableError,
)
from .oracle import AdvisoryError
from .spectral import CutoffError, Distribution, InternalConsistencyError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BUDGET = 2
EXIT_INTERNAL = 3


class _ConfigError(ValueError):
    pass


def _add_model_args(p: argparse.ArgumentParser):
    p.add_argument("--model", help="JSON model parameter file")
    p.add_argument("--family", help="family id or alias (see `bdk list`)")
    p.add_argument("--param", action="append", default=[], metavar="K=V",
                   help="override one model parameter (repeatable)")
    p.add_argument("--q", type=float, help="base q for q-families")
    p.add_argument("--N", type=int, help="lattice size parameter for finite families")


def _add_common_args(p: argparse.ArgumentParser):
    p.add_argument("--eps-tail", type=float, default=1e-12)
    p.add_argument("--eps-spec", type=float, default=1e-12)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output path (default stdout)")


def _resolve_model(args) -> models.ModelParams:
    if bool(args.model) == bool(args.family):
        raise _ConfigError("exactly one model source required: --model file or --family id")
    if args.model:
        if args.param or args.q is not None or args.N is not None:
            raise _ConfigError("--param/--q/--N cannot be combined with --model")
        return io.load_model_file(args.model)
    fam = models.get_family(args.family)
    entry = defaults_table().get(fam.id, {"params": {}})
    params = dict(entry.get("params", {}))
    q = args.q if args.q is not None else entry.get("q")
    N = args.N if args.N is not None else entry.get("N")
    for kv in args.param:
        if "=" not in kv:
            raise _ConfigError(f"--param expects K=V, got {kv!r}")
        k, v = kv.split("=", 1)
        params[k.strip()] = float(v)
    return models.validate(fam, params, N=N, q=q)


def _check_budgets(args):
    for name in ("eps_tail", "eps_spec"):
        v = getattr(args, name, None)
        if v is not None and not (0.0 < v <= 0.1):
            raise _ConfigError(f"--{name.replace('_', '-')} must lie in (0, 0.1]")


def _parse_times(spec: str):
    ts = [float(s) for s in spec.split(",") if s.strip()]
    if not ts:
        raise _ConfigError("--t needs at least one time")
    if any(t < 0 for t in ts):
        raise _ConfigError("times must be non-negative")
    return ts


def _open_out(args):
    return open(args.out, "w") if args.out else sys.stdout


def cmd_list(args) -> int:
    rows = []
    for spec in models.FAMILY_ORDER:
        rows.append({
            "id": spec.id, "ks": spec.ks,
            "support": f"finite (0..N)" if spec.finite else "infinite (0..)",
            "self_dual": spec.self_dual,
            "params": ", ".join(spec.param_names) + (", q" if spec.uses_q else ""),
            "constraints": spec.constraint_text,
        })
    if args.format == "json":
        json.dump(rows, sys.stdout, indent=2)
        print()
        return EXIT_OK
    wid = max(len(r["id"]) for r in rows)
    wc = max(len(r["params"]) for r in rows)
    for r in rows:
        flag = "self-dual" if r["self_dual"] else "         "
        print(f"{r['id']:<{wid}}  {r['ks']:<7} {r['support']:<16} {flag}  "
              f"{r['params']:<{wc}}  {r['constraints']}")
    return EXIT_OK


def cmd_rates(args) -> int:
    _check_budgets(args)
    mp_ = _resolve_model(args)
    data = spectral.build(mp_, eps_tail=args.eps_tail, eps_spec=args.eps_spec) \
        if not mp_.finite else spectral.build(mp_)
    pi = spectral.stationary_distribution(data)
    rows = list(io.rates_rows(mp_, data.space, pi))
    with _open_out(args) as fh:
        if args.format == "csv":
            io.rates_csv(rows, fh)
        else:
            json.dump({"family": mp_.family.id, "rows": rows}, fh, indent=2)
            fh.write("\n")
    deficit = abs(sum(r["stationary"] for r in rows) - 1.0)
    budget = 1e-10 if mp_.finite else args.eps_tail * 10 + 1e-10
    if deficit > budget:
        print(f"stationary mass deficit {deficit:g} beyond budget {budget:g}",
              file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_kernel(args) -> int:
    _check_budgets(args)
    mp_ = _resolve_model(args)
    ts = _parse_times(args.t)
    t_pos = [t for t in ts if t > 0]
    if mp_.finite:
        data = spectral.build(mp_)
    else:
        if not t_pos:
            raise _ConfigError("truncated-infinite kernels need at least one t > 0")
        data = spectral.build(mp_, eps_tail=args.eps_tail, eps_spec=args.eps_spec,
                              t_min=min(t_pos))
        if any(t == 0 for t in ts):
            raise _ConfigError("t = 0 is not summable for truncated-infinite models")
    results = [spectral.kernel(data, t) for t in ts]
    with _open_out(args) as fh:
        if args.format == "csv":
            io.kernel_rows_csv(results, fh)
        else:
            io.kernel_json(results, data, fh)
    status = EXIT_OK
    budget = 1e-10 if mp_.finite else args.eps_tail * 10 + 1e-10
    for res in results:
        print(f"t={res.t:g}: n_max={res.n_max} row_sum_dev={res.row_sum_max_dev:.3g} "
              f"clamp_min={res.clamp_min:.3g} tail={res.state_tail_bound:.3g}",
              file=sys.stderr)
        for w in res.warnings:
            print(f"warning: {w}", file=sys.stderr)
        if res.row_sum_max_dev > budget and mp_.family.complete_basis:
            status = EXIT_BUDGET
    if args.verify:
        gen = oracle.build_generator(mp_, data.space)
        dev = max(float(np.abs(res.matrix - oracle.expm_window(gen, res.t)).max())
                  for res in results)
        print(f"oracle max deviation: {dev:.3g}", file=sys.stderr)
        if dev > 1e-10 and mp_.family.complete_basis:
            status = EXIT_BUDGET
    return status


def cmd_evolve(args) -> int:
    _check_budgets(args)
    mp_ = _resolve_model(args)
    ts = _parse_times(args.t)
    t_pos = [t for t in ts if t > 0]
    if mp_.finite:
        data = spectral.build(mp_)
    else:
        data = spectral.build(mp_, eps_tail=args.eps_tail, eps_spec=args.eps_spec,
                              t_min=min(t_pos) if t_pos else 0.1)
    init_vals = io.read_distribution_csv(args.initial)
    if init_vals.size > data.size:
        raise _ConfigError(
            f"initial distribution has {init_vals.size} states, space has {data.size}")
    padded = np.zeros(data.size)
    padded[: init_vals.size] = init_vals
    init = Distribution.from_values(padded)
    pi = spectral.stationary_distribution(data)
    outs = [spectral.evolve(data, init, t) for t in ts]
    with _open_out(args) as fh:
        if args.format == "csv":
            fh.write("t,x,probability\n")
            for t, d in zip(ts, outs):
                for x, p in enumerate(d.probabilities):
                    fh.write(f"{io.fmt(t)},{x},{io.fmt(p)}\n")
        else:
            json.dump({
                "family": mp_.family.id,
                "distributions": [
                    {"t": t, "probabilities": [float(p) for p in d.probabilities]}
                    for t, d in zip(ts, outs)],
            }, fh, indent=2)
            fh.write("\n")
    dists = [0.5 * float(np.abs(d.probabilities - pi).sum()) for d in outs]
    for t, dv in zip(ts, dists):
        print(f"t={t:g}: TV distance to stationary = {dv:.6g}", file=sys.stderr)
    order = np.argsort(ts)
    monotone = all(dists[order[i + 1]] <= dists[order[i]] + 1e-12
                   for i in range(len(ts) - 1))
    print(f"monotone convergence: {'yes' if monotone else 'no'}", file=sys.stderr)
    return EXIT_OK


def cmd_sample(args) -> int:
    _check_budgets(args)
    mp_ = _resolve_model(args)
    t = float(args.t)
    if t < 0:
        raise _ConfigError("t must be non-negative")
    if mp_.finite:
        data = spectral.build(mp_)
    else:
        data = spectral.build(mp_, eps_tail=args.eps_tail, eps_spec=args.eps_spec,
                              t_min=t if t > 0 else 0.1)
    emp, diag = oracle.gillespie_sample(
        mp_, data.space, y0=args.y0, t=t, n_paths=args.paths, seed=args.seed,
        return_states=bool(args.paths_out))
    if args.paths_out:
        with open(args.paths_out, "w") as fh:
            fh.write("path,state\n")
            for i, s in enumerate(diag["final_states"]):
                fh.write(f"{i},{int(s)}\n")
        del diag["final_states"]
    with _open_out(args) as fh:
        if args.format == "csv":
            io.distribution_csv(emp, fh)
        else:
            json.dump({"family": mp_.family.id, "diagnostics": diag,
                       "probabilities": [float(p) for p in emp.probabilities]},
                      fh, indent=2)
            fh.write("\n")
    if t > 0 or mp_.finite:
        row = spectral.transition_matrix(data, t)[args.y0] if t > 0 else None
        if row is None:
            row = np.zeros(data.size)
            row[args.y0] = 1.0
        tv = 0.5 * float(np.abs(emp.probabilities - row).sum())
        print(f"TV(empirical, spectral) = {tv:.6g}  "
              f"[lane={diag['lane']}, algorithm={diag['algorithm']}, "
              f"seed={diag['seed']}, escape_attempts={diag['escape_attempts']}]",
              file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    families = None
    if not args.all:
        if not args.family:
            raise _ConfigError("use --all or --family ID")
        families = (models.get_family(args.family).id,)
    checks = args.checks.split(",") if args.checks else None
    if checks:
        bad = set(checks) - set(verify.ALL_CHECKS) - set(verify.GLOBAL_CHECKS)
        if bad:
            raise _ConfigError(f"unknown checks {sorted(bad)}")
        fam_checks = [c for c in checks if c in verify.ALL_CHECKS] or None
    else:
        fam_checks = None
    rows = verify.run_all(families=families, checks=checks if checks else None)
    ok = all(r["pass"] for r in rows)
    with _open_out(args) as fh:
        if args.json:
            json.dump({"pass": ok, "rows": rows}, fh, indent=2)
            fh.write("\n")
        else:
            for r in rows:
                mark = "PASS" if r["pass"] else "FAIL"
                note = f"  ({r['note']})" if r.get("note") else ""
                fh.write(f"[{mark}] {r['check']:<18} {r['family']:<28} "
                         f"{r['value']:.3e} <= {r['threshold']:.1e}  {r['metric']}{note}\n")
            fh.write(f"overall: {'PASS' if ok else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_BUDGET


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bdk",
        description="Exactly solvable birth-death processes: spectral kernels, "
                    "oracles, and simulation.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="catalog of the 18 model families")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(fn=cmd_list)

    p = sub.add_parser("rates", help="tabulate B, D, eta, phi0^2 and the stationary law")
    _add_model_args(p); _add_common_args(p)
    p.set_defaults(fn=cmd_rates)

    p = sub.add_parser("kernel", help="transition matrices at the given times")
    _add_model_args(p); _add_common_args(p)
    p.add_argument("--t", required=True, help="comma-separated times")
    p.add_argument("--verify", action="store_true",
                   help="cross-check against the matrix-exponential oracle")
    p.set_defaults(fn=cmd_kernel)

    p = sub.add_parser("evolve", help="push a distribution forward in time")
    _add_model_args(p); _add_common_args(p)
    p.add_argument("--t", required=True, help="comma-separated times")
    p.add_argument("--initial", required=True, help="CSV distribution (x,probability)")
    p.set_defaults(fn=cmd_evolve)

    p = sub.add_parser("sample", help="Gillespie simulation of the chain")
    _add_model_args(p); _add_common_args(p)
    p.add_argument("--t", required=True, type=float)
    p.add_argument("--paths", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--y0", type=int, default=0)
    p.add_argument("--paths-out", help="optional per-path final-state dump (CSV)")
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--all", action="store_true", help="all 18 families at defaults")
    p.add_argument("--family", help="restrict to one family")
    p.add_argument("--checks", help="comma-separated subset of checks")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (_ConfigError, ConstraintViolationError, ModelDegeneracyError,
            NonNormalizableError, FileNotFoundError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (CutoffError, AdvisoryError) as exc:
        print(f"numerical budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InternalConsistencyError as exc:
        print(f"internal consistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
