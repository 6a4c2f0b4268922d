"""Command-line surface.

Exit codes: 0 success, 1 verification counterexample, 2 usage/domain
error, 3 runtime numerical failure.  Every command's stdout is a pure
function of (flags, config, seed); wall-clock timings go to stderr only.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import config as cfgmod
from .admissibility import dual_pair, verify_region_equivalence
from .artifacts import (
    write_json,
    write_manifest,
    write_norm_table_csv,
    write_region_csv,
    write_snapshot,
    write_trajectory_csv,
)
from .errors import (
    DomainError,
    EquivalenceFailure,
    FhlabError,
    NumericalError,
    SchemaError,
)
from .exponents import (
    ProblemParams,
    derive,
    inv_r_interval,
    p_m_threshold,
    p_max_threshold,
    step_exponents,
    step_plan,
    theta_max,
)
from .rationals import decimal_str, exact_str, parse_rational
from .regions import LebesguePair, in_omega_gamma, in_omega_gamma_sigma, lattice_membership
from .verification import run_all

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _add_param_flags(parser, required=True):
    parser.add_argument("--d", type=int, required=required, help="space dimension")
    parser.add_argument("--m", type=str, required=required, help="dispersion order, 'a/b'")
    parser.add_argument("--gamma", type=str, required=required, help="kernel exponent, 'a/b'")
    parser.add_argument("--beta", type=str, required=required, help="nonlinearity power, 'a/b'")
    parser.add_argument(
        "--sign", choices=["focusing", "defocusing"], default="defocusing"
    )


def _params_from_args(args) -> ProblemParams:
    return ProblemParams(
        d=args.d,
        m=parse_rational(args.m),
        gamma=parse_rational(args.gamma),
        beta=parse_rational(args.beta),
        sign=args.sign,
    )


def _flat(doc: dict, name: str, value) -> None:
    doc[name] = exact_str(value)
    doc[name + "_decimal"] = decimal_str(value)


def _emit(doc: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(doc, sort_keys=True, separators=(",", ": ")))
    else:
        for key in doc:
            print(f"{key} = {doc[key]}")


def cmd_derive(args) -> int:
    params = _params_from_args(args)
    der = derive(params)
    doc: dict = {
        "d": params.d,
        "m": exact_str(params.m),
        "gamma": exact_str(params.gamma),
        "beta": exact_str(params.beta),
        "sign": params.sign,
    }
    for name in (
        "sigma", "eta", "s_c", "beta_tilde", "beta0", "a_endpoint", "b_endpoint",
        "x0", "x1", "x2", "x3", "x4", "x5", "y0", "y1", "A", "alpha_tilde_sup",
    ):
        _flat(doc, name, getattr(der, name))
    lo, hi = params.subcritical_window()
    _flat(doc, "subcritical_lo", lo)
    _flat(doc, "subcritical_hi", hi)
    doc["is_subcritical"] = params.is_subcritical()

    interval = inv_r_interval(params)
    _flat(doc, "interval_lo", interval.lo)
    _flat(doc, "interval_hi", interval.hi)
    doc["interval_branch"] = interval.branch
    doc["interval_empty"] = interval.is_empty

    try:
        _flat(doc, "p_m_inv", p_m_threshold(params))
    except FhlabError:
        pass
    try:
        _flat(doc, "p_max_inv", p_max_threshold(params))
    except FhlabError:
        pass

    if args.point:
        x_str, y_str = args.point.split(",")
        point = LebesguePair(parse_rational(x_str), parse_rational(y_str))
        _flat(doc, "point_x", point.inv_r)
        _flat(doc, "point_y", point.inv_q)
        doc["in_omega_gamma"] = in_omega_gamma(point, params)
        doc["in_omega_gamma_sigma"] = in_omega_gamma_sigma(point, params)
        se = step_exponents(point, params, check=False)
        for name in ("alpha_tilde", "inv_gamma_m", "D", "E", "F"):
            _flat(doc, name, getattr(se, name))
        tm = theta_max(point, params)
        _flat(doc, "theta_max", tm.theta_max)
        _flat(doc, "alpha_max", tm.alpha_max)
        dp = dual_pair(point, params)
        _flat(doc, "dual_inv_p", dp.inv_p)
        _flat(doc, "dual_inv_mu", dp.inv_mu)
        if args.alpha is not None:
            plan = step_plan(
                params,
                point,
                parse_rational(args.alpha),
                parse_rational(args.s),
                parse_rational(args.N),
                parse_rational(args.c0),
            )
            _flat(doc, "lambda", plan.lam)
            doc["T_step"] = decimal_str(plan.t_step)
            doc["K_N"] = plan.k_n
            doc["diverges"] = plan.diverges
            _flat(doc, "alpha_beta_over_A", plan.alpha_beta_over_a)
    _emit(doc, args.json)
    return EXIT_OK


def cmd_region(args) -> int:
    params = _params_from_args(args)
    rows = list(lattice_membership(params, args.grid))
    out = Path(args.out)
    write_region_csv(out, rows)
    members = sum(1 for r in rows if r[3])
    if members == 0:
        print("warning: refined region is empty on this lattice", file=sys.stderr)
    if args.figures:
        from .figures import save_region_figure

        save_region_figure(rows, out.with_suffix(".png"))
    print(json.dumps({"rows": len(rows), "members": members, "out": str(out)}, sort_keys=True))
    return EXIT_OK


def cmd_verify(args) -> int:
    started = time.perf_counter()
    report = run_all(samples=args.samples, seed=args.seed)
    doc = report.to_json(include_elapsed=False)
    if args.d is not None:
        params = _params_from_args(args)
        try:
            extra = verify_region_equivalence(params, args.samples, seed=args.seed)
            doc["explicit_params"] = extra.to_json(include_elapsed=False)
        except EquivalenceFailure as exc:
            doc["explicit_params"] = {"error": str(exc)}
            doc["ok"] = False
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    print(f"verify completed in {time.perf_counter() - started:.2f}s", file=sys.stderr)
    return EXIT_OK if doc["ok"] else EXIT_COUNTEREXAMPLE


def _prepare_run(args, require):
    doc = cfgmod.load_config(args.config, require=require)
    out_dir = Path(doc.get("output_dir", f"out/{args.command}"))
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(doc["seed"]) if "seed" in doc else None
    np_rng = None
    if rng is not None:
        import numpy as np

        np_rng = np.random.default_rng(doc["seed"])
    return doc, out_dir, np_rng


def cmd_solve(args) -> int:
    from .spectral import solve

    doc, out_dir, np_rng = _prepare_run(args, require=("grid", "solver"))
    solver = cfgmod.build_solver(doc)
    u0 = cfgmod.build_data(doc, solver.grid, np_rng)
    traj = solve(u0, solver)

    artifacts = [write_trajectory_csv(out_dir / "trajectory.csv", traj)]
    for t, values in zip(traj.snapshot_times, traj.snapshots):
        from .grids import Field

        name = f"snap_{int(round(t / solver.dt)):06d}.bin"
        artifacts.append(write_snapshot(out_dir / name, Field(solver.grid, values), t))
        artifacts.append((out_dir / (name + ".json")))
    figures = []
    if args.figures:
        from .figures import save_conservation_figure

        figures.append(save_conservation_figure(traj, out_dir / "conservation.png"))
    write_manifest(out_dir, "solve", doc, artifacts, figures)
    print(
        json.dumps(
            {
                "mass_drift": traj.mass_drift(),
                "steps": len(traj.times) - 1,
                "final_l2": traj.l2[-1],
                "output_dir": str(out_dir),
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


def cmd_split(args) -> int:
    from .splitting import run_n_sweep

    doc, out_dir, np_rng = _prepare_run(args, require=("grid", "solver", "split"))
    split_cfg = cfgmod.build_split(doc)
    u0 = cfgmod.build_data(doc, split_cfg.solver.grid, np_rng)
    sweep = run_n_sweep(u0, split_cfg, cfgmod.sweep_values(doc))

    report = {"config": doc, **sweep.to_json()}
    artifacts = [write_json(out_dir / "campaign.json", report)]
    for n_val, camp in sweep.campaigns.items():
        tag = str(n_val).replace("/", "_")
        for part, fld in (("v", camp.final_v), ("w", camp.final_w)):
            name = f"final_{part}_N{tag}.bin"
            artifacts.append(write_snapshot(out_dir / name, fld, camp.elapsed))
            artifacts.append(out_dir / (name + ".json"))
    figures = []
    if args.figures:
        from .figures import save_campaign_figure

        figures.append(save_campaign_figure(sweep, out_dir / "campaign.png"))
    write_manifest(out_dir, "split", doc, artifacts, figures)
    summary = {
        "elapsed_by_N": {str(k): v for k, v in sweep.elapsed_by_n.items()},
        "strictly_increasing": sweep.strictly_increasing,
        "max_deviation": max(c.max_deviation for c in sweep.campaigns.values()),
        "output_dir": str(out_dir),
    }
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def cmd_norms(args) -> int:
    import numpy as np

    from .norms import growth_fit, modulation_norm, semigroup_growth_probe, x_norm_table

    doc, out_dir, np_rng = _prepare_run(args, require=("grid", "norms"))
    params = cfgmod.build_params(doc)
    grid = cfgmod.build_grid(doc)
    u0 = cfgmod.build_data(doc, grid, np_rng)
    sec = doc["norms"]
    q, r = sec.get("q", 4.0), sec.get("r", 4.0)
    s = sec.get("s", -0.25)
    p = sec.get("p", 4.0)
    nodes = sec.get("window_nodes", 17)
    t_max = sec.get("t_max", 1e3)
    n_shifts = sec.get("n_shifts", 13)
    shifts = np.concatenate([[0.0], np.logspace(-1, np.log10(t_max), n_shifts)])

    table = x_norm_table(u0, params, q, r, s, shifts, nodes)
    fit = growth_fit(u0, params, q, r, np.logspace(0, np.log10(t_max), n_shifts), nodes)
    probes = semigroup_growth_probe(
        u0, params, q, r, s, sec.get("t0_values", [0.5, 2.0, 10.0]), shifts, nodes
    )
    mod = modulation_norm(u0, p, p / (p - 1.0) if p > 1 else np.inf, 0.0)

    artifacts = [write_norm_table_csv(out_dir / "x_norm_table.csv", table)]
    fit_doc = {
        "x_norm": table.value,
        "growth_exponent": fit.exponent_estimate,
        "growth_residual": fit.residual,
        "modulation_norm": mod,
        "l2": u0.l2(),
        "semigroup_probes": [
            {"t0": pr.t0, "lhs": pr.lhs, "rhs": pr.rhs, "ok": pr.ok} for pr in probes
        ],
        "q": q,
        "r": r,
        "s": s,
        "p": p,
    }
    artifacts.append(write_json(out_dir / "fit_report.json", fit_doc))
    figures = []
    if args.figures:
        from .figures import save_growth_figure

        figures.append(save_growth_figure(table, fit, out_dir / "growth.png"))
    write_manifest(out_dir, "norms", doc, artifacts, figures)
    print(
        json.dumps(
            {
                "x_norm": table.value,
                "growth_exponent": fit.exponent_estimate,
                "probes_ok": all(pr.ok for pr in probes),
                "output_dir": str(out_dir),
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fhlab",
        description="Exponent calculus, admissibility regions, and a periodic "
        "spectral solver for fractional Hartree equations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", help="print the exact exponent table")
    _add_param_flags(p)
    p.add_argument("--point", type=str, help="region point 'x,y' = '1/r,1/q'")
    p.add_argument("--alpha", type=str, help="interpolation weight 'a/b' (needs --point)")
    p.add_argument("--s", type=str, default="0", help="regularity weight, 'a/b' <= 0")
    p.add_argument("--N", type=str, default="2", help="scale parameter, 'a/b' > 1")
    p.add_argument("--c0", type=str, default="1/4", help="step constant, 'a/b'")
    p.add_argument("--json", action="store_true", help="single-line JSON output")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("region", help="sample region membership on a lattice")
    _add_param_flags(p)
    p.add_argument("--grid", type=int, default=200, help="lattice resolution n (n^2 rows)")
    p.add_argument("--out", type=str, required=True, help="output CSV path")
    p.add_argument("--no-figures", dest="figures", action="store_false")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("verify", help="run every exact oracle suite")
    _add_param_flags(p, required=False)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", type=str, help="also write the JSON report here")
    p.set_defaults(func=cmd_verify)

    for name, func in (("solve", cmd_solve), ("split", cmd_split), ("norms", cmd_norms)):
        p = sub.add_parser(name, help=f"run the {name} pipeline from a config file")
        p.add_argument("--config", type=str, required=True)
        p.add_argument("--no-figures", dest="figures", action="store_false")
        p.set_defaults(func=func)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EquivalenceFailure as exc:
        print(f"counterexample: {exc}", file=sys.stderr)
        if exc.counterexample is not None:
            print(json.dumps(exc.counterexample.to_json(), sort_keys=True))
        return EXIT_COUNTEREXAMPLE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
