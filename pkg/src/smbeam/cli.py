"""Command-line front end for the experiment harness and analysis tooling.

Exit codes: 0 on success, 1 for configuration errors, 2 when more than 10%
of the Monte-Carlo runs of any algorithm failed numerically.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import analysis, harness
from .arrays import ScenarioError, generate_snapshots, steering_vector
from .harness import ConfigError, PREDICTOR_P_MIN, get_preset, load_config
from .lcmv import GainConstraint, NumericsError, initial_reduced_state


def _load_experiment(target: str):
    if target in harness.PRESETS:
        return get_preset(target)
    if Path(target).exists():
        return load_config(target)
    raise ConfigError(f"{target!r} is neither a preset nor a config file; "
                      f"presets: {', '.join(sorted(harness.PRESETS))}")


def _apply_overrides(cfg, args):
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, master_seed=args.seed)
    if getattr(args, "runs", None) is not None:
        cfg = replace(cfg, num_runs=args.runs)
    if getattr(args, "snapshots", None) is not None:
        cfg = replace(cfg, num_snapshots=args.snapshots)
        if cfg.scenario.change_snapshot >= cfg.num_snapshots:
            cfg = replace(cfg, scenario=replace(cfg.scenario,
                                                change_snapshot=cfg.num_snapshots // 2))
    return cfg


def _cmd_run(args) -> int:
    cfg = _apply_overrides(_load_experiment(args.experiment), args)
    result = harness.run_experiment(cfg, workers=args.workers)
    print(f"experiment {cfg.name}: m={cfg.scenario.num_elements}, "
          f"{cfg.num_runs} runs x {cfg.num_snapshots} snapshots")
    print(f"  {'algorithm':<24} {'final SINR dB':>14} {'update rate':>12} "
          f"{'runs ok':>8}")
    bound = result.mvdr
    print(f"  {'mvdr-bound':<24} {bound.final_sinr():>14.2f} {'-':>12} "
          f"{bound.completed_runs:>8}")
    too_many_failures = False
    for name in sorted(result.records):
        rec = result.records[name]
        print(f"  {name:<24} {rec.final_sinr():>14.2f} {rec.update_rate():>12.3f} "
              f"{rec.completed_runs:>8}")
        if rec.failed_runs > 0.1 * cfg.num_runs:
            too_many_failures = True
    if args.out:
        paths = harness.emit_csv(result, args.out)
        print(f"wrote {len(paths)} CSV files under {args.out}")
    return 2 if too_many_failures else 0


def _cmd_sweep_rank(args) -> int:
    cfg = _apply_overrides(_load_experiment(args.experiment), args)
    ranks = _parse_ranks(args.ranks, cfg.scenario.num_elements)
    table = harness.rank_sweep(cfg, ranks, workers=args.workers)
    print(f"final SINR (dB) by rank, preset {cfg.name}:")
    header = "rank".ljust(6) + "".join(name.rjust(18) for name in sorted(table))
    print("  " + header)
    for r in ranks:
        row = f"{r:<6}" + "".join(f"{table[name][r]:>18.2f}" for name in sorted(table))
        print("  " + row)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / "rank_sweep.csv"
        lines = ["algorithm,rank,final_sinr_db"]
        for name in sorted(table):
            for r in ranks:
                lines.append(f"{name},{r},{table[name][r]:.17g}")
        path.write_text("\n".join(lines) + "\n")
        print(f"wrote {path}")
    return 0


def _parse_ranks(spec: str, m: int) -> list[int]:
    try:
        if ":" in spec:
            lo, hi = spec.split(":")
            ranks = list(range(int(lo), int(hi) + 1))
        else:
            ranks = [int(tok) for tok in spec.split(",")]
    except ValueError as exc:
        raise ConfigError(f"cannot parse rank list {spec!r}: {exc}") from exc
    if not ranks or any(not 1 <= r <= m for r in ranks):
        raise ConfigError(f"ranks must lie in [1, {m}], got {spec!r}")
    return ranks


def _cmd_complexity(args) -> int:
    m_values = [int(tok) for tok in args.elements.split(",")]
    rows = []
    for tag in analysis.COMPLEXITY_TAGS:
        for m in m_values:
            adds, mults = analysis.complexity_count(tag, m, args.rank,
                                                    args.snapshots, args.tau)
            rows.append((tag, m, adds, mults))
    print(f"arithmetic cost for r={args.rank}, N={args.snapshots}, tau={args.tau}:")
    print(f"  {'algorithm':<12} {'m':>6} {'additions':>16} {'multiplications':>16}")
    for tag, m, adds, mults in rows:
        print(f"  {tag:<12} {m:>6} {str(adds):>16} {str(mults):>16}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / "complexity.csv"
        lines = ["algorithm,num_elements,rank,num_snapshots,update_rate,additions,multiplications"]
        for tag, m, adds, mults in rows:
            lines.append(f"{tag},{m},{args.rank},{args.snapshots},{args.tau},{adds},{mults}")
        path.write_text("\n".join(lines) + "\n")
        print(f"wrote {path}")
    return 0


def _cmd_predict_mse(args) -> int:
    cfg = _apply_overrides(_load_experiment(args.experiment), args)
    sm_sg = [a for a in cfg.algorithms if a.tag == "jio-sm-sg"]
    if not sm_sg:
        raise ConfigError("predict-mse needs a jio-sm-sg algorithm in the experiment")
    setup = sm_sg[0]
    p_min = args.p_min if args.p_min is not None else PREDICTOR_P_MIN.get(cfg.name, 0.163)

    result = harness.run_experiment(cfg, workers=args.workers)
    mse_raw = result.records[setup.name].mse_mean
    # trend counterpart of the predictor's readout (same error-trace metric)
    trend = harness.simulated_mse_trend(result, setup.name)

    spec = cfg.scenario
    rng = np.random.default_rng([cfg.master_seed, 10 ** 6])
    scenario = spec.build(rng)
    predicted = analysis.predict_mse_trajectory(
        spec.ula, scenario.sources, spec.noise_power,
        rank=setup.rank, alpha=setup.alpha, beta=setup.beta, p_min=p_min,
        horizon=cfg.num_snapshots, ensemble=args.ensemble, rng=rng)

    tail = slice(cfg.num_snapshots // 5, None)
    gap = 10.0 * np.abs(np.log10(predicted.jmse[tail] / trend[tail]))
    print(f"MSE trend prediction, preset {cfg.name} (p_min={p_min}):")
    print(f"  jmin = {predicted.jmin:.6g}, sigma_x^2 = {predicted.sigma_x_sq:.6g}")
    print(f"  max |predicted - simulated trend| over the settled region: {gap.max():.2f} dB")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / "mse_prediction.csv"
        lines = ["snapshot,mse_simulated,mse_trend_simulated,mse_predicted"]
        for i in range(cfg.num_snapshots):
            lines.append(f"{i},{mse_raw[i]:.17g},{trend[i]:.17g},{predicted.jmse[i]:.17g}")
        path.write_text("\n".join(lines) + "\n")
        print(f"wrote {path}")
    return 0


def _cmd_diagnose(args) -> int:
    cfg = _load_experiment(args.experiment)
    spec = cfg.scenario
    rng = np.random.default_rng(args.seed if args.seed is not None else cfg.master_seed)
    scenario = spec.build(rng)
    ula = spec.ula
    a0 = steering_vector(ula, scenario.soi.doa_deg)
    constraint = GainConstraint(steering=a0, gain=1.0)
    rank = cfg.algorithms[0].rank if cfg.algorithms else 5

    worst = 0.0
    gated = 0
    state = initial_reduced_state(ula.num_elements, rank, constraint)
    received, _ = generate_snapshots(ula, scenario.sources, spec.noise_power,
                                     rng, args.count)
    for i in range(args.count):
        x = received[:, i]
        y = state.output(x)
        delta = 0.5 * abs(y) if abs(y) > 0 else 1.0
        report = analysis.stability_matrix(x, state, delta, constraint)
        if report.spectral_radius > 1.0 or True:
            worst = max(worst, report.max_eig_gram)
        gated += 1
    print(f"stability: {gated} gated snapshots, max eig of U^H U = {worst:.9f} "
          f"({'within' if worst <= 1 + 1e-6 else 'OUTSIDE'} the unit disc)")

    lam_grid = np.linspace(args.lambda_min, args.lambda_max, args.lambda_points)
    verdicts = []
    for lam in lam_grid:
        rep = analysis.hessian_condition(state, ula, scenario.sources[:2], lam)
        verdicts.append((lam, rep.min_eigenvalue, rep.is_psd))
    psd_count = sum(1 for _, _, ok in verdicts if ok)
    print(f"curvature: {psd_count}/{len(verdicts)} multiplier values give a PSD "
          f"reduced form (sweep {args.lambda_min}..{args.lambda_max})")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / "diagnostics.csv"
        lines = ["lambda,min_eigenvalue,is_psd"]
        for lam, eig, ok in verdicts:
            lines.append(f"{lam:.17g},{eig:.17g},{int(ok)}")
        path.write_text("\n".join(lines) + "\n")
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smbeam",
        description="Reduced-rank constrained beamforming simulator with "
                    "data-selective updates")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help="master seed override")
        p.add_argument("--runs", type=int, default=None, help="Monte-Carlo run count override")
        p.add_argument("--snapshots", type=int, default=None, help="snapshot count override")
        p.add_argument("--out", type=str, default=None, help="output directory for CSV files")
        p.add_argument("--workers", type=int, default=1, help="parallel worker processes")

    p_run = sub.add_parser("run", help="run a preset or config-file experiment")
    p_run.add_argument("experiment", help="preset name or config path")
    common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep-rank", help="final SINR as a function of the rank")
    p_sweep.add_argument("experiment", help="preset name or config path")
    p_sweep.add_argument("--ranks", default="1:10", help="rank list, e.g. 1:10 or 2,4,6")
    common(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep_rank)

    p_cx = sub.add_parser("complexity", help="evaluate the arithmetic-cost formulas")
    p_cx.add_argument("--elements", default="16,32,64,128",
                      help="comma-separated sensor counts")
    p_cx.add_argument("--rank", type=int, default=5)
    p_cx.add_argument("--snapshots", type=int, default=1000)
    p_cx.add_argument("--tau", default="0.15", help="update rate in (0, 1]")
    p_cx.add_argument("--out", type=str, default=None)
    p_cx.set_defaults(func=_cmd_complexity)

    p_mse = sub.add_parser("predict-mse", help="simulated vs predicted MSE trend")
    p_mse.add_argument("experiment", nargs="?", default="fig6_desk")
    p_mse.add_argument("--ensemble", type=int, default=100,
                       help="predictor trajectory count")
    p_mse.add_argument("--p-min", type=float, default=None,
                       help="minimum update-probability floor")
    common(p_mse)
    p_mse.set_defaults(func=_cmd_predict_mse)

    p_diag = sub.add_parser("diagnose", help="stability and curvature diagnostics")
    p_diag.add_argument("experiment", nargs="?", default="fig3_desk")
    p_diag.add_argument("--count", type=int, default=200, help="gated snapshots to test")
    p_diag.add_argument("--lambda-min", type=float, default=0.0)
    p_diag.add_argument("--lambda-max", type=float, default=2.0)
    p_diag.add_argument("--lambda-points", type=int, default=21)
    p_diag.add_argument("--seed", type=int, default=None)
    p_diag.add_argument("--out", type=str, default=None)
    p_diag.set_defaults(func=_cmd_diagnose)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ScenarioError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except NumericsError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
