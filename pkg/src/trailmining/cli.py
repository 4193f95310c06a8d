"""Command-line front end.

Exit codes: 0 success, 2 invalid arguments or parameters, 3 I/O errors,
4 internal-consistency failures.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analytic, hiker, mixed, simulator, sweep
from .errors import DomainError, InternalInconsistency
from .params import NetworkParams, StrategyId

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


def _params(args) -> NetworkParams:
    return NetworkParams(args.q, args.gamma, args.tau0, args.reward)


def _emit(obj: dict, as_json: bool, out=None):
    out = out or sys.stdout
    if as_json:
        json.dump(obj, out, indent=2)
        out.write("\n")
        return
    width = max(len(k) for k in obj)
    for k, v in obj.items():
        if isinstance(v, dict) and "mean" in v:
            v = f"{v['mean']:.6g} +/- {v['std_error']:.2g}  (n={v['n']})"
        elif isinstance(v, dict):
            v = json.dumps(v)
        elif isinstance(v, float):
            v = f"{v:.10g}"
        out.write(f"{k:<{width}}  {v}\n")


def cmd_analytic(args):
    params = _params(args)
    m = analytic.analytic_metrics(params, args.a)
    out = {"q": params.q, "gamma": params.gamma, "A": args.a, **m.as_dict()}
    _emit(out, args.json)


def cmd_simulate(args):
    params = _params(args)
    if args.strategy == "tsm":
        if args.a is None:
            raise DomainError("--a is required with --strategy tsm")
        strategy = StrategyId.trail_stubborn(args.a)
    else:
        strategy = StrategyId.parse(args.strategy)
    est = simulator.estimate_metrics(strategy, params, args.cycles, args.seed, threads=args.threads)
    out = est.as_dict()
    if not args.json:
        out.pop("z_table")
    _emit(out, args.json)


def cmd_hiker(args):
    problem = hiker.HikerProblem(args.capital_m, args.m, args.p)
    out = {"M": problem.M, "m": problem.m, "p": problem.p_right}
    out.update({f"closed_{k}": v for k, v in vars(hiker.closed_forms(problem)).items()})
    if args.oracle:
        out.update({f"oracle_{k}": v for k, v in vars(hiker.absorption_oracle(problem)).items()})
    _emit(out, args.json)


def cmd_mixed(args):
    params = _params(args)
    pattern = [StrategyId.parse(tok) for tok in args.pattern.split(",") if tok.strip()]
    summaries = []
    for i, s in enumerate(pattern):
        if s.kind == "sm":
            est = simulator.estimate_metrics(s, params, args.cycles, args.seed + i)
            summaries.append(mixed.summary_from_estimate(est))
        else:
            summaries.append(mixed.analytic_summary(s, params))
    composed = mixed.compose(summaries)
    report = mixed.no_advantage_check(summaries)
    out = {
        "pattern": composed.label,
        "d": composed.d,
        "gamma_tilde": composed.gamma_tilde,
        "q_tilde": composed.apparent_hashrate(params.tau0, params.b),
        "mu": composed.mu,
        "best_component_gamma_tilde": report.best_component,
        "no_advantage": report.passed,
    }
    _emit(out, args.json)


def cmd_sweep(args):
    config = sweep.read_config(args.grid) if args.grid else {}
    for key in ("backend", "metric", "threads", "cycles", "seed"):
        value = getattr(args, key)
        if value is not None:
            config[key] = str(value)
    grid = sweep.grid_from_config(config)
    if args.map == "fig1":
        if args.format != "csv":
            raise DomainError("the fig1 map is only written as CSV")
        sweep.emit_fig1_csv(sweep.fig1_map(grid), args.out)
        return
    cells = sweep.sweep(grid)
    if args.format == "csv":
        sweep.emit_csv(cells, args.out)
    else:
        sweep.emit_json(cells, args.out)


def _add_params(p, a_required=False):
    p.add_argument("--q", type=float, required=True, help="attacker relative hashrate, 0 <= q < 1/2")
    p.add_argument("--gamma", type=float, required=True, help="share of honest miners on the attacker branch")
    p.add_argument("--tau0", type=float, default=1.0)
    p.add_argument("--reward", type=float, default=1.0, help="block reward b")
    p.add_argument("--json", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trailmining", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="closed-form cycle metrics of A-trail-stubborn mining")
    _add_params(p)
    p.add_argument("--a", type=int, required=True, help="trail threshold A >= 1 (1 = lead-stubborn)")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("simulate", help="Monte Carlo estimates with standard errors")
    p.add_argument("--strategy", choices=["honest", "sm", "lsm", "tsm"], required=True)
    p.add_argument("--a", type=int)
    _add_params(p)
    p.add_argument("--cycles", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("hiker", help="absorbing random walk on [0, M]")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--capital-m", type=int, required=True)
    p.add_argument("--p", type=float, required=True, help="right-step probability, 1/2 < p < 1")
    p.add_argument("--oracle", action="store_true", help="also print the linear-solve values")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_hiker)

    p = sub.add_parser("mixed", help="compose a pattern of attack cycles, e.g. 'tsm:2,honest'")
    p.add_argument("--pattern", required=True)
    _add_params(p)
    p.add_argument("--cycles", type=int, default=1_000_000, help="cycles per simulated (sm) component")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_mixed)

    p = sub.add_parser("sweep", help="dominance map over the (q, gamma) plane")
    p.add_argument("--grid", help="key = value config file")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--map", choices=["dominance", "fig1"], default="dominance")
    p.add_argument("--backend", choices=list(sweep.BACKENDS))
    p.add_argument("--metric", choices=list(sweep.METRICS))
    p.add_argument("--threads", type=int)
    p.add_argument("--cycles", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalInconsistency as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
