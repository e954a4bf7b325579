"""Command line entry point: ``partial-hawkes <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import harness, toy
from .graph import graph_diagnostics, sample_graph
from .io import read_events, write_events
from .kernels import kernel_from_dict
from .rng import derive_seed
from .simulator import DEFAULT_MAX_EVENTS, SimConfig, simulate
from .subcritical import DEFAULT_Q, estimate_subcritical
from .supercritical import estimate_supercritical


def _dump(obj, fh=None):
    fh = fh or sys.stdout
    json.dump(obj, fh, indent=2, default=_json_default, allow_nan=False)
    fh.write("\n")


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o))


def _nan_to_none(d: dict) -> dict:
    return {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in d.items()}


def cmd_simulate(args):
    kernel = kernel_from_dict(json.loads(args.kernel))
    graph_seed = args.graph_seed if args.graph_seed is not None else derive_seed(args.seed, 1)
    graph = sample_graph(args.n, args.p, graph_seed)
    cfg = SimConfig(graph, args.mu, kernel, args.horizon, args.seed, args.max_events)
    events = simulate(cfg)
    side = write_events(events, args.out, cfg)
    _dump({"events": str(args.out), "sidecar": str(side), "total_events": events.total_events})


def cmd_graph_diag(args):
    graph = sample_graph(args.n, args.p, args.seed)
    diag = graph_diagnostics(graph, args.Lambda, args.mu, args.k, args.p)
    rec = _nan_to_none(diag.to_dict())
    if args.format == "json":
        _dump(rec)
    else:
        writer = csv.DictWriter(sys.stdout, fieldnames=list(rec))
        writer.writeheader()
        writer.writerow(rec)


def cmd_estimate_sub(args):
    events = read_events(args.events, N=args.n)
    stats, est = estimate_subcritical(events, args.t, args.k, args.q, args.delta)
    _dump({"stats": stats.to_dict(), "estimate": est.to_dict()})


def cmd_estimate_super(args):
    events = read_events(args.events, N=args.n)
    _dump(estimate_supercritical(events, args.t, args.k).to_dict())


def cmd_toy(args):
    if args.model == 1:
        cfg = toy.Toy1Config(args.n, args.k, args.gamma, args.p, args.m_t, args.replicates, args.seed)
        _, T = toy.toy1_trial(cfg)
        out = toy.summarize(T, 1 / cfg.p - 1, toy.toy1_var_formula(cfg))
    else:
        cfg = toy.Toy2Config(args.n, args.k, args.T, args.mu, args.p, args.replicates, args.seed)
        C = toy.toy2_trial(cfg)
        out = toy.summarize(C, cfg.p**2, toy.toy2_var_display(cfg))
        out["exact_mean"] = toy.toy2_mean_exact(cfg)
        out["exact_variance"] = toy.toy2_var_exact(cfg)
        out["ratio_exact"] = out["variance"] / out["exact_variance"]
    out["model"] = args.model
    _dump(out)


def cmd_mc(args):
    cfg = harness.RunConfig.from_file(args.config)
    out = args.out or cfg.out
    n = 0
    for rec in harness.run_sweep(cfg, workers=args.workers, out=out):
        n += 1
        print(f"grid {rec.grid_index} rep {rec.replicate}: {rec.status} p_hat={rec.p_hat}",
              file=sys.stderr)
    _dump({"records_written": n, "out": out})


def cmd_report(args):
    records = harness.read_records(args.input)
    rows = harness.write_report(records, args.out)
    summary = {"grid_points": len(rows), "out": args.out}
    try:
        fit = harness.fit_rates(records)
        summary["rate_fit"] = {"slopes": fit.slopes, "r_squared": fit.r_squared,
                               "n_points": fit.n_points, "n_invalid": fit.n_invalid}
    except harness.InsufficientData as exc:
        summary["rate_fit"] = f"unavailable: {exc}"
    _dump(summary)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="partial-hawkes", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate an interacting Hawkes system to CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--kernel", required=True,
                   help='JSON, e.g. \'{"type": "exponential", "a": 1.0, "b": 2.0}\'')
    p.add_argument("--horizon", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--graph-seed", type=int, default=None)
    p.add_argument("--max-events", type=int, default=DEFAULT_MAX_EVENTS)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("graph-diag", help="diagnostics of a sampled interaction graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--lambda", dest="Lambda", type=float, required=True)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_graph_diag)

    p = sub.add_parser("estimate-sub", help="subcritical estimate of (mu, Lambda, p)")
    p.add_argument("--events", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=float, default=DEFAULT_Q)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--n", type=int, default=None, help="population size if no sidecar")
    p.set_defaults(func=cmd_estimate_sub)

    p = sub.add_parser("estimate-super", help="supercritical estimate of p")
    p.add_argument("--events", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, default=None, help="population size if no sidecar")
    p.set_defaults(func=cmd_estimate_super)

    p = sub.add_parser("toy", help="Gaussian toy-model variance check")
    p.add_argument("--model", type=int, choices=(1, 2), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--gamma", type=float, default=2.0)
    p.add_argument("--m-t", dest="m_t", type=float, default=100.0)
    p.add_argument("--T", type=int, default=50)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--replicates", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_toy)

    p = sub.add_parser("mc", help="run a Monte-Carlo sweep to JSON lines")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("report", help="aggregate a JSONL sweep into a CSV table")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
