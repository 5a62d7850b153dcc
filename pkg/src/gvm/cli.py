"""Command line interface.

Subcommands: simulate, maximize, analyze, enumerate, generate, bench.
Exit codes: 0 success, 1 validation error, 2 I/O error.  Every output file
is written atomically; identical invocations with the same seed produce
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io as gio
from .dynamics import RngStream, System, all_uncoloured, simulate_mc
from .generators import HrgParams, gen_exp_period, gen_exp_time, gen_hrg, gen_reduction
from .graph import (
    GraphValidationError,
    distances_and_diameter,
    graph_period,
    period_classes,
    strongly_connected_components,
)
from .markov import absorbing_analysis
from .maximize import METHODS


class _Parser(argparse.ArgumentParser):
    """argparse, but usage errors exit with the validation code (1)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load_system(args) -> System:
    graph = gio.load_graph(args.graph, getattr(args, "weight_mode", "as_given"))
    norm = graph.normalized()
    if getattr(args, "colours", None):
        colouring = gio.load_colouring(args.colours, norm)
    else:
        colouring = all_uncoloured(norm.n)
    return System(norm, colouring)


def _cmd_simulate(args) -> int:
    system = _load_system(args)
    est = simulate_mc(system, (), args.rounds, args.runs, RngStream(args.seed).generator(0))
    lines = ["round,mean_blue"]
    lines += [f"{t},{float(v)!r}" for t, v in enumerate(est.trace)]
    gio.atomic_write_text(args.out, "\n".join(lines) + "\n")
    print(f"expected_blue={est.value!r} stderr={est.stderr!r} runs={args.runs}")
    return 0


def _cmd_maximize(args) -> int:
    system = _load_system(args)
    methods = [m.strip() for m in args.method.split(",") if m.strip()]
    if not methods:
        raise GraphValidationError("no methods given")
    result = gio.strategy_rows(
        system, methods, args.budget, args.rounds, args.evaluator, args.seed,
        mc_runs=args.mc_runs,
    )
    gio.write_results_csv(result.rows, args.out)
    g = system.graph
    seed_lines = ["method,rank,node,label"]
    for method in methods:
        for rank, v in enumerate(result.selections[method], start=1):
            seed_lines.append(f"{method},{rank},{v},{g.label(v)}")
    gio.atomic_write_text(args.out + ".seeds.csv", "\n".join(seed_lines) + "\n")
    print(f"wrote {len(result.rows)} rows to {args.out}")
    return 0


def _cmd_analyze(args) -> int:
    graph = gio.load_graph(args.graph, args.weight_mode).normalized()
    scc = strongly_connected_components(graph)
    print(f"n={graph.n}")
    print(f"m={graph.m}")
    sc = scc.count == 1
    print(f"strongly_connected={'true' if sc else 'false'}")
    print(f"scc_count={scc.count}")
    if sc:
        ps = period_classes(graph)
        print(f"gamma={ps.gamma}")
        print(f"class_sizes={','.join(str(len(c)) for c in ps.classes)}")
    print(f"diameter={distances_and_diameter(graph).diameter}")
    return 0


def _cmd_enumerate(args) -> int:
    system = _load_system(args)
    report = absorbing_analysis(system, cap=args.max_nodes)
    print(f"reachable_states={report.states_examined}")
    print(f"leaves={len(report.leaves)}")
    for i, leaf in enumerate(report.leaves, start=1):
        det = "true" if leaf.deterministic else "false"
        print(f"leaf={i} size={leaf.size} deterministic={det}")
    return 0


def _cmd_generate(args) -> int:
    prefix = args.out_prefix
    meta = {"family": args.family, "seed": args.seed}
    coords = None
    tau = None
    if args.family in ("exp-period", "exp-time"):
        if args.n is None:
            raise GraphValidationError(f"--n is required for family {args.family}")
        system = gen_exp_period(args.n) if args.family == "exp-period" else gen_exp_time(args.n)
        colouring = system.colouring
        graph = system.graph
    elif args.family == "mc-reduction":
        if args.coverage_spec is None or args.epsilon is None:
            raise GraphValidationError(
                "--coverage-spec and --epsilon are required for family mc-reduction"
            )
        inst = gio.load_coverage_spec(args.coverage_spec, args.epsilon)
        red = gen_reduction(inst)
        graph = red.system.graph
        colouring = red.system.colouring
        tau = red.tau
        meta.update(d=red.d, tau=red.tau, objects=inst.num_objects,
                    subsets=len(inst.subsets), budget=inst.budget,
                    epsilon=inst.epsilon)
    elif args.family == "hrg":
        if args.n is None:
            raise GraphValidationError("--n is required for family hrg")
        sample = gen_hrg(HrgParams(n=args.n, radius=args.R, alpha=args.alpha),
                         rng=args.seed)
        graph = sample.graph
        coords = sample.coords
        colouring = None
        meta.update(R=args.R, alpha=args.alpha, attempts=sample.attempts)
    else:  # argparse choices make this unreachable
        raise GraphValidationError(f"unknown family {args.family!r}")

    meta.update(n=graph.n, m=graph.m)
    gio.save_graph(graph, prefix + ".edges")
    if colouring is not None:
        gio.save_colouring(colouring, graph, prefix + ".colours.csv")
    if coords is not None:
        lines = ["node,r,theta"]
        lines += [f"{v},{float(coords[v, 0])!r},{float(coords[v, 1])!r}" for v in range(graph.n)]
        gio.atomic_write_text(prefix + ".coords.csv", "\n".join(lines) + "\n")
    gio.atomic_write_text(prefix + ".meta.json",
                          json.dumps(meta, sort_keys=True, indent=2) + "\n")
    extra = f" tau={tau}" if tau is not None else ""
    print(f"generated {args.family}: n={graph.n} m={graph.m}{extra} -> {prefix}.*")
    return 0


def _require(cfg: dict[str, str], *keys: str) -> None:
    missing = [k for k in keys if k not in cfg]
    if missing:
        raise GraphValidationError(f"bench config missing keys: {', '.join(missing)}")


def _cmd_bench(args) -> int:
    with open(args.config) as fh:
        cfg = gio.parse_config(fh.read())
    mode = cfg.get("mode", "budget")
    if mode == "budget":
        _require(cfg, "graph", "red_count", "budget_max", "rounds", "methods",
                 "evaluator", "seed")
        graph = gio.load_graph(cfg["graph"], cfg.get("weight_mode", "as_given"))
        result = gio.run_experiment(
            graph,
            red_count=int(cfg["red_count"]),
            budget_max=int(cfg["budget_max"]),
            rounds=int(cfg["rounds"]),
            methods=[m.strip() for m in cfg["methods"].split(",") if m.strip()],
            evaluator=cfg["evaluator"],
            seed=int(cfg["seed"]),
            mc_runs=int(cfg.get("mc_runs", "1000")),
        )
        gio.write_results_csv(result.rows, args.out)
        print(f"wrote {len(result.rows)} rows to {args.out}")
        return 0
    if mode == "convergence":
        _require(cfg, "sizes", "strategies", "graphs", "seed")
        rows = gio.run_convergence_experiment(
            sizes=[int(s) for s in cfg["sizes"].split(",")],
            strategies=[int(s) for s in cfg["strategies"].split(",")],
            graphs_per_size=int(cfg["graphs"]),
            seed=int(cfg["seed"]),
            radius=float(cfg.get("radius", "5.0")),
            alpha=float(cfg.get("alpha", "1.0")),
            round_cap=int(cfg.get("round_cap", str(10**6))),
        )
        gio.write_convergence_csv(rows, args.out)
        print(f"wrote {len(rows)} rows to {args.out}")
        return 0
    raise GraphValidationError(f"unknown bench mode {mode!r}")


def build_parser() -> _Parser:
    parser = _Parser(prog="gvm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_weight_mode(p):
        p.add_argument("--weight-mode", default="as_given", choices=gio.WEIGHT_MODES,
                       help="how to interpret edge weights on load")

    p = sub.add_parser("simulate", parents=[], help="Monte Carlo trajectories")
    p.add_argument("--graph", required=True)
    p.add_argument("--colours", default=None)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    add_weight_mode(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("maximize", help="seed-set selection and budget curves")
    p.add_argument("--graph", required=True)
    p.add_argument("--colours", default=None)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--method", required=True,
                   help=f"comma-separated subset of: {','.join(METHODS)}")
    p.add_argument("--evaluator", default="marginal",
                   choices=("marginal", "exact", "montecarlo"))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mc-runs", type=int, default=1000)
    add_weight_mode(p)
    p.set_defaults(func=_cmd_maximize)

    p = sub.add_parser("analyze", help="structural summary of a graph")
    p.add_argument("--graph", required=True)
    add_weight_mode(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("enumerate", help="absorbing components of the state chain")
    p.add_argument("--graph", required=True)
    p.add_argument("--colours", default=None)
    p.add_argument("--max-nodes", type=int, default=10)
    add_weight_mode(p)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("generate", help="graph families with known behaviour")
    p.add_argument("--family", required=True,
                   choices=("exp-period", "exp-time", "mc-reduction", "hrg"))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--coverage-spec", default=None)
    p.add_argument("--R", type=float, default=5.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("bench", help="experiment driver from a key=value config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return int(args.func(args) or 0)
    except GraphValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
