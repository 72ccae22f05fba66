"""Umbrella command line: solve, backbone, encode, dataset, eval, pipeline."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import __version__
from .backbone import BackboneStatus, extract_backbone, load_backbone, save_backbone
from .cnf import read_dimacs
from .dataset import (
    build,
    gen_coloring,
    gen_pigeonhole,
    gen_random_ksat,
    load_manifest,
    save_dimacs_corpus,
    stats,
)
from .graph import encode, save_graph
from .harness import (
    RunConfig,
    cactus_data,
    read_records_csv,
    run_experiment,
    scatter_data,
    summarize,
    write_records_csv,
)
from .hints import load_hints
from .pipeline import pipeline_solve
from .solver import ClauseDbConfig, Solver, SolverConfig, Status

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_UNKNOWN = 0


def _solver_config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(
        seed=args.seed,
        phase_default=args.phase_default,
        rephase_enabled=not args.no_rephase,
        time_limit=args.time_limit,
        conflict_limit=args.conflict_limit,
    )


def _add_solver_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--time-limit", type=float, default=None, metavar="S")
    parser.add_argument("--conflict-limit", type=int, default=None, metavar="N")
    parser.add_argument(
        "--phase-default", choices=("false", "true", "hints"), default="false"
    )
    parser.add_argument("--no-rephase", action="store_true")


def _stats_dict(result) -> dict:
    return dataclasses.asdict(result.stats)


def _emit_solve_result(args: argparse.Namespace, result) -> int:
    if args.json:
        payload = {"status": result.status.value, "stats": _stats_dict(result)}
        if result.status is Status.SAT:
            payload["model"] = result.model
        print(json.dumps(payload))
    else:
        if result.status is Status.SAT:
            print("s SATISFIABLE")
            lits = [v if result.model[v] else -v for v in sorted(result.model)]
            print("v " + " ".join(str(l) for l in lits) + " 0")
        elif result.status is Status.UNSAT:
            print("s UNSATISFIABLE")
        else:
            print("s UNKNOWN")
    if getattr(args, "stats_json", None):
        Path(args.stats_json).write_text(json.dumps(_stats_dict(result)))
    return {Status.SAT: EXIT_SAT, Status.UNSAT: EXIT_UNSAT, Status.UNKNOWN: EXIT_UNKNOWN}[
        result.status
    ]


def _cmd_solve(args: argparse.Namespace) -> int:
    formula = read_dimacs(args.cnf)
    hints = load_hints(args.hints) if args.hints else None
    result = Solver(formula, _solver_config(args), hints).solve()
    return _emit_solve_result(args, result)


def _cmd_backbone(args: argparse.Namespace) -> int:
    formula = read_dimacs(args.cnf)
    result = extract_backbone(formula, timeout=args.timeout)
    if args.output:
        save_backbone(result, args.output)
    if args.json:
        payload = {
            "status": result.status.value,
            "labeling": result.labeling,
            "solver_calls": result.solver_calls,
            "wall_time": result.wall_time,
        }
        print(json.dumps(payload))
    else:
        print(f"backbone {result.status.value} calls={result.solver_calls}")
        if result.status is BackboneStatus.COMPLETE:
            print(f"backbone size {len(result.labeling)}")
    return 0


def _cmd_encode(args: argparse.Namespace) -> int:
    formula = read_dimacs(args.cnf)
    labels = None
    if args.labels:
        status, labels = load_backbone(args.labels)
        if status is not BackboneStatus.COMPLETE:
            raise SystemExit(f"label file has status {status.value}, no labels to attach")
    graph = encode(formula)
    save_graph(graph, args.output, labels)
    if args.json:
        print(
            json.dumps(
                {
                    "nodes": graph.num_nodes,
                    "edges": len(graph.edges),
                    "components": graph.component_count,
                    "output": args.output,
                }
            )
        )
    return 0


def _cmd_dataset_build(args: argparse.Namespace) -> int:
    manifest = build(
        args.corpus, timeout=args.timeout, out_dir=args.output, split=args.split,
        workers=args.workers,
    )
    accepted = sum(1 for e in manifest.entries if e.accepted)
    if args.json:
        print(
            json.dumps(
                {
                    "entries": len(manifest.entries),
                    "accepted": accepted,
                    "manifest": str(Path(args.output) / "manifest.nbm"),
                }
            )
        )
    else:
        print(f"built {accepted}/{len(manifest.entries)} accepted -> {args.output}")
    return 0


def _cmd_dataset_stats(args: argparse.Namespace) -> int:
    summary = stats(load_manifest(args.manifest))
    payload = dataclasses.asdict(summary)
    if args.json:
        print(json.dumps(payload))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")
    return 0


def _cmd_dataset_gen(args: argparse.Namespace) -> int:
    formulas = []
    if args.kind == "ksat":
        for i in range(args.count):
            formulas.append(gen_random_ksat(args.n, args.m, args.k, args.seed + i))
    elif args.kind == "php":
        formulas.append(gen_pigeonhole(args.pigeons, args.holes))
    else:
        for i in range(args.count):
            formulas.append(
                gen_coloring(args.n, args.colors, args.edge_prob, args.seed + i)
            )
    paths = save_dimacs_corpus(formulas, args.output, prefix=args.kind)
    if args.json:
        print(json.dumps({"count": len(paths), "dir": args.output}))
    else:
        print(f"wrote {len(paths)} formulas to {args.output}")
    return 0


def _load_run_configs(path: str) -> list[RunConfig]:
    configs = []
    for spec in json.loads(Path(path).read_text()):
        solver = SolverConfig(
            seed=spec.get("seed", 0),
            var_decay=spec.get("var_decay", 0.95),
            restart_base=spec.get("restart_base", 100),
            phase_default=spec.get("phase_default", "false"),
            rephase_enabled=spec.get("rephase", True),
            rephase_interval=spec.get("rephase_interval", 1000),
            clause_db=ClauseDbConfig(),
        )
        configs.append(
            RunConfig(name=spec["name"], solver=solver, hints_dir=spec.get("hints_dir"))
        )
    return configs


def _cmd_eval_run(args: argparse.Namespace) -> int:
    configs = _load_run_configs(args.config)
    records = run_experiment(args.problems, configs, args.time_limit, workers=args.workers)
    write_records_csv(records, args.output)
    if args.json:
        print(json.dumps({"records": len(records), "output": args.output}))
    else:
        print(f"wrote {len(records)} records to {args.output}")
    return 0


def _cmd_eval_cactus(args: argparse.Namespace) -> int:
    series = cactus_data(read_records_csv(args.results), args.config)
    if args.json:
        print(json.dumps(series))
    else:
        for k, t in series:
            print(f"{k},{t:.6f}")
    return 0


def _cmd_eval_scatter(args: argparse.Namespace) -> int:
    points = scatter_data(
        read_records_csv(args.results), args.config_a, args.config_b, args.time_limit
    )
    if args.json:
        print(json.dumps(points))
    else:
        for problem, ta, tb in points:
            print(f"{problem},{ta:.6f},{tb:.6f}")
    return 0


def _cmd_eval_summary(args: argparse.Namespace) -> int:
    summary = summarize(
        read_records_csv(args.results), args.config_a, args.config_b, args.time_limit
    )
    payload = dataclasses.asdict(summary)
    if args.json:
        print(json.dumps(payload))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")
    return 0


def _cmd_pipeline(args: argparse.Namespace) -> int:
    predictor = args.predictor.split() if args.predictor else ["nbtrain"]
    outcome = pipeline_solve(
        args.cnf,
        checkpoint=args.ckpt,
        solver_config=_solver_config(args),
        hints_path=args.hints,
        predictor=predictor,
        workdir=args.workdir,
    )
    if args.json:
        print(
            json.dumps(
                {
                    "status": outcome.result.status.value,
                    "used_hints": outcome.used_hints,
                    "fallback": outcome.fallback,
                    "inference_time": outcome.inference_time,
                    "inference_calls": outcome.inference_calls,
                    "stats": _stats_dict(outcome.result),
                }
            )
        )
        if args.stats_json:
            Path(args.stats_json).write_text(json.dumps(_stats_dict(outcome.result)))
        return {
            Status.SAT: EXIT_SAT,
            Status.UNSAT: EXIT_UNSAT,
            Status.UNKNOWN: EXIT_UNKNOWN,
        }[outcome.result.status]
    if outcome.fallback:
        print("c inference unavailable, baseline solve")
    return _emit_solve_result(args, outcome.result)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nbsat", description=__doc__)
    parser.add_argument("--version", action="version", version=f"nbsat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one DIMACS file")
    p.add_argument("cnf")
    p.add_argument("--hints", metavar="FILE.nbh")
    _add_solver_options(p)
    p.add_argument("--stats-json", metavar="OUT")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("backbone", help="extract the exact backbone")
    p.add_argument("cnf")
    p.add_argument("--timeout", type=float, default=None, metavar="S")
    p.add_argument("-o", "--output", metavar="FILE.bb")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_backbone)

    p = sub.add_parser("encode", help="encode a formula as an NBG graph")
    p.add_argument("cnf")
    p.add_argument("-o", "--output", required=True, metavar="FILE.nbg")
    p.add_argument("--labels", metavar="FILE.bb")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("dataset", help="corpus generation, labeling, statistics")
    dsub = p.add_subparsers(dest="dataset_command", required=True)

    d = dsub.add_parser("build", help="label, filter, and augment a corpus")
    d.add_argument("corpus")
    d.add_argument("--timeout", type=float, required=True, metavar="S")
    d.add_argument("--split", choices=("pretrain", "finetune"), default="pretrain")
    d.add_argument("-o", "--output", required=True)
    d.add_argument("--workers", type=int, default=1)
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=_cmd_dataset_build)

    d = dsub.add_parser("stats", help="summarize a manifest")
    d.add_argument("manifest")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=_cmd_dataset_stats)

    d = dsub.add_parser("gen", help="generate synthetic DIMACS corpora")
    d.add_argument("--kind", choices=("ksat", "php", "color"), required=True)
    d.add_argument("--n", type=int, default=20)
    d.add_argument("--m", type=int, default=85)
    d.add_argument("--k", type=int, default=3)
    d.add_argument("--pigeons", type=int, default=4)
    d.add_argument("--holes", type=int, default=4)
    d.add_argument("--colors", type=int, default=3)
    d.add_argument("--edge-prob", type=float, default=0.3)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--count", type=int, default=1)
    d.add_argument("-o", "--output", required=True)
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=_cmd_dataset_gen)

    p = sub.add_parser("eval", help="solver comparison experiments")
    esub = p.add_subparsers(dest="eval_command", required=True)

    e = esub.add_parser("run", help="run a problems x configs matrix")
    e.add_argument("--problems", required=True)
    e.add_argument("--config", required=True, metavar="FILE.json")
    e.add_argument("--time-limit", type=float, required=True, metavar="S")
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("-o", "--output", required=True, metavar="FILE.csv")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=_cmd_eval_run)

    e = esub.add_parser("cactus", help="sorted solve-time series for one config")
    e.add_argument("results")
    e.add_argument("--config", required=True)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=_cmd_eval_cactus)

    e = esub.add_parser("scatter", help="paired times for two configs")
    e.add_argument("results")
    e.add_argument("--config-a", required=True)
    e.add_argument("--config-b", required=True)
    e.add_argument("--time-limit", type=float, required=True)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=_cmd_eval_scatter)

    e = esub.add_parser("summary", help="delta report for two configs")
    e.add_argument("results")
    e.add_argument("--config-a", required=True)
    e.add_argument("--config-b", required=True)
    e.add_argument("--time-limit", type=float, required=True)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=_cmd_eval_summary)

    p = sub.add_parser("pipeline", help="encode, infer hints once, then solve")
    p.add_argument("cnf")
    p.add_argument("--ckpt", metavar="CHECKPOINT")
    p.add_argument("--hints", metavar="FILE.nbh", help="pre-built hints; skips inference")
    p.add_argument("--predictor", metavar="CMD", help="predictor command (default: nbtrain)")
    p.add_argument("--workdir")
    _add_solver_options(p)
    p.add_argument("--stats-json", metavar="OUT")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
