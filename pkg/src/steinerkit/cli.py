"""Command-line entry points: solve, train, bench, reduce.

Instance sources are either a SteinLib .stp path, a directory of .stp
files, or a compact generator spec like ``rr:n=30,m=0.2,w=1:5``.  All
randomness flows from --seed, so every command is reproducible.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import asdict, replace
from pathlib import Path

from .bench import run_bench, solve_with_method
from .generators import generate, parse_generator_spec
from .qnet import load_checkpoint, save_checkpoint
from .reductions import (
    parse_dimacs,
    parse_mvc_source,
    parse_x3c_source,
    reduce_mvc,
    reduce_sat,
    reduce_x3c,
)
from .rl import DdqnConfig, train, write_curve_csv
from .solvers import DW_TERMINAL_CAP, dreyfus_wagner
from .steinlib import edge_list_text, parse_steinlib_file, write_steinlib_file

VALIDATION_SEED_OFFSET = 1_000_000

SWEEPS = {
    "batch": ("batch", (8, 16, 32, 64, 128)),
    "lr": ("lr", (1e-3, 1e-4, 1e-5)),
    "k": ("k", (1, 2, 3, 4)),
    "gamma": ("gamma", (0.2, 0.4, 0.8)),
}


def _load_one_instance(source: str, seed: int):
    path = Path(source)
    if source.endswith(".stp"):
        if not path.is_file():
            raise ValueError(f"instance file not found: {source}")
        return parse_steinlib_file(path)
    cfg = parse_generator_spec(source, seed=seed)
    return generate(cfg)


def _load_instance_set(source: str, seed: int, count: int):
    path = Path(source)
    if path.is_dir():
        files = sorted(path.glob("*.stp"))
        if not files:
            raise ValueError(f"no .stp files under {source}")
        return [parse_steinlib_file(f) for f in files[:count]]
    if source.endswith(".stp"):
        if not path.is_file():
            raise ValueError(f"instance file not found: {source}")
        return [parse_steinlib_file(path)]
    base = parse_generator_spec(source, seed=seed)
    return [generate(replace(base, seed=seed + i)) for i in range(count)]


def _instance_stream(source: str, seed: int):
    path = Path(source)
    if path.is_dir():
        files = sorted(path.glob("*.stp"))
        if not files:
            raise ValueError(f"no .stp files under {source}")
        return itertools.cycle([parse_steinlib_file(f) for f in files])
    base = parse_generator_spec(source, seed=seed)
    return (generate(replace(base, seed=seed + i)) for i in itertools.count())


def _validation_set(source: str, seed: int, count: int):
    path = Path(source)
    if path.is_dir():
        return _load_instance_set(source, seed, count)
    base = parse_generator_spec(source, seed=seed)
    return [generate(replace(base, seed=seed + VALIDATION_SEED_OFFSET + i))
            for i in range(count)]


def _config_from_args(args) -> DdqnConfig:
    return DdqnConfig(
        p_dim=args.p_dim, k=args.k, gamma=args.gamma, lr=args.lr,
        batch=args.batch, epsilon_start=args.epsilon_start,
        epsilon_end=args.epsilon_end, target_sync=args.target_sync,
        replay_cap=args.replay_cap, rounds=args.rounds, seed=args.seed,
    )


def _add_hyper_flags(p: argparse.ArgumentParser, rounds_default: int) -> None:
    p.add_argument("--rounds", type=int, default=rounds_default)
    p.add_argument("--batch", type=int, default=16)
    p.add_argument("--gamma", type=float, default=0.2)
    p.add_argument("--lr", type=float, default=1e-4)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--p-dim", type=int, default=64)
    p.add_argument("--epsilon-start", type=float, default=0.1)
    p.add_argument("--epsilon-end", type=float, default=0.0)
    p.add_argument("--target-sync", type=int, default=100)
    p.add_argument("--replay-cap", type=int, default=50_000)


def _require_checkpoint(args, methods):
    if any(m in ("agent", "active") for m in methods):
        if not args.checkpoint:
            raise ValueError("methods 'agent' and 'active' need --checkpoint")
        params, _ = load_checkpoint(args.checkpoint)
        return params
    return None


def cmd_solve(args) -> int:
    instance = _load_one_instance(args.instance, args.seed)
    params = _require_checkpoint(args, [args.method])
    tree, wall = solve_with_method(instance, args.method, params=params,
                                   active_budget=args.rounds, seed=args.seed)
    report = {
        "instance": instance.id,
        "method": args.method,
        "cost": tree.cost,
        "edges": [[u, v, w] for u, v, w in tree.edges],
        "vertices": sorted(tree.vertices),
        "terminals": instance.terminal_list,
        "wall_time": wall,
    }
    if instance.known_opt is not None:
        report["known_opt"] = instance.known_opt
        report["ratio_vs_opt"] = tree.cost / instance.known_opt
    if instance.bound is not None:
        report["bound"] = instance.bound
        report["ratio_vs_bound"] = tree.cost / instance.bound
    text = json.dumps(report, indent=1)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if args.tree_out:
        Path(args.tree_out).write_text(edge_list_text(tree.edges))
    print(f"{args.method} cost {tree.cost:g} on {instance.id}", file=sys.stderr)
    return 0


def cmd_train(args) -> int:
    out = args.out or "train"
    validation = _validation_set(args.source, args.seed, args.validation)

    if args.sweep:
        field, values = SWEEPS[args.sweep]
        for value in values:
            cfg = replace(_config_from_args(args), **{field: value})
            stream = _instance_stream(args.source, cfg.seed)
            _, curve = train(stream, cfg, validation_instances=validation)
            tag = f"{value:g}" if isinstance(value, float) else str(value)
            write_curve_csv(curve, f"{out}.sweep-{field}-{tag}.curve.csv")
            print(f"sweep {field}={tag}: final episode cost "
                  f"{curve[-1].episode_cost:g}", file=sys.stderr)
        return 0

    cfg = _config_from_args(args)
    stream = _instance_stream(args.source, cfg.seed)
    params, curve = train(stream, cfg, validation_instances=validation)
    ckpt = f"{out}.ckpt.json"
    save_checkpoint(params, ckpt, meta={"config": asdict(cfg)})
    write_curve_csv(curve, f"{out}.curve.csv")
    print(f"checkpoint written to {ckpt}", file=sys.stderr)
    return 0


def cmd_bench(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    if not methods:
        raise ValueError("no methods given")
    params = _require_checkpoint(args, methods)
    instances = _load_instance_set(args.source, args.seed, args.trials)
    report = run_bench(instances, methods, reference=args.reference,
                       params=params, active_budget=args.rounds,
                       seed=args.seed, workers=args.workers)
    include_timing = not args.no_timing
    out = args.out or "bench"
    report.write_csv(f"{out}.csv", include_timing=include_timing)
    report.write_json(f"{out}.json", include_timing=include_timing)
    for method, ratio in report.aggregates().items():
        print(f"{method}: mean ratio vs {args.reference} = {ratio:.4f} "
              f"over {len(instances)} instances")
    return 0


def cmd_reduce(args) -> int:
    text = Path(args.source).read_text()
    if args.kind == "sat":
        n_vars, clauses = parse_dimacs(text)
        red = reduce_sat(n_vars, clauses)
    elif args.kind == "mvc":
        n, edges, k = parse_mvc_source(text)
        red = reduce_mvc(n, edges, k)
    else:
        n_elements, triples = parse_x3c_source(text)
        red = reduce_x3c(n_elements, triples)

    out = args.out or red.instance.name
    stp_path = f"{out}.stp"
    write_steinlib_file(red.instance, stp_path)
    witness_map = {
        **red.metadata(),
        "roles": {str(v): role for v, role in sorted(red.roles.items())},
    }

    if args.check:
        if len(red.instance.terminals) > DW_TERMINAL_CAP:
            raise ValueError(
                f"--check needs <= {DW_TERMINAL_CAP} terminals, "
                f"instance has {len(red.instance.terminals)}"
            )
        tree = dreyfus_wagner(red.instance)
        yes = tree.cost <= red.bound + 1e-9
        witness = red.decode_witness(tree)
        witness_map["check"] = {
            "optimal_cost": tree.cost,
            "bound": red.bound,
            "yes_instance": yes,
            "witness": witness,
            "witness_ok": bool(red.verify_witness(witness)) if yes else None,
        }

    with open(f"{out}.witness.json", "w") as fh:
        json.dump(witness_map, fh, indent=1)
        fh.write("\n")
    print(f"wrote {stp_path}; bound = {red.bound:g}")
    if args.check:
        verdict = "YES" if witness_map["check"]["yes_instance"] else "NO"
        print(f"optimal cost {witness_map['check']['optimal_cost']:g} -> {verdict}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steinerkit",
        description="Steiner tree toolkit: solvers, training, benchmarks, reductions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance with a chosen method")
    p.add_argument("instance", help=".stp file or generator spec")
    p.add_argument("--method", choices=("classic", "exact", "agent", "active"),
                   default="classic")
    p.add_argument("--checkpoint", help="trained parameters (agent/active)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds", type=int, default=2000,
                   help="active-search budget")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--tree-out", help="write the tree edge list here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("train", help="train the solver on generated instances")
    p.add_argument("source", help="generator spec or directory of .stp files")
    p.add_argument("--seed", type=int, default=0)
    _add_hyper_flags(p, rounds_default=6000)
    p.add_argument("--validation", type=int, default=20,
                   help="held-out instances for checkpoint selection")
    p.add_argument("--sweep", choices=tuple(SWEEPS),
                   help="emit one learning curve per value of this knob")
    p.add_argument("--out", help="output prefix (checkpoint + curve)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("bench", help="benchmark methods over an instance set")
    p.add_argument("source", help="generator spec, .stp file, or directory")
    p.add_argument("--methods", default="classic,exact",
                   help="comma-separated subset of classic,exact,agent,active")
    p.add_argument("--reference", choices=("classic", "exact", "opt", "bound"),
                   default="classic")
    p.add_argument("--trials", type=int, default=200,
                   help="number of instances (for generator sources)")
    p.add_argument("--checkpoint", help="trained parameters (agent/active)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds", type=int, default=2000,
                   help="active-search budget")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-timing", action="store_true",
                   help="zero wall times so reports are byte-reproducible")
    p.add_argument("--out", help="output prefix (CSV + JSON)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("reduce", help="reduce SAT/MVC/X3C to a Steiner instance")
    p.add_argument("kind", choices=("sat", "mvc", "x3c"))
    p.add_argument("source", help="DIMACS CNF / 'n m k' edges / triples file")
    p.add_argument("--check", action="store_true",
                   help="solve exactly and decode the witness")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output prefix (.stp + witness map)")
    p.set_defaults(func=cmd_reduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
