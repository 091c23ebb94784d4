"""Command-line front end: run, verify, compile, cost.

Exit codes: 0 success, 2 input error, 3 numerical-contract violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .coins import CoinSpec, build_coin_set, parse_coin_spec
from .costs import cost_report, report_table, report_to_json
from .csd import (
    compile_coin_set,
    program_to_json,
    ruler_sequence,
    schedule_to_json,
)
from .engine import WalkRun, run, verify_equivalence
from .errors import ContractViolation, InputError, ValidationError, WalklessError
from .graphs import Graph, parse_graph, random_graph
from .plotting import save_distribution_svg
from .states import (
    StateSpace,
    localized_state,
    state_to_csv,
    state_to_json,
    uniform_state,
)

ABSTRACT_TOL = 1e-10
LATTICE_TOL = 1e-9


def _load_graph(args: argparse.Namespace) -> Graph:
    if args.graph is not None and args.random_graph is not None:
        raise ValidationError("give either --graph or --random-graph, not both")
    if args.graph is not None:
        path = Path(args.graph)
        if not path.exists():
            raise ValidationError(f"graph file not found: {path}")
        return parse_graph(path.read_text())
    if args.random_graph is not None:
        return random_graph(args.random_graph, seed=args.seed, remove_fraction=args.remove_fraction)
    raise ValidationError("no graph given; use --graph PATH or --random-graph N")


def _load_coin_spec(args: argparse.Namespace) -> CoinSpec:
    if args.coins is not None:
        path = Path(args.coins)
        if not path.exists():
            raise ValidationError(f"coin spec file not found: {path}")
        return parse_coin_spec(path.read_text())
    return CoinSpec(family=args.coin_family)


def _initial_state(args: argparse.Namespace, g: Graph) -> StateSpace:
    text = args.init
    if text == "uniform":
        return uniform_state(g)
    if text.startswith("localized:"):
        body = text[len("localized:") :]
        parts = body.split(",")
        if len(parts) != 2:
            raise ValidationError(f"--init localized needs 'localized:j,k', got {text!r}")
        try:
            j, k = int(parts[0]), int(parts[1])
        except ValueError as e:
            raise ValidationError(f"--init localized indices must be integers: {text!r}") from e
        return localized_state(g.n_nodes, j, k)
    raise ValidationError(f"--init must be 'uniform' or 'localized:j,k', got {text!r}")


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_run(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    coin_set = build_coin_set(g, _load_coin_spec(args))
    initial = _initial_state(args, g)
    spacing = args.spacing if args.spacing is not None else 2
    if args.spacing is not None and args.mode != "lattice":
        raise ValidationError("--spacing applies to lattice mode only")
    walk = WalkRun(
        graph=g,
        coin_set=coin_set,
        initial=initial,
        n_steps=args.steps,
        mode=args.mode,
        record_trajectory=args.trajectory,
        spacing=spacing,
    )
    result = run(walk)
    out = _out_dir(args)

    dist_path = out / "distributions.csv"
    with dist_path.open("w") as fh:
        fh.write("step,node,probability\n")
        for step, dist in enumerate(result.distributions):
            for node, prob in enumerate(dist.probs, start=1):
                fh.write(f"{step},{node},{float(prob)!r}\n")
    (out / "state.json").write_text(state_to_json(result.final))
    (out / "state.csv").write_text(state_to_csv(result.final))
    written = [dist_path, out / "state.json", out / "state.csv"]
    if args.trajectory and result.trajectory is not None:
        traj_path = out / "trajectory.csv"
        with traj_path.open("w") as fh:
            fh.write("step,j,k,re,im\n")
            for step, snap in enumerate(result.trajectory):
                for j in range(1, snap.n + 1):
                    for k in range(1, snap.n + 1):
                        a = snap.amps[j - 1, k - 1]
                        fh.write(f"{step},{j},{k},{float(a.real)!r},{float(a.imag)!r}\n")
        written.append(traj_path)
    if args.svg:
        svg_path = out / "walk.svg"
        save_distribution_svg(
            result.distributions[-1],
            svg_path,
            title=f"node distribution after {args.steps} step(s), {args.mode}",
        )
        written.append(svg_path)
    for path in written:
        print(path)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    coin_set = build_coin_set(g, _load_coin_spec(args))
    initial = _initial_state(args, g)
    spacing = args.spacing if args.spacing is not None else 2
    base = dict(graph=g, coin_set=coin_set, initial=initial, n_steps=args.steps)

    report = verify_equivalence(WalkRun(**base, mode="walkless"))
    pairs = [("explicit<->walkless", report.max_deviation, ABSTRACT_TOL)]

    walkless = run(WalkRun(**base, mode="walkless", record_trajectory=True))
    compiled = run(WalkRun(**base, mode="compiled", record_trajectory=True))
    dev_wc = max(
        float(np.max(np.abs(a.amps - b.amps)))
        for a, b in zip(walkless.trajectory, compiled.trajectory)
    )
    pairs.append(("walkless<->compiled", dev_wc, ABSTRACT_TOL))

    latt = run(WalkRun(**base, mode="lattice", spacing=spacing))
    dev_cl = max(
        float(np.max(np.abs(a.probs - b.probs)))
        for a, b in zip(compiled.distributions, latt.distributions)
    )
    pairs.append(("compiled<->lattice", dev_cl, LATTICE_TOL))

    failed = None
    for name, dev, tol in pairs:
        status = "PASS" if dev <= tol else "FAIL"
        print(f"{name}: max deviation {dev:.3e} (tol {tol:.0e}) {status}")
        if failed is None and dev > tol:
            failed = name
    if failed is not None:
        print(f"verification failed: {failed}", file=sys.stderr)
        return 3
    return 0


def cmd_compile(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    coin_set = build_coin_set(g, _load_coin_spec(args))
    programs, schedules = compile_coin_set(coin_set.coins)
    out = _out_dir(args)
    programs_path = out / "programs.json"
    schedules_path = out / "schedules.json"
    programs_path.write_text(
        "[" + ",".join(program_to_json(p) for p in programs) + "]"
    )
    schedules_path.write_text(
        "[" + ",".join(schedule_to_json(s) for s in schedules) + "]"
    )
    n = coin_set.n
    intervals = tuple(d // 2 for d in ruler_sequence(n))
    expected = cost_report(n).walkless_stages_per_step
    print(f"dimension {n}: {len(schedules[0].stages)} stages per coin, intervals {intervals}")
    print(f"stage count matches cost model: {len(schedules[0].stages) == expected}")
    active = sum(len(st.rotations) for s in schedules for st in s.stages)
    print(f"{len(programs)} coins compiled, {active} non-identity rotations total")
    print(programs_path)
    print(schedules_path)
    return 0


def cmd_cost(args: argparse.Namespace) -> int:
    report = cost_report(args.n, args.steps)
    print(report_table(report))
    if args.out is not None:
        out = _out_dir(args)
        path = out / "cost.json"
        path.write_text(report_to_json(report))
        print(path)
    return 0


def _add_common(p: argparse.ArgumentParser, *, with_mode: bool = True) -> None:
    p.add_argument("--graph", default=None, help="graph JSON file")
    p.add_argument("--random-graph", type=int, default=None, metavar="N",
                   help="seeded random graph fixture on N nodes instead of --graph")
    p.add_argument("--remove-fraction", type=float, default=0.3,
                   help="edge fraction removed by --random-graph (default 0.3)")
    p.add_argument("--coins", default=None, help="coin spec JSON file")
    p.add_argument("--coin-family", default="grover",
                   choices=("hadamard", "grover", "dft"),
                   help="uniform coin family when no --coins file is given")
    p.add_argument("--init", default="uniform", help="'uniform' or 'localized:j,k'")
    p.add_argument("--steps", type=int, default=10, help="number of walk steps")
    if with_mode:
        p.add_argument("--mode", default="walkless",
                       choices=("explicit", "walkless", "compiled", "lattice"))
    p.add_argument("--spacing", type=int, default=None,
                   help="key-site spacing for lattice mode (default 2)")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized fixtures")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walkless",
        description="Coined quantum walks on arbitrary graphs without translation steps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a walk and write distributions")
    _add_common(p_run)
    p_run.add_argument("--svg", action="store_true", help="write a bar chart of the final distribution")
    p_run.add_argument("--trajectory", action="store_true", help="write per-step state snapshots")
    p_run.set_defaults(func=cmd_run)

    p_verify = sub.add_parser("verify", help="check cross-mode equivalence")
    _add_common(p_verify, with_mode=False)
    p_verify.set_defaults(func=cmd_verify)

    p_compile = sub.add_parser("compile", help="decompose coins into pulse schedules")
    _add_common(p_compile, with_mode=False)
    p_compile.set_defaults(func=cmd_compile)

    p_cost = sub.add_parser("cost", help="stage-count report")
    p_cost.add_argument("--n", type=int, required=True, help="walk dimension (power of two)")
    p_cost.add_argument("--steps", type=int, default=1)
    p_cost.add_argument("--out", default=None, help="also write cost.json here")
    p_cost.set_defaults(func=cmd_cost)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ContractViolation as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except WalklessError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
