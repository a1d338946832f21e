"""
Command-line interface: analyze, simulate, sweep and gen subcommands.

Exit codes: 0 success (analyze: consensus), 1 invalid input or I/O failure,
2 analyze verdict no_consensus, 3 analyze verdict boundary.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .config import (
    DEFAULT_DENSITY,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_SEED,
    DEFAULT_WEIGHT_BOUNDS,
    DEFAULT_XI,
    DEFAULT_ZETA,
    SIM_CONV_TOL,
    SIM_DIV_TOL,
    SIM_DT,
    SIM_SAMPLE_STRIDE,
    SIM_T_MAX,
    SWEEP_CSV_FIELDS,
)
from .dynamics import SimulationConfig, classify_consistency, initial_conditions, simulate
from .errors import GraphError, GraphSpecError, HierconError
from .exporter import trace_verdict, write_json, write_sweep_csv, write_trace_csv
from .graph import laplacian
from .graph_io import load_graph, write_graph
from .logger import get_logger
from .spectral import GainPair, Protocol, Verdict, analyze, consensus_verdict
from .sweep import FamilyKind, FamilySpec, find_breaking_size, run_sweep

logger = logging.getLogger(__name__)
action_logger = get_logger()

VERDICT_EXIT_CODES = {
    Verdict.CONSENSUS: 0,
    Verdict.NO_CONSENSUS: 2,
    Verdict.BOUNDARY: 3,
}

FILES_HELP = (
    "Output files (UTF-8, '.' decimal separator):\n"
    "  simulate: trace.csv columns t, x_1..x_n, v_1..v_n, pos_disagreement, vel_disagreement;\n"
    "            trace.json verdict sidecar\n"
    "  sweep:    sweep.csv columns " + ", ".join(SWEEP_CSV_FIELDS) + ";\n"
    "            sweep.json full structure (eigenvalues with --full)\n"
    "Environment: HIERCON_SEED is the master seed when --seed is not given."
)


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage errors with exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_range(text: str) -> tuple[int, int, int]:
    """
    Parse 'start:stop[:stride]' (inclusive) or a single size.

    Raises:
        GraphError: If the text is not a valid non-empty range
    """
    try:
        parts = [int(p) for p in text.split(":")]
    except ValueError as e:
        raise GraphError(f"invalid size range '{text}'") from e

    if len(parts) == 1:
        parts = [parts[0], parts[0]]
    if len(parts) == 2:
        parts.append(1)
    if len(parts) != 3:
        raise GraphError(f"invalid size range '{text}', expected start:stop[:stride]")

    start, stop, stride = parts
    if stop < start:
        raise GraphError(f"empty size range '{text}'")
    return start, stop, stride


def _gains(args: argparse.Namespace) -> GainPair:
    return GainPair(alpha=args.alpha, beta=args.beta)


def _seed(args: argparse.Namespace) -> int:
    return DEFAULT_SEED if args.seed is None else args.seed


def _family_spec(args: argparse.Namespace, start: int, stop: int, stride: int = 1) -> FamilySpec:
    return FamilySpec(
        kind=FamilyKind(args.family),
        n_start=start,
        n_stop=stop,
        n_stride=stride,
        weight=args.weight,
        reverse_weight=args.reverse_weight,
        rho=args.rho,
        inner_q=args.inner_q,
        reverse_count=args.reverse_count,
        density=args.density,
        zeta=args.zeta,
        xi=args.xi,
        weight_bounds=(args.weight_low, args.weight_high),
        seed=_seed(args),
    )


def _print_json(data: dict) -> None:
    print(json.dumps(data, indent=2))


# ==================== Subcommands ====================

def cmd_analyze(args: argparse.Namespace) -> int:
    """Spectral report and verdict for a graph spec file; exit code encodes the verdict."""
    m = load_graph(args.graph)
    gains = _gains(args)
    protocol = Protocol(args.protocol)

    report = analyze(m)
    decomposition = laplacian(m)
    verdicts = {p: consensus_verdict(report, gains, p) for p in Protocol}
    selected = verdicts[protocol]
    action_logger.verdict_reached(protocol.value, selected.verdict.value, selected.margin)

    output = report.to_dict(full=True)
    output.update({
        "theta": decomposition.theta,
        "phi": decomposition.phi,
        "span": decomposition.span,
        "alpha": gains.alpha,
        "beta": gains.beta,
        "gain_ratio": gains.gain_ratio,
        "protocol": protocol.value,
        "verdict": selected.verdict.value,
        "margin": selected.margin,
        "verdicts": {p.value: {"verdict": r.verdict.value, "margin": r.margin} for p, r in verdicts.items()},
    })
    _print_json(output)
    return VERDICT_EXIT_CODES[selected.verdict]


def cmd_simulate(args: argparse.Namespace) -> int:
    """Simulate one protocol on a graph spec file; writes trace CSV and verdict JSON."""
    m = load_graph(args.graph)
    gains = _gains(args)
    protocol = Protocol(args.protocol)
    cfg = SimulationConfig(
        dt=args.dt,
        t_max=args.t_max,
        conv_tol=args.conv_tol,
        div_tol=args.div_tol,
        sample_stride=args.sample_stride,
    )

    x0, v0 = initial_conditions(m.n, _seed(args))
    if args.x0_const is not None:
        x0 = np.full(m.n, args.x0_const)
    if args.v0_const is not None:
        v0 = np.full(m.n, args.v0_const)

    trace = simulate(m, gains, protocol, x0, v0, cfg)
    spectral = consensus_verdict(analyze(m), gains, protocol)

    out_dir = Path(args.out_dir)
    sidecar = trace_verdict(trace)
    sidecar.update({
        "protocol": protocol.value,
        "alpha": gains.alpha,
        "beta": gains.beta,
        "spectral_verdict": spectral.verdict.value,
        "margin": spectral.margin,
        "consistency": classify_consistency(trace, spectral.verdict).value,
    })
    write_trace_csv(trace, str(out_dir / "trace.csv"))
    write_json(sidecar, str(out_dir / "trace.json"))

    _print_json(sidecar)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    """Sweep a family with fixed gains; writes sweep CSV and JSON, prints breaking sizes."""
    start, stop, stride = parse_range(args.n)
    spec = _family_spec(args, start, stop, stride)
    gains = _gains(args)
    cfg = SimulationConfig(dt=args.dt, t_max=args.t_max, sample_stride=args.sample_stride)

    result = run_sweep(spec, gains, simulate_flag=args.simulate, cfg=cfg, workers=args.workers)

    out_dir = Path(args.out_dir)
    write_sweep_csv(result, str(out_dir / "sweep.csv"))
    write_json(result.to_dict(full=args.full), str(out_dir / "sweep.json"))

    for protocol in Protocol:
        breaking = result.breaking_sizes[protocol]
        if breaking.n is None and args.n_cap is not None and args.n_cap > stop:
            breaking = find_breaking_size(spec, gains, protocol, args.n_cap)
        label = "none" if breaking.n is None else str(breaking.n)
        print(f"breaking size ({protocol.value}): {label}")
        if breaking.boundary_sizes:
            print(f"boundary sizes ({protocol.value}): {', '.join(map(str, breaking.boundary_sizes))}")
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    """Write the graph spec of one family instance."""
    m = _family_spec(args, args.size, args.size).build(args.size)
    write_graph(m, args.out)
    action_logger.graph_written(args.out, args.family, m.n)
    print(f"✓ Wrote {args.family} graph (n={m.n}, {len(m.dag_edges)} DAG edges, "
          f"{len(m.reverse_edges)} reverse edges) → {args.out}")
    return 0


# ==================== Argument parsing ====================

def _add_gain_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, default=1.0, help="State gain alpha (default: 1)")
    parser.add_argument("--beta", type=float, default=1.0, help="Velocity gain beta (default: 1)")


def _add_sim_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dt", type=float, default=SIM_DT, help=f"RK4 step (default: {SIM_DT})")
    parser.add_argument("--t-max", type=float, default=SIM_T_MAX, help=f"Horizon (default: {SIM_T_MAX})")
    parser.add_argument("--sample-stride", type=int, default=SIM_SAMPLE_STRIDE,
                        help=f"Store every k-th step (default: {SIM_SAMPLE_STRIDE})")


def _add_family_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", required=True, choices=[k.value for k in FamilyKind],
                        help="Graph family")
    parser.add_argument("--weight", type=float, default=1.0, help="Path edge weight (default: 1)")
    parser.add_argument("--reverse-weight", type=float, default=1.0,
                        help="Reverse edge weight for path families (default: 1)")
    parser.add_argument("--rho", type=float, default=1.0, help="Star hub weight (default: 1)")
    parser.add_argument("--inner-q", type=int, default=2,
                        help="Receiving vertex of the path-inner reverse edge (default: 2)")
    parser.add_argument("--reverse-count", type=int, default=None,
                        help="Star reverse edge count (default: n // 2)")
    parser.add_argument("--density", type=float, default=DEFAULT_DENSITY,
                        help=f"Random DAG edge density (default: {DEFAULT_DENSITY})")
    parser.add_argument("--zeta", type=int, default=DEFAULT_ZETA,
                        help=f"Random family cap on superior neighbors (default: {DEFAULT_ZETA})")
    parser.add_argument("--xi", type=int, default=DEFAULT_XI,
                        help=f"Random family cap on inferior neighbors (default: {DEFAULT_XI})")
    parser.add_argument("--weight-low", type=float, default=DEFAULT_WEIGHT_BOUNDS[0],
                        help=f"Lower random weight bound (default: {DEFAULT_WEIGHT_BOUNDS[0]})")
    parser.add_argument("--weight-high", type=float, default=DEFAULT_WEIGHT_BOUNDS[1],
                        help=f"Upper random weight bound (default: {DEFAULT_WEIGHT_BOUNDS[1]})")


def build_parser() -> argparse.ArgumentParser:
    # Options every subcommand accepts after its name
    common = _Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="Enable verbose logging")
    common.add_argument("--seed", type=int, default=None, help="Master seed (default: HIERCON_SEED or 0)")
    common.add_argument("--out-dir", default=DEFAULT_OUTPUT_DIR,
                        help=f"Directory for output files (default: {DEFAULT_OUTPUT_DIR})")

    parser = _Parser(
        description="Analyze and simulate second-order consensus on hierarchical networks.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=FILES_HELP,
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_command(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(
            name,
            help=help_text,
            parents=[common],
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog=FILES_HELP,
        )

    analyze_p = add_command("analyze", "Spectral analysis of a graph spec file")
    analyze_p.add_argument("graph", help="Graph spec JSON file")
    _add_gain_args(analyze_p)
    analyze_p.add_argument("--protocol", choices=[p.value for p in Protocol], default="absolute")

    simulate_p = add_command("simulate", "Simulate the closed loop on a graph spec file")
    simulate_p.add_argument("graph", help="Graph spec JSON file")
    _add_gain_args(simulate_p)
    simulate_p.add_argument("--protocol", choices=[p.value for p in Protocol], default="absolute")
    _add_sim_args(simulate_p)
    simulate_p.add_argument("--conv-tol", type=float, default=SIM_CONV_TOL)
    simulate_p.add_argument("--div-tol", type=float, default=SIM_DIV_TOL)
    simulate_p.add_argument("--x0-const", type=float, default=None, help="Start every agent at this position")
    simulate_p.add_argument("--v0-const", type=float, default=None, help="Start every agent at this velocity")

    sweep_p = add_command("sweep", "Scalability sweep over a graph family")
    _add_family_args(sweep_p)
    _add_gain_args(sweep_p)
    sweep_p.add_argument("--n", required=True, help="Size range start:stop[:stride], inclusive")
    sweep_p.add_argument("--n-cap", type=int, default=None,
                         help="Keep searching for a breaking size up to this n")
    sweep_p.add_argument("--simulate", action="store_true", help="Also simulate both protocols")
    sweep_p.add_argument("--full", action="store_true", help="Include eigenvalues in sweep.json")
    sweep_p.add_argument("--workers", type=int, default=1, help="Threads for per-size records")
    _add_sim_args(sweep_p)

    gen_p = add_command("gen", "Write a graph spec for one family instance")
    _add_family_args(gen_p)
    gen_p.add_argument("--n", dest="size", type=int, required=True, help="Vertex count")
    gen_p.add_argument("--out", required=True, help="Output JSON path")

    return parser


COMMANDS = {
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "gen": cmd_gen,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main entry point.

    Returns:
        Exit code (see module docstring)
    """
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr,
    )
    action_logger.app_init(f"Command: {args.subcommand}, Seed: {_seed(args)}")

    try:
        return COMMANDS[args.subcommand](args)
    except GraphSpecError as e:
        logger.error(f"Invalid graph spec: {e}")
        action_logger.error("Invalid graph spec", e)
        return 1
    except HierconError as e:
        logger.error(f"{type(e).__name__}: {e}")
        action_logger.error(type(e).__name__, e)
        return 1
    except OSError as e:
        logger.error(f"File I/O error: {e}")
        action_logger.error("File I/O error", e)
        return 1
