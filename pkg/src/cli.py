"""
Command-line interface for the cascade influence toolkit.
"""
import argparse
import logging
import sys
from typing import List, Optional, Sequence

import numpy as np
import regex

from src.analyzer import analyze_cascades
from src.cascade.loader import load_cascades, load_trees
from src.cascade.metrics import record_rng
from src.config import RunConfig
from src.errors import CascadeInfluenceError, InvalidInputError
from src.formatter.response_formatter import ResponseFormatter, write_text
from src.greedy.placement import greedy_placement
from src.models import (
    CascadeRecord,
    GreedyReport,
    GreedyResponse,
    InputFormat,
    OptimalResponse,
    OutputFormat,
    PhaseResponse,
    SimulationMode,
    SimulationSummary,
)
from src.optimal.tree_max_influence import optimal_summary
from src.oracle.enumerator import enumerate_all, enumerate_fixed_k, histogram_to_csv
from src.synth.generators import TREE_MODELS, random_tree, random_tree_fixed_height, random_tree_pruefer
from src.synth.growth import DEFAULT_HEIGHT_N, DEFAULT_REPLICATES, growth_vs_height, growth_vs_n, height_trend
from src.tree.directed_tree import DirectedTree
from src.tree.influence import one_nodes

logger = logging.getLogger(__name__)

GENERATOR_SPEC = regex.compile(
    r"^(?P<kind>star|path|random|pruefer|height):(?P<n>\d+)(?::(?P<a>\d+))?(?::(?P<b>\d+))?$"
)
EXIT_USAGE = 1


class CliArgumentParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def generate_tree(spec: str, default_seed: int) -> DirectedTree:
    """
    Build a tree from a generator spec such as ``star:5``, ``random:100:7``
    or ``height:50:10:3``.

    Raises:
        InvalidInputError: for an unknown or malformed spec
    """
    match = GENERATOR_SPEC.match(spec.strip())
    if not match:
        raise InvalidInputError(
            f"bad generator spec {spec!r}; expected star:N, path:N, random:N[:SEED], "
            "pruefer:N[:SEED] or height:N:H[:SEED]"
        )
    kind, n = match["kind"], int(match["n"])
    a = int(match["a"]) if match["a"] is not None else None
    b = int(match["b"]) if match["b"] is not None else None

    if kind in ("star", "path"):
        if a is not None:
            raise InvalidInputError(f"{kind} takes no extra fields: {spec!r}")
        return DirectedTree.star(n) if kind == "star" else DirectedTree.path(n)
    if kind == "height":
        if a is None:
            raise InvalidInputError(f"height needs N and H: {spec!r}")
        rng = np.random.default_rng(default_seed if b is None else b)
        return random_tree_fixed_height(n, a, rng)
    if b is not None:
        raise InvalidInputError(f"{kind} takes at most one seed: {spec!r}")
    rng = np.random.default_rng(default_seed if a is None else a)
    return random_tree(n, rng) if kind == "random" else random_tree_pruefer(n, rng)


def _tree_inputs(args: argparse.Namespace, config: RunConfig) -> List[CascadeRecord]:
    if args.tree:
        return load_trees(args.tree)
    records = []
    for spec in args.generate:
        tree = generate_tree(spec, config.seed)
        records.append(CascadeRecord(id=spec, tree=tree, observed=(0,) * tree.node_count))
    return records


def _add_tree_source(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--tree", help="JSONL file of trees (id, edges, optional n)")
    source.add_argument(
        "--generate", action="append", metavar="SPEC",
        help="Generated tree: star:N, path:N, random:N[:SEED], pruefer:N[:SEED], height:N:H[:SEED]; repeatable",
    )


def cmd_optimal(args: argparse.Namespace, config: RunConfig) -> int:
    """Maximum influence and a smallest optimal set of 1-nodes for each tree."""
    reports = []
    for record in _tree_inputs(args, config):
        report = optimal_summary(record.tree)
        report.id = record.id
        if args.verify:
            i_max, k_min, _ = enumerate_all(record.tree, config.max_enum_nodes)
            if (i_max, k_min) != (report.influence, report.k):
                raise CascadeInfluenceError(
                    f"tree '{record.id}': exhaustive search found I={i_max}, k={k_min}, "
                    f"dynamic program gave I={report.influence}, k={report.k}"
                )
            logger.info("tree '%s' verified by enumeration", record.id)
        reports.append(report)

    formatter = ResponseFormatter(config.seed)
    if config.output_format == OutputFormat.CSV:
        text = formatter.reports_csv(reports)
    else:
        text = formatter.to_json(OptimalResponse(seed=config.seed, results=reports))
    write_text(text, args.output)
    return 0


def cmd_greedy(args: argparse.Namespace, config: RunConfig) -> int:
    """Greedy placement of ``--k`` 1-nodes for each tree."""
    reports = []
    for record in _tree_inputs(args, config):
        labels, i_k = greedy_placement(record.tree, args.k, record_rng(record, config.seed))
        reports.append(GreedyReport(
            id=record.id, n=record.n, k=args.k, influence=i_k, one_nodes=list(one_nodes(labels))
        ))

    formatter = ResponseFormatter(config.seed)
    if config.output_format == OutputFormat.CSV:
        text = formatter.reports_csv(reports)
    else:
        text = formatter.to_json(GreedyResponse(seed=config.seed, results=reports))
    write_text(text, args.output)
    return 0


def cmd_simulate(args: argparse.Namespace, config: RunConfig) -> int:
    """Growth curves of I* and k* against tree size or tree height."""
    mode = SimulationMode(args.mode)
    if mode == SimulationMode.VS_N:
        if args.n_min > args.n_max:
            raise InvalidInputError(f"--n-min {args.n_min} exceeds --n-max {args.n_max}")
        points, fit_i, fit_k = growth_vs_n(
            range(args.n_min, args.n_max + 1), args.replicates, config.seed, TREE_MODELS[args.model]
        )
        summary = SimulationSummary(
            seed=config.seed, mode=mode, model=args.model, replicates=args.replicates,
            fit_I_star=fit_i, fit_k_star=fit_k, points=points,
        )
    else:
        h_max = args.h_max if args.h_max is not None else args.n - 1
        points = growth_vs_height(args.n, range(args.h_min, h_max + 1), args.replicates, config.seed)
        summary = SimulationSummary(
            seed=config.seed, mode=mode, model="fixed-height", replicates=args.replicates,
            trend=height_trend(points), points=points,
        )

    formatter = ResponseFormatter(config.seed)
    if config.output_format == OutputFormat.CSV:
        write_text(formatter.curve_csv(points), args.output)
    else:
        write_text(formatter.to_json(summary), args.output)
    if args.summary:
        write_text(summary.model_dump_json(indent=2, exclude={"points"}, exclude_none=True), args.summary)
    return 0


def cmd_phase(args: argparse.Namespace, config: RunConfig) -> int:
    """Histogram of (m10, m11) over every labelling of one tree with k 1-nodes."""
    records = _tree_inputs(args, config)
    if len(records) != 1:
        raise InvalidInputError(f"phase needs exactly one tree, got {len(records)}")
    record = records[0]
    k = args.k if args.k is not None else optimal_summary(record.tree).k
    max_influence, histogram = enumerate_fixed_k(record.tree, k, config.max_combinations)
    logger.info("tree '%s', k=%d: largest influence %d over %d cells",
                record.id, k, max_influence, len(histogram.cells))

    formatter = ResponseFormatter(config.seed)
    if config.output_format == OutputFormat.CSV:
        text = formatter.histogram_csv(histogram)
    else:
        text = formatter.to_json(PhaseResponse(
            seed=config.seed, id=record.id, n=record.n, k=k,
            max_influence=max_influence, cells=histogram_to_csv(histogram),
        ))
    write_text(text, args.output)
    return 0


def cmd_analyze(args: argparse.Namespace, config: RunConfig) -> int:
    """Audit a dataset of labelled cascades."""
    records = load_cascades(args.cascades, InputFormat(args.input_format), args.labels)
    result = analyze_cascades(records, config)

    formatter = ResponseFormatter(config.seed)
    if config.output_format == OutputFormat.CSV:
        write_text(formatter.metrics_csv(result), args.output)
    else:
        write_text(formatter.to_json(result), args.output)
    if args.comparison_output:
        write_text(formatter.comparison_json(result), args.comparison_output)
    return 0


def build_parser() -> CliArgumentParser:
    """Argument parser with one subcommand per operation."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="Master random seed (default 0)")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], help="Output format (default json)")
    common.add_argument("-o", "--output", help="Output file (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true", help="Log progress to stderr")
    common.add_argument("--max-enum", type=int, help="Largest tree enumerated over all labellings")
    common.add_argument("--max-combinations", type=int, help="Largest number of fixed-size labellings enumerated")

    parser = CliArgumentParser(
        prog="cascade-influence",
        description="Optimal, greedy and observed influence of labelled nodes in directed trees",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimal", parents=[common], help="Maximum influence with the fewest 1-nodes")
    _add_tree_source(p)
    p.add_argument("--verify", action="store_true", help="Cross-check each tree by exhaustive enumeration")
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("greedy", parents=[common], help="Greedy placement of k 1-nodes")
    _add_tree_source(p)
    p.add_argument("--k", type=int, required=True, help="Number of 1-nodes to place")
    p.set_defaults(func=cmd_greedy)

    p = sub.add_parser("simulate", parents=[common], help="Growth of I* and k* on random trees")
    p.add_argument("--mode", choices=[m.value for m in SimulationMode], default=SimulationMode.VS_N.value)
    p.add_argument("--n-min", type=int, default=5, help="Smallest tree size (vs-n)")
    p.add_argument("--n-max", type=int, default=100, help="Largest tree size (vs-n)")
    p.add_argument("--n", type=int, default=DEFAULT_HEIGHT_N, help="Tree size (vs-height)")
    p.add_argument("--h-min", type=int, default=1, help="Smallest height (vs-height)")
    p.add_argument("--h-max", type=int, help="Largest height (vs-height, default n-1)")
    p.add_argument("--replicates", type=int, default=DEFAULT_REPLICATES, help="Trees per curve point")
    p.add_argument("--model", choices=sorted(TREE_MODELS), default="recursive", help="Random tree model (vs-n)")
    p.add_argument("--summary", help="File for the fit and trend summary (JSON)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("phase", parents=[common], help="(m10, m11) histogram over labellings of size k")
    _add_tree_source(p)
    p.add_argument("--k", type=int, help="Number of 1-nodes (default: the optimal k*)")
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("analyze", parents=[common], help="Audit observed cascades")
    p.add_argument("cascades", help="Cascade file (JSONL, or the CSV edges file)")
    p.add_argument("--input-format", choices=[f.value for f in InputFormat], default=InputFormat.JSONL.value)
    p.add_argument("--labels", help="CSV labels file (with --input-format csv)")
    p.add_argument("--min-nodes", type=int, help="Smallest cascade kept")
    p.add_argument("--min-coordinated", type=int, help="Fewest 1-nodes in a kept cascade")
    p.add_argument("--bins", type=int, help="Histogram bins for the KL comparison")
    p.add_argument("--smoothing", type=float, help="Mass added to empty baseline bins")
    p.add_argument("--distribution", choices=["influence", "rho"], help="Values compared by KL")
    p.add_argument("--replicates", type=int, dest="baseline_replicates", help="Random placements per cascade")
    p.add_argument("--comparison-output", help="File for the distribution comparison (JSON)")
    p.set_defaults(func=cmd_analyze)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {
        "seed": args.seed,
        "output_format": args.format,
        "max_enum_nodes": args.max_enum,
        "max_combinations": args.max_combinations,
    }
    if args.command == "analyze":
        overrides.update({
            "min_nodes": args.min_nodes,
            "min_coordinated": args.min_coordinated,
            "bins": args.bins,
            "smoothing": args.smoothing,
            "distribution": args.distribution,
            "baseline_replicates": args.baseline_replicates,
        })
    return RunConfig.from_sources(overrides)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = _config_from_args(args)
        return args.func(args, config)
    except CascadeInfluenceError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"Error writing output: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
