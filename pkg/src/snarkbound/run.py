"""
CLI runner for snarkbound.

Usage:
    snarkbound VERB [OPTIONS]

    # Invariants of every graph in a file
    snarkbound analyze graphs.g6

    # Shortness and oddness bounds for a host edge
    snarkbound bound fixture:j5 --edge 0,1

    # Build S(H, F, e) and a long cycle in it
    snarkbound construct fixture:j5 fixture:f2 out/g36.g6 --edge 0,1
    snarkbound longcycle out/g36.g6 fixture:f2
"""

import argparse
import asyncio
import json
import logging
import sys
import time
from collections.abc import Callable
from pathlib import Path
from typing import Any

from . import __version__
from .bounds import (
    ScanCriteria,
    family_oddness_bound,
    scan_candidates,
    shortness_report,
)
from .config import DEFAULT_CONFIG_PATH, ToolConfig
from .cycles import circumference, matching_survey
from .factors import oddness
from .fetch import GraphListClient
from .fixtures import FIXTURE_PREFIX, Source, load_source, write_corpus
from .formats import as_multigraph, encode, file_sha256, write_records
from .graphs import Graph, MultiGraph, parse_edge
from .longcycle import construct_long_cycle
from .models import (
    CapExceededError,
    InputDigest,
    LinkingPolicy,
    Report,
    SkipReason,
    SnarkboundError,
    SubgraphMode,
    skip_marker,
)
from .pipeline import AnalysisPipeline
from .substitution import BlockMap, sidecar_path, substitute, validate_substitution

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)
logger = logging.getLogger("snarkbound")

Command = Callable[[argparse.Namespace, ToolConfig, Report], None]


def as_simple(name: str, g: Graph | MultiGraph) -> Graph:
    """A simple graph from a record; sparse6 records without parallel edges convert."""
    if isinstance(g, Graph):
        return g
    try:
        return Graph.from_edges(g.n, g.edges)
    except SnarkboundError as e:
        raise SnarkboundError(f"{name}: expected a simple graph: {e}") from e


def _load(report: Report, ref: str) -> Source:
    source = load_source(ref)
    report.inputs.append(source.digest)
    return source


def _cap_check(what: str, g: Graph, cap: int) -> dict[str, Any] | None:
    if g.n > cap:
        logger.info(f"{what} skipped: {g.n} vertices exceeds cap {cap}")
        return skip_marker(SkipReason.CAP_EXCEEDED, what=what, n=g.n, cap=cap)
    return None


# =============================================================================
# Commands
# =============================================================================


def cmd_analyze(args: argparse.Namespace, config: ToolConfig, report: Report) -> None:
    pipeline = AnalysisPipeline(config)
    for name, g in _load(report, args.path).graphs:
        payload, errors = pipeline.run(name, as_simple(name, g))
        report.add_result(payload)
        report.errors.extend(errors)


def cmd_circ(args: argparse.Namespace, config: ToolConfig, report: Report) -> None:
    for name, raw in _load(report, args.path).graphs:
        g = as_simple(name, raw)
        result: dict[str, Any] = {"graph": name, **encode(g)}
        skip = _cap_check("circumference", g, config.caps.circumference)
        if skip is not None:
            result["circumference"] = skip
        else:
            length, cycle = circumference(g, jobs=config.search.jobs)
            result.update(circumference=length, cycle=cycle.to_list())
        report.add_result(result)


def cmd_oddness(args: argparse.Namespace, config: ToolConfig, report: Report) -> None:
    for name, raw in _load(report, args.path).graphs:
        g = as_simple(name, raw)
        result: dict[str, Any] = {"graph": name, **encode(g)}
        skip = _cap_check("oddness", g, config.caps.oddness)
        if skip is not None:
            result["oddness"] = skip
        else:
            result.update(oddness(g, args.edge, jobs=config.search.jobs).to_dict())
        report.add_result(result)


def cmd_bound(args: argparse.Namespace, config: ToolConfig, report: Report) -> None:
    name, raw = _load(report, args.path).single()
    h = as_simple(name, raw)
    if h.n > config.caps.circumference:
        raise CapExceededError("constrained cycle search", h.n, config.caps.circumference)
    bound = shortness_report(h, args.edge, host=name)
    result = bound.to_dict()
    if args.frame_size is not None and bound.q is not None:
        result["family"] = {
            "frame_size": args.frame_size,
            "vertices": bound.block_size * args.frame_size,
            "circumference_at_most": bound.per_block * args.frame_size,
            "oddness_at_least": family_oddness_bound(bound.q, args.frame_size),
        }
    report.add_result(result)


def _load_frame(report: Report, ref: str) -> MultiGraph:
    name, raw = _load(report, ref).single()
    return as_multigraph(raw)


def cmd_construct(args: argparse.Namespace, config: ToolConfig, report: Report) -> None:
    name, raw = _load(report, args.host).single()
    h = as_simple(name, raw)
    f = _load_frame(report, args.frame)
    sub = config.substitution

    g, bm = substitute(h, args.edge, f, policy=sub.policy, seed=sub.seed)
    check = validate_substitution(g, bm, h, args.edge, f, check_cyclic=sub.check_cyclic)
    check.raise_for_failure()

    out: Path = args.out
    write_records(out, [g])
    bm.save(sidecar_path(out))
    logger.info(f"Wrote {g.n}-vertex graph to {out} with block map {sidecar_path(out)}")
    report.add_result(
        {
            "host": name,
            "edge": list(h.require_edge(args.edge)),
            "frame": encode(f),
            "n": g.n,
            **encode(g),
            "policy": sub.policy.value,
            "seed": sub.seed,
            "validation": check.to_dict(),
            "output": str(out),
            "block_map": str(sidecar_path(out)),
        }
    )


def cmd_longcycle(args: argparse.Namespace, config: ToolConfig, report: Report) -> None:
    name, raw = _load(report, args.graph).single()
    g = as_simple(name, raw)
    f = _load_frame(report, args.frame)
    if args.blockmap is not None:
        bm_path = args.blockmap
    elif args.graph.startswith(FIXTURE_PREFIX):
        raise SnarkboundError("a block map is required for fixture graphs (--blockmap)")
    else:
        bm_path = sidecar_path(Path(args.graph))
    bm = BlockMap.load(bm_path)
    report.inputs.append(InputDigest(str(bm_path), file_sha256(bm_path)))

    built = construct_long_cycle(
        g,
        bm,
        f,
        mode=config.substitution.mode,
        cutoff=config.search.block_cutoff,
        jobs=config.search.jobs,
    )
    result: dict[str, Any] = {"graph": name, **encode(g), **built.to_dict()}
    if args.exact:
        skip = _cap_check("circumference", g, config.caps.circumference)
        if skip is not None:
            result["exact_circumference"] = skip
        else:
            exact, _ = circumference(g, jobs=config.search.jobs)
            result["exact_circumference"] = exact
            result["within_exact"] = built.length <= exact
    report.add_result(result)


def cmd_dominate(args: argparse.Namespace, config: ToolConfig, report: Report) -> None:
    for name, raw in _load(report, args.path).graphs:
        g = as_simple(name, raw)
        survey = matching_survey(g, args.matching_size, start=args.start, jobs=config.search.jobs)
        report.add_result({"graph": name, **encode(g), **survey.to_dict()})


def cmd_scan(args: argparse.Namespace, config: ToolConfig, report: Report) -> None:
    source = _load(report, args.path)
    if args.criteria is not None:
        criteria = ScanCriteria.from_json(args.criteria)
    else:
        criteria = ScanCriteria.from_dict(
            {"max_coefficient": config.scan.max_coefficient, "min_q": config.scan.min_q}
        )
    hosts = [(name, as_simple(name, g)) for name, g in source.graphs]
    journal = args.journal if args.journal is not None else config.scan.journal
    outcome = scan_candidates(hosts, criteria, journal=journal, jobs=config.search.jobs)
    report.parameters["criteria"] = criteria.to_dict()
    report.add_result(outcome.to_dict())
    report.errors.extend(outcome.errors)


def cmd_fixtures(args: argparse.Namespace, config: ToolConfig, report: Report) -> None:
    index = write_corpus(args.out, group=args.group)
    report.add_result({"directory": str(args.out), "fixtures": index})


def cmd_fetch(args: argparse.Namespace, config: ToolConfig, report: Report) -> None:
    client = GraphListClient(timeout_seconds=config.fetch.timeout_seconds)
    dest = args.out if args.out is not None else config.fetch.dest_dir / Path(args.url).name
    provenance = asyncio.run(client.fetch_list(args.url, dest))
    report.add_result(provenance.to_dict())


COMMANDS: dict[str, Command] = {
    "analyze": cmd_analyze,
    "bound": cmd_bound,
    "construct": cmd_construct,
    "longcycle": cmd_longcycle,
    "dominate": cmd_dominate,
    "scan": cmd_scan,
    "circ": cmd_circ,
    "oddness": cmd_oddness,
    "fixtures": cmd_fixtures,
    "fetch": cmd_fetch,
}


# =============================================================================
# Argument parsing
# =============================================================================


def _edge(text: str) -> tuple[int, int]:
    try:
        return parse_edge(text)
    except SnarkboundError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        type=Path,
        default=DEFAULT_CONFIG_PATH,
        help=f"Path to config file (default: {DEFAULT_CONFIG_PATH})",
    )
    common.add_argument("--verbose", "-v", action="store_true", help="Enable verbose logging")
    common.add_argument("--json", type=Path, help="Write the JSON report here instead of stdout")
    common.add_argument("--jobs", type=int, help="Worker processes (default: 1)")
    common.add_argument("--cap-circ", type=int, help="Vertex cap for exact circumference")
    common.add_argument("--cap-odd", type=int, help="Vertex cap for exact oddness")
    common.add_argument("--cap-enum", type=int, help="Vertex cap for full cycle enumeration")
    common.add_argument("--seed", type=int, help="Seed for seeded linking")

    parser = argparse.ArgumentParser(
        prog="snarkbound",
        description="snarkbound: exact cycle and oddness bounds for substituted snarks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    # Classify the Petersen graph and compute its circumference and oddness
    snarkbound analyze fixture:petersen

    # Look for 20-vertex hosts with shortness coefficient at most 17/18
    snarkbound scan snarks20.g6 --criteria '{"max_coefficient": "17/18"}' --jobs 4

    # Build a 36-vertex substitution and a long cycle in it
    snarkbound construct fixture:j5 fixture:f2 out/g36.g6 --edge 0,1
    snarkbound longcycle out/g36.g6 fixture:f2 --exact

    # Which 4-matchings of the Moebius ladder lie on no dominating cycle
    snarkbound dominate fixture:mobius8 --matching-size 4
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbs = parser.add_subparsers(dest="command", required=True)

    def verb(name: str, help_text: str) -> argparse.ArgumentParser:
        return verbs.add_parser(name, parents=[common], help=help_text)

    p = verb("analyze", "classification, girth, cyclic connectivity, circumference, oddness")
    p.add_argument("path", help="graph6/sparse6 file or fixture:NAME")

    p = verb("circ", "exact circumference with a witness cycle")
    p.add_argument("path")

    p = verb("oddness", "exact oddness, optionally with the forced odd count of an edge")
    p.add_argument("path")
    p.add_argument("--edge", type=_edge, help="edge as u,v")

    p = verb("bound", "shortness coefficient and oddness growth of S(H, F_n, e)")
    p.add_argument("path")
    p.add_argument("--edge", type=_edge, required=True, help="edge as u,v")
    p.add_argument("--frame-size", type=int, help="also state the bounds for a frame of this size")

    p = verb("construct", "build S(H, F, e), validate it and write graph plus block map")
    p.add_argument("host")
    p.add_argument("frame")
    p.add_argument("out", type=Path)
    p.add_argument("--edge", type=_edge, required=True, help="edge as u,v")
    p.add_argument("--policy", choices=[x.value for x in LinkingPolicy])

    p = verb("longcycle", "construct a long cycle from a compatible eulerian trail")
    p.add_argument("graph")
    p.add_argument("frame")
    p.add_argument("--blockmap", type=Path, help="block map (default: the graph's sidecar)")
    p.add_argument("--mode", choices=[x.value for x in SubgraphMode])
    p.add_argument("--block-cutoff", type=int, help="exhaustive block paths up to this size")
    p.add_argument("--exact", action="store_true", help="compare with the exact circumference")

    p = verb("dominate", "survey matchings for dominating cycles containing them")
    p.add_argument("path")
    p.add_argument("--matching-size", type=int, required=True)
    p.add_argument("--start", type=int, default=0, help="first matching index to check")

    p = verb("scan", "scan hosts for edges meeting bound criteria")
    p.add_argument("path")
    p.add_argument("--criteria", help='JSON, e.g. {"max_coefficient": "17/18", "min_q": 2}')
    p.add_argument("--journal", type=Path, help="progress journal for resumable scans")

    p = verb("fixtures", "write the bundled fixture corpus")
    p.add_argument("out", type=Path)
    p.add_argument("--group", help="fixture name or group (default: all)")

    p = verb("fetch", "download and validate a public graph list")
    p.add_argument("url")
    p.add_argument("--out", type=Path, help="destination file")

    return parser


def apply_overrides(config: ToolConfig, args: argparse.Namespace) -> ToolConfig:
    """Command-line flags take precedence over the config file."""
    if args.jobs is not None:
        config.search.jobs = args.jobs
    if args.cap_circ is not None:
        config.caps.circumference = args.cap_circ
    if args.cap_odd is not None:
        config.caps.oddness = args.cap_odd
    if args.cap_enum is not None:
        config.caps.enumeration = args.cap_enum
    if args.seed is not None:
        config.substitution.seed = args.seed
    if getattr(args, "policy", None) is not None:
        config.substitution.policy = LinkingPolicy(args.policy)
    if getattr(args, "mode", None) is not None:
        config.substitution.mode = SubgraphMode(args.mode)
    if getattr(args, "block_cutoff", None) is not None:
        config.search.block_cutoff = args.block_cutoff
    return config


def _parameters(args: argparse.Namespace, config: ToolConfig) -> dict[str, Any]:
    skip = {"config", "verbose", "json", "command"}
    params: dict[str, Any] = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or value is None:
            continue
        if isinstance(value, Path):
            value = str(value)
        elif isinstance(value, tuple):
            value = list(value)
        params[key] = value
    params["config"] = config.to_dict()
    return params


def run_command(args: argparse.Namespace, config: ToolConfig) -> Report:
    """Run one verb and collect its report; library errors end up in ``errors``."""
    report = Report(command=args.command, tool_version=__version__)
    report.parameters = _parameters(args, config)
    started = time.perf_counter()
    try:
        COMMANDS[args.command](args, config, report)
    except SnarkboundError as e:
        logger.error(f"{args.command} failed: {e}")
        report.errors.append(str(e))
    report.timing = {"seconds": round(time.perf_counter() - started, 3)}
    return report


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        config = apply_overrides(ToolConfig.from_yaml(args.config), args)
    except (ValueError, TypeError, AttributeError) as e:
        logger.error(f"Invalid config {args.config}: {e}")
        return 1
    logger.debug(f"Config: {json.dumps(config.to_dict(), sort_keys=True)}")

    report = run_command(args, config)
    if args.json is not None:
        args.json.parent.mkdir(parents=True, exist_ok=True)
        args.json.write_text(report.to_json() + "\n")
        logger.info(f"Report written to {args.json}")
    else:
        print(report.to_json())

    if report.errors:
        logger.error(f"{len(report.errors)} error(s)")
    elif report.skipped:
        logger.warning(f"{report.skipped} check(s) skipped; report is partial")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
