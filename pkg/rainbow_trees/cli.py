"""
cli.py

Command-line interface for the rainbow spanning tree solvers.

Every command prints one certificate document on stdout (JSON with --json,
a short text rendering otherwise) and exits with:
    0  trees found / condition holds / confirmed
    1  usage or parse error
    2  violating partition / proven absent
    3  search budget exhausted
    4  internal failure (a reproduction dump was written)
"""

import functools
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import click

from .antiramsey import r_formula, solve_edge_disjoint_rst
from .cdrst import Certificate, solve_color_disjoint
from .config import settings
from .dumps import InternalFailure
from .extension import extend_to_trees
from .extremal import ExtremalSearchError, extremal_coloring, verify_r_exhaustive
from .formats import (
    CertificateDocument,
    GraphFile,
    StatsDocument,
    check_certificate,
    parse_certificate,
    parse_forests,
    parse_graph,
    partition_document,
    serialize_certificate,
    serialize_forests,
    serialize_graph,
)
from .graph import Forest, ForestFamily, RainbowError
from .partitions import scan_partitions
from .search import BudgetExhaustedError

logging.basicConfig(
    level=getattr(logging, settings.log_level.upper()),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NEGATIVE = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4


@dataclass
class Options:
    """Global flags of one invocation"""
    as_json: bool = False
    timing: bool = False
    budget: Optional[int] = None
    threads: Optional[int] = None
    started: float = 0.0


# --------------------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------------------

def _render_text(document: CertificateDocument) -> str:
    lines = [document.result]
    if document.value is not None:
        lines = [str(document.value)] if document.result == "value" else lines + [f"value {document.value}"]
    if document.route is not None:
        lines.append(f"route {document.route}")
    if document.guarantee is not None:
        lines.append(f"guarantee {document.guarantee.value}")
    if document.trees is not None:
        lines.append(serialize_forests(_family_of(document.trees)).rstrip("\n"))
    if document.partition is not None:
        p = document.partition
        lines.append("partition " + " ".join(str(b) for b in p.assignment))
        lines.append(f"required {p.required} achieved {p.achieved} deficiency {p.deficiency}")
    if document.report is not None:
        lines += [f"{key} {value}" for key, value in document.report.items()]
    if document.graph is not None:
        lines.append(document.graph.rstrip("\n"))
    return "\n".join(lines) + "\n"


def _family_of(trees: List[List[int]]) -> ForestFamily:
    return ForestFamily(tuple(Forest(tuple(tree)) for tree in trees))


def _emit(options: Options, document: CertificateDocument, code: int) -> None:
    """Print the document and exit with `code`."""
    if options.timing:
        stats = document.stats or StatsDocument()
        wall_ms = round((time.perf_counter() - options.started) * 1000, 3)
        document = document.model_copy(update={"stats": stats.model_copy(update={"wall_ms": wall_ms})})
    click.echo(serialize_certificate(document) if options.as_json else _render_text(document), nl=False)
    click.get_current_context().exit(code)


def _tree_lists(family: ForestFamily) -> List[List[int]]:
    return [list(forest.edges) for forest in family.forests]


def _certificate_document(certificate: Certificate, t: int, mode: str) -> CertificateDocument:
    stats = StatsDocument(
        rounds=certificate.rounds,
        moves=certificate.moves,
        partitions_scanned=certificate.partitions_scanned,
        nodes=certificate.nodes,
    )
    if certificate.found:
        return CertificateDocument(
            result="trees",
            t=t,
            mode=mode,
            guarantee=certificate.guarantee,
            route=certificate.route,
            trees=_tree_lists(certificate.trees),
            stats=stats,
        )
    if certificate.proven_absent:
        return CertificateDocument(
            result="proven-absent",
            t=t,
            mode=mode,
            guarantee=certificate.guarantee,
            route=certificate.route,
            stats=stats,
        )
    return CertificateDocument(
        result="violation",
        t=t,
        mode=mode,
        guarantee=certificate.guarantee,
        route=certificate.route,
        partition=partition_document(certificate.violation),
        stats=stats,
    )


# --------------------------------------------------------------------------------------
# Error handling
# --------------------------------------------------------------------------------------

def guarded(command: Callable) -> Callable:
    """Map library exceptions to exit codes."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return command(*args, **kwargs)
        except InternalFailure as e:
            logger.error(f"{e} (dump: {e.dump_path})")
            ctx.exit(EXIT_INTERNAL)
        except (BudgetExhaustedError, ExtremalSearchError) as e:
            logger.error(str(e))
            ctx.exit(EXIT_BUDGET)
        except (RainbowError, ValueError) as e:
            logger.error(str(e))
            ctx.exit(EXIT_USAGE)

    return wrapper


def _read_graph(path: Path) -> GraphFile:
    graph_file = parse_graph(path.read_text())
    logger.info(f"Read {path}: n={graph_file.graph.n}, m={graph_file.graph.num_edges}, k={graph_file.graph.num_colors}")
    return graph_file


def _read_forests(path: Path, graph_file: GraphFile, t: Optional[int]) -> ForestFamily:
    family = parse_forests(path.read_text(), graph_file.graph)
    if t is not None and family.t != t:
        raise click.UsageError(f"{path} holds {family.t} forests, --t is {t}")
    return family


GRAPH = click.argument("graph", type=click.Path(exists=True, dir_okay=False, path_type=Path))
FILE = click.Path(exists=True, dir_okay=False, path_type=Path)


# --------------------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------------------

@click.group()
@click.option("--json", "as_json", is_flag=True, help="Print the certificate document as JSON")
@click.option("--timing", is_flag=True, help="Include wall time in the document stats")
@click.option("--budget", type=click.IntRange(min=1), help="Node budget for exact searches")
@click.option("--threads", type=click.IntRange(min=1), help="Worker processes for partition and coloring scans")
@click.pass_context
def cli(ctx: click.Context, as_json: bool, timing: bool, budget: Optional[int], threads: Optional[int]):
    """Rainbow spanning trees in edge-colored multigraphs."""
    ctx.obj = Options(
        as_json=as_json,
        timing=timing,
        budget=budget if budget is not None else settings.search.budget,
        threads=threads if threads is not None else settings.search.threads,
        started=time.perf_counter(),
    )


@cli.command()
@GRAPH
@click.option("--t", "t", type=click.IntRange(min=0), help="Number of trees")
@click.option("--mode", type=click.Choice(["cd", "ext"]), default="cd", show_default=True)
@click.option("--forests", type=FILE, help="Forest file (required with --mode ext)")
@click.option("--certificate", type=FILE, help="Re-check this certificate document instead of scanning")
@click.pass_obj
@guarded
def check(options: Options, graph: Path, t: Optional[int], mode: str, forests: Optional[Path], certificate: Optional[Path]):
    """First violating partition, or re-validation of a certificate."""
    graph_file = _read_graph(graph)

    if certificate is not None:
        document = parse_certificate(certificate.read_text())
        family = _read_forests(forests, graph_file, document.t) if forests is not None else None
        ok = check_certificate(graph_file.graph, document, family)
        logger.info(f"Certificate {certificate} is {'valid' if ok else 'invalid'}")
        verdict = CertificateDocument(result="valid" if ok else "invalid", t=document.t, mode=document.mode)
        _emit(options, verdict, EXIT_OK if ok else EXIT_NEGATIVE)

    if t is None:
        raise click.UsageError("--t is required unless --certificate is given")
    family = None
    if mode == "ext":
        if forests is None:
            raise click.UsageError("--mode ext needs --forests")
        family = _read_forests(forests, graph_file, t)

    scan = scan_partitions(graph_file.graph, t, family, threads=options.threads)
    stats = StatsDocument(partitions_scanned=scan.scanned)
    doc_mode = "extension" if family is not None else "color-disjoint"
    if scan.violation is None:
        _emit(options, CertificateDocument(result="none", t=t, mode=doc_mode, stats=stats), EXIT_OK)
    document = CertificateDocument(
        result="violation",
        t=t,
        mode=doc_mode,
        partition=partition_document(scan.violation),
        stats=stats,
    )
    _emit(options, document, EXIT_NEGATIVE)


@cli.command()
@GRAPH
@click.option("--t", "t", type=click.IntRange(min=0), required=True, help="Number of trees")
@click.pass_obj
@guarded
def solve(options: Options, graph: Path, t: int):
    """t color-disjoint rainbow spanning trees, or a violating partition."""
    graph_file = _read_graph(graph)
    certificate = solve_color_disjoint(graph_file.graph, t, threads=options.threads, budget=options.budget)
    _emit(options, _certificate_document(certificate, t, "color-disjoint"), EXIT_OK if certificate.found else EXIT_NEGATIVE)


@cli.command()
@GRAPH
@click.option("--t", "t", type=click.IntRange(min=0), required=True, help="Number of forests")
@click.option("--forests", type=FILE, required=True, help="Forest file")
@click.pass_obj
@guarded
def extend(options: Options, graph: Path, t: int, forests: Path):
    """Extend rainbow forests to trees with fresh distinct colors, or a violating partition."""
    graph_file = _read_graph(graph)
    family = _read_forests(forests, graph_file, t)
    certificate = extend_to_trees(graph_file.graph, family, threads=options.threads, budget=options.budget)
    _emit(options, _certificate_document(certificate, t, "extension"), EXIT_OK if certificate.found else EXIT_NEGATIVE)


@cli.command()
@GRAPH
@click.option("--t", "t", type=click.IntRange(min=0), required=True, help="Number of trees")
@click.pass_obj
@guarded
def trees(options: Options, graph: Path, t: int):
    """t edge-disjoint rainbow spanning trees, or proof that none exist."""
    graph_file = _read_graph(graph)
    result = solve_edge_disjoint_rst(graph_file.graph, t, options.budget)
    stats = StatsDocument(nodes=result.nodes)
    if result.found:
        document = CertificateDocument(
            result="trees",
            t=t,
            mode="edge-disjoint",
            route=result.route,
            trees=_tree_lists(result.trees),
            stats=stats,
        )
        _emit(options, document, EXIT_OK)
    _emit(options, CertificateDocument(result="proven-absent", t=t, mode="edge-disjoint", route=result.route, stats=stats), EXIT_NEGATIVE)


@cli.group()
def anti():
    """Anti-Ramsey number r(n, t) for edge-disjoint rainbow spanning trees in K_n."""


N_OPTION = click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Order of the complete graph")
T_OPTION = click.option("--t", "t", type=click.IntRange(min=1), required=True, help="Number of trees")


@anti.command()
@N_OPTION
@T_OPTION
@click.pass_obj
@guarded
def formula(options: Options, n: int, t: int):
    """Print r(n, t)."""
    _emit(options, CertificateDocument(result="value", n=n, t=t, value=r_formula(n, t)), EXIT_OK)


@anti.command()
@N_OPTION
@T_OPTION
@click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), help="Seed for the coloring search")
@click.pass_obj
@guarded
def construct(options: Options, n: int, t: int, seed: Optional[int]):
    """A verified coloring of K_n with r(n, t) colors and no t edge-disjoint rainbow spanning trees."""
    graph = extremal_coloring(n, t, seed=seed, budget=options.budget)
    document = CertificateDocument(
        result="coloring",
        n=n,
        t=t,
        value=graph.num_colors,
        graph=serialize_graph(graph),
    )
    _emit(options, document, EXIT_OK)


@anti.command()
@N_OPTION
@T_OPTION
@click.pass_obj
@guarded
def verify(options: Options, n: int, t: int):
    """Check r(n, t) against every coloring of K_n."""
    report = verify_r_exhaustive(n, t, threads=options.threads, budget=options.budget)
    document = CertificateDocument(
        result="confirmed" if report.confirmed else "invalid",
        n=n,
        t=t,
        value=report.r,
        report=report.as_dict(),
        stats=StatsDocument(colorings=report.colorings_at_r + report.colorings_above_r),
    )
    _emit(options, document, EXIT_OK if report.confirmed else EXIT_NEGATIVE)


# --------------------------------------------------------------------------------------
# Entry points
# --------------------------------------------------------------------------------------

def run_cli(argv: Sequence[str]) -> int:
    """Run one command and return its exit code; usage errors map to 1."""
    try:
        rv = cli.main(args=list(argv), prog_name="rainbow-trees", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_OK


def main():
    """Console script entry point"""
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
