"""
formats.py

Text formats for graphs and forest lists, and the pydantic models of the
certificate documents the CLI emits and re-checks.

Graph file:
    ecg <n> <m> <k>
    <u> <v> <color-label>      (m lines; vertices 0-based, labels arbitrary tokens)

Forest file: one line per forest holding 0-based edge indices, `-` for an
empty forest. In both formats `#` starts a comment and blank lines are ignored.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, model_validator

from .graph import (
    DisjointMode,
    EdgeColoredMultigraph,
    Forest,
    ForestFamily,
    GraphError,
    RainbowError,
    VertexPartition,
    validate_family,
)
from .partitions import deficiency_cd, deficiency_ext

logger = logging.getLogger(__name__)


class GraphFormatError(RainbowError):
    """Raised when a graph, forest or certificate file cannot be parsed"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _content_lines(text: str) -> List[Tuple[int, List[str]]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            lines.append((number, tokens))
    return lines


def _parse_int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"{what} must be an integer, got {token!r}", line)


# --------------------------------------------------------------------------------------
# Graph files
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class GraphFile:
    """A parsed graph together with the original color labels (indexed by color id)."""
    graph: EdgeColoredMultigraph
    labels: Tuple[str, ...]

    @property
    def label_ids(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}


def parse_graph(text: str) -> GraphFile:
    """
    Parse a graph file. Labels map to dense color ids in order of first appearance.

    Raises:
        GraphFormatError: On a malformed header or edge line, a loop, or a count mismatch
    """
    lines = _content_lines(text)
    if not lines:
        raise GraphFormatError("missing 'ecg <n> <m> <k>' header", 1)
    number, header = lines[0]
    if len(header) != 4 or header[0] != "ecg":
        raise GraphFormatError("header must be 'ecg <n> <m> <k>'", number)
    n, m, k = (_parse_int(token, number, field) for token, field in zip(header[1:], ("n", "m", "k")))
    if min(n, m, k) < 0:
        raise GraphFormatError("header counts must be non-negative", number)

    body = lines[1:]
    if len(body) != m:
        last = body[-1][0] if body else number
        raise GraphFormatError(f"header declares {m} edges, found {len(body)}", last)

    label_ids: Dict[str, int] = {}
    edges = []
    for number, tokens in body:
        if len(tokens) != 3:
            raise GraphFormatError("edge line must be '<u> <v> <color-label>'", number)
        u = _parse_int(tokens[0], number, "vertex")
        v = _parse_int(tokens[1], number, "vertex")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex out of range 0..{n - 1}", number)
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}", number)
        edges.append((u, v, label_ids.setdefault(tokens[2], len(label_ids))))

    if len(label_ids) != k:
        raise GraphFormatError(f"header declares {k} colors, found {len(label_ids)}", lines[0][0])
    try:
        graph = EdgeColoredMultigraph(n, tuple(edges))
    except GraphError as e:
        raise GraphFormatError(str(e))
    return GraphFile(graph=graph, labels=tuple(label_ids))


def serialize_graph(graph: EdgeColoredMultigraph, labels: Optional[Sequence[str]] = None) -> str:
    labels = list(labels) if labels is not None else [str(c) for c in range(graph.num_colors)]
    if len(labels) != graph.num_colors:
        raise GraphError(f"{len(labels)} labels for {graph.num_colors} colors")
    lines = [f"ecg {graph.n} {graph.num_edges} {graph.num_colors}"]
    lines += [f"{u} {v} {labels[c]}" for u, v, c in graph.edges]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------------------
# Forest files
# --------------------------------------------------------------------------------------

def parse_forests(text: str, graph: EdgeColoredMultigraph) -> ForestFamily:
    """
    Parse a forest file against `graph`. The family is returned in edge-disjoint
    mode; whether it is a valid family is left to the solvers.

    Raises:
        GraphFormatError: On a non-integer or out-of-range edge index
    """
    forests = []
    for number, tokens in _content_lines(text):
        if tokens == ["-"]:
            forests.append(Forest(()))
            continue
        edges = []
        for token in tokens:
            e = _parse_int(token, number, "edge index")
            if not 0 <= e < graph.num_edges:
                raise GraphFormatError(f"edge index {e} out of range 0..{graph.num_edges - 1}", number)
            edges.append(e)
        forests.append(Forest(tuple(edges)))
    return ForestFamily(tuple(forests), DisjointMode.EDGE_DISJOINT)


def serialize_forests(family: ForestFamily) -> str:
    lines = [" ".join(str(e) for e in forest.edges) if len(forest) else "-" for forest in family.forests]
    return "\n".join(lines) + ("\n" if lines else "")


# --------------------------------------------------------------------------------------
# Certificate documents
# --------------------------------------------------------------------------------------

ResultKind = Literal["trees", "violation", "proven-absent", "none", "valid", "invalid", "value", "coloring", "confirmed"]
ProblemMode = Literal["color-disjoint", "extension", "edge-disjoint"]


class PartitionDocument(BaseModel):
    """A violating partition with its score"""
    assignment: List[int] = Field(..., description="Block id of each vertex, restricted-growth form")
    required: int = Field(..., description="t(|P| - 1)")
    achieved: int = Field(..., description="Crossing colors (plus crossing forest edges in extension mode)")
    deficiency: int = Field(..., description="required - achieved")


class StatsDocument(BaseModel):
    """Solver counters"""
    rounds: Optional[int] = Field(default=None, description="Deletion rounds of the final family")
    moves: Optional[int] = Field(default=None, description="Accepted hill-climb moves")
    partitions_scanned: Optional[int] = Field(default=None, description="Partitions visited by the scan")
    nodes: Optional[int] = Field(default=None, description="Nodes visited by exact tree search")
    colorings: Optional[int] = Field(default=None, description="Colorings enumerated")
    wall_ms: Optional[float] = Field(default=None, description="Wall time, only with --timing")


class CertificateDocument(BaseModel):
    """Machine-checkable outcome of one command"""
    result: ResultKind
    t: Optional[int] = None
    n: Optional[int] = None
    mode: Optional[ProblemMode] = None
    guarantee: Optional[DisjointMode] = None
    route: Optional[str] = None
    trees: Optional[List[List[int]]] = None
    partition: Optional[PartitionDocument] = None
    value: Optional[int] = None
    report: Optional[Dict[str, int]] = None
    graph: Optional[str] = None
    stats: Optional[StatsDocument] = None

    @model_validator(mode="after")
    def check_payload(self):
        if self.result == "trees" and (self.trees is None or self.partition is not None):
            raise ValueError("a trees result carries trees and no partition")
        if self.result == "violation" and (self.partition is None or self.trees is not None):
            raise ValueError("a violation result carries a partition and no trees")
        return self


def serialize_certificate(document: CertificateDocument) -> str:
    return document.model_dump_json(indent=2, exclude_none=True) + "\n"


def parse_certificate(text: str) -> CertificateDocument:
    """
    Raises:
        GraphFormatError: If the text is not a valid certificate document
    """
    try:
        return CertificateDocument.model_validate_json(text)
    except ValueError as e:
        raise GraphFormatError(f"invalid certificate document: {e}")


def partition_document(deficiency) -> PartitionDocument:
    return PartitionDocument(
        assignment=list(deficiency.partition.assignment),
        required=deficiency.required,
        achieved=deficiency.achieved,
        deficiency=deficiency.value,
    )


def check_certificate(
    graph: EdgeColoredMultigraph,
    document: CertificateDocument,
    forests: Optional[ForestFamily] = None,
) -> bool:
    """
    Re-validate a trees or violation document from the graph alone.

    Trees must be t spanning rainbow trees, disjoint in the document's sense;
    extension trees must also contain the given forests and add only fresh,
    pairwise distinct colors. Partitions are re-scored from scratch.

    Raises:
        ValueError: For documents with nothing to re-check, or an extension
            document without its forests
    """
    if document.mode == "extension" and forests is None:
        raise ValueError("extension certificates are checked against their forest file")

    if document.result == "trees":
        return _check_trees(graph, document, forests)
    if document.result == "violation":
        return _check_partition(graph, document, forests)
    raise ValueError(f"nothing to re-check in a {document.result!r} document")


def _check_trees(graph: EdgeColoredMultigraph, document: CertificateDocument, forests: Optional[ForestFamily]) -> bool:
    if document.t is not None and len(document.trees) != document.t:
        return False
    if any(not 0 <= e < graph.num_edges for tree in document.trees for e in tree):
        return False
    if document.mode == "color-disjoint":
        mode = DisjointMode.COLOR_DISJOINT
    else:
        mode = DisjointMode.EDGE_DISJOINT
    family = ForestFamily(tuple(Forest(tuple(tree)) for tree in document.trees), mode)
    if not validate_family(graph, family) or not family.is_spanning(graph):
        return False
    if document.mode != "extension":
        return True

    if forests.t != family.t:
        return False
    added_colors: List[int] = []
    for tree, forest in zip(family.forests, forests.forests):
        if not forest.edge_set <= tree.edge_set:
            return False
        added_colors += [graph.color(e) for e in tree.edge_set - forest.edge_set]
    if len(set(added_colors)) != len(added_colors):
        return False
    return not set(added_colors) & forests.colors(graph)


def _check_partition(
    graph: EdgeColoredMultigraph,
    document: CertificateDocument,
    forests: Optional[ForestFamily],
) -> bool:
    claimed = document.partition
    if document.t is None:
        raise GraphFormatError("violation certificate has no t")
    try:
        partition = VertexPartition(tuple(claimed.assignment))
        if document.mode == "extension":
            score = deficiency_ext(graph, forests, partition, document.t)
        else:
            score = deficiency_cd(graph, partition, document.t)
    except RainbowError as e:
        logger.debug(f"Partition certificate rejected: {e}")
        return False
    return (
        score.violated
        and score.required == claimed.required
        and score.achieved == claimed.achieved
        and score.value == claimed.deficiency
    )
