"""
Reading and writing labelled cascade files.

Two layouts are supported:

* JSONL: one object per line,
  ``{"id": str, "edges": [[parent, child], ...], "coordinated": [node, ...]}``
  with an optional ``"n"`` (node count) and, instead of ``"coordinated"``,
  an optional ``"labels"`` bit list.
* CSV pair: an edges file with columns ``cascade_id,parent,child`` and a
  labels file with columns ``cascade_id,node,label`` holding one row per node.
"""
import csv
import json
import logging
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from src.errors import CascadeFormatError, DuplicateIdError, InvalidInputError, LabelLengthMismatchError
from src.models import CascadeRecord, InputFormat
from src.tree.directed_tree import DirectedTree
from src.tree.influence import labelling_from_nodes, one_nodes

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _is_node_id(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 0


class JsonlCascadeParser:
    """
    Parser for line-delimited JSON cascades.
    """

    def __init__(self, lines: Iterable[str], require_labels: bool = True):
        """
        Initialize the parser with the lines of a JSONL file.

        Args:
            lines: raw text lines, blank lines are skipped
            require_labels: when False, a record without "coordinated" or
                "labels" is read as a bare tree with every node labelled 0
        """
        self.lines = lines
        self.require_labels = require_labels

    def records(self) -> Iterator[CascadeRecord]:
        """
        Parse every non-blank line into a validated record.

        Raises:
            CascadeFormatError: for unparseable lines or missing fields
            InvalidTreeError: for records whose edges do not form a tree,
                tagged with the record id and line number
        """
        for line_no, line in enumerate(self.lines, start=1):
            if not line.strip():
                continue
            yield self._parse_line(line, line_no)

    def _parse_line(self, line: str, line_no: int) -> CascadeRecord:
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CascadeFormatError(f"invalid JSON: {exc.msg}", line=line_no) from exc
        if not isinstance(obj, dict):
            raise CascadeFormatError("each line must hold a JSON object", line=line_no)

        record_id = obj.get("id")
        if not isinstance(record_id, str) or not record_id:
            raise CascadeFormatError("missing or empty 'id'", line=line_no)

        edges = self._edges(obj, record_id, line_no)
        n = self._node_count(obj, edges, record_id, line_no)
        if not self.require_labels and "labels" not in obj and "coordinated" not in obj:
            labels = (0,) * n
        else:
            labels = self._labels(obj, n, record_id, line_no)

        try:
            tree = DirectedTree.from_edges(n, edges)
        except InvalidInputError as exc:
            raise exc.with_context(record_id=record_id, line=line_no) from exc
        return CascadeRecord(id=record_id, tree=tree, observed=labels)

    @staticmethod
    def _edges(obj: dict, record_id: str, line_no: int) -> List[Tuple[int, int]]:
        raw = obj.get("edges", [])
        if not isinstance(raw, list):
            raise CascadeFormatError("'edges' must be a list of [parent, child] pairs", record_id, line_no)
        edges = []
        for pair in raw:
            if not isinstance(pair, list) or len(pair) != 2 or not all(_is_node_id(x) for x in pair):
                raise CascadeFormatError(f"malformed edge {pair!r}", record_id, line_no)
            edges.append((pair[0], pair[1]))
        return edges

    @staticmethod
    def _node_count(obj: dict, edges: List[Tuple[int, int]], record_id: str, line_no: int) -> int:
        if "n" in obj:
            n = obj["n"]
            if not isinstance(n, int) or isinstance(n, bool) or n < 1:
                raise CascadeFormatError(f"'n' must be a positive integer, got {n!r}", record_id, line_no)
            return n
        if isinstance(obj.get("labels"), list):
            return max(len(obj["labels"]), 1)
        ids = [x for edge in edges for x in edge]
        coordinated = obj.get("coordinated", [])
        if isinstance(coordinated, list):
            ids.extend(x for x in coordinated if _is_node_id(x))
        return max(ids) + 1 if ids else 1

    @staticmethod
    def _labels(obj: dict, n: int, record_id: str, line_no: int) -> Tuple[int, ...]:
        if "labels" in obj:
            bits = obj["labels"]
            if not isinstance(bits, list) or any(b not in (0, 1) or isinstance(b, bool) for b in bits):
                raise CascadeFormatError("'labels' must be a list of 0/1 values", record_id, line_no)
            if len(bits) != n:
                raise LabelLengthMismatchError(
                    f"{len(bits)} labels for a tree with {n} nodes", record_id, line_no
                )
            return tuple(bits)

        coordinated = obj.get("coordinated")
        if not isinstance(coordinated, list) or not all(_is_node_id(x) for x in coordinated):
            raise CascadeFormatError("'coordinated' must be a list of node ids", record_id, line_no)
        outside = [x for x in coordinated if x >= n]
        if outside:
            raise LabelLengthMismatchError(
                f"coordinated nodes {outside[:10]} lie outside the tree's {n} nodes", record_id, line_no
            )
        return labelling_from_nodes(n, coordinated)


class CsvCascadeParser:
    """
    Parser for the edges-file / labels-file cascade layout.
    """

    def __init__(self, edge_rows: Iterable[Dict[str, str]], label_rows: Iterable[Dict[str, str]]):
        """
        Initialize the parser with the rows of both files.

        Args:
            edge_rows: ``csv.DictReader`` rows with ``cascade_id,parent,child``
            label_rows: ``csv.DictReader`` rows with ``cascade_id,node,label``
        """
        self.edge_rows = edge_rows
        self.label_rows = label_rows

    def records(self) -> List[CascadeRecord]:
        """
        Assemble one record per cascade id, in the order ids first appear in
        the labels file.

        Raises:
            DuplicateIdError: if the rows of one cascade are not contiguous or
                a node is labelled twice
            LabelLengthMismatchError: if the labelled nodes are not exactly
                ``0..n-1`` or an edge names an unlabelled node
        """
        labels: Dict[str, Dict[int, int]] = {}
        first_line: Dict[str, int] = {}
        previous: Optional[str] = None
        for line_no, row in enumerate(self.label_rows, start=2):
            cid = self._field(row, "cascade_id", line_no)
            node = self._int(row, "node", line_no, cid)
            bit = self._int(row, "label", line_no, cid)
            if bit not in (0, 1):
                raise CascadeFormatError(f"label must be 0 or 1, got {bit}", cid, line_no)
            if cid in labels and cid != previous:
                raise DuplicateIdError("cascade id appears in two separate blocks", cid, line_no)
            nodes = labels.setdefault(cid, {})
            first_line.setdefault(cid, line_no)
            if node in nodes:
                raise DuplicateIdError(f"node {node} is labelled twice", cid, line_no)
            nodes[node] = bit
            previous = cid

        edges: Dict[str, List[Tuple[int, int]]] = {cid: [] for cid in labels}
        for line_no, row in enumerate(self.edge_rows, start=2):
            cid = self._field(row, "cascade_id", line_no)
            if cid not in edges:
                raise LabelLengthMismatchError("edges given for a cascade with no labels", cid, line_no)
            edges[cid].append((self._int(row, "parent", line_no, cid), self._int(row, "child", line_no, cid)))

        records = []
        for cid, nodes in labels.items():
            n = len(nodes)
            if set(nodes) != set(range(n)):
                raise LabelLengthMismatchError(
                    f"labelled nodes are not exactly 0..{n - 1}", cid, first_line[cid]
                )
            if any(x >= n for edge in edges[cid] for x in edge):
                raise LabelLengthMismatchError(f"an edge names a node outside 0..{n - 1}", cid, first_line[cid])
            try:
                tree = DirectedTree.from_edges(n, edges[cid])
            except InvalidInputError as exc:
                raise exc.with_context(record_id=cid, line=first_line[cid]) from exc
            records.append(CascadeRecord(id=cid, tree=tree, observed=[nodes[v] for v in range(n)]))
        return records

    @staticmethod
    def _field(row: Dict[str, str], name: str, line_no: int, cid: Optional[str] = None) -> str:
        value = row.get(name)
        if value is None or not value.strip():
            raise CascadeFormatError(f"missing column '{name}'", cid, line_no)
        return value.strip()

    @classmethod
    def _int(cls, row: Dict[str, str], name: str, line_no: int, cid: str) -> int:
        value = cls._field(row, name, line_no, cid)
        try:
            number = int(value)
        except ValueError as exc:
            raise CascadeFormatError(f"column '{name}' is not an integer: {value!r}", cid, line_no) from exc
        if number < 0:
            raise CascadeFormatError(f"column '{name}' must be nonnegative, got {number}", cid, line_no)
        return number


def load_cascades(
    path: PathLike,
    format: InputFormat = InputFormat.JSONL,
    labels_path: Optional[PathLike] = None,
) -> List[CascadeRecord]:
    """
    Load and validate the cascades of a dataset.

    Args:
        path: JSONL file, or the edges file of the CSV layout
        format: file layout
        labels_path: labels file, required for the CSV layout

    Raises:
        InvalidInputError: for unreadable files or malformed records; the
            error names the record and line
        DuplicateIdError: if two records share an id
    """
    format = InputFormat(format)
    try:
        if format == InputFormat.JSONL:
            with open(path, "r", encoding="utf-8") as f:
                records = list(JsonlCascadeParser(f).records())
        else:
            if labels_path is None:
                raise InvalidInputError("the CSV layout needs a labels file")
            with open(path, "r", encoding="utf-8", newline="") as ef, \
                    open(labels_path, "r", encoding="utf-8", newline="") as lf:
                records = CsvCascadeParser(csv.DictReader(ef), csv.DictReader(lf)).records()
    except OSError as exc:
        raise InvalidInputError(f"cannot read cascade file: {exc}") from exc

    seen = set()
    for record in records:
        if record.id in seen:
            raise DuplicateIdError("duplicate cascade id", record_id=record.id)
        seen.add(record.id)
    logger.info("loaded %d cascades from %s", len(records), path)
    return records


def load_trees(path: PathLike) -> List[CascadeRecord]:
    """
    Load the trees of a JSONL file; labels are optional and default to 0.

    Raises:
        InvalidInputError: for unreadable files or malformed records
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            records = list(JsonlCascadeParser(f, require_labels=False).records())
    except OSError as exc:
        raise InvalidInputError(f"cannot read tree file: {exc}") from exc
    if not records:
        raise CascadeFormatError(f"no trees found in {path}")
    logger.info("loaded %d trees from %s", len(records), path)
    return records


def write_cascades(
    records: Sequence[CascadeRecord],
    path: PathLike,
    format: InputFormat = InputFormat.JSONL,
    labels_path: Optional[PathLike] = None,
) -> None:
    """Write records in a layout :func:`load_cascades` reads back unchanged."""
    format = InputFormat(format)
    if format == InputFormat.JSONL:
        with open(path, "w", encoding="utf-8") as f:
            for record in records:
                f.write(json.dumps({
                    "id": record.id,
                    "n": record.n,
                    "edges": [list(edge) for edge in record.tree.edges()],
                    "coordinated": list(one_nodes(record.observed)),
                }) + "\n")
    else:
        if labels_path is None:
            raise InvalidInputError("the CSV layout needs a labels file")
        with open(path, "w", encoding="utf-8", newline="") as ef, \
                open(labels_path, "w", encoding="utf-8", newline="") as lf:
            edge_writer = csv.writer(ef)
            label_writer = csv.writer(lf)
            edge_writer.writerow(["cascade_id", "parent", "child"])
            label_writer.writerow(["cascade_id", "node", "label"])
            for record in records:
                edge_writer.writerows((record.id, u, w) for u, w in record.tree.edges())
                label_writer.writerows((record.id, v, bit) for v, bit in enumerate(record.observed))
    logger.info("wrote %d cascades to %s", len(records), path)
