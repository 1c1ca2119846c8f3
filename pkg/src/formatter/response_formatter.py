"""
Response formatter for rendering command results as JSON or CSV.
"""
import csv
import io
import json
import logging
from typing import Any, Dict, Iterable, Optional, Sequence

from pydantic import BaseModel

from src.models import AnalysisResult, GrowthCurvePoint, PhaseHistogram
from src.oracle.enumerator import histogram_to_csv

logger = logging.getLogger(__name__)

METRICS_COLUMNS = ["id", "n", "k_obs", "I_obs", "I_star", "k_star", "I_k", "rho", "rho_k"]
CURVE_COLUMNS = ["x", "mean_I", "sd_I", "mean_k", "sd_k", "replicates"]


class ResponseFormatter:
    """
    Formats results into the text written to stdout or to output files.

    Every CSV table ends with a ``seed`` column and every JSON document has a
    ``seed`` field, so each artifact records how it was produced.
    """

    def __init__(self, seed: int):
        """
        Initialize the formatter.

        Args:
            seed: master seed of the run
        """
        self.seed = seed

    def to_json(self, response: BaseModel) -> str:
        """Serialize a response model; it must carry a ``seed`` field."""
        return response.model_dump_json(indent=2, exclude_none=True)

    def table(self, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        """CSV text with a header; the seed is appended to every row."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(columns) + ["seed"])
        for row in rows:
            writer.writerow(list(row) + [self.seed])
        return buf.getvalue()

    def reports_csv(self, reports: Sequence[BaseModel]) -> str:
        """One row per optimal or greedy report; 1-nodes are space separated."""
        rows = [
            [r.id or "", r.n, r.influence, r.k, " ".join(str(v) for v in r.one_nodes)]
            for r in reports
        ]
        return self.table(["id", "n", "influence", "k", "one_nodes"], rows)

    def curve_csv(self, points: Sequence[GrowthCurvePoint]) -> str:
        """Growth curve rows ``x, mean_I, sd_I, mean_k, sd_k, replicates``."""
        rows = [
            [p.x, repr(p.mean_I_star), repr(p.sd_I_star), repr(p.mean_k_star), repr(p.sd_k_star), p.replicates]
            for p in points
        ]
        return self.table(CURVE_COLUMNS, rows)

    def histogram_csv(self, histogram: PhaseHistogram) -> str:
        """Phase histogram rows ``m10, m11, count`` sorted by cell."""
        return self.table(["m10", "m11", "count"], histogram_to_csv(histogram))

    def metrics_csv(self, result: AnalysisResult) -> str:
        """One row per analysed cascade."""
        rows = []
        for m in result.metrics:
            values = m.model_dump()
            rows.append([repr(values[c]) if isinstance(values[c], float) else values[c] for c in METRICS_COLUMNS])
        return self.table(METRICS_COLUMNS, rows)

    def comparison_json(self, result: AnalysisResult) -> str:
        """Distribution comparison with the seed and filter counts."""
        payload: Dict[str, Any] = {
            "seed": result.seed,
            "filter": result.filter.model_dump(),
            "comparison": result.comparison.model_dump(mode="json") if result.comparison else None,
        }
        return json.dumps(payload, indent=2)


def write_text(text: str, path: Optional[str]) -> None:
    """Write ``text`` to ``path``, or print it when no path is given."""
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info("wrote %s", path)
    else:
        print(text, end="" if text.endswith("\n") else "\n")
