"""
Per-cascade comparison of observed influence with optimal, greedy and random
placements.
"""
import hashlib
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.errors import PreconditionError
from src.greedy.placement import greedy_placement
from src.models import CascadeMetrics, CascadeRecord, FilterReport
from src.optimal.tree_max_influence import optimal_summary
from src.tree.influence import edge_mix_block, influence

logger = logging.getLogger(__name__)

DEFAULT_MIN_NODES = 15
DEFAULT_MIN_COORDINATED = 1
DEFAULT_BASELINE_REPLICATES = 10


def record_rng(record: CascadeRecord, seed: int) -> np.random.Generator:
    """
    Random stream for one cascade, derived from the master seed and the
    cascade's content (not its id or position in the file).
    """
    digest = hashlib.sha256(repr((record.tree.parents, record.observed)).encode("utf-8")).digest()
    return np.random.default_rng([seed, int.from_bytes(digest[:8], "big")])


def filter_cascades(
    records: Sequence[CascadeRecord],
    min_nodes: int = DEFAULT_MIN_NODES,
    min_coordinated: int = DEFAULT_MIN_COORDINATED,
) -> Tuple[List[CascadeRecord], FilterReport]:
    """
    Keep the cascades with at least ``min_nodes`` nodes and at least
    ``min_coordinated`` 1-nodes.

    Returns:
        ``(kept records, report of what was removed)``; a record failing
        both thresholds is counted as too small
    """
    kept = []
    report = FilterReport(total=len(records))
    for record in records:
        if record.n < min_nodes:
            report.removed_too_small += 1
        elif record.k < min_coordinated:
            report.removed_no_coordinated += 1
        else:
            kept.append(record)
    report.kept = len(kept)
    logger.info(
        "kept %d of %d cascades (%d too small, %d without coordinated nodes)",
        report.kept, report.total, report.removed_too_small, report.removed_no_coordinated,
    )
    return kept, report


def per_cascade_metrics(record: CascadeRecord, rng: np.random.Generator) -> CascadeMetrics:
    """
    Observed influence against the optimum and the greedy placement with the
    same number of 1-nodes.

    Raises:
        PreconditionError: if the optimum or the greedy influence is zero,
            which filtered cascades cannot produce
    """
    observed = influence(record.tree, record.observed)
    best = optimal_summary(record.tree)
    if best.influence == 0:
        raise PreconditionError("optimal influence is 0; rho is undefined", record_id=record.id)
    _, greedy_influence = greedy_placement(record.tree, record.k, rng)
    if greedy_influence == 0:
        raise PreconditionError("greedy influence is 0; rho_k is undefined", record_id=record.id)
    return CascadeMetrics(
        id=record.id,
        n=record.n,
        k_obs=record.k,
        I_obs=observed,
        I_star=best.influence,
        k_star=best.k,
        I_k=greedy_influence,
        rho=observed / best.influence,
        rho_k=observed / greedy_influence,
    )


def random_baseline(
    record: CascadeRecord, replicates: int = DEFAULT_BASELINE_REPLICATES, rng: Optional[np.random.Generator] = None
) -> float:
    """
    Mean influence of ``replicates`` uniformly random placements of as many
    1-nodes as the cascade has.

    Raises:
        PreconditionError: if the cascade has no 1-nodes or ``replicates < 1``
    """
    k = record.k
    if k < 1:
        raise PreconditionError("random baseline needs at least one coordinated node", record_id=record.id)
    if replicates < 1:
        raise PreconditionError(f"replicates must be >= 1, got {replicates}")
    rng = rng if rng is not None else np.random.default_rng()

    n = record.n
    block = np.zeros((replicates, n), dtype=bool)
    for row in range(replicates):
        block[row, rng.choice(n, size=k, replace=False)] = True
    m10, _ = edge_mix_block(record.tree, block)
    return float(m10.mean())
