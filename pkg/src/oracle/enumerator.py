"""
Exhaustive enumeration of labellings for small trees.

Used as ground truth for the optimal and greedy modules and to build the
(m10, m11) phase histogram of all placements of a fixed number of 1-nodes.
Labellings are processed in blocks as boolean matrices, one row per
labelling.
"""
import csv
import io
import logging
import math
from collections import Counter
from itertools import combinations, islice
from typing import Iterator, List, Tuple

import numpy as np

from src.errors import GuardExceededError, InvalidBudgetError, InvalidInputError
from src.models import PhaseHistogram
from src.tree.directed_tree import DirectedTree
from src.tree.influence import Labelling, edge_mix_block, to_labelling

logger = logging.getLogger(__name__)

DEFAULT_MAX_NODES = 20
DEFAULT_MAX_COMBINATIONS = 10 ** 7
BLOCK_SIZE = 1 << 16


def _all_labelling_blocks(n: int) -> Iterator[np.ndarray]:
    bits = np.arange(n, dtype=np.int64)
    total = 1 << n
    for start in range(0, total, BLOCK_SIZE):
        codes = np.arange(start, min(start + BLOCK_SIZE, total), dtype=np.int64)
        yield ((codes[:, None] >> bits) & 1).astype(bool)


def _fixed_k_blocks(n: int, k: int) -> Iterator[np.ndarray]:
    combos = combinations(range(n), k)
    while True:
        chunk = list(islice(combos, BLOCK_SIZE))
        if not chunk:
            return
        idx = np.array(chunk, dtype=np.intp).reshape(len(chunk), k)
        block = np.zeros((len(chunk), n), dtype=bool)
        block[np.arange(len(chunk))[:, None], idx] = True
        yield block


def enumerate_all(tree: DirectedTree, max_nodes: int = DEFAULT_MAX_NODES) -> Tuple[int, int, Labelling]:
    """
    Best influence over all ``2^n`` labellings.

    Returns:
        ``(I_max, k_min, labels)`` where ``k_min`` is the fewest 1-nodes
        reaching ``I_max`` and ``labels`` is the first such labelling in
        binary counting order

    Raises:
        GuardExceededError: if the tree has more than ``max_nodes`` nodes
    """
    n = tree.node_count
    if n > max_nodes:
        raise GuardExceededError(
            f"exhaustive search over 2^{n} labellings refused: limit is n <= {max_nodes}"
        )

    best_i, best_k, best_row = -1, n + 1, None
    for block in _all_labelling_blocks(n):
        m10, _ = edge_mix_block(tree, block)
        ks = block.sum(axis=1)
        top = m10.max()
        if top < best_i:
            continue
        rows = np.flatnonzero(m10 == top)
        row = rows[np.argmin(ks[rows])]
        if top > best_i or ks[row] < best_k:
            best_i, best_k, best_row = int(top), int(ks[row]), block[row].copy()
    return best_i, best_k, to_labelling(best_row.astype(int))


def enumerate_fixed_k(
    tree: DirectedTree, k: int, max_combinations: int = DEFAULT_MAX_COMBINATIONS
) -> Tuple[int, PhaseHistogram]:
    """
    Histogram of ``(m10, m11)`` over every labelling with exactly ``k`` 1-nodes.

    Combinations are generated in lexicographic order.

    Returns:
        ``(I_max_k, histogram)``

    Raises:
        InvalidBudgetError: if ``k`` is outside ``0..n``
        GuardExceededError: if ``C(n, k)`` exceeds ``max_combinations``
    """
    n = tree.node_count
    if not 0 <= k <= n:
        raise InvalidBudgetError(f"k={k} must lie in 0..{n}")
    count = math.comb(n, k)
    if count > max_combinations:
        raise GuardExceededError(
            f"C({n}, {k}) = {count} labellings exceeds the limit of {max_combinations}"
        )

    cells: Counter = Counter()
    for block in _fixed_k_blocks(n, k):
        m10, m11 = edge_mix_block(tree, block)
        pairs, counts = np.unique(np.stack([m10, m11], axis=1), axis=0, return_counts=True)
        for (a, b), c in zip(pairs.tolist(), counts.tolist()):
            cells[(a, b)] += c
    logger.info("enumerated %d labellings of size %d over %d nodes", count, k, n)

    histogram = PhaseHistogram(n=n, k=k, cells=dict(cells))
    return histogram.max_m10(), histogram


def histogram_to_csv(histogram: PhaseHistogram) -> List[Tuple[int, int, int]]:
    """
    Rows ``(m10, m11, count)`` sorted by ``(m10, m11)``.

    Raises:
        InvalidInputError: for an empty histogram
    """
    if not histogram.cells:
        raise InvalidInputError("cannot export an empty histogram")
    return [(m10, m11, count) for (m10, m11), count in sorted(histogram.cells.items())]


def parse_histogram_csv(text: str, n: int, k) -> PhaseHistogram:
    """Read back histogram CSV text; columns other than ``m10, m11, count`` are ignored."""
    cells = {}
    for row in csv.DictReader(io.StringIO(text)):
        cells[(int(row["m10"]), int(row["m11"]))] = int(row["count"])
    return PhaseHistogram(n=n, k=k, cells=cells)
