"""
Greedy placement of a fixed number of 1-nodes, refined by label switches.

A switch exchanges the label of a 1-node ``v`` with that of a 0-node ``w``.
With ``Δ(v, w)`` the gain term below, the switch changes the influence by
exactly ``Δ(v, w) - d0(v)``, so it is accepted only when ``Δ(v, w) > d0(v)``.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.errors import InvalidBudgetError, InvalidMoveError
from src.models import SwitchMove
from src.tree.directed_tree import DirectedTree
from src.tree.influence import Labelling, influence, label_array, to_labelling

logger = logging.getLogger(__name__)


def delta(tree: DirectedTree, labels: Sequence[int], v: int, w: int) -> int:
    """
    Gain term of ``switch(v, w)``.

    ``Δ = d0(w) - p(w) + p(v)`` with every quantity read from the labelling
    after the switch. When ``w`` is the parent of ``v`` the edge ``w -> v`` is
    already counted by ``d0(w)``, so the ``p(v)`` term is dropped; this keeps
    ``influence(after) - influence(before) == Δ - d0_before(v)`` for adjacent
    pairs too.

    Raises:
        InvalidMoveError: unless ``v`` is a 1-node, ``w`` a 0-node and ``v != w``
    """
    lab = label_array(tree, labels)
    tree.children(v)
    tree.children(w)
    if v == w or not lab[v] or lab[w]:
        raise InvalidMoveError(f"switch needs a 1-node and a distinct 0-node, got v={v}, w={w}")

    after = lab.copy()
    after[v] = False
    after[w] = True
    d0_w = sum(1 for u in tree.children(w) if not after[u])
    parent_w = tree.parents[w]
    p_w = 1 if parent_w is not None and after[parent_w] else 0
    parent_v = tree.parents[v]
    if parent_v == w:
        p_v = 0
    else:
        p_v = 1 if parent_v is not None and after[parent_v] else 0
    return d0_w - p_w + p_v


def switch_move(tree: DirectedTree, labels: Sequence[int], v: int, w: int) -> SwitchMove:
    """Describe ``switch(v, w)`` together with the influence change it causes."""
    gain = delta(tree, labels, v, w) - sum(1 for u in tree.children(v) if not labels[u])
    return SwitchMove(from_node=v, to_node=w, delta=gain)


class _SwitchState:
    """
    Working labelling with the per-node counts the switch search reads.

    ``d0[u]`` is the number of 0-children of ``u`` and ``p[u]`` is 1 when the
    parent of ``u`` is a 1-node; both are kept current as labels change.
    """

    def __init__(self, tree: DirectedTree, labels: np.ndarray):
        self.tree = tree
        self.parent = tree.parent_array
        self.indptr, self.indices = tree.children_csr
        self.labels = labels.astype(bool).copy()

        n = tree.node_count
        tails, heads = tree.edge_arrays
        self.d0 = np.bincount(tails[~self.labels[heads]], minlength=n).astype(np.int64)
        self.p = np.zeros(n, dtype=np.int64)
        self.p[heads] = self.labels[tails]

    def kids(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def set_label(self, u: int, value: bool) -> None:
        if self.labels[u] == value:
            return
        self.labels[u] = value
        parent = self.parent[u]
        if parent >= 0:
            self.d0[parent] += -1 if value else 1
        self.p[self.kids(u)] = 1 if value else 0

    def placement_gain(self) -> np.ndarray:
        """Influence gained by labelling each node 1, given the current labels."""
        return self.d0 - self.p

    def delta_row(self, v: int) -> np.ndarray:
        """``Δ(v, u)`` for every node ``u`` under the current labels."""
        row = self.d0 - self.p + self.p[v]
        row[self.kids(v)] += 1
        parent = self.parent[v]
        if parent >= 0:
            row[parent] += 1 - self.p[v]
        return row


def try_switch(
    tree: DirectedTree,
    labels: Sequence[int],
    rng: np.random.Generator,
    moves: Optional[List[SwitchMove]] = None,
) -> Labelling:
    """
    Apply improving switches until none is left.

    The 1-nodes are scanned by increasing id. For the first ``v`` whose best
    ``Δ(v, u)`` over the 0-nodes exceeds ``d0(v)``, one of the maximizing
    ``u`` is chosen uniformly at random, the switch is applied and the scan
    restarts. Every accepted switch raises the influence, so at most ``n - 1``
    switches happen.

    When ``moves`` is given, every accepted switch is appended to it in order.
    """
    state = _SwitchState(tree, label_array(tree, labels))
    accepted = 0
    improved = True
    while improved:
        improved = False
        zero_mask = ~state.labels
        if not zero_mask.any():
            break
        for v in np.flatnonzero(state.labels):
            row = state.delta_row(int(v))
            best = row[zero_mask].max()
            if best > state.d0[v]:
                candidates = np.flatnonzero(zero_mask & (row == best))
                u = int(rng.choice(candidates))
                logger.debug("switch %d -> %d gains %d", v, u, best - state.d0[v])
                state.set_label(int(v), False)
                state.set_label(u, True)
                accepted += 1
                if moves is not None:
                    moves.append(SwitchMove(from_node=int(v), to_node=u, delta=int(best - state.d0[v])))
                improved = True
                break
    logger.debug("try_switch accepted %d switches", accepted)
    return to_labelling(state.labels.astype(int))


def greedy_placement(tree: DirectedTree, k: int, rng: np.random.Generator) -> Tuple[Labelling, int]:
    """
    Place ``k`` 1-nodes greedily, then improve the placement with switches.

    Each of the ``k`` picks is drawn uniformly from the unlabelled nodes with
    the largest ``d0(u) - p(u)`` under the labels placed so far; exactly ``k``
    nodes are placed even when late picks gain nothing.

    Returns:
        ``(labels, I_k)``

    Raises:
        InvalidBudgetError: if ``k`` is negative or larger than the tree
    """
    n = tree.node_count
    if not 0 <= k <= n:
        raise InvalidBudgetError(f"budget k={k} must lie in 0..{n}")

    state = _SwitchState(tree, np.zeros(n, dtype=bool))
    for _ in range(k):
        gain = state.placement_gain()
        free = ~state.labels
        best = gain[free].max()
        candidates = np.flatnonzero(free & (gain == best))
        state.set_label(int(rng.choice(candidates)), True)

    labels = try_switch(tree, state.labels.astype(int), rng)
    return labels, influence(tree, labels)


def is_switch_optimal(tree: DirectedTree, labels: Sequence[int]) -> bool:
    """True when no single switch strictly increases the influence."""
    state = _SwitchState(tree, label_array(tree, labels))
    zero_mask = ~state.labels
    if not zero_mask.any():
        return True
    for v in np.flatnonzero(state.labels):
        if state.delta_row(int(v))[zero_mask].max() > state.d0[v]:
            return False
    return True
