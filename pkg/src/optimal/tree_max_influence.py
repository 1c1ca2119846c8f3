"""
Exact optimum of the influence with an unbounded number of 1-nodes.

``tree_max_influence`` runs the linear-time post-order dynamic program and
returns an optimal labelling; ``clear_one_nodes`` removes redundant 1-nodes
from it so that the optimum is reached with as few 1-nodes as possible.
"""
import logging
from typing import List, Optional, Sequence, Tuple

from src.errors import PreconditionError
from src.models import DpAnnotation, InfluenceReport
from src.tree.directed_tree import DirectedTree
from src.tree.influence import Labelling, cardinality, influence, label_array, one_nodes

logger = logging.getLogger(__name__)


def tree_max_influence(tree: DirectedTree) -> Tuple[int, Labelling, DpAnnotation]:
    """
    Compute the maximum influence of a tree.

    Children are visited before their parent (reverse breadth-first order),
    so no recursion is needed. A node becomes a 1-node iff
    ``mi_yes > mi_no``, i.e. iff at least one child ends up a 0-node; a child
    whose two values tie counts as a 0-child.

    Args:
        tree: the tree to label

    Returns:
        ``(I_star, labels, annotation)``
    """
    n = tree.node_count
    parents = tree.parents
    mi_no = [0] * n
    mi_yes = [0] * n
    zero_children = [0] * n
    labels = [0] * n

    for v in reversed(tree.order):
        zeros = zero_children[v]
        best = mi_no[v] + zeros
        mi_yes[v] = best
        if zeros:
            labels[v] = 1
        p = parents[v]
        if p is not None:
            # max(mi_yes, mi_no) is always mi_yes; ties count towards the parent's 0-children
            mi_no[p] += best
            if not zeros:
                zero_children[p] += 1

    i_star = mi_yes[tree.root]
    return i_star, tuple(labels), DpAnnotation.model_construct(mi_yes=mi_yes, mi_no=mi_no)


def clear_one_nodes(tree: DirectedTree, labels: Sequence[int]) -> Labelling:
    """
    Turn an optimal labelling into an optimal labelling with the fewest 1-nodes.

    Two rules are applied first. The root rule: when the root has no
    0-children and every child is a 1-node of out-degree one whose single
    child is a 0-node, the root takes the label and its children drop it.
    The scan rule: walking the 1-nodes by increasing id, a 1-node whose
    0-children count equals its parent indicator contributes nothing and is
    relabelled 0.

    The rules do not reach the minimum on every tree, so the result is
    checked against a lexicographic dynamic program (most influence, then
    fewest 1-nodes, then fewest changes to the rule output) and replaced by
    that program's labelling when the rules left extra 1-nodes.

    Raises:
        PreconditionError: if ``labels`` is not an optimal labelling of ``tree``
    """
    label_array(tree, labels)
    i_star, _, _ = tree_max_influence(tree)
    observed = influence(tree, labels)
    if observed != i_star:
        raise PreconditionError(
            f"clear_one_nodes needs an optimal labelling: influence {observed}, optimum {i_star}"
        )

    cleared = _apply_root_rule(tree, list(labels))
    cleared = _apply_scan_rule(tree, cleared)

    target_k, minimal = _min_cardinality_labelling(tree, prefer=cleared)
    if cardinality(cleared) > target_k:
        logger.debug(
            "cleaning rules kept %d 1-nodes where %d suffice; using the exact labelling",
            cardinality(cleared), target_k,
        )
        return minimal
    return tuple(cleared)


def optimal_summary(tree: DirectedTree) -> InfluenceReport:
    """Optimal influence, the minimum number of 1-nodes and the 1-nodes themselves."""
    i_star, labels, _ = tree_max_influence(tree)
    best = clear_one_nodes(tree, labels)
    chosen = one_nodes(best)
    return InfluenceReport(n=tree.node_count, influence=i_star, k=len(chosen), one_nodes=list(chosen))


def _zero_children(tree: DirectedTree, labels: List[int], v: int) -> int:
    return sum(1 for w in tree.children(v) if not labels[w])


def _apply_root_rule(tree: DirectedTree, labels: List[int]) -> List[int]:
    r = tree.root
    kids = tree.children(r)
    if not kids or _zero_children(tree, labels, r):
        return labels
    for w in kids:
        if not labels[w] or tree.out_degree(w) != 1 or _zero_children(tree, labels, w) != 1:
            return labels
    labels[r] = 1
    for w in kids:
        labels[w] = 0
    return labels


def _apply_scan_rule(tree: DirectedTree, labels: List[int]) -> List[int]:
    for v in one_nodes(labels):
        parent = tree.parents[v]
        p = 1 if parent is not None and labels[parent] else 0
        if _zero_children(tree, labels, v) == p:
            labels[v] = 0
    return labels


def _min_cardinality_labelling(tree: DirectedTree, prefer: Optional[Sequence[int]] = None) -> Tuple[int, Labelling]:
    """
    Optimal labelling with the fewest 1-nodes.

    Scores are tuples ``(influence, -ones, agreement with prefer)`` compared
    lexicographically; every component is a sum over nodes and edges, so the
    usual two-state tree program is exact for the tuple order.
    """
    n = tree.node_count
    parents = tree.parents
    # best[b][v]: best score of the subtree of v when v has label b
    best = [[(0, 0, 0)] * n, [(0, 0, 0)] * n]
    # choice[b][w]: label of w when its parent has label b
    choice = [[0] * n, [0] * n]

    for v in reversed(tree.order):
        for b in (0, 1):
            i_sum, k_sum, a_sum = 0, -b, 1 if prefer is not None and prefer[v] == b else 0
            for w in tree.children(v):
                zero = best[0][w]
                zero = (zero[0] + b, zero[1], zero[2])
                one = best[1][w]
                if one > zero:
                    choice[b][w] = 1
                    i_sum, k_sum, a_sum = i_sum + one[0], k_sum + one[1], a_sum + one[2]
                else:
                    choice[b][w] = 0
                    i_sum, k_sum, a_sum = i_sum + zero[0], k_sum + zero[1], a_sum + zero[2]
            best[b][v] = (i_sum, k_sum, a_sum)

    r = tree.root
    labels = [0] * n
    labels[r] = 1 if best[1][r] > best[0][r] else 0
    for v in tree.order[1:]:
        labels[v] = choice[labels[parents[v]]][v]
    return -best[labels[r]][r][1], tuple(labels)
