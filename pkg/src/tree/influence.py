"""
Labellings of a directed tree and the influence functional.

The influence of a labelling is the number of directed edges that go from a
1-node to a 0-node.
"""
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

from src.errors import DomainError, InvalidInputError
from src.tree.directed_tree import DirectedTree

Labelling = Tuple[int, ...]


def label_array(tree: DirectedTree, labels: Sequence[int]) -> np.ndarray:
    """
    Validate a labelling against a tree and return it as a boolean array.

    Raises:
        InvalidInputError: if the length differs from the tree size or an
            entry is not 0/1
    """
    arr = np.asarray(labels)
    if arr.ndim != 1 or arr.shape[0] != tree.node_count:
        raise InvalidInputError(
            f"labelling has {arr.size} entries but the tree has {tree.node_count} nodes"
        )
    if arr.dtype != bool and not np.all((arr == 0) | (arr == 1)):
        raise InvalidInputError("labels must be 0 or 1")
    return arr.astype(bool)


def to_labelling(labels: Iterable[int]) -> Labelling:
    """Normalize any 0/1 sequence (list, tuple, numpy array) to a tuple of ints."""
    return tuple(int(x) for x in labels)


def labelling_from_nodes(n: int, one_nodes: Iterable[int]) -> Labelling:
    """Labelling of size ``n`` whose 1-nodes are exactly ``one_nodes``."""
    bits = [0] * n
    for v in one_nodes:
        if not 0 <= v < n:
            raise InvalidInputError(f"node {v} is outside 0..{n - 1}")
        bits[v] = 1
    return tuple(bits)


def one_nodes(labels: Sequence[int]) -> Tuple[int, ...]:
    """Ids of the 1-nodes, increasing."""
    return tuple(v for v, bit in enumerate(labels) if bit)


def cardinality(labels: Sequence[int]) -> int:
    """Number of 1-nodes."""
    return int(sum(1 for bit in labels if bit))


def influence(tree: DirectedTree, labels: Sequence[int]) -> int:
    """
    Count the directed edges from a 1-node to a 0-node.

    Raises:
        InvalidInputError: if the labelling does not match the tree
    """
    lab = label_array(tree, labels)
    tails, heads = tree.edge_arrays
    return int(np.count_nonzero(lab[tails] & ~lab[heads]))


def degree_stats(tree: DirectedTree, labels: Sequence[int], v: int) -> Tuple[int, int, int]:
    """
    Neighbourhood counts of node ``v``.

    Returns:
        ``(d0, d1, p)``: children labelled 0, children labelled 1, and 1 if
        the parent of ``v`` is a 1-node (0 for the root)
    """
    lab = label_array(tree, labels)
    kids = tree.children(v)
    d1 = int(sum(1 for w in kids if lab[w]))
    parent = tree.parent(v)
    p = 1 if parent is not None and lab[parent] else 0
    return len(kids) - d1, d1, p


def edge_mix_counts(tree: DirectedTree, labels: Sequence[int]) -> Tuple[int, int]:
    """
    Count edges leaving 1-nodes by the label of their head.

    Returns:
        ``(m10, m11)``; ``m10`` always equals the influence
    """
    lab = label_array(tree, labels)
    tails, heads = tree.edge_arrays
    from_one = lab[tails]
    m11 = int(np.count_nonzero(from_one & lab[heads]))
    return int(np.count_nonzero(from_one)) - m11, m11


def bounds(tree: Union[DirectedTree, int]) -> Tuple[int, int, int, int]:
    """
    Range of the optimal influence and of the optimal number of 1-nodes.

    Returns:
        ``(I_low, I_high, k_low, k_high)`` = ``(n//2, n-1, 1, n//2)``

    Raises:
        DomainError: for trees with fewer than two nodes
    """
    n = tree.node_count if isinstance(tree, DirectedTree) else int(tree)
    if n < 2:
        raise DomainError(f"influence bounds are stated for n >= 2, got n={n}")
    return n // 2, n - 1, 1, n // 2


def edge_mix_block(tree: DirectedTree, block: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    ``(m10, m11)`` for many labellings at once.

    Args:
        block: boolean matrix with one labelling per row

    Returns:
        two integer arrays with one entry per row
    """
    tails, heads = tree.edge_arrays
    from_one = block[:, tails]
    m11 = np.count_nonzero(from_one & block[:, heads], axis=1)
    return np.count_nonzero(from_one, axis=1) - m11, m11
