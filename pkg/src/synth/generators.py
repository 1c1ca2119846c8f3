"""
Random tree models for the synthetic experiments.
"""
from typing import Callable, Dict, List, Optional

import numpy as np

from src.errors import DomainError
from src.tree.directed_tree import DirectedTree

TreeModel = Callable[[int, np.random.Generator], DirectedTree]


def random_tree(n: int, rng: np.random.Generator) -> DirectedTree:
    """
    Uniform random recursive tree on ``n`` nodes.

    Node ``i`` attaches to a node drawn uniformly from ``0..i-1``; node 0 is
    the root and edges point from parent to child.
    """
    if n < 1:
        raise DomainError(f"a random tree needs n >= 1, got {n}")
    if n == 1:
        return DirectedTree([None])
    attach = rng.integers(0, np.arange(1, n))
    return DirectedTree([None] + attach.tolist())


def random_tree_pruefer(n: int, rng: np.random.Generator) -> DirectedTree:
    """
    Uniform labelled tree on ``n`` nodes decoded from a random Prüfer sequence,
    oriented away from node 0.
    """
    if n < 1:
        raise DomainError(f"a random tree needs n >= 1, got {n}")
    if n <= 2:
        return DirectedTree.path(n)

    sequence = rng.integers(0, n, size=n - 2).tolist()
    degree = [1] * n
    for x in sequence:
        degree[x] += 1
    adjacency: List[List[int]] = [[] for _ in range(n)]
    pointer = 0
    while degree[pointer] != 1:
        pointer += 1
    leaf = pointer
    # linear-time decoding: pointer only moves forward
    for x in sequence:
        adjacency[leaf].append(x)
        adjacency[x].append(leaf)
        degree[x] -= 1
        if x < pointer and degree[x] == 1:
            leaf = x
        else:
            pointer += 1
            while degree[pointer] != 1:
                pointer += 1
            leaf = pointer
    adjacency[leaf].append(n - 1)
    adjacency[n - 1].append(leaf)

    parents: List[Optional[int]] = [None] * n
    seen = [False] * n
    seen[0] = True
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adjacency[v]:
            if not seen[w]:
                seen[w] = True
                parents[w] = v
                stack.append(w)
    return DirectedTree(parents)


def random_tree_fixed_height(n: int, h: int, rng: np.random.Generator) -> DirectedTree:
    """
    Random tree with ``n`` nodes and height exactly ``h``.

    A root-to-leaf path of ``h + 1`` nodes fixes the height; every further
    node attaches to a uniformly chosen existing node of depth at most
    ``h - 1``, so the height is never exceeded.

    Raises:
        DomainError: unless ``1 <= h <= n - 1``
    """
    if not 1 <= h <= n - 1:
        raise DomainError(f"height h={h} is infeasible for n={n} nodes")
    parents: List[Optional[int]] = [None] + list(range(h))
    depth = list(range(h + 1))
    eligible = list(range(h))
    for v in range(h + 1, n):
        p = eligible[int(rng.integers(len(eligible)))]
        parents.append(p)
        depth.append(depth[p] + 1)
        if depth[v] < h:
            eligible.append(v)
    return DirectedTree(parents)


TREE_MODELS: Dict[str, TreeModel] = {
    "recursive": random_tree,
    "pruefer": random_tree_pruefer,
}
