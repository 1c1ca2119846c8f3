"""
Rooted directed tree with edges oriented from the root towards the leaves.
"""
from collections import deque
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import (
    CycleError,
    InvalidInputError,
    InvalidTreeError,
    MissingRootError,
    MultipleParentsError,
    MultipleRootsError,
)


class DirectedTree:
    """
    Immutable rooted tree over the dense node ids ``0..n-1``.

    The tree is described by its parent array; ``None`` marks the root. Child
    lists keep the order in which the children were given (increasing child id
    when built from a parent array, edge order when built from an edge list).
    """

    def __init__(self, parents: Sequence[Optional[int]], children: Optional[Sequence[Sequence[int]]] = None):
        """
        Build and validate a tree.

        Args:
            parents: parent id of every node, ``None`` for the root
            children: optional child lists in the desired order; derived from
                ``parents`` when omitted

        Raises:
            InvalidTreeError: if ``parents`` does not describe a rooted tree
        """
        n = len(parents)
        if n < 1:
            raise InvalidTreeError("a tree needs at least one node")

        roots = []
        for v, p in enumerate(parents):
            if p is None:
                roots.append(v)
            elif not isinstance(p, (int, np.integer)) or isinstance(p, bool) or not 0 <= p < n:
                raise InvalidInputError(f"node {v} has invalid parent id {p!r}")
            elif p == v:
                raise CycleError(f"node {v} is its own parent")
        if not roots:
            raise MissingRootError("every node has a parent (no root)")
        if len(roots) > 1:
            raise MultipleRootsError(f"multiple roots: {roots[:10]}")

        self._parents: Tuple[Optional[int], ...] = tuple(None if p is None else int(p) for p in parents)
        self._root = roots[0]

        if children is None:
            built: List[List[int]] = [[] for _ in range(n)]
            for v, p in enumerate(self._parents):
                if p is not None:
                    built[p].append(v)
            self._children = tuple(tuple(c) for c in built)
        else:
            self._children = tuple(tuple(int(w) for w in c) for c in children)
            self._check_children_consistent()

        self._order = self._breadth_first_order()

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "DirectedTree":
        """
        Build a tree from ``(parent, child)`` pairs over nodes ``0..n-1``.

        Raises:
            InvalidTreeError: for out-of-range ids, a node with two parents,
                no root, several roots, or a cycle
        """
        if n < 1:
            raise InvalidTreeError(f"a tree needs at least one node, got n={n}")
        parents: List[Optional[int]] = [None] * n
        children: List[List[int]] = [[] for _ in range(n)]
        for u, w in edges:
            for x in (u, w):
                if not isinstance(x, (int, np.integer)) or isinstance(x, bool) or not 0 <= x < n:
                    raise InvalidInputError(f"edge ({u}, {w}) has a node id outside 0..{n - 1}")
            if u == w:
                raise CycleError(f"self-loop on node {u}")
            if parents[w] is not None:
                raise MultipleParentsError(f"node {w} has two parents: {parents[w]} and {u}")
            parents[w] = int(u)
            children[u].append(int(w))
        return cls(parents, children)

    @classmethod
    def star(cls, n: int) -> "DirectedTree":
        """Root 0 with ``n - 1`` leaf children."""
        if n < 1:
            raise InvalidTreeError(f"a tree needs at least one node, got n={n}")
        return cls([None] + [0] * (n - 1))

    @classmethod
    def path(cls, n: int) -> "DirectedTree":
        """Directed path ``0 -> 1 -> ... -> n-1``."""
        if n < 1:
            raise InvalidTreeError(f"a tree needs at least one node, got n={n}")
        return cls([None] + list(range(n - 1)))

    def _check_children_consistent(self) -> None:
        if len(self._children) != len(self._parents):
            raise InvalidTreeError("children and parents describe different node counts")
        seen = 0
        for v, kids in enumerate(self._children):
            for w in kids:
                if not 0 <= w < len(self._parents) or self._parents[w] != v:
                    raise InvalidTreeError(f"child list of node {v} disagrees with parent of node {w}")
                seen += 1
        if seen != len(self._parents) - 1:
            raise InvalidTreeError("child lists do not contain every non-root node exactly once")

    def _breadth_first_order(self) -> Tuple[int, ...]:
        order = [self._root]
        queue = deque(order)
        while queue:
            v = queue.popleft()
            kids = self._children[v]
            order.extend(kids)
            queue.extend(kids)
        if len(order) != len(self._parents):
            unreachable = sorted(set(range(len(self._parents))) - set(order))
            raise CycleError(f"nodes {unreachable[:10]} are not reachable from the root (cycle)")
        return tuple(order)

    @property
    def node_count(self) -> int:
        return len(self._parents)

    @property
    def root(self) -> int:
        return self._root

    @property
    def parents(self) -> Tuple[Optional[int], ...]:
        return self._parents

    @property
    def order(self) -> Tuple[int, ...]:
        """Breadth-first order from the root; every parent precedes its children."""
        return self._order

    def parent(self, v: int) -> Optional[int]:
        self._check_node(v)
        return self._parents[v]

    def children(self, v: int) -> Tuple[int, ...]:
        self._check_node(v)
        return self._children[v]

    def out_degree(self, v: int) -> int:
        return len(self.children(v))

    def is_leaf(self, v: int) -> bool:
        return not self.children(v)

    def edges(self) -> List[Tuple[int, int]]:
        """Directed edges ``(parent, child)`` in breadth-first order."""
        return [(self._parents[w], w) for w in self._order[1:]]

    @cached_property
    def edge_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """Tails and heads of all edges as integer arrays."""
        heads = np.fromiter(self._order[1:], dtype=np.intp, count=self.node_count - 1)
        return self.parent_array[heads], heads

    @cached_property
    def parent_array(self) -> np.ndarray:
        """Parent ids as an integer array, ``-1`` for the root."""
        return np.fromiter((-1 if p is None else p for p in self._parents), dtype=np.intp, count=self.node_count)

    @cached_property
    def children_csr(self) -> Tuple[np.ndarray, np.ndarray]:
        """Child lists in compressed form: children of ``v`` are ``indices[indptr[v]:indptr[v+1]]``."""
        counts = np.fromiter((len(c) for c in self._children), dtype=np.intp, count=self.node_count)
        indptr = np.zeros(self.node_count + 1, dtype=np.intp)
        np.cumsum(counts, out=indptr[1:])
        indices = np.fromiter((w for c in self._children for w in c), dtype=np.intp, count=self.node_count - 1)
        return indptr, indices

    @cached_property
    def depths(self) -> Tuple[int, ...]:
        depth = [0] * self.node_count
        for v in self._order[1:]:
            depth[v] = depth[self._parents[v]] + 1
        return tuple(depth)

    def height(self) -> int:
        """Number of edges on the longest root-to-leaf path."""
        return max(self.depths)

    def relabel(self, permutation: Sequence[int]) -> "DirectedTree":
        """
        Return the isomorphic tree in which node ``v`` is renamed ``permutation[v]``.

        Child order is carried over.
        """
        n = self.node_count
        if sorted(permutation) != list(range(n)):
            raise InvalidInputError("relabelling must be a permutation of 0..n-1")
        parents: List[Optional[int]] = [None] * n
        children: List[List[int]] = [[] for _ in range(n)]
        for v in range(n):
            p = self._parents[v]
            parents[permutation[v]] = None if p is None else permutation[p]
            children[permutation[v]] = [permutation[w] for w in self._children[v]]
        return DirectedTree(parents, children)

    def _check_node(self, v: int) -> None:
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 0 <= v < len(self._parents):
            raise InvalidInputError(f"invalid node id {v!r} for a tree with {len(self._parents)} nodes")

    def __len__(self) -> int:
        return self.node_count

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedTree):
            return NotImplemented
        return self._parents == other._parents and self._children == other._children

    def __hash__(self) -> int:
        return hash((self._parents, self._children))

    def __repr__(self) -> str:
        return f"DirectedTree(n={self.node_count}, root={self._root})"
