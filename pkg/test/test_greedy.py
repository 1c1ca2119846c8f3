"""
Tests for switch moves and greedy placement.
"""
import pytest
from pathlib import Path

import numpy as np

# Add the src directory to the Python path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.errors import InvalidBudgetError, InvalidMoveError
from src.greedy.placement import delta, greedy_placement, is_switch_optimal, switch_move, try_switch
from src.optimal.tree_max_influence import tree_max_influence
from src.oracle.enumerator import enumerate_fixed_k
from src.synth.generators import random_tree
from src.tree.directed_tree import DirectedTree
from src.tree.influence import cardinality, influence


def _switched(labels, v, w):
    after = list(labels)
    after[v], after[w] = 0, 1
    return after


def test_delta_examples():
    """Test the gain term on the documented cases."""
    star = DirectedTree.star(5)
    assert delta(star, (1, 0, 0, 0, 0), 0, 3) == 0
    assert switch_move(star, (1, 0, 0, 0, 0), 0, 3).delta == -4

    path = DirectedTree.path(4)
    assert delta(path, (1, 0, 0, 0), 0, 2) == 1
    move = switch_move(path, (1, 0, 0, 0), 0, 2)
    assert (move.from_node, move.to_node, move.delta) == (0, 2, 0)


def test_delta_rejects_invalid_moves():
    """v must be a 1-node and w a different 0-node."""
    star = DirectedTree.star(5)
    with pytest.raises(InvalidMoveError):
        delta(star, (1, 0, 0, 0, 0), 1, 2)
    with pytest.raises(InvalidMoveError):
        delta(star, (1, 1, 0, 0, 0), 0, 1)
    with pytest.raises(InvalidMoveError):
        delta(star, (1, 0, 0, 0, 0), 0, 0)


def test_switch_gain_matches_recount():
    """influence(after) - influence(before) == Δ - d0(v) on 10^4 random cases, adjacent pairs included."""
    rng = np.random.default_rng(7)
    adjacent = 0
    cases = 0
    while cases < 10 ** 4:
        n = int(rng.integers(2, 16))
        tree = random_tree(n, rng)
        labels = rng.integers(0, 2, size=n).tolist()
        ones = [v for v in range(n) if labels[v]]
        zeros = [v for v in range(n) if not labels[v]]
        if not ones or not zeros:
            continue
        v = int(rng.choice(ones))
        w = int(rng.choice(zeros))
        if tree.parents[v] == w or tree.parents[w] == v:
            adjacent += 1
        d0_v = sum(1 for u in tree.children(v) if not labels[u])
        change = influence(tree, _switched(labels, v, w)) - influence(tree, labels)
        assert change == delta(tree, labels, v, w) - d0_v
        cases += 1
    assert adjacent > 0


def test_delta_row_agrees_with_scalar_delta():
    """The vectorized gain row used by the search equals the scalar term."""
    from src.greedy.placement import _SwitchState

    rng = np.random.default_rng(8)
    for _ in range(200):
        n = int(rng.integers(2, 20))
        tree = random_tree(n, rng)
        labels = rng.integers(0, 2, size=n)
        state = _SwitchState(tree, labels.astype(bool))
        for v in np.flatnonzero(labels):
            row = state.delta_row(int(v))
            for w in np.flatnonzero(labels == 0):
                assert row[w] == delta(tree, labels.tolist(), int(v), int(w))


def test_try_switch_moves_leaf_label_to_root():
    """A labelled leaf of a star hands its label to the root."""
    star = DirectedTree.star(5)
    rng = np.random.default_rng(0)
    result = try_switch(star, (0, 0, 1, 0, 0), rng)
    assert result == (1, 0, 0, 0, 0)
    assert influence(star, result) == 4


def test_try_switch_keeps_local_optimum():
    """No single switch improves a middle node of a path."""
    path = DirectedTree.path(4)
    result = try_switch(path, (0, 1, 0, 0), np.random.default_rng(0))
    assert influence(path, result) == 1
    assert cardinality(result) == 1


def test_try_switch_is_idempotent():
    """Running the search twice changes nothing the second time."""
    rng = np.random.default_rng(9)
    for _ in range(100):
        n = int(rng.integers(2, 30))
        tree = random_tree(n, rng)
        labels = rng.integers(0, 2, size=n).tolist()
        once = try_switch(tree, labels, rng)
        assert influence(tree, once) >= influence(tree, labels)
        assert cardinality(once) == cardinality(labels)
        assert is_switch_optimal(tree, once)
        assert try_switch(tree, once, rng) == once


def test_try_switch_records_strictly_improving_moves():
    """Every recorded switch raises the influence by its delta, and there are at most n - 1 of them."""
    rng = np.random.default_rng(21)
    for _ in range(200):
        n = int(rng.integers(2, 40))
        tree = random_tree(n, rng)
        labels = rng.integers(0, 2, size=n).tolist()
        moves = []
        result = try_switch(tree, labels, rng, moves=moves)
        assert len(moves) <= n - 1
        current = list(labels)
        for move in moves:
            assert move.delta > 0
            assert current[move.from_node] == 1 and current[move.to_node] == 0
            after = _switched(current, move.from_node, move.to_node)
            assert influence(tree, after) - influence(tree, current) == move.delta
            current = after
        assert tuple(current) == result


def test_greedy_examples():
    """Test small budgets on the star."""
    star = DirectedTree.star(5)
    labels, i_k = greedy_placement(star, 0, np.random.default_rng(1))
    assert labels == (0,) * 5 and i_k == 0
    labels, i_k = greedy_placement(star, 1, np.random.default_rng(1))
    assert labels == (1, 0, 0, 0, 0) and i_k == 4


def test_greedy_rejects_bad_budget():
    """k must lie in 0..n."""
    with pytest.raises(InvalidBudgetError):
        greedy_placement(DirectedTree.star(3), 4, np.random.default_rng(0))
    with pytest.raises(InvalidBudgetError):
        greedy_placement(DirectedTree.star(3), -1, np.random.default_rng(0))


def test_greedy_is_deterministic_under_seed():
    """Same seed, same placement."""
    tree = random_tree(60, np.random.default_rng(4))
    a = greedy_placement(tree, 7, np.random.default_rng(12))
    b = greedy_placement(tree, 7, np.random.default_rng(12))
    assert a == b


def test_greedy_never_beats_exhaustive_fixed_k():
    """I_k is bounded by the best size-k labelling and by I* on 200 small trees."""
    rng = np.random.default_rng(10)
    equal = 0
    total = 0
    for _ in range(200):
        n = int(rng.integers(2, 13))
        tree = random_tree(n, rng)
        i_star = tree_max_influence(tree)[0]
        for k in range(0, min(4, n) + 1):
            labels, i_k = greedy_placement(tree, k, rng)
            assert cardinality(labels) == k
            best_k, _ = enumerate_fixed_k(tree, k)
            assert i_k <= best_k <= i_star
            equal += i_k == best_k
            total += 1
    print(f"greedy matched the exhaustive size-k optimum in {equal}/{total} cases ({equal / total:.1%})")
    assert equal >= total // 2
