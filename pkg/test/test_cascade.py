"""
Tests for cascade loading, per-cascade metrics and distribution comparison.
"""
import math
import pytest
from pathlib import Path

import numpy as np

# Add the src directory to the Python path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cascade.divergence import common_bin_edges, compare_distributions, kl_divergence
from src.cascade.loader import JsonlCascadeParser, load_cascades, load_trees, write_cascades
from src.cascade.metrics import filter_cascades, per_cascade_metrics, random_baseline, record_rng
from src.errors import (
    CascadeFormatError,
    DivergenceError,
    DuplicateIdError,
    InvalidInputError,
    LabelLengthMismatchError,
    MultipleRootsError,
    PreconditionError,
)
from src.models import CascadeRecord, DistributionKind, InputFormat
from src.optimal.tree_max_influence import optimal_summary
from src.synth.generators import random_tree
from src.tree.directed_tree import DirectedTree
from src.tree.influence import labelling_from_nodes

FIXTURES = Path(__file__).parent / "fixtures"


def _record(cid, tree, nodes):
    return CascadeRecord(id=cid, tree=tree, observed=labelling_from_nodes(tree.node_count, nodes))


def test_load_jsonl_fixture():
    """Both the coordinated-list and the bit-list forms are read."""
    records = load_cascades(FIXTURES / "cascades.jsonl")
    assert [r.id for r in records] == ["star5", "path4"]
    assert records[0].tree == DirectedTree.star(5)
    assert records[0].observed == (1, 0, 0, 0, 0)
    assert records[1].observed == (1, 0, 1, 0)
    assert records[1].k == 2


def test_load_csv_fixture_matches_jsonl():
    """The CSV pair describes the same cascades."""
    from_csv = load_cascades(FIXTURES / "edges.csv", InputFormat.CSV, FIXTURES / "labels.csv")
    from_jsonl = load_cascades(FIXTURES / "cascades.jsonl")
    assert from_csv == from_jsonl


def test_multiple_roots_names_the_record():
    """Tree errors carry the record id and line."""
    with pytest.raises(MultipleRootsError) as exc_info:
        load_cascades(FIXTURES / "two_roots.jsonl")
    assert exc_info.value.record_id == "forest"
    assert exc_info.value.line == 2
    assert "forest" in str(exc_info.value)


def test_malformed_jsonl_records():
    """Parse errors name the offending record."""
    bad_lines = {
        "not json": CascadeFormatError,
        '{"edges": [[0, 1]], "coordinated": []}': CascadeFormatError,
        '{"id": "a", "edges": [[0, 1]]}': CascadeFormatError,
        '{"id": "a", "n": 2, "edges": [[0, 1]], "coordinated": [5]}': LabelLengthMismatchError,
        '{"id": "a", "n": 3, "edges": [[0, 1], [0, 2]], "labels": [1, 0]}': LabelLengthMismatchError,
        '{"id": "a", "edges": [[0, 1], [0, "x"]], "coordinated": []}': CascadeFormatError,
    }
    for line, error in bad_lines.items():
        with pytest.raises(error):
            list(JsonlCascadeParser([line]).records())


def test_duplicate_ids_are_rejected(tmp_path):
    """Two records with one id are an error."""
    path = tmp_path / "dup.jsonl"
    line = '{"id": "x", "edges": [[0, 1]], "coordinated": [0]}\n'
    path.write_text(line + line)
    with pytest.raises(DuplicateIdError):
        load_cascades(path)


def test_missing_file():
    """Unreadable files are input errors."""
    with pytest.raises(InvalidInputError):
        load_cascades(FIXTURES / "missing.jsonl")


def test_write_then_read(tmp_path):
    """Both layouts read back what was written."""
    rng = np.random.default_rng(1)
    records = [_record(f"c{i}", random_tree(12, rng), [0, i]) for i in range(1, 4)]
    write_cascades(records, tmp_path / "out.jsonl")
    assert load_cascades(tmp_path / "out.jsonl") == records
    write_cascades(records, tmp_path / "e.csv", InputFormat.CSV, tmp_path / "l.csv")
    assert load_cascades(tmp_path / "e.csv", InputFormat.CSV, tmp_path / "l.csv") == records


def test_load_trees_allows_unlabelled_records():
    """Tree files need no labels."""
    records = load_trees(FIXTURES / "trees.jsonl")
    assert [r.n for r in records] == [5, 4]
    assert all(r.k == 0 for r in records)
    with pytest.raises(CascadeFormatError):
        load_trees(FIXTURES / "empty_tree.jsonl")


def test_filter_thresholds():
    """Small cascades and cascades without 1-nodes are removed."""
    records = [
        _record("small", DirectedTree.star(14), [0, 1, 2]),
        _record("boundary", DirectedTree.star(15), [3]),
        _record("silent", DirectedTree.path(9066), []),
    ]
    kept, report = filter_cascades(records)
    assert [r.id for r in kept] == ["boundary"]
    assert (report.total, report.kept, report.removed_too_small, report.removed_no_coordinated) == (3, 1, 1, 1)


def test_metrics_of_leaf_labelled_star():
    """One labelled leaf reaches nothing; greedy takes the root."""
    record = _record("s", DirectedTree.star(15), [4])
    metrics = per_cascade_metrics(record, record_rng(record, 0))
    assert (metrics.I_obs, metrics.I_star, metrics.k_star, metrics.I_k) == (0, 14, 1, 14)
    assert metrics.rho == 0 and metrics.rho_k == 0


def test_metrics_of_optimal_observation():
    """An observed optimum has rho = 1."""
    tree = random_tree(30, np.random.default_rng(4))
    best = optimal_summary(tree)
    record = _record("opt", tree, best.one_nodes)
    metrics = per_cascade_metrics(record, record_rng(record, 0))
    assert metrics.rho == 1.0
    assert metrics.k_obs == best.k
    assert metrics.rho_k >= 1.0


def test_metrics_guard_zero_optimum():
    """A single node has no optimum to compare with."""
    record = _record("one", DirectedTree([None]), [0])
    with pytest.raises(PreconditionError):
        per_cascade_metrics(record, np.random.default_rng(0))


def test_random_baseline():
    """Mean influence of random placements."""
    star = _record("s", DirectedTree.star(10), [0])
    mean = random_baseline(star, 20000, np.random.default_rng(0))
    assert mean == pytest.approx(9 * (1 / 10), abs=0.1)

    full = _record("f", DirectedTree.path(6), range(6))
    assert random_baseline(full, 5, np.random.default_rng(0)) == 0

    a = random_baseline(star, 10, record_rng(star, 3))
    b = random_baseline(star, 10, record_rng(star, 3))
    assert a == b

    with pytest.raises(PreconditionError):
        random_baseline(_record("z", DirectedTree.star(4), []), 5)


def test_record_rng_depends_on_content_not_id():
    """Renaming a cascade keeps its random stream."""
    tree = random_tree(20, np.random.default_rng(5))
    a = _record("a", tree, [1, 2])
    b = _record("b", tree, [1, 2])
    assert record_rng(a, 7).integers(1 << 30) == record_rng(b, 7).integers(1 << 30)


def test_kl_closed_forms():
    """D(p||p) = 0 and D((1,0)||(.5,.5)) = log 2."""
    p = [0.2, 0.3, 0.5]
    assert kl_divergence(p, p) == 0.0
    assert abs(kl_divergence([1, 0], [0.5, 0.5]) - math.log(2)) <= 1e-12
    assert kl_divergence([3, 1], [1, 3]) > 0


def test_kl_smooths_empty_baseline_bins():
    """Mass where the baseline has none gives a large but finite divergence."""
    value = kl_divergence([1, 0], [0, 1], smoothing=1e-4)
    assert math.isfinite(value)
    assert value > 5


def test_kl_rejects_bad_inputs():
    """Mismatched, empty or negative inputs are refused."""
    with pytest.raises(DivergenceError):
        kl_divergence([1, 0], [1])
    with pytest.raises(DivergenceError):
        kl_divergence([], [])
    with pytest.raises(DivergenceError):
        kl_divergence([1, -1], [1, 1])
    with pytest.raises(DivergenceError):
        kl_divergence([1], [1], smoothing=0)


def test_common_bin_edges():
    """Unit bins cover the integer support; fixed bins span the range."""
    assert common_bin_edges([0, 3, 1.5]).tolist() == [0.0, 1.0, 2.0, 3.0, 4.0]
    assert common_bin_edges([0.0, 1.0], bins=4).tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]


def test_compare_distributions_orders_baselines():
    """Observed values shaped like the random baseline are closer to it."""
    real = [1, 2, 2, 3, 3, 3, 4]
    random = [1, 2, 3, 3, 4, 2, 3]
    greedy = [9, 10, 10, 11, 9, 10, 11]
    comparison = compare_distributions(real, greedy, random)
    assert comparison.kl_real_vs_random < comparison.kl_real_vs_greedy
    assert comparison.kind == DistributionKind.INFLUENCE
    assert comparison.log_base == "e"
    assert comparison.bin_edges[0] == 1.0

    rho = compare_distributions([0.1, 0.2], [0.9, 1.0], [0.1, 0.3], kind=DistributionKind.RHO)
    assert len(rho.bin_edges) == 21
    with pytest.raises(DivergenceError):
        compare_distributions([], [1], [1])
