"""
Tests for the command-line interface.
"""
import csv
import io
import json
import pytest
from pathlib import Path

import numpy as np

# Add the src directory to the Python path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cascade.loader import write_cascades
from src.cli import generate_tree, main
from src.errors import InvalidInputError
from src.models import CascadeRecord
from src.synth.generators import random_tree
from src.tree.directed_tree import DirectedTree
from src.tree.influence import labelling_from_nodes

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep environment overrides out of the tests unless a test sets them."""
    for name in ("SEED", "OUTPUT_FORMAT", "MIN_NODES", "MAX_COMBINATIONS", "MAX_ENUM_NODES"):
        monkeypatch.delenv(f"CASCADE_INFLUENCE_{name}", raising=False)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_generate_tree_specs():
    """Generator specs build the expected shapes."""
    assert generate_tree("star:5", 0) == DirectedTree.star(5)
    assert generate_tree("path:4", 0) == DirectedTree.path(4)
    assert generate_tree("random:30:7", 0) == generate_tree("random:30", 7)
    assert generate_tree("height:20:5:1", 0).height() == 5
    assert generate_tree("pruefer:12:3", 0).node_count == 12
    for bad in ("star", "cycle:5", "star:5:1", "height:10", "random:5:1:2"):
        with pytest.raises(InvalidInputError):
            generate_tree(bad, 0)


def test_optimal_on_tree_file(capsys):
    """star5 -> (4, 1) and path4 -> (2, 2)."""
    code, out, _ = run(capsys, "optimal", "--tree", str(FIXTURES / "trees.jsonl"))
    assert code == 0
    payload = json.loads(out)
    assert payload["seed"] == 0
    results = {r["id"]: (r["influence"], r["k"]) for r in payload["results"]}
    assert results == {"star5": (4, 1), "path4": (2, 2)}


def test_optimal_csv_with_verification(capsys):
    """CSV rows carry the seed; the exhaustive check agrees."""
    code, out, _ = run(capsys, "optimal", "--generate", "star:5", "--generate", "random:12:3",
                       "--verify", "--format", "csv", "--seed", "5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0] == {"id": "star:5", "n": "5", "influence": "4", "k": "1", "one_nodes": "0", "seed": "5"}
    assert len(rows) == 2


def test_verification_guard_exits_3(capsys):
    """Enumeration beyond the node limit is refused."""
    code, _, err = run(capsys, "optimal", "--generate", "path:10", "--verify", "--max-enum", "5")
    assert code == 3
    assert "Error:" in err


def test_empty_tree_file_exits_2(capsys):
    """A zero-node tree is an input error."""
    code, out, err = run(capsys, "optimal", "--tree", str(FIXTURES / "empty_tree.jsonl"))
    assert code == 2
    assert out == ""
    assert "Error:" in err and "empty" in err


def test_usage_errors_exit_1():
    """Bad flags and missing subcommands are usage errors."""
    with pytest.raises(SystemExit) as exc_info:
        main(["optimal"])
    assert exc_info.value.code == 1
    with pytest.raises(SystemExit) as exc_info:
        main(["greedy", "--generate", "star:5"])
    assert exc_info.value.code == 1
    with pytest.raises(SystemExit) as exc_info:
        main([])
    assert exc_info.value.code == 1


def test_greedy_command(capsys):
    """k=1 on a star takes the root; k=0 places nothing; output is reproducible."""
    code, out, _ = run(capsys, "greedy", "--generate", "star:5", "--k", "1")
    assert code == 0
    result = json.loads(out)["results"][0]
    assert (result["influence"], result["one_nodes"]) == (4, [0])

    _, out, _ = run(capsys, "greedy", "--generate", "star:5", "--k", "0")
    assert json.loads(out)["results"][0]["influence"] == 0

    _, first, _ = run(capsys, "greedy", "--generate", "random:80:2", "--k", "6", "--seed", "9")
    _, second, _ = run(capsys, "greedy", "--generate", "random:80:2", "--k", "6", "--seed", "9")
    assert first == second

    code, _, _ = run(capsys, "greedy", "--generate", "star:5", "--k", "6")
    assert code == 2


def test_phase_command(capsys):
    """Histogram rows for one label on a star."""
    code, out, _ = run(capsys, "phase", "--generate", "star:5", "--k", "1", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["m10,m11,count,seed", "0,0,4,0", "4,0,1,0"]


def test_phase_defaults_to_optimal_budget(capsys):
    """With k = k* the largest m10 equals I*."""
    _, optimal_out, _ = run(capsys, "optimal", "--generate", "random:14:4")
    report = json.loads(optimal_out)["results"][0]
    code, out, _ = run(capsys, "phase", "--generate", "random:14:4")
    assert code == 0
    payload = json.loads(out)
    assert payload["k"] == report["k"]
    assert payload["max_influence"] == report["influence"]
    assert max(cell[0] for cell in payload["cells"]) == report["influence"]


def test_phase_guards(capsys):
    """Too many combinations exit 3; several trees are refused."""
    code, _, _ = run(capsys, "phase", "--generate", "star:5", "--k", "2", "--max-combinations", "9")
    assert code == 3
    code, _, _ = run(capsys, "phase", "--tree", str(FIXTURES / "trees.jsonl"))
    assert code == 2


def test_simulate_vs_n(capsys, tmp_path):
    """Curve CSV plus a summary file with the fits and the seed."""
    summary = tmp_path / "summary.json"
    code, out, _ = run(capsys, "simulate", "--n-min", "5", "--n-max", "9", "--replicates", "3",
                       "--format", "csv", "--seed", "2", "--summary", str(summary))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["x"]) for r in rows] == [5, 6, 7, 8, 9]
    assert set(rows[0]) == {"x", "mean_I", "sd_I", "mean_k", "sd_k", "replicates", "seed"}
    data = json.loads(summary.read_text())
    assert data["seed"] == 2
    assert data["fit_I_star"]["degenerate"] is False
    assert "points" not in data

    _, again, _ = run(capsys, "simulate", "--n-min", "5", "--n-max", "9", "--replicates", "3",
                      "--format", "csv", "--seed", "2")
    assert again == out


def test_simulate_single_point_is_flagged(capsys):
    """One size and one replicate give a degenerate fit, not a failure."""
    code, out, _ = run(capsys, "simulate", "--n-min", "10", "--n-max", "10", "--replicates", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload["fit_I_star"]["degenerate"] is True
    assert payload["points"][0]["sd_I_star"] == 0


def test_simulate_vs_height(capsys):
    """Height sweep reports the trend."""
    code, out, _ = run(capsys, "simulate", "--mode", "vs-height", "--n", "12", "--replicates", "2")
    assert code == 0
    payload = json.loads(out)
    assert [p["x"] for p in payload["points"]] == list(range(1, 12))
    assert payload["points"][0]["mean_I_star"] == 11
    assert payload["points"][-1]["mean_I_star"] == 6
    assert "spearman_rho" in payload["trend"]


def _cascade_file(path, count=20):
    rng = np.random.default_rng(0)
    records = []
    for i in range(count):
        tree = random_tree(20, rng)
        nodes = rng.choice(20, size=3, replace=False).tolist()
        records.append(CascadeRecord(id=f"c{i:02d}", tree=tree, observed=labelling_from_nodes(20, nodes)))
    write_cascades(records, path)
    return records


def test_analyze_command(capsys, tmp_path):
    """Twenty cascades give twenty metric rows; the comparison echoes the seed."""
    cascades = tmp_path / "cascades.jsonl"
    _cascade_file(cascades)
    comparison = tmp_path / "comparison.json"
    code, out, _ = run(capsys, "analyze", str(cascades), "--format", "csv", "--seed", "11",
                       "--comparison-output", str(comparison))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 20
    assert all(r["seed"] == "11" for r in rows)
    assert all(0 <= float(r["rho"]) <= 1 for r in rows)
    data = json.loads(comparison.read_text())
    assert data["seed"] == 11
    assert data["filter"]["kept"] == 20
    assert data["comparison"]["log_base"] == "e"


def test_analyze_honours_thresholds_and_environment(capsys, tmp_path, monkeypatch):
    """--min-nodes filters, and the seed can come from the environment."""
    cascades = tmp_path / "cascades.jsonl"
    _cascade_file(cascades, count=4)
    monkeypatch.setenv("CASCADE_INFLUENCE_SEED", "13")
    code, out, _ = run(capsys, "analyze", str(cascades), "--min-nodes", "21")
    assert code == 0
    payload = json.loads(out)
    assert payload["seed"] == 13
    assert payload["filter"]["removed_too_small"] == 4
    assert payload["metrics"] == []


def test_analyze_skips_all_coordinated_cascade(capsys, tmp_path):
    """An all-coordinated star among valid cascades does not abort the run."""
    cascades = tmp_path / "cascades.jsonl"
    records = _cascade_file(cascades, count=5)
    records.append(CascadeRecord(id="allbots", tree=DirectedTree.star(15), observed=(1,) * 15))
    write_cascades(records, cascades)
    code, out, _ = run(capsys, "analyze", str(cascades))
    assert code == 0
    payload = json.loads(out)
    assert payload["filter"]["removed_undefined_ratio"] == 1
    assert len(payload["metrics"]) == 5


def test_analyze_csv_layout(capsys):
    """The edges/labels pair is accepted."""
    code, out, _ = run(capsys, "analyze", str(FIXTURES / "edges.csv"), "--input-format", "csv",
                       "--labels", str(FIXTURES / "labels.csv"), "--min-nodes", "2")
    assert code == 0
    assert json.loads(out)["filter"]["kept"] == 2


def test_analyze_bad_record_exits_2(capsys):
    """Malformed cascades are reported with their id."""
    code, _, err = run(capsys, "analyze", str(FIXTURES / "two_roots.jsonl"))
    assert code == 2
    assert "forest" in err


def test_output_file(capsys, tmp_path):
    """--output writes to a file instead of stdout."""
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "optimal", "--generate", "path:6", "--output", str(target))
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["results"][0]["influence"] == 3
