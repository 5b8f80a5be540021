#!/usr/bin/env python3
"""
Posetlab CLI Test - verbs, output formats, exit codes and the PosetLab facade
"""

import json
from fractions import Fraction

import pytest

from errors import BadParam
from poset_lab import PosetLab, load_digraph
from posetlab_cli import build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_params_verb(capsys):
    code, out = run(capsys, "params", "--poset", "chain:2", "--no-d")
    assert code == 0
    data = json.loads(out)
    assert (data["e"], data["e_star"], data["d"]) == (1, 1, None)


def test_la_verb(capsys):
    code, out = run(capsys, "la", "--n", "4", "--poset", "chain:3")
    assert code == 0
    data = json.loads(out)
    assert data["size"] == 10
    assert data["witness"]["n"] == 4
    assert len(data["witness"]["codes"]) == 10


def test_size_guard_exits_with_three(capsys):
    code, out = run(capsys, "la", "--n", "9", "--poset", "vee:2")
    assert code == 3
    assert json.loads(out)["type"] == "TooLarge"


def test_invalid_input_exits_with_two(capsys):
    code, out = run(capsys, "free-check", "--poset", "lattice:3", "--family", "full:3")
    assert code == 2
    assert json.loads(out)["type"] == "BadParam"

    code, _ = run(capsys, "container", "--family", "levels:6:3", "--n", "7",
                  "--t", "1", "--r", "1", "--eps", "1/8")
    assert code == 2

    code, _ = run(capsys, "sweep", "--poset", "chain:2")
    assert code == 2


def test_csv_output(capsys):
    code, out = run(capsys, "--format", "csv", "min-copies", "--n", "2", "--poset", "chain:2")
    assert code == 0
    assert out.splitlines() == ["m,min_copies", "0,0", "1,0", "2,0", "3,2", "4,5"]


def test_count_and_free_check_verbs(capsys):
    code, out = run(capsys, "count", "--poset", "vee:2", "--family", "full:2")
    assert code == 0
    assert (json.loads(out)["copies"], json.loads(out)["embeddings"]) == (3, 6)

    code, out = run(capsys, "free-check", "--poset", "chain:2", "--family", "levels:4:2")
    assert json.loads(out)["free"] is True


def test_container_and_verify_round_trip():
    lab = PosetLab(seed=1)
    result = lab.container("levels:6:3", 1, 1, Fraction(1, 8))
    assert result["report"]["structural"]
    report = lab.verify(result, "levels:6:3")
    assert report["accounting"] and report["termination"]


def test_container_verb_reads_a_family_file(capsys, tmp_path):
    path = tmp_path / "family.json"
    path.write_text(json.dumps({"n": 6, "codes": [7, 11, 13, 14]}), encoding="utf-8")
    code, out = run(capsys, "container", "--family", f"@{path}", "--t", "1", "--r", "1",
                    "--eps", "1/8")
    assert code == 0
    assert json.loads(out)["exhausted"]


def test_random_rows_per_seed():
    table = PosetLab().random(8, Fraction(1, 4), "chain:2", seeds=[1, 2])
    assert list(table["seed"]) == [1, 2]
    assert table["exact_flag"].all()
    assert (table["removal_size"] <= table["sample"]).all()


def test_tree_count_on_a_digraph(capsys):
    digraph = json.dumps({"nodes": 4, "edges": [[0, 2], [0, 3], [1, 2], [1, 3]]})
    code, out = run(capsys, "tree-count", "--poset", "chain:2", "--digraph", digraph)
    assert code == 0
    assert json.loads(out)["exact_embeddings"] == "4"


def test_tree_count_needs_a_source():
    with pytest.raises(BadParam):
        PosetLab().tree_count("vee:2")


def test_load_digraph(tmp_path):
    path = tmp_path / "graph.json"
    path.write_text(json.dumps({"nodes": 3, "edges": [[0, 1]]}), encoding="utf-8")
    graph = load_digraph(f"@{path}")
    assert graph.number_of_nodes() == 3
    assert graph.has_edge(0, 1) and not graph.has_edge(1, 0)


def test_lab_reports(tmp_path):
    lab = PosetLab()
    report = lab.create_report("Chain", lab.m_count(4, "chain:2"))
    assert "- **M:** 12" in report
    assert lab.save_report(report, str(tmp_path / "chain")).startswith("Report saved as markdown")


def test_container_accepts_short_t_flag(capsys):
    code, out = run(capsys, "container", "--family", "levels:6:3", "--n", "6",
                    "--t", "1", "--r", "1", "--eps", "1/8")
    assert code == 0
    assert json.loads(out)["t"] == 1

    code, out = run(capsys, "census", "--n", "6", "--t", "1", "--r", "1", "--eps", "1/8",
                    "--trials", "2", "--seed", "3")
    assert code == 0
    assert len(json.loads(out)) == 2


def test_global_flags_after_the_verb(capsys):
    code, out = run(capsys, "min-copies", "--n", "2", "--poset", "chain:2", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["m,min_copies", "0,0", "1,0", "2,0", "3,2", "4,5"]

    first = run(capsys, "random", "--n", "6", "--p", "1/2", "--poset", "chain:2", "--seed", "7")
    again = run(capsys, "--seed", "7", "random", "--n", "6", "--p", "1/2", "--poset", "chain:2")
    assert first[0] == 0
    assert first == again


def test_global_flag_before_the_verb_is_kept():
    args = build_parser().parse_args(["--format", "csv", "--trials", "4", "la", "--n", "3",
                                      "--poset", "chain:2"])
    assert (args.format, args.trials, args.seed) == ("csv", 4, None)
    args = build_parser().parse_args(["la", "--n", "3", "--poset", "chain:2", "--trials", "5"])
    assert (args.format, args.trials) == (None, 5)


def test_la_witness_feeds_free_check(capsys):
    code, out = run(capsys, "la", "--n", "4", "--poset", "vee:2")
    assert code == 0
    witness = json.loads(out)["witness"]
    assert set(witness) == {"n", "codes"}

    code, out = run(capsys, "free-check", "--poset", "vee:2", "--family", json.dumps(witness))
    assert code == 0
    assert json.loads(out)["free"] is True
