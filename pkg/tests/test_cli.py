import json

import pytest

from pitkit.cli import main
from pitkit.corpus import f2_identity
from pitkit.hitting import hitting_set_size

F101 = '{"kind":"prime","p":"101"}'


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def lines(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


@pytest.fixture
def f2_file(tmp_path):
    return write(tmp_path, "f2.json", f2_identity().to_json())


@pytest.fixture
def square_file(tmp_path):
    doc = {"field": {"kind": "prime", "p": "101"}, "n": 2, "d": 2, "k": 1,
           "terms": [{"scalar": "1", "forms": [["1", "0"], ["1", "0"]]}]}
    return write(tmp_path, "square.json", doc)


@pytest.mark.parametrize("mode", ["hitting", "whitebox", "random", "expand"])
def test_test_command_zero_exits_0(f2_file, capsys, mode):
    assert main(["test", f2_file, "--mode", mode]) == 0
    doc = lines(capsys.readouterr().out)[0]
    assert doc["verdict"] == "zero"


@pytest.mark.parametrize("mode", ["hitting", "whitebox", "random", "expand"])
def test_test_command_nonzero_exits_1(square_file, capsys, mode):
    assert main(["test", square_file, "--mode", mode]) == 1
    doc = lines(capsys.readouterr().out)[0]
    assert doc["verdict"] == "nonzero"
    assert set(doc) >= {"verdict", "witness", "points_evaluated", "elapsed_ms"}


def test_hitting_mode_reports_full_point_count(f2_file, capsys):
    main(["test", f2_file])
    assert lines(capsys.readouterr().out)[0]["points_evaluated"] == 999


def test_homogenize_flag(tmp_path, capsys):
    # (x + 1) * (x - 1) - x*x + 1 is zero as an affine polynomial
    doc = {"field": {"kind": "prime", "p": "101"}, "n": 1, "d": 2, "k": 3, "terms": [
        {"scalar": "1", "forms": [["1", "1"], ["-1", "1"]]},
        {"scalar": "-1", "forms": [["0", "1"], ["0", "1"]]},
        {"scalar": "1", "forms": [["1", "0"], ["1", "0"]]},
    ]}
    path = write(tmp_path, "affine.json", doc)
    assert main(["test", path, "--homogenize", "--mode", "expand"]) == 0
    assert main(["test", path, "--homogenize"]) == 0


def test_hitting_set_streams_json_lines(capsys):
    assert main(["hitting-set", "--k", "2", "--d", "3", "--n", "4", "--field", F101]) == 0
    pts = lines(capsys.readouterr().out)
    assert len(pts) == hitting_set_size(2, 3, 4) == 784
    assert set(pts[0]) == {"beta", "gamma", "delta"}
    assert len(pts[0]["gamma"]) == 2 and len(pts[0]["delta"]) == 4


def test_hitting_set_limit_and_out(tmp_path, capsys):
    out = tmp_path / "pts.jsonl"
    assert main(["--out", str(out), "hitting-set", "--k", "1", "--d", "1", "--n", "2", "--field", F101,
                 "--limit", "3"]) == 0
    assert capsys.readouterr().out == ""
    assert len(lines(out.read_text())) == 3


def test_hitting_set_lifts_small_field(capsys):
    assert main(["hitting-set", "--k", "3", "--d", "2", "--n", "2", "--field", '{"kind":"prime","p":"2"}',
                 "--limit", "2"]) == 0
    assert len(lines(capsys.readouterr().out)) == 2


def test_hitting_set_requires_field(capsys):
    assert main(["hitting-set", "--k", "1", "--d", "1", "--n", "1"]) == 2
    assert "--field" in capsys.readouterr().err


def test_reduce_single_beta(square_file, capsys):
    assert main(["reduce", square_file, "--beta", "3"]) == 0
    doc = lines(capsys.readouterr().out)[0]
    # x1 maps to 3*y1, so x1^2 becomes (3 y1)^2 in one variable
    assert doc["n"] == 1 and doc["terms"][0]["forms"] == [["3"], ["3"]]


def test_reduce_family(f2_file, capsys):
    assert main(["reduce", f2_file, "--family"]) == 0
    docs = lines(capsys.readouterr().out)
    assert len(docs) == 2 * 2 * 9 + 1
    assert all(d["n"] == 3 for d in docs)


def test_certify_nonzero_exits_1(square_file, capsys):
    assert main(["certify", square_file]) == 1
    doc = lines(capsys.readouterr().out)[0]
    assert doc["verified"] is True


def test_certify_zero_exits_0(f2_file, capsys):
    assert main(["certify", f2_file]) == 0
    assert "zero" in capsys.readouterr().err


def test_corpus_is_deterministic(capsys):
    assert main(["--seed", "1", "corpus", "--count", "10"]) == 0
    first = capsys.readouterr().out
    assert main(["corpus", "--count", "10", "--seed", "1"]) == 0
    assert capsys.readouterr().out == first
    assert len(lines(first)) == 10


def test_corpus_rejects_bad_range(capsys):
    assert main(["corpus", "--k-range", "3:1"]) == 2


def test_suite_from_file(tmp_path, capsys):
    out = tmp_path / "corpus.jsonl"
    main(["corpus", "--count", "15", "--seed", "2", "--out", str(out)])
    assert main(["suite", str(out), "--modes", "hitting,whitebox,expand"]) == 0
    summary = lines(capsys.readouterr().out)[0]["summary"]
    assert summary["circuits"] == 15 and summary["all_agree"]


def test_suite_disagreement_exits_3(tmp_path, capsys):
    doc = {"circuit": f2_identity().to_json(), "label": "nonzero", "construction": "mislabeled"}
    path = tmp_path / "bad.jsonl"
    path.write_text(json.dumps(doc) + "\n")
    assert main(["suite", str(path)]) == 3


def test_suite_rejects_unlabeled_entries(tmp_path, capsys):
    path = tmp_path / "unlabeled.jsonl"
    path.write_text(json.dumps({"circuit": f2_identity().to_json()}) + "\n")
    assert main(["suite", str(path)]) == 2


def test_suite_rejects_unknown_modes(capsys):
    assert main(["suite", "--modes", "hitting,psychic", "--count", "1"]) == 2


def test_bench_json_and_csv(capsys):
    assert main(["bench", "--k", "2", "--d", "2", "--n", "3", "--budget", "100", "--field", F101]) == 0
    doc = lines(capsys.readouterr().out)[0]
    assert doc["points"] == 100 and len(doc["sha256"]) == 64
    assert main(["bench", "--k", "1", "--d", "1", "--n", "1", "--budget", "0", "--field", F101, "--csv"]) == 0
    header, row = capsys.readouterr().out.strip().splitlines()
    assert header.startswith("k,d,n,field") and ",0," in row


@pytest.mark.parametrize("argv", [["test"], ["bench", "--k", "1"], ["frobnicate"], ["test", "x", "--mode", "guess"]])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_malformed_inputs_exit_2(tmp_path, capsys):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    assert main(["test", str(bad_json)]) == 2
    assert main(["test", str(tmp_path / "missing.json")]) == 2
    zero_form = {"field": {"kind": "prime", "p": "5"}, "n": 1, "d": 1, "k": 1,
                 "terms": [{"scalar": "1", "forms": [["0"]]}]}
    assert main(["test", write(tmp_path, "zf.json", zero_form)]) == 2
    assert main(["hitting-set", "--k", "1", "--d", "1", "--n", "1", "--field", "{oops"]) == 2
