import json

import pytest

from fcpc import io
from fcpc.cli import main
from fcpc.errors import InvalidArgs
from fcpc.examples import CASES, load_goldens, run_all_examples, run_case
from fcpc.gf import Word, field_new
from fcpc.partitions import (
    ExplicitPartition,
    Subspace,
    coordinate_partition,
    coset_partition,
    hwdf_partition,
    materialize,
    support_partition,
)

F2, F3, F4 = field_new(2), field_new(3), field_new(4)


# ----------------------------------------------------------------------------
# io


@pytest.mark.parametrize("P", [
    ExplicitPartition(F2, 2, [0, 1, 1, 2]),
    coset_partition(Subspace.span(F3, 3, [[1, 2, 0]])),
    coordinate_partition(F3, 3, [2, 3]),
    support_partition(F4, 2),
    hwdf_partition(7, 3),
    materialize(hwdf_partition(4, 2), F2),
])
def test_partition_roundtrip(P):
    obj = json.loads(io.write_json(io.partition_to_json(P)))
    Q, _ = io.partition_from_json(obj)
    if hasattr(P, "block_of"):
        assert Q.block_of.tolist() == P.block_of.tolist()
    else:
        assert Q == P


def test_kernel_kind_and_errors():
    P, F = io.partition_from_json({"kind": "kernel", "q": 2, "matrices": [[[1, 0, 0]], [[0, 1, 0]]]})
    assert P.E == 4
    with pytest.raises(InvalidArgs):
        io.partition_from_json({"kind": "coset", "basis": [[1, 0]]})
    with pytest.raises(InvalidArgs):
        io.partition_from_json({"kind": "mystery", "q": 2})
    with pytest.raises(InvalidArgs):
        io.field_from_json({"q": 4, "modulus": [1, 0, 1]})


def test_word_forms():
    assert io.word_from_json(F3, "012").digits == (0, 1, 2)
    assert io.word_from_json(F3, [2, 1]).digits == (2, 1)
    w = Word.from_rank(F3, 3, 14)
    assert io.word_from_json(F3, io.word_to_json(w, as_rank=True)) == w
    assert io.word_from_json(F3, 14, k=3) == w
    with pytest.raises(InvalidArgs):
        io.word_from_json(F3, 14)


# ----------------------------------------------------------------------------
# cli


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def dump(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_cli_pipeline(tmp_path, capsys):
    code, out = run(capsys, "partition", "--kind", "support", "--q", "2", "--k", "3")
    assert code == 0
    part = dump(tmp_path, "p.json", json.loads(out))
    code, out = run(capsys, "encode", "--partition", part, "--t", "1")
    assert code == 0
    res = json.loads(out)
    assert res["certificate"]["r"] == 3 and res["certificate"]["exact"]
    enc = dump(tmp_path, "e.json", res)
    assert run(capsys, "verify", "--partition", part, "--encoding", enc)[0] == 0
    # break the encoding: all-zero redundancy
    bad = res["encoding"]
    bad["rule"]["code"] = ["000"] * len(bad["rule"]["code"])
    code, out = run(capsys, "verify", "--partition", part, "--encoding", dump(tmp_path, "b.json", bad))
    assert code == 1 and json.loads(out)["ok"] is False
    code, out = run(capsys, "decode", "--partition", part, "--encoding", enc, "--word", "100101")
    assert code == 0 and "block" in json.loads(out)


def test_cli_matrices_and_search(tmp_path, capsys):
    part = dump(tmp_path, "w.json", {"kind": "grouped-weight", "k": 3, "groups": [[0], [1], [2], [3]]})
    code, out = run(capsys, "pdrm", "--partition", part, "--t", "2", "--q", "3")
    D = json.loads(out)
    assert D["entries"][0] == [0, 4, 3, 2]
    code, out = run(capsys, "pdrm", "--partition", part, "--t", "2", "--format", "csv")
    assert out.splitlines()[0] == "0,4,3,2"
    mat = dump(tmp_path, "d.json", D)
    code, out = run(capsys, "dcode", "--matrix", mat, "--q", "3", "--r-start", "3")
    rep = json.loads(out)
    assert code == 0 and rep["r_min"] == 4 and rep["status"] == "Exact"
    code, out = run(capsys, "dcode", "--matrix", mat, "--q", "3", "--budget", "0")
    assert code == 2


def test_cli_misc(tmp_path, capsys):
    code, out = run(capsys, "bounds", "--family", "support", "--q", "3", "--k", "3", "--t", "2")
    assert code == 0 and json.loads(out)["lower"] == 5
    code, out = run(capsys, "gains", "--individual", "4", "4", "--r", "4", "--k", "35", "--t", "2", "--n-full", "46")
    res = json.loads(out)
    assert res["redundancy_gain"] == "2" and res["rate_gain"] == "4/39"
    assert res["join_bounds"]["upper"] == 8
    a = dump(tmp_path, "a.json", {"kind": "grouped-weight", "k": 35, "groups": hwdf_groups(35, 6)})
    b = dump(tmp_path, "b.json", {"kind": "grouped-weight", "k": 35, "groups": hwdf_groups(35, 9)})
    code, out = run(capsys, "join", "--a", a, "--b", b)
    assert len(json.loads(out)["groups"]) == 8
    p = dump(tmp_path, "c.json", {"kind": "coordinate", "q": 3, "k": 3, "J": [2, 3]})
    code, out = run(capsys, "clique", "--partition", p)
    assert json.loads(out)["size"] == 9
    code, out = run(capsys, "contraction", "--partition", p, "--rule", "mask", "--J", "[2,3]")
    assert code == 0 and json.loads(out)["ok"]
    code, out = run(capsys, "locally-bounded", "--partition", a, "--rho", "2", "--lam", "2")
    assert json.loads(out)["locally_bounded"] is True
    code, out = run(capsys, "pdm", "--partition", p, "--t", "1")
    assert json.loads(out)["n"] == 9
    code, out = run(capsys, "partition", "--spec", p, "--format", "dot")
    assert out.startswith("graph")


def hwdf_groups(k, T):
    return [list(g) for g in hwdf_partition(k, T).groups]


def test_cli_usage_and_domain_errors(tmp_path, capsys):
    assert main([]) == 64
    assert main(["nosuch"]) == 64
    assert main(["pdrm", "--partition", "/nonexistent.json", "--t", "1"]) == 64
    bad = dump(tmp_path, "x.json", {"kind": "explicit", "q": 6, "k": 1, "block_of": [0] * 6})
    assert main(["pdm", "--partition", bad, "--t", "1"]) == 1
    capsys.readouterr()


def test_cli_example(capsys):
    code, out = run(capsys, "example", "ex4")
    assert code == 0 and json.loads(out)["status"] == "PASS"
    assert main(["example", "nope"]) == 64
    code, out = run(capsys, "example", "--all")
    assert code == 0 and json.loads(out)["status"] == "PASS"


# ----------------------------------------------------------------------------
# example runner


def test_goldens_have_provenance():
    gold = load_goldens()
    assert set(gold) == set(CASES)
    for case in gold.values():
        for entry in case.values():
            assert entry["provenance"] in ("published", "derived", "trivial")


def test_all_examples_pass():
    rep = run_all_examples()
    assert rep["status"] == "PASS", [c for c in rep["cases"] if c["status"] != "PASS"]


def test_budget_zero_is_reported():
    rep = run_all_examples(budget=0)
    assert rep["status"] == "BUDGET-EXCEEDED"


def test_corrupted_golden_is_caught():
    gold = load_goldens()
    gold["ex4"]["joint_r"]["value"] = 2
    res = run_case("ex4", goldens=gold)
    assert res.status == "FAIL"
    assert res.diffs == [{"key": "joint_r", "expected": 2, "got": 3}]
