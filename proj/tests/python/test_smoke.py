"""Smoke tests for the python bindings: every exposed entry point is called
once with a hand-checkable input."""

import json
import math

import pytest

import hmmident


GOOD = {
    "pi": [0.5, 0.5],
    "A": [[0.9, 0.1], [0.2, 0.8]],
    "B": [[0.8, 0.2], [0.3, 0.7]],
}


def test_version():
    assert hmmident.__version__


def test_krank_identity():
    r = hmmident.krank([[1.0, 0.0], [0.0, 1.0]])
    assert r["value"] == 2
    assert r["certificate"] is None


def test_krank_duplicate_rows():
    r = hmmident.krank([[1.0, 2.0], [1.0, 2.0], [0.0, 1.0]])
    assert r["value"] == 1
    assert r["certificate"] == [0, 1]


def test_rank_and_row_tensor():
    assert hmmident.rank([[1.0, 2.0], [2.0, 4.0]]) == 1
    w = hmmident.row_tensor([[1.0, 2.0]], [[3.0, 4.0]])
    assert w == [[3.0, 4.0, 6.0, 8.0]]
    w2 = hmmident.row_tensor_multi([[[2.0]], [[3.0]], [[5.0]]])
    assert w2 == [[30.0]]
    assert hmmident.kron([[1.0]], [[2.0, 3.0]]) == [[2.0, 3.0]]


def test_stationary_distribution():
    pi = hmmident.stationary_distribution([[0.9, 0.1], [0.3, 0.7]])
    assert pi == pytest.approx([0.75, 0.25], abs=1e-12)


def test_sequence_prob_normalizes():
    total = 0.0
    for y1 in (1, 2):
        for y2 in (1, 2):
            total += hmmident.sequence_prob(GOOD["pi"], GOOD["A"], GOOD["B"],
                                            [y1, y2])
    assert total == pytest.approx(1.0, abs=1e-12)


def test_sequence_prob_multi():
    p = hmmident.sequence_prob_multi(GOOD["pi"], GOOD["A"],
                                     [GOOD["B"], GOOD["B"]], True,
                                     [[1, 1], [2, 2]])
    assert 0.0 < p < 1.0


def test_analyze_single_identifiable():
    v = hmmident.analyze_single(GOOD["pi"], GOOD["A"], GOOD["B"])
    assert v["identifiable"]
    assert v["joint"]["value"] == 2
    assert v["counterexample"] is None


def test_ssh_case_not_identifiable():
    ssh = hmmident.ssh_case(0.1)
    v = hmmident.analyze_single(ssh["pi"], ssh["A"], ssh["B"])
    assert not v["identifiable"]
    assert v["joint"]["value"] == 7
    assert v["factor_Bs"][0]["value"] == 1
    assert v["counterexample"] is not None


def test_ssh_case_multi_heterogeneous():
    ssh = hmmident.ssh_case_multi([0.05, 0.1], False)
    v = hmmident.analyze_multi(ssh["pi"], ssh["A"], ssh["Bs"], False)
    assert v["identifiable"]
    assert v["sum_route"]["fires"]


def test_recombination_equivalent():
    ssh = hmmident.ssh_case(0.1)
    quasi = hmmident.recombination(ssh["pi"], ssh["A"], ssh["B"])
    assert quasi is not None
    assert "recombination" in quasi["provenance"]
    rep = hmmident.equivalent_json(ssh["json"], quasi["json"], max_len=3)
    assert rep["equivalent"]


def test_recombination_absent_for_clean_model():
    assert hmmident.recombination(GOOD["pi"], GOOD["A"], GOOD["B"]) is None


def test_inflate_equivalent():
    quasi = hmmident.inflate(GOOD["pi"], GOOD["A"], GOOD["B"], 3)
    assert len(quasi["pi"]) == 3
    doc = json.dumps({"kind": "hmm", **GOOD})
    rep = hmmident.equivalent_json(doc, quasi["json"], max_len=4,
                                   rel_eps=1e-10)
    assert rep["equivalent"]


def test_analyze_json_and_model_info():
    doc = json.dumps({"kind": "hmm", **GOOD})
    v = hmmident.analyze_json(doc)
    assert v["identifiable"]
    info = hmmident.model_info(doc)
    assert info["kind"] == "hmm"
    assert info["q"] == 2
    assert info["kappas"] == [2]


def test_analyze_schedule():
    sv = hmmident.analyze_schedule([
        (GOOD["A"], GOOD["B"]),
        (GOOD["A"], GOOD["B"]),
    ])
    assert sv["identifiable"]
    assert len(sv["steps"]) == 2


def test_n_star_tables():
    assert hmmident.n_star("single-strong", 7, [3])["n_star"] == 3
    assert hmmident.n_star("single-weak", 7, [3])["n_star"] == 4
    assert hmmident.n_star("homogeneous", 7, [3], m=3)["n_star"] == 1
    assert hmmident.n_star("heterogeneous", 7, [3, 3], m=2)["n_star"] == 1


def test_vandermonde_witness():
    w = hmmident.vandermonde_witness(4, [2], 3, generators=[2, 3])
    assert w["rank"] == 4 and w["achieves_q"]
    w = hmmident.vandermonde_witness(4, [2], 2, generators=[2, 3])
    assert w["rank"] == 3 and not w["achieves_q"]


def test_error_mapping():
    with pytest.raises(ValueError):
        hmmident.krank([])
    with pytest.raises(ValueError):
        hmmident.n_star("nonsense", 7, [3])
    with pytest.raises(ValueError):
        hmmident.vandermonde_witness(4, [2], 3, generators=[2, 4])
    with pytest.raises(ValueError):
        hmmident.analyze_json("not json {")


def test_analyze_file(tmp_path):
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"kind": "hmm", **GOOD}))
    v = hmmident.analyze_file(str(path))
    assert v["identifiable"]


def test_math_cross_check():
    # forward recursion by hand for P(y = (1, 2)) under the small model
    pi, a, b = GOOD["pi"], GOOD["A"], GOOD["B"]
    alpha = [pi[i] * b[i][0] for i in range(2)]
    alpha = [sum(alpha[j] * a[j][i] for j in range(2)) * b[i][1]
             for i in range(2)]
    assert hmmident.sequence_prob(pi, a, b, [1, 2]) == pytest.approx(
        math.fsum(alpha), abs=1e-15)
