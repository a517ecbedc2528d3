import json
import subprocess

import pytest

import polyhom


def test_standard_model_passes_checks():
    h = polyhom.standard([4], 4, 2)
    assert polyhom.check_axioms(h)["passed"]
    assert polyhom.check_associativity(h)["passed"]
    horns, exactly_one = polyhom.count_horn_fillers(h)
    # C(4,3) configurations * 3 open slots * |G|^2 fillings of the others
    assert horns == 4 * 3 * 16
    assert exactly_one == horns


def test_blind_extraction_on_scrambled_instance():
    for seed in range(5):
        h = polyhom.scramble(polyhom.standard("2,2", 5, 2), seed)
        ext = polyhom.extract(h)
        assert polyhom.iso_check(ext["group"]["invariant_factors"], [2, 2])
        assert polyhom.verify_action(h, ext)["passed"]


def test_verdict_pocket_group():
    v = polyhom.verdict(polyhom.standard(3, 4, 2))
    assert v["passed"]
    assert v["pocket_group"]["order"] == 3


def test_planted_faults_fail():
    h = polyhom.standard(4, 4, 2)
    dup = polyhom.check_axioms(polyhom.plant(h, "horn-duplicate"))
    assert not dup["passed"]
    assert any(c["name"] == "horn-uniqueness" and not c["passed"] for c in dup["checks"])
    assert not polyhom.check_associativity(polyhom.plant(h, "non-associative", 4))["passed"]
    with pytest.raises(ValueError):
        polyhom.plant(h, "nothing")


def test_homology_and_smith_form():
    hollow = [[-1, 0, -1], [1, -1, 0], [0, 1, 1]]
    h1 = polyhom.homology(hollow, {"rows": 3, "cols": 0, "data": []})
    assert h1["free_rank"] == 1 and h1["invariant_factors"] == []
    a = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    s = polyhom.smith_normal_form(a)

    def mul(x, y):
        return [[sum(x[i][k] * y[k][j] for k in range(len(y))) for j in range(len(y[0]))] for i in range(len(x))]

    assert mul(mul(s["U"], a), s["V"]) == s["D"]
    assert [s["D"][i][i] for i in range(3)] == [2, 6, 12]


def test_tower_limit():
    t = polyhom.standard_tower([8, 4, 2], 4, 2)
    assert polyhom.check_tower(t)["passed"]
    assert polyhom.iso_check(polyhom.inverse_limit(t)["invariant_factors"], [8])


def test_bad_input_raises():
    with pytest.raises(ValueError):
        polyhom.check_axioms("{not json")
    with pytest.raises(ValueError):
        polyhom.check_axioms({"arity": "two"})


def test_quick_selftest():
    results = polyhom.selftest(quick=True, only=[1, 3, 9])
    assert [r["id"] for r in results] == [1, 3, 9]
    assert all(r["passed"] for r in results)
