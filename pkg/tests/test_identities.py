from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from areamoments.identities import (
    IdentityReport,
    check_comb1,
    check_comb2,
    check_comb3,
    check_comb4,
    check_comb5,
    comb3_raw,
    comb3_regrouped_terms,
    run_sweep,
)
from areamoments.walk_oracle import SizeError


def test_comb1_examples():
    r = check_comb1(1, (0, 0), 2)
    assert r.lhs == r.rhs == 3
    for a0 in range(4):
        for B in range(4):
            r = check_comb1(0, (a0,), B)
            assert r.passed
    assert check_comb1(2, (1, 2, 0), 3).passed
    with pytest.raises(ValueError):
        check_comb1(2, (1, 1), 1)


def test_comb2_examples():
    assert check_comb2(0, 2).lhs == check_comb2(0, 2).rhs == 6
    assert check_comb2(1, 1).lhs == 6
    assert check_comb2(3, 2).passed


def test_comb3_examples():
    for k, n in [(1, 1), (2, 2), (3, 4)]:
        r = check_comb3(k, n)
        assert r.lhs == 0 and r.passed


def test_comb3_lower_edge_of_domain():
    # k <= 2 n2 < 2k: some reciprocal factorials vanish, the sum still does
    for k in range(1, 7):
        for n in range((k + 1) // 2, k):
            assert check_comb3(k, n).passed


def test_comb3_nonzero_below_domain():
    assert comb3_raw(3, 1) == -2
    assert comb3_raw(6, 2) == 30
    for k in range(1, 7):
        for n in range(0, (k + 1) // 2):
            with pytest.raises(ValueError):
                check_comb3(k, n)


@pytest.mark.parametrize("k", range(1, 6))
def test_comb3_regrouping_term_by_term(k):
    for n in range(0, 7):
        for n0, (raw, closed) in comb3_regrouped_terms(k, n).items():
            assert raw == closed, (k, n, n0)


def test_comb4_examples():
    assert check_comb4(1, 1).lhs == check_comb4(1, 1).rhs == 2
    assert check_comb4(2, 1).lhs == 4
    assert check_comb4(1, 0).lhs == 0 and check_comb4(1, 0).passed


def test_comb5_examples():
    assert check_comb5(2, 1).lhs == check_comb5(2, 1).rhs == -2
    r = check_comb5(3, 1)
    assert r.passed and r.rhs == -2
    assert check_comb5(2, 0).lhs == 0 and check_comb5(2, 0).passed


def test_randomized_indices():
    rng = random.Random(7)
    for _ in range(25):
        k = rng.randint(1, 5)
        n = rng.randint(0, 4)
        assert check_comb4(k, n, i=rng.randint(1, k)).passed
        if k >= 2:
            i, j = rng.sample(range(1, k + 1), 2)
            assert check_comb5(k, n, i=i, j=j).passed


def test_index_validation():
    with pytest.raises(ValueError):
        check_comb4(2, 1, i=3)
    with pytest.raises(ValueError):
        check_comb5(3, 1, i=2, j=2)
    with pytest.raises(ValueError):
        check_comb5(1, 1)


def test_size_guard():
    with pytest.raises(SizeError):
        check_comb2(2, 11)


def test_sweep_defaults():
    reports = run_sweep()
    assert len(reports) >= 200
    assert all(r.passed for r in reports)
    assert {r.identity_name for r in reports} == {"comb1", "comb2", "comb3", "comb4", "comb5"}


def test_sweep_edges():
    assert run_sweep(-1, -1) == []
    small = run_sweep(1, 1)
    assert len(small) >= 5 and all(r.passed for r in small)


def test_report_json():
    r = IdentityReport("demo", (1, 2), Fraction(1, 2), Fraction(1, 2))
    obj = r.to_json_obj()
    assert obj == {"name": "demo", "params": [1, 2], "lhs": "1/2", "rhs": "1/2", "pass": True}
    json.dumps(obj)
    assert not IdentityReport("demo", (), Fraction(1), Fraction(2)).passed
