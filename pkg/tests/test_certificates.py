import copy
import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from biregular.certificates import certificate_check
from biregular.errors import CertificateSchemaError
from biregular.generate import random_biregular, random_instance
from biregular.inequality import InequalityInstance, report
from biregular.involution import solve_4parts, solve_balls
from biregular.matching import LoopGraph, max_bipartite_matching, perfect_matching_with_loops
from biregular.model import WeightMatrix, canonical_json


def involution_cert(n=3, k=4, seed=0):
    return solve_balls(random_instance(n, k, seed))[1]


def bijection_cert(seed=0):
    rng = random.Random(seed)
    g1 = random_biregular(2, 4, 6, 3, rng)
    g2 = random_biregular(3, 6, 4, 2, rng)
    return solve_4parts(g1, g2)[1]


def star_obstruction():
    g = LoopGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    theta, cert = perfect_matching_with_loops(g)
    assert theta is None
    return cert


def deficient_cert():
    res = max_bipartite_matching(WeightMatrix.of([[1, 0, 0], [1, 0, 0], [0, 1, 1]]))
    assert not res.covers_left
    return res.certificate


def bip_matching_cert():
    return max_bipartite_matching(WeightMatrix.of([[1, 1], [1, 0]])).certificate


def loop_matching_cert():
    g = LoopGraph.from_edges(3, [(0, 1)], loops=[2])
    theta, cert = perfect_matching_with_loops(g)
    assert theta is not None
    return cert


def inequality_cert():
    return report(InequalityInstance([[0, 1, 1], [1, 0, 1], [1, 1, 0]], [(0, 0), (1, 1), (2, 2)]))


ALL = [involution_cert, bijection_cert, star_obstruction, deficient_cert, bip_matching_cert,
       loop_matching_cert, inequality_cert]


@pytest.mark.parametrize("make", ALL)
def test_valid_certificates(make, tmp_path):
    cert = make()
    assert certificate_check(cert) is True
    text = canonical_json(cert)
    assert certificate_check(text) is True
    path = tmp_path / "c.json"
    path.write_text(text)
    assert certificate_check(path) is True
    assert certificate_check(str(path)) is True


def test_star_obstruction_contents():
    cert = star_obstruction()
    assert cert["removed"] == [0]
    assert sorted(map(sorted, cert["odd_components"])) == [[1], [2], [3]]


def test_deficient_contents():
    cert = deficient_cert()
    assert sorted(cert["subset"]) == [0, 1]


@given(st.integers(0, 200), st.integers(0, 10 ** 6))
def test_involution_single_index_mutation(seed, pick):
    cert = involution_cert(2, 3, seed)
    size = len(cert["involution"])
    e = pick % size
    new = (cert["involution"][e] + 1 + pick // size % (size - 1)) % size
    bad = copy.deepcopy(cert)
    bad["involution"][e] = new
    assert certificate_check(bad) is False


def test_involution_other_mutations():
    cert = involution_cert()
    bad = copy.deepcopy(cert)
    bad["involution"][0] = len(bad["involution"])
    assert certificate_check(bad) is False
    bad = copy.deepcopy(cert)
    bad["involution"] = bad["involution"][:-1]
    assert certificate_check(bad) is False
    bad = copy.deepcopy(cert)
    bad["instance"]["edges"][0][1] = (bad["instance"]["edges"][0][1] + 1) % bad["instance"]["k"]
    assert certificate_check(bad) is False


def test_involution_identity_is_not_enough():
    cert = involution_cert(2, 2, 1)
    bad = copy.deepcopy(cert)
    bad["involution"] = list(range(4))
    edges = bad["instance"]["edges"]
    valid_identity = sorted(map(tuple, edges)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert certificate_check(bad) is valid_identity


def test_bijection_mutations():
    cert = bijection_cert(3)
    for e in range(len(cert["psi"])):
        bad = copy.deepcopy(cert)
        bad["psi"][e] = bad["psi"][(e + 1) % len(bad["psi"])]
        assert certificate_check(bad) is False


def test_matching_mutations():
    cert = bip_matching_cert()
    bad = copy.deepcopy(cert)
    bad["mate"][0] = bad["mate"][1]
    assert certificate_check(bad) is False
    cert = loop_matching_cert()
    bad = copy.deepcopy(cert)
    bad["mate"][2] = 0
    assert certificate_check(bad) is False
    bad = copy.deepcopy(cert)
    bad["mate"] = [1, 0, 5]
    assert certificate_check(bad) is False


def test_deficient_mutations():
    cert = deficient_cert()
    bad = copy.deepcopy(cert)
    bad["subset"] = [2]
    assert certificate_check(bad) is False
    bad["subset"] = [0, 0]
    assert certificate_check(bad) is False


def test_tutte_mutations():
    cert = star_obstruction()
    bad = copy.deepcopy(cert)
    bad["removed"] = []
    assert certificate_check(bad) is False
    bad = copy.deepcopy(cert)
    bad["odd_components"] = bad["odd_components"][:1]
    assert certificate_check(bad) is False
    bad = copy.deepcopy(cert)
    bad["graph"]["adjacency"][1][1] = 1
    assert certificate_check(bad) is False


def test_inequality_mutations():
    cert = inequality_cert()
    for field, value in [("lhs", "7/1"), ("rhs", "9/1"), ("violated", True)]:
        bad = dict(cert, **{field: value})
        assert certificate_check(bad) is False
    assert certificate_check(dict(cert, cells=[[0, 0], [1, 1]])) is False
    assert certificate_check(dict(cert, cells=[[0, 1]])) is False


@pytest.mark.parametrize("doc", [
    "{not json",
    "[1, 2]",
    {"kind": "nonsense"},
    {"no": "kind"},
    {"kind": "involution"},
    {"kind": "involution", "instance": {"n": 1, "k": 1, "edges": [[0]]}, "involution": [0]},
    {"kind": "involution", "instance": {"n": 1, "k": 1, "edges": [[0, 0]]}, "involution": ["0"]},
    {"kind": "matching", "bipartite": False, "graph": {"vertices": 1}, "mate": [0]},
    {"kind": "inequality", "matrix": [[0]], "cells": [[0, 0]], "lhs": "x", "rhs": "0", "violated": False},
])
def test_schema_errors(doc):
    with pytest.raises(CertificateSchemaError):
        certificate_check(doc if isinstance(doc, str) else json.dumps(doc))


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        certificate_check("/nonexistent/cert.json")
