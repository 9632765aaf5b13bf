import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from biregular.certificates import certificate_check
from biregular.errors import BudgetExceeded, PreconditionError
from biregular.generate import random_bnk, random_instance
from biregular.inequality import InequalityInstance, inequality_sides
from biregular.matching import LoopGraph
from biregular.model import LabeledBigraph, WeightMatrix, canonical_json, enumerate_bnk, instance_from_matrix
from biregular.oracles import (brute_force_involution, brute_force_loop_matching, conjecture_campaign, cut_size,
                               direct_cut_count, tutte_condition_holds, verify_equivalence_direction,
                               verify_higgins, verify_weak_balls)

from helpers import is_all_ones, loop_adjacency


def _zeros(B):
    return [(x, y) for x in range(B.rows) for y in range(B.cols) if B[x, y] == 0]


def test_brute_force_small_examples():
    g = LabeledBigraph(1, 1, ((0, 0),))
    assert brute_force_involution(g).map == (0,)
    g = LabeledBigraph(2, 2, ((0, 0), (0, 0), (1, 1), (1, 1)))
    iota = brute_force_involution(g)
    assert is_all_ones([g.u[iota(e)] for e in range(4)], g.v, 2, 2)


def test_brute_force_rejects_and_budget():
    with pytest.raises(PreconditionError):
        brute_force_involution(LabeledBigraph(2, 2, ((0, 0), (0, 1), (1, 0))))
    with pytest.raises(BudgetExceeded):
        brute_force_involution(random_instance(3, 6, 0), max_edges=16)


def test_brute_force_whole_b23():
    for B in enumerate_bnk(2, 3):
        g = instance_from_matrix(B)
        iota = brute_force_involution(g)
        assert iota is not None
        assert all(iota(iota(e)) == e for e in range(len(g)))
        assert is_all_ones([g.u[iota(e)] for e in range(len(g))], g.v, 2, 3)


def test_weak_balls_examples():
    ok, cert = verify_weak_balls(WeightMatrix.of([[2, 0], [0, 2]]))
    assert ok and cert["kind"] == "matching" and certificate_check(cert)
    with pytest.raises(PreconditionError):
        verify_weak_balls(WeightMatrix.of([[1, 0], [0, 2]]))


def test_higgins_examples():
    verdict, cert = verify_higgins(WeightMatrix.of([[1, 0], [0, 0]]))
    assert verdict == "vacuous" and cert["kind"] == "deficient-set" and certificate_check(cert)
    verdict, cert = verify_higgins(WeightMatrix.of([[1, 0], [0, 1]]))
    assert verdict == "holds" and certificate_check(cert)
    with pytest.raises(PreconditionError):
        verify_higgins(WeightMatrix.of([[2]]))


def test_higgins_all_binary_3x3():
    seen = {"vacuous": 0, "holds": 0}
    for bits in range(1 << 9):
        M = WeightMatrix.of([[bits >> (3 * r + c) & 1 for c in range(3)] for r in range(3)])
        verdict, cert = verify_higgins(M)
        assert verdict != "counterexample"
        assert certificate_check(cert)
        seen[verdict] += 1
    assert seen["vacuous"] and seen["holds"]


def test_equivalence_direction():
    for n, k in [(2, 2), (2, 3)]:
        for B in enumerate_bnk(n, k):
            assert verify_equivalence_direction(B)
    assert verify_equivalence_direction(random_bnk(3, 4, random.Random(5)))


def test_cut_size_single_cell_is_nk():
    for B in enumerate_bnk(3, 3):
        for cell in _zeros(B):
            assert cut_size(B, [cell]) == 9


def test_cut_size_matches_direct_count_and_inequality():
    for n, k in [(2, 3), (3, 3)]:
        for B in enumerate_bnk(n, k):
            zeros = _zeros(B)
            for t in range(1, min(len(zeros), 5) + 1, 2):
                for cells in combinations(zeros, t):
                    c = cut_size(B, cells)
                    assert c == direct_cut_count(B, cells)
                    lhs, rhs = inequality_sides(InequalityInstance(B.data, cells))
                    assert (lhs <= rhs) == (c >= n * k)


def test_cut_size_preconditions():
    with pytest.raises(PreconditionError):
        cut_size(WeightMatrix.of([[0, 1], [1, 1]]), [(0, 0)])
    with pytest.raises(PreconditionError):
        cut_size(WeightMatrix.of([[2, 0], [0, 2]]), [(0, 0)])


@given(loop_adjacency(max_size=7))
def test_loop_matching_oracles_agree(adj):
    g = LoopGraph(len(adj), tuple(map(tuple, adj)))
    mate = brute_force_loop_matching(g)
    assert (mate is not None) == tutte_condition_holds(g)
    if mate is not None:
        assert all(mate[mate[v]] == v and (mate[v] != v or g.has_loop(v)) for v in range(g.size))


def test_campaign_trivial():
    out = conjecture_campaign([(1, 1)])
    assert out["summary"]["instances"] == 1 and out["summary"]["all_passed"]
    rec = out["records"][0]
    assert rec["weak_balls"] and rec["higgins"] == "holds" and rec["brute_force"] is True
    assert rec["solve_balls"] is True and rec["agree"]


def test_campaign_small_ranges():
    out = conjecture_campaign([(2, 2), (2, 3)], seed=3)
    s = out["summary"]
    assert s["instances"] == 10 and s["all_passed"] and s["budget_skips"] == 0
    assert [r["index"] for r in out["records"]] == [0, 1, 2, 0, 1, 2, 3, 4, 5, 6]


def test_campaign_deterministic_and_parallel():
    a = conjecture_campaign([(2, 2), (2, 3), (3, 3)], seed=11)
    b = conjecture_campaign([(2, 2), (2, 3), (3, 3)], seed=11)
    assert canonical_json(a) == canonical_json(b)
    c = conjecture_campaign([(2, 2), (2, 3), (3, 3)], seed=11, workers=2)
    assert canonical_json(a) == canonical_json(c)


def test_campaign_budgets():
    out = conjecture_campaign([(3, 4)], budgets={"max_edges": 8, "max_matrices": 20})
    s = out["summary"]
    assert s["truncated"] == [{"n": 3, "k": 4, "enumerated": 20}]
    assert s["instances"] == 20 and s["budget_skips"] == 20
    out = conjecture_campaign([(3, 3)], budgets={"max_edges": 8})
    assert out["summary"]["budget_skips"] == 55 and out["summary"]["all_passed"]
