"""Brute-force oracles and conjecture verifiers.

Nothing here trusts the constructive modules: verdicts come from
exhaustive search or from matching engines whose output is re-checked.
"""
from __future__ import annotations

import random
import time
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations

from . import kernels
from .errors import BiregularError, BudgetExceeded, PreconditionError, UncoveredParameters
from .generate import shuffled_instance
from .inequality import _lhs
from .involution import solve_balls
from .matching import LoopGraph, hall_coefficient, max_bipartite_matching, perfect_matching_with_loops
from .model import (Involution, LabeledBigraph, WeightMatrix, bracket_pair, compose_labels,
                    enumerate_bnk, uniform_matrix)
from .tensor import cell_index, symmetric_product

DEFAULT_MAX_EDGES = 16
DEFAULT_NODE_BUDGET = 5_000_000


def brute_force_involution(g: LabeledBigraph, max_edges: int = DEFAULT_MAX_EDGES,
                           node_budget: int = DEFAULT_NODE_BUDGET) -> Involution | None:
    """Some ι with [u∘ι, v] all-ones, or None when none exists."""
    if not g.in_ank():
        raise PreconditionError("instance must be biregular with n*k edges")
    if len(g) > max_edges:
        raise BudgetExceeded(f"{len(g)} edges exceed the exhaustive bound {max_edges}")
    mate = kernels.involution_search(g.u, g.v, g.n, g.k, node_budget)
    if mate is None:
        return None
    iota = Involution(tuple(mate))
    if bracket_pair(compose_labels(g.u, iota), g.v, g.n, g.k) != uniform_matrix(g.n, g.k):
        raise AssertionError("search returned an involution that misses the target")
    return iota


def verify_weak_balls(B: WeightMatrix) -> tuple[bool, dict]:
    """Perfect matching (loops allowed) in the ordinary graph of M⊗Mᵀ."""
    if not B.in_bnk():
        raise PreconditionError("matrix must lie in B(n, k)")
    theta, cert = perfect_matching_with_loops(symmetric_product(B).as_loop_graph())
    cert = dict(cert, matrix=B.to_json())
    return theta is not None, cert


def verify_higgins(M: WeightMatrix) -> tuple[str, dict]:
    """'vacuous' | 'holds' | 'counterexample' for a binary matrix."""
    if not M.is_binary():
        raise PreconditionError("matrix must be binary")
    prod = symmetric_product(M)
    bip = max_bipartite_matching(prod.as_bipartite())
    if not bip.covers_left:
        return "vacuous", dict(bip.certificate, matrix=M.to_json())
    theta, cert = perfect_matching_with_loops(prod.as_loop_graph())
    cert = dict(cert, matrix=M.to_json(), bipartite_matching=bip.certificate)
    return ("holds" if theta is not None else "counterexample"), cert


def verify_equivalence_direction(B: WeightMatrix, bound: int = 20) -> bool:
    """The bipartite double cover of M⊗Mᵀ has Hall coefficient exactly 1."""
    if not B.in_bnk():
        raise PreconditionError("matrix must lie in B(n, k)")
    return hall_coefficient(symmetric_product(B).as_bipartite(), bound).value == 1


def cut_size(B: WeightMatrix, cells: Sequence[tuple[int, int]]) -> int:
    """Edges leaving the cell set in M⊗Mᵀ: n*k*t minus the inequality lhs."""
    if not B.in_bnk():
        raise PreconditionError("matrix must lie in B(n, k)")
    cells = [tuple(c) for c in cells]
    for x, y in cells:
        if B[x, y] != 0:
            raise PreconditionError(f"cell {(x, y)} is not a zero cell")
    return B.rows * B.cols * len(cells) - _lhs(B.data, cells)


def direct_cut_count(B: WeightMatrix, cells: Sequence[tuple[int, int]]) -> int:
    prod = symmetric_product(B)
    inside = {cell_index(x, y, B.cols) for x, y in cells}
    return sum(prod.data[a][b] for a in inside for b in range(prod.size) if b not in inside)


def brute_force_loop_matching(g: LoopGraph) -> list[int] | None:
    """Exhaustive search for a perfect matching where loops match a vertex to itself."""
    mate = [-1] * g.size

    def rec(v: int) -> bool:
        while v < g.size and mate[v] != -1:
            v += 1
        if v == g.size:
            return True
        if g.has_loop(v):
            mate[v] = v
            if rec(v + 1):
                return True
            mate[v] = -1
        for w in range(v + 1, g.size):
            if mate[w] == -1 and g.adjacency[v][w]:
                mate[v], mate[w] = w, v
                if rec(v + 1):
                    return True
                mate[v] = mate[w] = -1
        return False

    return list(mate) if rec(0) else None


def _odd_loopless(g: LoopGraph, removed: set[int]) -> int:
    seen = set(removed)
    count = 0
    for s in range(g.size):
        if s in seen:
            continue
        seen.add(s)
        stack, comp = [s], []
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in range(g.size):
                if y not in seen and y != x and g.adjacency[x][y]:
                    seen.add(y)
                    stack.append(y)
        if len(comp) % 2 and not any(g.has_loop(x) for x in comp):
            count += 1
    return count


def tutte_condition_holds(g: LoopGraph) -> bool:
    """Every U: G - U has at most |U| odd components without loops."""
    for r in range(g.size + 1):
        for U in combinations(range(g.size), r):
            if _odd_loopless(g, set(U)) > r:
                return False
    return True


def _campaign_item(args) -> dict:
    n, k, index, rows, seed, budgets, timing = args
    B = WeightMatrix(rows)
    rng = random.Random(f"{seed}:{n}:{k}:{index}")
    g = shuffled_instance(B, rng)
    rec: dict = {"n": n, "k": k, "index": index, "matrix": B.to_list()}
    started = time.perf_counter()
    ok, cert = verify_weak_balls(B)
    rec["weak_balls"] = ok
    if not ok:
        rec["weak_balls_certificate"] = cert
    if B.is_binary():
        verdict, cert = verify_higgins(B)
        rec["higgins"] = verdict
        if verdict == "counterexample":
            rec["higgins_certificate"] = cert
    else:
        rec["higgins"] = "n/a"
    bf = None
    try:
        iota = brute_force_involution(g, budgets.get("max_edges", DEFAULT_MAX_EDGES),
                                      budgets.get("node_budget", DEFAULT_NODE_BUDGET))
        bf = iota is not None
        rec["brute_force"] = bf
    except BudgetExceeded:
        rec["brute_force"] = "budget"
    try:
        iota, cert = solve_balls(g)
        rec["solve_balls"] = True
    except UncoveredParameters:
        rec["solve_balls"] = "uncovered"
    except BiregularError as exc:
        rec["solve_balls"] = False
        rec["solve_balls_error"] = {"type": type(exc).__name__, "message": str(exc),
                                    "artifact": getattr(exc, "artifact", None)}
    if isinstance(bf, bool) and isinstance(rec["solve_balls"], bool):
        rec["agree"] = bf == rec["solve_balls"]
    if timing:
        rec["seconds"] = round(time.perf_counter() - started, 6)
    return rec


def conjecture_campaign(ranges: Iterable[tuple[int, int]], budgets: dict | None = None,
                        seed: int = 0, workers: int = 1, timing: bool = False) -> dict:
    """Run every verifier on every member of B(n, k) for the listed (n, k).

    Records come back in enumeration order whatever the worker count.
    Conjecture violations are recorded with their certificates, never raised.
    """
    budgets = dict(budgets or {})
    items = []
    truncated = []
    for n, k in ranges:
        try:
            for idx, B in enumerate(enumerate_bnk(n, k, budgets.get("max_matrices"))):
                items.append((n, k, idx, B.data, seed, budgets, timing))
        except BudgetExceeded as exc:
            truncated.append({"n": n, "k": k, "enumerated": exc.progress})
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_campaign_item, items, chunksize=8))
    else:
        records = [_campaign_item(it) for it in items]
    summary = {
        "instances": len(records),
        "weak_balls_violations": sum(1 for r in records if r["weak_balls"] is False),
        "higgins_counterexamples": sum(1 for r in records if r["higgins"] == "counterexample"),
        "balls_violations": sum(1 for r in records if r["brute_force"] is False),
        "solver_failures": sum(1 for r in records if r["solve_balls"] is False),
        "disagreements": sum(1 for r in records if r.get("agree") is False),
        "budget_skips": sum(1 for r in records if r["brute_force"] == "budget"),
        "truncated": truncated,
    }
    summary["all_passed"] = not any(summary[key] for key in (
        "weak_balls_violations", "higgins_counterexamples", "balls_violations",
        "solver_failures", "disagreements"))
    return {"seed": seed, "ranges": [list(r) for r in ranges], "summary": summary, "records": records}
