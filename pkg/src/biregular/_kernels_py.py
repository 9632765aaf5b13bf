"""Pure-Python kernels.  Same contracts as the compiled ``_ckernels``."""
from __future__ import annotations

import sys

from .errors import BudgetExceeded


def _lex_less(a: int, b: int) -> bool:
    # equal popcount: the lowest differing element decides
    d = a ^ b
    return bool(a & d & -d)


def hall_scan(adj: list[int], n_left: int) -> tuple[int, int, int]:
    """Minimise |N(X)|/|X| over non-empty left subsets X.

    ``adj[i]`` is the neighbourhood bitmask of left vertex ``i``.  Ties go
    to the smaller |X|, then to the lexicographically smaller sorted X.
    Returns ``(|N(X)|, |X|, mask of X)``.
    """
    best = [-1, 1, 0]  # num, den, mask; num < 0 means unset

    def visit(start: int, mask: int, nb: int, size: int) -> None:
        for j in range(start, n_left):
            m2 = mask | (1 << j)
            nb2 = nb | adj[j]
            s2 = size + 1
            c = nb2.bit_count()
            bn, bd, bm = best
            if bn < 0:
                better = True
            else:
                lhs, rhs = c * bd, bn * s2
                better = lhs < rhs or (lhs == rhs and (s2 < bd or (s2 == bd and _lex_less(m2, bm))))
            if better:
                best[0], best[1], best[2] = c, s2, m2
            visit(j + 1, m2, nb2, s2)

    limit = sys.getrecursionlimit()
    if n_left + 50 > limit:
        sys.setrecursionlimit(n_left + 100)
    visit(0, 0, 0, 0)
    return best[0], best[1], best[2]


def involution_search(u: list[int], v: list[int], n: int, k: int,
                      node_budget: int = 0) -> list[int] | None:
    """Backtracking search for an involution with [u∘ι, v] all-ones.

    Edges are assigned in index order.  The lowest open edge is either kept
    (a fixed point) or swapped with a later open edge.  A girl may receive
    each colour at most once, which prunes almost everything; swaps between
    two balls of one girl are skipped (same as two fixed points) and among
    later edges with identical labels only the first is tried.
    ``node_budget`` of 0 means unlimited.
    """
    size = len(u)
    used = [[False] * k for _ in range(n)]
    mate = [-1] * size
    nodes = 0

    def rec(e: int) -> bool:
        nonlocal nodes
        while e < size and mate[e] != -1:
            e += 1
        if e == size:
            return True
        nodes += 1
        if node_budget and nodes > node_budget:
            raise BudgetExceeded("involution search exceeded node budget", nodes - 1)
        a, c = u[e], v[e]
        if not used[a][c]:
            used[a][c] = True
            mate[e] = e
            if rec(e + 1):
                return True
            used[a][c] = False
            mate[e] = -1
        tried = set()
        for f in range(e + 1, size):
            if mate[f] != -1:
                continue
            b, d = u[f], v[f]
            if b == a or (b, d) in tried:
                continue
            tried.add((b, d))
            if used[b][c] or used[a][d]:
                continue
            used[b][c] = used[a][d] = True
            mate[e], mate[f] = f, e
            if rec(e + 1):
                return True
            used[b][c] = used[a][d] = False
            mate[e] = mate[f] = -1
        return False

    if size + 50 > sys.getrecursionlimit():
        sys.setrecursionlimit(size + 100)
    return list(mate) if rec(0) else None
