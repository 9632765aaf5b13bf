"""Matching primitives.

Bipartite graphs are ``WeightMatrix`` multiplicity matrices (rows = left
part).  Graphs with loops are ``LoopGraph`` symmetric matrices whose
diagonal marks loops.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .errors import BudgetExceeded, LemmaViolation, PreconditionError
from .model import Involution, Permutation, WeightMatrix

BipGraph = WeightMatrix

DEFAULT_HALL_BOUND = 20


@dataclass(frozen=True)
class LoopGraph:
    size: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        adj = tuple(tuple(int(x) for x in row) for row in self.adjacency)
        object.__setattr__(self, "adjacency", adj)
        if len(adj) != self.size or any(len(r) != self.size for r in adj):
            raise PreconditionError("adjacency must be size x size")
        for i in range(self.size):
            for j in range(self.size):
                if adj[i][j] < 0 or adj[i][j] != adj[j][i]:
                    raise PreconditionError("adjacency must be symmetric and non-negative")

    @classmethod
    def from_edges(cls, size: int, edges, loops=()) -> LoopGraph:
        grid = [[0] * size for _ in range(size)]
        for a, b in edges:
            grid[a][b] += 1
            if a != b:
                grid[b][a] += 1
        for a in loops:
            grid[a][a] += 1
        return cls(size, tuple(tuple(r) for r in grid))

    def has_loop(self, i: int) -> bool:
        return self.adjacency[i][i] > 0

    def neighbors(self, i: int) -> list[int]:
        return [j for j in range(self.size) if j != i and self.adjacency[i][j]]

    def to_json(self) -> dict:
        return {"vertices": self.size, "adjacency": [list(r) for r in self.adjacency]}


@dataclass(frozen=True)
class HallValue:
    value: Fraction
    witness: tuple[int, ...]


@dataclass(frozen=True)
class BipartiteMatching:
    """Maximum matching; ``mate_left[i]`` is ``-1`` when ``i`` is exposed."""

    mate_left: tuple[int, ...]
    size: int
    deficient: tuple[int, ...] | None
    certificate: dict

    @property
    def covers_left(self) -> bool:
        return self.size == len(self.mate_left)

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.mate_left) if j >= 0]


def _left_adjacency(g: WeightMatrix) -> list[list[int]]:
    return [[j for j, w in enumerate(row) if w] for row in g.data]


def max_bipartite_matching(g: BipGraph) -> BipartiteMatching:
    """Hopcroft-Karp on the support of ``g``.

    When the matching does not cover the left part, the certificate carries
    a deficient set X with |N(X)| < |X|: the left vertices reachable from
    exposed left vertices along alternating paths.
    """
    adj = _left_adjacency(g)
    nl, nr = g.rows, g.cols
    mate_l = [-1] * nl
    mate_r = [-1] * nr
    inf = nl + nr + 1

    while True:
        dist = [inf] * nl
        q = deque()
        for i in range(nl):
            if mate_l[i] < 0:
                dist[i] = 0
                q.append(i)
        found = False
        while q:
            i = q.popleft()
            for j in adj[i]:
                i2 = mate_r[j]
                if i2 < 0:
                    found = True
                elif dist[i2] == inf:
                    dist[i2] = dist[i] + 1
                    q.append(i2)
        if not found:
            break

        def dfs(i: int) -> bool:
            for j in adj[i]:
                i2 = mate_r[j]
                if i2 < 0 or (dist[i2] == dist[i] + 1 and dfs(i2)):
                    mate_l[i], mate_r[j] = j, i
                    return True
            dist[i] = inf
            return False

        for i in range(nl):
            if mate_l[i] < 0:
                dfs(i)

    size = sum(1 for j in mate_l if j >= 0)
    deficient = None
    if size < nl:
        seen_l = [mate_l[i] < 0 for i in range(nl)]
        seen_r = [False] * nr
        q = deque(i for i in range(nl) if seen_l[i])
        while q:
            i = q.popleft()
            for j in adj[i]:
                if not seen_r[j]:
                    seen_r[j] = True
                    i2 = mate_r[j]
                    if i2 >= 0 and not seen_l[i2]:
                        seen_l[i2] = True
                        q.append(i2)
        deficient = tuple(i for i in range(nl) if seen_l[i])
        cert = {"kind": "deficient-set", "left": nl, "right": nr,
                "adjacency": g.support().to_list(), "subset": list(deficient)}
    else:
        cert = {"kind": "matching", "bipartite": True, "left": nl, "right": nr,
                "adjacency": g.support().to_list(), "mate": list(mate_l)}
    return BipartiteMatching(tuple(mate_l), size, deficient, cert)


def _regular_degree(g: BipGraph) -> int:
    if g.rows != g.cols:
        raise PreconditionError("regular bipartite multigraph needs equal parts")
    degs = set(g.row_sums()) | set(g.col_sums())
    if len(degs) != 1 or 0 in degs:
        raise PreconditionError("multigraph is not regular with positive degree")
    return degs.pop()


def konig_perfect_matching(g: BipGraph) -> Permutation:
    _regular_degree(g)
    res = max_bipartite_matching(g)
    if not res.covers_left:
        raise LemmaViolation("regular bipartite multigraph without perfect matching",
                             {"matrix": g.to_json()})
    return Permutation(res.mate_left)


def konig_factorize(g: BipGraph) -> list[Permutation]:
    """Split a d-regular multigraph into d perfect matchings."""
    d = _regular_degree(g)
    residual = g.to_list()
    out = []
    for _ in range(d):
        perm = konig_perfect_matching(WeightMatrix.of(residual))
        for i, j in enumerate(perm.images):
            residual[i][j] -= 1
        out.append(perm)
    return out


def hall_coefficient(g: BipGraph, bound: int = DEFAULT_HALL_BOUND) -> HallValue:
    """Exact min over non-empty X of |N(X)|/|X| by full subset scan."""
    if g.rows > bound:
        raise BudgetExceeded(f"left part {g.rows} exceeds exhaustive bound {bound}")
    adj = []
    for row in g.data:
        mask = 0
        for j, w in enumerate(row):
            if w:
                mask |= 1 << j
        adj.append(mask)
    num, den, mask = kernels.hall_scan(adj, g.rows)
    witness = tuple(i for i in range(g.rows) if mask >> i & 1)
    return HallValue(Fraction(num, den), witness)


def _simple_adjacency(g: LoopGraph) -> list[list[int]]:
    return [g.neighbors(i) for i in range(g.size)]


def general_perfect_matching(g: LoopGraph) -> list[int] | None:
    """Perfect matching of the loop-free part of ``g`` as a mate array."""
    mate = maximum_matching(g)
    return mate if all(m >= 0 for m in mate) else None


def maximum_matching(g: LoopGraph) -> list[int]:
    return _edmonds(g.size, _simple_adjacency(g))


def _edmonds(size: int, adj: list[list[int]]) -> list[int]:
    match = [-1] * size
    parent = [-1] * size
    base = list(range(size))

    def lca(a: int, b: int) -> int:
        seen = [False] * size
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    def find_path(root: int) -> int:
        used = [False] * size
        parent[:] = [-1] * size
        base[:] = range(size)
        used[root] = True
        q = deque([root])
        while q:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    cur = lca(v, to)
                    blossom = [False] * size
                    mark_path(v, cur, to, blossom)
                    mark_path(to, cur, v, blossom)
                    for i in range(size):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return to
                    used[match[to]] = True
                    q.append(match[to])
        return -1

    for root in range(size):
        if match[root] != -1:
            continue
        v = find_path(root)
        while v != -1:
            pv = parent[v]
            ppv = match[pv]
            match[v], match[pv] = pv, v
            v = ppv
    return match


def _components(size: int, adj: list[list[int]], removed: set[int]) -> list[list[int]]:
    seen = set(removed)
    comps = []
    for s in range(size):
        if s in seen:
            continue
        seen.add(s)
        comp, stack = [], [s]
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def tutte_set(size: int, adj: list[list[int]]) -> list[int]:
    """Gallai-Edmonds barrier A = N(D) minus D for a graph without loops.

    D is the set of vertices missed by some maximum matching.  When the
    graph has no perfect matching, G - A has more than |A| odd components.
    """
    nu = sum(1 for m in _edmonds(size, adj) if m >= 0)
    deficient = []
    for v in range(size):
        sub = [[y for y in adj[x] if y != v] if x != v else [] for x in range(size)]
        if sum(1 for m in _edmonds(size, sub) if m >= 0) == nu:
            deficient.append(v)
    dset = set(deficient)
    return sorted({y for x in deficient for y in adj[x]} - dset)


def odd_loopless_components(g: LoopGraph, removed) -> list[list[int]]:
    removed = set(removed)
    comps = _components(g.size, _simple_adjacency(g), removed)
    return [c for c in comps if len(c) % 2 == 1 and not any(g.has_loop(x) for x in c)]


def perfect_matching_with_loops(g: LoopGraph) -> tuple[Involution | None, dict]:
    """Perfect matching where a vertex with a loop may match itself.

    Loop vertices are joined to a clique of new vertices (as many as there
    are loops, plus one if the total would be odd) and a loop-free perfect
    matching is sought.  On failure the barrier found in the augmented graph
    is stripped of new vertices, which leaves a set U such that G - U has
    more than |U| odd components without loops.
    """
    loops = [i for i in range(g.size) if g.has_loop(i)]
    extra = len(loops) + ((g.size + len(loops)) % 2)
    total = g.size + extra
    adj = [list(x) for x in _simple_adjacency(g)] + [[] for _ in range(extra)]
    new = list(range(g.size, total))
    for a in new:
        for b in new:
            if a != b:
                adj[a].append(b)
        for v in loops:
            adj[a].append(v)
            adj[v].append(a)
    mate = _edmonds(total, adj)
    if all(m >= 0 for m in mate):
        theta = [mate[v] if mate[v] < g.size else v for v in range(g.size)]
        cert = {"kind": "matching", "bipartite": False, "graph": g.to_json(), "mate": theta}
        return Involution(tuple(theta)), cert
    barrier = [x for x in tutte_set(total, adj) if x < g.size]
    odd = odd_loopless_components(g, barrier)
    cert = {"kind": "tutte-obstruction", "graph": g.to_json(), "removed": barrier,
            "odd_components": odd}
    if len(odd) <= len(barrier):
        raise LemmaViolation("loop reduction produced no Tutte obstruction", cert)
    return None, cert
