"""Edge colorings of bipartite multigraphs with balanced color degrees.

Vertices are addressed as in ``LabeledBigraph``: left ids ``[0, n)``, right
ids ``[0, k)``.  A coloring is a tuple of palette indices aligned with the
edge list.
"""
from __future__ import annotations

import random
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations, product

from .errors import LemmaViolation, PreconditionError
from .matching import max_bipartite_matching
from .model import LabeledBigraph, WeightMatrix, bracket_pair, uniform_matrix


@dataclass(frozen=True)
class Coloring:
    palette: int
    colors: tuple[int, ...]

    def __post_init__(self):
        colors = tuple(int(c) for c in self.colors)
        object.__setattr__(self, "colors", colors)
        if self.palette < 1 or any(not 0 <= c < self.palette for c in colors):
            raise PreconditionError("color outside palette")

    def left_table(self, g: LabeledBigraph) -> list[list[int]]:
        table = [[0] * self.palette for _ in range(g.n)]
        for (a, _), c in zip(g.edges, self.colors):
            table[a][c] += 1
        return table

    def right_table(self, g: LabeledBigraph) -> list[list[int]]:
        table = [[0] * self.palette for _ in range(g.k)]
        for (_, b), c in zip(g.edges, self.colors):
            table[b][c] += 1
        return table

    def to_json(self) -> dict:
        return {"palette": self.palette, "colors": list(self.colors)}

    @classmethod
    def from_json(cls, doc: dict) -> Coloring:
        return cls(int(doc["palette"]), tuple(doc["colors"]))


@dataclass(frozen=True)
class ExceptionalGraph:
    """0/1 girls x palette matrix marking weight ``m + sign`` in [u, w]."""

    matrix: tuple[tuple[int, ...], ...]
    m: int
    sign: int

    @property
    def girls(self) -> int:
        return len(self.matrix)

    @property
    def palette(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def degrees(self) -> tuple[list[int], list[int]]:
        rows = [sum(r) for r in self.matrix]
        cols = [sum(c) for c in zip(*self.matrix)]
        return rows, cols

    def is_regular(self, d: int) -> bool:
        rows, cols = self.degrees()
        return all(x == d for x in rows) and all(x == d for x in cols)

    def components(self) -> list[tuple[list[int], list[int]]]:
        """Connected components as (girls, colors), ignoring isolated vertices."""
        n, f = self.girls, self.palette
        parent = list(range(n + f))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in range(n):
            for c in range(f):
                if self.matrix[i][c]:
                    parent[find(i)] = find(n + c)
        groups: dict[int, tuple[list[int], list[int]]] = {}
        for i in range(n):
            if any(self.matrix[i]):
                groups.setdefault(find(i), ([], []))[0].append(i)
        for c in range(f):
            if any(self.matrix[i][c] for i in range(n)):
                groups.setdefault(find(n + c), ([], []))[1].append(c)
        return sorted(groups.values(), key=lambda gc: (min(gc[1]) if gc[1] else -1))

    def to_json(self) -> dict:
        return {"m": self.m, "sign": self.sign, "matrix": [list(r) for r in self.matrix]}

    def to_dot(self) -> str:
        lines = ["graph exceptional {"]
        for i, row in enumerate(self.matrix):
            for c, x in enumerate(row):
                if x:
                    lines.append(f"  g{i} -- c{c};")
        lines.append("}")
        return "\n".join(lines)


def exceptional_graph(g: LabeledBigraph, coloring: Coloring, m: int, sign: int) -> ExceptionalGraph:
    counts = bracket_pair(g.u, coloring.colors, g.n, coloring.palette)
    if sign == 0:
        mat = tuple((0,) * coloring.palette for _ in range(g.n))
    else:
        mat = tuple(tuple(1 if x == m + sign else 0 for x in row) for row in counts.data)
    return ExceptionalGraph(mat, m, sign)


def _euler_alternate(num_vertices: int, ends: list[tuple[int, int]]) -> list[int]:
    """Alternately 0/1 color the edges along Euler circuits (all degrees even)."""
    adj: list[list[int]] = [[] for _ in range(num_vertices)]
    for e, (a, b) in enumerate(ends):
        adj[a].append(e)
        adj[b].append(e)
    used = [False] * len(ends)
    ptr = [0] * num_vertices
    color = [0] * len(ends)
    for start in range(num_vertices):
        stack = [(start, -1)]
        circuit = []
        while stack:
            x, e_in = stack[-1]
            lst = adj[x]
            while ptr[x] < len(lst) and used[lst[ptr[x]]]:
                ptr[x] += 1
            if ptr[x] < len(lst):
                e = lst[ptr[x]]
                used[e] = True
                a, b = ends[e]
                stack.append((b if a == x else a, e))
            else:
                stack.pop()
                if e_in >= 0:
                    circuit.append(e_in)
        for idx, e in enumerate(circuit):
            color[e] = idx % 2
    return color


def balance_two_colors(g: LabeledBigraph, edge_ids: Sequence[int] | None = None) -> list[int]:
    """2-color the chosen edges so every vertex has |blue - red| <= 1.

    One auxiliary vertex per part absorbs the odd-degree vertices of the
    other part (and the two are joined if still odd), every component then
    has an Euler circuit of even length, and alternating along it balances
    each vertex exactly.  Dropping the auxiliary edges costs each original
    vertex at most one.  Returns 0/1 aligned with ``edge_ids``.
    """
    ids = list(range(len(g.edges))) if edge_ids is None else list(edge_ids)
    n, k = g.n, g.k
    aux_left, aux_right = n + k, n + k + 1
    ends = [(g.edges[e][0], n + g.edges[e][1]) for e in ids]
    deg = [0] * (n + k + 2)
    for a, b in ends:
        deg[a] += 1
        deg[b] += 1
    for x in range(n):
        if deg[x] % 2:
            ends.append((x, aux_right))
    for y in range(n, n + k):
        if deg[y] % 2:
            ends.append((aux_left, y))
    odd_left = sum(1 for x in range(n) if deg[x] % 2)
    if odd_left % 2:
        ends.append((aux_left, aux_right))
    color = _euler_alternate(n + k + 2, ends)
    return color[:len(ids)]


def _pair_unbalanced(g: LabeledBigraph, colors: list[int], a: int, b: int) -> bool:
    diff = [0] * (g.n + g.k)
    for (x, y), c in zip(g.edges, colors):
        if c == a:
            diff[x] += 1
            diff[g.n + y] += 1
        elif c == b:
            diff[x] -= 1
            diff[g.n + y] -= 1
    return any(abs(d) > 1 for d in diff)


def coloring_cost(g: LabeledBigraph, coloring: Coloring) -> int:
    return sum(x * x for t in (coloring.left_table(g), coloring.right_table(g)) for row in t for x in row)


def balanced_coloring(g: LabeledBigraph, m: int, initial: Sequence[int] | None = None) -> Coloring:
    """m-coloring in which any two color degrees at any vertex differ by <= 1.

    Starts round-robin by edge index and repeatedly rebalances the first
    unbalanced color pair with ``balance_two_colors``; each step strictly
    lowers the sum of squared color degrees, so the loop terminates.
    """
    if m < 1:
        raise PreconditionError("need at least one color")
    colors = list(initial) if initial is not None else [e % m for e in range(len(g.edges))]
    pairs = list(combinations(range(m), 2))
    while True:
        for a, b in pairs:
            if _pair_unbalanced(g, colors, a, b):
                ids = [e for e, c in enumerate(colors) if c in (a, b)]
                for e, bit in zip(ids, balance_two_colors(g, ids)):
                    colors[e] = b if bit else a
                break
        else:
            return Coloring(m, tuple(colors))


def split_degree(left_degree: int, palette: int) -> tuple[int, int]:
    """Write ``left_degree = m * palette + eps`` with small |eps| and m >= 1.

    Candidates are tried in the order 0, 1, -1, 2, -2, ... (|eps| < palette);
    if none has m >= 1 the floor division form is returned.
    """
    for mag in range(palette):
        for eps in ((0,) if mag == 0 else (mag, -mag)):
            if (left_degree - eps) % palette == 0 and (left_degree - eps) // palette >= 1:
                return (left_degree - eps) // palette, eps
    return divmod(left_degree, palette)


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def wind_coloring(g: LabeledBigraph, m: int | None = None,
                  eps: int | None = None) -> tuple[Coloring, ExceptionalGraph]:
    """Coloring w with [w, v] all-ones and [u, w] entries in {m, m + sign(eps)}.

    The palette size is the common right degree (n for members of A(n, k)),
    and the left degree is ``m * palette + eps`` with |eps| < palette.
    """
    if not g.is_biregular() or not g.edges:
        raise PreconditionError("wind coloring needs a biregular multigraph")
    palette = len(g.edges) // g.k
    degree = len(g.edges) // g.n
    if m is None or eps is None:
        m, eps = split_degree(degree, palette)
    if m * palette + eps != degree or abs(eps) >= palette:
        raise PreconditionError(f"left degree {degree} is not {m}*{palette}{eps:+d} with |eps| < {palette}")
    w = balanced_coloring(g, palette)
    exc = exceptional_graph(g, w, m, _sign(eps))
    check_wind(g, w, m, eps, exc)
    return w, exc


def check_wind(g: LabeledBigraph, w: Coloring, m: int, eps: int, exc: ExceptionalGraph) -> None:
    wv = bracket_pair(w.colors, g.v, w.palette, g.k)
    uw = bracket_pair(g.u, w.colors, g.n, w.palette)
    allowed = {m, m + _sign(eps)}
    ok = wv == uniform_matrix(w.palette, g.k) and all(x in allowed for row in uw.data for x in row)
    if not ok or not exc.is_regular(abs(eps)):
        raise LemmaViolation("wind coloring postcondition failed",
                             {"instance": g.to_json(), "coloring": w.to_json(), "m": m, "eps": eps})


def make_hamiltonian(g: LabeledBigraph, w: Coloring, m: int, eps: int,
                     trace: list[int] | None = None) -> Coloring:
    """Recolor until the exceptional graph is one cycle through all 2n vertices.

    While disconnected: Red is the least color, Blue the least color outside
    Red's component, and s the least girl exceptional for Red.  Orienting
    one of the two colors girl->ball and the other ball->girl, a path from s
    ends at a girl with the opposite imbalance; swapping the two colors
    along it merges the two cycles.  ``trace`` receives the component count
    before every step.
    """
    if abs(eps) != 2 or g.n <= 2:
        raise PreconditionError("make_hamiltonian needs |eps| = 2 and n > 2")
    colors = list(w.colors)
    palette = w.palette
    sign = _sign(eps)
    last = None
    while True:
        cur = Coloring(palette, tuple(colors))
        exc = exceptional_graph(g, cur, m, sign)
        comps = exc.components()
        if trace is not None:
            trace.append(len(comps))
        if last is not None and len(comps) >= last:
            raise LemmaViolation("color flip did not merge components",
                                 {"instance": g.to_json(), "coloring": cur.to_json(), "m": m, "eps": eps})
        last = len(comps)
        if len(comps) <= 1:
            return cur
        red = comps[0][1][0]
        blue = comps[1][1][0]
        s = min(i for i in range(g.n) if exc.matrix[i][red])
        out_c, in_c = (red, blue) if eps > 0 else (blue, red)
        path = _flip_path(g, colors, s, out_c, in_c)
        if path is None:
            raise LemmaViolation("no flip path in the red/blue digraph",
                                 {"instance": g.to_json(), "coloring": cur.to_json(), "m": m, "eps": eps,
                                  "red": red, "blue": blue, "start": s})
        for e in path:
            colors[e] = in_c if colors[e] == out_c else out_c


def _flip_path(g: LabeledBigraph, colors: list[int], s: int, out_c: int, in_c: int) -> list[int] | None:
    out_edges: list[list[int]] = [[] for _ in range(g.n)]
    in_edge_at: dict[int, int] = {}
    out_deg = [0] * g.n
    in_deg = [0] * g.n
    for e, ((a, b), c) in enumerate(zip(g.edges, colors)):
        if c == out_c:
            out_edges[a].append(e)
            out_deg[a] += 1
        elif c == in_c:
            in_edge_at[b] = e
            in_deg[a] += 1
    prev: dict[int, tuple[int, int, int]] = {s: (-1, -1, -1)}
    q = deque([s])
    while q:
        x = q.popleft()
        if x != s and out_deg[x] < in_deg[x]:
            path = []
            while x != s:
                px, e1, e2 = prev[x]
                path.extend((e2, e1))
                x = px
            return path[::-1]
        for e1 in out_edges[x]:
            e2 = in_edge_at.get(g.edges[e1][1])
            if e2 is None:
                continue
            y = g.edges[e2][0]
            if y not in prev:
                prev[y] = (x, e1, e2)
                q.append(y)
    return None


def color_class(g: LabeledBigraph, coloring: Coloring, c: int) -> tuple[LabeledBigraph, list[int]]:
    """Subgraph of color ``c`` on the same parts, with original edge ids."""
    ids = [e for e, x in enumerate(coloring.colors) if x == c]
    return LabeledBigraph(g.n, g.k, tuple(g.edges[e] for e in ids)), ids


def _neighborhoods(cls: LabeledBigraph) -> list[set[int]]:
    nb: list[set[int]] = [set() for _ in range(cls.n)]
    for a, b in cls.edges:
        nb[a].add(b)
    return nb


def _six_class_m(cls: LabeledBigraph) -> int:
    if cls.n != 6 or (cls.k - 3) % 6 or cls.k < 9:
        raise PreconditionError("color class must have 6 girls and 6m+3 balls, m >= 1")
    m = (cls.k - 3) // 6
    if any(d != 2 * m + 1 for d in cls.left_degrees()) or any(d != 2 for d in cls.right_degrees()):
        raise PreconditionError("color class degrees must be 2m+1 (left) and 2 (right)")
    return m


def complementary(cls: LabeledBigraph, a: int, b: int) -> bool:
    m = _six_class_m(cls)
    nb = _neighborhoods(cls)
    return a != b and len(nb[a] | nb[b]) == 2 * m + 1


def find_triple(cls: LabeledBigraph, u: int, v: int, f: int) -> int:
    """Girl w outside {u, v, f} with |N(u, v, w)| >= 3m+3 and no complementary pair.

    Candidates are scanned in ascending order and verified directly.
    """
    m = _six_class_m(cls)
    nb = _neighborhoods(cls)
    lim = 2 * m + 1

    def comp(a: int, b: int) -> bool:
        return len(nb[a] | nb[b]) == lim

    if len({u, v, f}) != 3 or comp(u, v):
        raise PreconditionError("u, v, f must be distinct and u, v not complementary")
    for w in range(6):
        if w in (u, v, f):
            continue
        if len(nb[u] | nb[v] | nb[w]) >= 3 * m + 3 and not comp(u, w) and not comp(v, w):
            return w
    raise LemmaViolation("no third vertex for the triple lemma",
                         {"class": cls.to_json(), "u": u, "v": v, "f": f, "m": m})


def split_color_with_triple(cls: LabeledBigraph, triple: Sequence[int]) -> list[int]:
    """Split a color class into two colors, each ball getting one of each.

    In sub-color 0 the triple has degree m+1 and the other girls m; sub-color
    1 is the complement.  Solved as a degree-constrained subgraph: girl x is
    replicated to its target degree and a matching covering the replicas
    (hence every ball exactly once) is sought.  Returns 0/1 per class edge.
    """
    m = _six_class_m(cls)
    nb = _neighborhoods(cls)
    triple = list(triple)
    if len(set(triple)) != 3:
        raise PreconditionError("triple must have three distinct girls")
    if len(set().union(*(nb[x] for x in triple))) < 3 * m + 3:
        raise PreconditionError("triple neighborhood is smaller than 3m+3")
    owners = []
    for x in range(6):
        owners.extend([x] * (m + 1 if x in triple else m))
    grid = [[1 if b in nb[x] else 0 for b in range(cls.k)] for x in owners]
    res = max_bipartite_matching(WeightMatrix.of(grid))
    if not res.covers_left:
        raise LemmaViolation("triple split is infeasible",
                             {"class": cls.to_json(), "triple": triple, "m": m})
    by_pair: dict[tuple[int, int], list[int]] = {}
    for e, pair in enumerate(cls.edges):
        by_pair.setdefault(pair, []).append(e)
    out = [1] * len(cls.edges)
    for copy, b in enumerate(res.mate_left):
        out[by_pair[(owners[copy], b)].pop(0)] = 0
    return out


SIX_BASE_ATTEMPTS = 8


def _try_split(cls: LabeledBigraph, triple: Sequence[int]) -> list[int] | None:
    try:
        return split_color_with_triple(cls, triple)
    except LemmaViolation:
        return None


def _proof_triples(classes, m: int) -> list[tuple[int, int, int]]:
    """The overlapping triples chosen exactly as in the n = 6 argument."""
    nbs = [_neighborhoods(cls) for cls, _ in classes]

    def comp(c: int, a: int, b: int) -> bool:
        return len(nbs[c][a] | nbs[c][b]) == 2 * m + 1

    u, v = next((a, b) for a, b in combinations(range(6), 2) if not comp(0, a, b))
    f = min(x for x in range(6) if x not in (u, v))
    t0 = (u, v, find_triple(classes[0][0], u, v, f))
    b, c = next(p for p in combinations(t0, 2) if not comp(1, *p))
    one = next(x for x in t0 if x not in (b, c))
    four = find_triple(classes[1][0], b, c, one)
    t1 = (b, c, four)
    three = b if not comp(2, b, four) else c
    two = c if three == b else b
    x = find_triple(classes[2][0], three, four, two)
    t2 = (three, four, x)
    if x == one:
        t0 = (two, three, find_triple(classes[0][0], two, three, one))
    return [t0, t1, t2]


def _valid_triples(cls: LabeledBigraph, m: int) -> list[tuple[int, int, int]]:
    nb = _neighborhoods(cls)
    out = []
    for t in combinations(range(6), 3):
        if len(nb[t[0]] | nb[t[1]] | nb[t[2]]) < 3 * m + 3:
            continue
        if any(len(nb[a] | nb[b]) == 2 * m + 1 for a, b in combinations(t, 2)):
            continue
        out.append(t)
    return out


def six_candidates(g: LabeledBigraph):
    """Yield (Coloring, ExceptionalGraph, triples, source) for n = 6, k = 6m+3.

    Three balanced colors are each split in two around a girl triple.  The
    first candidate uses the overlapping triples of the n = 6 argument
    (source "proof").  A triple meeting the neighborhood conditions can
    still be unsplittable when a class has parallel edges, so afterwards
    every combination of splittable valid triples is offered (source
    "search"), then the same for other balanced base colorings.
    """
    if g.n != 6 or (g.k - 3) % 6 or g.k < 9 or not g.in_ank():
        raise PreconditionError("six_coloring needs a member of A(6, 6m+3) with m >= 1")
    m = (g.k - 3) // 6
    rng = random.Random(0)
    for attempt in range(SIX_BASE_ATTEMPTS):
        initial = None if attempt == 0 else [rng.randrange(3) for _ in g.edges]
        base = balanced_coloring(g, 3, initial)
        classes = [color_class(g, base, c) for c in range(3)]
        cache: dict[tuple[int, tuple[int, ...]], list[int] | None] = {}

        def split(c: int, t: tuple[int, ...]) -> list[int] | None:
            key = (c, tuple(t))
            if key not in cache:
                cache[key] = _try_split(classes[c][0], t)
            return cache[key]

        def build(triples) -> tuple[Coloring, ExceptionalGraph]:
            colors = [0] * len(g.edges)
            for cidx, ((_, ids), t) in enumerate(zip(classes, triples)):
                for e, bit in zip(ids, split(cidx, t)):
                    colors[e] = 2 * cidx + bit
            w = Coloring(6, tuple(colors))
            exc = exceptional_graph(g, w, m, 1)
            check_wind(g, w, m, 3, exc)
            return w, exc

        proof = [tuple(t) for t in _proof_triples(classes, m)]
        if all(split(c, t) is not None for c, t in enumerate(proof)):
            yield (*build(proof), proof, "proof")
        options = [[t for t in _valid_triples(cls, m) if split(c, t) is not None]
                   for c, (cls, _) in enumerate(classes)]
        for combo in product(*options):
            if list(combo) != proof:
                yield (*build(combo), list(combo), "search")


def six_coloring(g: LabeledBigraph, trace: list | None = None) -> tuple[Coloring, ExceptionalGraph]:
    """Palette-6 wind-style coloring for n = 6, k = 6m+3.

    Returns the first of ``six_candidates``; ``trace`` receives its three
    triples (one per base color).
    """
    for w, exc, triples, _ in six_candidates(g):
        if trace is not None:
            trace.extend(triples)
        return w, exc
    raise LemmaViolation("no splittable triples for any base coloring", {"instance": g.to_json()})
