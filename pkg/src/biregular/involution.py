"""Swap involutions and bijections built from wind colorings.

Given a coloring w with [w, v] all-ones, an involution with u∘ι = α∘w exists
as soon as the bucket counts N = [u, w] satisfy N(i, f) = N(α(f), α⁻¹(i));
the involution then swaps bucket (i, f) with bucket (α(f), α⁻¹(i)).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .coloring import (Coloring, ExceptionalGraph, exceptional_graph, make_hamiltonian,
                       six_candidates, wind_coloring)
from .errors import LemmaViolation, PreconditionError, UncoveredParameters
from .matching import konig_perfect_matching
from .model import (Involution, LabeledBigraph, Permutation, WeightMatrix, bracket,
                    bracket_pair, compose_labels, uniform_matrix)

EXHAUSTIVE_ALPHA_LIMIT = 8


@dataclass(frozen=True)
class BucketTable:
    counts: WeightMatrix
    buckets: dict

    def __getitem__(self, key: tuple[int, int]) -> tuple[int, ...]:
        return self.buckets.get(key, ())


def bucket_table(g: LabeledBigraph, w: Coloring) -> BucketTable:
    buckets: dict[tuple[int, int], list[int]] = {}
    for e, (a, c) in enumerate(zip(g.u, w.colors)):
        buckets.setdefault((a, c), []).append(e)
    counts = bracket_pair(g.u, w.colors, g.n, w.palette)
    return BucketTable(counts, {key: tuple(sorted(ids)) for key, ids in buckets.items()})


def alpha_condition(N: WeightMatrix, alpha: Permutation) -> bool:
    inv = alpha.inverse()
    n = N.rows
    return all(N[i, f] == N[alpha(f), inv(i)] for i in range(n) for f in range(n))


def _cycle_order(exc: ExceptionalGraph) -> tuple[list[int], list[int]] | None:
    """Girls g_t and colors c_t with c_t joined to g_t and g_(t+1), if one cycle."""
    n = exc.girls
    girl_colors = [[c for c in range(n) if exc.matrix[i][c]] for i in range(n)]
    color_girls = [[i for i in range(n) if exc.matrix[i][c]] for c in range(n)]
    if any(len(x) != 2 for x in girl_colors + color_girls):
        return None
    girls, colors = [0], []
    prev_color = None
    x = 0
    for _ in range(n):
        c = next(c for c in girl_colors[x] if c != prev_color) if prev_color is not None else girl_colors[x][0]
        colors.append(c)
        x = next(i for i in color_girls[c] if i != x)
        prev_color = c
        girls.append(x)
    if girls[-1] != 0 or len(set(girls[:-1])) != n:
        return None
    return girls[:-1], colors


def _alpha_candidates(n: int, eps: int, exc: ExceptionalGraph | None):
    yield Permutation.identity(n)
    if exc is not None and abs(eps) == 1:
        images = [0] * n
        for i in range(n):
            for c in range(n):
                if exc.matrix[i][c]:
                    images[c] = i
        try:
            yield Permutation(tuple(images))
        except PreconditionError:
            pass
    if exc is not None and abs(eps) == 2:
        order = _cycle_order(exc)
        if order is not None:
            girls, colors = order
            for r in range(n):
                for images in ([girls[(r - t) % n] for t in range(n)], [girls[(r + t) % n] for t in range(n)]):
                    img = [0] * n
                    for t, c in enumerate(colors):
                        img[c] = images[t]
                    yield Permutation(tuple(img))
    if n <= EXHAUSTIVE_ALPHA_LIMIT:
        for p in permutations(range(n)):
            yield Permutation(p)


def find_alpha(N: BucketTable | WeightMatrix, eps: int, exceptional: ExceptionalGraph | None = None) -> Permutation:
    """Color-to-girl permutation α under which bucket pairing is solvable.

    Structural candidates come first (identity; the exceptional matching;
    the dihedral images of the exceptional cycle), then every permutation
    for n <= 8.  Each candidate is checked against the full condition.
    """
    counts = N.counts if isinstance(N, BucketTable) else N
    if counts.rows != counts.cols:
        raise PreconditionError("bucket counts must be square")
    n = counts.rows
    for alpha in _alpha_candidates(n, eps, exceptional):
        if alpha_condition(counts, alpha):
            return alpha
    raise LemmaViolation("no alpha satisfies the bucket pairing condition",
                         {"counts": counts.to_json(), "eps": eps,
                          "exceptional": exceptional.to_json() if exceptional else None})


def pair_buckets(table: BucketTable, alpha: Permutation) -> Involution:
    """Swap bucket (i, f) with bucket (α(f), α⁻¹(i)) position by position.

    A bucket paired with itself is paired first-with-last inward, leaving
    the middle edge fixed when its size is odd.
    """
    inv = alpha.inverse()
    size = sum(len(ids) for ids in table.buckets.values())
    out = list(range(size))
    for key in sorted(table.buckets):
        i, f = key
        partner = (alpha(f), inv(i))
        ids = table[key]
        if partner == key:
            for t in range(len(ids) // 2):
                a, b = ids[t], ids[-1 - t]
                out[a], out[b] = b, a
        else:
            other = table[partner]
            if len(other) != len(ids):
                raise PreconditionError(f"bucket {key} and {partner} differ in size")
            if key < partner:
                for a, b in zip(ids, other):
                    out[a], out[b] = b, a
    return Involution(tuple(out))


def board_method(g: LabeledBigraph) -> Involution:
    """n = k: fill an n x n board column by column with perfect matchings.

    Row i holds girl i's balls; column j has pairwise distinct colors.
    Transposing the board is the involution; the diagonal stays fixed.
    """
    if g.n != g.k or not g.in_ank():
        raise PreconditionError("board method needs a member of A(n, n)")
    n = g.n
    residual = bracket(g).to_list()
    pools: dict[tuple[int, int], list[int]] = {}
    for e, pair in enumerate(g.edges):
        pools.setdefault(pair, []).append(e)
    board = [[0] * n for _ in range(n)]
    for j in range(n):
        perm = konig_perfect_matching(WeightMatrix.of(residual))
        for i in range(n):
            c = perm(i)
            board[i][j] = pools[(i, c)].pop(0)
            residual[i][c] -= 1
    out = [0] * len(g.edges)
    for i in range(n):
        for j in range(n):
            out[board[i][j]] = board[j][i]
    return Involution(tuple(out))


def balls_route(n: int, k: int) -> tuple[str, int, int]:
    """Which construction covers (n, k): ("board"|"wind"|"six", m, eps)."""
    if n == k:
        return "board", 1, 0
    for eps in (0, 1, -1, 2, -2):
        if abs(eps) < n and (k - eps) % n == 0 and (k - eps) // n >= 1:
            return "wind", (k - eps) // n, eps
    if n == 6 and k % 6 == 3 and k >= 9:
        return "six", (k - 3) // 6, 3
    raise UncoveredParameters(f"(n, k) = ({n}, {k}) is outside the proven classes")


def involution_certificate(g: LabeledBigraph, iota: Involution, **extra) -> dict:
    cert = {"kind": "involution", "instance": g.to_json(), "involution": list(iota.map)}
    cert.update(extra)
    return cert


def _check_balls(g: LabeledBigraph, iota: Involution, cert: dict) -> None:
    if bracket_pair(compose_labels(g.u, iota), g.v, g.n, g.k) != uniform_matrix(g.n, g.k):
        raise LemmaViolation("constructed involution misses the all-ones bracket", cert)


def _six_pipeline(g: LabeledBigraph):
    """First six-coloring candidate whose bucket counts admit an α."""
    tried = 0
    for w, exc, triples, source in six_candidates(g):
        tried += 1
        table = bucket_table(g, w)
        try:
            alpha = find_alpha(table, 3, exc)
        except LemmaViolation:
            continue
        return w, exc, table, alpha, {"triples": [list(t) for t in triples], "triple_source": source}
    raise LemmaViolation("no six-coloring candidate admits an alpha",
                         {"instance": g.to_json(), "candidates": tried})


def solve_balls(g: LabeledBigraph) -> tuple[Involution, dict]:
    """Involution ι with [u∘ι, v] all-ones, for every proven (n, k) class."""
    if not g.in_ank():
        raise PreconditionError("instance must be biregular with n*k edges")
    method, m, eps = balls_route(g.n, g.k)
    if method == "board":
        iota = board_method(g)
        cert = involution_certificate(g, iota, method="board")
        _check_balls(g, iota, cert)
        return iota, cert
    extra = {}
    if method == "six":
        w, exc, table, alpha, extra = _six_pipeline(g)
    else:
        w, exc = wind_coloring(g, m, eps)
        if abs(eps) == 2:
            w = make_hamiltonian(g, w, m, eps)
            exc = exceptional_graph(g, w, m, exc.sign)
        table = bucket_table(g, w)
        alpha = find_alpha(table, eps, exc)
    iota = pair_buckets(table, alpha)
    cert = involution_certificate(g, iota, method=method, m=m, eps=eps,
                                  alpha=list(alpha.images), coloring=w.to_json(), **extra)
    _check_balls(g, iota, cert)
    return iota, cert


def _align_exceptional(B: tuple[tuple[int, ...], ...], A: tuple[tuple[int, ...], ...]):
    """Part-preserving isomorphism (rows, cols) from 0/1 matrix B onto A."""
    rows, cols = len(B), len(B[0])
    b_deg = {sum(r) for r in B} | {sum(c) for c in zip(*B)}
    if b_deg == {0}:
        yield list(range(rows)), list(range(cols))
        return
    b_edges = [(i, j) for i in range(rows) for j in range(cols) if B[i][j]]
    a_edges = [(i, j) for i in range(rows) for j in range(cols) if A[i][j]]
    if b_deg == {1} and len(b_edges) == len(a_edges) == rows == cols:
        rmap, cmap = [0] * rows, [0] * cols
        for (bi, bj), (ai, aj) in zip(b_edges, a_edges):
            rmap[bi], cmap[bj] = ai, aj
        yield rmap, cmap
    if b_deg == {2} and rows == cols:
        ob = _cycle_order(ExceptionalGraph(B, 0, 1))
        oa = _cycle_order(ExceptionalGraph(A, 0, 1))
        if ob is not None and oa is not None:
            rmap, cmap = [0] * rows, [0] * cols
            for t in range(rows):
                rmap[ob[0][t]] = oa[0][t]
                cmap[ob[1][t]] = oa[1][t]
            yield rmap, cmap
    if rows <= EXHAUSTIVE_ALPHA_LIMIT:
        for rp in permutations(range(rows)):
            cmap = [-1] * cols
            for j in range(cols):
                # column j of B must land on a column of A matching under rp
                col = tuple(B[i][j] for i in range(rows))
                for j2 in range(cols):
                    if j2 not in cmap and tuple(A[rp[i]][j2] for i in range(rows)) == col:
                        cmap[j] = j2
                        break
            if -1 not in cmap:
                yield list(rp), cmap


def fourparts_route(g1: LabeledBigraph, g2: LabeledBigraph) -> tuple[int, int]:
    n1, k1, n2, k2 = g1.n, g1.k, g2.n, g2.k
    if n1 * k2 != n2 * k1 or len(g1) != n1 * k2 or len(g2) != n1 * k2:
        raise PreconditionError("need n1*k2 = n2*k1 = |E1| = |E2|")
    if not (g1.is_biregular() and g2.is_biregular()):
        raise PreconditionError("both multigraphs must be biregular")
    if k1 % n1 == 0:
        return k1 // n1, 0
    if n1 == n2 and k1 == k2:
        method, m, eps = balls_route(n1, k1)
        if method == "wind" and abs(eps) <= 2:
            return m, eps
    raise UncoveredParameters(f"parameters ({n1},{k1},{n2},{k2}) are outside the proven classes")


def solve_4parts(g1: LabeledBigraph, g2: LabeledBigraph) -> tuple[Permutation, dict]:
    """Bijection ψ: E1 -> E2 with [u2∘ψ, v1] and [u1∘ψ⁻¹, v2] all-ones.

    w1 colors E1 by L2 and w2 colors E2 by L1; after aligning the two
    exceptional structures by part permutations σ1, σ2, bucket (i, f) of
    (u1, w1) is sent position by position onto bucket (σ2(f), σ1⁻¹(i)) of
    (u2, w2).
    """
    m, eps = fourparts_route(g1, g2)
    w1, x1 = wind_coloring(g1, m, eps)
    w2, x2 = wind_coloring(g2, m, eps)
    if abs(eps) == 2:
        w1 = make_hamiltonian(g1, w1, m, eps)
        w2 = make_hamiltonian(g2, w2, m, eps)
        x1 = exceptional_graph(g1, w1, m, x1.sign)
        x2 = exceptional_graph(g2, w2, m, x2.sign)
    t1, t2 = bucket_table(g1, w1), bucket_table(g2, w2)
    N1, N2 = t1.counts, t2.counts
    n1, n2 = g1.n, g2.n
    B = tuple(tuple(x2.matrix[a][b] for a in range(n2)) for b in range(n1))
    chosen = None
    for rmap, cmap in _align_exceptional(B, x1.matrix):
        sigma1 = Permutation(tuple(rmap))
        sigma2 = Permutation(tuple(cmap)).inverse()
        s1inv = sigma1.inverse()
        if all(N1[i, f] == N2[sigma2(f), s1inv(i)] for i in range(n1) for f in range(n2)):
            chosen = sigma1, sigma2
            break
    if chosen is None:
        raise LemmaViolation("exceptional structures could not be aligned",
                             {"first": g1.to_json(), "second": g2.to_json(),
                              "w1": w1.to_json(), "w2": w2.to_json()})
    sigma1, sigma2 = chosen
    s1inv = sigma1.inverse()
    psi = [0] * len(g1)
    for (i, f), ids in t1.buckets.items():
        for a, b in zip(ids, t2[(sigma2(f), s1inv(i))]):
            psi[a] = b
    perm = Permutation(tuple(psi))
    cert = {"kind": "bijection", "first": g1.to_json(), "second": g2.to_json(),
            "psi": list(perm.images), "sigma1": list(sigma1.images),
            "sigma2": list(sigma2.images), "w1": w1.to_json(), "w2": w2.to_json(),
            "m": m, "eps": eps}
    ok1 = bracket_pair(compose_labels(g2.u, perm), g1.v, g2.n, g1.k) == uniform_matrix(g2.n, g1.k)
    ok2 = bracket_pair(compose_labels(g1.u, perm.inverse()), g2.v, g1.n, g2.k) == uniform_matrix(g1.n, g2.k)
    if not (ok1 and ok2):
        raise LemmaViolation("constructed bijection misses an all-ones bracket", cert)
    return perm, cert
