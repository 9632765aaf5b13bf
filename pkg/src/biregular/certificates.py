"""Standalone certificate validation.

Each checker re-derives the claim from raw JSON using plain lists, so a
bug in a solver cannot also hide in its checker.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import CertificateSchemaError


def _need(doc: dict, *keys):
    missing = [k for k in keys if k not in doc]
    if missing:
        raise CertificateSchemaError(f"certificate lacks field(s): {', '.join(missing)}")
    return [doc[k] for k in keys]


def _int_list(x, name: str) -> list[int]:
    if not isinstance(x, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in x):
        raise CertificateSchemaError(f"{name} must be a list of integers")
    return x


def _int_matrix(x, name: str) -> list[list[int]]:
    if not isinstance(x, list):
        raise CertificateSchemaError(f"{name} must be a list of rows")
    return [_int_list(r, name) for r in x]


def _instance(doc) -> tuple[int, int, list[int], list[int]]:
    if not isinstance(doc, dict):
        raise CertificateSchemaError("instance must be an object")
    n, k, edges = _need(doc, "n", "k", "edges")
    if not isinstance(n, int) or not isinstance(k, int):
        raise CertificateSchemaError("n and k must be integers")
    pairs = _int_matrix(edges, "edges")
    if any(len(p) != 2 for p in pairs):
        raise CertificateSchemaError("edges must be [left, right] pairs")
    return n, k, [p[0] for p in pairs], [p[1] for p in pairs]


def _is_biregular(n: int, k: int, u: list[int], v: list[int]) -> bool:
    if n < 1 or k < 1 or not u or len(u) % n or len(u) % k:
        return False
    if any(not 0 <= a < n for a in u) or any(not 0 <= b < k for b in v):
        return False
    ld, rd = [0] * n, [0] * k
    for a, b in zip(u, v):
        ld[a] += 1
        rd[b] += 1
    return all(d == len(u) // n for d in ld) and all(d == len(u) // k for d in rd)


def _all_ones(rows: int, cols: int, left: list[int], right: list[int]) -> bool:
    if len(left) != rows * cols:
        return False
    seen = set()
    for a, b in zip(left, right):
        if not (0 <= a < rows and 0 <= b < cols) or (a, b) in seen:
            return False
        seen.add((a, b))
    return True


def _is_perm(p: list[int], size: int) -> bool:
    return len(p) == size and sorted(p) == list(range(size))


def check_involution(doc: dict) -> bool:
    inst, iota = _need(doc, "instance", "involution")
    n, k, u, v = _instance(inst)
    iota = _int_list(iota, "involution")
    if len(u) != n * k or not _is_biregular(n, k, u, v) or not _is_perm(iota, len(u)):
        return False
    if any(iota[iota[e]] != e for e in range(len(u))):
        return False
    return _all_ones(n, k, [u[iota[e]] for e in range(len(u))], v)


def check_bijection(doc: dict) -> bool:
    first, second, psi = _need(doc, "first", "second", "psi")
    n1, k1, u1, v1 = _instance(first)
    n2, k2, u2, v2 = _instance(second)
    psi = _int_list(psi, "psi")
    if not (_is_biregular(n1, k1, u1, v1) and _is_biregular(n2, k2, u2, v2)):
        return False
    if not _is_perm(psi, len(u1)) or len(u1) != len(u2):
        return False
    inv = [0] * len(psi)
    for e, f in enumerate(psi):
        inv[f] = e
    return (_all_ones(n2, k1, [u2[psi[e]] for e in range(len(u1))], v1)
            and _all_ones(n1, k2, [u1[inv[f]] for f in range(len(u2))], v2))


def _square(adj: list[list[int]]) -> bool:
    return all(len(r) == len(adj) for r in adj)


def check_matching(doc: dict) -> bool:
    (bip,) = _need(doc, "bipartite")
    if bip:
        left, right, adj, mate = _need(doc, "left", "right", "adjacency", "mate")
        adj = _int_matrix(adj, "adjacency")
        mate = _int_list(mate, "mate")
        if len(adj) != left or any(len(r) != right for r in adj) or len(mate) != left:
            return False
        if any(not 0 <= j < right or adj[i][j] <= 0 for i, j in enumerate(mate)):
            return False
        return len(set(mate)) == left
    graph, mate = _need(doc, "graph", "mate")
    size, adj = _need(graph, "vertices", "adjacency")
    adj = _int_matrix(adj, "adjacency")
    mate = _int_list(mate, "mate")
    if len(adj) != size or not _square(adj) or len(mate) != size:
        return False
    for i, j in enumerate(mate):
        if not 0 <= j < size or mate[j] != i or adj[i][j] <= 0:
            return False
    return True


def check_deficient_set(doc: dict) -> bool:
    left, right, adj, subset = _need(doc, "left", "right", "adjacency", "subset")
    adj = _int_matrix(adj, "adjacency")
    subset = _int_list(subset, "subset")
    if len(adj) != left or any(len(r) != right for r in adj):
        return False
    if not subset or len(set(subset)) != len(subset) or any(not 0 <= i < left for i in subset):
        return False
    nbrs = {j for i in subset for j in range(right) if adj[i][j] > 0}
    return len(nbrs) < len(subset)


def check_tutte_obstruction(doc: dict) -> bool:
    graph, removed, comps = _need(doc, "graph", "removed", "odd_components")
    size, adj = _need(graph, "vertices", "adjacency")
    adj = _int_matrix(adj, "adjacency")
    removed = set(_int_list(removed, "removed"))
    comps = _int_matrix(comps, "odd_components")
    if len(adj) != size or not _square(adj) or any(not 0 <= x < size for x in removed):
        return False
    if any(adj[i][j] != adj[j][i] for i in range(size) for j in range(i)):
        return False
    if len(comps) <= len(removed):
        return False
    used: set[int] = set()
    for comp in comps:
        cs = set(comp)
        if len(cs) != len(comp) or len(comp) % 2 == 0 or cs & (removed | used):
            return False
        if any(not 0 <= x < size or adj[x][x] > 0 for x in comp):
            return False
        # closed under adjacency outside the removed set, and connected
        for x in comp:
            for y in range(size):
                if y != x and adj[x][y] > 0 and y not in removed and y not in cs:
                    return False
        reach, stack = {comp[0]}, [comp[0]]
        while stack:
            x = stack.pop()
            for y in comp:
                if y not in reach and adj[x][y] > 0:
                    reach.add(y)
                    stack.append(y)
        if reach != cs:
            return False
        used |= cs
    return True


def _frac(s) -> Fraction:
    try:
        return Fraction(s)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise CertificateSchemaError(f"not an exact number: {s!r}") from exc


def check_inequality(doc: dict) -> bool:
    """Recompute lhs and rhs from the stored matrix and cells."""
    matrix, cells, lhs, rhs, violated = _need(doc, "matrix", "cells", "lhs", "rhs", "violated")
    if not isinstance(matrix, list) or not matrix:
        raise CertificateSchemaError("matrix must be a non-empty list of rows")
    M = [[_frac(x) for x in row] for row in matrix]
    cells = [tuple(c) for c in _int_matrix(cells, "cells")]
    if any(len(r) != len(M[0]) for r in M) or len(cells) % 2 == 0 or len(set(cells)) != len(cells):
        return False
    if any(len(c) != 2 or not (0 <= c[0] < len(M) and 0 <= c[1] < len(M[0])) or M[c[0]][c[1]] != 0
           for c in cells):
        return False
    real_lhs = sum(M[a][d] * M[c][b] for a, b in cells for c, d in cells)
    real_rhs = (len(cells) - 1) * max(sum(r) for r in M) * max(sum(c) for c in zip(*M))
    return real_lhs == _frac(lhs) and real_rhs == _frac(rhs) and bool(violated) == (real_lhs > real_rhs)


CHECKERS = {
    "involution": check_involution,
    "bijection": check_bijection,
    "matching": check_matching,
    "deficient-set": check_deficient_set,
    "tutte-obstruction": check_tutte_obstruction,
    "inequality": check_inequality,
}


def certificate_check(cert) -> bool:
    """Validate a certificate given as a dict, JSON text or a path."""
    if isinstance(cert, Path) or (isinstance(cert, str) and cert.lstrip()[:1] not in ("{", "[")):
        cert = Path(cert).read_text()
    if isinstance(cert, str):
        try:
            cert = json.loads(cert)
        except json.JSONDecodeError as exc:
            raise CertificateSchemaError(f"malformed JSON: {exc}") from exc
    if not isinstance(cert, dict):
        raise CertificateSchemaError("certificate must be a JSON object")
    kind = cert.get("kind")
    if kind is None and "lhs" in cert and "cells" in cert:
        kind = "inequality"
    if kind not in CHECKERS:
        raise CertificateSchemaError(f"unknown certificate kind {kind!r}")
    try:
        return CHECKERS[kind](cert)
    except (TypeError, IndexError, KeyError, AttributeError) as exc:
        raise CertificateSchemaError(f"malformed {kind} certificate: {exc}") from exc
