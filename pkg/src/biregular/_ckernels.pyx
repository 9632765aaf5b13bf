# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels.  Contracts match ``_kernels_py`` exactly."""
from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

from biregular.errors import BudgetExceeded

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

MAX_HALL_LEFT = 62
MAX_HALL_RIGHT = 64
MAX_EDGES = 64


cdef struct HallBest:
    long long num
    long long den
    uint64_t mask


cdef inline bint _lex_less(uint64_t a, uint64_t b) nogil:
    cdef uint64_t d = a ^ b
    return (a & d & (~d + 1)) != 0


cdef void _hall_visit(const uint64_t* adj, int n, int start, uint64_t mask,
                      uint64_t nb, int size, HallBest* best) nogil:
    cdef int j, c, s2
    cdef uint64_t m2, nb2
    cdef long long lhs, rhs
    cdef bint better
    for j in range(start, n):
        m2 = mask | ((<uint64_t>1) << j)
        nb2 = nb | adj[j]
        s2 = size + 1
        c = __builtin_popcountll(nb2)
        if best.num < 0:
            better = True
        else:
            lhs = c * best.den
            rhs = best.num * s2
            better = lhs < rhs or (lhs == rhs and (s2 < best.den or (s2 == best.den and _lex_less(m2, best.mask))))
        if better:
            best.num = c
            best.den = s2
            best.mask = m2
        _hall_visit(adj, n, j + 1, m2, nb2, s2, best)


def hall_scan(adj, int n_left):
    """Minimise |N(X)|/|X| over non-empty left subsets X (bitmask input)."""
    if n_left > MAX_HALL_LEFT:
        raise ValueError("left part too large for the compiled scan")
    cdef uint64_t* cadj = <uint64_t*>malloc(max(n_left, 1) * sizeof(uint64_t))
    cdef HallBest best
    cdef int i
    best.num = -1
    best.den = 1
    best.mask = 0
    try:
        for i in range(n_left):
            if adj[i] >> MAX_HALL_RIGHT:
                raise ValueError("right part too large for the compiled scan")
            cadj[i] = adj[i]
        with nogil:
            _hall_visit(cadj, n_left, 0, 0, 0, 0, &best)
    finally:
        free(cadj)
    return int(best.num), int(best.den), int(best.mask)


cdef struct Search:
    int size
    int k
    int* u
    int* v
    int* mate
    char* used
    long long nodes
    long long budget


cdef int _inv_rec(Search* s, int e) nogil:
    # 1 = found, 0 = exhausted, -1 = budget
    cdef int a, c, b, d, f, r
    cdef uint64_t tried = 0
    cdef uint64_t bit
    while e < s.size and s.mate[e] != -1:
        e += 1
    if e == s.size:
        return 1
    s.nodes += 1
    if s.budget > 0 and s.nodes > s.budget:
        return -1
    a = s.u[e]
    c = s.v[e]
    if not s.used[a * s.k + c]:
        s.used[a * s.k + c] = 1
        s.mate[e] = e
        r = _inv_rec(s, e + 1)
        if r != 0:
            return r
        s.used[a * s.k + c] = 0
        s.mate[e] = -1
    for f in range(e + 1, s.size):
        if s.mate[f] != -1:
            continue
        b = s.u[f]
        d = s.v[f]
        if b == a:
            continue
        bit = (<uint64_t>1) << (b * s.k + d)
        if tried & bit:
            continue
        tried |= bit
        if s.used[b * s.k + c] or s.used[a * s.k + d]:
            continue
        s.used[b * s.k + c] = 1
        s.used[a * s.k + d] = 1
        s.mate[e] = f
        s.mate[f] = e
        r = _inv_rec(s, e + 1)
        if r != 0:
            return r
        s.used[b * s.k + c] = 0
        s.used[a * s.k + d] = 0
        s.mate[e] = -1
        s.mate[f] = -1
    return 0


def involution_search(u, v, int n, int k, long long node_budget=0):
    """Backtracking search for an involution with [u∘ι, v] all-ones."""
    cdef int size = len(u)
    cdef int i, r
    cdef Search s
    if size > MAX_EDGES or n * k > MAX_EDGES:
        raise ValueError("instance too large for the compiled search")
    s.size = size
    s.k = k
    s.nodes = 0
    s.budget = node_budget
    s.u = <int*>malloc(max(size, 1) * sizeof(int))
    s.v = <int*>malloc(max(size, 1) * sizeof(int))
    s.mate = <int*>malloc(max(size, 1) * sizeof(int))
    s.used = <char*>malloc(max(n * k, 1) * sizeof(char))
    try:
        for i in range(size):
            s.u[i] = u[i]
            s.v[i] = v[i]
            s.mate[i] = -1
        for i in range(n * k):
            s.used[i] = 0
        with nogil:
            r = _inv_rec(&s, 0)
        if r < 0:
            raise BudgetExceeded("involution search exceeded node budget", s.nodes - 1)
        if r == 0:
            return None
        return [s.mate[i] for i in range(size)]
    finally:
        free(s.u)
        free(s.v)
        free(s.mate)
        free(s.used)
