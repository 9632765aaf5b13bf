"""The odd-cycle matrix inequality.

For a non-negative matrix M, an odd t and distinct zero cells
(x_1, y_1), ..., (x_t, y_t):

    sum_{i,j} M[x_i][y_j] * M[x_j][y_i]  <=  (t - 1) * ||M||_inf * ||M||_1

where ||M||_inf is the largest row sum and ||M||_1 the largest column sum.
Both sides are computed exactly; only the spectral certificate of the
square case uses floating point.
"""
from __future__ import annotations

import math
import random
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import BudgetExceeded, ConstraintBreach, PreconditionError

DEFAULT_SUBSET_BUDGET = 2_000_000


def _exact(x) -> int | Fraction:
    if isinstance(x, int):
        return x
    f = Fraction(x)
    return f.numerator if f.denominator == 1 else f


def fmt(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class InequalityInstance:
    matrix: tuple[tuple[int | Fraction, ...], ...]
    cells: tuple[tuple[int, int], ...]

    def __post_init__(self):
        mat = tuple(tuple(_exact(x) for x in row) for row in self.matrix)
        cells = tuple((int(a), int(b)) for a, b in self.cells)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "cells", cells)
        if not mat or any(len(r) != len(mat[0]) for r in mat):
            raise PreconditionError("matrix must be a non-empty rectangle")
        if any(x < 0 for r in mat for x in r):
            raise PreconditionError("entries must be non-negative")
        if len(set(cells)) != len(cells):
            raise PreconditionError("cells must be distinct")
        if len(cells) % 2 == 0:
            raise PreconditionError("the number of cells must be odd")
        for a, b in cells:
            if not (0 <= a < len(mat) and 0 <= b < len(mat[0])) or mat[a][b] != 0:
                raise PreconditionError(f"cell {(a, b)} is not a zero entry")

    @property
    def t(self) -> int:
        return len(self.cells)


def row_norm(M) -> int | Fraction:
    return max(sum(r) for r in M)


def col_norm(M) -> int | Fraction:
    return max(sum(c) for c in zip(*M))


def _lhs(M, cells) -> int | Fraction:
    total = 0
    for xi, yi in cells:
        row = M[xi]
        for xj, yj in cells:
            total += row[yj] * M[xj][yi]
    return total


def inequality_sides(inst: InequalityInstance) -> tuple[int | Fraction, int | Fraction]:
    M = inst.matrix
    return _lhs(M, inst.cells), (inst.t - 1) * row_norm(M) * col_norm(M)


def report(inst: InequalityInstance) -> dict:
    lhs, rhs = inequality_sides(inst)
    return {"matrix": [[fmt(x) if isinstance(x, Fraction) else x for x in r] for r in inst.matrix],
            "cells": [list(c) for c in inst.cells], "lhs": fmt(lhs), "rhs": fmt(rhs),
            "slack": fmt(rhs - lhs), "violated": lhs > rhs}


def zero_cells(M) -> list[tuple[int, int]]:
    return [(x, y) for x, row in enumerate(M) for y, v in enumerate(row) if v == 0]


def exhaustive_check(M: Sequence[Sequence], max_t: int | None = None,
                     budget: int = DEFAULT_SUBSET_BUDGET) -> dict:
    """Worst lhs - rhs over every odd subset of zero cells with t <= max_t.

    The report holds the largest excess, its witness (the first in
    enumeration order among equals), the first violating subset if any,
    and the number of subsets scanned.
    """
    M = tuple(tuple(_exact(x) for x in row) for row in M)
    zeros = zero_cells(M)
    if not zeros:
        return {"zero_cells": 0, "subsets": 0, "worst_excess": None, "worst_cells": None,
                "violation": None, "holds": True}
    top = len(zeros) if max_t is None else min(max_t, len(zeros))
    sizes = list(range(1, top + 1, 2))
    planned = sum(math.comb(len(zeros), t) for t in sizes)
    if planned > budget:
        raise BudgetExceeded(f"{planned} subsets exceed budget {budget}", 0)
    norms = row_norm(M) * col_norm(M)
    worst, worst_cells, violation, scanned = None, None, None, 0
    for t in sizes:
        rhs = (t - 1) * norms
        for cells in combinations(zeros, t):
            scanned += 1
            excess = _lhs(M, cells) - rhs
            if worst is None or excess > worst:
                worst, worst_cells = excess, cells
            if excess > 0 and violation is None:
                violation = cells
    return {"zero_cells": len(zeros), "subsets": scanned, "worst_excess": fmt(worst),
            "worst_cells": [list(c) for c in worst_cells],
            "violation": [list(c) for c in violation] if violation else None,
            "holds": violation is None}


def lambdas_bound(lambdas: Sequence[float], kappa: float, tol: float = 1e-9) -> bool:
    """Sum of squares bound for odd-length, zero-sum lists in [-kappa, kappa].

    Raises ``ConstraintBreach`` when the hypotheses fail (length even, an
    entry outside the interval, nonzero sum); returns whether
    ``sum(l^2) <= (t - 1) kappa^2`` holds up to ``tol``.
    """
    t = len(lambdas)
    if t % 2 == 0:
        raise ConstraintBreach("t must be odd")
    scale = max(1.0, kappa * kappa)
    if any(abs(x) > kappa + tol * max(1.0, kappa) for x in lambdas):
        raise ConstraintBreach("an entry lies outside [-kappa, kappa]")
    if abs(sum(lambdas)) > tol * t * max(1.0, kappa):
        raise ConstraintBreach("entries do not sum to zero")
    return sum(x * x for x in lambdas) <= (t - 1) * kappa * kappa + tol * t * scale


def square_case_certificate(inst: InequalityInstance, sum_tol: float = 1e-9,
                            square_tol: float = 1e-6) -> dict:
    """Spectral certificate when all x_i are distinct and all y_i are distinct.

    B[i][j] = sqrt(M[x_i][y_j] * M[x_j][y_i]) is symmetric with zero
    diagonal, so its eigenvalues sum to 0, are bounded by
    kappa = sqrt(||M||_inf ||M||_1), and their squares sum to the exact lhs.
    """
    xs = [a for a, _ in inst.cells]
    ys = [b for _, b in inst.cells]
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        raise PreconditionError("square case needs distinct rows and distinct columns")
    M = inst.matrix
    t = inst.t
    B = np.array([[math.sqrt(float(M[xi][yj] * M[xj][yi])) for (xj, yj) in inst.cells]
                  for (xi, yi) in inst.cells], dtype=float)
    lam = np.linalg.eigvalsh(B)
    if not np.all(np.isfinite(lam)):
        raise ArithmeticError("eigenvalue computation did not converge")
    lhs, rhs = inequality_sides(inst)
    kappa = math.sqrt(float(row_norm(M) * col_norm(M)))
    sum_lam = float(lam.sum())
    sum_sq = float((lam ** 2).sum())
    checks = {
        "trace_zero": abs(sum_lam) <= sum_tol * t * max(kappa, 1.0),
        "spectral_radius": bool(np.all(np.abs(lam) <= kappa + sum_tol * max(kappa, 1.0))),
        "squares_match_lhs": abs(sum_sq - float(lhs)) <= square_tol * max(1.0, float(lhs)),
        "lhs_le_rhs": lhs <= rhs,
    }
    try:
        checks["lambda_bound"] = lambdas_bound(lam.tolist(), kappa, sum_tol)
    except ConstraintBreach:
        checks["lambda_bound"] = False
    return {"t": t, "eigenvalues": lam.tolist(), "kappa": kappa, "sum": sum_lam,
            "sum_squares": sum_sq, "lhs": fmt(lhs), "rhs": fmt(rhs), "checks": checks,
            "passed": all(checks.values())}


def random_matrix(rows: int, cols: int, density: float, rng: random.Random) -> list[list[int]]:
    """Entries are 0 with probability ``density``, else uniform on 1..9."""
    return [[0 if rng.random() < density else rng.randint(1, 9) for _ in range(cols)]
            for _ in range(rows)]


def random_counterexample_search(shape: tuple[int, int], density: float, trials: int,
                                 seed: int) -> dict:
    """Seeded campaign over random matrices and random odd zero-cell subsets.

    Reports the smallest slack rhs - lhs seen and the instance attaining it.
    """
    rng = random.Random(seed)
    rows, cols = shape
    best = None
    best_inst = None
    violations = 0
    sampled = 0
    for _ in range(trials):
        M = random_matrix(rows, cols, density, rng)
        zeros = zero_cells(M)
        if not zeros:
            continue
        t = rng.randrange(1, len(zeros) + 1, 2)
        cells = rng.sample(zeros, t)
        sampled += 1
        lhs = _lhs(M, cells)
        slack = (t - 1) * row_norm(M) * col_norm(M) - lhs
        if slack < 0:
            violations += 1
        if best is None or slack < best:
            best, best_inst = slack, (M, cells)
    out = {"shape": list(shape), "density": density, "trials": trials, "seed": seed,
           "sampled": sampled, "violations": violations,
           "min_slack": None if best is None else fmt(best), "witness": None}
    if best_inst is not None:
        out["witness"] = report(InequalityInstance(tuple(map(tuple, best_inst[0])), tuple(best_inst[1])))
    return out
