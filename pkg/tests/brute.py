"""Brute-force oracles used only by tests.

These deliberately share no code with the implementation paths they
check: vertex enumeration by solving every square subsystem of
constraints, and Gaussian elimination over exact rationals.
"""

from fractions import Fraction
from itertools import combinations


def solve_square(rows, rhs):
    """Solve a square rational system; None when singular."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        pivot = next(
            (r for r in range(col, n) if aug[r][col] != 0), None
        )
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return tuple(aug[r][n] for r in range(n))


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def brute_polar_vertices(gens, dim):
    """All vertices of {w >= 0 : <g, w> <= 1} by constraint intersections."""
    rows = [(tuple(Fraction(x) for x in g), Fraction(1)) for g in gens]
    for i in range(dim):
        e = [Fraction(0)] * dim
        e[i] = Fraction(1)
        rows.append((tuple(e), Fraction(0)))  # w_i = 0 when tight
    vertices = set()
    for combo in combinations(range(len(rows)), dim):
        sub = [rows[i][0] for i in combo]
        rhs = [rows[i][1] for i in combo]
        x = solve_square(sub, rhs)
        if x is None:
            continue
        if any(v < 0 for v in x):
            continue
        if all(_dot(g, x) <= 1 for g, _ in rows[: len(gens)]):
            vertices.add(tuple(x))
    return vertices


def brute_lp_max(objective, gens, extra_bound=None):
    """Maximize over the polar polytope by scanning its vertices.

    Only valid when the polytope is bounded (every coordinate touched).
    """
    dim = len(objective)
    vertices = brute_polar_vertices(gens, dim)
    return max(_dot(objective, v) for v in vertices)
