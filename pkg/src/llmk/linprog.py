"""Exact rational linear programming and polar vertex enumeration.

Two engines, no floating point anywhere:

* ``simplex_max`` maximizes a linear objective over ``{x >= 0 : Ax <= b}``
  with ``b >= 0`` (so the slack basis is feasible and no phase one is
  needed).  Pivoting uses Bland's rule, which guarantees termination.

* ``double_description`` incrementally computes the extreme rays of a
  polyhedral cone inside the nonnegative orthant.  ``polar_vertices``
  homogenizes ``{w >= 0 : <g, w> <= 1 for all g}`` into such a cone and
  reads the vertices off the rays with positive last coordinate; rays
  with last coordinate zero are unbounded directions of the polar, which
  arise only when some coordinate is touched by no generator, and are
  reported separately.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Vec = tuple[Fraction, ...]

UNBOUNDED = "unbounded"
OPTIMAL = "optimal"


def simplex_max(objective, constraints):
    """Maximize ``objective . x`` over ``{x >= 0 : each <coeffs, x> <= rhs}``.

    Returns ``(status, value, solution)`` where status is ``"optimal"``
    or ``"unbounded"``; for unbounded problems value and solution are
    None.  Every rhs must be nonnegative.
    """
    n = len(objective)
    m = len(constraints)
    for coeffs, rhs in constraints:
        if len(coeffs) != n:
            raise ValueError("constraint arity mismatch")
        if rhs < 0:
            raise ValueError("negative right-hand side; origin must be feasible")

    # tableau rows: [A | I | b]; cost row holds reduced costs for max
    tab = []
    for i, (coeffs, rhs) in enumerate(constraints):
        row = [Fraction(c) for c in coeffs]
        row += [Fraction(1) if j == i else Fraction(0) for j in range(m)]
        row.append(Fraction(rhs))
        tab.append(row)
    cost = [Fraction(c) for c in objective] + [Fraction(0)] * (m + 1)
    basis = [n + i for i in range(m)]
    total = n + m

    while True:
        # Bland: entering variable = lowest index with positive reduced cost
        enter = next((j for j in range(total) if cost[j] > 0), None)
        if enter is None:
            break
        # ratio test; ties broken by lowest basis variable index (Bland)
        leave = None
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave is None:
            return UNBOUNDED, None, None
        pivot = tab[leave][enter]
        tab[leave] = [v / pivot for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [v - f * w for v, w in zip(tab[i], tab[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [v - f * w for v, w in zip(cost, tab[leave])]
        basis[leave] = enter

    solution = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            solution[b] = tab[i][-1]
    value = -cost[-1]
    return OPTIMAL, value, tuple(solution)


# ---------------------------------------------------------------------------
# Double description

def _primitive(ray) -> Vec:
    """Scale a rational ray to a primitive integer vector (canonical form)."""
    denominators = [v.denominator for v in ray]
    lcm = 1
    for d in denominators:
        lcm = lcm * d // gcd(lcm, d)
    ints = [int(v * lcm) for v in ray]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g == 0:
        return tuple(Fraction(0) for _ in ray)
    return tuple(Fraction(v, g) for v in ints)


def double_description(rows: list[Vec], dim: int) -> list[Vec]:
    """Extreme rays of ``{y >= 0 : <row, y> <= 0 for each row}``.

    Starts from the nonnegative orthant's unit rays and inserts one
    inequality at a time, combining adjacent rays across the cut.
    Adjacency uses the combinatorial test: two rays are adjacent when no
    third ray is tight on every constraint they are both tight on.
    """
    unit = [Fraction(0)] * dim
    rays: list[Vec] = []
    for i in range(dim):
        e = list(unit)
        e[i] = Fraction(1)
        rays.append(tuple(e))

    # tight-set bookkeeping: nonnegativity constraints then inserted rows
    def tight_set(ray, inserted):
        t = {("n", i) for i in range(dim) if ray[i] == 0}
        for k, row in enumerate(inserted):
            if _dot(row, ray) == 0:
                t.add(("g", k))
        return frozenset(t)

    inserted: list[Vec] = []
    for row in rows:
        values = [_dot(row, r) for r in rays]
        keep = [r for r, v in zip(rays, values) if v <= 0]
        plus = [(r, v) for r, v in zip(rays, values) if v > 0]
        minus = [(r, v) for r, v in zip(rays, values) if v < 0]
        if plus and minus:
            tights = {r: tight_set(r, inserted) for r in rays}
            new = []
            for rp, vp in plus:
                for rm, vm in minus:
                    common = tights[rp] & tights[rm]
                    adjacent = True
                    for other in rays:
                        if other is rp or other is rm:
                            continue
                        if common <= tights[other]:
                            adjacent = False
                            break
                    if adjacent:
                        combo = tuple(
                            vp * b - vm * a for a, b in zip(rp, rm)
                        )
                        new.append(_primitive(combo))
            keep.extend(new)
        inserted.append(row)
        # dedup (combinations can coincide)
        seen = set()
        rays = []
        for r in keep:
            r = _primitive(r)
            if r not in seen and any(v != 0 for v in r):
                seen.add(r)
                rays.append(r)
    return rays


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def polar_vertices(gens: list[Vec], dim: int) -> tuple[list[Vec], list[Vec]]:
    """Vertices and unbounded directions of ``{w >= 0 : <g, w> <= 1}``.

    Homogenizes with one extra coordinate ``t`` and runs double
    description; rays with ``t > 0`` normalize to vertices, rays with
    ``t = 0`` are recession directions.
    """
    rows = [tuple(list(g) + [Fraction(-1)]) for g in gens]
    rays = double_description(rows, dim + 1)
    vertices = []
    directions = []
    for ray in rays:
        t = ray[-1]
        if t > 0:
            vertices.append(tuple(v / t for v in ray[:-1]))
        else:
            directions.append(tuple(ray[:-1]))
    return vertices, directions


def dominated(v: Vec, others) -> bool:
    """True when some distinct vector is coordinatewise at least ``v``."""
    for u in others:
        if u is not v and u != v and all(a <= b for a, b in zip(v, u)):
            return True
    return False


def canonical_generators(vecs) -> tuple[Vec, ...]:
    """Sort, deduplicate, and drop dominated and zero vectors."""
    unique = sorted(set(tuple(Fraction(x) for x in v) for v in vecs))
    kept = [
        v for v in unique
        if any(x != 0 for x in v) and not dominated(v, unique)
    ]
    if not kept and unique:
        kept = [unique[0]]
    return tuple(kept)
