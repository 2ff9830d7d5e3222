"""Exact simplex and vertex enumeration against brute-force oracles."""

import random
from fractions import Fraction

import pytest

from llmk.linprog import (
    OPTIMAL,
    UNBOUNDED,
    canonical_generators,
    double_description,
    polar_vertices,
    simplex_max,
)

from brute import brute_polar_vertices, solve_square

F = Fraction


def test_simplex_known_optimum():
    # max x + y  s.t.  x + 2y <= 4, 3x + y <= 6  ->  (8/5, 6/5), value 14/5
    status, value, x = simplex_max(
        [F(1), F(1)], [(([F(1), F(2)]), F(4)), (([F(3), F(1)]), F(6))]
    )
    assert status == OPTIMAL
    assert value == F(14, 5)
    assert x == (F(8, 5), F(6, 5))


def test_simplex_detects_unbounded():
    status, value, x = simplex_max([F(1), F(1)], [([F(1), F(0)], F(1))])
    assert status == UNBOUNDED
    assert value is None


def test_simplex_zero_objective():
    status, value, _ = simplex_max([F(0)], [([F(1)], F(5))])
    assert status == OPTIMAL and value == 0


def test_simplex_degenerate_terminates():
    # several redundant constraints through the same vertex (Bland's rule)
    constraints = [
        ([F(1), F(1)], F(1)),
        ([F(2), F(2)], F(2)),
        ([F(1), F(0)], F(1)),
        ([F(0), F(1)], F(1)),
        ([F(3), F(3)], F(3)),
    ]
    status, value, _ = simplex_max([F(1), F(1)], constraints)
    assert status == OPTIMAL and value == 1


def test_simplex_rejects_negative_rhs():
    with pytest.raises(ValueError):
        simplex_max([F(1)], [([F(1)], F(-1))])


def test_simplex_agrees_with_vertex_scan():
    rng = random.Random(17)
    for _ in range(40):
        dim = rng.randint(1, 3)
        gens = [
            tuple(F(rng.randint(0, 4), rng.randint(1, 3)) for _ in range(dim))
            for _ in range(rng.randint(1, 4))
        ]
        # force boundedness: every coordinate constrained
        gens.append(tuple(F(1) for _ in range(dim)))
        objective = [F(rng.randint(0, 5), rng.randint(1, 3)) for _ in range(dim)]
        status, value, _ = simplex_max(
            objective, [(g, F(1)) for g in gens]
        )
        assert status == OPTIMAL
        brute = max(
            sum((a * b for a, b in zip(objective, v)), F(0))
            for v in brute_polar_vertices(gens, dim)
        )
        assert value == brute


def test_solve_square_oracle_sanity():
    assert solve_square([(F(2), F(0)), (F(0), F(4))], [F(2), F(2)]) == (
        F(1), F(1, 2)
    )
    assert solve_square([(F(1), F(1)), (F(2), F(2))], [F(1), F(2)]) is None


# ---------------------------------------------------------------------------
# Double description vs brute force

def test_polar_of_point_masses_is_all_ones():
    gens = [(F(1), F(0)), (F(0), F(1))]
    vertices, rays = polar_vertices(gens, 2)
    assert canonical_generators(vertices) == ((F(1), F(1)),)
    assert rays == []


def test_polar_of_all_ones_is_point_masses():
    # expected vertices frozen from the brute-force oracle:
    # {(0,0), (1,0), (0,1)} with the dominated origin pruned
    gens = [(F(1), F(1))]
    assert brute_polar_vertices(gens, 2) == {
        (F(0), F(0)), (F(1), F(0)), (F(0), F(1))
    }
    vertices, _ = polar_vertices(gens, 2)
    assert canonical_generators(vertices) == ((F(0), F(1)), (F(1), F(0)))


def test_polar_singleton_self_dual():
    vertices, _ = polar_vertices([(F(1),)], 1)
    assert canonical_generators(vertices) == ((F(1),),)


def test_untouched_coordinate_reports_ray():
    vertices, rays = polar_vertices([(F(2), F(0))], 2)
    assert canonical_generators(vertices) == ((F(1, 2), F(0)),)
    assert rays == [(F(0), F(1))]


def test_double_description_matches_brute_force():
    rng = random.Random(23)
    for _ in range(60):
        dim = rng.randint(1, 4)
        n = rng.randint(1, 4)
        gens = [
            tuple(F(rng.randint(0, 3), rng.randint(1, 3)) for _ in range(dim))
            for _ in range(n)
        ]
        gens = [g for g in gens if any(x != 0 for x in g)]
        if not gens:
            continue
        vertices, _ = polar_vertices(gens, dim)
        assert canonical_generators(vertices) == canonical_generators(
            brute_polar_vertices(gens, dim)
        )


def test_canonical_generators_prunes():
    vs = [(F(1), F(0)), (F(1), F(1)), (F(0), F(0)), (F(1), F(1))]
    assert canonical_generators(vs) == ((F(1), F(1)),)


def test_double_description_cone():
    rays = double_description([(F(1), F(-1))], 2)  # y >= x within the orthant
    assert set(rays) == {(F(0), F(1)), (F(1), F(1))}
