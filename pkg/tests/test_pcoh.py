"""Coherence-space analysis: webs, polars, membership, morphisms."""

import itertools
import random
from fractions import Fraction

import pytest

from llmk.denot import denote_mk, denote_mk_type
from llmk.gen import GenConfig, TermGen, default_program
from llmk.matrix import Matrix, PROB, SizeCapError
from llmk.pcoh import (
    NotAKernelError,
    Web,
    check_bipolar_closed,
    check_pcoh_morphism,
    member,
    polar,
    polar_pairing_max,
    reify_kernel,
    web_lolli,
    web_meas,
    web_satisfies_pcs,
    web_tensor,
)
from llmk.syntax import MkBase, MkProd, MkUnit

F = Fraction
PROGRAM = default_program()
BASES = PROGRAM.bases
BOOL_T = MkBase("Bool")


def test_web_meas_unit():
    w = web_meas(BASES, MkUnit())
    assert w.gens == ((F(1),),)
    assert w.polar_gens == ((F(1),),)


def test_web_meas_bool():
    w = web_meas(BASES, BOOL_T)
    assert set(w.gens) == {(F(1), F(0)), (F(0), F(1))}
    assert w.polar_gens == ((F(1), F(1)),)


def test_web_meas_product_has_dirac_gens():
    w = web_meas(BASES, MkProd(BOOL_T, BOOL_T))
    assert len(w.gens) == 4
    assert w.polar_gens == ((F(1),) * 4,)
    assert all(sum(g) == 1 for g in w.gens)


def test_member_subprobability_vectors():
    w = web_meas(BASES, BOOL_T)
    assert member(w, (F(1, 2), F(1, 2)))
    assert not member(w, (F(1), F(1)))
    assert member(w, (F(0), F(0)))
    assert member(w, (F(1), F(0)))
    assert not member(w, (F(1, 2), F(2, 3)))


def test_member_agrees_with_polar_pairing():
    rng = random.Random(5)
    w = web_meas(BASES, MkProd(BOOL_T, MkUnit()))
    for _ in range(40):
        v = tuple(F(rng.randint(0, 5), 4) for _ in range(len(w.index)))
        assert member(w, v) == (polar_pairing_max(w, v) <= 1)


def test_polar_frozen_examples():
    w = web_meas(BASES, BOOL_T)
    assert polar(w.index, w.gens) == ((F(1), F(1)),)
    assert polar(w.index, ((F(1), F(1)),)) == ((F(0), F(1)), (F(1), F(0)))
    unit = web_meas(BASES, MkUnit())
    assert polar(unit.index, ((F(1),),)) == ((F(1),),)


def test_polar_size_cap():
    w = web_meas(BASES, MkProd(MkProd(BOOL_T, BOOL_T), BOOL_T))
    with pytest.raises(SizeCapError):
        polar(w.index, w.gens)


def test_bipolar_closed_for_small_webs():
    for t in (MkUnit(), BOOL_T, MkProd(BOOL_T, BOOL_T), MkProd(MkUnit(), BOOL_T)):
        w = web_meas(BASES, t)
        assert check_bipolar_closed(w)
        assert web_satisfies_pcs(w)


def test_bipolar_closed_for_constructed_webs():
    # tensor and function webs are built through polar computations and
    # must come out closed by construction
    wb = web_meas(BASES, BOOL_T)
    wu = web_meas(BASES, MkUnit())
    for web in (
        web_tensor(wb, wb),
        web_tensor(wb, wu),
        web_lolli(wb, wb),
        web_lolli(wu, wb),
    ):
        assert check_bipolar_closed(web)
        assert web_satisfies_pcs(web)


def test_bipolar_closure_of_degenerate_generators():
    # the set generated by {(2,0)} misses one coordinate entirely;
    # closing twice still yields the same generated set
    index = web_meas(BASES, BOOL_T).index
    gens = ((F(2), F(0)),)
    w = Web(index, gens, polar(index, gens))
    assert w.polar_gens == ((F(1, 2), F(0)),)
    assert check_bipolar_closed(w)
    assert not web_satisfies_pcs(w)  # first coherence condition fails


def test_tensor_web_matches_product_web_membership():
    wt = web_tensor(web_meas(BASES, BOOL_T), web_meas(BASES, BOOL_T))
    wm = web_meas(BASES, MkProd(BOOL_T, BOOL_T))
    assert wt.index.points == wm.index.points
    grid = [F(k, 4) for k in range(5)]
    for v in itertools.product(grid, repeat=4):
        assert member(wt, v) == member(wm, v)


def test_tensor_with_unit_web_is_isomorphic():
    wb = web_meas(BASES, BOOL_T)
    wt = web_tensor(wb, web_meas(BASES, MkUnit()))
    # index bijection (a, ()) <-> a
    grid = [F(k, 4) for k in range(5)]
    for v in itertools.product(grid, repeat=2):
        assert member(wt, v) == member(wb, v)


def test_lolli_from_unit_is_subprobability():
    wl = web_lolli(web_meas(BASES, MkUnit()), web_meas(BASES, BOOL_T))
    wb = web_meas(BASES, BOOL_T)
    grid = [F(k, 4) for k in range(5)]
    for v in itertools.product(grid, repeat=2):
        assert member(wl, v) == member(wb, v)


def test_lolli_web_contains_exactly_substochastic_matrices():
    # P(M Bool -o M Bool) as flattened 2x2 matrices: rows sum <= 1
    wl = web_lolli(web_meas(BASES, BOOL_T), web_meas(BASES, BOOL_T))
    grid = [F(k, 2) for k in range(3)]
    for v in itertools.product(grid, repeat=4):
        rows_ok = v[0] + v[1] <= 1 and v[2] + v[3] <= 1
        assert member(wl, v) == rows_ok, v


def test_pairing_bound_invariant():
    for w in (
        web_meas(BASES, BOOL_T),
        web_tensor(web_meas(BASES, BOOL_T), web_meas(BASES, BOOL_T)),
        web_lolli(web_meas(BASES, BOOL_T), web_meas(BASES, BOOL_T)),
    ):
        for g in w.gens:
            for h in w.polar_gens:
                assert sum((a * b for a, b in zip(g, h)), F(0)) <= 1


def test_coord_bounds():
    w = web_meas(BASES, BOOL_T)
    assert w.coord_bounds() == (F(1), F(1))


def test_stochastic_matrices_are_morphisms():
    rng = random.Random(9)
    wb = web_meas(BASES, BOOL_T)
    for _ in range(20):
        a = F(rng.randint(0, 8), 8)
        b = F(rng.randint(0, 8), 8)
        m = Matrix(wb.index, wb.index, PROB, [[a, 1 - a], [b, 1 - b]])
        assert check_pcoh_morphism(m, wb, wb)


def test_column_mass_two_is_not_a_morphism():
    wu = web_meas(BASES, MkUnit())
    wb = web_meas(BASES, BOOL_T)
    m = Matrix(wu.index, wb.index, PROB, [[F(2), F(0)]])
    assert not check_pcoh_morphism(m, wu, wb)


def test_generated_kernels_are_morphisms():
    gen = TermGen(GenConfig(seed=21), "pcoh-kernels")
    for _ in range(30):
        tau1 = gen.random_mk_type(0)
        tau2 = gen.random_mk_type(1)
        x = gen.fresh("x")
        term = gen.gen_mk(((x, tau1),), tau2)
        mat = denote_mk(gen.program, ((x, tau1),), term)
        flat = Matrix(
            denote_mk_type(BASES, tau1), mat.cols, mat.semiring, mat.data
        )
        assert check_pcoh_morphism(
            flat, web_meas(BASES, tau1), web_meas(BASES, tau2)
        )


def test_reify_kernel_roundtrip():
    from llmk.denot import prim_matrix

    coin_col = prim_matrix(PROGRAM, "coin")
    assert reify_kernel(BASES, coin_col, MkUnit(), BOOL_T) is coin_col


def test_reify_rejects_substochastic():
    wu = web_meas(BASES, MkUnit())
    m = Matrix(wu.index, web_meas(BASES, BOOL_T).index, PROB, [[F(1, 4), F(1, 4)]])
    with pytest.raises(NotAKernelError):
        reify_kernel(BASES, m, MkUnit(), BOOL_T)


def test_reify_rejects_overweight_rows():
    wb = web_meas(BASES, BOOL_T)
    bad = Matrix(wb.index, wb.index, PROB, [[F(1, 2), F(1, 2)], [F(3, 2), F(0)]])
    with pytest.raises(NotAKernelError):
        reify_kernel(BASES, bad, BOOL_T, BOOL_T)


def test_member_rejects_negative_vectors():
    wb = web_meas(BASES, BOOL_T)
    with pytest.raises(ValueError):
        member(wb, (F(-1), F(0)))


def test_reify_of_denoted_kernel():
    from llmk.syntax import MkPrimApp, MkVar

    gen = TermGen(GenConfig(seed=2), "reify")
    term = MkPrimApp("noisy", MkVar("x"))
    mat = denote_mk(PROGRAM, (("x", BOOL_T),), term)
    flat = Matrix(denote_mk_type(BASES, BOOL_T), mat.cols, mat.semiring, mat.data)
    out = reify_kernel(BASES, flat, BOOL_T, BOOL_T)
    assert out.get("tt", "tt") == F(3, 4)
