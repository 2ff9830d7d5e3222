"""Operational oracle: exhaustive enumeration and seeded sampling."""

from fractions import Fraction

import pytest

from llmk.denot import denote_def
from llmk.gen import GenConfig, TermGen
from llmk.oracle import (
    BranchLimitExceeded,
    NonGroundResult,
    TraceDist,
    enumerate_dist,
    eval_mk_dist,
    mc_sample,
    total_variation,
)
from llmk.surface import Def, Program, parse_program
from llmk.syntax import MkLet, MkPair, MkPrimApp, MkVar

F = Fraction

TEXT = """
base Bool = {tt, ff};
prim coin : 1 -> Bool = { () -> {tt: 1/2, ff: 1/2} };
prim negb : Bool -> Bool = { tt -> {ff: 1}, ff -> {tt: 1} };
def correlated : M (Bool * Bool) = sample coin as x in (x, x);
def two : M (Bool * Bool) = sample coin, coin as x, y in (x, y);
def normalized : 1 = let x = coin(()) in ();
def anticorr : M (Bool * Bool) = sample coin as x in let y = negb(x) in (x, y);
def fun : M Bool -o M Bool = \\m : M Bool. sample m as x in x;
def applied : M Bool = fun coin;
"""
PROGRAM = parse_program(TEXT)


def test_enumerate_correlated_pair():
    # the oracle of record: product of the coin row with itself under copy
    dist = enumerate_dist(PROGRAM, "correlated")
    assert dist.as_dict() == {("tt", "tt"): F(1, 2), ("ff", "ff"): F(1, 2)}


def test_enumerate_normalization():
    dist = enumerate_dist(PROGRAM, "normalized")
    assert dist.as_dict() == {(): F(1)}


def test_enumerate_two_independent_coins():
    dist = enumerate_dist(PROGRAM, "two")
    assert dist.as_dict() == {
        ("tt", "tt"): F(1, 4),
        ("tt", "ff"): F(1, 4),
        ("ff", "tt"): F(1, 4),
        ("ff", "ff"): F(1, 4),
    }


def test_enumerate_follows_canonical_order():
    dist = enumerate_dist(PROGRAM, "two")
    assert [p for p, _ in dist.items] == [
        ("tt", "tt"), ("tt", "ff"), ("ff", "tt"), ("ff", "ff")
    ]


def test_enumerate_through_higher_order():
    dist = enumerate_dist(PROGRAM, "applied")
    assert dist.as_dict() == {"tt": F(1, 2), "ff": F(1, 2)}


def test_non_ground_definition_refused():
    with pytest.raises(NonGroundResult):
        enumerate_dist(PROGRAM, "fun")


def test_branch_cap():
    with pytest.raises(BranchLimitExceeded):
        enumerate_dist(PROGRAM, "two", cap=2)


def test_tracedist_validation():
    with pytest.raises(ValueError):
        TraceDist((("a", F(1, 2)),))  # mass 1/2
    with pytest.raises(ValueError):
        TraceDist((("a", F(1, 2)), ("a", F(1, 2))))  # duplicate outcome
    with pytest.raises(ValueError):
        TraceDist((("a", F(0)), ("b", F(1))))  # zero weight


def test_eval_mk_dist_environment():
    term = MkLet("y", MkPrimApp("negb", MkVar("x")), MkPair(MkVar("x"), MkVar("y")))
    assert eval_mk_dist(PROGRAM, {"x": "tt"}, term) == {("tt", "ff"): F(1)}


def test_mc_deterministic_and_reproducible():
    a = mc_sample(PROGRAM, "anticorr", seed=42, n=500)
    b = mc_sample(PROGRAM, "anticorr", seed=42, n=500)
    c = mc_sample(PROGRAM, "anticorr", seed=43, n=500)
    assert a == b
    assert sum(a.values()) == 500
    assert a != c  # overwhelmingly likely with 500 draws


def test_mc_zero_draws():
    assert mc_sample(PROGRAM, "correlated", seed=1, n=0) == {}


def test_mc_close_to_enumeration():
    exact = enumerate_dist(PROGRAM, "two")
    counts = mc_sample(PROGRAM, "two", seed=7, n=10000)
    assert total_variation(counts, 10000, exact) <= F(5, 100)


def test_mc_fair_coin_band():
    program = parse_program(
        "base Bool = {tt, ff};"
        "prim coin : 1 -> Bool = { () -> {tt: 1/2, ff: 1/2} };"
        "def flip : M Bool = coin;"
    )
    counts = mc_sample(program, "flip", seed=42, n=10000)
    assert abs(F(counts.get("tt", 0), 10000) - F(1, 2)) <= F(5, 100)


def test_mc_deterministic_term_single_outcome():
    counts = mc_sample(PROGRAM, "normalized", seed=3, n=50)
    assert counts == {(): 50}


def test_mc_through_higher_order():
    counts = mc_sample(PROGRAM, "applied", seed=11, n=2000)
    assert set(counts) <= {"tt", "ff"}
    assert sum(counts.values()) == 2000


def test_adequacy_on_structured_programs():
    # larger hand-built programs cover the evaluator paths the size-capped
    # generator rarely reaches: tensor pairs, tensor lets, nested
    # applications, multi-argument samples
    text = """
base Bool = {tt, ff};
prim coin : 1 -> Bool = { () -> {tt: 1/2, ff: 1/2} };
prim bias : 1 -> Bool = { () -> {tt: 1/3, ff: 2/3} };
prim negb : Bool -> Bool = { tt -> {ff: 1}, ff -> {tt: 1} };
prim join : Bool * Bool -> Bool = { (tt,tt) -> {tt: 1}, (tt,ff) -> {tt: 1/2, ff: 1/2}, (ff,tt) -> {ff: 1}, (ff,ff) -> {ff: 1} };
def lets : M Bool =
  let a (*) b = coin (*) bias in
  sample a, b as x, y in join((x, y));
def nested : M Bool =
  (\\f : M Bool -o M Bool. \\m : M Bool. f m)
    (\\m : M Bool. sample m as x in negb(x)) bias;
def wide : M (Bool * (Bool * Bool)) =
  sample coin, bias, coin as x, y, z in (x, (y, z));
def deep : M Bool =
  let p (*) q = (sample coin as x in negb(x)) (*) bias in
  (\\m : M Bool. sample m, q as x, y in join((x, y))) p;
"""
    program = parse_program(text)
    for name in ("lets", "nested", "wide", "deep"):
        mat = denote_def(program, name)
        column = {p: w for p, w in zip(mat.cols.points, mat.data[0]) if w != 0}
        assert enumerate_dist(program, name).as_dict() == column, name


def test_adequacy_on_generated_programs():
    gen = TermGen(GenConfig(seed=31, max_size=7), "adequacy-unit")
    for _ in range(60):
        lang, ty, t = gen.closed_ground_term(10)
        program = Program(
            bases=gen.program.bases,
            prims=gen.program.prims,
            defs={"probe": Def("probe", lang, ty, t)},
        )
        mat = denote_def(program, "probe")
        column = {p: w for p, w in zip(mat.cols.points, mat.data[0]) if w != 0}
        assert enumerate_dist(program, "probe").as_dict() == column
