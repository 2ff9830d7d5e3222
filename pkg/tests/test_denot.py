"""Denotational semantics: kernel matrices, linear matrices, the
relational reading, and agreement with the operational oracle."""

from fractions import Fraction

import pytest

from llmk.denot import (
    denote_ll,
    denote_mk,
    denote_mk_type,
    distribution,
    format_distribution,
    observe_denote,
    web_index,
)
from llmk.gen import default_program
from llmk.matrix import BOOL, SizeCapError, UNIT_SET
from llmk.oracle import eval_mk_dist
from llmk.surface import parse_program
from llmk.syntax import (
    LlLam,
    LlSample,
    LlVar,
    Lolli,
    Meas,
    MkBase,
    MkLet,
    MkPair,
    MkPrimApp,
    MkProd,
    MkUnit,
    MkUnitVal,
    MkVar,
)

PROGRAM = default_program()
BOOL_T = MkBase("Bool")
HALF = Fraction(1, 2)


def test_denote_type_enumeration():
    assert denote_mk_type(PROGRAM.bases, MkUnit()).points == ((),)
    assert denote_mk_type(PROGRAM.bases, MkProd(BOOL_T, BOOL_T)).points == (
        ("tt", "tt"), ("tt", "ff"), ("ff", "tt"), ("ff", "ff")
    )
    assert denote_mk_type(PROGRAM.bases, MkProd(BOOL_T, MkUnit())).points == (
        ("tt", ()), ("ff", ())
    )


def test_web_index_sizes_multiply():
    t = Lolli(Meas(BOOL_T), Meas(MkProd(BOOL_T, BOOL_T)))
    assert len(web_index(PROGRAM.bases, t)) == 8
    with pytest.raises(SizeCapError):
        web_index(PROGRAM.bases, t, cap=4)


def test_denote_mk_var_is_identity():
    m = denote_mk(PROGRAM, (("x", BOOL_T),), MkVar("x"))
    assert m.get(("tt",), "tt") == 1
    assert m.get(("tt",), "ff") == 0
    assert m.get(("ff",), "ff") == 1


def test_denote_mk_copy_pair():
    m = denote_mk(PROGRAM, (("x", BOOL_T),), MkPair(MkVar("x"), MkVar("x")))
    assert m.get(("tt",), ("tt", "tt")) == 1
    assert m.get(("tt",), ("tt", "ff")) == 0
    assert m.get(("ff",), ("ff", "ff")) == 1


def test_denote_mk_let_negb_matches_oracle():
    # expected rows derived from the trace-enumeration oracle
    term = MkLet("y", MkPrimApp("negb", MkVar("x")), MkPair(MkVar("x"), MkVar("y")))
    m = denote_mk(PROGRAM, (("x", BOOL_T),), term)
    for point in ("tt", "ff"):
        oracle_row = eval_mk_dist(PROGRAM, {"x": point}, term)
        for col in m.cols.points:
            assert m.get((point,), col) == oracle_row.get(col, Fraction(0))
    assert m.get(("tt",), ("tt", "ff")) == 1
    assert m.get(("ff",), ("ff", "tt")) == 1


def test_denote_mk_rows_sum_to_one():
    term = MkLet("y", MkPrimApp("coin", MkUnitVal()), MkPair(MkVar("y"), MkVar("x")))
    m = denote_mk(PROGRAM, (("x", BOOL_T),), term)
    for r in m.rows.points:
        assert m.row_sum(r) == 1


COIN_LIFT = LlSample((), (), MkPrimApp("coin", MkUnitVal()))


def test_intro_example_anticorrelated_pair():
    term = LlSample(
        (COIN_LIFT,), ("x",),
        MkLet("y", MkPrimApp("negb", MkVar("x")), MkPair(MkVar("x"), MkVar("y"))),
    )
    m = denote_ll(PROGRAM, (), term)
    expected = {("tt", "ff"): HALF, ("ff", "tt"): HALF}
    got = {c: v for c, v in zip(m.cols.points, m.data[0]) if v != 0}
    assert got == expected


def test_correlated_pair_from_one_sample():
    term = LlSample((COIN_LIFT,), ("x",), MkPair(MkVar("x"), MkVar("x")))
    m = denote_ll(PROGRAM, (), term)
    got = {c: v for c, v in zip(m.cols.points, m.data[0]) if v != 0}
    assert got == {("tt", "tt"): HALF, ("ff", "ff"): HALF}


def test_discard_normalizes():
    term = LlSample((COIN_LIFT,), ("x",), MkUnitVal())
    m = denote_ll(PROGRAM, (), term)
    assert m.cols == UNIT_SET
    assert m.get((), ()) == 1


def test_identity_lambda_picks_identity_element():
    term = LlLam("x", Meas(BOOL_T), LlVar("x"))
    m = denote_ll(PROGRAM, (), term)
    assert m.rows == UNIT_SET
    assert m.get((), ("tt", "tt")) == 1
    assert m.get((), ("ff", "ff")) == 1
    assert m.get((), ("tt", "ff")) == 0
    assert m.get((), ("ff", "tt")) == 0


def test_two_independent_samples():
    term = LlSample(
        (COIN_LIFT, COIN_LIFT), ("x", "y"), MkPair(MkVar("x"), MkVar("y"))
    )
    m = denote_ll(PROGRAM, (), term)
    assert all(v == Fraction(1, 4) for v in m.data[0])


def test_open_denotation_kernel_wrapping():
    term = LlSample((LlVar("m"),), ("x",), MkPrimApp("negb", MkVar("x")))
    mat = denote_ll(PROGRAM, (("m", Meas(BOOL_T)),), term)
    assert mat.get(("tt",), "ff") == 1
    assert mat.get(("ff",), "tt") == 1


def test_interleaved_context_split():
    # the application's function consumes variables 2 and 4, the argument
    # variables 1 and 3: restriction must preserve declaration order on
    # both sides without explicit braiding
    from llmk.syntax import LlApp, LlLam, LlTensor, LlLetTensor, TensorType
    from llmk.matrix import tensor_list, compose

    mb = Meas(BOOL_T)
    fun = LlLam(
        "p", TensorType(mb, mb),
        LlLetTensor(
            "u", "v", LlVar("p"),
            LlSample(
                (LlVar("b"), LlVar("u"), LlVar("d"), LlVar("v")),
                ("w", "x", "y", "z"),
                MkPair(MkPair(MkVar("w"), MkVar("x")), MkPair(MkVar("y"), MkVar("z"))),
            ),
        ),
    )
    arg = LlTensor(LlVar("a"), LlVar("c"))
    term = LlApp(fun, arg)
    ctx = tuple((n, mb) for n in ("a", "b", "c", "d"))
    open_mat = denote_ll(PROGRAM, ctx, term)

    # close the term with four distinct primitive measures two ways
    lifts = {
        "a": LlSample((), (), MkPrimApp("coin", MkUnitVal())),
        "b": LlSample((), (), MkPrimApp("bias", MkUnitVal())),
        "c": LlSample(
            (), (), MkPrimApp("negb", MkPrimApp("bias", MkUnitVal()))
        ),
        "d": LlSample((), (), MkPrimApp("noisy", MkPrimApp("coin", MkUnitVal()))),
    }
    from llmk.syntax import subst_ll

    closed = subst_ll(term, lifts)
    direct = denote_ll(PROGRAM, (), closed)
    arg_mats = [denote_ll(PROGRAM, (), lifts[n]) for n, _ in ctx]
    routed = compose(tensor_list(arg_mats), open_mat)
    assert direct == routed

    # and the operational oracle agrees with both
    from llmk.surface import Def, Program
    from llmk.oracle import enumerate_dist

    probe = Program(
        bases=PROGRAM.bases,
        prims=PROGRAM.prims,
        defs={"probe": Def("probe", "LL", Meas(MkProd(MkProd(BOOL_T, BOOL_T), MkProd(BOOL_T, BOOL_T))), closed)},
    )
    column = {p: w for p, w in zip(direct.cols.points, direct.data[0]) if w != 0}
    assert enumerate_dist(probe, "probe").as_dict() == column


def test_function_under_context_applied():
    # [m : M Bool] |- (\x. sample m, x as a, b in join((a, b))) bias
    from llmk.syntax import LlApp, LlLam

    mb = Meas(BOOL_T)
    term = LlApp(
        LlLam(
            "x", mb,
            LlSample(
                (LlVar("m"), LlVar("x")), ("a", "b"),
                MkPrimApp("join", MkPair(MkVar("a"), MkVar("b"))),
            ),
        ),
        LlSample((), (), MkPrimApp("bias", MkUnitVal())),
    )
    mat = denote_ll(PROGRAM, (("m", mb),), term)
    # closing m with a fair coin must equal the fully closed denotation
    from llmk.syntax import subst_ll
    from llmk.matrix import compose, tensor_list

    closed = subst_ll(term, {"m": COIN_LIFT})
    direct = denote_ll(PROGRAM, (), closed)
    routed = compose(tensor_list([denote_ll(PROGRAM, (), COIN_LIFT)]), mat)
    assert direct == routed


# ---------------------------------------------------------------------------
# Relational reading

def test_observe_correlated_pair_relation():
    term = LlSample((COIN_LIFT,), ("x",), MkPair(MkVar("x"), MkVar("x")))
    m = observe_denote(PROGRAM, (), term)
    related = {c for c, v in zip(m.cols.points, m.data[0]) if v}
    assert related == {("tt", "tt"), ("ff", "ff")}


def test_observe_identity_equals_argument():
    wrapped = LlSample((COIN_LIFT,), ("x",), MkVar("x"))
    assert observe_denote(PROGRAM, (), wrapped) == observe_denote(
        PROGRAM, (), COIN_LIFT
    )


def test_observe_empty_relation_annihilates():
    text = (
        "base Bool = {tt, ff};"
        "prim nothing : 1 -> Bool = { () -> {} };"
    )
    # an all-zero row needs the subprobability escape hatch
    with pytest.raises(Exception):
        parse_program(text)
    program = parse_program(text.replace("{} }", "{tt: 0} }"), allow_subprob=True)
    term = LlSample(
        (LlSample((), (), MkPrimApp("nothing", MkUnitVal())),),
        ("x",),
        MkPair(MkVar("x"), MkVar("x")),
    )
    m = denote_ll(program, (), term, BOOL)
    assert all(v is False for v in m.data[0])


def test_distribution_formatting():
    text = (
        "base Bool = {tt, ff};"
        "prim coin : 1 -> Bool = { () -> {tt: 1/2, ff: 1/2} };"
        "def main : M Bool = coin;"
    )
    program = parse_program(text)
    items = distribution(program, "main")
    assert format_distribution(items) == "tt : 1/2\nff : 1/2"
    rel = distribution(program, "main", BOOL)
    assert format_distribution(rel, BOOL) == "tt : 1\nff : 1"


def test_format_omits_zero_entries():
    items = [("tt", Fraction(0)), ("ff", Fraction(1))]
    assert format_distribution(items) == "ff : 1"
