"""Executable equational laws and the report runner.

Each law draws seeded instances, checks an exact equation, and records
counterexamples (pretty-printed) instead of raising.  The runner
serializes results in two formats: a line-oriented text report

    LAW <name> <anchor> <pass|fail> <instances>

followed by indented counterexample blocks, and a key-value file for
machine consumption.  A law run with zero instances is flagged as
vacuous rather than silently passing.

Structural laws (comonoid equations, coherence squares, web closure
properties) run over enumerated objects; term laws run over generated
programs in the probability semiring and, where applicable, the boolean
semiring.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .denot import (
    denote_def,
    denote_ll,
    denote_mk,
    denote_mk_type,
    ll_ctx_index,
)
from .gen import GenConfig, TermGen, shrink_closed_ll
from .linprog import canonical_generators
from .matrix import (
    BOOL,
    PROB,
    FinSet,
    Matrix,
    UNIT_SET,
    assoc,
    assoc_inv,
    braid,
    compose,
    compose_chain,
    copy,
    delete,
    identity,
    lunit,
    measure_mult,
    measure_unit,
    pair_set,
    runit,
    tensor,
    tensor_list,
)
from .oracle import enumerate_dist
from .pcoh import (
    check_bipolar_closed,
    check_pcoh_morphism,
    member,
    polar,
    web_lolli,
    web_meas,
    web_of_ll_type,
    web_satisfies_pcs,
    web_tensor,
)
from .surface import Def, Program, pretty_print
from .syntax import (
    LlApp,
    LlLam,
    LlSample,
    LlVar,
    Meas,
    MkBase,
    MkLet,
    MkPair,
    MkProd,
    MkProj1,
    MkProj2,
    MkUnit,
    MkUnitVal,
    MkVar,
    subst_ll,
)
from .typecheck import typecheck_ll, typecheck_mk


@dataclass
class LawResult:
    name: str
    anchor: str
    instances: int
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def vacuous(self) -> bool:
        return self.instances == 0


@dataclass
class LawReport:
    config: GenConfig
    results: list[LawResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            verdict = "pass" if r.passed else "fail"
            suffix = " vacuous" if r.vacuous else ""
            lines.append(f"LAW {r.name} {r.anchor} {verdict} {r.instances}{suffix}")
            for c in r.failures[:5]:
                for cl in c.splitlines():
                    lines.append(f"    {cl}")
        total_fail = sum(1 for r in self.results if not r.passed)
        lines.append(
            f"SUMMARY laws={len(self.results)} failures={total_fail} "
            f"seed={self.config.seed} instances={self.config.instances}"
        )
        return "\n".join(lines) + "\n"

    def to_kv(self) -> str:
        lines = [
            f"report.seed={self.config.seed}",
            f"report.instances={self.config.instances}",
            f"report.laws={len(self.results)}",
            f"report.failures={sum(1 for r in self.results if not r.passed)}",
        ]
        for r in self.results:
            key = f"law.{r.name}"
            lines.append(f"{key}.anchor={r.anchor}")
            lines.append(f"{key}.status={'pass' if r.passed else 'fail'}")
            lines.append(f"{key}.instances={r.instances}")
            lines.append(f"{key}.vacuous={'true' if r.vacuous else 'false'}")
            for i, c in enumerate(r.failures[:5], start=1):
                flat = c.replace("\n", " | ")
                lines.append(f"{key}.counterexample.{i}={flat}")
        return "\n".join(lines) + "\n"


def _with_def(program: Program, name, lang, decl_type, term) -> Program:
    clone = Program(
        bases=program.bases,
        prims=program.prims,
        defs=dict(program.defs),
        allow_subprob=program.allow_subprob,
    )
    clone.defs[name] = Def(name, lang, decl_type, term)
    return clone


def _wrap_identity_sample(gen: TermGen, term) -> LlSample:
    x = gen.fresh("w")
    return LlSample((term,), (x,), MkVar(x))


def _ctx_str(ctx) -> str:
    return ", ".join(f"{n} : {ty}" for n, ty in ctx) or "(empty)"


# ---------------------------------------------------------------------------
# Term laws

def law_gen_mk_sound(config: GenConfig) -> LawResult:
    gen = TermGen(config, "gen-mk-sound")
    result = LawResult("gen-mk-sound", "generated-terms-retypecheck", config.instances)
    for _ in range(config.instances):
        ctx = gen.random_mk_ctx(2)
        target = gen.random_mk_type(1)
        t = gen.gen_mk(ctx, target)
        try:
            ty = typecheck_mk(gen.program, ctx, t)
        except Exception as exc:  # noqa: BLE001 - report, don't crash the suite
            result.failures.append(f"{pretty_print(t)}\n  rejected: {exc}")
            continue
        if ty != target:
            result.failures.append(
                f"{pretty_print(t)}\n  typed {ty}, generated for {target}"
            )
    return result


def law_gen_ll_sound(config: GenConfig) -> LawResult:
    gen = TermGen(config, "gen-ll-sound")
    result = LawResult("gen-ll-sound", "generated-terms-retypecheck", config.instances)
    for _ in range(config.instances):
        ctx = gen.random_ll_ctx(2)
        target = gen.random_ll_target(1)
        t = gen.gen_ll(ctx, target)
        try:
            ty = typecheck_ll(gen.program, ctx, t)
        except Exception as exc:  # noqa: BLE001
            result.failures.append(f"{pretty_print(t)}\n  rejected: {exc}")
            continue
        if ty != target:
            result.failures.append(
                f"{pretty_print(t)}\n  typed {ty}, generated for {target}"
            )
    return result


def law_subst_preserves_typing(config: GenConfig) -> LawResult:
    gen = TermGen(config, "subst-typing")
    result = LawResult("subst-typing", "t[u/x]-keeps-type", config.instances)
    for _ in range(config.instances):
        gamma = gen.random_ll_ctx(2)
        x = gen.fresh("h")
        hole_ty = gen.random_entry_type()
        target = gen.random_ll_target(1)
        t = gen.gen_ll(gamma + ((x, hole_ty),), target)
        delta = gen.random_ll_ctx(1)
        u = gen.gen_ll(delta, hole_ty)
        merged = gamma + delta
        substituted = subst_ll(t, {x: u})
        try:
            ty = typecheck_ll(gen.program, merged, substituted)
        except Exception as exc:  # noqa: BLE001
            result.failures.append(
                f"t = {pretty_print(t)}\nu = {pretty_print(u)}\n  rejected: {exc}"
            )
            continue
        if ty != target:
            result.failures.append(
                f"t = {pretty_print(t)}\nu = {pretty_print(u)}\n"
                f"  type changed to {ty}, expected {target}"
            )
    return result


def law_sample_identity(config: GenConfig, semiring=PROB, tag="sample-identity") -> LawResult:
    gen = TermGen(config, tag)
    name = tag
    anchor = (
        "sample(t;x;x)=t" if semiring is PROB else "observe(t;x;x)=t"
    )
    result = LawResult(name, anchor, config.instances)

    def violates(term) -> bool:
        wrapped = _wrap_identity_sample(gen, term)
        return denote_ll(gen.program, (), wrapped, semiring) != denote_ll(
            gen.program, (), term, semiring
        )

    for _ in range(config.instances):
        _, t = gen.closed_measure_term()
        if violates(t):
            small = shrink_closed_ll(gen.program, t, violates)
            result.failures.append(
                f"t = {pretty_print(small)}\n  wrapped/plain denotations differ"
            )
    return result


def law_sample_fusion(config: GenConfig, semiring=PROB, tag="sample-fusion") -> LawResult:
    gen = TermGen(config, tag)
    anchor = (
        "app-of-samples=sample-of-let"
        if semiring is PROB
        else "rel-app-of-samples=sample-of-let"
    )
    result = LawResult(tag, anchor, config.instances)
    for _ in range(config.instances):
        tau1 = gen.random_mk_type(1)
        tau2 = gen.random_mk_type(1)
        tau3 = gen.random_mk_type(1)
        t = gen.gen_ll((), Meas(tau1))
        x, z, y = gen.fresh("x"), gen.fresh("z"), gen.fresh("y")
        m = gen.gen_mk(((x, tau1),), tau2)
        n = gen.gen_mk(((z, tau2),), tau3)
        lhs_term = LlApp(
            LlLam(y, Meas(tau2), LlSample((LlVar(y),), (z,), n)),
            LlSample((t,), (x,), m),
        )
        rhs_term = LlSample((t,), (x,), MkLet(z, m, n))
        lhs = denote_ll(gen.program, (), lhs_term, semiring)
        rhs = denote_ll(gen.program, (), rhs_term, semiring)
        if lhs != rhs:
            result.failures.append(
                f"t = {pretty_print(t)}\nM = {pretty_print(m)}\n"
                f"N = {pretty_print(n)}\n  fused/unfused denotations differ"
            )
    return result


_KERNEL_PRESERVING = (
    lambda m, fresh: MkLet(fresh, m, MkVar(fresh)),
    lambda m, fresh: MkProj1(MkPair(m, MkUnitVal())),
    lambda m, fresh: MkProj2(MkPair(MkUnitVal(), m)),
)


def law_modularity(config: GenConfig) -> LawResult:
    gen = TermGen(config, "modularity")
    result = LawResult(
        "modularity", "[M]=[N]->sample(t;x;M)=sample(t;x;N)", config.instances
    )
    for _ in range(config.instances):
        tau1 = gen.random_mk_type(1)
        tau2 = gen.random_mk_type(1)
        x = gen.fresh("x")
        ctx = ((x, tau1),)
        m = gen.gen_mk(ctx, tau2)
        wrapper = gen.rng.choice(_KERNEL_PRESERVING)
        n = wrapper(m, gen.fresh("e"))
        if denote_mk(gen.program, ctx, m) != denote_mk(gen.program, ctx, n):
            result.failures.append(
                f"M = {pretty_print(m)}\nN = {pretty_print(n)}\n"
                "  rewritten kernel is not denotation-equal (harness bug)"
            )
            continue
        t = gen.gen_ll((), Meas(tau1))
        lhs = denote_ll(gen.program, (), LlSample((t,), (x,), m))
        rhs = denote_ll(gen.program, (), LlSample((t,), (x,), n))
        if lhs != rhs:
            result.failures.append(
                f"M = {pretty_print(m)}\nN = {pretty_print(n)}\n"
                f"t = {pretty_print(t)}\n  sample denotations differ"
            )
    return result


def law_compositionality(config: GenConfig) -> LawResult:
    gen = TermGen(config, "compositionality")
    result = LawResult(
        "compositionality", "[t[ts/xs]]=(tensor[ts]);[t]", config.instances
    )
    for _ in range(config.instances):
        # n = 0 degenerates to the empty tensor (the unit scalar)
        n = gen.rng.choice((0, 1, 1, 2, 2, 3))
        holes = tuple(
            (gen.fresh("h"), gen.random_entry_type()) for _ in range(n)
        )
        target = gen.random_ll_target(1)
        t = gen.gen_ll(holes, target)
        gammas = []
        replacements = []
        for _, hole_ty in holes:
            gamma_i = gen.random_ll_ctx(1)
            gammas.append(gamma_i)
            replacements.append(gen.gen_ll(gamma_i, hole_ty))
        merged = tuple(itertools.chain.from_iterable(gammas))
        substituted = subst_ll(
            t, {x: u for (x, _), u in zip(holes, replacements)}
        )
        lhs = denote_ll(gen.program, merged, substituted)
        arg_mats = [
            denote_ll(gen.program, g, u) for g, u in zip(gammas, replacements)
        ]
        rhs = compose(tensor_list(arg_mats), denote_ll(gen.program, holes, t))
        if lhs != rhs:
            result.failures.append(
                f"t = {pretty_print(t)} under {_ctx_str(holes)}\n"
                + "\n".join(
                    f"t{i + 1} = {pretty_print(u)} under {_ctx_str(g)}"
                    for i, (u, g) in enumerate(zip(replacements, gammas))
                )
                + "\n  substitution and tensor-then-compose differ"
            )
    return result


def law_subst_rule_sound(config: GenConfig) -> LawResult:
    gen = TermGen(config, "subst-rule")
    result = LawResult(
        "subst-rule", "u1~u2->t[u1/x]~t[u2/x]", config.instances
    )
    for _ in range(config.instances):
        tau = gen.random_mk_type(1)
        x = gen.fresh("h")
        target = gen.random_ll_target(1)
        t = gen.gen_ll(((x, Meas(tau)),), target)
        u1 = gen.gen_ll((), Meas(tau))
        u2 = _wrap_identity_sample(gen, u1)
        lhs = denote_ll(gen.program, (), subst_ll(t, {x: u1}))
        rhs = denote_ll(gen.program, (), subst_ll(t, {x: u2}))
        if lhs != rhs:
            result.failures.append(
                f"t = {pretty_print(t)}\nu1 = {pretty_print(u1)}\n"
                "  congruence under substitution failed"
            )
    return result


def law_full_abstraction(config: GenConfig) -> LawResult:
    gen = TermGen(config, "full-abstraction")
    result = LawResult(
        "full-abstraction", "embedding-faithful", config.instances
    )
    for _ in range(config.instances):
        tau1 = gen.random_mk_type(0)
        tau2 = gen.random_mk_type(1)
        x = gen.fresh("x")
        ctx = ((x, tau1),)
        m = gen.gen_mk(ctx, tau2)
        if gen.rng.random() < 0.5:
            n = gen.gen_mk(ctx, tau2)
        else:
            wrapper = gen.rng.choice(_KERNEL_PRESERVING)
            n = wrapper(m, gen.fresh("e"))
        kernels_equal = denote_mk(gen.program, ctx, m) == denote_mk(
            gen.program, ctx, n
        )
        v = gen.fresh("v")
        ll_ctx = ((v, Meas(tau1)),)
        wrapped_equal = denote_ll(
            gen.program, ll_ctx, LlSample((LlVar(v),), (x,), m)
        ) == denote_ll(gen.program, ll_ctx, LlSample((LlVar(v),), (x,), n))
        if kernels_equal != wrapped_equal:
            result.failures.append(
                f"M = {pretty_print(m)}\nN = {pretty_print(n)}\n"
                f"  kernels_equal={kernels_equal} wrapped_equal={wrapped_equal}"
            )
    return result


def law_mk_row_stochastic(config: GenConfig) -> LawResult:
    gen = TermGen(config, "row-stochastic")
    result = LawResult(
        "mk-row-stochastic", "kernel-rows-sum-1", config.instances
    )
    for _ in range(config.instances):
        ctx = gen.random_mk_ctx(2)
        target = gen.random_mk_type(1)
        t = gen.gen_mk(ctx, target)
        mat = denote_mk(gen.program, ctx, t)
        bad = [
            r for r in mat.rows.points if mat.row_sum(r) != Fraction(1)
        ]
        if bad:
            result.failures.append(
                f"{pretty_print(t)} under {_ctx_str(ctx)}\n"
                f"  row {bad[0]!r} sums to {mat.row_sum(bad[0])}"
            )
    return result


def law_adequacy(config: GenConfig, size_cap: int = 10) -> LawResult:
    gen = TermGen(config, "adequacy")
    result = LawResult(
        "adequacy", "trace-enum=denotation", config.instances
    )
    for _ in range(config.instances):
        lang, ty, t = gen.closed_ground_term(size_cap)
        temp = _with_def(gen.program, "probe", lang, ty, t)
        dist = enumerate_dist(temp, "probe")
        mat = denote_def(temp, "probe")
        column = {
            p: w for p, w in zip(mat.cols.points, mat.data[0]) if w != 0
        }
        if column != dist.as_dict():
            result.failures.append(
                f"{lang} term {pretty_print(t)}\n"
                f"  enumerate: {dist.as_dict()!r}\n  denote:    {column!r}"
            )
    return result


# ---------------------------------------------------------------------------
# Structural laws over enumerated objects

def _small_finsets(max_size: int = 4):
    return [
        FinSet(tuple(f"e{i}" for i in range(n)))
        for n in range(1, max_size + 1)
    ]


def law_comonoid_coassoc(config: GenConfig) -> LawResult:
    sets = _small_finsets()
    result = LawResult(
        "comonoid-coassoc", "copy;(copy(x)id);assoc=copy;(id(x)copy)", 0
    )
    for sr in (PROB, BOOL):
        for x in sets:
            result.instances += 1
            lhs = compose_chain(
                copy(x, sr), tensor(copy(x, sr), identity(x, sr)),
                assoc(x, x, x, sr),
            )
            rhs = compose(copy(x, sr), tensor(identity(x, sr), copy(x, sr)))
            if lhs != rhs:
                result.failures.append(
                    f"set of size {len(x)} over {sr.name}"
                )
    return result


def law_comonoid_comm(config: GenConfig) -> LawResult:
    sets = _small_finsets()
    result = LawResult("comonoid-comm", "copy;braid=copy", 0)
    for sr in (PROB, BOOL):
        for x in sets:
            result.instances += 1
            if compose(copy(x, sr), braid(x, x, sr)) != copy(x, sr):
                result.failures.append(f"set of size {len(x)} over {sr.name}")
    return result


def law_comonoid_counit(config: GenConfig) -> LawResult:
    sets = _small_finsets()
    result = LawResult(
        "comonoid-counit", "copy;(id(x)del);runit=id", 0
    )
    for sr in (PROB, BOOL):
        for x in sets:
            result.instances += 1
            right = compose_chain(
                copy(x, sr), tensor(identity(x, sr), delete(x, sr)),
                runit(x, sr),
            )
            left = compose_chain(
                copy(x, sr), tensor(delete(x, sr), identity(x, sr)),
                lunit(x, sr),
            )
            if right != identity(x, sr) or left != identity(x, sr):
                result.failures.append(f"set of size {len(x)} over {sr.name}")
    return result


def pair_copy_via_components(x: FinSet, y: FinSet, sr, with_braid: bool = True) -> Matrix:
    """Build copy on a pair set out of componentwise copies.

    The middle-four interchange is assembled from associators and the
    braiding; ``with_braid=False`` is a deliberate mutation hook used to
    prove the law checker can catch a broken structure map.
    """
    start = tensor(copy(x, sr), copy(y, sr))
    steps = [
        assoc(x, x, pair_set(y, y), sr),
        tensor(identity(x, sr), assoc_inv(x, y, y, sr)),
    ]
    if with_braid:
        steps.append(
            tensor(identity(x, sr), tensor(braid(x, y, sr), identity(y, sr)))
        )
        steps.append(tensor(identity(x, sr), assoc(y, x, y, sr)))
        steps.append(assoc_inv(x, y, pair_set(x, y), sr))
    else:
        steps.append(tensor(identity(x, sr), assoc(x, y, y, sr)))
        steps.append(assoc_inv(x, x, pair_set(y, y), sr))
    return compose_chain(start, *steps)


def law_pair_copy(config: GenConfig, with_braid: bool = True) -> LawResult:
    sets = _small_finsets(4)
    result = LawResult(
        "copy-of-pairs", "copyXY=(copyX(x)copyY);mid-braid", 0
    )
    for sr in (PROB, BOOL):
        for x in sets:
            for y in sets:
                result.instances += 1
                direct = copy(pair_set(x, y), sr)
                built = pair_copy_via_components(x, y, sr, with_braid)
                if direct != built:
                    result.failures.append(
                        f"sizes {len(x)} x {len(y)} over {sr.name}"
                    )
    return result


def _coherence_types():
    bool_t = MkBase("Bool")
    unit = MkUnit()
    pool = [
        unit,
        bool_t,
        MkProd(unit, unit),
        MkProd(unit, bool_t),
        MkProd(bool_t, unit),
        MkProd(bool_t, bool_t),
    ]
    return pool


def law_lax_assoc(config: GenConfig) -> LawResult:
    program = config.resolve_program()
    pool = _coherence_types()
    result = LawResult("lax-assoc", "mu-hexagon-commutes", 0)
    for sr in (PROB, BOOL):
        for t1, t2, t3 in itertools.product(pool, repeat=3):
            a = denote_mk_type(program.bases, t1)
            b = denote_mk_type(program.bases, t2)
            c = denote_mk_type(program.bases, t3)
            result.instances += 1
            path1 = compose_chain(
                assoc(a, b, c, sr),
                tensor(identity(a, sr), measure_mult(b, c, sr)),
                measure_mult(a, pair_set(b, c), sr),
            )
            path2 = compose_chain(
                tensor(measure_mult(a, b, sr), identity(c, sr)),
                measure_mult(pair_set(a, b), c, sr),
                assoc(a, b, c, sr),
            )
            if path1 != path2:
                result.failures.append(f"({t1}, {t2}, {t3}) over {sr.name}")
    return result


def law_lax_unit(config: GenConfig) -> LawResult:
    program = config.resolve_program()
    pool = _coherence_types()
    result = LawResult("lax-unit", "mu-unit-squares-commute", 0)
    for sr in (PROB, BOOL):
        for t in pool:
            a = denote_mk_type(program.bases, t)
            result.instances += 1
            left_direct = lunit(a, sr)
            left_path = compose_chain(
                tensor(measure_unit(sr), identity(a, sr)),
                measure_mult(UNIT_SET, a, sr),
                lunit(a, sr),
            )
            right_direct = runit(a, sr)
            right_path = compose_chain(
                tensor(identity(a, sr), measure_unit(sr)),
                measure_mult(a, UNIT_SET, sr),
                runit(a, sr),
            )
            if left_path != left_direct or right_path != right_direct:
                result.failures.append(f"{t} over {sr.name}")
    return result


# ---------------------------------------------------------------------------
# Coherence-space laws

def law_ll_into_web(config: GenConfig, index_cap: int = 6) -> LawResult:
    gen = TermGen(config, "ll-into-web")
    result = LawResult(
        "ll-into-web", "[t]-lands-in-P(type)", config.instances
    )
    produced = 0
    attempts = 0
    while produced < config.instances and attempts < config.instances * 10:
        attempts += 1
        target = gen.random_ll_target(1)
        if len(ll_ctx_index(gen.program.bases, (("_", target),))) > index_cap:
            continue
        t = gen.gen_ll((), target)
        web = web_of_ll_type(gen.program.bases, target)
        unit_web = web_meas(gen.program.bases, MkUnit())

        def violates(term) -> bool:
            return not check_pcoh_morphism(
                denote_ll(gen.program, (), term), unit_web, web
            )

        produced += 1
        if violates(t):
            small = shrink_closed_ll(gen.program, t, violates)
            result.failures.append(
                f"t = {pretty_print(small)} : {target}\n  denotation leaves the web"
            )
    result.instances = produced
    return result


def law_meas_bipolar(config: GenConfig) -> LawResult:
    program = config.resolve_program()
    result = LawResult(
        "meas-bipolar", "subprob-web-bipolar-closed", 0
    )
    for t in _coherence_types():
        result.instances += 1
        web = web_meas(program.bases, t)
        if not check_bipolar_closed(web) or not web_satisfies_pcs(web):
            result.failures.append(str(t))
    return result


def law_tensor_web_iso(config: GenConfig, max_index: int = 4, denom: int = 4) -> LawResult:
    program = config.resolve_program()
    pool = _coherence_types()
    result = LawResult(
        "tensor-web-iso", "P(MX(x)MY)=P(M(XxY))", 0
    )
    grid = [Fraction(k, denom) for k in range(denom + 1)]
    for t1, t2 in itertools.product(pool, repeat=2):
        a = denote_mk_type(program.bases, t1)
        b = denote_mk_type(program.bases, t2)
        if len(a) * len(b) > max_index:
            continue
        tens = web_tensor(
            web_meas(program.bases, t1), web_meas(program.bases, t2)
        )
        prod = web_meas(program.bases, MkProd(t1, t2))
        # same enumeration on both sides: the mediating bijection is identity
        assert tens.index.points == prod.index.points
        for v in itertools.product(grid, repeat=len(a) * len(b)):
            result.instances += 1
            if member(tens, v) != member(prod, v):
                result.failures.append(f"{t1} (x) {t2}, vector {v}")
    return result


def law_kernel_morphism(config: GenConfig) -> LawResult:
    gen = TermGen(config, "kernel-morphism")
    result = LawResult(
        "kernel-morphism", "stochastic->web-morphism", config.instances
    )
    for _ in range(config.instances):
        tau1 = gen.random_mk_type(0)
        tau2 = gen.random_mk_type(1)
        x = gen.fresh("x")
        m = gen.gen_mk(((x, tau1),), tau2)
        mat = denote_mk(gen.program, ((x, tau1),), m)
        # reindex rows from 1-tuples to bare points for the web pairing
        dom = denote_mk_type(gen.program.bases, tau1)
        flat = Matrix(dom, mat.cols, mat.semiring, mat.data)
        wx = web_meas(gen.program.bases, tau1)
        wy = web_meas(gen.program.bases, tau2)
        if not check_pcoh_morphism(flat, wx, wy):
            result.failures.append(
                f"{pretty_print(m)} : kernel is not a web morphism"
            )
    return result


def law_polar_antimonotone(config: GenConfig) -> LawResult:
    gen = TermGen(config, "polar-antimono")
    rng = gen.rng
    result = LawResult(
        "polar-antimonotone", "S<=T->polar(T)<=polar(S)", config.instances
    )
    for _ in range(config.instances):
        dim = rng.randint(1, 3)
        index = FinSet(tuple(f"i{k}" for k in range(dim)))

        def rand_vec():
            return tuple(
                Fraction(rng.randint(0, 4), rng.randint(1, 4)) for _ in range(dim)
            )

        small = [rand_vec() for _ in range(rng.randint(1, 3))]
        big = small + [rand_vec() for _ in range(rng.randint(1, 2))]
        polar_big = polar(index, canonical_generators(big))
        # containment is checked against the defining inequalities of
        # polar(S), which also covers its unbounded directions
        for w in polar_big:
            if any(
                sum((a * b for a, b in zip(s, w)), Fraction(0)) > 1
                for s in small
            ):
                result.failures.append(
                    f"S={small!r} T={big!r}: polar(T) generator {w!r} escapes polar(S)"
                )
                break
    return result


def law_pairing_bound(config: GenConfig) -> LawResult:
    program = config.resolve_program()
    pool = _coherence_types()
    result = LawResult("pairing-bound", "pairing(g,h)<=1", 0)
    webs = [web_meas(program.bases, t) for t in pool]
    for t1, t2 in itertools.product(pool[:4], repeat=2):
        w1 = web_meas(program.bases, t1)
        w2 = web_meas(program.bases, t2)
        if len(w1.index) * len(w2.index) <= 6:
            webs.append(web_tensor(w1, w2))
            webs.append(web_lolli(w1, w2))
    for web in webs:
        for g in web.gens:
            for h in web.polar_gens:
                result.instances += 1
                pairing = sum((a * b for a, b in zip(g, h)), Fraction(0))
                if pairing > 1:
                    result.failures.append(
                        f"web {web!r}: <{g!r}, {h!r}> = {pairing}"
                    )
    return result


# ---------------------------------------------------------------------------
# Runner

LAW_FUNCTIONS = [
    law_gen_mk_sound,
    law_gen_ll_sound,
    law_subst_preserves_typing,
    law_sample_identity,
    law_sample_fusion,
    law_modularity,
    law_compositionality,
    law_subst_rule_sound,
    law_full_abstraction,
    law_mk_row_stochastic,
    law_adequacy,
    law_comonoid_coassoc,
    law_comonoid_comm,
    law_comonoid_counit,
    law_pair_copy,
    law_lax_assoc,
    law_lax_unit,
    law_ll_into_web,
    law_meas_bipolar,
    law_tensor_web_iso,
    law_kernel_morphism,
    law_polar_antimonotone,
    law_pairing_bound,
]


def run_laws(config: GenConfig | None = None) -> LawReport:
    """Execute every law and assemble the report.

    The boolean-semiring (relational) variants of the sample equations run
    at half the instance count.
    """
    config = config or GenConfig()
    results = [fn(config) for fn in LAW_FUNCTIONS]
    rel_count = max(0, config.instances // 2)
    rel_config = GenConfig(
        seed=config.seed,
        max_size=config.max_size,
        instances=rel_count,
        bases=config.bases,
        prims=config.prims,
        program=config.program,
    )
    results.append(
        law_sample_identity(rel_config, BOOL, tag="rel-sample-identity")
    )
    results.append(
        law_sample_fusion(rel_config, BOOL, tag="rel-sample-fusion")
    )
    return LawReport(config, results)
