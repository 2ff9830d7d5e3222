"""Seeded generation of well-typed terms for law checking.

Generation follows the typing rules bottom-up.  Kernel terms are easy
(contexts only grow); linear terms split the context by random partition
before descending multiplicative nodes, and a deterministic
``inhabit`` fallback guarantees progress by consuming leftover context
entries through a final ``sample``.

Generated types are kept inside a friendly family: measure types over
small ground types, tensors, and function types between measures.  That
family is closed under the fallback, so generation is total; everything
produced is re-typechecked by the generator-soundness laws anyway.

Identical configuration yields an identical term sequence.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .surface import Program, parse_program
from .syntax import (
    LlApp,
    LlLam,
    LlLetTensor,
    LlSample,
    LlTensor,
    LlTerm,
    LlType,
    LlUnitVal,
    LlVar,
    Lolli,
    Meas,
    MkBase,
    MkLet,
    MkPair,
    MkPrimApp,
    MkProd,
    MkProj1,
    MkProj2,
    MkTerm,
    MkType,
    MkUnit,
    MkUnitVal,
    MkVar,
    TensorType,
    free_vars,
    term_size,
)
from .typecheck import TypeCheckError, typecheck_ll

DEFAULT_PROGRAM_TEXT = """
base Bool = {tt, ff};
prim coin : 1 -> Bool = { () -> {tt: 1/2, ff: 1/2} };
prim bias : 1 -> Bool = { () -> {tt: 1/3, ff: 2/3} };
prim negb : Bool -> Bool = { tt -> {ff: 1}, ff -> {tt: 1} };
prim noisy : Bool -> Bool = { tt -> {tt: 3/4, ff: 1/4}, ff -> {tt: 1/4, ff: 3/4} };
prim split : Bool -> Bool * Bool = { tt -> {(tt,tt): 1/2, (tt,ff): 1/2}, ff -> {(ff,ff): 1} };
prim join : Bool * Bool -> Bool = { (tt,tt) -> {tt: 1}, (tt,ff) -> {tt: 1/2, ff: 1/2}, (ff,tt) -> {ff: 1}, (ff,ff) -> {ff: 1} };
prim erase : Bool -> 1 = { tt -> {(): 1}, ff -> {(): 1} };
"""


def default_program() -> Program:
    return parse_program(DEFAULT_PROGRAM_TEXT)


@dataclass
class GenConfig:
    """Reproducible generator configuration.

    ``bases`` and ``prims`` select the pools available to generation;
    ``instances`` is the per-law instance count used by the law runner.
    """

    seed: int = 1
    max_size: int = 8
    instances: int = 200
    bases: tuple[str, ...] = ("Bool",)
    prims: tuple[str, ...] = (
        "coin", "bias", "negb", "noisy", "split", "join", "erase",
    )
    program: Program | None = None

    def resolve_program(self) -> Program:
        return self.program if self.program is not None else default_program()


class GenerationExhausted(Exception):
    """Bounded retries ran out without producing a well-typed term."""


class TermGen:
    """Stateful generator; deterministic given (seed tag, config)."""

    def __init__(self, config: GenConfig, tag: str = ""):
        self.config = config
        self.program = config.resolve_program()
        self.rng = random.Random(f"{config.seed}:{tag}")
        self.counter = 0
        self._prims = [
            self.program.prims[p] for p in config.prims
            if p in self.program.prims
        ]

    def fresh(self, stem: str = "v") -> str:
        self.counter += 1
        return f"{stem}{self.counter}"

    # -- type pools

    def random_mk_type(self, depth: int = 2) -> MkType:
        roll = self.rng.random()
        if depth <= 0 or roll < 0.45:
            return MkBase(self.rng.choice(self.config.bases))
        if roll < 0.6:
            return MkUnit()
        # keep point counts small: products only of atoms
        return MkProd(self.random_mk_type(0), self.random_mk_type(0))

    def random_entry_type(self) -> LlType:
        """A context-entry type: measure, tensor of measures, or kernel arrow."""
        roll = self.rng.random()
        if roll < 0.7:
            return Meas(self.random_mk_type(1))
        if roll < 0.85:
            return TensorType(
                Meas(self.random_mk_type(0)), Meas(self.random_mk_type(0))
            )
        return Lolli(Meas(self.random_mk_type(0)), Meas(self.random_mk_type(0)))

    def random_ll_target(self, depth: int = 1) -> LlType:
        roll = self.rng.random()
        if depth <= 0 or roll < 0.7:
            return Meas(self.random_mk_type(1))
        if roll < 0.85:
            return TensorType(
                self.random_ll_target(depth - 1), self.random_ll_target(0)
            )
        return Lolli(self.random_entry_type(), self.random_ll_target(depth - 1))

    def random_ll_ctx(self, max_entries: int = 2):
        n = self.rng.randint(0, max_entries)
        return tuple(
            (self.fresh("c"), self.random_entry_type()) for _ in range(n)
        )

    def random_mk_ctx(self, max_entries: int = 2):
        n = self.rng.randint(0, max_entries)
        return tuple(
            (self.fresh("m"), self.random_mk_type(1)) for _ in range(n)
        )

    # -- canonical inhabitants

    def canon_mk(self, target: MkType) -> MkTerm:
        match target:
            case MkUnit():
                return MkUnitVal()
            case MkBase(name):
                for decl in self._prims:
                    if decl.codomain == target and decl.domain == MkUnit():
                        return MkPrimApp(decl.name, MkUnitVal())
                raise GenerationExhausted(
                    f"no nullary primitive produces base {name}"
                )
            case MkProd(left, right):
                return MkPair(self.canon_mk(left), self.canon_mk(right))
        raise TypeError(f"not an MK type: {target!r}")

    def inhabit(self, ctx, target: LlType) -> LlTerm | None:
        """Deterministic inhabitant consuming exactly ``ctx``, or None."""
        match target:
            case Lolli(dom, cod):
                v = self.fresh("x")
                body = self.inhabit(ctx + ((v, dom),), cod)
                return None if body is None else LlLam(v, dom, body)
            case TensorType(left, right):
                l = self.inhabit(ctx, left)
                if l is not None:
                    r = self.inhabit((), right)
                    if r is not None:
                        return LlTensor(l, r)
                l = self.inhabit((), left)
                if l is None:
                    return None
                r = self.inhabit(ctx, right)
                return None if r is None else LlTensor(l, r)
            case Meas(inner):
                # unpack tensor entries first, then sample from everything
                for i, (name, ty) in enumerate(ctx):
                    if isinstance(ty, TensorType):
                        v1, v2 = self.fresh("x"), self.fresh("x")
                        rest = (
                            ctx[:i] + ctx[i + 1:]
                            + ((v1, ty.left), (v2, ty.right))
                        )
                        body = self.inhabit(rest, target)
                        if body is None:
                            return None
                        return LlLetTensor(v1, v2, LlVar(name), body)
                args = []
                for name, ty in ctx:
                    if isinstance(ty, Meas):
                        args.append(LlVar(name))
                    elif isinstance(ty, Lolli) and isinstance(ty.cod, Meas):
                        arg = self.inhabit((), ty.dom)
                        if arg is None:
                            return None
                        args.append(LlApp(LlVar(name), arg))
                    else:
                        return None
                binders = tuple(self.fresh("s") for _ in args)
                return LlSample(tuple(args), binders, self.canon_mk(inner))
            case _:  # the linear unit
                if ctx:
                    return None
                return LlUnitVal()

    # -- kernel terms

    def gen_mk(self, ctx, target: MkType, size: int | None = None) -> MkTerm:
        size = self.config.max_size if size is None else size
        if size <= 1:
            leaves = [v for v, ty in ctx if ty == target]
            if leaves and self.rng.random() < 0.7:
                return MkVar(self.rng.choice(leaves))
            return self.canon_mk(target)

        options = ["canon"]
        if any(ty == target for _, ty in ctx):
            options += ["var"] * 3
        if target == MkUnit():
            options += ["unit"] * 2
        if isinstance(target, MkProd):
            options += ["pair"] * 3
        options += ["let"] * 2
        options += ["proj"]
        prims = [p for p in self._prims if p.codomain == target]
        if prims:
            options += ["prim"] * 3

        choice = self.rng.choice(options)
        if choice == "var":
            names = [v for v, ty in ctx if ty == target]
            return MkVar(self.rng.choice(names))
        if choice == "unit":
            return MkUnitVal()
        if choice == "pair":
            half = max(1, (size - 1) // 2)
            return MkPair(
                self.gen_mk(ctx, target.left, half),
                self.gen_mk(ctx, target.right, half),
            )
        if choice == "let":
            bound_ty = self.random_mk_type(1)
            v = self.fresh("m")
            half = max(1, (size - 1) // 2)
            return MkLet(
                v,
                self.gen_mk(ctx, bound_ty, half),
                self.gen_mk(ctx + ((v, bound_ty),), target, half),
            )
        if choice == "proj":
            other = self.random_mk_type(0)
            if self.rng.random() < 0.5:
                return MkProj1(self.gen_mk(ctx, MkProd(target, other), size - 1))
            return MkProj2(self.gen_mk(ctx, MkProd(other, target), size - 1))
        if choice == "prim":
            decl = self.rng.choice(prims)
            return MkPrimApp(decl.name, self.gen_mk(ctx, decl.domain, size - 1))
        return self.canon_mk(target)

    # -- linear terms

    def gen_ll(self, ctx, target: LlType, size: int | None = None) -> LlTerm:
        size = self.config.max_size if size is None else size
        for _ in range(8):
            t = self._try_ll(ctx, target, size)
            if t is not None:
                return t
        t = self.inhabit(ctx, target)
        if t is None:
            raise GenerationExhausted(
                f"cannot inhabit {target} under {[str(ty) for _, ty in ctx]}"
            )
        return t

    def _partition(self, ctx, k: int):
        groups = [[] for _ in range(k)]
        for entry in ctx:
            groups[self.rng.randrange(k)].append(entry)
        return [tuple(g) for g in groups]

    def _try_ll(self, ctx, target: LlType, size: int) -> LlTerm | None:
        if size <= 1:
            return self.inhabit(ctx, target)
        if (
            len(ctx) == 1
            and ctx[0][1] == target
            and self.rng.random() < 0.5
        ):
            return LlVar(ctx[0][0])

        options = ["fallback"]
        if isinstance(target, Lolli):
            options += ["lam"] * 4
        if isinstance(target, TensorType):
            options += ["tensor"] * 4
        if isinstance(target, Meas):
            options += ["sample"] * 4
        options += ["app", "lettensor"]

        match self.rng.choice(options):
            case "lam":
                v = self.fresh("x")
                body = self._try_ll(ctx + ((v, target.dom),), target.cod, size - 1)
                return None if body is None else LlLam(v, target.dom, body)
            case "tensor":
                left_ctx, right_ctx = self._partition(ctx, 2)
                half = max(1, (size - 1) // 2)
                l = self._try_ll(left_ctx, target.left, half)
                if l is None:
                    return None
                r = self._try_ll(right_ctx, target.right, half)
                return None if r is None else LlTensor(l, r)
            case "sample":
                k = self.rng.randint(1, 2) if ctx else self.rng.randint(0, 2)
                groups = self._partition(ctx, k) if k else []
                share = max(1, (size - 1) // max(1, k))
                args, inners = [], []
                for g in groups:
                    inner_ty = self.random_mk_type(1)
                    arg = self._try_ll(g, Meas(inner_ty), share)
                    if arg is None:
                        return None
                    args.append(arg)
                    inners.append(inner_ty)
                binders = tuple(self.fresh("s") for _ in args)
                body = self.gen_mk(
                    tuple(zip(binders, inners)), target.inner, size - 1
                )
                return LlSample(tuple(args), binders, body)
            case "app":
                arg_ty = Meas(self.random_mk_type(0))
                fun_ctx, arg_ctx = self._partition(ctx, 2)
                half = max(1, (size - 1) // 2)
                fun = self._try_ll(fun_ctx, Lolli(arg_ty, target), half)
                if fun is None:
                    return None
                arg = self._try_ll(arg_ctx, arg_ty, half)
                return None if arg is None else LlApp(fun, arg)
            case "lettensor":
                pair_ty = TensorType(
                    Meas(self.random_mk_type(0)), Meas(self.random_mk_type(0))
                )
                bound_ctx, body_ctx = self._partition(ctx, 2)
                half = max(1, (size - 1) // 2)
                bound = self._try_ll(bound_ctx, pair_ty, half)
                if bound is None:
                    return None
                v1, v2 = self.fresh("x"), self.fresh("x")
                body = self._try_ll(
                    body_ctx + ((v1, pair_ty.left), (v2, pair_ty.right)),
                    target,
                    half,
                )
                return None if body is None else LlLetTensor(v1, v2, bound, body)
            case _:
                return self.inhabit(ctx, target)

    # -- convenience wrappers used by laws and acceptance

    def closed_measure_term(self, max_points: int = 4) -> tuple[MkType, LlTerm]:
        inner = self.random_mk_type(1)
        term = self.gen_ll((), Meas(inner))
        return inner, term

    def closed_ground_term(self, size_cap: int = 10):
        """A closed ground program: either language, size-capped."""
        for _ in range(50):
            if self.rng.random() < 0.4:
                ty = self.random_mk_type(1)
                t = self.gen_mk((), ty, self.rng.randint(2, self.config.max_size))
                if term_size(t) <= size_cap:
                    return "MK", ty, t
            else:
                inner = self.random_mk_type(1)
                t = self.gen_ll(
                    (), Meas(inner), self.rng.randint(2, self.config.max_size)
                )
                if term_size(t) <= size_cap:
                    return "LL", Meas(inner), t
        raise GenerationExhausted("no ground term within the size cap")


# ---------------------------------------------------------------------------
# Greedy counterexample shrinking

def shrink_closed_ll(program, term: LlTerm, still_fails) -> LlTerm:
    """Replace closed measure-typed subterms by canonical lifts while the
    failure persists; greedy, bounded, typability-preserving."""
    gen = TermGen(GenConfig(program=program))

    def candidates(t: LlTerm):
        # enumerate (path, subterm); paths are tuples of child slots
        yield (), t
        match t:
            case LlApp(fun, arg):
                for p, s in candidates(fun):
                    yield ("fun",) + p, s
                for p, s in candidates(arg):
                    yield ("arg",) + p, s
            case LlTensor(left, right):
                for p, s in candidates(left):
                    yield ("left",) + p, s
                for p, s in candidates(right):
                    yield ("right",) + p, s
            case LlLam(_, _, body):
                for p, s in candidates(body):
                    yield ("body",) + p, s
            case LlLetTensor(_, _, bound, body):
                for p, s in candidates(bound):
                    yield ("bound",) + p, s
                for p, s in candidates(body):
                    yield ("body",) + p, s
            case LlSample(args, _, _):
                for i, a in enumerate(args):
                    for p, s in candidates(a):
                        yield (("sample", i),) + p, s

    def replace(t: LlTerm, path, new: LlTerm) -> LlTerm:
        if not path:
            return new
        head, rest = path[0], path[1:]
        match t:
            case LlApp(fun, arg):
                if head == "fun":
                    return LlApp(replace(fun, rest, new), arg)
                return LlApp(fun, replace(arg, rest, new))
            case LlTensor(left, right):
                if head == "left":
                    return LlTensor(replace(left, rest, new), right)
                return LlTensor(left, replace(right, rest, new))
            case LlLam(v, ty, body):
                return LlLam(v, ty, replace(body, rest, new))
            case LlLetTensor(v1, v2, bound, body):
                if head == "bound":
                    return LlLetTensor(v1, v2, replace(bound, rest, new), body)
                return LlLetTensor(v1, v2, bound, replace(body, rest, new))
            case LlSample(args, binders, body):
                i = head[1]
                new_args = list(args)
                new_args[i] = replace(args[i], rest, new)
                return LlSample(tuple(new_args), binders, body)
        return t

    current = term
    changed = True
    rounds = 0
    while changed and rounds < 8:
        changed = False
        rounds += 1
        for path, sub in sorted(
            candidates(current), key=lambda ps: -term_size(ps[1])
        ):
            if not path:
                continue
            if free_vars(sub):
                continue
            try:
                sub_ty = typecheck_ll(program, (), sub)
            except TypeCheckError:
                continue
            if not isinstance(sub_ty, Meas):
                continue
            simple = LlSample((), (), gen.canon_mk(sub_ty.inner))
            if term_size(simple) >= term_size(sub):
                continue
            candidate = replace(current, path, simple)
            if still_fails(candidate):
                current = candidate
                changed = True
                break
    return current
