"""Abstract syntax for the two-level calculus.

Two term languages share one file because they share one binder story:
the kernel language (MK) is a first-order language of Markov-kernel
programs, the linear language (LL) is a linear lambda calculus, and the
``sample`` construct of LL carries an MK continuation whose binders are
MK variables.  Variables are plain interned strings; fresh names are
minted from a global counter so renaming is deterministic and printable.

All nodes are immutable; it is safe to share subtrees freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class MkUnit:
    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class MkBase:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class MkProd:
    left: "MkType"
    right: "MkType"

    def __str__(self) -> str:
        return f"{_mk_atom_str(self.left)} * {_mk_atom_str(self.right)}"


MkType = Union[MkUnit, MkBase, MkProd]


def _mk_atom_str(t: MkType) -> str:
    if isinstance(t, MkProd):
        return f"({t})"
    return str(t)


@dataclass(frozen=True)
class LlUnit:
    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class Meas:
    """Measure type over a kernel-language type."""

    inner: MkType

    def __str__(self) -> str:
        return f"M {_mk_atom_str(self.inner)}"


@dataclass(frozen=True)
class Lolli:
    dom: "LlType"
    cod: "LlType"

    def __str__(self) -> str:
        dom = str(self.dom)
        if isinstance(self.dom, Lolli):
            dom = f"({dom})"
        return f"{dom} -o {self.cod}"


@dataclass(frozen=True)
class TensorType:
    left: "LlType"
    right: "LlType"

    def __str__(self) -> str:
        def wrap(t: "LlType") -> str:
            if isinstance(t, (Lolli, TensorType)):
                return f"({t})"
            return str(t)

        return f"{wrap(self.left)} (*) {wrap(self.right)}"


LlType = Union[LlUnit, Meas, Lolli, TensorType]


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class MkVar:
    name: str


@dataclass(frozen=True)
class MkUnitVal:
    pass


@dataclass(frozen=True)
class MkLet:
    var: str
    bound: "MkTerm"
    body: "MkTerm"


@dataclass(frozen=True)
class MkPair:
    left: "MkTerm"
    right: "MkTerm"


@dataclass(frozen=True)
class MkProj1:
    arg: "MkTerm"


@dataclass(frozen=True)
class MkProj2:
    arg: "MkTerm"


@dataclass(frozen=True)
class MkPrimApp:
    prim: str
    arg: "MkTerm"


MkTerm = Union[MkVar, MkUnitVal, MkLet, MkPair, MkProj1, MkProj2, MkPrimApp]


@dataclass(frozen=True)
class LlVar:
    name: str


@dataclass(frozen=True)
class LlUnitVal:
    pass


@dataclass(frozen=True)
class LlLam:
    var: str
    annot: LlType
    body: "LlTerm"


@dataclass(frozen=True)
class LlApp:
    fun: "LlTerm"
    arg: "LlTerm"


@dataclass(frozen=True)
class LlTensor:
    left: "LlTerm"
    right: "LlTerm"


@dataclass(frozen=True)
class LlLetTensor:
    var1: str
    var2: str
    bound: "LlTerm"
    body: "LlTerm"


@dataclass(frozen=True)
class LlSample:
    """``sample t1, ..., tn as x1, ..., xn in M``.

    Draws once from each linear argument, binds the results positionally
    to the MK variables, and runs the MK continuation.  Both lists may be
    empty; that lifts a closed MK program into the linear language.
    """

    args: tuple["LlTerm", ...]
    binders: tuple[str, ...]
    body: MkTerm


LlTerm = Union[LlVar, LlUnitVal, LlLam, LlApp, LlTensor, LlLetTensor, LlSample]

Term = Union[MkTerm, LlTerm]


# ---------------------------------------------------------------------------
# Contexts: ordered (name, type) pairs with pairwise-distinct names.
# Lookup ignores order (exchange is free); denotation indexing uses order.

MkContext = tuple[tuple[str, MkType], ...]
LlContext = tuple[tuple[str, LlType], ...]


def ctx_names(ctx) -> tuple[str, ...]:
    return tuple(name for name, _ in ctx)


def ctx_lookup(ctx, name: str):
    for n, ty in ctx:
        if n == name:
            return ty
    return None


def ctx_validate(ctx) -> None:
    names = ctx_names(ctx)
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate variable in context: {names}")


# ---------------------------------------------------------------------------
# Fresh names

_counter = 0


def fresh(base: str, avoid: set[str] = frozenset()) -> str:
    """Mint a new identifier derived from ``base`` not occurring in ``avoid``."""
    global _counter
    stem = base.split("_")[0] if base else "v"
    while True:
        _counter += 1
        candidate = f"{stem}_{_counter}"
        if candidate not in avoid:
            return candidate


# ---------------------------------------------------------------------------
# Free variables

def free_vars(term: Term) -> set[str]:
    """Variables with a free occurrence in ``term``.

    For ``sample`` the linear arguments contribute their free variables and
    the MK body contributes its free variables minus the binders; stray body
    variables survive here and are rejected by the typechecker instead.
    """
    match term:
        case MkVar(name) | LlVar(name):
            return {name}
        case MkUnitVal() | LlUnitVal():
            return set()
        case MkLet(var, bound, body):
            return free_vars(bound) | (free_vars(body) - {var})
        case MkPair(left, right) | LlTensor(left, right):
            return free_vars(left) | free_vars(right)
        case MkProj1(arg) | MkProj2(arg) | MkPrimApp(_, arg):
            return free_vars(arg)
        case LlLam(var, _, body):
            return free_vars(body) - {var}
        case LlApp(fun, arg):
            return free_vars(fun) | free_vars(arg)
        case LlLetTensor(var1, var2, bound, body):
            return free_vars(bound) | (free_vars(body) - {var1, var2})
        case LlSample(args, binders, body):
            out = set()
            for a in args:
                out |= free_vars(a)
            return out | (free_vars(body) - set(binders))
    raise TypeError(f"not a term: {term!r}")


# ---------------------------------------------------------------------------
# Substitution (simultaneous, capture avoiding)

def _active(bindings: dict, term: Term, shadowed: tuple[str, ...]) -> dict:
    fv = free_vars(term)
    return {
        x: t for x, t in bindings.items() if x not in shadowed and x in fv
    }


def _freshen(var: str, bindings: dict, body: Term) -> tuple[str, bool]:
    """Rename ``var`` when it would capture a variable of a replacement."""
    clash = set()
    for t in bindings.values():
        clash |= free_vars(t)
    if var not in clash:
        return var, False
    avoid = clash | free_vars(body) | set(bindings)
    return fresh(var, avoid), True


def subst_mk(term: MkTerm, bindings: dict[str, MkTerm]) -> MkTerm:
    """Simultaneous capture-avoiding substitution over MK terms."""
    match term:
        case MkVar(name):
            return bindings.get(name, term)
        case MkUnitVal():
            return term
        case MkLet(var, bound, body):
            new_bound = subst_mk(bound, bindings)
            inner = _active(bindings, body, (var,))
            if not inner:
                return MkLet(var, new_bound, body)
            var2, renamed = _freshen(var, inner, body)
            if renamed:
                body = subst_mk(body, {var: MkVar(var2)})
            return MkLet(var2, new_bound, subst_mk(body, inner))
        case MkPair(left, right):
            return MkPair(subst_mk(left, bindings), subst_mk(right, bindings))
        case MkProj1(arg):
            return MkProj1(subst_mk(arg, bindings))
        case MkProj2(arg):
            return MkProj2(subst_mk(arg, bindings))
        case MkPrimApp(prim, arg):
            return MkPrimApp(prim, subst_mk(arg, bindings))
    raise TypeError(f"not an MK term: {term!r}")


def subst_ll(term: LlTerm, bindings: dict[str, LlTerm]) -> LlTerm:
    """Simultaneous capture-avoiding substitution over LL terms.

    Substitution passes through the linear arguments of ``sample`` only;
    the MK binders and body belong to the other language and are left
    untouched.
    """
    match term:
        case LlVar(name):
            return bindings.get(name, term)
        case LlUnitVal():
            return term
        case LlLam(var, annot, body):
            inner = _active(bindings, body, (var,))
            if not inner:
                return term
            var2, renamed = _freshen(var, inner, body)
            if renamed:
                body = subst_ll(body, {var: LlVar(var2)})
            return LlLam(var2, annot, subst_ll(body, inner))
        case LlApp(fun, arg):
            return LlApp(subst_ll(fun, bindings), subst_ll(arg, bindings))
        case LlTensor(left, right):
            return LlTensor(subst_ll(left, bindings), subst_ll(right, bindings))
        case LlLetTensor(var1, var2, bound, body):
            new_bound = subst_ll(bound, bindings)
            inner = _active(bindings, body, (var1, var2))
            if not inner:
                return LlLetTensor(var1, var2, new_bound, body)
            v1, renamed1 = _freshen(var1, inner, body)
            if renamed1:
                body = subst_ll(body, {var1: LlVar(v1)})
            v2, renamed2 = _freshen(var2, inner, body)
            if renamed2:
                body = subst_ll(body, {var2: LlVar(v2)})
            return LlLetTensor(v1, v2, new_bound, subst_ll(body, inner))
        case LlSample(args, binders, body):
            return LlSample(
                tuple(subst_ll(a, bindings) for a in args), binders, body
            )
    raise TypeError(f"not an LL term: {term!r}")


# ---------------------------------------------------------------------------
# Alpha equivalence

def alpha_eq(a: Term, b: Term) -> bool:
    """Equality up to consistent renaming of bound variables."""
    return _alpha(a, b, {}, {}, 0)


def _alpha(a, b, env_a: dict[str, int], env_b: dict[str, int], depth: int) -> bool:
    def var_eq(x: str, y: str) -> bool:
        ia, ib = env_a.get(x), env_b.get(y)
        if ia is None and ib is None:
            return x == y  # both free
        return ia == ib and ia is not None

    match (a, b):
        case (MkVar(x), MkVar(y)) | (LlVar(x), LlVar(y)):
            return var_eq(x, y)
        case (MkUnitVal(), MkUnitVal()) | (LlUnitVal(), LlUnitVal()):
            return True
        case (MkLet(xa, ba, ca), MkLet(xb, bb, cb)):
            return _alpha(ba, bb, env_a, env_b, depth) and _alpha(
                ca, cb, {**env_a, xa: depth}, {**env_b, xb: depth}, depth + 1
            )
        case (MkPair(la, ra), MkPair(lb, rb)) | (LlTensor(la, ra), LlTensor(lb, rb)):
            return _alpha(la, lb, env_a, env_b, depth) and _alpha(
                ra, rb, env_a, env_b, depth
            )
        case (MkProj1(ta), MkProj1(tb)) | (MkProj2(ta), MkProj2(tb)):
            return _alpha(ta, tb, env_a, env_b, depth)
        case (MkPrimApp(fa, ta), MkPrimApp(fb, tb)):
            return fa == fb and _alpha(ta, tb, env_a, env_b, depth)
        case (LlLam(xa, ta, ba), LlLam(xb, tb, bb)):
            return ta == tb and _alpha(
                ba, bb, {**env_a, xa: depth}, {**env_b, xb: depth}, depth + 1
            )
        case (LlApp(fa, aa), LlApp(fb, ab)):
            return _alpha(fa, fb, env_a, env_b, depth) and _alpha(
                aa, ab, env_a, env_b, depth
            )
        case (LlLetTensor(xa, ya, ba, ca), LlLetTensor(xb, yb, bb, cb)):
            return _alpha(ba, bb, env_a, env_b, depth) and _alpha(
                ca,
                cb,
                {**env_a, xa: depth, ya: depth + 1},
                {**env_b, xb: depth, yb: depth + 1},
                depth + 2,
            )
        case (LlSample(aas, bas, ma), LlSample(abs_, bbs, mb)):
            if len(aas) != len(abs_) or len(bas) != len(bbs):
                return False
            for ta, tb in zip(aas, abs_):
                if not _alpha(ta, tb, env_a, env_b, depth):
                    return False
            # MK body variables live in their own scope: only binders are bound.
            mk_env_a = {x: i for i, x in enumerate(bas)}
            mk_env_b = {x: i for i, x in enumerate(bbs)}
            return _alpha(ma, mb, mk_env_a, mk_env_b, len(bas))
    return False


# ---------------------------------------------------------------------------
# Size (shared by generators and shrinking)

def term_size(term: Term) -> int:
    match term:
        case MkVar(_) | LlVar(_) | MkUnitVal() | LlUnitVal():
            return 1
        case MkLet(_, bound, body) | LlLetTensor(_, _, bound, body):
            return 1 + term_size(bound) + term_size(body)
        case MkPair(l, r) | LlTensor(l, r) | LlApp(l, r):
            return 1 + term_size(l) + term_size(r)
        case MkProj1(t) | MkProj2(t) | MkPrimApp(_, t):
            return 1 + term_size(t)
        case LlLam(_, _, body):
            return 1 + term_size(body)
        case LlSample(args, _, body):
            return 1 + sum(term_size(a) for a in args) + term_size(body)
    raise TypeError(f"not a term: {term!r}")
