"""Typechecking for both languages.

The kernel language is checked structurally: variables may be used any
number of times, so contexts only grow.  The linear language is checked
by threading used-variable sets bottom-up: multiplicative nodes demand
disjoint usage, binders demand their variable was consumed, and the root
demands the context was consumed exactly.  This makes the declarative
context-splitting rules syntax-directed without search.

``sample t1, ..., tn as x1, ..., xn in M`` checks each argument against a
measure type and checks ``M`` in the kernel language under exactly the
binders; linear variables are invisible inside ``M``.
"""

from __future__ import annotations

from .syntax import (
    LlApp,
    LlContext,
    LlLam,
    LlLetTensor,
    LlSample,
    LlTensor,
    LlTerm,
    LlType,
    LlUnit,
    LlUnitVal,
    LlVar,
    Lolli,
    Meas,
    MkContext,
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
    ctx_names,
    ctx_validate,
    fresh,
    free_vars,
    subst_ll,
    subst_mk,
)

ERROR_KINDS = (
    "unbound",
    "duplicate-use",
    "unused-linear",
    "nonempty-context-unit",
    "sample-arity",
    "not-measure-type",
    "type-mismatch",
)


class TypeCheckError(Exception):
    """A rejected program, tagged with the rule family that rejected it."""

    def __init__(self, kind: str, message: str, span=None):
        assert kind in ERROR_KINDS, kind
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.span = span

    def __str__(self) -> str:
        if self.span:
            line, col = self.span
            return f"line {line}, col {col}: [{self.kind}] {self.message}"
        return f"[{self.kind}] {self.message}"


def typecheck_mk(program, ctx: MkContext, term: MkTerm) -> MkType:
    """Kernel-language typing.  Weakening and contraction are implicit."""
    ctx_validate(ctx)
    return _check_mk(program, ctx, term)


def _check_mk(program, ctx: MkContext, term: MkTerm) -> MkType:
    match term:
        case MkVar(name):
            for n, ty in ctx:
                if n == name:
                    return ty
            raise TypeCheckError("unbound", f"unbound variable {name}")
        case MkUnitVal():
            return MkUnit()
        case MkLet(var, bound, body):
            bound_ty = _check_mk(program, ctx, bound)
            if var in ctx_names(ctx):
                var2 = fresh(var, set(ctx_names(ctx)) | free_vars(body))
                body = subst_mk(body, {var: MkVar(var2)})
                var = var2
            return _check_mk(program, ctx + ((var, bound_ty),), body)
        case MkPair(left, right):
            return MkProd(
                _check_mk(program, ctx, left), _check_mk(program, ctx, right)
            )
        case MkProj1(arg):
            arg_ty = _check_mk(program, ctx, arg)
            if not isinstance(arg_ty, MkProd):
                raise TypeCheckError(
                    "type-mismatch", f"fst applied to non-product type {arg_ty}"
                )
            return arg_ty.left
        case MkProj2(arg):
            arg_ty = _check_mk(program, ctx, arg)
            if not isinstance(arg_ty, MkProd):
                raise TypeCheckError(
                    "type-mismatch", f"snd applied to non-product type {arg_ty}"
                )
            return arg_ty.right
        case MkPrimApp(prim, arg):
            decl = program.prims.get(prim)
            if decl is None:
                raise TypeCheckError("unbound", f"unknown prim {prim}")
            arg_ty = _check_mk(program, ctx, arg)
            if arg_ty != decl.domain:
                raise TypeCheckError(
                    "type-mismatch",
                    f"prim {prim} expects {decl.domain}, got {arg_ty}",
                )
            return decl.codomain
    raise TypeError(f"not an MK term: {term!r}")


# ---------------------------------------------------------------------------
# Linear language

def typecheck_ll(program, ctx: LlContext, term: LlTerm) -> LlType:
    """Linear typing: every context variable must be used exactly once."""
    ctx_validate(ctx)
    ty, used = _check_ll(program, ctx, term)
    leftover = set(ctx_names(ctx)) - used
    if leftover:
        _blame_leftover(term, leftover)
    return ty


def _blame_leftover(term: LlTerm, leftover: set[str]) -> None:
    names = ", ".join(sorted(leftover))
    if isinstance(term, LlUnitVal):
        # the unit introduction rule demands the empty context
        raise TypeCheckError(
            "nonempty-context-unit",
            f"unit requires an empty context; {names} left over",
        )
    raise TypeCheckError("unused-linear", f"unused linear variable(s): {names}")


def _require_disjoint(parts: list[set[str]], where: str) -> set[str]:
    seen: set[str] = set()
    for used in parts:
        overlap = seen & used
        if overlap:
            raise TypeCheckError(
                "duplicate-use",
                f"variable(s) {', '.join(sorted(overlap))} used twice in {where}",
            )
        seen |= used
    return seen


def _check_ll(program, ctx: LlContext, term: LlTerm) -> tuple[LlType, set[str]]:
    match term:
        case LlVar(name):
            for n, ty in ctx:
                if n == name:
                    return ty, {name}
            raise TypeCheckError("unbound", f"unbound variable {name}")
        case LlUnitVal():
            return LlUnit(), set()
        case LlLam(var, annot, body):
            if var in ctx_names(ctx):
                var2 = fresh(var, set(ctx_names(ctx)) | free_vars(body))
                body = subst_ll(body, {var: LlVar(var2)})
                var = var2
            body_ty, used = _check_ll(program, ctx + ((var, annot),), body)
            if var not in used:
                _blame_leftover(body, {var})
            return Lolli(annot, body_ty), used - {var}
        case LlApp(fun, arg):
            fun_ty, fun_used = _check_ll(program, ctx, fun)
            arg_ty, arg_used = _check_ll(program, ctx, arg)
            used = _require_disjoint([fun_used, arg_used], "an application")
            if not isinstance(fun_ty, Lolli):
                raise TypeCheckError(
                    "type-mismatch", f"applied a term of type {fun_ty}"
                )
            if fun_ty.dom != arg_ty:
                raise TypeCheckError(
                    "type-mismatch",
                    f"function expects {fun_ty.dom}, argument has {arg_ty}",
                )
            return fun_ty.cod, used
        case LlTensor(left, right):
            left_ty, left_used = _check_ll(program, ctx, left)
            right_ty, right_used = _check_ll(program, ctx, right)
            used = _require_disjoint([left_used, right_used], "a tensor pair")
            return TensorType(left_ty, right_ty), used
        case LlLetTensor(var1, var2, bound, body):
            if var1 == var2:
                raise TypeCheckError(
                    "duplicate-use", f"repeated tensor binder {var1}"
                )
            bound_ty, bound_used = _check_ll(program, ctx, bound)
            if not isinstance(bound_ty, TensorType):
                raise TypeCheckError(
                    "type-mismatch",
                    f"tensor let on a term of type {bound_ty}",
                )
            taken = set(ctx_names(ctx))
            if var1 in taken:
                v = fresh(var1, taken | free_vars(body))
                body = subst_ll(body, {var1: LlVar(v)})
                var1 = v
            if var2 in taken | {var1}:
                v = fresh(var2, taken | {var1} | free_vars(body))
                body = subst_ll(body, {var2: LlVar(v)})
                var2 = v
            inner_ctx = ctx + ((var1, bound_ty.left), (var2, bound_ty.right))
            body_ty, body_used = _check_ll(program, inner_ctx, body)
            missing = {var1, var2} - body_used
            if missing:
                _blame_leftover(body, missing)
            used = _require_disjoint(
                [bound_used, body_used - {var1, var2}], "a tensor let"
            )
            return body_ty, used
        case LlSample(args, binders, body):
            if len(args) != len(binders):
                raise TypeCheckError(
                    "sample-arity",
                    f"sample binds {len(binders)} variables to {len(args)} arguments",
                )
            if len(set(binders)) != len(binders):
                raise TypeCheckError("duplicate-use", "repeated sample binder")
            inner_types = []
            parts = []
            for i, arg in enumerate(args):
                arg_ty, arg_used = _check_ll(program, ctx, arg)
                if not isinstance(arg_ty, Meas):
                    raise TypeCheckError(
                        "not-measure-type",
                        f"sample argument {i + 1} has type {arg_ty}, not a measure",
                    )
                inner_types.append(arg_ty.inner)
                parts.append(arg_used)
            used = _require_disjoint(parts, "a sample")
            mk_ctx: MkContext = tuple(zip(binders, inner_types))
            body_ty = typecheck_mk(program, mk_ctx, body)
            return Meas(body_ty), used
    raise TypeError(f"not an LL term: {term!r}")


# ---------------------------------------------------------------------------
# Whole programs

def typecheck_def(program, d) -> None:
    """Check one definition against its declared type."""
    try:
        if d.lang == "MK":
            actual = typecheck_mk(program, (), d.term)
        else:
            actual = typecheck_ll(program, (), d.term)
    except TypeCheckError as exc:
        if exc.span is None:
            exc.span = d.span
        raise
    if actual != d.decl_type:
        raise TypeCheckError(
            "type-mismatch",
            f"def {d.name} declares {d.decl_type} but has type {actual}",
            span=d.span,
        )


def typecheck_program(program) -> None:
    for d in program.defs.values():
        typecheck_def(program, d)
