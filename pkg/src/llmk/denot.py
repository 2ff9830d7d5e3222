"""Exact matrix denotations for both languages.

A kernel-language term in context denotes a row-stochastic matrix from
the product of the context's point sets to the result type's points.  A
linear term denotes a semiring matrix from the flat tuple enumeration of
its context's webs to the web of its type.

``sample`` composes the tensor of the argument denotations with the
kernel denotation of the body.  The bridge maps between "tensor of
measure webs" and "measures on the product" are identity bijections in
this model, so the composition happens directly on flat tuples; the
mediating maps exist as combinators (`measure_unit`, `measure_mult`) and
are exercised by the coherence-law checks.

All index bookkeeping flows through one canonical enumeration
(`mk_type_points` / `web_index` / `ctx_index`): context order is
declaration order, and splits at multiplicative nodes restrict the flat
tuple to the positions a subterm actually uses, which keeps braiding
implicit and correct.
"""

from __future__ import annotations

import itertools

from .matrix import (
    BOOL,
    PROB,
    FinSet,
    Matrix,
    Semiring,
    SizeCapError,
    UNIT_SET,
    compose,
    pair_set,
    tuple_set,
)
from .surface import mk_type_points, point_str
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
    free_vars,
    fresh,
    subst_ll,
    subst_mk,
)
from .typecheck import typecheck_ll, typecheck_mk

MAX_WEB = 4096


def denote_mk_type(bases: dict, t: MkType, cap: int = MAX_WEB) -> FinSet:
    """The finite point set of a ground type, canonically enumerated."""
    points = mk_type_points(bases, t)
    if len(points) > cap:
        raise SizeCapError(f"type {t} has {len(points)} points, cap is {cap}")
    return FinSet(points)


def web_index(bases: dict, t: LlType, cap: int = MAX_WEB) -> FinSet:
    """The web index set of a linear type."""
    match t:
        case LlUnit():
            return UNIT_SET
        case Meas(inner):
            return denote_mk_type(bases, inner, cap)
        case Lolli(dom, cod) | TensorType(dom, cod):
            return pair_set(
                web_index(bases, dom, cap), web_index(bases, cod, cap), cap=cap
            )
    raise TypeError(f"not an LL type: {t!r}")


def mk_ctx_index(bases: dict, ctx: MkContext) -> FinSet:
    return tuple_set([denote_mk_type(bases, ty) for _, ty in ctx])


def ll_ctx_index(bases: dict, ctx: LlContext) -> FinSet:
    return tuple_set([web_index(bases, ty) for _, ty in ctx])


def prim_matrix(program, name: str, semiring: Semiring = PROB) -> Matrix:
    """The declared kernel as a matrix over the chosen semiring."""
    decl = program.prims[name]
    rows = denote_mk_type(program.bases, decl.domain)
    cols = denote_mk_type(program.bases, decl.codomain)
    out = Matrix.zero(rows, cols, semiring)
    for p, row in decl.kernel.items():
        for q, w in row.items():
            out.set(p, q, semiring.from_fraction(w))
    return out


# ---------------------------------------------------------------------------
# Kernel language

def denote_mk(
    program, ctx: MkContext, term: MkTerm, semiring: Semiring = PROB
) -> Matrix:
    """Denotation of a kernel term: rows are context tuples, columns points.

    In the probability semiring every row sums to exactly one.
    """
    typecheck_mk(program, ctx, term)
    _, mat = _den_mk(program, ctx, term, semiring)
    return mat


def _den_mk(program, ctx, term, sr) -> tuple[MkType, Matrix]:
    bases = program.bases
    rows = mk_ctx_index(bases, ctx)
    match term:
        case MkVar(name):
            i = ctx_names(ctx).index(name)
            ty = ctx[i][1]
            cols = denote_mk_type(bases, ty)
            mat = Matrix.from_function(
                rows, cols, sr,
                lambda r, c: sr.one if r[i] == c else sr.zero,
            )
            return ty, mat
        case MkUnitVal():
            return MkUnit(), Matrix.from_function(
                rows, UNIT_SET, sr, lambda r, c: sr.one
            )
        case MkLet(var, bound, body):
            if var in ctx_names(ctx):
                var2 = fresh(var, set(ctx_names(ctx)) | free_vars(body))
                body = subst_mk(body, {var: MkVar(var2)})
                var = var2
            bound_ty, bound_m = _den_mk(program, ctx, bound, sr)
            body_ty, body_m = _den_mk(
                program, ctx + ((var, bound_ty),), body, sr
            )
            cols = body_m.cols
            out = Matrix.zero(rows, cols, sr)
            for ri, r in enumerate(rows.points):
                for ai, a in enumerate(bound_m.cols.points):
                    w = bound_m.data[ri][ai]
                    if not w:
                        continue
                    inner = body_m.data[body_m.rows.position[r + (a,)]]
                    row_out = out.data[ri]
                    for ci in range(len(cols)):
                        row_out[ci] = sr.add(row_out[ci], sr.mul(w, inner[ci]))
            return body_ty, out
        case MkPair(left, right):
            lty, lm = _den_mk(program, ctx, left, sr)
            rty, rm = _den_mk(program, ctx, right, sr)
            cols = pair_set(lm.cols, rm.cols)
            out = Matrix.zero(rows, cols, sr)
            for ri in range(len(rows)):
                row_out = out.data[ri]
                k = 0
                for a in lm.data[ri]:
                    for b in rm.data[ri]:
                        row_out[k] = sr.mul(a, b)
                        k += 1
            return MkProd(lty, rty), out
        case MkProj1(arg):
            arg_ty, am = _den_mk(program, ctx, arg, sr)
            cols = denote_mk_type(bases, arg_ty.left)
            out = Matrix.zero(rows, cols, sr)
            for ri in range(len(rows)):
                for (a, _b), w in zip(am.cols.points, am.data[ri]):
                    ci = cols.position[a]
                    out.data[ri][ci] = sr.add(out.data[ri][ci], w)
            return arg_ty.left, out
        case MkProj2(arg):
            arg_ty, am = _den_mk(program, ctx, arg, sr)
            cols = denote_mk_type(bases, arg_ty.right)
            out = Matrix.zero(rows, cols, sr)
            for ri in range(len(rows)):
                for (_a, b), w in zip(am.cols.points, am.data[ri]):
                    ci = cols.position[b]
                    out.data[ri][ci] = sr.add(out.data[ri][ci], w)
            return arg_ty.right, out
        case MkPrimApp(prim, arg):
            _, am = _den_mk(program, ctx, arg, sr)
            kernel = prim_matrix(program, prim, sr)
            return program.prims[prim].codomain, compose(am, kernel)
    raise TypeError(f"not an MK term: {term!r}")


# ---------------------------------------------------------------------------
# Linear language

def denote_ll(
    program, ctx: LlContext, term: LlTerm, semiring: Semiring = PROB
) -> Matrix:
    """Denotation of a linear term over the chosen semiring.

    In the probability semiring the result is a coherence-space morphism
    from the context web to the type's web (see `llmk.pcoh`).
    """
    typecheck_ll(program, ctx, term)
    _, mat = _den_ll(program, ctx, term, semiring)
    return mat


def observe_denote(program, ctx: LlContext, term: LlTerm) -> Matrix:
    """Relational reading: the same terms over the boolean semiring."""
    return denote_ll(program, ctx, term, BOOL)


def _split(ctx, wanted: set[str]):
    """Restrict a context to the named entries, keeping declaration order."""
    positions = tuple(i for i, (n, _) in enumerate(ctx) if n in wanted)
    sub = tuple(ctx[i] for i in positions)
    return positions, sub


def _den_ll(program, ctx, term, sr) -> tuple[LlType, Matrix]:
    bases = program.bases
    rows = ll_ctx_index(bases, ctx)
    match term:
        case LlVar(name):
            i = ctx_names(ctx).index(name)
            ty = ctx[i][1]
            cols = web_index(bases, ty)
            mat = Matrix.from_function(
                rows, cols, sr,
                lambda r, c: sr.one if r[i] == c else sr.zero,
            )
            return ty, mat
        case LlUnitVal():
            return LlUnit(), Matrix.from_function(
                rows, UNIT_SET, sr, lambda r, c: sr.one
            )
        case LlLam(var, annot, body):
            if var in ctx_names(ctx):
                var2 = fresh(var, set(ctx_names(ctx)) | free_vars(body))
                body = subst_ll(body, {var: LlVar(var2)})
                var = var2
            body_ty, body_m = _den_ll(
                program, ctx + ((var, annot),), body, sr
            )
            dom = web_index(bases, annot)
            cols = pair_set(dom, body_m.cols, cap=MAX_WEB)
            out = Matrix.zero(rows, cols, sr)
            for ri, r in enumerate(rows.points):
                row_out = out.data[ri]
                k = 0
                for a in dom.points:
                    inner = body_m.data[body_m.rows.position[r + (a,)]]
                    for ci in range(len(body_m.cols)):
                        row_out[k] = inner[ci]
                        k += 1
            return Lolli(annot, body_ty), out
        case LlApp(fun, arg):
            fun_pos, fun_ctx = _split(ctx, free_vars(fun))
            arg_pos, arg_ctx = _split(ctx, free_vars(arg))
            fun_ty, fun_m = _den_ll(program, fun_ctx, fun, sr)
            _, arg_m = _den_ll(program, arg_ctx, arg, sr)
            dom = web_index(bases, fun_ty.dom)
            cols = web_index(bases, fun_ty.cod)
            out = Matrix.zero(rows, cols, sr)
            for ri, r in enumerate(rows.points):
                fr = fun_m.data[fun_m.rows.position[tuple(r[i] for i in fun_pos)]]
                ar = arg_m.data[arg_m.rows.position[tuple(r[i] for i in arg_pos)]]
                row_out = out.data[ri]
                for ai, a in enumerate(dom.points):
                    w = ar[ai]
                    if not w:
                        continue
                    for ci, c in enumerate(cols.points):
                        fv = fr[fun_m.cols.position[(a, c)]]
                        if fv:
                            row_out[ci] = sr.add(row_out[ci], sr.mul(fv, w))
            return fun_ty.cod, out
        case LlTensor(left, right):
            left_pos, left_ctx = _split(ctx, free_vars(left))
            right_pos, right_ctx = _split(ctx, free_vars(right))
            lty, lm = _den_ll(program, left_ctx, left, sr)
            rty, rm = _den_ll(program, right_ctx, right, sr)
            cols = pair_set(lm.cols, rm.cols, cap=MAX_WEB)
            out = Matrix.zero(rows, cols, sr)
            for ri, r in enumerate(rows.points):
                lrow = lm.data[lm.rows.position[tuple(r[i] for i in left_pos)]]
                rrow = rm.data[rm.rows.position[tuple(r[i] for i in right_pos)]]
                row_out = out.data[ri]
                k = 0
                for a in lrow:
                    for b in rrow:
                        row_out[k] = sr.mul(a, b)
                        k += 1
            return TensorType(lty, rty), out
        case LlLetTensor(var1, var2, bound, body):
            bound_fv = free_vars(bound)
            bound_pos, bound_ctx = _split(ctx, bound_fv)
            body_pos, body_ctx = _split(ctx, set(ctx_names(ctx)) - bound_fv)
            taken = set(ctx_names(ctx))
            if var1 in taken:
                v = fresh(var1, taken | free_vars(body))
                body = subst_ll(body, {var1: LlVar(v)})
                var1 = v
            if var2 in taken | {var1}:
                v = fresh(var2, taken | {var1} | free_vars(body))
                body = subst_ll(body, {var2: LlVar(v)})
                var2 = v
            bound_ty, bound_m = _den_ll(program, bound_ctx, bound, sr)
            inner_ctx = body_ctx + (
                (var1, bound_ty.left), (var2, bound_ty.right)
            )
            body_ty, body_m = _den_ll(program, inner_ctx, body, sr)
            out = Matrix.zero(rows, body_m.cols, sr)
            for ri, r in enumerate(rows.points):
                brow = bound_m.data[
                    bound_m.rows.position[tuple(r[i] for i in bound_pos)]
                ]
                rest = tuple(r[i] for i in body_pos)
                row_out = out.data[ri]
                for (a, b), w in zip(bound_m.cols.points, brow):
                    if not w:
                        continue
                    inner = body_m.data[body_m.rows.position[rest + (a, b)]]
                    for ci in range(len(body_m.cols)):
                        row_out[ci] = sr.add(row_out[ci], sr.mul(w, inner[ci]))
            return body_ty, out
        case LlSample(args, binders, body):
            splits = [_split(ctx, free_vars(a)) for a in args]
            arg_mats = []
            inner_types = []
            for a, (_, sub) in zip(args, splits):
                a_ty, a_m = _den_ll(program, sub, a, sr)
                inner_types.append(a_ty.inner)
                arg_mats.append(a_m)
            mk_ctx = tuple(zip(binders, inner_types))
            body_ty, body_m = _den_mk(program, mk_ctx, body, sr)
            out = Matrix.zero(rows, body_m.cols, sr)
            n_cols = len(body_m.cols)
            for ri, r in enumerate(rows.points):
                arg_rows = [
                    m.data[m.rows.position[tuple(r[i] for i in pos)]]
                    for m, (pos, _) in zip(arg_mats, splits)
                ]
                row_out = out.data[ri]
                for mk_row_idx, weight in _combo_weights(
                    arg_mats, arg_rows, body_m.rows, sr
                ):
                    if not weight:
                        continue
                    inner = body_m.data[mk_row_idx]
                    for ci in range(n_cols):
                        row_out[ci] = sr.add(
                            row_out[ci], sr.mul(weight, inner[ci])
                        )
            return Meas(body_ty), out
    raise TypeError(f"not an LL term: {term!r}")


def _combo_weights(arg_mats, arg_rows, mk_rows: FinSet, sr):
    """Yield (row index into the body matrix, product weight) per outcome combo."""
    ranges = [range(len(m.cols)) for m in arg_mats]
    for combo in itertools.product(*ranges):
        weight = sr.one
        for row, j in zip(arg_rows, combo):
            weight = sr.mul(weight, row[j])
            if not weight:
                break
        outcome = tuple(
            m.cols.points[j] for m, j in zip(arg_mats, combo)
        )
        yield mk_rows.position[outcome], weight


# ---------------------------------------------------------------------------
# Distributions of closed definitions

def denote_def(program, name: str, semiring: Semiring = PROB) -> Matrix:
    d = program.defs[name]
    if d.lang == "MK":
        return denote_mk(program, (), d.term, semiring)
    return denote_ll(program, (), d.term, semiring)


def distribution(program, name: str, semiring: Semiring = PROB):
    """The outcome weights of a closed ground-type definition."""
    d = program.defs[name]
    if d.lang == "LL" and not isinstance(d.decl_type, Meas):
        raise ValueError(
            f"def {name} has type {d.decl_type}; only measure types "
            "denote distributions"
        )
    mat = denote_def(program, name, semiring)
    row = mat.data[0]
    return list(zip(mat.cols.points, row))


def format_distribution(items, semiring: Semiring = PROB) -> str:
    """Render ``point : weight`` lines, zero entries omitted."""
    lines = []
    for point, w in items:
        if w == semiring.zero:
            continue
        rendered = "1" if w is True else str(w)
        lines.append(f"{point_str(point)} : {rendered}")
    return "\n".join(lines)
