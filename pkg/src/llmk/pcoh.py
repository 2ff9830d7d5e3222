"""Finite probabilistic coherence spaces.

A web is a finite index set together with a finite generator set for a
down-closed convex set of nonnegative vectors, plus generators of its
polar.  Membership of an arbitrary rational vector is decided exactly:
``member`` maximizes the pairing against the polar (an LP over the
generator constraints) and accepts when the maximum stays at most one,
which by bipolar closure coincides with membership in the generated set.

* the web of a ground type has the point masses as generators and the
  all-ones vector as its polar generator (subprobability vectors);
* tensor webs multiply generators pointwise and compute the polar by
  exact vertex enumeration;
* function webs arise by duality: their polar is generated by products
  of generators with polar generators, and their generators are that
  set's polar.

The vertex enumerator only keeps the bounded face of a polar: recession
directions occur only for degenerate generator sets that miss a
coordinate entirely (never for well-formed webs), and applying the polar
twice collapses back to the same generated set either way.
"""

from __future__ import annotations

from fractions import Fraction

from .denot import denote_mk_type
from .linprog import (
    UNBOUNDED,
    canonical_generators,
    polar_vertices,
    simplex_max,
)
from .matrix import FinSet, Matrix, SizeCapError, apply_vector, pair_set

Vec = tuple[Fraction, ...]

POLAR_INDEX_CAP = 6


class NotAKernelError(Exception):
    """A matrix offered as a kernel is not row-stochastic or not a morphism."""


class Web:
    """A finite coherence space: index set, generators, polar generators."""

    __slots__ = ("index", "gens", "polar_gens")

    def __init__(self, index: FinSet, gens, polar_gens):
        self.index = index
        self.gens = tuple(tuple(Fraction(x) for x in g) for g in gens)
        self.polar_gens = tuple(
            tuple(Fraction(x) for x in h) for h in polar_gens
        )
        for v in self.gens + self.polar_gens:
            if len(v) != len(index):
                raise ValueError("generator arity does not match index")
            if any(x < 0 for x in v):
                raise ValueError("generators must be nonnegative")

    def coord_bounds(self) -> Vec:
        """Per-coordinate suprema over the generators."""
        return tuple(
            max((g[i] for g in self.gens), default=Fraction(0))
            for i in range(len(self.index))
        )

    def __repr__(self) -> str:
        return f"Web({len(self.index)} points, {len(self.gens)} gens)"


def polar(index: FinSet, gens) -> tuple[Vec, ...]:
    """Generators of ``{w >= 0 : <g, w> <= 1 for every g}``.

    Computed by exact vertex enumeration; output is sorted, deduplicated,
    and pruned of dominated vectors.
    """
    if len(index) > POLAR_INDEX_CAP:
        raise SizeCapError(
            f"polar computation capped at {POLAR_INDEX_CAP} indices, "
            f"got {len(index)}"
        )
    vertices, _directions = polar_vertices(
        [tuple(g) for g in gens], len(index)
    )
    return canonical_generators(vertices)


def make_web(index: FinSet, gens) -> Web:
    g = canonical_generators(gens)
    return Web(index, g, polar(index, g))


def web_meas(bases: dict, t) -> Web:
    """The web of a ground type: subprobability vectors over its points.

    Generators are the point masses; the single polar generator is the
    all-ones vector, since pairing any subprobability vector against it
    yields the total mass.
    """
    index = denote_mk_type(bases, t)
    n = len(index)
    gens = []
    for i in range(n):
        v = [Fraction(0)] * n
        v[i] = Fraction(1)
        gens.append(tuple(v))
    ones = tuple(Fraction(1) for _ in range(n))
    return Web(index, tuple(gens), (ones,))


def web_tensor(x: Web, y: Web) -> Web:
    """Tensor web: pointwise products of generators, polar by enumeration."""
    index = pair_set(x.index, y.index)
    gens = canonical_generators(
        _outer(gx, gy) for gx in x.gens for gy in y.gens
    )
    return Web(index, gens, polar(index, gens))


def web_lolli(x: Web, y: Web) -> Web:
    """Function web by duality: its polar is gens(x) (x) polar_gens(y)."""
    index = pair_set(x.index, y.index)
    pg = canonical_generators(
        _outer(gx, hy) for gx in x.gens for hy in y.polar_gens
    )
    return Web(index, polar(index, pg), pg)


def _outer(a: Vec, b: Vec) -> Vec:
    return tuple(x * y for x in a for y in b)


def web_of_ll_type(bases: dict, t) -> Web:
    """The web of a linear type, built structurally."""
    from .syntax import LlUnit, Lolli, Meas, MkUnit, TensorType

    match t:
        case LlUnit():
            return web_meas(bases, MkUnit())
        case Meas(inner):
            return web_meas(bases, inner)
        case TensorType(left, right):
            return web_tensor(
                web_of_ll_type(bases, left), web_of_ll_type(bases, right)
            )
        case Lolli(dom, cod):
            return web_lolli(
                web_of_ll_type(bases, dom), web_of_ll_type(bases, cod)
            )
    raise TypeError(f"not an LL type: {t!r}")


def member(web: Web, v) -> bool:
    """Decide membership of a nonnegative vector in the web's set.

    Maximizes ``<v, w>`` over the polar ``{w >= 0 : <g, w> <= 1}`` with
    the exact simplex; ``v`` belongs to the bipolar (= the set itself)
    exactly when the maximum is at most one.  An unbounded pairing means
    rejection.
    """
    v = tuple(Fraction(x) for x in v)
    if len(v) != len(web.index):
        raise ValueError("vector arity does not match web index")
    if any(x < 0 for x in v):
        raise ValueError("membership is defined for nonnegative vectors")
    if all(x == 0 for x in v):
        return True
    constraints = [(g, Fraction(1)) for g in web.gens]
    status, value, _ = simplex_max(v, constraints)
    if status == UNBOUNDED:
        return False
    return value <= 1


def polar_pairing_max(web: Web, v) -> Fraction:
    """Max pairing of ``v`` against the stored polar generators."""
    v = tuple(Fraction(x) for x in v)
    return max(
        (sum((a * b for a, b in zip(v, h)), Fraction(0)) for h in web.polar_gens),
        default=Fraction(0),
    )


def check_bipolar_closed(web: Web) -> bool:
    """Polar twice generates the same set: mutual membership of generators."""
    bip = polar(web.index, web.polar_gens)
    for b in bip:
        if not member(web, b):
            return False
    shadow = Web(web.index, bip, ())
    for g in web.gens:
        if not member(shadow, g):
            return False
    return True


def check_pcoh_morphism(f: Matrix, x: Web, y: Web) -> bool:
    """True when f maps the generated set of x into the set of y.

    Checking generators suffices: images of convex combinations are
    dominated by convex combinations of generator images.
    """
    if f.rows != x.index or f.cols != y.index:
        raise ValueError("matrix index sets do not match the webs")
    for g in x.gens:
        if not member(y, apply_vector(f, list(g))):
            return False
    return True


def reify_kernel(bases: dict, f: Matrix, dom_type, cod_type) -> Matrix:
    """Recover the kernel presented by a measure-to-measure morphism.

    The measure embedding is the identity on matrices, so after
    validating that ``f`` is a coherence-space morphism with unit row
    mass it is its own kernel.  Substochastic or non-morphism input is
    rejected.
    """
    x = web_meas(bases, dom_type)
    y = web_meas(bases, cod_type)
    if f.rows != x.index or f.cols != y.index:
        raise NotAKernelError("index sets do not match the stated types")
    for r in f.rows.points:
        total = f.row_sum(r)
        if total != 1:
            raise NotAKernelError(
                f"row for {r!r} has mass {total}; kernels have unit rows"
            )
    if not check_pcoh_morphism(f, x, y):
        raise NotAKernelError("matrix is not a coherence-space morphism")
    return f


def web_satisfies_pcs(web: Web) -> bool:
    """The defining conditions at finite scale.

    Every point mass is scalable into the set, coordinates are bounded
    (automatic for finite generator sets), and the set is bipolar
    closed.
    """
    n = len(web.index)
    for i in range(n):
        if not any(g[i] > 0 for g in web.gens):
            return False
    return check_bipolar_closed(web)
