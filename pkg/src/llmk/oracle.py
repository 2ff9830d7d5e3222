"""Independent operational semantics.

``enumerate_dist`` runs a closed definition by exhaustive weighted
branching: kernel applications fan out over their row entries, and
``sample`` takes the product distribution of its argument measures
(independence comes from the disjoint linear contexts) before running
the kernel continuation on every outcome combination.  The result is an
exact rational distribution, used as ground truth against the matrix
semantics.

``mc_sample`` is the same machinery driven by a seeded generator: one
outcome per draw, no enumeration, reproducible byte-for-byte from the
seed.  Linear values of measure type stay lazy samplers so that each
draw samples every primitive exactly once.

Higher-order closed terms evaluate through closures down to ground
type; definitions whose type is not a measure are refused.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .surface import point_str
from .syntax import (
    LlApp,
    LlLam,
    LlLetTensor,
    LlSample,
    LlTensor,
    LlUnitVal,
    LlVar,
    MkLet,
    MkPair,
    MkPrimApp,
    MkProj1,
    MkProj2,
    MkTerm,
    MkUnitVal,
    MkVar,
)

BRANCH_CAP = 10**6


class OracleError(Exception):
    pass


class NonGroundResult(OracleError):
    """The definition does not evaluate to a distribution over points."""


class BranchLimitExceeded(OracleError):
    """Enumeration outgrew the weighted-path budget."""


@dataclass(frozen=True)
class TraceDist:
    """A finite distribution over outcome points; weights sum to one."""

    items: tuple[tuple[object, Fraction], ...]

    def __post_init__(self):
        points = [p for p, _ in self.items]
        if len(set(points)) != len(points):
            raise ValueError("duplicate outcomes")
        if any(w <= 0 for _, w in self.items):
            raise ValueError("weights must be positive")
        if sum((w for _, w in self.items), Fraction(0)) != 1:
            raise ValueError("weights must sum to one")

    @classmethod
    def from_dict(cls, weights: dict) -> "TraceDist":
        items = tuple(
            (p, w) for p, w in sorted(weights.items(), key=lambda kv: point_str(kv[0]))
            if w != 0
        )
        return cls(items)

    def as_dict(self) -> dict:
        return dict(self.items)

    def __str__(self) -> str:
        return "\n".join(f"{point_str(p)} : {w}" for p, w in self.items)


# ---------------------------------------------------------------------------
# Exhaustive enumeration

class _Budget:
    __slots__ = ("left",)

    def __init__(self, cap: int):
        self.left = cap

    def spend(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise BranchLimitExceeded(
                f"more than {BRANCH_CAP} weighted paths"
            )


def eval_mk_dist(program, env: dict, term: MkTerm, budget: _Budget | None = None) -> dict:
    """Weighted outcomes of a kernel term under a point environment."""
    budget = budget or _Budget(BRANCH_CAP)
    match term:
        case MkVar(name):
            return {env[name]: Fraction(1)}
        case MkUnitVal():
            return {(): Fraction(1)}
        case MkLet(var, bound, body):
            out: dict = {}
            for a, p in eval_mk_dist(program, env, bound, budget).items():
                sub = eval_mk_dist(program, {**env, var: a}, body, budget)
                for c, q in sub.items():
                    budget.spend()
                    out[c] = out.get(c, Fraction(0)) + p * q
            return out
        case MkPair(left, right):
            lout = eval_mk_dist(program, env, left, budget)
            rout = eval_mk_dist(program, env, right, budget)
            out = {}
            for a, p in lout.items():
                for b, q in rout.items():
                    budget.spend()
                    key = (a, b)
                    out[key] = out.get(key, Fraction(0)) + p * q
            return out
        case MkProj1(arg):
            out = {}
            for (a, _b), p in eval_mk_dist(program, env, arg, budget).items():
                out[a] = out.get(a, Fraction(0)) + p
            return out
        case MkProj2(arg):
            out = {}
            for (_a, b), p in eval_mk_dist(program, env, arg, budget).items():
                out[b] = out.get(b, Fraction(0)) + p
            return out
        case MkPrimApp(prim, arg):
            kernel = program.prims[prim].kernel
            out = {}
            for a, p in eval_mk_dist(program, env, arg, budget).items():
                for b, q in kernel[a].items():
                    if q == 0:
                        continue
                    budget.spend()
                    out[b] = out.get(b, Fraction(0)) + p * q
            return out
    raise TypeError(f"not an MK term: {term!r}")


@dataclass
class _Closure:
    env: dict
    var: str
    body: object


@dataclass
class _Pair:
    left: object
    right: object


@dataclass
class _Dist:
    weights: dict


_UNIT = object()


def _eval_ll(program, env: dict, term, budget: _Budget):
    match term:
        case LlVar(name):
            return env[name]
        case LlUnitVal():
            return _UNIT
        case LlLam(var, _, body):
            return _Closure(env, var, body)
        case LlApp(fun, arg):
            clo = _eval_ll(program, env, fun, budget)
            if not isinstance(clo, _Closure):
                raise OracleError("application of a non-function value")
            val = _eval_ll(program, env, arg, budget)
            return _eval_ll(program, {**clo.env, clo.var: val}, clo.body, budget)
        case LlTensor(left, right):
            return _Pair(
                _eval_ll(program, env, left, budget),
                _eval_ll(program, env, right, budget),
            )
        case LlLetTensor(var1, var2, bound, body):
            pair = _eval_ll(program, env, bound, budget)
            if not isinstance(pair, _Pair):
                raise OracleError("tensor let on a non-pair value")
            inner = {**env, var1: pair.left, var2: pair.right}
            return _eval_ll(program, inner, body, budget)
        case LlSample(args, binders, body):
            dists = []
            for a in args:
                v = _eval_ll(program, env, a, budget)
                if not isinstance(v, _Dist):
                    raise OracleError("sample argument is not a measure value")
                dists.append(v.weights)
            out: dict = {}
            combos = [((), Fraction(1))]
            for d in dists:
                combos = [
                    (points + (p,), w * q)
                    for points, w in combos
                    for p, q in d.items()
                ]
                budget.spend(len(combos))
            for points, w in combos:
                penv = dict(zip(binders, points))
                for c, q in eval_mk_dist(program, penv, body, budget).items():
                    out[c] = out.get(c, Fraction(0)) + w * q
            return _Dist(out)
    raise TypeError(f"not an LL term: {term!r}")


def enumerate_dist(program, name: str, cap: int = BRANCH_CAP) -> TraceDist:
    """Exact outcome distribution of a closed ground definition.

    Outcomes follow the canonical enumeration of the definition's ground
    type, matching the denotational output order.
    """
    from .surface import mk_type_points
    from .syntax import Meas

    d = program.defs[name]
    budget = _Budget(cap)
    if d.lang == "MK":
        weights = eval_mk_dist(program, {}, d.term, budget)
        ground = d.decl_type
    else:
        value = _eval_ll(program, {}, d.term, budget)
        if not isinstance(value, _Dist):
            raise NonGroundResult(
                f"def {name} evaluates to a non-ground value; "
                "only measure-typed definitions have trace distributions"
            )
        weights = value.weights
        ground = d.decl_type.inner if isinstance(d.decl_type, Meas) else None
    if ground is not None:
        order = {p: i for i, p in enumerate(mk_type_points(program.bases, ground))}
        items = tuple(
            (p, w)
            for p, w in sorted(weights.items(), key=lambda kv: order[kv[0]])
            if w != 0
        )
        return TraceDist(items)
    return TraceDist.from_dict(weights)


# ---------------------------------------------------------------------------
# Seeded sampling

def sample_mk_point(program, env: dict, term: MkTerm, rng: random.Random):
    match term:
        case MkVar(name):
            return env[name]
        case MkUnitVal():
            return ()
        case MkLet(var, bound, body):
            a = sample_mk_point(program, env, bound, rng)
            return sample_mk_point(program, {**env, var: a}, body, rng)
        case MkPair(left, right):
            return (
                sample_mk_point(program, env, left, rng),
                sample_mk_point(program, env, right, rng),
            )
        case MkProj1(arg):
            return sample_mk_point(program, env, arg, rng)[0]
        case MkProj2(arg):
            return sample_mk_point(program, env, arg, rng)[1]
        case MkPrimApp(prim, arg):
            a = sample_mk_point(program, env, arg, rng)
            return _draw_row(program.prims[prim].kernel[a], rng)
    raise TypeError(f"not an MK term: {term!r}")


def _draw_row(row: dict, rng: random.Random):
    r = rng.random()
    acc = 0.0
    last = None
    for point, w in row.items():
        if w == 0:
            continue
        acc += float(w)
        last = point
        if r < acc:
            return point
    if last is None:
        raise OracleError("cannot draw from an empty row")
    return last


@dataclass
class _Sampler:
    draw: object  # callable(rng) -> point


def _eval_ll_sampler(program, env: dict, term):
    match term:
        case LlVar(name):
            return env[name]
        case LlUnitVal():
            return _UNIT
        case LlLam(var, _, body):
            return _Closure(env, var, body)
        case LlApp(fun, arg):
            clo = _eval_ll_sampler(program, env, fun)
            if not isinstance(clo, _Closure):
                raise OracleError("application of a non-function value")
            val = _eval_ll_sampler(program, env, arg)
            return _eval_ll_sampler(
                program, {**clo.env, clo.var: val}, clo.body
            )
        case LlTensor(left, right):
            return _Pair(
                _eval_ll_sampler(program, env, left),
                _eval_ll_sampler(program, env, right),
            )
        case LlLetTensor(var1, var2, bound, body):
            pair = _eval_ll_sampler(program, env, bound)
            if not isinstance(pair, _Pair):
                raise OracleError("tensor let on a non-pair value")
            inner = {**env, var1: pair.left, var2: pair.right}
            return _eval_ll_sampler(program, inner, body)
        case LlSample(args, binders, body):
            samplers = []
            for a in args:
                v = _eval_ll_sampler(program, env, a)
                if not isinstance(v, _Sampler):
                    raise OracleError("sample argument is not a measure value")
                samplers.append(v)

            def draw(rng, samplers=tuple(samplers), binders=binders, body=body):
                points = [s.draw(rng) for s in samplers]
                return sample_mk_point(program, dict(zip(binders, points)), body, rng)

            return _Sampler(draw)
    raise TypeError(f"not an LL term: {term!r}")


def mc_sample(program, name: str, seed: int, n: int) -> dict:
    """Tally of ``n`` seeded draws from a closed ground definition."""
    d = program.defs[name]
    rng = random.Random(seed)
    counts: dict = {}
    if d.lang == "MK":
        def draw_once(rng):
            return sample_mk_point(program, {}, d.term, rng)
    else:
        value = _eval_ll_sampler(program, {}, d.term)
        if not isinstance(value, _Sampler):
            raise NonGroundResult(
                f"def {name} evaluates to a non-ground value"
            )
        draw_once = value.draw
    for _ in range(n):
        point = draw_once(rng)
        counts[point] = counts.get(point, 0) + 1
    return counts


def total_variation(counts: dict, n: int, exact: TraceDist) -> Fraction:
    """TV distance between an empirical tally and an exact distribution."""
    if n == 0:
        return Fraction(1) if exact.items else Fraction(0)
    points = set(counts) | {p for p, _ in exact.items}
    exact_map = exact.as_dict()
    total = Fraction(0)
    for p in points:
        emp = Fraction(counts.get(p, 0), n)
        total += abs(emp - exact_map.get(p, Fraction(0)))
    return total / 2
