"""Finite index sets and semiring-valued matrices.

Everything downstream (denotations, coherence-space checks, law runs)
speaks this vocabulary: a ``FinSet`` is an ordered list of point labels,
a ``Matrix`` is a dense grid indexed by two ``FinSet``s over a
commutative semiring, and the module-level combinators realize the
structural morphisms (identity, composition, tensor, braiding,
associators, unitors, copy, delete, currying, evaluation).

Probabilities are exact nonnegative rationals; the boolean semiring
turns the same machinery into a relational semantics.  Matrix equality
is exact equality of reduced fractions, never approximate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable


class SizeCapError(Exception):
    """An index set outgrew the configured cap."""


# ---------------------------------------------------------------------------
# Semirings

@dataclass(frozen=True)
class Semiring:
    name: str
    zero: object
    one: object
    add: Callable
    mul: Callable
    from_fraction: Callable  # inject a kernel weight into the carrier
    is_valid: Callable

    def __repr__(self) -> str:
        return f"Semiring({self.name})"


def _prob_from_fraction(x) -> Fraction:
    x = Fraction(x)
    if x < 0:
        raise ValueError(f"negative probability {x}")
    return x


PROB = Semiring(
    name="prob",
    zero=Fraction(0),
    one=Fraction(1),
    add=lambda a, b: a + b,
    mul=lambda a, b: a * b,
    from_fraction=_prob_from_fraction,
    is_valid=lambda x: isinstance(x, (Fraction, int)) and x >= 0,
)

BOOL = Semiring(
    name="bool",
    zero=False,
    one=True,
    add=lambda a, b: a or b,
    mul=lambda a, b: a and b,
    from_fraction=lambda x: Fraction(x) > 0,
    is_valid=lambda x: isinstance(x, bool),
)

SEMIRINGS = {"prob": PROB, "bool": BOOL}


# ---------------------------------------------------------------------------
# Finite index sets

class FinSet:
    """An ordered finite set of point labels with O(1) position lookup."""

    __slots__ = ("points", "position")

    def __init__(self, points):
        self.points = tuple(points)
        self.position = {p: i for i, p in enumerate(self.points)}
        if len(self.position) != len(self.points):
            raise ValueError("duplicate points in index set")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return p in self.position

    def __eq__(self, other) -> bool:
        return isinstance(other, FinSet) and self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return f"FinSet({list(self.points)!r})"


UNIT_SET = FinSet(((),))


def pair_set(left: FinSet, right: FinSet, cap: int | None = None) -> FinSet:
    """Binary product, enumerated lexicographically."""
    if cap is not None and len(left) * len(right) > cap:
        raise SizeCapError(
            f"index set of size {len(left) * len(right)} exceeds cap {cap}"
        )
    return FinSet((a, b) for a in left for b in right)


def tuple_set(factors: list[FinSet] | tuple[FinSet, ...]) -> FinSet:
    """N-ary product as flat tuples; the empty product is the unit set."""
    return FinSet(itertools.product(*[f.points for f in factors]))


# ---------------------------------------------------------------------------
# Matrices

class Matrix:
    """A dense rows x cols grid over a semiring."""

    __slots__ = ("rows", "cols", "semiring", "data")

    def __init__(self, rows: FinSet, cols: FinSet, semiring: Semiring, data):
        self.rows = rows
        self.cols = cols
        self.semiring = semiring
        self.data = [list(row) for row in data]
        if len(self.data) != len(rows) or any(
            len(r) != len(cols) for r in self.data
        ):
            raise ValueError("matrix shape does not match index sets")

    # -- construction

    @classmethod
    def zero(cls, rows: FinSet, cols: FinSet, semiring: Semiring) -> "Matrix":
        z = semiring.zero
        return cls(rows, cols, semiring, [[z] * len(cols) for _ in rows])

    @classmethod
    def from_function(
        cls, rows: FinSet, cols: FinSet, semiring: Semiring, fn
    ) -> "Matrix":
        return cls(
            rows, cols, semiring,
            [[fn(r, c) for c in cols.points] for r in rows.points],
        )

    # -- access

    def get(self, r, c):
        return self.data[self.rows.position[r]][self.cols.position[c]]

    def set(self, r, c, value) -> None:
        self.data[self.rows.position[r]][self.cols.position[c]] = value

    def row(self, r) -> list:
        return list(self.data[self.rows.position[r]])

    def row_sum(self, r):
        sr = self.semiring
        total = sr.zero
        for v in self.data[self.rows.position[r]]:
            total = sr.add(total, v)
        return total

    def entries(self):
        for i, r in enumerate(self.rows.points):
            for j, c in enumerate(self.cols.points):
                yield r, c, self.data[i][j]

    # -- comparison

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.semiring.name == other.semiring.name
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self) -> str:
        return (
            f"Matrix({len(self.rows)}x{len(self.cols)}, {self.semiring.name})"
        )

    def pretty(self) -> str:
        from .surface import point_str

        lines = []
        for r, c, v in self.entries():
            if v != self.semiring.zero:
                lines.append(f"[{point_str(r)} -> {point_str(c)}] {v}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Structural combinators

def identity(index: FinSet, semiring: Semiring = PROB) -> Matrix:
    sr = semiring
    return Matrix.from_function(
        index, index, sr, lambda r, c: sr.one if r == c else sr.zero
    )


def compose(f: Matrix, g: Matrix) -> Matrix:
    """Diagrammatic composition: ``f`` then ``g``.

    Zero entries short-circuit (the zero of both semirings is falsy), so
    permutation-like matrices compose in quadratic time.
    """
    if f.cols != g.rows:
        raise ValueError("compose: inner index sets differ")
    if f.semiring.name != g.semiring.name:
        raise ValueError("compose: different semirings")
    sr = f.semiring
    add, mul, zero = sr.add, sr.mul, sr.zero
    n_cols = len(g.cols)
    gdata = g.data
    data = []
    for frow in f.data:
        out = [zero] * n_cols
        for j, v in enumerate(frow):
            if v:
                grow = gdata[j]
                out = [
                    add(o, mul(v, w)) if w else o for o, w in zip(out, grow)
                ]
        data.append(out)
    return Matrix(f.rows, g.cols, sr, data)


def compose_chain(first: Matrix, *rest: Matrix) -> Matrix:
    out = first
    for m in rest:
        out = compose(out, m)
    return out


def tensor(f: Matrix, g: Matrix) -> Matrix:
    """Monoidal product on morphisms; index sets become pair sets."""
    if f.semiring.name != g.semiring.name:
        raise ValueError("tensor: different semirings")
    sr = f.semiring
    rows = pair_set(f.rows, g.rows)
    cols = pair_set(f.cols, g.cols)
    data = []
    for fr in f.data:
        for gr in g.data:
            data.append([sr.mul(a, b) for a in fr for b in gr])
    return Matrix(rows, cols, sr, data)


def tensor_list(mats: list[Matrix], semiring: Semiring = PROB) -> Matrix:
    """N-ary tensor in flat-tuple form.

    Row tuples are concatenated and column points are collected into
    n-tuples, matching the flat enumeration used for term contexts.  The
    empty tensor is the unit matrix on the singleton set.
    """
    sr = mats[0].semiring if mats else semiring
    for m in mats:
        if not all(isinstance(p, tuple) for p in m.rows.points):
            raise ValueError("tensor_list: row points must be tuples")
    rows = FinSet(
        tuple(itertools.chain.from_iterable(combo))
        for combo in itertools.product(*[m.rows.points for m in mats])
    ) if mats else UNIT_SET
    cols = tuple_set([m.cols for m in mats])
    out = Matrix.zero(rows, cols, sr)
    row_combos = itertools.product(*[range(len(m.rows)) for m in mats])
    for row_idx, combo in zip(range(len(rows)), row_combos):
        col_combos = itertools.product(*[range(len(m.cols)) for m in mats])
        for col_idx, ccombo in zip(range(len(cols)), col_combos):
            v = sr.one
            for m, i, j in zip(mats, combo, ccombo):
                v = sr.mul(v, m.data[i][j])
            out.data[row_idx][col_idx] = v
    return out


def braid(left: FinSet, right: FinSet, semiring: Semiring = PROB) -> Matrix:
    """The symmetry left (x) right -> right (x) left."""
    sr = semiring
    return Matrix.from_function(
        pair_set(left, right), pair_set(right, left), sr,
        lambda r, c: sr.one if (r[0] == c[1] and r[1] == c[0]) else sr.zero,
    )


def assoc(a: FinSet, b: FinSet, c: FinSet, semiring: Semiring = PROB) -> Matrix:
    """Associator ((a,b),c) -> (a,(b,c))."""
    sr = semiring
    return Matrix.from_function(
        pair_set(pair_set(a, b), c), pair_set(a, pair_set(b, c)), sr,
        lambda r, col: sr.one
        if (r[0][0] == col[0] and r[0][1] == col[1][0] and r[1] == col[1][1])
        else sr.zero,
    )


def assoc_inv(a: FinSet, b: FinSet, c: FinSet, semiring: Semiring = PROB) -> Matrix:
    sr = semiring
    return Matrix.from_function(
        pair_set(a, pair_set(b, c)), pair_set(pair_set(a, b), c), sr,
        lambda r, col: sr.one
        if (r[0] == col[0][0] and r[1][0] == col[0][1] and r[1][1] == col[1])
        else sr.zero,
    )


def lunit(index: FinSet, semiring: Semiring = PROB) -> Matrix:
    """Left unitor (1 (x) X) -> X."""
    sr = semiring
    return Matrix.from_function(
        pair_set(UNIT_SET, index), index, sr,
        lambda r, c: sr.one if r[1] == c else sr.zero,
    )


def runit(index: FinSet, semiring: Semiring = PROB) -> Matrix:
    """Right unitor (X (x) 1) -> X."""
    sr = semiring
    return Matrix.from_function(
        pair_set(index, UNIT_SET), index, sr,
        lambda r, c: sr.one if r[0] == c else sr.zero,
    )


def copy(index: FinSet, semiring: Semiring = PROB) -> Matrix:
    """Duplication X -> X (x) X: one exactly at (x, (x, x))."""
    sr = semiring
    return Matrix.from_function(
        index, pair_set(index, index), sr,
        lambda r, c: sr.one if (c[0] == r and c[1] == r) else sr.zero,
    )


def delete(index: FinSet, semiring: Semiring = PROB) -> Matrix:
    """Discard X -> 1: the constant-one column."""
    sr = semiring
    return Matrix.from_function(index, UNIT_SET, sr, lambda r, c: sr.one)


def cur(f: Matrix, left: FinSet, right: FinSet) -> Matrix:
    """Curry f : left (x) right -> Z into left -> (right -o Z)."""
    if f.rows != pair_set(left, right):
        raise ValueError("cur: row index is not the stated pair set")
    sr = f.semiring
    return Matrix.from_function(
        left, pair_set(right, f.cols), sr,
        lambda r, c: f.get((r, c[0]), c[1]),
    )


def ev(dom: FinSet, cod: FinSet, semiring: Semiring = PROB) -> Matrix:
    """Evaluation ((dom -o cod) (x) dom) -> cod."""
    sr = semiring
    return Matrix.from_function(
        pair_set(pair_set(dom, cod), dom), cod, sr,
        lambda r, c: sr.one if (r[0][0] == r[1] and r[0][1] == c) else sr.zero,
    )


def measure_unit(semiring: Semiring = PROB) -> Matrix:
    """The unit map of the measure functor; an isomorphism here."""
    return identity(UNIT_SET, semiring)


def measure_mult(left: FinSet, right: FinSet, semiring: Semiring = PROB) -> Matrix:
    """The multiplication of the measure functor.

    Pair webs and product points share one enumeration, so this is the
    identity matrix; it exists as a named mediator so coherence diagrams
    can be assembled and checked generically.
    """
    return identity(pair_set(left, right), semiring)


def apply_vector(f: Matrix, v: list) -> tuple:
    """Apply a matrix to a vector indexed by its rows: (f v)_c = sum_r f[r,c] v_r."""
    if len(v) != len(f.rows):
        raise ValueError("apply_vector: length mismatch")
    sr = f.semiring
    out = []
    for j in range(len(f.cols)):
        acc = sr.zero
        for i in range(len(f.rows)):
            acc = sr.add(acc, sr.mul(f.data[i][j], v[i]))
        out.append(acc)
    return tuple(out)
