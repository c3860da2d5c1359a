"""Exact rational dense linear algebra.

Every rank, kernel and complement decision in the package goes through this
module. Scalars are ``fractions.Fraction``; elimination is delegated to
sympy's ``DomainMatrix`` over ``QQ`` and the result is read back into
fractions, so no floating point is ever involved.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

Rational = Fraction
Vector = tuple[Fraction, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_rational(value: object) -> Fraction:
    """Coerce ints, fractions, sympy/gmpy rationals or ``"p/q"`` strings."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if getattr(value, "is_Rational", False):
        return Fraction(int(value.p), int(value.q))
    numerator = getattr(value, "numerator", None)
    denominator = getattr(value, "denominator", None)
    if numerator is not None and denominator is not None:
        # QQ elements: gmpy2 mpq or sympy's PythonMPQ
        return Fraction(int(numerator), int(denominator))
    raise TypeError(f"Cannot interpret {value!r} as an exact rational")


def as_vector(values: Iterable[object]) -> Vector:
    return tuple(as_rational(v) for v in values)


def zero_vector(dim: int) -> Vector:
    return (_ZERO,) * dim


def unit_vector(dim: int, index: int) -> Vector:
    return tuple(_ONE if i == index else _ZERO for i in range(dim))


def is_zero(v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in v)


def add_scaled(acc: list[Fraction], coeff: Fraction, v: Sequence[Fraction]) -> None:
    """acc += coeff * v, in place."""
    if coeff == 0:
        return
    for i, x in enumerate(v):
        if x:
            acc[i] += coeff * x


# ── Matrix ─────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"Matrix {self.rows}x{self.cols} needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], cols: int | None = None) -> Matrix:
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries: list[Fraction] = []
        for r in rows:
            if len(r) != cols:
                raise ValueError(f"Ragged row of length {len(r)}, expected {cols}")
            entries.extend(as_rational(x) for x in r)
        return cls(len(rows), cols, tuple(entries))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[object]], rows: int) -> Matrix:
        cols = len(columns)
        entries = [_ZERO] * (rows * cols)
        for j, column in enumerate(columns):
            if len(column) != rows:
                raise ValueError(f"Column {j} has length {len(column)}, expected {rows}")
            for i, x in enumerate(column):
                if x:
                    entries[i * cols + j] = as_rational(x)
        return cls(rows, cols, tuple(entries))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        return cls(rows, cols, (_ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls.from_rows([unit_vector(n, i) for i in range(n)], n)

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[Vector]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> Matrix:
        return Matrix.from_rows([self.column(j) for j in range(self.cols)], self.rows)

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"Vector of length {len(v)} applied to {self.rows}x{self.cols}")
        return tuple(
            sum((a * b for a, b in zip(self.row(i), v) if a and b), _ZERO)
            for i in range(self.rows)
        )


def _to_domain(m: Matrix) -> DomainMatrix:
    rows = [
        [QQ(x.numerator, x.denominator) for x in m.row(i)]
        for i in range(m.rows)
    ]
    return DomainMatrix(rows, (m.rows, m.cols), QQ)


def _from_domain(dm: DomainMatrix) -> Matrix:
    rows, cols = dm.shape
    entries = [as_rational(x) for row in dm.to_list() for x in row]
    return Matrix(rows, cols, tuple(entries))


# ── Echelon forms ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class RrefResult:
    matrix: Matrix
    pivot_cols: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)


def rref(m: Matrix) -> RrefResult:
    """Unique reduced row echelon form of ``m`` with its pivot columns."""
    if m.rows == 0 or m.cols == 0:
        return RrefResult(m, ())
    reduced, pivots = _to_domain(m).rref()
    logger.debug("rref %dx%d -> rank %d", m.rows, m.cols, len(pivots))
    return RrefResult(_from_domain(reduced), tuple(int(p) for p in pivots))


def rank(m: Matrix) -> int:
    return rref(m).rank


# ── Subspaces ──────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim given by an independent basis."""

    ambient_dim: int
    basis: tuple[Vector, ...]

    def __post_init__(self) -> None:
        for v in self.basis:
            if len(v) != self.ambient_dim:
                raise ValueError(
                    f"Basis vector of length {len(v)} in ambient dimension {self.ambient_dim}"
                )
        if self.basis and rank(Matrix.from_rows(self.basis, self.ambient_dim)) != len(self.basis):
            raise ValueError("Subspace basis vectors are linearly dependent")

    @classmethod
    def trusted(cls, ambient_dim: int, basis: Iterable[Vector]) -> Subspace:
        """Build without the independence check; callers guarantee it."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "ambient_dim", ambient_dim)
        object.__setattr__(obj, "basis", tuple(basis))
        return obj

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls.trusted(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls.trusted(ambient_dim, (unit_vector(ambient_dim, i) for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> Matrix:
        """Basis vectors as the rows of a dim x ambient_dim matrix."""
        return Matrix(self.dim, self.ambient_dim, tuple(x for v in self.basis for x in v))


def span(ambient_dim: int, vectors: Iterable[Sequence[object]]) -> Subspace:
    """Canonical basis (nonzero rows of the rref) of the span of ``vectors``."""
    rows = [as_vector(v) for v in vectors]
    if not rows:
        return Subspace.zero(ambient_dim)
    result = rref(Matrix.from_rows(rows, ambient_dim))
    return Subspace.trusted(ambient_dim, (result.matrix.row(i) for i in range(result.rank)))


def kernel_basis(m: Matrix) -> Subspace:
    """Basis of {x : m x = 0}, one canonical vector per free column."""
    result = rref(m)
    pivots = result.pivot_cols
    pivot_set = set(pivots)
    basis: list[Vector] = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        x = [_ZERO] * m.cols
        x[free] = _ONE
        for i, p in enumerate(pivots):
            x[p] = -result.matrix.entries[i * m.cols + free]
        basis.append(tuple(x))
    return Subspace.trusted(m.cols, basis)


def image_basis(m: Matrix) -> Subspace:
    """Column space of ``m``, spanned by its pivot columns."""
    result = rref(m)
    return Subspace.trusted(m.rows, (m.column(j) for j in result.pivot_cols))


def complement_basis(s: Subspace) -> Subspace:
    """Standard coordinate vectors e_j for the non-pivot columns of s's basis.

    The result together with ``s`` spans the ambient space as a direct sum,
    and depends only on ``s``'s basis.
    """
    pivots = set(complement_indices(s))
    return Subspace.trusted(
        s.ambient_dim, (unit_vector(s.ambient_dim, j) for j in sorted(pivots))
    )


def complement_indices(s: Subspace) -> tuple[int, ...]:
    """Indices of the standard coordinates spanning ``complement_basis(s)``."""
    if not s.basis:
        return tuple(range(s.ambient_dim))
    pivots = set(rref(s.basis_matrix()).pivot_cols)
    return tuple(j for j in range(s.ambient_dim) if j not in pivots)


def annihilator(s: Subspace) -> Subspace:
    """Functionals (as coordinate vectors) vanishing on ``s``."""
    if not s.basis:
        return Subspace.full(s.ambient_dim)
    return kernel_basis(s.basis_matrix())


def subspace_sum(s: Subspace, t: Subspace) -> Subspace:
    _check_ambient(s, t)
    return span(s.ambient_dim, s.basis + t.basis)


def intersection(s: Subspace, t: Subspace) -> Subspace:
    _check_ambient(s, t)
    if not s.basis or not t.basis:
        return Subspace.zero(s.ambient_dim)
    # columns: s basis then -t basis; kernel vectors (a, b) give sum a_i s_i
    columns = list(s.basis) + [tuple(-x for x in v) for v in t.basis]
    relations = kernel_basis(Matrix.from_columns(columns, s.ambient_dim))
    vectors = []
    for rel in relations.basis:
        acc = [_ZERO] * s.ambient_dim
        for coeff, v in zip(rel[:s.dim], s.basis):
            add_scaled(acc, coeff, v)
        vectors.append(acc)
    return span(s.ambient_dim, vectors)


def contains(s: Subspace, v: Sequence[object]) -> bool:
    vec = as_vector(v)
    if is_zero(vec):
        return True
    return rank(Matrix.from_rows(list(s.basis) + [vec], s.ambient_dim)) == s.dim


def is_subspace_of(s: Subspace, t: Subspace) -> bool:
    _check_ambient(s, t)
    if not s.basis:
        return True
    return rank(Matrix.from_rows(list(t.basis) + list(s.basis), t.ambient_dim)) == t.dim


def subspaces_equal(s: Subspace, t: Subspace) -> bool:
    """Equality by double inclusion, decided with rank tests."""
    return s.dim == t.dim and is_subspace_of(s, t) and is_subspace_of(t, s)


def solve_in_span(s: Subspace, v: Sequence[object]) -> Vector | None:
    """Coordinates c with sum c_i basis_i = v, or None when v is not in s."""
    vec = as_vector(v)
    if not s.basis:
        return () if is_zero(vec) else None
    augmented = Matrix.from_columns(list(s.basis) + [vec], s.ambient_dim)
    result = rref(augmented)
    if s.dim in result.pivot_cols:
        return None
    coords = [_ZERO] * s.dim
    for i, p in enumerate(result.pivot_cols):
        coords[p] = result.matrix.entries[i * augmented.cols + s.dim]
    return tuple(coords)


def _check_ambient(s: Subspace, t: Subspace) -> None:
    if s.ambient_dim != t.ambient_dim:
        raise ValueError(
            f"Subspaces live in different ambient spaces ({s.ambient_dim} vs {t.ambient_dim})"
        )
