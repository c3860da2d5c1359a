"""Graded Lie algebras given by structure constants on a graded basis."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from src.errors import (
    AntisymmetryViolation,
    DegreeWindowError,
    DimensionMismatch,
    GradingViolation,
    JacobiViolation,
)
from src.exactla.linalg import (
    Matrix,
    Subspace,
    Vector,
    as_rational,
    is_zero,
    kernel_basis,
    rank,
    solve_in_span,
    span,
)
from src.gla.space import BasisIndex, GradedVectorSpace

logger = logging.getLogger(__name__)

Sparse = dict[int, Fraction]
BracketTable = Mapping[tuple[BasisIndex, BasisIndex], Mapping[BasisIndex, object]]


def default_basis_names(space: GradedVectorSpace) -> tuple[str, ...]:
    return tuple(f"g{b.degree}_{b.offset}" for b in space.basis())


@dataclass(frozen=True)
class GradedLieAlgebra:
    """Structure constants stored for global index pairs i < j only."""

    space: GradedVectorSpace
    structure: Mapping[tuple[int, int], Sparse]
    basis_names: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.basis_names:
            object.__setattr__(self, "basis_names", default_basis_names(self.space))
        if len(self.basis_names) != self.space.total_dim:
            raise DimensionMismatch(
                f"{len(self.basis_names)} basis names for dimension {self.space.total_dim}"
            )

    @property
    def dim(self) -> int:
        return self.space.total_dim

    def bracket_basis(self, i: int, j: int) -> Sparse:
        """[e_i, e_j] as a sparse coordinate map."""
        if i == j:
            return {}
        if i < j:
            return dict(self.structure.get((i, j), {}))
        return {k: -c for k, c in self.structure.get((j, i), {}).items()}

    def name_index(self, name: str) -> int:
        try:
            return self.basis_names.index(name)
        except ValueError:
            raise KeyError(f"No basis vector named {name!r}") from None

    def degree_slice(self, degree: int) -> slice:
        start = self.space.offset(degree) if degree in self.space.dims else 0
        return slice(start, start + self.space.dim(degree))

    def embed(self, degree: int, coords: Sequence[Fraction]) -> Vector:
        """Place a homogeneous coordinate vector into full coordinates."""
        full = [Fraction(0)] * self.dim
        full[self.degree_slice(degree)] = coords
        return tuple(full)

    def component(self, v: Sequence[Fraction], degree: int) -> Vector:
        if degree not in self.space.dims:
            return ()
        return tuple(v[self.degree_slice(degree)])


def bracket(g: GradedLieAlgebra, u: Sequence[object], v: Sequence[object]) -> Vector:
    """Bilinear, antisymmetric extension of the structure constants."""
    if len(u) != g.dim or len(v) != g.dim:
        raise DimensionMismatch(
            f"bracket expects vectors of length {g.dim}, got {len(u)} and {len(v)}"
        )
    uu = [as_rational(x) for x in u]
    vv = [as_rational(x) for x in v]
    acc = [Fraction(0)] * g.dim
    for i, a in enumerate(uu):
        if not a:
            continue
        for j, b in enumerate(vv):
            if not b or i == j:
                continue
            for k, c in g.bracket_basis(i, j).items():
                acc[k] += a * b * c
    return tuple(acc)


def homogeneous_bracket(
    g: GradedLieAlgebra, p: int, u: Sequence[Fraction], q: int, v: Sequence[Fraction]
) -> Vector:
    """[u, v] for u in g^p, v in g^q, returned in g^{p+q} coordinates."""
    target = p + q
    out = [Fraction(0)] * g.space.dim(target)
    if not out:
        return ()
    base_p = g.space.offset(p)
    base_q = g.space.offset(q)
    base_t = g.space.offset(target)
    for a, x in enumerate(u):
        if not x:
            continue
        for b, y in enumerate(v):
            if not y:
                continue
            for k, c in g.bracket_basis(base_p + a, base_q + b).items():
                out[k - base_t] += x * y * c
    return tuple(out)


def _sparse_bracket(g: GradedLieAlgebra, x: Sparse, j: int) -> Sparse:
    out: Sparse = {}
    for i, a in x.items():
        for k, c in g.bracket_basis(i, j).items():
            out[k] = out.get(k, Fraction(0)) + a * c
    return {k: c for k, c in out.items() if c}


def make_gla(
    space: GradedVectorSpace,
    table: BracketTable,
    basis_names: Sequence[str] | None = None,
) -> GradedLieAlgebra:
    """Build an algebra from a sparse bracket table and verify it.

    Unlisted brackets are zero; an entry for (b, a) is read as -[a, b].
    Raises GradingViolation or JacobiViolation on the first failure.
    """
    structure: dict[tuple[int, int], Sparse] = {}
    # every listed pair, zero results included
    seen: dict[tuple[int, int], Sparse] = {}
    for (left, right), result in table.items():
        i, j = space.index(left), space.index(right)
        sparse = {space.index(k): as_rational(c) for k, c in result.items()}
        sparse = {k: c for k, c in sparse.items() if c}
        if i == j:
            if sparse:
                raise AntisymmetryViolation(
                    f"[{left}, {left}] must vanish", pair=(i, j)
                )
            continue
        if i > j:
            i, j = j, i
            sparse = {k: -c for k, c in sparse.items()}
        if (i, j) in seen and seen[(i, j)] != sparse:
            raise AntisymmetryViolation(
                f"Conflicting bracket entries for [{left}, {right}]", pair=(i, j)
            )
        seen[(i, j)] = sparse
        _check_grading(space, left.degree, right.degree, sparse, (i, j))
        if sparse:
            structure[(i, j)] = sparse
    names = tuple(basis_names) if basis_names else default_basis_names(space)
    g = GradedLieAlgebra(space, structure, names)
    _check_jacobi(g)
    logger.debug("Built graded Lie algebra of dimension %d with %d nonzero brackets", g.dim, len(structure))
    return g


def _check_grading(
    space: GradedVectorSpace, p: int, q: int, sparse: Sparse, pair: tuple[int, int]
) -> None:
    for k in sparse:
        degree = space.degree_of(k)
        if degree != p + q:
            raise GradingViolation(
                f"[g^{p}, g^{q}] has a component in g^{degree}, outside g^{p + q}",
                degrees=(p, q),
                pair=pair,
            )


def _check_jacobi(g: GradedLieAlgebra) -> None:
    degree = [g.space.degree_of(i) for i in range(g.dim)]
    for a, b, c in itertools.combinations(range(g.dim), 3):
        if degree[a] + degree[b] + degree[c] < g.space.min_degree:
            continue
        residual: Sparse = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            for k, coeff in _sparse_bracket(g, g.bracket_basis(x, y), z).items():
                residual[k] = residual.get(k, Fraction(0)) + coeff
        residual = {k: v for k, v in residual.items() if v}
        if residual:
            names = tuple(g.basis_names[t] for t in (a, b, c))
            raise JacobiViolation(
                f"Jacobi identity fails on {names}",
                triple=names,
                residual={g.basis_names[k]: str(v) for k, v in sorted(residual.items())},
            )


# ── Fundamental checks ─────────────────────────────────────────────────

@dataclass(frozen=True)
class FundamentalReport:
    generated_by_minus_one: bool
    adjoint_injective_on_g0: bool
    violations: tuple[str, ...] = ()

    @property
    def is_fundamental(self) -> bool:
        return self.generated_by_minus_one and self.adjoint_injective_on_g0


def generated_flag(g: GradedLieAlgebra) -> dict[int, Subspace]:
    """V_{-1} = g^{-1}, V_{i-1} = [g^{-1}, V_i], each inside its own degree."""
    flag: dict[int, Subspace] = {-1: Subspace.full(g.space.dim(-1))}
    minus_one = g.space.dim(-1)
    for degree in range(-1, g.space.min_degree, -1):
        target = degree - 1
        vectors = []
        for u in range(minus_one):
            e_u = tuple(Fraction(int(t == u)) for t in range(minus_one))
            for w in flag[degree].basis:
                vectors.append(homogeneous_bracket(g, -1, e_u, degree, w))
        flag[target] = span(g.space.dim(target), vectors)
    return flag


def adjoint_matrix(g: GradedLieAlgebra) -> Matrix:
    """Columns: g^0 basis elements; rows: entries of ad(h) restricted to g^-."""
    minus = g.space.negative_degrees()
    columns = []
    for h in range(g.space.dim(0)):
        e_h = tuple(Fraction(int(t == h)) for t in range(g.space.dim(0)))
        column: list[Fraction] = []
        for degree in minus:
            for v in range(g.space.dim(degree)):
                e_v = tuple(Fraction(int(t == v)) for t in range(g.space.dim(degree)))
                column.extend(homogeneous_bracket(g, 0, e_h, degree, e_v))
        columns.append(column)
    rows = sum(g.space.dim(d) ** 2 for d in minus)
    return Matrix.from_columns(columns, rows)


def is_fundamental(g: GradedLieAlgebra) -> FundamentalReport:
    if g.space.max_degree > 0:
        raise DegreeWindowError(
            f"Fundamental check needs degrees in [-k, 0], algebra reaches {g.space.max_degree}",
            max_degree=g.space.max_degree,
        )
    violations: list[str] = []
    generated = True
    for degree, sub in generated_flag(g).items():
        if sub.dim != g.space.dim(degree):
            generated = False
            violations.append(
                f"iterated brackets of g^-1 span {sub.dim} of {g.space.dim(degree)} dimensions in g^{degree}"
            )
    injective = True
    if g.space.dim(0):
        ad = adjoint_matrix(g)
        kernel = kernel_basis(ad)
        if kernel.dim:
            injective = False
            witness = ", ".join(str(x) for x in kernel.basis[0])
            violations.append(
                f"adjoint action of g^0 on g^- has a {kernel.dim}-dimensional kernel, e.g. ({witness})"
            )
    return FundamentalReport(generated, injective, tuple(violations))


# ── Basis changes ──────────────────────────────────────────────────────

def change_basis(g: GradedLieAlgebra, blocks: Mapping[int, Matrix]) -> GradedLieAlgebra:
    """Re-express g in a new degree-preserving basis.

    ``blocks[d]`` is invertible; its columns are the new degree-d basis
    vectors written in the old basis. Degrees without a block keep theirs.
    """
    new_basis: dict[int, list[Vector]] = {}
    old_span: dict[int, Subspace] = {}
    for degree in g.space.degrees():
        d = g.space.dim(degree)
        block = blocks.get(degree, Matrix.identity(d))
        if block.rows != d or block.cols != d or rank(block) != d:
            raise DimensionMismatch(f"Basis change in degree {degree} must be an invertible {d}x{d} matrix")
        new_basis[degree] = [block.column(j) for j in range(d)]
        old_span[degree] = Subspace.trusted(d, new_basis[degree])
    table: dict[tuple[BasisIndex, BasisIndex], dict[BasisIndex, Fraction]] = {}
    degrees = list(g.space.degrees())
    for p in degrees:
        for q in degrees:
            target = p + q
            if p > q or target not in g.space.dims or not g.space.dim(target):
                continue
            for a, u in enumerate(new_basis[p]):
                for b, v in enumerate(new_basis[q]):
                    if p == q and b <= a:
                        continue
                    w = homogeneous_bracket(g, p, u, q, v)
                    if is_zero(w):
                        continue
                    coords = solve_in_span(old_span[target], w)
                    table[(BasisIndex(p, a), BasisIndex(q, b))] = {
                        BasisIndex(target, c): x for c, x in enumerate(coords) if x
                    }
    return make_gla(g.space, table)


def direct_sum_with_derivations(
    minus: GradedLieAlgebra, derivations: Sequence[Mapping[int, Matrix]], names: Sequence[str] = ()
) -> GradedLieAlgebra:
    """Assemble g^- ⊕ g^0 where g^0 is spanned by degree-0 endomorphisms.

    Each derivation maps degree d to the block ``h[d]`` acting on g^d. The
    span must be closed under commutators; [h, v] = h(v) on g^-.
    """
    space = GradedVectorSpace(
        minus.space.min_degree,
        0,
        {**{d: minus.space.dim(d) for d in minus.space.negative_degrees()}, 0: len(derivations)},
    )
    table: dict[tuple[BasisIndex, BasisIndex], dict[BasisIndex, Fraction]] = {}
    for (i, j), result in minus.structure.items():
        bi, bj = minus.space.basis_index(i), minus.space.basis_index(j)
        table[(bi, bj)] = {minus.space.basis_index(k): c for k, c in result.items()}
    flat = [_flatten_blocks(h, minus) for h in derivations]
    g0 = Subspace.trusted(len(flat[0]) if flat else 0, flat)
    for a, h in enumerate(derivations):
        for degree in minus.space.negative_degrees():
            block = h[degree]
            for v in range(minus.space.dim(degree)):
                image = block.column(v)
                if not is_zero(image):
                    table[(BasisIndex(0, a), BasisIndex(degree, v))] = {
                        BasisIndex(degree, t): x for t, x in enumerate(image) if x
                    }
        for b in range(a + 1, len(derivations)):
            comm = _commutator(h, derivations[b], minus)
            if is_zero(comm):
                continue
            coords = solve_in_span(g0, comm)
            if coords is None:
                raise JacobiViolation(
                    "Degree-0 endomorphisms are not closed under commutators",
                    pair=(a, b),
                )
            table[(BasisIndex(0, a), BasisIndex(0, b))] = {
                BasisIndex(0, c): x for c, x in enumerate(coords) if x
            }
    minus_names = minus.basis_names
    g0_names = tuple(names) if names else tuple(f"h{a}" for a in range(len(derivations)))
    return make_gla(space, table, minus_names + g0_names)


def _flatten_blocks(h: Mapping[int, Matrix], minus: GradedLieAlgebra) -> Vector:
    return tuple(x for d in minus.space.negative_degrees() for x in h[d].entries)


def _commutator(h: Mapping[int, Matrix], k: Mapping[int, Matrix], minus: GradedLieAlgebra) -> Vector:
    out: list[Fraction] = []
    for d in minus.space.negative_degrees():
        n = minus.space.dim(d)
        a, b = h[d], k[d]
        for r in range(n):
            for c in range(n):
                acc = Fraction(0)
                for t in range(n):
                    acc += a.entries[r * n + t] * b.entries[t * n + c]
                    acc -= b.entries[r * n + t] * a.entries[t * n + c]
                out.append(acc)
    return tuple(out)


# ── Windows ────────────────────────────────────────────────────────────

def with_degree_zero(g: GradedLieAlgebra) -> GradedLieAlgebra:
    """Extend a window ending at -1 by a zero-dimensional g^0."""
    if g.space.max_degree >= 0:
        return g
    space = GradedVectorSpace(g.space.min_degree, 0, {**g.space.dims, 0: 0})
    return GradedLieAlgebra(space, g.structure, g.basis_names)


def truncate(g: GradedLieAlgebra, n: int) -> GradedLieAlgebra:
    """g^{<n+1}, dropping brackets that land above degree n."""
    space = g.space.truncation(n)
    size = space.total_dim
    structure = {
        (i, j): {k: c for k, c in result.items() if k < size}
        for (i, j), result in g.structure.items()
        if i < size and j < size
    }
    structure = {key: value for key, value in structure.items() if value}
    return GradedLieAlgebra(space, structure, g.basis_names[:size])
