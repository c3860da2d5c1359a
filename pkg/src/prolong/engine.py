"""Universal prolongation of a fundamental graded Lie algebra.

Layer g^m (m >= 1) is stored as a subspace of the shape space

    S_m = Hom(g^-k, g^{m-k}) ⊕ ... ⊕ Hom(g^-1, g^{m-1})

i.e. degree-m maps on the truncation g^{<m}. A shape coordinate is laid out
block by block in ascending source degree; inside a block, column ``s``
(the image of the s-th source basis vector) occupies ``dim target``
consecutive entries. Targets of degree <= 0 use base coordinates, targets of
degree >= 1 use coordinates in the layer's basis.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Mapping, Sequence

from src.config import DEFAULT_CAP
from src.errors import DegreeError, DegreeWindowError, LayerMissing, NotFundamental
from src.exactla.linalg import (
    Matrix,
    Subspace,
    Vector,
    add_scaled,
    is_zero,
    kernel_basis,
    unit_vector,
)
from src.gla.algebra import (
    GradedLieAlgebra,
    homogeneous_bracket,
    is_fundamental,
    with_degree_zero,
)
from src.gla.space import GradedVectorSpace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Element:
    """A homogeneous element: coordinates in g^degree."""

    degree: int
    coords: Vector


@dataclass(frozen=True)
class ShapeBlock:
    source_degree: int
    source_dim: int
    target_dim: int
    offset: int

    @property
    def size(self) -> int:
        return self.source_dim * self.target_dim

    def coordinate(self, source: int, target: int) -> int:
        return self.offset + source * self.target_dim + target


# ── Prolonged algebra ──────────────────────────────────────────────────

@dataclass(frozen=True)
class ProlongedAlgebra:
    base: GradedLieAlgebra
    layers: Mapping[int, Subspace] = field(default_factory=dict)
    cap: int = DEFAULT_CAP
    finite_height: int | None = None

    @property
    def depth(self) -> int:
        return -self.base.space.min_degree

    @property
    def computed(self) -> int:
        """Highest layer degree held explicitly."""
        return max(self.layers, default=0)

    def has_degree(self, degree: int) -> bool:
        if degree <= 0:
            return True
        if degree in self.layers:
            return True
        return self.finite_height is not None and degree > self.finite_height

    def dim(self, degree: int) -> int:
        if degree < -self.depth:
            return 0
        if degree <= 0:
            return self.base.space.dim(degree)
        return self.layer(degree).dim

    def layer(self, degree: int) -> Subspace:
        if degree < 1:
            raise DegreeError(f"Prolongation layers start at degree 1, got {degree}")
        if degree in self.layers:
            return self.layers[degree]
        if self.finite_height is not None and degree > self.finite_height:
            return Subspace.zero(shape_dim(self, degree))
        raise LayerMissing(
            f"Layer g^{degree} was not computed (cap {self.cap})",
            degree=degree,
            cap=self.cap,
        )

    def with_layer(self, degree: int, layer: Subspace) -> ProlongedAlgebra:
        return replace(self, layers={**self.layers, degree: layer})

    def graded_space(self, top: int) -> GradedVectorSpace:
        """The truncation g^{<top+1} as a graded vector space."""
        top = max(top, -1)
        return GradedVectorSpace(
            -self.depth, top, {d: self.dim(d) for d in range(-self.depth, top + 1)}
        )


def shape_blocks(P: ProlongedAlgebra, m: int) -> tuple[ShapeBlock, ...]:
    blocks = []
    offset = 0
    for j in range(-P.depth, 0):
        block = ShapeBlock(j, P.dim(j), P.dim(j + m), offset)
        blocks.append(block)
        offset += block.size
    return tuple(blocks)


def shape_dim(P: ProlongedAlgebra, m: int) -> int:
    return sum(b.size for b in shape_blocks(P, m))


def _block_for(P: ProlongedAlgebra, m: int, source_degree: int) -> ShapeBlock:
    return shape_blocks(P, m)[source_degree + P.depth]


def apply_shape(P: ProlongedAlgebra, m: int, A: Sequence[Fraction], v: Element) -> Element:
    """A(v) for a shape vector A in S_m and v in g^-."""
    block = _block_for(P, m, v.degree)
    out = [Fraction(0)] * block.target_dim
    for s, coeff in enumerate(v.coords):
        if coeff:
            start = block.coordinate(s, 0)
            add_scaled(out, coeff, A[start:start + block.target_dim])
    return Element(v.degree + m, tuple(out))


def layer_map(P: ProlongedAlgebra, X: Element) -> Vector:
    """The shape vector in S_m of a layer element given in layer coordinates."""
    layer = P.layer(X.degree)
    acc = [Fraction(0)] * layer.ambient_dim
    for coeff, A in zip(X.coords, layer.basis):
        add_scaled(acc, coeff, A)
    return tuple(acc)


# ── Brackets ───────────────────────────────────────────────────────────

def extended_bracket(P: ProlongedAlgebra, X: Element, v: Element) -> Element:
    """[X, v] for homogeneous X and v in g^-.

    Base bracket when deg X <= 0; evaluation X(v) when deg X >= 1, landing
    in whatever degree deg X + deg v names.
    """
    if v.degree >= 0:
        raise DegreeError(f"Second argument must lie in g^-, got degree {v.degree}", degree=v.degree)
    target = X.degree + v.degree
    if target < -P.depth:
        return Element(target, ())
    if X.degree <= 0:
        return Element(target, homogeneous_bracket(P.base, X.degree, X.coords, v.degree, v.coords))
    return apply_shape(P, X.degree, layer_map(P, X), v)


def _basis_bracket(P: ProlongedAlgebra, d: int, t: int, q: int, s: int, cache: dict) -> Vector:
    """[e_t, e_s] with e_t in g^d and e_s in g^q (q < 0)."""
    key = (d, t, q, s)
    if key not in cache:
        X = Element(d, unit_vector(P.dim(d), t))
        v = Element(q, unit_vector(P.dim(q), s))
        cache[key] = extended_bracket(P, X, v).coords
    return cache[key]


# ── Relation matrix ────────────────────────────────────────────────────

def relation_pairs(P: ProlongedAlgebra, generators_only: bool) -> Iterator[tuple[int, int, int, int]]:
    """Basis pairs (p, a, q, b) with e_a in g^p and e_b in g^q.

    All pairs are taken once in global basis order, or, with
    ``generators_only``, every pair whose first member lies in g^-1.
    """
    for p in range(-P.depth, 0):
        if generators_only and p != -1:
            continue
        for q in range(-P.depth, 0):
            if not generators_only and q < p:
                continue
            for a in range(P.dim(p)):
                for b in range(P.dim(q)):
                    if p == q and b <= a:
                        continue
                    yield p, a, q, b


def relation_rows(P: ProlongedAlgebra, m: int, generators_only: bool) -> tuple[tuple[int, int, int, int, int], ...]:
    """Row layout: (p, a, q, b, offset) with target degree p + q + m."""
    rows = []
    offset = 0
    for p, a, q, b in relation_pairs(P, generators_only):
        rows.append((p, a, q, b, offset))
        offset += P.dim(p + q + m)
    return tuple(rows)


def relation_matrix(P: ProlongedAlgebra, m: int, generators_only: bool = True) -> Matrix:
    """A -> (A([u,v]) - [A(u),v] - [u,A(v)]) over basis pairs, on S_m.

    Needs layers through m-1.
    """
    blocks = shape_blocks(P, m)
    rows = relation_rows(P, m, generators_only)
    n_rows = sum(P.dim(p + q + m) for p, _, q, _, _ in rows)
    n_cols = sum(b.size for b in blocks)
    columns = [[Fraction(0)] * n_rows for _ in range(n_cols)]
    cache: dict = {}
    for p, a, q, b, row0 in rows:
        target_dim = P.dim(p + q + m)
        if not target_dim:
            continue
        # A([u, v]) uses the block of source degree p + q
        if p + q >= -P.depth:
            uv = homogeneous_bracket(
                P.base, p, unit_vector(P.dim(p), a), q, unit_vector(P.dim(q), b)
            )
            block = blocks[p + q + P.depth]
            for w, coeff in enumerate(uv):
                if not coeff:
                    continue
                for t in range(block.target_dim):
                    columns[block.coordinate(w, t)][row0 + t] += coeff
        # -[A(u), v]
        block = blocks[p + P.depth]
        for t in range(block.target_dim):
            image = _basis_bracket(P, p + m, t, q, b, cache)
            col = columns[block.coordinate(a, t)]
            for r, x in enumerate(image):
                if x:
                    col[row0 + r] -= x
        # -[u, A(v)] = +[A(v), u]
        block = blocks[q + P.depth]
        for t in range(block.target_dim):
            image = _basis_bracket(P, q + m, t, p, a, cache)
            col = columns[block.coordinate(b, t)]
            for r, x in enumerate(image):
                if x:
                    col[row0 + r] += x
    logger.debug("Relation matrix for degree %d: %dx%d", m, n_rows, n_cols)
    return Matrix.from_columns(columns, n_rows)


def prolong_step(P: ProlongedAlgebra, i: int) -> Subspace:
    """g^i as the kernel of the relation matrix over pairs u in g^-1, v in g^-."""
    if i < 1:
        raise DegreeError(f"prolong_step needs degree >= 1, got {i}", degree=i)
    for d in range(1, i):
        P.layer(d)
    layer = kernel_basis(relation_matrix(P, i, generators_only=True))
    logger.info("dim g^%d = %d", i, layer.dim)
    return layer


def relation_residuals(P: ProlongedAlgebra, m: int) -> list[tuple[int, int, int, int, int]]:
    """Failures (basis element, p, a, q, b) of the relation over all pairs in g^-."""
    M = relation_matrix(P, m, generators_only=False)
    failures = []
    for k, A in enumerate(P.layer(m).basis):
        residual = M.apply(A)
        if is_zero(residual):
            continue
        for p, a, q, b, row0 in relation_rows(P, m, generators_only=False):
            if not is_zero(residual[row0:row0 + P.dim(p + q + m)]):
                failures.append((k, p, a, q, b))
    return failures


# ── Universal prolongation ─────────────────────────────────────────────

class ProlongationStatus(str, Enum):
    FINITE = "finite"
    CAP_REACHED = "cap_reached"


@dataclass(frozen=True)
class ProlongationResult:
    algebra: ProlongedAlgebra
    status: ProlongationStatus
    height: int
    checks: Mapping[str, bool] = field(default_factory=dict)

    @property
    def g0_trivial(self) -> bool:
        return self.algebra.dim(0) == 0

    @property
    def top_degree(self) -> int:
        """Last degree reported in dims_by_degree."""
        if self.status is ProlongationStatus.CAP_REACHED:
            return self.algebra.cap
        return max(self.height, 0)

    @cached_property
    def dims_by_degree(self) -> tuple[int, ...]:
        return tuple(self.algebra.dim(d) for d in range(-self.algebra.depth, self.top_degree + 1))

    @property
    def total_dim(self) -> int:
        return sum(self.dims_by_degree)

    def describe_status(self) -> str:
        if self.status is ProlongationStatus.FINITE:
            return f"Finite({self.height})"
        return f"CapReached({self.algebra.cap})"


def universal_prolongation(g: GradedLieAlgebra, cap: int = DEFAULT_CAP) -> ProlongationResult:
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    if g.space.max_degree > 0:
        raise DegreeWindowError(
            f"Prolongation needs a base algebra on degrees [-k, 0], got max degree {g.space.max_degree}",
            max_degree=g.space.max_degree,
        )
    g = with_degree_zero(g)
    report = is_fundamental(g)
    if not report.is_fundamental:
        raise NotFundamental("; ".join(report.violations), violations=list(report.violations))

    P = ProlongedAlgebra(base=g, cap=cap)
    checks: dict[str, bool] = {"termination_guard": True}
    status = ProlongationStatus.CAP_REACHED
    height = cap
    for i in range(1, cap + 1):
        layer = prolong_step(P, i)
        P = P.with_layer(i, layer)
        if layer.dim:
            continue
        guard = prolong_step(P, i + 1)
        if guard.dim:
            # cannot happen for a fundamental base; keep prolonging
            logger.error("Zero layer g^%d followed by nonzero g^%d", i, i + 1)
            checks["termination_guard"] = False
            continue
        height = i - 1 if i > 1 or g.space.dim(0) else -1
        status = ProlongationStatus.FINITE
        break
    else:
        logger.warning("Prolongation did not terminate by degree %d", cap)

    P = replace(P, finite_height=height if status is ProlongationStatus.FINITE else None)
    checks["relation_all_pairs"] = all(
        not relation_residuals(P, m) for m in sorted(P.layers) if P.layers[m].dim
    )
    result = ProlongationResult(P, status, height, checks)
    logger.info("Prolongation %s, dims %s", result.describe_status(), result.dims_by_degree)
    return result
