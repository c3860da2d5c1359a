"""The operators ∂^{n+1}, their Tor spaces, kernels and complements W^{n+1}.

∂^{n+1} is block diagonal on fh(v^{<n+1}) = gl_{n+1}(v^{<n+1}) ⊕ Hom(g^0..g^{n-1}, g^n):

  * ``minus``   the relation map on gl^{n+1}(v^{<n+1}) = S_{n+1}, landing in
                Hom^{n+1}(g^-1 ∧ g^-, v^{<n+1}) (all of Λ²g^- when n = 0);
  * ``higher``  gl_{n+2}(v^{<n+1}), mapped to zero;
  * ``g<i>``    I ⊗ R on Hom(g^i, g^n) for 0 <= i < n, where
                R: g^n -> Hom(g^-1, g^{n-1}) is X -> (u -> X(u)).

Rank, kernel and complement are computed block by block; ``matrix`` builds
the dense operator only when asked.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from src.errors import DegreeError, NotDirectSum
from src.exactla.linalg import (
    Matrix,
    Subspace,
    complement_indices,
    image_basis,
    kernel_basis,
    rank,
    subspaces_equal,
    unit_vector,
)
from src.gla.space import gl_filtered_dim
from src.prolong.engine import (
    ProlongationResult,
    ProlongedAlgebra,
    relation_matrix,
    shape_blocks,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OperatorBlock:
    """I_multiplicity ⊗ matrix placed at the given offsets."""

    name: str
    matrix: Matrix
    multiplicity: int
    domain_offset: int
    codomain_offset: int

    @property
    def domain_dim(self) -> int:
        return self.multiplicity * self.matrix.cols

    @property
    def codomain_dim(self) -> int:
        return self.multiplicity * self.matrix.rows

    @cached_property
    def rank(self) -> int:
        return self.multiplicity * rank(self.matrix)


@dataclass(frozen=True)
class PartialOperator:
    n: int
    blocks: tuple[OperatorBlock, ...]

    @property
    def domain_dim(self) -> int:
        return sum(b.domain_dim for b in self.blocks)

    @property
    def codomain_dim(self) -> int:
        return sum(b.codomain_dim for b in self.blocks)

    @property
    def rank(self) -> int:
        return sum(b.rank for b in self.blocks)

    @property
    def kernel_dim(self) -> int:
        return self.domain_dim - self.rank

    def block(self, name: str) -> OperatorBlock:
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(name)

    @cached_property
    def matrix(self) -> Matrix:
        entries = [Fraction(0)] * (self.codomain_dim * self.domain_dim)
        cols = self.domain_dim
        for b in self.blocks:
            m = b.matrix
            for copy in range(b.multiplicity):
                r0 = b.codomain_offset + copy * m.rows
                c0 = b.domain_offset + copy * m.cols
                for r in range(m.rows):
                    for c in range(m.cols):
                        x = m.entries[r * m.cols + c]
                        if x:
                            entries[(r0 + r) * cols + c0 + c] = x
        return Matrix(self.codomain_dim, cols, tuple(entries))

    def kernel(self) -> Subspace:
        """Dense kernel, as the direct sum of blockwise kernels."""
        basis = []
        for b in self.blocks:
            local = kernel_basis(b.matrix)
            for copy in range(b.multiplicity):
                start = b.domain_offset + copy * b.matrix.cols
                for v in local.basis:
                    full = [Fraction(0)] * self.domain_dim
                    full[start:start + len(v)] = v
                    basis.append(tuple(full))
        return Subspace.trusted(self.domain_dim, basis)

    def image(self) -> Subspace:
        basis = []
        for b in self.blocks:
            local = image_basis(b.matrix)
            for copy in range(b.multiplicity):
                start = b.codomain_offset + copy * b.matrix.rows
                for v in local.basis:
                    full = [Fraction(0)] * self.codomain_dim
                    full[start:start + len(v)] = v
                    basis.append(tuple(full))
        return Subspace.trusted(self.codomain_dim, basis)


def _layers_through(P: ProlongedAlgebra, n: int) -> None:
    for d in range(1, n + 1):
        P.layer(d)


def _evaluation_matrix(P: ProlongedAlgebra, n: int) -> Matrix:
    """R: g^n -> Hom(g^-1, g^{n-1}), rows ordered u-major."""
    block = shape_blocks(P, n)[P.depth - 1]
    target_dim = P.dim(n - 1)
    columns = []
    for A in P.layer(n).basis:
        columns.append(A[block.offset:block.offset + block.size])
    return Matrix.from_columns(columns, P.dim(-1) * target_dim)


def _higher_dim(P: ProlongedAlgebra, n: int) -> int:
    return gl_filtered_dim(P.graded_space(n), n + 2)


def fh_dimension(g: ProlongationResult | ProlongedAlgebra, n: int) -> int:
    """dim fh(v^{<n+1}) from the layer dimensions alone."""
    P = _algebra(g)
    _layers_through(P, n)
    space = P.graded_space(n)
    mixed = sum(P.dim(i) for i in range(0, n)) * P.dim(n) if n >= 1 else 0
    return gl_filtered_dim(space, n + 1) + mixed


def tor_dimension(g: ProlongationResult | ProlongedAlgebra, n: int) -> int:
    """dim Tor^{n+1} from the layer dimensions alone."""
    P = _algebra(g)
    _layers_through(P, n)
    total = 0
    negative = range(-P.depth, 0)
    if n == 0:
        for p in negative:
            for q in negative:
                if q < p:
                    continue
                pairs = P.dim(p) * (P.dim(p) - 1) // 2 if p == q else P.dim(p) * P.dim(q)
                total += pairs * P.dim(p + q + 1)
        return total
    for q in negative:
        pairs = P.dim(-1) * (P.dim(-1) - 1) // 2 if q == -1 else P.dim(-1) * P.dim(q)
        total += pairs * P.dim(q + n)
    for i in range(0, n):
        total += P.dim(-1) * P.dim(i) * P.dim(n - 1)
    return total


def _algebra(g: ProlongationResult | ProlongedAlgebra) -> ProlongedAlgebra:
    return g.algebra if isinstance(g, ProlongationResult) else g


def partial_operator(g: ProlongationResult | ProlongedAlgebra, n: int) -> PartialOperator:
    if n < 0:
        raise DegreeError(f"∂^(n+1) needs n >= 0, got {n}", degree=n)
    P = _algebra(g)
    _layers_through(P, n)
    minus = relation_matrix(P, n + 1, generators_only=n >= 1)
    blocks = [OperatorBlock("minus", minus, 1, 0, 0)]
    domain, codomain = minus.cols, minus.rows
    higher = _higher_dim(P, n)
    blocks.append(OperatorBlock("higher", Matrix.zeros(0, higher), 1, domain, codomain))
    domain += higher
    if n >= 1:
        R = _evaluation_matrix(P, n)
        for i in range(0, n):
            block = OperatorBlock(f"g{i}", R, P.dim(i), domain, codomain)
            blocks.append(block)
            domain += block.domain_dim
            codomain += block.codomain_dim
    op = PartialOperator(n, tuple(blocks))
    logger.info("∂^%d: domain %d, codomain %d, rank %d", n + 1, op.domain_dim, op.codomain_dim, op.rank)
    return op


# ── Kernel identity ────────────────────────────────────────────────────

@dataclass(frozen=True)
class KernelCheck:
    holds: bool
    kernel_dim: int
    expected_dim: int
    layer_dim: int
    higher_dim: int
    evaluation_kernel_dim: int
    all_pairs_match: bool = True


def verify_partial_kernel(
    g: ProlongationResult | ProlongedAlgebra, n: int, op: PartialOperator | None = None
) -> KernelCheck:
    """ker ∂^{n+1} against g^{n+1} ⊕ gl_{n+2}(v^{<n+1}), compared blockwise.

    For n >= 1 the operator only tests brackets with g_{-1}, which is also
    how the layer was built. The layer is therefore also compared with the
    kernel of the relations over every pair of g_-.
    """
    P = _algebra(g)
    if op is None:
        op = partial_operator(P, n)
    layer = P.layer(n + 1)
    minus_kernel = kernel_basis(op.block("minus").matrix)
    layer_matches = layer.ambient_dim == minus_kernel.ambient_dim and subspaces_equal(minus_kernel, layer)
    all_pairs_match = layer_matches
    if n >= 1:
        all_pairs = kernel_basis(relation_matrix(P, n + 1, generators_only=False))
        all_pairs_match = layer.ambient_dim == all_pairs.ambient_dim and subspaces_equal(all_pairs, layer)
    evaluation_kernel = 0
    for b in op.blocks:
        if b.name.startswith("g") and b.multiplicity:
            evaluation_kernel += b.multiplicity * kernel_basis(b.matrix).dim
    higher = op.block("higher").domain_dim
    check = KernelCheck(
        holds=layer_matches and all_pairs_match and evaluation_kernel == 0,
        kernel_dim=op.kernel_dim,
        expected_dim=layer.dim + higher,
        layer_dim=layer.dim,
        higher_dim=higher,
        evaluation_kernel_dim=evaluation_kernel,
        all_pairs_match=all_pairs_match,
    )
    if not check.holds:
        logger.warning(
            "Kernel identity fails at n=%d: kernel %d, expected %d", n, check.kernel_dim, check.expected_dim
        )
    return check


# ── Complement ─────────────────────────────────────────────────────────

@dataclass(frozen=True)
class TorComplement:
    """W^{n+1} spanned by the standard Tor coordinates listed in ``indices``."""

    ambient_dim: int
    indices: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.indices)

    def subspace(self) -> Subspace:
        return Subspace.trusted(self.ambient_dim, (unit_vector(self.ambient_dim, j) for j in self.indices))


def tor_complement(
    g: ProlongationResult | ProlongedAlgebra, n: int, op: PartialOperator | None = None
) -> TorComplement:
    """W^{n+1}: the non-pivot standard coordinates of Im ∂^{n+1}, block by block."""
    if op is None:
        op = partial_operator(g, n)
    indices: list[int] = []
    for b in op.blocks:
        local = complement_indices(image_basis(b.matrix))
        for copy in range(b.multiplicity):
            start = b.codomain_offset + copy * b.matrix.rows
            indices.extend(start + j for j in local)
    w = TorComplement(op.codomain_dim, tuple(sorted(indices)))
    logger.info("dim W^%d = %d (Tor %d, rank %d)", op.n + 1, w.dim, op.codomain_dim, op.rank)
    return w


def direct_sum_check(op: PartialOperator, w: TorComplement) -> bool:
    """Im ∂ ⊕ W = Tor, checked on each block's rows."""
    chosen = set(w.indices)
    for b in op.blocks:
        rows = b.matrix.rows
        image = image_basis(b.matrix)
        for copy in range(b.multiplicity):
            start = b.codomain_offset + copy * rows
            local = [j - start for j in range(start, start + rows) if j in chosen]
            stacked = list(image.basis) + [unit_vector(rows, j) for j in local]
            if len(stacked) != rows or (rows and rank(Matrix.from_rows(stacked, rows)) != rows):
                return False
    return True


def require_direct_sum(op: PartialOperator, w: TorComplement) -> None:
    if not direct_sum_check(op, w):
        raise NotDirectSum(f"Im ∂^{op.n + 1} and W^{op.n + 1} do not split Tor", n=op.n)
