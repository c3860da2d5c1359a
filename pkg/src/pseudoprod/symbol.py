"""Pseudo-product symbols: g^- with two abelian subspaces splitting g^-1."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from src.config import DEFAULT_CAP
from src.errors import DegreeWindowError, DependentGenerators, NotAbelian, NotDirectSum
from src.exactla.linalg import (
    Matrix,
    Subspace,
    Vector,
    annihilator,
    as_vector,
    intersection,
    is_zero,
    kernel_basis,
    rank,
    span,
    subspace_sum,
    subspaces_equal,
    unit_vector,
)
from src.gla.algebra import (
    FundamentalReport,
    GradedLieAlgebra,
    direct_sum_with_derivations,
    homogeneous_bracket,
    is_fundamental,
)
from src.prolong.engine import ProlongationResult, universal_prolongation

logger = logging.getLogger(__name__)

Derivation = dict[int, Matrix]


@dataclass(frozen=True)
class PseudoProductSymbol:
    minus: GradedLieAlgebra
    e: Subspace
    f: Subspace

    @property
    def generators_dim(self) -> int:
        return self.minus.space.dim(-1)

    def swapped(self) -> PseudoProductSymbol:
        return PseudoProductSymbol(self.minus, self.f, self.e)


def _as_subspace(name: str, ambient: int, vectors: Subspace | Iterable[Sequence[object]]) -> Subspace:
    if isinstance(vectors, Subspace):
        return vectors
    rows = [as_vector(v) for v in vectors]
    for v in rows:
        if len(v) != ambient:
            raise DependentGenerators(
                f"{name} vector has length {len(v)}, expected {ambient}", subspace=name
            )
    s = span(ambient, rows)
    if s.dim != len(rows):
        raise DependentGenerators(f"{name} basis vectors are linearly dependent", subspace=name)
    return Subspace.trusted(ambient, rows)


def make_pp_symbol(
    minus: GradedLieAlgebra,
    e: Subspace | Iterable[Sequence[object]],
    f: Subspace | Iterable[Sequence[object]],
) -> PseudoProductSymbol:
    if any(minus.space.dim(d) for d in range(0, minus.space.max_degree + 1)):
        raise DegreeWindowError(
            "A pseudo-product symbol takes g^- only; g^0 is computed from e and f",
            max_degree=minus.space.max_degree,
        )
    n = minus.space.dim(-1)
    e_space = _as_subspace("e", n, e)
    f_space = _as_subspace("f", n, f)
    stacked = list(e_space.basis) + list(f_space.basis)
    if len(stacked) != n or (n and rank(Matrix.from_rows(stacked, n)) != n):
        raise NotDirectSum(
            f"e ({e_space.dim}) and f ({f_space.dim}) do not split g^-1 ({n})",
            e_dim=e_space.dim,
            f_dim=f_space.dim,
            ambient=n,
        )
    for name, sub in (("e", e_space), ("f", f_space)):
        for a in range(sub.dim):
            for b in range(a + 1, sub.dim):
                if not is_zero(homogeneous_bracket(minus, -1, sub.basis[a], -1, sub.basis[b])):
                    raise NotAbelian(
                        f"{name} is not abelian: its basis vectors {a} and {b} bracket nontrivially",
                        subspace=name,
                        witness=(a, b),
                    )
    return PseudoProductSymbol(minus, e_space, f_space)


# ── g^0 ────────────────────────────────────────────────────────────────

def _endo_layout(minus: GradedLieAlgebra) -> dict[int, int]:
    """Offset of End(g^d) inside the flattened block-diagonal coordinates."""
    layout, offset = {}, 0
    for d in minus.space.negative_degrees():
        layout[d] = offset
        offset += minus.space.dim(d) ** 2
    return layout


def _endo_coordinate(minus: GradedLieAlgebra, layout: dict[int, int], d: int, row: int, col: int) -> int:
    return layout[d] + row * minus.space.dim(d) + col


def _g0_constraints(s: PseudoProductSymbol) -> Matrix:
    minus = s.minus
    layout = _endo_layout(minus)
    n_cols = sum(minus.space.dim(d) ** 2 for d in minus.space.negative_degrees())
    rows: list[list[Fraction]] = []
    degrees = list(minus.space.negative_degrees())
    # h([u, v]) - [h u, v] - [u, h v] = 0
    for p in degrees:
        for q in degrees:
            if q < p or p + q < minus.space.min_degree:
                continue
            dp, dq, dt = minus.space.dim(p), minus.space.dim(q), minus.space.dim(p + q)
            for a in range(dp):
                for b in range(dq):
                    if p == q and b <= a:
                        continue
                    block = [[Fraction(0)] * n_cols for _ in range(dt)]
                    uv = homogeneous_bracket(minus, p, unit_vector(dp, a), q, unit_vector(dq, b))
                    for w, c in enumerate(uv):
                        for r in range(dt):
                            if c:
                                block[r][_endo_coordinate(minus, layout, p + q, r, w)] += c
                    for t in range(dp):
                        image = homogeneous_bracket(minus, p, unit_vector(dp, t), q, unit_vector(dq, b))
                        for r, x in enumerate(image):
                            if x:
                                block[r][_endo_coordinate(minus, layout, p, t, a)] -= x
                    for t in range(dq):
                        image = homogeneous_bracket(minus, p, unit_vector(dp, a), q, unit_vector(dq, t))
                        for r, x in enumerate(image):
                            if x:
                                block[r][_endo_coordinate(minus, layout, q, t, b)] -= x
                    rows.extend(block)
    # phi(h w) = 0 for w in e, phi in ann(e); same for f
    n = minus.space.dim(-1)
    for sub in (s.e, s.f):
        for phi in annihilator(sub).basis:
            for w in sub.basis:
                row = [Fraction(0)] * n_cols
                for r in range(n):
                    for c in range(n):
                        if phi[r] and w[c]:
                            row[_endo_coordinate(minus, layout, -1, r, c)] += phi[r] * w[c]
                rows.append(row)
    return Matrix.from_rows(rows, n_cols)


def compute_g0_pp(s: PseudoProductSymbol) -> Subspace:
    """Degree-0 derivations of g^- preserving e and f, in flattened End coordinates."""
    g0 = kernel_basis(_g0_constraints(s))
    logger.info("dim g^0 = %d", g0.dim)
    return g0


def unflatten(minus: GradedLieAlgebra, h: Vector) -> Derivation:
    layout = _endo_layout(minus)
    blocks: Derivation = {}
    for d, start in layout.items():
        size = minus.space.dim(d)
        blocks[d] = Matrix(size, size, tuple(h[start:start + size * size]))
    return blocks


# ── Levi form ──────────────────────────────────────────────────────────

@dataclass(frozen=True)
class LeviReport:
    nondegenerate: bool
    cauchy: Subspace
    witness: Vector | None

    @property
    def ch_dim(self) -> int:
        return self.cauchy.dim


def levi_matrix(minus: GradedLieAlgebra) -> Matrix:
    """u -> (v -> [u, v]) from g^-1 into Hom(g^-1, g^-2), v-major rows."""
    n = minus.space.dim(-1)
    m = minus.space.dim(-2)
    columns = []
    for u in range(n):
        column: list[Fraction] = []
        for v in range(n):
            column.extend(homogeneous_bracket(minus, -1, unit_vector(n, u), -1, unit_vector(n, v)) or ())
        columns.append(column)
    return Matrix.from_columns(columns, n * m)


def levi_nondegenerate(minus: GradedLieAlgebra) -> LeviReport:
    cauchy = kernel_basis(levi_matrix(minus))
    witness = cauchy.basis[0] if cauchy.basis else None
    logger.info("Cauchy characteristic at symbol level: dim %d", cauchy.dim)
    return LeviReport(cauchy.dim == 0, cauchy, witness)


@dataclass(frozen=True)
class CauchySplit:
    cauchy: Subspace
    in_e: Subspace
    in_f: Subspace

    @property
    def holds(self) -> bool:
        return subspaces_equal(self.cauchy, subspace_sum(self.in_e, self.in_f))


def cauchy_split(s: PseudoProductSymbol) -> CauchySplit:
    cauchy = levi_nondegenerate(s.minus).cauchy
    return CauchySplit(cauchy, intersection(cauchy, s.e), intersection(cauchy, s.f))


def ch_decomposition_check(s: PseudoProductSymbol) -> bool:
    """Ch = (Ch ∩ e) + (Ch ∩ f)."""
    return cauchy_split(s).holds


# ── Full analysis ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class PPReport:
    g0_dim: int
    fundamental: FundamentalReport
    levi: LeviReport
    cauchy: CauchySplit
    prolongation: ProlongationResult

    @property
    def levi_nondegenerate(self) -> bool:
        return self.levi.nondegenerate

    @property
    def g0_trivial(self) -> bool:
        return self.g0_dim == 0

    @property
    def height(self) -> str:
        return self.prolongation.describe_status()


def symbol_algebra(s: PseudoProductSymbol) -> GradedLieAlgebra:
    """g^- ⊕ g^0 with g^0 acting on g^- as the computed derivations."""
    g0 = compute_g0_pp(s)
    derivations = [unflatten(s.minus, h) for h in g0.basis]
    return direct_sum_with_derivations(s.minus, derivations)


def analyze_pp(s: PseudoProductSymbol, cap: int = DEFAULT_CAP) -> PPReport:
    g = symbol_algebra(s)
    fundamental = is_fundamental(g)
    prolongation = universal_prolongation(g, cap)
    report = PPReport(
        g0_dim=g.space.dim(0),
        fundamental=fundamental,
        levi=levi_nondegenerate(s.minus),
        cauchy=cauchy_split(s),
        prolongation=prolongation,
    )
    logger.info(
        "Pseudo-product symbol: g^0 %d, Levi-nondegenerate %s, %s",
        report.g0_dim,
        report.levi_nondegenerate,
        report.height,
    )
    return report
