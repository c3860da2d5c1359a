"""Distributions spanned by polynomial fields, examined at rational points.

Every statement here is pointwise: ranks are taken at the base point or at
seeded rational sample points near it, never on a neighbourhood.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from sympy.polys.rings import PolyRing

from src.config import DEFAULT_SAMPLES, DEFAULT_SEED, SAMPLE_HEIGHT
from src.errors import (
    DependentGenerators,
    DimensionMismatch,
    NotBracketGenerating,
    RegularityUnknown,
)
from src.exactla.linalg import (
    Matrix,
    Subspace,
    Vector,
    annihilator,
    as_vector,
    kernel_basis,
    rank,
    solve_in_span,
    span,
)
from src.distflag.fields import PolyVectorField, lie_bracket_vf, var_names
from src.gla.algebra import GradedLieAlgebra, make_gla
from src.gla.space import BasisIndex, GradedVectorSpace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DistributionModel:
    ring: PolyRing
    generators: tuple[PolyVectorField, ...]
    base_point: Vector

    def __post_init__(self) -> None:
        object.__setattr__(self, "base_point", as_vector(self.base_point))
        if len(self.base_point) != self.ring.ngens:
            raise DimensionMismatch(
                f"Base point has {len(self.base_point)} coordinates, chart has {self.ring.ngens}"
            )
        if not self.generators:
            raise DependentGenerators("A distribution needs at least one generator")
        for X in self.generators:
            if X.ring != self.ring:
                raise DimensionMismatch("Generator lives on a different chart")
        values = [X.at(self.base_point) for X in self.generators]
        if rank(Matrix.from_rows(values, self.n_vars)) != len(values):
            raise DependentGenerators(
                "Generators are linearly dependent at the base point",
                base_point=[str(x) for x in self.base_point],
            )

    @property
    def n_vars(self) -> int:
        return self.ring.ngens

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def var_names(self) -> tuple[str, ...]:
        return var_names(self.ring)

    def at_point(self, point: Sequence[object]) -> DistributionModel:
        return DistributionModel(self.ring, self.generators, as_vector(point))


# ── Weak derived flag ──────────────────────────────────────────────────

@dataclass(frozen=True)
class FlagReport:
    dims: tuple[int, ...]
    depth: int
    bracket_generating: bool
    stabilized: bool
    levels: tuple[tuple[PolyVectorField, ...], ...] = field(repr=False, default=())

    @property
    def frame(self) -> tuple[PolyVectorField, ...]:
        return tuple(X for level in self.levels for X in level)


def _greedy_extend(
    chosen: list[Vector], candidates: Sequence[PolyVectorField], point: Vector, n: int
) -> list[PolyVectorField]:
    """Candidates whose value at ``point`` enlarges the span, first come first kept."""
    kept = []
    current = rank(Matrix.from_rows(chosen, n)) if chosen else 0
    for X in candidates:
        value = X.at(point)
        trial = rank(Matrix.from_rows(chosen + [value], n))
        if trial > current:
            chosen.append(value)
            kept.append(X)
            current = trial
        if current == n:
            break
    return kept


def derived_flag_at(
    generators: Sequence[PolyVectorField],
    point: Vector,
    max_depth: int | None = None,
) -> FlagReport:
    """D_{-1} ⊂ D_{-2} ⊂ ... at ``point``, bracketing with the generators only.

    Each level keeps a greedy selection of brackets whose values at
    ``point`` extend the running span, and the next level brackets only
    those. The kept fields are therefore chosen pointwise: the frame, and
    the flag away from regular points, can differ between base points
    even for the same generators.
    """
    n = generators[0].n_vars
    limit = max_depth if max_depth is not None else n
    values: list[Vector] = []
    first = _greedy_extend(values, generators, point, n)
    levels = [tuple(first)]
    dims = [len(values)]
    stabilized = False
    while len(levels) < limit and dims[-1] < n:
        candidates = [lie_bracket_vf(g, h) for h in levels[-1] for g in generators]
        new = _greedy_extend(values, candidates, point, n)
        if not new:
            stabilized = True
            break
        levels.append(tuple(new))
        dims.append(len(values))
    if dims[-1] == n:
        stabilized = True
    return FlagReport(
        dims=tuple(dims),
        depth=len(dims),
        bracket_generating=dims[-1] == n,
        stabilized=stabilized,
        levels=tuple(levels),
    )


def weak_derived_flag(m: DistributionModel, max_depth: int | None = None) -> FlagReport:
    report = derived_flag_at(m.generators, m.base_point, max_depth)
    logger.info("Weak derived flag dims %s, depth %d", report.dims, report.depth)
    return report


# ── Levi form and Cauchy characteristic ────────────────────────────────

@dataclass(frozen=True)
class LeviCauchyReport:
    levi_rank: int
    ch_dim: int
    cauchy: Subspace
    witness: Vector | None


def _levi_at(generators: Sequence[PolyVectorField], point: Vector) -> LeviCauchyReport:
    n = generators[0].n_vars
    values = [X.at(point) for X in generators]
    quotient = annihilator(span(n, values))
    brackets = {}
    r = len(generators)
    for a in range(r):
        for b in range(a + 1, r):
            brackets[(a, b)] = lie_bracket_vf(generators[a], generators[b]).at(point)
    columns = []
    for u in range(r):
        column: list[Fraction] = []
        for v in range(r):
            if u == v:
                value = (Fraction(0),) * n
            elif u < v:
                value = brackets[(u, v)]
            else:
                value = tuple(-x for x in brackets[(v, u)])
            column.extend(sum((phi[i] * value[i] for i in range(n)), Fraction(0)) for phi in quotient.basis)
        columns.append(column)
    chi = Matrix.from_columns(columns, r * quotient.dim)
    cauchy = kernel_basis(chi)
    witness = None
    if cauchy.basis:
        coeffs = cauchy.basis[0]
        witness = tuple(
            sum((c * value[i] for c, value in zip(coeffs, values)), Fraction(0)) for i in range(n)
        )
    return LeviCauchyReport(r - cauchy.dim, cauchy.dim, cauchy, witness)


def levi_and_cauchy(m: DistributionModel) -> LeviCauchyReport:
    """χ(u)(v) = [u, v] mod D at the base point; Ch = ker χ.

    ``cauchy`` is in generator coordinates, ``witness`` is a tangent vector.
    """
    report = _levi_at(m.generators, m.base_point)
    logger.info("Levi rank %d, Cauchy characteristic dim %d", report.levi_rank, report.ch_dim)
    return report


# ── Symbol algebra ─────────────────────────────────────────────────────

@dataclass(frozen=True)
class AdaptedFrame:
    fields: tuple[PolyVectorField, ...]
    degrees: tuple[int, ...]
    values: Subspace

    def coordinates(self, v: Vector) -> Vector:
        coords = solve_in_span(self.values, v)
        if coords is None:
            raise NotBracketGenerating("Bracket value leaves the span of the adapted frame")
        return coords


def adapted_frame(m: DistributionModel, flag: FlagReport | None = None) -> AdaptedFrame:
    flag = flag or weak_derived_flag(m)
    if not flag.bracket_generating:
        raise NotBracketGenerating(
            f"Weak derived flag stops at dimension {flag.dims[-1]} of {m.n_vars}",
            dims=list(flag.dims),
        )
    fields_, degrees = [], []
    for i, level in enumerate(flag.levels, start=1):
        fields_.extend(level)
        degrees.extend([-i] * len(level))
    values = Subspace.trusted(m.n_vars, [X.at(m.base_point) for X in fields_])
    return AdaptedFrame(tuple(fields_), tuple(degrees), values)


@dataclass(frozen=True)
class FiltrationReport:
    holds: bool
    discrepancies: tuple[tuple[int, int], ...]


def _frame_brackets(frame: AdaptedFrame, point: Vector) -> dict[tuple[int, int], Vector]:
    out = {}
    for a in range(len(frame.fields)):
        for b in range(a + 1, len(frame.fields)):
            value = lie_bracket_vf(frame.fields[a], frame.fields[b]).at(point)
            out[(a, b)] = frame.coordinates(value)
    return out


def filtration_check(m: DistributionModel) -> FiltrationReport:
    """[D_i, D_j] ⊂ D_{i+j} at the base point for all frame pairs."""
    frame = adapted_frame(m)
    bad = []
    for (a, b), coords in _frame_brackets(frame, m.base_point).items():
        target = frame.degrees[a] + frame.degrees[b]
        if any(c and frame.degrees[k] < target for k, c in enumerate(coords)):
            bad.append((a, b))
    if bad:
        logger.warning("Filtration condition fails for %d frame pairs", len(bad))
    return FiltrationReport(not bad, tuple(bad))


def symbol_at_point(
    m: DistributionModel,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> GradedLieAlgebra:
    """Graded quotients D_i / D_{i+1} at the base point with the induced bracket.

    Brackets are projected to the degree i+j part of the adapted frame;
    components deeper than i+j are reported by ``filtration_check``.
    """
    frame = adapted_frame(m)
    if samples and not regularity_probe(m, samples, seed).regular:
        raise RegularityUnknown("Flag or Levi ranks change near the base point", samples=samples, seed=seed)
    depth = -min(frame.degrees)
    dims = {d: frame.degrees.count(d) for d in range(-depth, 0)}
    space = GradedVectorSpace(-depth, -1, dims)
    local = []
    seen: dict[int, int] = {}
    for d in frame.degrees:
        local.append(BasisIndex(d, seen.get(d, 0)))
        seen[d] = seen.get(d, 0) + 1
    table: dict[tuple[BasisIndex, BasisIndex], dict[BasisIndex, Fraction]] = {}
    for (a, b), coords in _frame_brackets(frame, m.base_point).items():
        target = frame.degrees[a] + frame.degrees[b]
        if target < -depth:
            continue
        result = {local[k]: c for k, c in enumerate(coords) if c and frame.degrees[k] == target}
        if result:
            table[(local[a], local[b])] = result
    g = make_gla(space, table)
    logger.info("Symbol algebra at base point: dims %s", dict(space.dims))
    return g


# ── Regularity ─────────────────────────────────────────────────────────

def sample_points(
    base: Vector, count: int, seed: int = DEFAULT_SEED, height: int = SAMPLE_HEIGHT
) -> list[Vector]:
    """base + (±a/b) per coordinate with 1 <= a, b <= height."""
    if not count:
        return []
    rng = np.random.default_rng(seed)
    shape = (count, len(base))
    numerators = rng.integers(1, height + 1, size=shape)
    denominators = rng.integers(1, height + 1, size=shape)
    signs = rng.integers(0, 2, size=shape)
    points = []
    for row in range(count):
        point = []
        for col, x in enumerate(base):
            offset = Fraction(int(numerators[row, col]), int(denominators[row, col]))
            point.append(x - offset if signs[row, col] else x + offset)
        points.append(tuple(point))
    return points


@dataclass(frozen=True)
class RankSignature:
    flag_dims: tuple[int, ...]
    levi_rank: int


@dataclass(frozen=True)
class ProbeReport:
    regular: bool
    base: RankSignature
    mismatches: tuple[tuple[Vector, RankSignature], ...]
    samples: int
    seed: int


def rank_signature(generators: Sequence[PolyVectorField], point: Vector) -> RankSignature:
    flag = derived_flag_at(generators, point)
    independent = list(flag.levels[0])
    levi = _levi_at(independent, point).levi_rank
    return RankSignature(flag.dims, levi)


def regularity_probe(
    m: DistributionModel, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED
) -> ProbeReport:
    """Compare flag and Levi ranks at seeded points against the base point.

    A probe, not a proof: agreement on finitely many points.
    """
    base = rank_signature(m.generators, m.base_point)
    mismatches = []
    for point in sample_points(m.base_point, samples, seed):
        signature = rank_signature(m.generators, point)
        if signature != base:
            mismatches.append((point, signature))
    if mismatches:
        logger.warning("Ranks change at %d of %d sample points", len(mismatches), samples)
    return ProbeReport(not mismatches, base, tuple(mismatches), samples, seed)
