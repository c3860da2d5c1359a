"""Tautological distributions and pseudo-products from pairs of foliations."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from sympy.polys.rings import PolyRing

from src.config import DEFAULT_SAMPLES, DEFAULT_SEED
from src.errors import DependentGenerators, IntegrabilityFailed, NotTransverse
from src.exactla.linalg import Matrix, Vector, as_vector, contains, rank, span, unit_vector
from src.distflag.fields import PolyVectorField, lie_bracket_vf, polynomial_ring
from src.distflag.flag import DistributionModel, sample_points, symbol_at_point
from src.pseudoprod.symbol import PseudoProductSymbol, make_pp_symbol

logger = logging.getLogger(__name__)


# ── Tautological chart ─────────────────────────────────────────────────

def tautological_names(m: int, c: int) -> list[str]:
    """z1..zm, w1..wc, then p{k}_{i} with k outer."""
    return (
        [f"z{i}" for i in range(1, m + 1)]
        + [f"w{k}" for k in range(1, c + 1)]
        + [f"p{k}_{i}" for k in range(1, c + 1) for i in range(1, m + 1)]
    )


@dataclass(frozen=True)
class Fibration:
    """Two families of fields, E and F, on one chart with a base point."""

    ring: PolyRing
    e_fields: tuple[PolyVectorField, ...]
    f_fields: tuple[PolyVectorField, ...]
    base_point: Vector


def _tautological_parts(m: int, c: int) -> Fibration:
    if m < 1 or c < 1:
        raise ValueError(f"Tautological chart needs m, c >= 1, got m={m}, c={c}")
    R = polynomial_ring(tautological_names(m, c))
    gens = R.gens

    def p_index(k: int, i: int) -> int:
        return m + c + (k - 1) * m + (i - 1)

    total = []
    for i in range(1, m + 1):
        components = [R.zero] * R.ngens
        components[i - 1] = R.one
        for k in range(1, c + 1):
            components[m + k - 1] = gens[p_index(k, i)]
        total.append(PolyVectorField(R, tuple(components)))
    vertical = [
        PolyVectorField.coordinate(R, p_index(k, i))
        for k in range(1, c + 1)
        for i in range(1, m + 1)
    ]
    return Fibration(R, tuple(vertical), tuple(total), (0,) * R.ngens)


def gr_tautological_fixture(m: int, c: int) -> DistributionModel:
    """Annihilator of dw^k - sum_i p^k_i dz^i on the chart (z, w, p), at the origin.

    Generators: the total derivatives d/dz^i + sum_k p^k_i d/dw^k, then d/dp^k_i.
    """
    parts = _tautological_parts(m, c)
    return DistributionModel(parts.ring, parts.f_fields + parts.e_fields, as_vector(parts.base_point))


def jet_fibration(m: int, c: int) -> Fibration:
    """E = vertical d/dp^k_i, F = total derivatives, on the tautological chart."""
    parts = _tautological_parts(m, c)
    return Fibration(parts.ring, parts.e_fields, parts.f_fields, as_vector(parts.base_point))


# ── Pseudo-product from two foliations ─────────────────────────────────

@dataclass(frozen=True)
class FibrationDiagnostics:
    points_checked: int
    seed: int
    transverse: bool
    integrable_e: bool
    integrable_f: bool
    note: str = "integrability checked pointwise at the listed samples, not as an identity"


def _check_integrable(
    name: str, family: Sequence[PolyVectorField], points: Sequence[Vector]
) -> None:
    n = family[0].n_vars if family else 0
    brackets = [
        ((a, b), lie_bracket_vf(family[a], family[b]))
        for a in range(len(family))
        for b in range(a + 1, len(family))
    ]
    for point in points:
        frame = span(n, [X.at(point) for X in family])
        for (a, b), Z in brackets:
            if not contains(frame, Z.at(point)):
                raise IntegrabilityFailed(
                    f"{name} is not closed under brackets: [{name}{a}, {name}{b}] leaves its span",
                    family=name,
                    point=[str(x) for x in point],
                    witness=(a, b),
                )


def pp_from_fibrations(
    e_fields: Sequence[PolyVectorField],
    f_fields: Sequence[PolyVectorField],
    base_point: Sequence[object],
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> tuple[PseudoProductSymbol, FibrationDiagnostics]:
    """Symbol of D = E + F at the base point with e, f marked in degree -1."""
    if not e_fields or not f_fields:
        raise DependentGenerators("Both E and F need at least one field")
    point = as_vector(base_point)
    n = e_fields[0].n_vars
    for name, family in (("E", e_fields), ("F", f_fields)):
        values = [X.at(point) for X in family]
        if rank(Matrix.from_rows(values, n)) != len(values):
            raise DependentGenerators(f"{name} fields are dependent at the base point", family=name)
    combined = [X.at(point) for X in list(e_fields) + list(f_fields)]
    if rank(Matrix.from_rows(combined, n)) != len(combined):
        raise NotTransverse(
            "E and F meet nontrivially at the base point",
            base_point=[str(x) for x in point],
        )
    points = [point] + sample_points(point, samples, seed)
    _check_integrable("E", e_fields, points)
    _check_integrable("F", f_fields, points)

    model = DistributionModel(e_fields[0].ring, tuple(e_fields) + tuple(f_fields), point)
    minus = symbol_at_point(model, samples, seed)
    r = len(e_fields) + len(f_fields)
    e = [unit_vector(r, a) for a in range(len(e_fields))]
    f = [unit_vector(r, a) for a in range(len(e_fields), r)]
    symbol = make_pp_symbol(minus, e, f)
    diagnostics = FibrationDiagnostics(
        points_checked=len(points),
        seed=seed,
        transverse=True,
        integrable_e=True,
        integrable_f=True,
    )
    logger.info("Pseudo-product symbol from fibrations: %d + %d generators", len(e), len(f))
    return symbol, diagnostics
