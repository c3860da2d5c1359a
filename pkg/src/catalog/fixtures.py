"""Built-in fixture catalog, generated in code and emitted as documents."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from src.catalog.parser import (
    fibration_to_document,
    gla_to_document,
    model_to_document,
    symbol_to_document,
)
from src.distflag.fields import PolyVectorField, parse_polynomial, polynomial_ring
from src.distflag.fibration import gr_tautological_fixture, jet_fibration
from src.distflag.flag import DistributionModel
from src.errors import UnknownFixture
from src.exactla.linalg import Matrix, unit_vector
from src.gla.algebra import GradedLieAlgebra, direct_sum_with_derivations, make_gla
from src.gla.space import BasisIndex, GradedVectorSpace
from src.models import Document
from src.pseudoprod.symbol import make_pp_symbol

logger = logging.getLogger(__name__)


# ── Algebras ───────────────────────────────────────────────────────────

def heisenberg(pairs: int = 1) -> GradedLieAlgebra:
    """z, x_i, y_i with [x_i, y_i] = z."""
    space = GradedVectorSpace(-2, -1, {-2: 1, -1: 2 * pairs})
    if pairs == 1:
        names = ["z", "x", "y"]
    else:
        names = ["z"] + [f"x{i}" for i in range(1, pairs + 1)] + [f"y{i}" for i in range(1, pairs + 1)]
    table = {
        (BasisIndex(-1, i), BasisIndex(-1, pairs + i)): {BasisIndex(-2, 0): 1}
        for i in range(pairs)
    }
    return make_gla(space, table, names)


def abelian(n: int) -> GradedLieAlgebra:
    space = GradedVectorSpace(-1, -1, {-1: n})
    return make_gla(space, {}, [f"e{i}" for i in range(1, n + 1)])


def _elementary(n: int, i: int, j: int) -> Matrix:
    return Matrix.from_rows(
        [[1 if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)], n
    )


def gl_matrices(n: int) -> tuple[list[Matrix], list[str]]:
    mats, names = [], []
    for i in range(n):
        for j in range(n):
            mats.append(_elementary(n, i, j))
            names.append(f"E{i + 1}{j + 1}")
    return mats, names


def so_matrices(n: int) -> tuple[list[Matrix], list[str]]:
    mats, names = [], []
    for i in range(n):
        for j in range(i + 1, n):
            a, b = _elementary(n, i, j), _elementary(n, j, i)
            mats.append(Matrix(n, n, tuple(x - y for x, y in zip(a.entries, b.entries))))
            names.append(f"A{i + 1}{j + 1}")
    return mats, names


def linear_symbol(n: int, mats: list[Matrix], names: list[str]) -> GradedLieAlgebra:
    """Q^n in degree -1 with a matrix Lie algebra in degree 0."""
    return direct_sum_with_derivations(abelian(n), [{-1: M} for M in mats], names)


def gl_symbol() -> GradedLieAlgebra:
    return linear_symbol(2, *gl_matrices(2))


def so_symbol() -> GradedLieAlgebra:
    return linear_symbol(3, *so_matrices(3))


def co_symbol() -> GradedLieAlgebra:
    mats, names = so_matrices(3)
    return linear_symbol(3, mats + [Matrix.identity(3)], names + ["I"])


def csp_symbol() -> GradedLieAlgebra:
    """Heisenberg with gl(2) acting on x, y and by the trace on z."""
    mats, names = gl_matrices(2)
    derivations = [
        {-1: M, -2: Matrix(1, 1, (M.entries[0] + M.entries[3],))} for M in mats
    ]
    return direct_sum_with_derivations(heisenberg(), derivations, names)


# ── Vector-field models ────────────────────────────────────────────────

def _model(var_names: list[str], fields: list[list[str]]) -> DistributionModel:
    R = polynomial_ring(var_names)
    generators = tuple(
        PolyVectorField(R, tuple(parse_polynomial(c, R) for c in components))
        for components in fields
    )
    return DistributionModel(R, generators, (Fraction(0),) * len(var_names))


def contact_model() -> DistributionModel:
    return _model(["x", "y", "z"], [["1", "0", "0"], ["0", "1", "x"]])


def engel_model() -> DistributionModel:
    return _model(["x", "y", "z", "w"], [["1", "0", "0", "0"], ["0", "1", "x", "1/2*x^2"]])


# ── Catalog ────────────────────────────────────────────────────────────

def _lines(n: int) -> tuple[list[tuple], list[tuple]]:
    return [unit_vector(n, 0)], [unit_vector(n, 1)]


def _ode2_pp() -> Document:
    return symbol_to_document(make_pp_symbol(heisenberg(), *_lines(2)))


def _split_abelian_pp() -> Document:
    return symbol_to_document(make_pp_symbol(abelian(2), *_lines(2)))


def _lagrangian_pp() -> Document:
    e = [unit_vector(4, 0), unit_vector(4, 1)]
    f = [unit_vector(4, 2), unit_vector(4, 3)]
    return symbol_to_document(make_pp_symbol(heisenberg(2), e, f))


def _jet_document(m: int, c: int) -> Document:
    fib = jet_fibration(m, c)
    return fibration_to_document(fib.e_fields, fib.f_fields, fib.base_point)


@dataclass(frozen=True)
class FixtureEntry:
    name: str
    description: str
    build: Callable[..., Document]
    pattern: str | None = None


_CATALOG: tuple[FixtureEntry, ...] = (
    FixtureEntry("heisenberg", "3-dim Heisenberg algebra, degrees {-2:1, -1:2}",
                 lambda: gla_to_document(heisenberg())),
    FixtureEntry("abelian-n", "abelian Q^n in degree -1 (default n = 2)",
                 lambda n=2: gla_to_document(abelian(n)), r"abelian-(\d+)"),
    FixtureEntry("gl-symbol", "Q^2 with g^0 = gl(2)", lambda: gla_to_document(gl_symbol())),
    FixtureEntry("so-symbol", "Q^3 with g^0 = so(3)", lambda: gla_to_document(so_symbol())),
    FixtureEntry("co-symbol", "Q^3 with g^0 = co(3)", lambda: gla_to_document(co_symbol())),
    FixtureEntry("csp-symbol", "Heisenberg with g^0 = gl(2) = csp(2)", lambda: gla_to_document(csp_symbol())),
    FixtureEntry("ode2-pp", "Heisenberg with e, f lines (second-order ODE)", _ode2_pp),
    FixtureEntry("split-abelian-pp", "abelian Q^2 with e, f coordinate lines", _split_abelian_pp),
    FixtureEntry("lagrangian-pp", "5-dim Heisenberg with Lagrangian e, f", _lagrangian_pp),
    FixtureEntry("contact-vf", "contact distribution <d/dx, d/dy + x d/dz> on Q^3",
                 lambda: model_to_document(contact_model())),
    FixtureEntry("engel-vf", "Engel distribution <d/dx, d/dy + x d/dz + x^2/2 d/dw> on Q^4",
                 lambda: model_to_document(engel_model())),
    FixtureEntry("gr-taut-m-c", "tautological distribution on the (z, w, p) chart (default m = c = 1)",
                 lambda m=1, c=1: model_to_document(gr_tautological_fixture(m, c)),
                 r"gr-taut-(\d+)-(\d+)"),
    FixtureEntry("jet-fibration", "vertical / total-derivative pair on J^1(Q, Q)",
                 lambda: _jet_document(1, 1)),
    FixtureEntry("jet-fibration-m-c", "vertical / total-derivative pair on J^1(Q^m, Q^c)",
                 lambda m=1, c=1: _jet_document(m, c), r"jet-fibration-(\d+)-(\d+)"),
)


def fixture_names() -> list[str]:
    return [entry.name for entry in _CATALOG]


def fixture_descriptions() -> list[tuple[str, str]]:
    return [(entry.name, entry.description) for entry in _CATALOG]


def load_fixture(name: str) -> Document:
    for entry in _CATALOG:
        if entry.name == name:
            return entry.build()
    for entry in _CATALOG:
        if entry.pattern is None:
            continue
        match = re.fullmatch(entry.pattern, name)
        if match:
            params = [int(x) for x in match.groups()]
            if any(p < 1 for p in params):
                raise UnknownFixture(f"Fixture parameters must be >= 1 in {name!r}", name=name)
            logger.debug("Fixture %s with parameters %s", entry.name, params)
            return entry.build(*params)
    raise UnknownFixture(f"No fixture named {name!r}", name=name, available=fixture_names())
