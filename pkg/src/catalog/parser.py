"""Read JSON documents into engine objects, and write engine objects back."""
from __future__ import annotations

import json
import logging
from fractions import Fraction
from typing import Sequence

from pydantic import TypeAdapter, ValidationError
from sympy.polys.rings import PolyRing

from src.distflag.fields import PolyVectorField, polynomial_ring
from src.distflag.flag import DistributionModel
from src.errors import DocumentError
from src.exactla.linalg import Vector, as_rational
from src.gla.algebra import GradedLieAlgebra, make_gla
from src.gla.space import BasisIndex, GradedVectorSpace
from src.models import (
    BasisRef,
    BracketEntry,
    Coefficient,
    Document,
    FibrationDocument,
    GlaDocument,
    SymbolDocument,
    Term,
    VectorFieldDocument,
)
from src.pseudoprod.symbol import PseudoProductSymbol, make_pp_symbol

logger = logging.getLogger(__name__)

_document_adapter: TypeAdapter[Document] = TypeAdapter(Document)


def load_document(text: str) -> Document:
    try:
        return _document_adapter.validate_json(text)
    except ValidationError as exc:
        raise DocumentError(
            "Document does not match any known schema",
            errors=json.loads(exc.json(include_url=False)),
        ) from exc


def _rational(value: Coefficient) -> Fraction:
    try:
        return as_rational(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise DocumentError(f"Not an exact rational: {value!r}", value=str(value)) from exc


def _rational_vector(values: Sequence[Coefficient]) -> Vector:
    return tuple(_rational(v) for v in values)


# ── Graded Lie algebras ────────────────────────────────────────────────

def _space(degrees: dict[int, int]) -> GradedVectorSpace:
    if not degrees:
        raise DocumentError("degrees must list at least one degree")
    try:
        return GradedVectorSpace.from_dims(degrees)
    except ValueError as exc:
        raise DocumentError(str(exc), degrees={str(k): v for k, v in degrees.items()}) from exc


def _resolve(ref: BasisRef, space: GradedVectorSpace, names: Sequence[str]) -> BasisIndex:
    if isinstance(ref, str):
        if ref not in names:
            raise DocumentError(f"Unknown basis name {ref!r}", basis=ref)
        return space.basis_index(list(names).index(ref))
    b = BasisIndex(*ref)
    if not 0 <= b.offset < space.dim(b.degree):
        raise DocumentError(f"No basis vector {b.offset} in degree {b.degree}", basis=list(ref))
    return b


def _basis_names(doc: GlaDocument | SymbolDocument, space: GradedVectorSpace) -> tuple[str, ...]:
    if doc.basis_names is None:
        return tuple(f"g{b.degree}_{b.offset}" for b in space.basis())
    if len(doc.basis_names) != space.total_dim:
        raise DocumentError(
            f"{len(doc.basis_names)} basis names for total dimension {space.total_dim}"
        )
    if len(set(doc.basis_names)) != len(doc.basis_names):
        raise DocumentError("basis names must be distinct")
    return tuple(doc.basis_names)


def build_gla(doc: GlaDocument | SymbolDocument) -> GradedLieAlgebra:
    """Validate a gla-shaped document into an algebra (grading and Jacobi checked)."""
    space = _space(doc.degrees)
    names = _basis_names(doc, space)
    table: dict[tuple[BasisIndex, BasisIndex], dict[BasisIndex, Fraction]] = {}
    for entry in doc.brackets:
        left = _resolve(entry.left, space, names)
        right = _resolve(entry.right, space, names)
        result: dict[BasisIndex, Fraction] = {}
        for term in entry.result:
            key = _resolve(term.basis, space, names)
            result[key] = result.get(key, Fraction(0)) + _rational(term.coeff)
        if (left, right) in table:
            raise DocumentError(f"Bracket [{entry.left}, {entry.right}] listed twice")
        table[(left, right)] = result
    return make_gla(space, table, names)


def gla_to_document(g: GradedLieAlgebra) -> GlaDocument:
    names = g.basis_names
    brackets = []
    for (i, j), result in sorted(g.structure.items()):
        brackets.append(
            BracketEntry(
                left=names[i],
                right=names[j],
                result=[Term(basis=names[k], coeff=_coefficient(c)) for k, c in sorted(result.items())],
            )
        )
    return GlaDocument(
        degrees={d: n for d, n in g.space.dims.items()},
        basis_names=list(names),
        brackets=brackets,
    )


def _coefficient(c: Fraction) -> Coefficient:
    return int(c) if c.denominator == 1 else str(c)


# ── Pseudo-product symbols ─────────────────────────────────────────────

def build_symbol(doc: SymbolDocument) -> PseudoProductSymbol:
    minus = build_gla(doc)
    n = minus.space.dim(-1)
    for name, rows in (("e_basis", doc.e_basis), ("f_basis", doc.f_basis)):
        for row in rows:
            if len(row) != n:
                raise DocumentError(f"{name} vectors need {n} coefficients, got {len(row)}")
    e = [_rational_vector(row) for row in doc.e_basis]
    f = [_rational_vector(row) for row in doc.f_basis]
    return make_pp_symbol(minus, e, f)


def symbol_to_document(s: PseudoProductSymbol) -> SymbolDocument:
    base = gla_to_document(s.minus)
    return SymbolDocument(
        degrees=base.degrees,
        basis_names=base.basis_names,
        brackets=base.brackets,
        e_basis=[[_coefficient(x) for x in v] for v in s.e.basis],
        f_basis=[[_coefficient(x) for x in v] for v in s.f.basis],
    )


# ── Vector fields ──────────────────────────────────────────────────────

def _chart(n_vars: int, var_names: Sequence[str]) -> PolyRing:
    if len(var_names) != n_vars:
        raise DocumentError(f"n_vars is {n_vars} but {len(var_names)} variable names are given")
    return polynomial_ring(var_names)


def _base_point(n_vars: int, values: Sequence[Coefficient] | None) -> Vector:
    if values is None:
        return (Fraction(0),) * n_vars
    if len(values) != n_vars:
        raise DocumentError(f"base_point needs {n_vars} coordinates, got {len(values)}")
    return _rational_vector(values)


def build_model(doc: VectorFieldDocument) -> DistributionModel:
    R = _chart(doc.n_vars, doc.var_names)
    fields = tuple(PolyVectorField.parse(R, components) for components in doc.fields)
    return DistributionModel(R, fields, _base_point(doc.n_vars, doc.base_point))


def build_fibration(
    doc: FibrationDocument,
) -> tuple[tuple[PolyVectorField, ...], tuple[PolyVectorField, ...], Vector]:
    R = _chart(doc.n_vars, doc.var_names)
    e = tuple(PolyVectorField.parse(R, components) for components in doc.E_fields)
    f = tuple(PolyVectorField.parse(R, components) for components in doc.F_fields)
    return e, f, _base_point(doc.n_vars, doc.base_point)


def _point_document(point: Vector) -> list[Coefficient] | None:
    if all(x == 0 for x in point):
        return None
    return [_coefficient(x) for x in point]


def model_to_document(m: DistributionModel) -> VectorFieldDocument:
    return VectorFieldDocument(
        n_vars=m.n_vars,
        var_names=list(m.var_names),
        fields=[X.formatted() for X in m.generators],
        base_point=_point_document(m.base_point),
    )


def fibration_to_document(
    e: Sequence[PolyVectorField], f: Sequence[PolyVectorField], base_point: Vector
) -> FibrationDocument:
    R = e[0].ring
    return FibrationDocument(
        n_vars=R.ngens,
        var_names=[str(s) for s in R.symbols],
        E_fields=[X.formatted() for X in e],
        F_fields=[X.formatted() for X in f],
        base_point=_point_document(base_point),
    )


__all__ = [
    "build_fibration",
    "build_gla",
    "build_model",
    "build_symbol",
    "fibration_to_document",
    "gla_to_document",
    "load_document",
    "model_to_document",
    "symbol_to_document",
]
