"""Polynomial vector fields over QQ on an affine chart."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.rings import PolyElement, PolyRing, ring

from src.errors import DimensionMismatch, DocumentError
from src.exactla.linalg import Vector, as_rational

logger = logging.getLogger(__name__)

_TRANSFORMATIONS = standard_transformations + (convert_xor,)
_IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))\s*")


def polynomial_ring(var_names: Sequence[str]) -> PolyRing:
    if not var_names:
        raise DocumentError("A chart needs at least one variable")
    if len(set(var_names)) != len(var_names):
        raise DocumentError(f"Duplicate variable names in {list(var_names)}")
    bad = [name for name in var_names if not _IDENTIFIER.fullmatch(name)]
    if bad:
        raise DocumentError(f"Variable names must be plain identifiers: {bad}", names=bad)
    R, *_ = ring(list(var_names), QQ)
    return R


def var_names(R: PolyRing) -> tuple[str, ...]:
    return tuple(str(s) for s in R.symbols)


# ── Polynomials ────────────────────────────────────────────────────────

def _check_tokens(text: str, names: set[str]) -> None:
    """Integers, chart variables, ``+ - * / ^`` and parentheses only."""
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise DocumentError(f"Unexpected character {text[pos:].strip()[:1]!r} in {text!r}", text=text)
        name = match.group("name")
        if name is not None and name not in names:
            raise DocumentError(f"Unknown name {name!r} in {text!r}", text=text, name=name)
        pos = match.end()


def parse_polynomial(text: str | int, R: PolyRing) -> PolyElement:
    """Read ``"1/2*x^2*y - 3"``-style text into the ring.

    The text is screened token by token before sympy sees it, so nothing
    but arithmetic on the chart variables ever reaches ``parse_expr``.
    """
    if isinstance(text, int):
        return R(text)
    local = {str(s): s for s in R.symbols}
    _check_tokens(str(text), set(local))
    try:
        expr = parse_expr(str(text), local_dict=local, transformations=_TRANSFORMATIONS)
        return R.from_expr(expr)
    except Exception as exc:
        raise DocumentError(f"Not a polynomial in {list(local)}: {text!r}", text=str(text)) from exc


def evaluate(p: PolyElement, point: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for monom, coeff in p.terms():
        term = as_rational(coeff)
        for x, e in zip(point, monom):
            if e:
                term *= x ** e
        total += term
    return total


def format_polynomial(p: PolyElement) -> str:
    """Deterministic text form, terms in the ring's lex order."""
    if not p:
        return "0"
    names = var_names(p.ring)
    pieces: list[str] = []
    for monom, coeff in p.terms():
        c = as_rational(coeff)
        factors = [
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(names, monom)
            if e
        ]
        magnitude = abs(c)
        if not factors:
            body = str(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(magnitude)] + factors)
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces)


# ── Vector fields ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class PolyVectorField:
    """sum_a components[a] * d/dx_a."""

    ring: PolyRing
    components: tuple[PolyElement, ...]

    def __post_init__(self) -> None:
        if len(self.components) != self.ring.ngens:
            raise DimensionMismatch(
                f"Vector field has {len(self.components)} components on {self.ring.ngens} variables"
            )

    @property
    def n_vars(self) -> int:
        return self.ring.ngens

    @classmethod
    def coordinate(cls, R: PolyRing, index: int) -> PolyVectorField:
        return cls(R, tuple(R.one if a == index else R.zero for a in range(R.ngens)))

    @classmethod
    def parse(cls, R: PolyRing, components: Sequence[str | int]) -> PolyVectorField:
        if len(components) != R.ngens:
            raise DocumentError(
                f"Vector field lists {len(components)} components, chart has {R.ngens} variables"
            )
        return cls(R, tuple(parse_polynomial(c, R) for c in components))

    def is_zero(self) -> bool:
        return not any(self.components)

    def at(self, point: Sequence[Fraction]) -> Vector:
        return tuple(evaluate(c, point) for c in self.components)

    def formatted(self) -> list[str]:
        return [format_polynomial(c) for c in self.components]

    def __add__(self, other: PolyVectorField) -> PolyVectorField:
        _same_chart(self, other)
        return PolyVectorField(self.ring, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: PolyVectorField) -> PolyVectorField:
        _same_chart(self, other)
        return PolyVectorField(self.ring, tuple(a - b for a, b in zip(self.components, other.components)))

    def scaled(self, p: PolyElement | int) -> PolyVectorField:
        return PolyVectorField(self.ring, tuple(p * a for a in self.components))


def _same_chart(X: PolyVectorField, Y: PolyVectorField) -> None:
    if X.ring != Y.ring:
        raise DimensionMismatch(
            f"Vector fields live on different charts {var_names(X.ring)} and {var_names(Y.ring)}"
        )


def lie_bracket_vf(X: PolyVectorField, Y: PolyVectorField) -> PolyVectorField:
    """[X, Y]^a = sum_b X^b d_b Y^a - Y^b d_b X^a."""
    _same_chart(X, Y)
    gens = X.ring.gens
    out = []
    for a in range(X.n_vars):
        acc = X.ring.zero
        for b, x in enumerate(gens):
            if X.components[b]:
                acc += X.components[b] * Y.components[a].diff(x)
            if Y.components[b]:
                acc -= Y.components[b] * X.components[a].diff(x)
        out.append(acc)
    return PolyVectorField(X.ring, tuple(out))


def apply_to_function(X: PolyVectorField, f: PolyElement) -> PolyElement:
    """X(f), the derivative of f along X."""
    acc = X.ring.zero
    for c, x in zip(X.components, X.ring.gens):
        if c:
            acc += c * f.diff(x)
    return acc
