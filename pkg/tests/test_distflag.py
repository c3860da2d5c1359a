import random
from fractions import Fraction

import pytest

from src.catalog import fixtures as catalog
from src.distflag.fibration import (
    gr_tautological_fixture,
    jet_fibration,
    pp_from_fibrations,
    tautological_names,
)
from src.distflag.fields import (
    PolyVectorField,
    apply_to_function,
    format_polynomial,
    lie_bracket_vf,
    parse_polynomial,
    polynomial_ring,
)
from src.distflag.flag import (
    DistributionModel,
    filtration_check,
    levi_and_cauchy,
    regularity_probe,
    sample_points,
    symbol_at_point,
    weak_derived_flag,
)
from src.errors import (
    DependentGenerators,
    DimensionMismatch,
    DocumentError,
    IntegrabilityFailed,
    NotBracketGenerating,
    NotTransverse,
    RegularityUnknown,
)
from src.gla.algebra import is_fundamental
from src.pseudoprod.symbol import analyze_pp, levi_nondegenerate


def _model(names, fields, point=None):
    R = polynomial_ring(names)
    generators = tuple(PolyVectorField.parse(R, components) for components in fields)
    return DistributionModel(R, generators, point or (0,) * len(names))


def _flat_pair():
    return _model(["x", "y", "z"], [["1", "0", "0"], ["0", "1", "0"]])


def _square_contact():
    return _model(["x", "y", "z"], [["1", "0", "0"], ["0", "1", "x^2"]])


def _jumping_levi_rank():
    """Levi form of rank 2 at the origin, rank 4 wherever a is nonzero."""
    return _model(
        ["a", "b", "c", "d", "w"],
        [
            ["1", "0", "0", "0", "0"],
            ["0", "1", "0", "0", "a"],
            ["0", "0", "1", "0", "0"],
            ["0", "0", "0", "1", "a*c"],
        ],
    )


# ── Polynomials and fields ─────────────────────────────────────────────

def test_parse_and_format_polynomial():
    R = polynomial_ring(["x", "y"])

    p = parse_polynomial("1/2*x^2*y - 3", R)

    assert format_polynomial(p) == "1/2*x^2*y - 3"
    assert format_polynomial(parse_polynomial("y - x", R)) == "-x + y"
    assert format_polynomial(R.zero) == "0"


@pytest.mark.parametrize(
    "text",
    [
        "x +",
        "x + q",
        "x.foo",
        "__import__('os').getpid() + x",
        "x; y",
        "x == y",
        "y/x",
        "0.5*x",
    ],
)
def test_unreadable_polynomial_is_a_document_error(text):
    R = polynomial_ring(["x", "y"])

    with pytest.raises(DocumentError):
        parse_polynomial(text, R)


def test_polynomial_reader_never_calls_into_python(monkeypatch):
    called = []
    monkeypatch.setattr("os.getpid", lambda: called.append(True) or 0)
    R = polynomial_ring(["x"])

    with pytest.raises(DocumentError):
        parse_polynomial("__import__('os').getpid() + x", R)

    assert called == []


@pytest.mark.parametrize("text", ["(x + y)^2", "x**2 - 2*x*y", " 3 * ( x - 1/4 ) "])
def test_plain_arithmetic_is_accepted(text):
    R = polynomial_ring(["x", "y"])

    assert parse_polynomial(text, R) is not None


def test_chart_needs_distinct_variables():
    with pytest.raises(DocumentError):
        polynomial_ring(["x", "x"])


@pytest.mark.parametrize("names", [["x", "os.path"], ["x", "1y"], ["x", ""]])
def test_chart_variables_must_be_identifiers(names):
    with pytest.raises(DocumentError):
        polynomial_ring(names)


def test_field_evaluates_at_rational_point():
    R = polynomial_ring(["x", "y", "z"])
    X = PolyVectorField.parse(R, ["1", "x", "1/2*y^2"])

    assert X.at((Fraction(2), Fraction(3), Fraction(0))) == (1, 2, Fraction(9, 2))


def test_field_component_count_must_match_chart():
    R = polynomial_ring(["x", "y"])

    with pytest.raises(DocumentError):
        PolyVectorField.parse(R, ["1"])


def test_coordinate_fields_commute():
    R = polynomial_ring(["x", "y"])

    assert lie_bracket_vf(PolyVectorField.coordinate(R, 0), PolyVectorField.coordinate(R, 1)).is_zero()


def test_bracket_with_linear_coefficient():
    R = polynomial_ring(["x", "y", "z"])
    X = PolyVectorField.coordinate(R, 0)
    Y = PolyVectorField.parse(R, ["0", "0", "x"])

    assert lie_bracket_vf(X, Y) == PolyVectorField.coordinate(R, 2)


def test_bracket_of_rotation_like_fields():
    R = polynomial_ring(["x", "y", "z"])
    X = PolyVectorField.parse(R, ["0", "x", "0"])
    Y = PolyVectorField.parse(R, ["y", "0", "0"])

    assert lie_bracket_vf(X, Y).formatted() == ["x", "-y", "0"]


def _random_field(rng: random.Random, R) -> PolyVectorField:
    names = [str(s) for s in R.symbols]
    monomials = ["1", *names, *(f"{a}*{b}" for i, a in enumerate(names) for b in names[i:])]
    components = []
    for _ in names:
        terms = [
            f"({Fraction(rng.randint(-3, 3), rng.randint(1, 3))})*{m}"
            for m in rng.sample(monomials, rng.randint(0, 3))
        ]
        components.append(" + ".join(terms) or "0")
    return PolyVectorField.parse(R, components)


@pytest.mark.parametrize("seed", range(36))
def test_field_bracket_is_antisymmetric_and_satisfies_jacobi(seed):
    # Arrange
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    R = polynomial_ring(["x", "y", "z", "t"][:n])
    X, Y, Z = (_random_field(rng, R) for _ in range(3))

    # Act
    XY, YX = lie_bracket_vf(X, Y), lie_bracket_vf(Y, X)
    jacobi = (
        lie_bracket_vf(lie_bracket_vf(X, Y), Z)
        + lie_bracket_vf(lie_bracket_vf(Y, Z), X)
        + lie_bracket_vf(lie_bracket_vf(Z, X), Y)
    )

    # Assert
    assert (XY + YX).is_zero()
    assert jacobi.is_zero()


def test_apply_to_function():
    R = polynomial_ring(["x", "y", "z"])
    Y = PolyVectorField.parse(R, ["0", "1", "x"])

    assert apply_to_function(Y, parse_polynomial("y*z", R)) == parse_polynomial("z + x*y", R)


def test_fields_on_different_charts_do_not_bracket():
    X = PolyVectorField.coordinate(polynomial_ring(["x", "y"]), 0)
    Y = PolyVectorField.coordinate(polynomial_ring(["u", "v"]), 0)

    with pytest.raises(DimensionMismatch):
        lie_bracket_vf(X, Y)


# ── Models ─────────────────────────────────────────────────────────────

def test_dependent_generators_are_rejected():
    with pytest.raises(DependentGenerators):
        _model(["x", "y"], [["1", "0"], ["2", "0"]])


def test_base_point_must_fit_the_chart():
    with pytest.raises(DimensionMismatch):
        _model(["x", "y"], [["1", "0"]], point=(0, 0, 0))


# ── Weak derived flag ──────────────────────────────────────────────────

def test_contact_flag():
    report = weak_derived_flag(catalog.contact_model())

    assert report.dims == (2, 3)
    assert report.depth == 2
    assert report.bracket_generating


def test_flat_pair_flag_stabilizes_early():
    report = weak_derived_flag(_flat_pair())

    assert report.dims == (2,)
    assert report.stabilized
    assert not report.bracket_generating


def test_engel_flag():
    report = weak_derived_flag(catalog.engel_model())

    assert report.dims == (2, 3, 4)
    assert report.depth == 3
    assert len(report.frame) == 4


# ── Levi form and Cauchy characteristic ────────────────────────────────

def test_contact_is_levi_nondegenerate():
    report = levi_and_cauchy(catalog.contact_model())

    assert report.levi_rank == 2
    assert report.ch_dim == 0
    assert report.witness is None


def test_flat_pair_is_fully_characteristic():
    report = levi_and_cauchy(_flat_pair())

    assert report.levi_rank == 0
    assert report.ch_dim == 2
    assert report.witness == (1, 0, 0)


def test_product_with_a_line_has_the_line_as_characteristic():
    m = _model(
        ["x", "y", "z", "w"],
        [["1", "0", "0", "0"], ["0", "1", "x", "0"], ["0", "0", "0", "1"]],
    )

    report = levi_and_cauchy(m)

    assert report.levi_rank == 2
    assert report.ch_dim == 1
    assert report.witness == (0, 0, 0, 1)


# ── Symbol algebra ─────────────────────────────────────────────────────

def test_contact_symbol_is_heisenberg():
    g = symbol_at_point(catalog.contact_model())

    assert g.space.dims == {-2: 1, -1: 2}
    assert g.structure == {(1, 2): {0: Fraction(-1)}}
    assert levi_nondegenerate(g).nondegenerate


def test_full_tangent_symbol_is_abelian():
    m = _model(["x", "y"], [["1", "0"], ["0", "1"]])

    g = symbol_at_point(m)

    assert g.space.dims == {-1: 2}
    assert g.structure == {}


def test_engel_symbol():
    # Arrange
    m = catalog.engel_model()

    # Act
    g = symbol_at_point(m)

    # Assert
    assert g.space.dims == {-3: 1, -2: 1, -1: 2}
    assert is_fundamental(g).generated_by_minus_one
    assert filtration_check(m).holds


def test_contact_filtration_holds():
    report = filtration_check(catalog.contact_model())

    assert report.holds
    assert report.discrepancies == ()


def test_symbol_needs_bracket_generating_model():
    with pytest.raises(NotBracketGenerating):
        symbol_at_point(_flat_pair())


def test_symbol_rejects_jumping_levi_rank():
    with pytest.raises(RegularityUnknown):
        symbol_at_point(_jumping_levi_rank())


def test_symbol_without_samples_skips_the_probe():
    g = symbol_at_point(_jumping_levi_rank(), samples=0)

    assert g.space.dims == {-2: 1, -1: 4}


# ── Regularity ─────────────────────────────────────────────────────────

def test_sample_points_are_seeded():
    base = (Fraction(0), Fraction(1))

    first = sample_points(base, 5, seed=3)

    assert first == sample_points(base, 5, seed=3)
    assert len(first) == 5
    assert all(p[i] != base[i] for p in first for i in range(2))
    assert sample_points(base, 0) == []


def test_contact_model_is_regular():
    report = regularity_probe(catalog.contact_model())

    assert report.regular
    assert report.mismatches == ()


def test_square_coefficient_is_not_regular_at_origin():
    # Arrange
    m = _square_contact()

    # Act
    report = regularity_probe(m, samples=4, seed=1)

    # Assert
    assert not report.regular
    assert report.base.flag_dims == (2,)
    assert all(sig.flag_dims == (2, 3) for _, sig in report.mismatches)
    assert len(report.mismatches) == 4


def test_jumping_levi_rank_is_caught_by_the_probe():
    report = regularity_probe(_jumping_levi_rank())

    assert not report.regular
    assert report.base.levi_rank == 2
    assert all(sig.levi_rank == 4 for _, sig in report.mismatches)


# ── Tautological charts ────────────────────────────────────────────────

def test_tautological_names():
    assert tautological_names(2, 1) == ["z1", "z2", "w1", "p1_1", "p1_2"]


@pytest.mark.parametrize(
    "m, c, dims",
    [(1, 1, (2, 3)), (1, 2, (3, 5)), (2, 1, (4, 5)), (2, 2, (6, 8))],
)
def test_tautological_flag(m, c, dims):
    model = gr_tautological_fixture(m, c)

    assert model.n_vars == m + c + m * c
    assert weak_derived_flag(model).dims == dims


@pytest.mark.parametrize("m, c", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_tautological_distribution_has_no_characteristic(m, c):
    report = levi_and_cauchy(gr_tautological_fixture(m, c))

    assert report.ch_dim == 0
    assert report.levi_rank == m + m * c


def test_tautological_chart_needs_positive_sizes():
    with pytest.raises(ValueError):
        gr_tautological_fixture(0, 1)


# ── Pseudo-products from fibrations ────────────────────────────────────

def test_first_jet_fibration_gives_the_ode_symbol():
    # Arrange
    fib = jet_fibration(1, 1)

    # Act
    symbol, diagnostics = pp_from_fibrations(fib.e_fields, fib.f_fields, fib.base_point)

    # Assert
    assert symbol.minus.space.dims == {-2: 1, -1: 2}
    assert levi_nondegenerate(symbol.minus).ch_dim == 0
    assert diagnostics.points_checked == 9
    assert list(analyze_pp(symbol).prolongation.dims_by_degree) == [1, 2, 2, 2, 1]


def test_coordinate_foliations_give_an_abelian_symbol():
    R = polynomial_ring(["x", "y"])

    symbol, _ = pp_from_fibrations(
        [PolyVectorField.coordinate(R, 0)], [PolyVectorField.coordinate(R, 1)], (0, 0)
    )

    assert symbol.minus.space.dims == {-1: 2}
    assert symbol.e.dim == symbol.f.dim == 1


def test_non_involutive_family_is_rejected():
    # Arrange
    R = polynomial_ring(["x", "y", "z", "w"])
    e = [PolyVectorField.coordinate(R, 3)]
    f = [PolyVectorField.coordinate(R, 0), PolyVectorField.parse(R, ["0", "1", "x^2", "0"])]

    # Act
    with pytest.raises(IntegrabilityFailed) as exc:
        pp_from_fibrations(e, f, (0, 0, 0, 0))

    # Assert
    assert exc.value.details["family"] == "F"
    assert exc.value.details["witness"] == (0, 1)


def test_families_meeting_at_base_point_are_rejected():
    R = polynomial_ring(["x", "y"])
    e = [PolyVectorField.coordinate(R, 0)]
    f = [PolyVectorField.parse(R, ["1", "y"])]

    with pytest.raises(NotTransverse):
        pp_from_fibrations(e, f, (0, 0))


def test_empty_family_is_rejected():
    R = polynomial_ring(["x", "y"])

    with pytest.raises(DependentGenerators):
        pp_from_fibrations([], [PolyVectorField.coordinate(R, 1)], (0, 0))
