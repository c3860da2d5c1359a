from fractions import Fraction
from random import Random

import pytest

from src.catalog import fixtures as catalog
from src.errors import AntisymmetryViolation, DegreeWindowError, GradingViolation, JacobiViolation
from src.exactla.linalg import Matrix
from src.gla.algebra import (
    bracket,
    change_basis,
    direct_sum_with_derivations,
    is_fundamental,
    make_gla,
    truncate,
)
from src.gla.space import BasisIndex, GradedVectorSpace, gl_filtered_dim, gl_shape_dim, hom_dim


def _coords(g, name):
    v = [Fraction(0)] * g.dim
    v[g.name_index(name)] = Fraction(1)
    return tuple(v)


def _jacobi_residual(g, a, b, c):
    def e(i):
        return tuple(Fraction(int(t == i)) for t in range(g.dim))

    total = [Fraction(0)] * g.dim
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        for k, value in enumerate(bracket(g, bracket(g, e(x), e(y)), e(z))):
            total[k] += value
    return total


# ── Graded spaces ──────────────────────────────────────────────────────

def test_space_offsets_and_indices():
    space = GradedVectorSpace.from_dims({-2: 1, -1: 2, 0: 4})

    assert space.total_dim == 7
    assert space.offset(-1) == 1
    assert space.index(BasisIndex(0, 2)) == 5
    assert space.basis_index(5) == BasisIndex(0, 2)


def test_from_dims_fills_missing_degrees():
    space = GradedVectorSpace.from_dims({-3: 1, -1: 2})

    assert space.dims == {-3: 1, -2: 0, -1: 2}


def test_truncation_drops_higher_degrees():
    space = GradedVectorSpace.from_dims({-2: 1, -1: 2, 0: 4})

    assert space.truncation(-1).dims == {-2: 1, -1: 2}


def test_shape_dimensions():
    # Arrange
    space = GradedVectorSpace.from_dims({-2: 1, -1: 2, 0: 4})

    # Act / Assert
    assert hom_dim(space, space, 1) == 1 * 2 + 2 * 4
    assert gl_shape_dim(space, 2) == 4
    assert gl_filtered_dim(space, 1) == 14
    assert gl_filtered_dim(space, 3) == 0


def test_space_rejects_nonnegative_min_degree():
    with pytest.raises(ValueError):
        GradedVectorSpace(0, 0, {0: 1})


# ── Construction and validation ────────────────────────────────────────

def test_heisenberg_bracket(heisenberg):
    x, y, z = (_coords(heisenberg, n) for n in ("x", "y", "z"))

    assert bracket(heisenberg, x, y) == z
    assert bracket(heisenberg, y, x) == tuple(-c for c in z)


def test_bracket_is_antisymmetric_on_random_vectors(csp_symbol):
    rng = Random(5)
    for _ in range(10):
        u = tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(csp_symbol.dim))
        assert all(c == 0 for c in bracket(csp_symbol, u, u))


def test_abelian_brackets_vanish():
    g = catalog.abelian(3)

    assert bracket(g, (1, 2, 3), (4, 5, 6)) == (0, 0, 0)


def test_grading_violation():
    space = GradedVectorSpace.from_dims({-2: 1, -1: 2})
    table = {
        (BasisIndex(-1, 0), BasisIndex(-1, 1)): {BasisIndex(-2, 0): 1},
        (BasisIndex(-1, 0), BasisIndex(-2, 0)): {BasisIndex(-1, 0): 1},
    }

    with pytest.raises(GradingViolation) as exc:
        make_gla(space, table)

    assert exc.value.details["degrees"] == (-1, -2)


def test_jacobi_violation_names_the_triple():
    # Arrange: [a, b] = a in degree 0, with a, b also moving x
    space = GradedVectorSpace.from_dims({-1: 1, 0: 2})
    table = {
        (BasisIndex(0, 0), BasisIndex(0, 1)): {BasisIndex(0, 0): 1},
        (BasisIndex(0, 0), BasisIndex(-1, 0)): {BasisIndex(-1, 0): 1},
        (BasisIndex(0, 1), BasisIndex(-1, 0)): {BasisIndex(-1, 0): 1},
    }

    # Act
    with pytest.raises(JacobiViolation) as exc:
        make_gla(space, table, ["x", "a", "b"])

    # Assert
    assert exc.value.details["triple"] == ("x", "a", "b")
    assert exc.value.details["residual"] == {"x": "1"}


def test_self_bracket_must_vanish():
    space = GradedVectorSpace.from_dims({-1: 1, 0: 1})
    table = {(BasisIndex(0, 0), BasisIndex(0, 0)): {BasisIndex(0, 0): 1}}

    with pytest.raises(AntisymmetryViolation):
        make_gla(space, table)


@pytest.mark.parametrize("zero_first", [True, False])
def test_zero_entry_conflicts_with_nonzero_reverse(zero_first):
    # Arrange
    space = GradedVectorSpace.from_dims({-2: 1, -1: 2})
    x, y, z = BasisIndex(-1, 0), BasisIndex(-1, 1), BasisIndex(-2, 0)
    entries = [((x, y), {}), ((y, x), {z: 1})]
    table = dict(entries if zero_first else reversed(entries))

    # Act / Assert
    with pytest.raises(AntisymmetryViolation) as exc:
        make_gla(space, table, ["z", "x", "y"])
    assert exc.value.details["pair"] == (1, 2)


def test_matching_entries_in_both_orders_are_accepted():
    space = GradedVectorSpace.from_dims({-2: 1, -1: 2})
    x, y, z = BasisIndex(-1, 0), BasisIndex(-1, 1), BasisIndex(-2, 0)
    table = {(x, y): {z: 1}, (y, x): {z: -1}}

    g = make_gla(space, table, ["z", "x", "y"])

    assert bracket(g, _coords(g, "x"), _coords(g, "y")) == (1, 0, 0)


def test_reversed_entry_is_read_antisymmetrically():
    space = GradedVectorSpace.from_dims({-2: 1, -1: 2})
    table = {(BasisIndex(-1, 1), BasisIndex(-1, 0)): {BasisIndex(-2, 0): 1}}

    g = make_gla(space, table, ["z", "x", "y"])

    assert bracket(g, _coords(g, "x"), _coords(g, "y")) == (-1, 0, 0)


@pytest.mark.parametrize(
    "build",
    [catalog.gl_symbol, catalog.so_symbol, catalog.co_symbol, catalog.csp_symbol, lambda: catalog.heisenberg(2)],
)
def test_catalog_algebras_satisfy_jacobi(build):
    g = build()
    for a in range(g.dim):
        for b in range(a + 1, g.dim):
            for c in range(b + 1, g.dim):
                assert all(x == 0 for x in _jacobi_residual(g, a, b, c))


def test_catalog_algebras_respect_grading(csp_symbol):
    g = csp_symbol
    for (i, j), result in g.structure.items():
        target = g.space.degree_of(i) + g.space.degree_of(j)
        assert all(g.space.degree_of(k) == target for k in result)


# ── Fundamental checks ─────────────────────────────────────────────────

def test_csp_symbol_is_fundamental(csp_symbol):
    report = is_fundamental(csp_symbol)

    assert report.generated_by_minus_one
    assert report.adjoint_injective_on_g0
    assert report.is_fundamental


def test_not_generated_by_degree_minus_one():
    g = make_gla(GradedVectorSpace.from_dims({-2: 1, -1: 1}), {})

    report = is_fundamental(g)

    assert not report.generated_by_minus_one
    assert report.violations


def test_central_degree_zero_element_is_not_faithful():
    # Arrange
    zero = Matrix.zeros(2, 2)
    g = direct_sum_with_derivations(catalog.abelian(2), [{-1: Matrix.identity(2)}, {-1: zero}])

    # Act
    report = is_fundamental(g)

    # Assert
    assert report.generated_by_minus_one
    assert not report.adjoint_injective_on_g0


def test_free_two_step_with_all_derivations_is_fundamental():
    heis = catalog.heisenberg()
    mats, names = catalog.gl_matrices(2)
    derivations = [{-1: M, -2: Matrix(1, 1, (M.entries[0] + M.entries[3],))} for M in mats]

    g = direct_sum_with_derivations(heis, derivations, names)

    assert is_fundamental(g).is_fundamental


def test_fundamental_check_rejects_positive_degrees():
    g = make_gla(GradedVectorSpace.from_dims({-1: 1, 1: 1}), {})

    with pytest.raises(DegreeWindowError):
        is_fundamental(g)


# ── Basis changes and truncation ───────────────────────────────────────

def test_change_basis_rescales_structure_constants(heisenberg):
    blocks = {-1: Matrix.from_rows([[2, 0], [0, 3]])}

    g = change_basis(heisenberg, blocks)

    assert g.structure == {(1, 2): {0: Fraction(6)}}


def test_truncate_keeps_lower_degrees(csp_symbol):
    g = truncate(csp_symbol, -1)

    assert g.dim == 3
    assert g.basis_names == ("z", "x", "y")
    assert g.structure == catalog.heisenberg().structure
