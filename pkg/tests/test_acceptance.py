"""End-to-end checks over the bundled fixtures, through the machine reports."""
import pytest

from src.catalog import fixtures as catalog
from src.catalog.fixtures import load_fixture
from src.distflag.fibration import gr_tautological_fixture
from src.distflag.flag import levi_and_cauchy
from src.exactla.linalg import intersection, span
from src.prolong.engine import ProlongationStatus, universal_prolongation

_PP_FIXTURES = ["ode2-pp", "split-abelian-pp", "lagrangian-pp"]


def _failed(report: dict) -> list[str]:
    return [c["name"] for c in report["checks"] if not c["passed"]]


# ── Finite heights ─────────────────────────────────────────────────────

@pytest.mark.parametrize(
    "name, status, dims, total",
    [
        ("so-symbol", "Finite(0)", [3, 3], 6),
        ("co-symbol", "Finite(1)", [3, 4, 3], 10),
    ],
)
def test_classical_finite_heights(machine_report, name, status, dims, total):
    # Act
    code, report = machine_report("prolong", load_fixture(name))
    result = report["result"]

    # Assert
    assert code == 0
    assert result["status"] == status
    assert result["dims_by_degree"] == dims
    assert result["total_dim"] == total
    assert _failed(result) == []


def test_ode_symbol_report(machine_report):
    code, report = machine_report("pseudo", load_fixture("ode2-pp"))
    result = report["result"]

    assert code == 0
    assert result["g0_dim"] == 2
    assert result["prolongation"]["status"] == "Finite(2)"
    assert result["prolongation"]["dims_by_degree"] == [1, 2, 2, 2, 1]
    assert result["prolongation"]["total_dim"] == 8


def test_trivial_degree_zero_is_flagged(machine_report):
    code, report = machine_report("prolong", load_fixture("abelian-n"))
    result = report["result"]

    assert code == 0
    assert result["status"] == "Finite(-1)"
    assert result["g0_trivial"]


# ── Infinite cases ─────────────────────────────────────────────────────

@pytest.mark.parametrize("build", [catalog.gl_symbol, catalog.csp_symbol])
def test_classical_infinite_cases_reach_default_cap(build):
    result = universal_prolongation(build())

    assert result.status is ProlongationStatus.CAP_REACHED
    assert all(result.algebra.dim(k) > 0 for k in range(1, 11))


def test_split_abelian_symbol_reaches_cap(machine_report):
    code, report = machine_report("pseudo", load_fixture("split-abelian-pp"), cap=6)
    prolongation = report["result"]["prolongation"]

    assert code == 0
    assert prolongation["status"] == "CapReached(6)"
    assert prolongation["dims_by_degree"] == [2] * 8


# ── Kernel identity and complements ────────────────────────────────────

@pytest.mark.parametrize("name", ["so-symbol", "co-symbol", "gl-symbol", "csp-symbol", "heisenberg"])
def test_kernel_identity_on_algebra_fixtures(machine_report, name):
    code, report = machine_report("prolong", load_fixture(name), cap=3)
    result = report["result"]

    assert code == 0
    assert result["partial_ranks"]
    assert _failed(result) == []
    for ranks in result["partial_ranks"]:
        assert ranks["kernel_dim"] == ranks["expected_kernel_dim"]
        assert ranks["rank"] + ranks["w_dim"] == ranks["tor_dim"]


@pytest.mark.parametrize("name", _PP_FIXTURES)
def test_pseudo_product_fixtures_pass_every_check(machine_report, name):
    code, report = machine_report("pseudo", load_fixture(name), cap=4)
    result = report["result"]

    assert code == 0
    assert _failed(result) == []
    assert _failed(result["prolongation"]) == []


# ── Nondegenerate symbols are finite ───────────────────────────────────

@pytest.mark.parametrize("name", _PP_FIXTURES)
def test_nondegenerate_symbols_are_finite_within_default_cap(machine_report, name):
    code, report = machine_report("pseudo", load_fixture(name))
    result = report["result"]

    assert code == 0
    if result["fundamental"] and result["levi_nondegenerate"]:
        assert result["prolongation"]["status"].startswith("Finite")


def test_cauchy_characteristic_splits_on_pseudo_product_fixtures(machine_report):
    for name in _PP_FIXTURES:
        _, report = machine_report("pseudo", load_fixture(name), cap=2)
        result = report["result"]
        assert result["ch_in_e_dim"] + result["ch_in_f_dim"] == result["ch_dim"]


# ── Distributions ──────────────────────────────────────────────────────

@pytest.mark.parametrize("m, c", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_characteristic_meets_vertical_trivially(m, c):
    # Arrange
    model = gr_tautological_fixture(m, c)
    vertical = range(m, model.rank)

    # Act
    levi = levi_and_cauchy(model)
    vertical_span = span(model.rank, [tuple(int(i == k) for i in range(model.rank)) for k in vertical])

    # Assert
    assert intersection(levi.cauchy, vertical_span).dim == 0


def test_jet_fibration_is_levi_nondegenerate(machine_report):
    code, report = machine_report("dist-pp", load_fixture("jet-fibration"))
    result = report["result"]

    assert code == 0
    assert result["vector_field_ch_dim"] == 0
    assert result["pseudo"]["levi_nondegenerate"]
    assert _failed(result) == []


def test_engel_flag_report(machine_report):
    code, report = machine_report("dist-flag", load_fixture("engel-vf"))
    result = report["result"]

    assert code == 0
    assert result["dims"] == [2, 3, 4]
    assert result["depth"] == 3
    assert result["regular"]
    assert _failed(result) == []


def test_contact_symbol_report(machine_report):
    code, report = machine_report("dist-symbol", load_fixture("contact-vf"))
    result = report["result"]

    assert code == 0
    assert result["flag_dims"] == [2, 3]
    assert result["symbol"]["degrees"] == {"-2": 1, "-1": 2}
    assert result["levi_nondegenerate"]
    assert _failed(result) == []


def test_reports_are_byte_identical(run_command):
    for command, name in [("prolong", "co-symbol"), ("pseudo", "ode2-pp"), ("dist-pp", "jet-fibration")]:
        document = load_fixture(name)
        assert run_command(command, document) == run_command(command, document)
