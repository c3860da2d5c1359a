import json

import pytest

from src.catalog.fixtures import fixture_names, load_fixture
from src.catalog.parser import load_document
from src.cli import build_parser, main
from src.models import GlaDocument


def _jacobi_breaking_document() -> str:
    doc = GlaDocument(
        degrees={-1: 1, 0: 2},
        basis_names=["x", "a", "b"],
        brackets=[
            {"left": "a", "right": "b", "result": [{"basis": "a"}]},
            {"left": "a", "right": "x", "result": [{"basis": "x"}]},
            {"left": "b", "right": "x", "result": [{"basis": "x"}]},
        ],
    )
    return doc.model_dump_json(exclude_none=True)


_COMMAND_FOR_FIXTURE = {
    "heisenberg": "check-gla",
    "abelian-n": "check-gla",
    "gl-symbol": "check-gla",
    "so-symbol": "check-gla",
    "co-symbol": "check-gla",
    "csp-symbol": "check-gla",
    "ode2-pp": "pseudo",
    "split-abelian-pp": "pseudo",
    "lagrangian-pp": "pseudo",
    "contact-vf": "dist-flag",
    "engel-vf": "dist-flag",
    "gr-taut-m-c": "dist-flag",
    "jet-fibration": "dist-pp",
    "jet-fibration-m-c": "dist-pp",
}


# ── Fixtures command ───────────────────────────────────────────────────

def test_fixture_list_in_machine_form(run_command):
    code, output = run_command("fixtures", list_fixtures=True)

    names = json.loads(output)
    assert code == 0
    assert len(names) >= 11
    assert names == fixture_names()


def test_fixture_list_in_text_form(run_command):
    code, output = run_command("fixtures", output="text", list_fixtures=True)

    assert code == 0
    assert "heisenberg" in output
    assert "jet-fibration" in output


def test_emitted_fixture_parses_back(run_command):
    # Arrange / Act
    code, output = run_command("fixtures", fixture="heisenberg")
    doc = load_document(output)

    # Assert
    assert code == 0
    assert doc.kind == "gla"
    assert doc.degrees == {-2: 1, -1: 2}
    assert doc.basis_names == ["z", "x", "y"]


def test_parametrized_fixture_sizes(run_command):
    _, output = run_command("fixtures", fixture="gr-taut-2-1")

    doc = load_document(output)

    assert doc.n_vars == 5
    assert doc.var_names == ["z1", "z2", "w1", "p1_1", "p1_2"]


@pytest.mark.parametrize("name", ["nope", "abelian-0", "gr-taut-1"])
def test_unknown_fixture_exits_with_3(machine_report, name):
    code, report = machine_report("fixtures", fixture=name)

    assert code == 3
    assert report["status"] == "invalid"
    assert report["error"]["error"] == "UnknownFixture"


@pytest.mark.parametrize("name", sorted(_COMMAND_FOR_FIXTURE))
def test_every_fixture_passes_its_command(machine_report, name):
    # Arrange
    document = load_fixture(name)

    # Act
    code, report = machine_report(_COMMAND_FOR_FIXTURE[name], document, cap=4)

    # Assert
    assert code == 0, report.get("error")
    assert report["status"] == "ok"
    assert report["result"] is not None


def test_catalog_is_covered():
    assert set(fixture_names()) == set(_COMMAND_FOR_FIXTURE)


# ── Exit codes ─────────────────────────────────────────────────────────

def test_jacobi_break_is_rejected(machine_report):
    code, report = machine_report("check-gla", _jacobi_breaking_document())

    assert code == 2
    assert report["status"] == "rejected"
    assert report["error"]["error"] == "JacobiViolation"
    assert report["error"]["details"]["triple"] == ["x", "a", "b"]


def test_malformed_json_is_invalid(machine_report):
    code, report = machine_report("check-gla", "{not json")

    assert code == 3
    assert report["status"] == "invalid"
    assert report["error"]["error"] == "DocumentError"


@pytest.mark.parametrize("component", ["x.foo", "__import__('os').getpid() + x"])
def test_field_component_outside_arithmetic_is_invalid(machine_report, component):
    doc = {"kind": "vector-fields", "n_vars": 3, "var_names": ["x", "y", "z"],
           "fields": [["1", "0", "0"], ["0", "1", component]]}

    code, report = machine_report("dist-flag", json.dumps(doc))

    assert code == 3
    assert report["error"]["error"] == "DocumentError"


def test_wrong_document_kind_is_invalid(machine_report):
    code, report = machine_report("prolong", load_fixture("contact-vf"))

    assert code == 3
    assert report["error"]["details"]["expected"] == "gla"


def test_non_bracket_generating_model_is_rejected(machine_report):
    doc = {"kind": "vector-fields", "n_vars": 3, "var_names": ["x", "y", "z"],
           "fields": [["1", "0", "0"], ["0", "1", "0"]]}

    code, report = machine_report("dist-symbol", json.dumps(doc))

    assert code == 2
    assert report["error"]["error"] == "NotBracketGenerating"


def test_dependent_jet_fields_are_rejected(machine_report):
    doc = {"kind": "fibration", "n_vars": 2, "var_names": ["x", "y"],
           "E_fields": [["1", "0"]], "F_fields": [["1", "y"]]}

    code, report = machine_report("dist-pp", json.dumps(doc))

    assert code == 2
    assert report["error"]["error"] == "NotTransverse"


# ── Output ─────────────────────────────────────────────────────────────

def test_machine_output_is_reproducible(run_command):
    document = load_fixture("contact-vf")

    first = run_command("dist-flag", document)
    second = run_command("dist-flag", document)

    assert first == second


def test_text_report(run_command, heisenberg_document):
    code, output = run_command("check-gla", heisenberg_document, output="text")

    assert code == 0
    assert output.startswith("Graded Lie algebra")
    assert "g^-2: 1" in output


def test_text_error_report(run_command):
    code, output = run_command("check-gla", _jacobi_breaking_document(), output="text")

    assert code == 2
    assert output.startswith("Rejected: JacobiViolation")


# ── main() ─────────────────────────────────────────────────────────────

def test_parser_defaults():
    args = build_parser().parse_args(["prolong", "doc.json"])

    assert args.target == "doc.json"
    assert args.output == "text"
    assert not args.list_fixtures


def test_main_reads_a_document_file(tmp_path, capsys, heisenberg_document):
    # Arrange
    path = tmp_path / "heisenberg.json"
    path.write_text(heisenberg_document.model_dump_json(), encoding="utf-8")

    # Act
    code = main(["check-gla", str(path), "--output", "machine"])

    # Assert
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["result"]["dims"] == {"-2": 1, "-1": 2}


def test_main_missing_file_exits_with_3(tmp_path, capsys):
    code = main(["check-gla", str(tmp_path / "missing.json"), "--output", "machine"])

    report = json.loads(capsys.readouterr().out)
    assert code == 3
    assert report["error"]["error"] == "DocumentError"


def test_main_rejects_nonpositive_cap(capsys):
    assert main(["fixtures", "heisenberg", "--cap", "0"]) == 3


def test_main_emits_fixture(capsys):
    code = main(["fixtures", "co-symbol"])

    doc = load_document(capsys.readouterr().out)
    assert code == 0
    assert doc.degrees == {-1: 3, 0: 4}
