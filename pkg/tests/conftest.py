from __future__ import annotations

import json

import pytest

from src.catalog import fixtures as catalog
from src.catalog.parser import gla_to_document
from src.cli import run
from src.models import Command, OutputFormat, RunConfig
from src.prolong.engine import universal_prolongation


@pytest.fixture
def heisenberg():
    return catalog.heisenberg()


@pytest.fixture
def gl_symbol():
    return catalog.gl_symbol()


@pytest.fixture
def csp_symbol():
    return catalog.csp_symbol()


@pytest.fixture(scope="session")
def csp_prolongation():
    return universal_prolongation(catalog.csp_symbol(), cap=4)


@pytest.fixture(scope="session")
def gl_prolongation():
    return universal_prolongation(catalog.gl_symbol(), cap=4)


@pytest.fixture
def run_command():
    """Run the pipeline on a document and return (exit_code, output)."""

    def _run(command: str, document=None, output: str = "machine", **options):
        config = RunConfig(command=Command(command), output=OutputFormat(output), **options)
        if document is None:
            return run(config)
        if not isinstance(document, str):
            document = document.model_dump_json(exclude_none=True)
        return run(config, document)

    return _run


@pytest.fixture
def machine_report(run_command):
    """Run with machine output and decode the JSON report."""

    def _report(command: str, document=None, **options) -> tuple[int, dict]:
        code, output = run_command(command, document, "machine", **options)
        return code, json.loads(output)

    return _report


@pytest.fixture
def heisenberg_document():
    return gla_to_document(catalog.heisenberg())
