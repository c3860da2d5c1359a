"""LangGraph node functions for the analysis pipeline.

3 nodes:
1. parse_node: reads the input document or resolves a fixture
2. analyze_node: runs the command's analysis and builds its report model
3. render_node: renders the report as text or machine JSON
"""
from __future__ import annotations

import json
import logging
from pathlib import Path

from src.catalog.fixtures import fixture_descriptions, fixture_names, load_fixture
from src.catalog.parser import (
    build_fibration,
    build_gla,
    build_model,
    build_symbol,
    load_document,
)
from src.distflag.flag import (
    DistributionModel,
    levi_and_cauchy,
    regularity_probe,
    symbol_at_point,
    weak_derived_flag,
)
from src.distflag.fibration import pp_from_fibrations
from src.errors import DocumentError, MathematicalRejection, TanakaError
from src.models import (
    AnalysisReport,
    Command,
    ErrorReport,
    OutputFormat,
    RunConfig,
    RunReport,
    RunStatus,
)
from src.prolong.engine import universal_prolongation
from src.pseudoprod.symbol import analyze_pp
from src.reports.loader import render
from src.reports.summaries import (
    fibration_summary,
    flag_summary,
    gla_summary,
    prolong_summary,
    pseudo_summary,
    symbol_summary,
)

logger = logging.getLogger(__name__)

_EXPECTED_KIND: dict[Command, str] = {
    Command.CHECK_GLA: "gla",
    Command.PROLONG: "gla",
    Command.PSEUDO: "symbol",
    Command.DIST_FLAG: "vector-fields",
    Command.DIST_SYMBOL: "vector-fields",
    Command.DIST_PP: "fibration",
}

_TEMPLATES: dict[Command, str] = {
    Command.CHECK_GLA: "gla.j2",
    Command.PROLONG: "prolong.j2",
    Command.PSEUDO: "pseudo.j2",
    Command.DIST_FLAG: "flag.j2",
    Command.DIST_SYMBOL: "symbol.j2",
    Command.DIST_PP: "fibration.j2",
}


def _error_state(exc: TanakaError, node: str) -> dict:
    logger.info("%s: %s", type(exc).__name__, exc.message)
    error = ErrorReport(error=type(exc).__name__, message=exc.message, details=exc.details)
    return {
        "error": error.model_dump(mode="json"),
        "exit_code": exc.exit_code,
        "current_node": node,
    }


# ─── Parse ────────────────────────────────────────────────────────────

def _read_input(state: dict, config: RunConfig) -> str:
    if state.get("raw_input") is not None:
        return state["raw_input"]
    if config.input_path is None:
        raise DocumentError("No input document given")
    try:
        return Path(config.input_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"Cannot read {config.input_path}: {exc.strerror}", path=config.input_path) from exc


def parse_node(state: dict) -> dict:
    config = RunConfig(**state["config"])
    try:
        if config.command is Command.FIXTURES:
            if config.list_fixtures:
                return {"document": None, "current_node": "parse_ok"}
            if not config.fixture:
                raise DocumentError("fixtures needs a fixture name or --list")
            return {"document": load_fixture(config.fixture), "current_node": "parse_ok"}

        document = load_document(_read_input(state, config))
        expected = _EXPECTED_KIND[config.command]
        if document.kind != expected:
            raise DocumentError(
                f"{config.command.value} expects a {expected!r} document, got {document.kind!r}",
                expected=expected,
                kind=document.kind,
            )
    except DocumentError as exc:
        return _error_state(exc, "parse_failed")
    return {"document": document, "current_node": "parse_ok"}


# ─── Analyze ──────────────────────────────────────────────────────────

def _analyze(config: RunConfig, document) -> AnalysisReport:
    match config.command:
        case Command.CHECK_GLA:
            return gla_summary(build_gla(document))
        case Command.PROLONG:
            return prolong_summary(universal_prolongation(build_gla(document), config.cap))
        case Command.PSEUDO:
            return pseudo_summary(analyze_pp(build_symbol(document), config.cap))
        case Command.DIST_FLAG:
            model = build_model(document)
            return flag_summary(
                model,
                weak_derived_flag(model),
                levi_and_cauchy(model),
                regularity_probe(model, config.samples, config.seed),
            )
        case Command.DIST_SYMBOL:
            model = build_model(document)
            flag = weak_derived_flag(model)
            g = symbol_at_point(model, config.samples, config.seed)
            return symbol_summary(flag, g, levi_and_cauchy(model))
        case Command.DIST_PP:
            e, f, point = build_fibration(document)
            symbol, diagnostics = pp_from_fibrations(e, f, point, config.samples, config.seed)
            model = DistributionModel(e[0].ring, e + f, point)
            return fibration_summary(
                symbol, diagnostics, levi_and_cauchy(model), analyze_pp(symbol, config.cap)
            )
    raise DocumentError(f"No analysis for command {config.command.value}")


def _emit_fixture(config: RunConfig, document) -> str:
    if config.list_fixtures:
        if config.output is OutputFormat.MACHINE:
            return json.dumps(fixture_names(), indent=2) + "\n"
        return render("fixture_list.j2", fixtures=fixture_descriptions())
    return document.model_dump_json(indent=2, exclude_none=True) + "\n"


def analyze_node(state: dict) -> dict:
    config = RunConfig(**state["config"])
    document = state.get("document")
    if config.command is Command.FIXTURES:
        return {
            "output": _emit_fixture(config, document),
            "exit_code": 0,
            "current_node": "fixture_emitted",
        }
    try:
        result = _analyze(config, document)
    except (MathematicalRejection, DocumentError) as exc:
        return _error_state(exc, "analyze_failed")
    logger.info("%s finished", config.command.value)
    return {"result": result, "exit_code": 0, "current_node": "analyze_ok"}


# ─── Render ───────────────────────────────────────────────────────────

def render_node(state: dict) -> dict:
    config = RunConfig(**state["config"])
    exit_code = state.get("exit_code", 0)
    error = ErrorReport(**state["error"]) if state.get("error") else None
    if error is None:
        status = RunStatus.OK
    elif exit_code == 2:
        status = RunStatus.REJECTED
    else:
        status = RunStatus.INVALID
    report = RunReport(
        command=config.command,
        status=status,
        exit_code=exit_code,
        result=state.get("result"),
        error=error,
    )
    if config.output is OutputFormat.MACHINE:
        output = report.model_dump_json(indent=2) + "\n"
    elif error is not None:
        output = render("error.j2", error=error, exit_code=exit_code)
    else:
        output = render(_TEMPLATES[config.command], result=report.result)
    return {"output": output, "current_node": "render"}
