"""Conditional edge routing functions for the run pipeline."""
from __future__ import annotations

from typing import Literal


def route_after_parse(state: dict) -> Literal["analyze", "render"]:
    """Parsed documents go on to analysis; unreadable input is reported as is."""
    if state.get("current_node") == "parse_ok":
        return "analyze"
    return "render"


def route_after_analyze(state: dict) -> Literal["render", "__end__"]:
    """Fixture emission already produced its output."""
    if state.get("current_node") == "fixture_emitted":
        return "__end__"
    return "render"
