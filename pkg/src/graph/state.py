"""LangGraph run state definition."""
from __future__ import annotations

from typing import Any, Optional

from typing_extensions import TypedDict


class RunState(TypedDict, total=False):
    config: dict                # RunConfig.model_dump()
    raw_input: str              # document text; absent means read config["input_path"]
    document: Any               # parsed pydantic document
    result: Any                 # report model from the analysis
    error: Optional[dict]       # ErrorReport.model_dump()
    exit_code: int
    current_node: str           # for routing
    output: str                 # rendered report
