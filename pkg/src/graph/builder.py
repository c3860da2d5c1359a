"""Assemble and compile the run pipeline.

  START → parse →(cond)→ analyze →(cond)→ render → END
              |                      |
              └──→ render            └──→ END (fixtures)
"""
from __future__ import annotations

from langgraph.graph import END, START, StateGraph

from src.graph.edges import route_after_analyze, route_after_parse
from src.graph.nodes import analyze_node, parse_node, render_node
from src.graph.state import RunState


def build_graph():
    """Build and compile the analysis pipeline."""
    builder = StateGraph(RunState)

    # ── Nodes ────────────────────────────────────────────────────
    builder.add_node("parse", parse_node)
    builder.add_node("analyze", analyze_node)
    builder.add_node("render", render_node)

    # ── Edges ────────────────────────────────────────────────────
    builder.add_edge(START, "parse")
    builder.add_conditional_edges("parse", route_after_parse)
    builder.add_conditional_edges("analyze", route_after_analyze)
    builder.add_edge("render", END)

    return builder.compile()


pipeline = build_graph()
