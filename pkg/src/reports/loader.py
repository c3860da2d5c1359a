"""Jinja2 environment for text reports."""
from __future__ import annotations

from jinja2 import Environment, FileSystemLoader, StrictUndefined, select_autoescape

from src.config import TEMPLATES_DIR

_env = Environment(
    loader=FileSystemLoader(str(TEMPLATES_DIR)),
    autoescape=select_autoescape([]),
    trim_blocks=True,
    lstrip_blocks=True,
    undefined=StrictUndefined,
    keep_trailing_newline=True,
)


def render(template_name: str, **kwargs) -> str:
    """Render a report template by name with given context."""
    tpl = _env.get_template(template_name)
    return tpl.render(**kwargs)
