from __future__ import annotations

import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# ── Paths ──────────────────────────────────────────────────────────────
PROJECT_ROOT = Path(__file__).resolve().parent.parent
TEMPLATES_DIR = Path(__file__).resolve().parent / "reports" / "templates"

# ── Prolongation ───────────────────────────────────────────────────────
DEFAULT_CAP: int = int(os.getenv("TANAKA_CAP", "10"))

# ── Pointwise sampling (distributions) ─────────────────────────────────
DEFAULT_SAMPLES: int = int(os.getenv("TANAKA_SAMPLES", "8"))
DEFAULT_SEED: int = int(os.getenv("TANAKA_SEED", "1729"))
SAMPLE_HEIGHT: int = int(os.getenv("TANAKA_SAMPLE_HEIGHT", "100"))

# ── Logging ────────────────────────────────────────────────────────────
LOG_LEVEL: str = os.getenv("TANAKA_LOG_LEVEL", "WARNING")
