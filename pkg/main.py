import sys

from src.cli import main
from src.graph.builder import pipeline

__all__ = ["pipeline"]

if __name__ == "__main__":
    sys.exit(main())
