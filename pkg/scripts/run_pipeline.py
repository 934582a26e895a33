"""Command-line entry point for the profile solvers and certification."""
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pipeline.cli import main  # noqa: E402


if __name__ == "__main__":
    sys.exit(main())
