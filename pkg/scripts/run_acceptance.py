"""Run the acceptance criteria and print one PASS/FAIL line per criterion."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

if __name__ == "__main__":
    root = Path(__file__).resolve().parents[1]
    sys.exit(pytest.main(["-q", "-s", str(root / "tests" / "test_acceptance.py"), *sys.argv[1:]]))
