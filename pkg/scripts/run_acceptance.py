"""Run the acceptance suite and show its PASS/FAIL lines."""

import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).resolve().parent.parent / "tests" / "test_acceptance.py"

if __name__ == "__main__":
    sys.exit(pytest.main([str(TESTS), "-q", "-p", "no:cacheprovider", *sys.argv[1:]]))
