#!/usr/bin/env python3
"""
Format the selfmap-chow sources with black and isort.

Covers the app and tests packages plus the top-level dev and deployment scripts.
"""
import subprocess
import sys
from pathlib import Path

BASE_DIR = Path(__file__).parent

TARGETS = ["app", "tests", "run.py", "test.py", "check.py", "format.py", "gunicorn.conf.py"]


def run_command(cmd: list) -> int:
    """Run a shell command from the project root and return the exit code."""
    print(f"Running: {' '.join(cmd)}")
    try:
        result = subprocess.run(cmd, cwd=BASE_DIR)
        return result.returncode
    except OSError as e:
        print(f"Error running command: {e}", file=sys.stderr)
        return 1


def format_code(check_only: bool = False) -> int:
    """Run black and isort over TARGETS; with ``check_only`` nothing is rewritten."""
    if run_command(["black", *(["--check"] if check_only else []), *TARGETS]) != 0:
        return 1
    if run_command(["isort", *(["--check-only"] if check_only else []), *TARGETS]) != 0:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(format_code(check_only="--check" in sys.argv[1:]))
