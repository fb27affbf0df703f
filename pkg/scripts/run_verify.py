#!/usr/bin/env python3
"""Run every identity suite and print the JSON report.

Equivalent to `laguerre-ladder verify --suite all`; exits 1 on any failed
identity so it can gate CI directly.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from laguerre_ladder.cli import main

if __name__ == "__main__":
    sys.exit(main(["verify", "--suite", "all", *sys.argv[1:]]))
