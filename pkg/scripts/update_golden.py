#!/usr/bin/env python3
"""Regenerate the golden CSV files under tests/golden/.

Run only after an intentional change to the numerics; the regression test
compares fresh runs of the same scenarios against these files.

    python scripts/update_golden.py
"""

import shutil
import sys
import tempfile
from pathlib import Path

from oamshear.runner import run_scenario
from oamshear.scenarios import validate_config

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden"


def main():
    for cfg in sorted(GOLDEN.glob("*.yaml")):
        target = GOLDEN / cfg.stem
        with tempfile.TemporaryDirectory() as tmp:
            files = run_scenario(validate_config(cfg), tmp)
            if target.exists():
                shutil.rmtree(target)
            target.mkdir()
            for f in files:
                if f.suffix == ".csv":
                    shutil.copy(f, target / f.name)
        print(f"{cfg.name} -> {target.relative_to(GOLDEN.parent.parent)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
