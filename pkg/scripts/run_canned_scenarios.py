#!/usr/bin/env python3
"""Run every shipped scenario and collect the reports under ./out/<name>/.

Usage: python scripts/run_canned_scenarios.py [--seed N] [--out DIR]
"""

import argparse
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from iterlab.config import load_config           # noqa: E402
from iterlab.runner import run_scenario          # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--out", default=str(ROOT / "out"))
    args = ap.parse_args()

    worst = 0
    for path in sorted((ROOT / "scenarios").glob("*.toml")):
        scenario = load_config(path)
        if args.seed is not None:
            scenario.seed = args.seed
        start = time.perf_counter()
        report = run_scenario(scenario, out_dir=Path(args.out) / path.stem)
        elapsed = time.perf_counter() - start
        statuses = [t.status for t in report.tasks]
        print(f"{path.stem:28s} {elapsed:7.2f}s  "
              f"ok={statuses.count('ok')} flagged={statuses.count('flagged')} "
              f"error={statuses.count('error')}")
        worst = max(worst, report.exit_code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
