#!/usr/bin/env python3
"""Sweep the seeded random-frame corpus through every checker.

Usage: run_verification.py [n_frames] [max_states] [max_items]
"""

from __future__ import annotations

import json
import sys
import time

from topobelief.verify import random_frame, run_all_checks


def main() -> int:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    max_states = int(sys.argv[2]) if len(sys.argv) > 2 else 6
    max_items = int(sys.argv[3]) if len(sys.argv) > 3 else 5
    start = time.perf_counter()
    checks = failures = 0
    for seed in range(n):
        frame = random_frame(seed, max_states, max_items)
        for outcome in run_all_checks(frame):
            checks += 1
            if not outcome.passed:
                failures += 1
                print(f"FAIL seed={seed}: {json.dumps(outcome.to_json())}")
    elapsed = time.perf_counter() - start
    print(f"{n} frames, {checks} checks, {failures} failures, {elapsed:.2f}s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
