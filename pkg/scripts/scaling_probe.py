#!/usr/bin/env python3
"""Measure how belief evaluation scales with the number of evidence items.

Cost is exponential in the item count by nature of the problem, so the point
of this probe is to see where the wall sits on the current machine and that
the capacity cap turns the far side into a clean error.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction

from topobelief.core import StateSet, make_universe
from topobelief.errors import CapacityExceeded
from topobelief.evidence import EvidenceItem, QuantitativeEvidenceFrame
from topobelief.fusion import (
    INTERSECTION,
    MIN_DENSE,
    UNION,
    belief_report,
    justification_frame,
)


def build_frame(states: int, items: int, seed: int = 0) -> QuantitativeEvidenceFrame:
    rng = random.Random(seed)
    universe = make_universe([f"s{k}" for k in range(states)])
    built = []
    for i in range(items):
        bits = rng.randrange(1, universe.full_bits)
        den = rng.randint(2, 32)
        built.append(
            EvidenceItem(f"E{i + 1}", StateSet(universe, bits),
                         Fraction(rng.randint(1, den - 1), den))
        )
    return QuantitativeEvidenceFrame(universe, tuple(built))


def main() -> int:
    states = 16
    for items in (5, 8, 10, 12, 14, 15, 16):
        frame = build_frame(states, items)
        props = [frame.universe.subset(["s0", "s1", "s2"])]
        start = time.perf_counter()
        belief_report(frame, [INTERSECTION, UNION, MIN_DENSE],
                      justification_frame(frame, "sd"), props)
        print(f"items={items:2d}  {time.perf_counter() - start:7.3f}s")

    frame = build_frame(states, 25)
    try:
        belief_report(frame, [INTERSECTION], justification_frame(frame, "ds"), [])
    except CapacityExceeded as exc:
        print(f"items=25  rejected: {exc}")
        return 0
    print("items=25 unexpectedly ran")
    return 1


if __name__ == "__main__":
    sys.exit(main())
