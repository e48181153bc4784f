"""Bundled demonstration scenario.

Two cars observe an object crossing the road. Three classifiers report
overlapping, partly conflicting evidence with different certainties. The
fully autonomous car (A) accepts any argument as justification; the
driver-assist car (B) demands arguments consistent with everything observed.
"""

from __future__ import annotations

from fractions import Fraction

from .core import make_universe
from .evidence import EvidenceItem, QuantitativeEvidenceFrame
from .fusion import (
    BeliefReport,
    INTERSECTION,
    MIN_DENSE,
    UNION,
    belief_report,
    justification_frame,
)

CAR_STATES = ("sp", "dp", "do", "so", "dm", "sm")

#: proposition (1): the object is dynamic; proposition (2): it is a pedestrian
PROPOSITION_DYNAMIC = ("dp", "do", "dm")
PROPOSITION_PEDESTRIAN = ("sp", "dp")


def car_frame() -> QuantitativeEvidenceFrame:
    """Three classifier outputs: dynamic object, motorbike, pedestrian."""
    universe = make_universe(CAR_STATES)
    items = (
        EvidenceItem("E1", universe.subset(["dp", "dm", "do"]), Fraction(9, 10)),
        EvidenceItem("E2", universe.subset(["dm", "sm"]), Fraction(3, 4)),
        EvidenceItem("E3", universe.subset(["dp", "sp"]), Fraction(9, 20)),
    )
    return QuantitativeEvidenceFrame(universe, items)


def car_reports(precision: int = 2) -> tuple[BeliefReport, BeliefReport]:
    """The (car A, car B) belief reports over the two decision propositions."""
    frame = car_frame()
    universe = frame.universe
    propositions = [
        universe.subset(PROPOSITION_DYNAMIC),
        universe.subset(PROPOSITION_PEDESTRIAN),
    ]
    allocators = [INTERSECTION, UNION, MIN_DENSE]
    report_a = belief_report(
        frame, allocators, justification_frame(frame, "ds"), propositions, precision
    )
    report_b = belief_report(
        frame, allocators, justification_frame(frame, "sd"), propositions, precision
    )
    return report_a, report_b
