"""Classical belief-function machinery and the qualitative belief operator.

These are deliberately independent of the fusion pipeline: combination works
directly on basic probability assignments, and the qualitative operator works
directly on the evidence sets. The test suite uses both as oracles against
the pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .core import StateSet, StateUniverse, canonical_key
from .errors import FrameMismatch, IndexOutOfRange, TotalConflict, UniverseMismatch
from .evidence import QuantitativeEvidenceFrame
from .topology import min_dense


@dataclass(frozen=True)
class BasicProbabilityAssignment:
    """Non-zero masses on focal sets; zero on the empty set, total exactly 1."""

    universe: StateUniverse
    focal: Mapping[StateSet, Fraction]

    def __post_init__(self) -> None:
        total = Fraction(0)
        for s, v in self.focal.items():
            if s.universe != self.universe:
                raise UniverseMismatch("focal set lives in a different universe")
            if s.is_empty():
                raise ValueError("a basic probability assignment is zero on the empty set")
            if not 0 < v <= 1:
                raise ValueError(f"focal mass {v} outside (0, 1]")
            total += v
        if total != 1:
            raise ValueError(f"focal masses total {total}, not 1")
        object.__setattr__(self, "focal", dict(self.focal))

    @classmethod
    def vacuous(cls, universe: StateUniverse) -> "BasicProbabilityAssignment":
        return cls(universe, {universe.full_set(): Fraction(1)})

    def mass(self, s: StateSet) -> Fraction:
        return self.focal.get(s, Fraction(0))

    def focal_sets(self) -> tuple[StateSet, ...]:
        return tuple(sorted(self.focal, key=canonical_key))


def simple_support(
    frame: QuantitativeEvidenceFrame, index: int
) -> BasicProbabilityAssignment:
    """The bpa of one evidence item: its certainty on its content, the rest on S."""
    if not 0 <= index < frame.arity:
        raise IndexOutOfRange(f"no evidence item at index {index}")
    item = frame.items[index]
    return BasicProbabilityAssignment(
        frame.universe,
        {item.content: item.certainty, frame.universe.full_set(): 1 - item.certainty},
    )


def dempster_combine(
    m1: BasicProbabilityAssignment, m2: BasicProbabilityAssignment
) -> BasicProbabilityAssignment:
    """Conjunctive combination with conflict renormalisation, exactly.

    Raises ``TotalConflict`` when the whole product mass falls on disjoint
    pairs, which is the one case the rule leaves undefined.
    """
    if m1.universe != m2.universe:
        raise UniverseMismatch("operands live in different universes")
    joint: dict[StateSet, Fraction] = {}
    conflict = Fraction(0)
    for a, x in m1.focal.items():
        for b, y in m2.focal.items():
            c = a & b
            if c.is_empty():
                conflict += x * y
            else:
                joint[c] = joint.get(c, Fraction(0)) + x * y
    if conflict == 1:
        raise TotalConflict("all product mass falls on disjoint focal pairs")
    k = 1 - conflict
    return BasicProbabilityAssignment(
        m1.universe, {c: v / k for c, v in joint.items()}
    )


def combine_evidence(frame: QuantitativeEvidenceFrame) -> BasicProbabilityAssignment:
    """Fold the simple support functions of a frame, left to right in item
    order (combination is associative, so the order is cosmetic)."""
    out = BasicProbabilityAssignment.vacuous(frame.universe)
    for i in range(frame.arity):
        out = dempster_combine(out, simple_support(frame, i))
    return out


def belief_from_bpa(m: BasicProbabilityAssignment, proposition: StateSet) -> Fraction:
    """Total focal mass inside the proposition."""
    if proposition.universe != m.universe:
        raise UniverseMismatch("proposition lives in a different universe")
    total = Fraction(0)
    for s, v in m.focal.items():
        if s.bits & ~proposition.bits == 0:
            total += v
    return total


def topological_belief(frame: QuantitativeEvidenceFrame, proposition: StateSet) -> bool:
    """All-or-nothing belief from the evidence sets alone: true iff some dense
    open of the evidential topology sits inside the proposition, which by the
    minimum-dense-open characterisation is one subset test."""
    if proposition.universe != frame.universe:
        raise FrameMismatch("proposition lives in a different universe")
    return min_dense(frame.contents()).issubset(proposition)
