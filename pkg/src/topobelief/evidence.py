"""Evidence frames: named evidence sets with exact certainties, plus JSON I/O.

Frame documents look like::

    { "states": ["sp","dp","do","so","dm","sm"],
      "evidence": [ {"name":"E1","states":["dp","dm","do"],"certainty":"0.9"},
                    {"name":"E2","states":["dm","sm"],"certainty":"0.75"},
                    {"name":"E3","states":["dp","sp"],"certainty":"0.45"} ] }

All keys are required and unknown keys are rejected. Certainties are strings,
either decimal ("0.45") or ratio ("9/20"), so parsing is always exact; the
serializer emits the decimal form whenever one exists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .core import StateSet, StateUniverse, format_rational, make_universe, parse_rational
from .errors import (
    CertaintyOutOfRange,
    DuplicateName,
    EmptyEvidence,
    FrameMismatch,
    FullSetEvidence,
    MalformedDocument,
    UniverseMismatch,
    Violation,
)
from .topology import minimal_open_neighborhoods


@dataclass(frozen=True)
class EvidenceItem:
    name: str
    content: StateSet
    certainty: Fraction


@dataclass(frozen=True)
class QuantitativeEvidenceFrame:
    """A universe plus an ordered list of (name, content, certainty) items.

    Construction only checks structural coherence (contents live in the
    universe); the semantic constraints are the business of
    ``validate_frame``, which reports violations instead of raising so that
    deliberately broken frames can be inspected.
    """

    universe: StateUniverse
    items: tuple[EvidenceItem, ...]

    def __post_init__(self) -> None:
        for item in self.items:
            if item.content.universe != self.universe:
                raise UniverseMismatch(
                    f"evidence {item.name!r} lives in a different universe"
                )

    @property
    def arity(self) -> int:
        return len(self.items)

    def contents(self) -> tuple[StateSet, ...]:
        return tuple(item.content for item in self.items)

    def names(self) -> tuple[str, ...]:
        return tuple(item.name for item in self.items)

    def index_of(self, name: str) -> int:
        for i, item in enumerate(self.items):
            if item.name == name:
                return i
        raise KeyError(f"no evidence named {name!r}")

    def subset(self, names: Iterable[str]) -> "EvidenceSubset":
        mask = 0
        for name in names:
            mask |= 1 << self.index_of(name)
        return EvidenceSubset(self, mask)

    def subset_from_mask(self, mask: int) -> "EvidenceSubset":
        return EvidenceSubset(self, mask)

    def all_subsets(self):
        for mask in range(1 << self.arity):
            yield EvidenceSubset(self, mask)

    @cached_property
    def neighborhoods(self) -> tuple[StateSet, ...]:
        """Minimal open neighborhood of each state in the generated topology."""
        return minimal_open_neighborhoods(self.universe, self.contents())

    @cached_property
    def point_signatures(self) -> tuple[tuple[int, int], ...]:
        """(state bit, evidence-membership mask) for states covered by evidence."""
        out = []
        for k in range(self.universe.size):
            sig = 0
            for i, item in enumerate(self.items):
                if item.content.bits >> k & 1:
                    sig |= 1 << i
            if sig:
                out.append((1 << k, sig))
        return tuple(out)

    def is_open(self, s: StateSet) -> bool:
        """Membership in the evidential topology, without materialising it."""
        if s.universe != self.universe:
            raise UniverseMismatch("set lives in a different universe")
        bits = s.bits
        for k in range(self.universe.size):
            if bits >> k & 1 and self.neighborhoods[k].bits & ~bits:
                return False
        return True

    def is_dense(self, s: StateSet) -> bool:
        """Denseness w.r.t. the evidential topology, via minimal neighborhoods."""
        if s.universe != self.universe:
            raise UniverseMismatch("set lives in a different universe")
        return all(nb.bits & s.bits for nb in self.neighborhoods)


@dataclass(frozen=True)
class EvidenceSubset:
    """A subset of a frame's evidence items, as an index bit vector."""

    frame: QuantitativeEvidenceFrame
    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask < (1 << self.frame.arity):
            raise ValueError(f"mask {self.mask:#x} outside frame arity {self.frame.arity}")

    def members(self) -> tuple[str, ...]:
        return tuple(
            item.name for i, item in enumerate(self.frame.items) if self.mask >> i & 1
        )

    def contents(self) -> tuple[StateSet, ...]:
        return tuple(
            item.content for i, item in enumerate(self.frame.items) if self.mask >> i & 1
        )

    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def __repr__(self) -> str:
        return "{" + ",".join(self.members()) + "}"


def check_same_frame(frame: QuantitativeEvidenceFrame, subset: EvidenceSubset) -> None:
    if subset.frame != frame:
        raise FrameMismatch("evidence subset belongs to a different frame")


def validate_frame(frame: QuantitativeEvidenceFrame) -> list[Violation]:
    """Every violated frame invariant; an empty report means the frame is valid."""
    report: list[Violation] = []
    if not frame.items:
        report.append(Violation("EmptyEvidence", "frame holds no evidence items"))
    seen: set[str] = set()
    for item in frame.items:
        if item.name in seen:
            report.append(
                Violation("DuplicateName", f"evidence name {item.name!r} repeats",
                          {"name": item.name})
            )
        seen.add(item.name)
        if item.content.is_empty():
            report.append(
                Violation("EmptyEvidence", f"evidence {item.name!r} has empty content",
                          {"name": item.name})
            )
        if item.content.is_full():
            report.append(
                Violation("FullSetEvidence",
                          f"evidence {item.name!r} equals the whole state space",
                          {"name": item.name})
            )
        if not 0 < item.certainty < 1:
            report.append(
                Violation("CertaintyOutOfRange",
                          f"certainty of {item.name!r} is {item.certainty}, "
                          "needs 0 < p < 1",
                          {"name": item.name, "certainty": str(item.certainty)})
            )
    return report


_ERROR_BY_CODE = {
    "EmptyEvidence": EmptyEvidence,
    "FullSetEvidence": FullSetEvidence,
    "DuplicateName": DuplicateName,
    "CertaintyOutOfRange": CertaintyOutOfRange,
}


def _require_keys(obj: dict, keys: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise MalformedDocument(f"{where} must be an object")
    missing = keys - obj.keys()
    extra = obj.keys() - keys
    if missing:
        raise MalformedDocument(f"{where} misses keys {sorted(missing)}")
    if extra:
        raise MalformedDocument(f"{where} has unknown keys {sorted(extra)}")


def parse_frame(document: str) -> QuantitativeEvidenceFrame:
    """Parse and fully validate a frame document; raises on the first defect."""
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from None
    _require_keys(obj, {"states", "evidence"}, "frame document")
    states = obj["states"]
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise MalformedDocument('"states" must be a list of strings')
    universe = make_universe(states)
    raw_items = obj["evidence"]
    if not isinstance(raw_items, list):
        raise MalformedDocument('"evidence" must be a list')
    if not raw_items:
        raise EmptyEvidence("frame holds no evidence items")
    items = []
    for raw in raw_items:
        _require_keys(raw, {"name", "states", "certainty"}, "evidence item")
        if not isinstance(raw["name"], str) or not raw["name"]:
            raise MalformedDocument("evidence name must be a non-empty string")
        if not isinstance(raw["states"], list):
            raise MalformedDocument('evidence "states" must be a list')
        if not isinstance(raw["certainty"], str):
            raise MalformedDocument(
                "certainty must be a string (decimal or n/d) so parsing stays exact"
            )
        content = universe.subset(raw["states"])
        try:
            certainty = parse_rational(raw["certainty"])
        except ValueError as exc:
            raise MalformedDocument(str(exc)) from None
        items.append(EvidenceItem(raw["name"], content, certainty))
    frame = QuantitativeEvidenceFrame(universe, tuple(items))
    for violation in validate_frame(frame):
        raise _ERROR_BY_CODE[violation.code](violation.message)
    return frame


def frame_to_document(frame: QuantitativeEvidenceFrame) -> dict:
    return {
        "states": list(frame.universe.labels),
        "evidence": [
            {
                "name": item.name,
                "states": list(item.content.members()),
                "certainty": format_rational(item.certainty),
            }
            for item in frame.items
        ],
    }


def serialize_frame(frame: QuantitativeEvidenceFrame) -> str:
    """Canonical JSON form; ``parse_frame`` inverts it exactly."""
    return json.dumps(frame_to_document(frame), indent=2) + "\n"


def load_frame(path) -> QuantitativeEvidenceFrame:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MalformedDocument(f"cannot read frame file: {exc}") from None
    return parse_frame(text)
