"""The multi-layer fusion pipeline.

Quantitative layer: certainties of the basic evidence sets are merged into an
exact mass function over evidence subsets (independent-product form, so the
masses sum to 1 and the marginal of each item recovers its certainty).

Qualitative layer: a justification frame picks which opens of the evidential
topology may carry belief ("ds" admits every non-empty open, "sd" only the
dense ones, custom frames list their members explicitly).

Bridging layer: an allocation function maps each evidence subset to an open;
its mass lands there, is renormalised over the justification frame, and
belief in a proposition is the mass of the frame members inside it.

Everything enumerates the power set of the evidence items, so arities above
``MAX_ENUM_ITEMS`` are rejected up front with ``CapacityExceeded`` rather
than silently hanging.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

from .core import StateSet, canonical_key, render_decimal
from .errors import (
    CapacityExceeded,
    CustomFrameContainsEmpty,
    CustomFrameMissingTotalSet,
    CustomFrameNotOpen,
    FrameMismatch,
    MalformedDocument,
    TopobeliefError,
    UniverseMismatch,
    Violation,
)
from .evidence import EvidenceSubset, QuantitativeEvidenceFrame, check_same_frame
from .topology import generate_topology, min_dense

MAX_ENUM_ITEMS = 24


def _check_capacity(frame: QuantitativeEvidenceFrame) -> None:
    if frame.arity > MAX_ENUM_ITEMS:
        raise CapacityExceeded(
            f"{frame.arity} evidence items need 2^{frame.arity} subset "
            f"evaluations; the cap is {MAX_ENUM_ITEMS} items"
        )


# -- quantitative layer -------------------------------------------------------

def evidence_mass(frame: QuantitativeEvidenceFrame, subset: EvidenceSubset) -> Fraction:
    """Merged certainty of exactly this combination of evidence items.

    The product of the certainties of the included items and the complements
    of the excluded ones; over all subsets these values form a mass function.
    """
    check_same_frame(frame, subset)
    value = Fraction(1)
    for i, item in enumerate(frame.items):
        value *= item.certainty if subset.mask >> i & 1 else 1 - item.certainty
    return value


@lru_cache(maxsize=64)
def _half_tables(frame: QuantitativeEvidenceFrame):
    """Meet-in-the-middle tables of (mass numerator, intersection, union).

    Masses are integer numerators over the common denominator (the product of
    all certainty denominators), which keeps the hot loop in machine-int land.
    """
    items = frame.items
    half = len(items) // 2
    full = frame.universe.full_bits

    def build(indices):
        arr = [(1, full, 0)]
        for i in indices:
            num = items[i].certainty.numerator
            den = items[i].certainty.denominator
            content = items[i].content.bits
            arr = [(n * (den - num), it, un) for (n, it, un) in arr] + [
                (n * num, it & content, un | content) for (n, it, un) in arr
            ]
        return arr

    denominator = 1
    for item in items:
        denominator *= item.certainty.denominator
    return build(range(half)), build(range(half, len(items))), half, denominator


def mass_table(frame: QuantitativeEvidenceFrame) -> list[tuple[EvidenceSubset, Fraction]]:
    """All 2^m merged masses, in canonical subset order (size, then index mask)."""
    _check_capacity(frame)
    lo, hi, half, den = _half_tables(frame)
    lomask = (1 << half) - 1
    order = sorted(range(1 << frame.arity), key=lambda k: (k.bit_count(), k))
    return [
        (EvidenceSubset(frame, k), Fraction(lo[k & lomask][0] * hi[k >> half][0], den))
        for k in order
    ]


# -- bridging layer: allocation ----------------------------------------------

class AllocatorKind(enum.Enum):
    INTERSECTION = "i"
    UNION = "u"
    MIN_DENSE = "d"
    YAGER = "yager"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class Allocator:
    """Maps evidence subsets to opens; see ``validate_allocators`` for the laws."""

    kind: AllocatorKind
    label: str
    table: Mapping[int, int] | None = None  # evidence mask -> state bits


INTERSECTION = Allocator(AllocatorKind.INTERSECTION, "i")
UNION = Allocator(AllocatorKind.UNION, "u")
MIN_DENSE = Allocator(AllocatorKind.MIN_DENSE, "d")
YAGER = Allocator(AllocatorKind.YAGER, "yager")

BUILTIN_ALLOCATORS = {
    "i": INTERSECTION,
    "u": UNION,
    "d": MIN_DENSE,
    "yager": YAGER,
}


def custom_allocator(
    frame: QuantitativeEvidenceFrame,
    mapping: Mapping,
    label: str = "custom",
) -> Allocator:
    """Explicit-table allocator; the table must cover every evidence subset."""
    table: dict[int, int] = {}
    for key, image in mapping.items():
        mask = key.mask if isinstance(key, EvidenceSubset) else int(key)
        if not 0 <= mask < (1 << frame.arity):
            raise MalformedDocument(f"table key {mask:#x} outside frame arity")
        if image.universe != frame.universe:
            raise UniverseMismatch("table image lives in a different universe")
        table[mask] = image.bits
    if len(table) != 1 << frame.arity:
        raise MalformedDocument(
            f"custom allocator table lists {len(table)} of {1 << frame.arity} "
            "evidence subsets; a total map is required"
        )
    return Allocator(AllocatorKind.CUSTOM, label, table)


def _min_dense_bits(sigpairs, mask: int) -> int:
    """min-dense image for a conflicted family: states whose evidence-membership
    signature (restricted to the family) is maximal."""
    groups: dict[int, int] = {}
    for point, sig in sigpairs:
        restricted = sig & mask
        if restricted:
            groups[restricted] = groups.get(restricted, 0) | point
    out = 0
    for sig, points in groups.items():
        if not any(sig != other and sig & other == sig for other in groups):
            out |= points
    return out


def allocate(
    frame: QuantitativeEvidenceFrame, allocator: Allocator, subset: EvidenceSubset
) -> StateSet:
    """Image of one evidence subset; every builtin sends the empty subset to S."""
    check_same_frame(frame, subset)
    universe = frame.universe
    if allocator.kind is AllocatorKind.CUSTOM:
        return StateSet(universe, allocator.table[subset.mask])
    if subset.mask == 0:
        return universe.full_set()
    contents = subset.contents()
    if allocator.kind is AllocatorKind.INTERSECTION:
        bits = universe.full_bits
        for c in contents:
            bits &= c.bits
        return StateSet(universe, bits)
    if allocator.kind is AllocatorKind.UNION:
        bits = 0
        for c in contents:
            bits |= c.bits
        return StateSet(universe, bits)
    if allocator.kind is AllocatorKind.YAGER:
        bits = universe.full_bits
        for c in contents:
            bits &= c.bits
        return StateSet(universe, bits) if bits else universe.full_set()
    return min_dense(contents)


@lru_cache(maxsize=256)
def _image_numerators(frame: QuantitativeEvidenceFrame, allocator: Allocator):
    """Aggregate mass numerators per allocator image over all 2^m subsets."""
    _check_capacity(frame)
    lo, hi, half, den = _half_tables(frame)
    lomask = (1 << half) - 1
    full = frame.universe.full_bits
    sigpairs = frame.point_signatures
    kind = allocator.kind
    table = allocator.table
    acc: dict[int, int] = {}
    for mask in range(1 << frame.arity):
        numl, il, ul = lo[mask & lomask]
        numh, ih, uh = hi[mask >> half]
        num = numl * numh
        if kind is AllocatorKind.INTERSECTION:
            image = il & ih
        elif kind is AllocatorKind.UNION:
            image = (ul | uh) if mask else full
        elif kind is AllocatorKind.YAGER:
            image = (il & ih) or full
        elif kind is AllocatorKind.MIN_DENSE:
            image = (il & ih) or _min_dense_bits(sigpairs, mask)
        else:
            image = table[mask]
        if image in acc:
            acc[image] += num
        else:
            acc[image] = num
    return acc, den


def allocated_mass_table(
    frame: QuantitativeEvidenceFrame, allocator: Allocator
) -> dict[StateSet, Fraction]:
    """Mass gathered by each allocator image; values sum to exactly 1."""
    acc, den = _image_numerators(frame, allocator)
    universe = frame.universe
    return {
        StateSet(universe, bits): Fraction(num, den)
        for bits, num in sorted(acc.items(), key=lambda kv: (kv[0].bit_count(), kv[0]))
    }


def allocated_mass(
    frame: QuantitativeEvidenceFrame, allocator: Allocator, target: StateSet
) -> Fraction:
    """Total merged mass of the subsets the allocator sends to ``target``;
    zero for sets outside the evidential topology."""
    if target.universe != frame.universe:
        raise FrameMismatch("target set lives in a different universe")
    if not frame.is_open(target):
        return Fraction(0)
    acc, den = _image_numerators(frame, allocator)
    return Fraction(acc.get(target.bits, 0), den)


# -- qualitative layer: justification frames ----------------------------------

class JustificationKind(enum.Enum):
    DS = "ds"
    SD = "sd"
    CUSTOM = "custom"


@dataclass(frozen=True)
class JustificationFrame:
    """The opens an agent accepts as justification.

    "ds" admits every non-empty open (lowest demands), "sd" only the dense
    opens (consistency with every argument), custom frames an explicit,
    validated list. Membership tests never materialise the topology.
    """

    kind: JustificationKind
    frame: QuantitativeEvidenceFrame
    custom_members: tuple[StateSet, ...] | None = None

    @cached_property
    def _member_bits(self) -> frozenset[int] | None:
        if self.custom_members is None:
            return None
        return frozenset(s.bits for s in self.custom_members)

    def contains(self, s: StateSet) -> bool:
        if s.universe != self.frame.universe:
            raise UniverseMismatch("set lives in a different universe")
        if self.kind is JustificationKind.CUSTOM:
            return s.bits in self._member_bits
        if self.kind is JustificationKind.DS:
            return s.bits != 0 and self.frame.is_open(s)
        return self.frame.is_open(s) and self.frame.is_dense(s)

    def members(self) -> tuple[StateSet, ...]:
        """Explicit member list; materialises the topology for ds/sd kinds."""
        if self.kind is JustificationKind.CUSTOM:
            return self.custom_members
        topo = generate_topology(self.frame.universe, self.frame.contents())
        if self.kind is JustificationKind.DS:
            return topo.nonempty_opens()
        return tuple(o for o in topo.nonempty_opens() if self.frame.is_dense(o))


def justification_frame(
    frame: QuantitativeEvidenceFrame,
    kind: str | JustificationKind,
    members: Iterable[StateSet] | None = None,
) -> JustificationFrame:
    """Build a justification frame; custom member lists are validated against
    the evidential topology and must contain S and exclude the empty set."""
    if not isinstance(kind, JustificationKind):
        kind = JustificationKind(str(kind).lower())
    if kind is not JustificationKind.CUSTOM:
        if members is not None:
            raise ValueError("member lists only apply to custom frames")
        return JustificationFrame(kind, frame)
    if members is None:
        raise ValueError("a custom frame needs an explicit member list")
    seen: dict[int, StateSet] = {}
    for m in members:
        if m.universe != frame.universe:
            raise UniverseMismatch("custom frame member lives in a different universe")
        if m.is_empty():
            raise CustomFrameContainsEmpty("the empty set can never justify belief")
        if not frame.is_open(m):
            raise CustomFrameNotOpen(
                f"{m!r} is not an element of the evidential topology"
            )
        seen[m.bits] = m
    if frame.universe.full_bits not in seen:
        raise CustomFrameMissingTotalSet(
            "every justification frame must contain the full state space"
        )
    ordered = tuple(sorted(seen.values(), key=canonical_key))
    return JustificationFrame(kind, frame, ordered)


# -- bridging layer: normalisation and belief ----------------------------------

def normalization_factor(
    frame: QuantitativeEvidenceFrame,
    allocator: Allocator,
    justification: JustificationFrame,
) -> Fraction:
    """Mass captured by the justification frame; the divisor of the bpa.

    Strictly positive for every valid frame: the full space always belongs,
    and it gathers at least the all-items-uncertain product, which is positive
    because certainties are strictly below 1.
    """
    acc, den = _image_numerators(frame, allocator)
    universe = frame.universe
    total = 0
    for bits, num in acc.items():
        if justification.contains(StateSet(universe, bits)):
            total += num
    if total == 0:
        raise TopobeliefError(
            "justification frame captures no mass; normalisation is undefined"
        )
    return Fraction(total, den)


def justified_mass(
    frame: QuantitativeEvidenceFrame,
    allocator: Allocator,
    justification: JustificationFrame,
    target: StateSet,
) -> Fraction:
    """The bpa over states: allocated mass renormalised over the frame,
    zero outside the frame."""
    if target.universe != frame.universe:
        raise FrameMismatch("target set lives in a different universe")
    if not justification.contains(target):
        return Fraction(0)
    acc, den = _image_numerators(frame, allocator)
    num = acc.get(target.bits, 0)
    if num == 0:
        return Fraction(0)
    return Fraction(num, den) / normalization_factor(frame, allocator, justification)


def belief(
    frame: QuantitativeEvidenceFrame,
    allocator: Allocator,
    justification: JustificationFrame,
    proposition: StateSet,
) -> Fraction:
    """Degree of belief: total justified mass of frame members inside the
    proposition (only they carry mass, so this equals the sum over all
    subsets)."""
    if proposition.universe != frame.universe:
        raise FrameMismatch("proposition lives in a different universe")
    acc, den = _image_numerators(frame, allocator)
    universe = frame.universe
    inside = 0
    captured = 0
    for bits, num in acc.items():
        if not justification.contains(StateSet(universe, bits)):
            continue
        captured += num
        if bits & ~proposition.bits == 0:
            inside += num
    if captured == 0:
        raise TopobeliefError(
            "justification frame captures no mass; belief is undefined"
        )
    return Fraction(inside, captured)


# -- allocation-law validation -------------------------------------------------

def validate_allocators(
    frame: QuantitativeEvidenceFrame, allocators: Sequence[Allocator]
) -> list[Violation]:
    """Check the allocation laws over every evidence subset.

    (1) the empty subset maps to S; (2) each image belongs to the topology
    generated by the subset alone and is either empty or dense w.r.t. it;
    (3) any two allocators' images at the same subset are nested one way or
    the other. Violations carry the witness subset.
    """
    _check_capacity(frame)
    report: list[Violation] = []
    universe = frame.universe
    full = universe.full_bits
    size = universe.size
    contents = [item.content.bits for item in frame.items]
    for mask in range(1 << frame.arity):
        subset = EvidenceSubset(frame, mask)
        witness = list(subset.members())
        images = [(a, allocate(frame, a, subset)) for a in allocators]
        if mask == 0:
            for a, img in images:
                if not img.is_full():
                    report.append(
                        Violation(
                            "EmptyFamilyImage",
                            f"allocator {a.label!r} maps the empty evidence "
                            f"subset to {img!r}, not the full space",
                            {"allocator": a.label, "evidence": witness,
                             "image": list(img.members())},
                        )
                    )
        else:
            # minimal neighborhoods of the topology generated by this subset only
            nbhd = []
            for k in range(size):
                nb = full
                for i in range(frame.arity):
                    if mask >> i & 1 and contents[i] >> k & 1:
                        nb &= contents[i]
                nbhd.append(nb)
            for a, img in images:
                bits = img.bits
                open_here = all(
                    not (bits >> k & 1) or nbhd[k] & ~bits == 0 for k in range(size)
                )
                if not open_here:
                    report.append(
                        Violation(
                            "ImageNotOpen",
                            f"allocator {a.label!r} image {img!r} is outside the "
                            "topology generated by the evidence subset",
                            {"allocator": a.label, "evidence": witness,
                             "image": list(img.members())},
                        )
                    )
                elif bits and not all(nbhd[k] & bits for k in range(size)):
                    report.append(
                        Violation(
                            "ImageNotDense",
                            f"allocator {a.label!r} image {img!r} is neither empty "
                            "nor dense for the evidence subset",
                            {"allocator": a.label, "evidence": witness,
                             "image": list(img.members())},
                        )
                    )
        for x in range(len(images)):
            for y in range(x + 1, len(images)):
                a, ia = images[x]
                b, ib = images[y]
                if ia.bits & ~ib.bits and ib.bits & ~ia.bits:
                    report.append(
                        Violation(
                            "IncomparableImages",
                            f"allocators {a.label!r} and {b.label!r} give "
                            f"incomparable images {ia!r} and {ib!r}",
                            {"allocators": [a.label, b.label], "evidence": witness,
                             "images": [list(ia.members()), list(ib.members())]},
                        )
                    )
    return report


# -- reports -------------------------------------------------------------------

@dataclass(frozen=True)
class BeliefReport:
    """Belief matrix plus the normalisation factor and uncertainty per allocator."""

    frame: QuantitativeEvidenceFrame
    justification: JustificationFrame
    allocators: tuple[Allocator, ...]
    propositions: tuple[StateSet, ...]
    beliefs: tuple[tuple[Fraction, ...], ...]  # rows: propositions, cols: allocators
    normalization: tuple[Fraction, ...]
    uncertainty: tuple[Fraction, ...]
    precision: int = 2

    def allocator_labels(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.allocators)

    def to_document(self) -> dict:
        def cell(value: Fraction) -> dict:
            return {
                "num": value.numerator,
                "den": value.denominator,
                "rendered": render_decimal(value, self.precision),
            }

        labels = self.allocator_labels()
        return {
            "justification": self.justification.kind.value,
            "allocators": list(labels),
            "rows": [
                {
                    "proposition": list(p.members()),
                    "beliefs": {
                        label: cell(self.beliefs[r][c])
                        for c, label in enumerate(labels)
                    },
                }
                for r, p in enumerate(self.propositions)
            ],
            "uncertainty": {
                label: cell(self.uncertainty[c]) for c, label in enumerate(labels)
            },
            "normalization": {
                label: cell(self.normalization[c]) for c, label in enumerate(labels)
            },
        }


def belief_report(
    frame: QuantitativeEvidenceFrame,
    allocators: Sequence[Allocator],
    justification: JustificationFrame,
    propositions: Sequence[StateSet],
    precision: int = 2,
) -> BeliefReport:
    """Evaluate every (proposition, allocator) cell once, exactly."""
    for p in propositions:
        if p.universe != frame.universe:
            raise FrameMismatch("proposition lives in a different universe")
    universe = frame.universe
    norm: list[Fraction] = []
    unc: list[Fraction] = []
    columns: list[dict[int, int]] = []
    dens: list[int] = []
    for a in allocators:
        acc, den = _image_numerators(frame, a)
        kept = {
            bits: num
            for bits, num in acc.items()
            if justification.contains(StateSet(universe, bits))
        }
        captured = sum(kept.values())
        if captured == 0:
            raise TopobeliefError(
                "justification frame captures no mass; belief is undefined"
            )
        norm.append(Fraction(captured, den))
        unc.append(Fraction(kept.get(universe.full_bits, 0), captured))
        columns.append(kept)
        dens.append(captured)
    rows = []
    for p in propositions:
        row = []
        for kept, captured in zip(columns, dens):
            inside = sum(
                num for bits, num in kept.items() if bits & ~p.bits == 0
            )
            row.append(Fraction(inside, captured))
        rows.append(tuple(row))
    return BeliefReport(
        frame=frame,
        justification=justification,
        allocators=tuple(allocators),
        propositions=tuple(propositions),
        beliefs=tuple(rows),
        normalization=tuple(norm),
        uncertainty=tuple(unc),
        precision=precision,
    )
