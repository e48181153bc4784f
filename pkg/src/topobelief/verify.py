"""Executable checkers for the pipeline's laws, plus a seeded frame generator.

Checkers return data, never raise: a failing ``CheckOutcome`` carries a
self-contained witness (frame document plus the offending sets and values)
that can be replayed through the CLI.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping, Sequence

from .core import StateSet, StateUniverse, make_universe
from .dst import belief_from_bpa, combine_evidence, topological_belief
from .evidence import (
    EvidenceItem,
    QuantitativeEvidenceFrame,
    frame_to_document,
)
from .fusion import (
    Allocator,
    INTERSECTION,
    MIN_DENSE,
    UNION,
    YAGER,
    allocated_mass_table,
    belief,
    justification_frame,
    mass_table,
    normalization_factor,
    validate_allocators,
)
from .topology import generate_topology, is_dense, min_dense

_MAX_CERTAINTY_DENOMINATOR = 32


@dataclass(frozen=True)
class CheckOutcome:
    check: str
    passed: bool
    detail: dict = field(default_factory=dict)
    frame_document: dict | None = None

    def to_json(self) -> dict:
        return {"check": self.check, "frame": self.frame_document, "detail": self.detail}


def _ok(check: str, frame: QuantitativeEvidenceFrame | None = None, **detail) -> CheckOutcome:
    doc = frame_to_document(frame) if frame is not None else None
    return CheckOutcome(check, True, dict(detail), doc)


def _fail(check: str, frame: QuantitativeEvidenceFrame | None = None, **detail) -> CheckOutcome:
    doc = frame_to_document(frame) if frame is not None else None
    return CheckOutcome(check, False, dict(detail), doc)


def check_mass_axioms(values: Mapping) -> CheckOutcome:
    """A mass function over any finite domain: values in [0, 1], total exactly 1."""
    name = "mass_axioms"
    total = Fraction(0)
    for key, value in values.items():
        if not 0 <= value <= 1:
            return _fail(name, key=repr(key), value=str(value),
                         reason="value outside [0, 1]")
        total += value
    if total != 1:
        return _fail(name, total=str(total), reason="values do not total 1")
    return _ok(name, total=str(total))


def check_bpa_axioms(values: Mapping[StateSet, Fraction]) -> CheckOutcome:
    """A basic probability assignment: mass axioms plus zero on the empty set."""
    name = "bpa_axioms"
    for s, value in values.items():
        if s.is_empty() and value != 0:
            return _fail(name, value=str(value), reason="non-zero mass on the empty set")
    inner = check_mass_axioms(values)
    if not inner.passed:
        return _fail(name, **inner.detail)
    return _ok(name)


def check_belief_axioms(
    evaluate: Callable[[StateSet], Fraction],
    universe: StateUniverse,
    n_max: int = 3,
    pool: Sequence[StateSet] | None = None,
) -> CheckOutcome:
    """Belief-function axioms: 0 at the empty set, 1 at the full set, and
    superadditivity over every union of up to ``n_max`` pool members.

    The inclusion-exclusion inequality is quantified over all n in the
    source definition; small n already catches non-monotone and pairwise
    failures, and anything larger is exponential.
    """
    name = "belief_axioms"
    if pool is None:
        pool = [StateSet(universe, 1 << k) for k in range(universe.size)]
        pool.append(universe.full_set())
    empty = evaluate(universe.empty_set())
    if empty != 0:
        return _fail(name, reason="belief in the empty set not 0", value=str(empty))
    total = evaluate(universe.full_set())
    if total != 1:
        return _fail(name, reason="belief in the full set not 1", value=str(total))
    for n in range(2, n_max + 1):
        for combo in combinations(pool, n):
            union_bits = 0
            for s in combo:
                union_bits |= s.bits
            lhs = evaluate(StateSet(universe, union_bits))
            rhs = Fraction(0)
            for r in range(1, n + 1):
                sign = 1 if r % 2 == 1 else -1
                for picked in combinations(combo, r):
                    inter_bits = universe.full_bits
                    for s in picked:
                        inter_bits &= s.bits
                    rhs += sign * evaluate(StateSet(universe, inter_bits))
            if lhs < rhs:
                return _fail(
                    name,
                    reason="superadditivity fails",
                    sets=[list(s.members()) for s in combo],
                    lhs=str(lhs),
                    rhs=str(rhs),
                )
    return _ok(name)


def check_allocation_definition(
    frame: QuantitativeEvidenceFrame, allocators: Sequence[Allocator]
) -> CheckOutcome:
    """The three allocation laws, over every evidence subset."""
    name = "allocation_definition"
    report = validate_allocators(frame, allocators)
    if report:
        return _fail(
            name,
            frame,
            violations=[{"code": v.code, "message": v.message, **v.detail} for v in report],
        )
    return _ok(name, frame)


def check_drc_equivalence(frame: QuantitativeEvidenceFrame) -> CheckOutcome:
    """The intersection allocator under the all-arguments frame reproduces
    Dempster-combined belief exactly, on every proposition."""
    name = "drc_equivalence"
    combined = combine_evidence(frame)
    ds = justification_frame(frame, "ds")
    universe = frame.universe
    for bits in range(1 << universe.size):
        p = StateSet(universe, bits)
        lhs = belief(frame, INTERSECTION, ds, p)
        rhs = belief_from_bpa(combined, p)
        if lhs != rhs:
            return _fail(
                name,
                frame,
                proposition=list(p.members()),
                pipeline=str(lhs),
                combined=str(rhs),
            )
    return _ok(name, frame)


def check_topological_equivalence(frame: QuantitativeEvidenceFrame) -> CheckOutcome:
    """Qualitative belief holds exactly where the min-dense allocator under the
    dense-arguments frame assigns positive belief, on every proposition."""
    name = "topological_equivalence"
    sd = justification_frame(frame, "sd")
    universe = frame.universe
    for bits in range(1 << universe.size):
        p = StateSet(universe, bits)
        qualitative = topological_belief(frame, p)
        quantitative = belief(frame, MIN_DENSE, sd, p) > 0
        if qualitative != quantitative:
            return _fail(
                name,
                frame,
                proposition=list(p.members()),
                qualitative=qualitative,
                positive_belief=quantitative,
            )
    return _ok(name, frame)


def check_minimum_dense_open(frame: QuantitativeEvidenceFrame) -> CheckOutcome:
    """The computed minimum dense open is dense, open, and below every dense
    open of the generated topology, checked exhaustively."""
    name = "minimum_dense_open"
    contents = frame.contents()
    candidate = min_dense(contents)
    topo = generate_topology(frame.universe, contents)
    if candidate not in topo:
        return _fail(name, frame, reason="candidate is not open",
                     candidate=list(candidate.members()))
    if not is_dense(candidate, topo):
        return _fail(name, frame, reason="candidate is not dense",
                     candidate=list(candidate.members()))
    for o in topo.opens:
        if is_dense(o, topo) and not candidate.issubset(o):
            return _fail(
                name,
                frame,
                reason="a dense open does not contain the candidate",
                candidate=list(candidate.members()),
                dense_open=list(o.members()),
            )
    return _ok(name, frame)


def justified_bpa(
    frame: QuantitativeEvidenceFrame, allocator: Allocator, kind: str
) -> dict[StateSet, Fraction]:
    """The renormalised mass over justification-frame members, as a focal map."""
    jf = justification_frame(frame, kind)
    table = allocated_mass_table(frame, allocator)
    factor = normalization_factor(frame, allocator, jf)
    return {s: v / factor for s, v in table.items() if v and jf.contains(s)}


def run_all_checks(frame: QuantitativeEvidenceFrame) -> list[CheckOutcome]:
    """Every checker against one frame; outcome names carry the combination
    checked, so CI output stays one stable line per check."""
    outcomes: list[CheckOutcome] = []

    masses = {subset: value for subset, value in mass_table(frame)}
    outcome = check_mass_axioms(masses)
    outcomes.append(CheckOutcome("mass_axioms:merged", outcome.passed,
                                 outcome.detail, frame_to_document(frame)))

    outcomes.append(
        check_allocation_definition(frame, [INTERSECTION, UNION, MIN_DENSE, YAGER])
    )

    pool = list(dict.fromkeys(frame.contents()))
    for k in range(min(frame.universe.size, 3)):
        pool.append(StateSet(frame.universe, 1 << k))
    for alloc in (INTERSECTION, UNION, MIN_DENSE):
        for kind in ("ds", "sd"):
            tag = f"{alloc.label},{kind}"
            bpa = justified_bpa(frame, alloc, kind)
            outcome = check_bpa_axioms(bpa)
            outcomes.append(CheckOutcome(f"bpa_axioms:{tag}", outcome.passed,
                                         outcome.detail, frame_to_document(frame)))
            jf = justification_frame(frame, kind)
            outcome = check_belief_axioms(
                lambda p, a=alloc, j=jf: belief(frame, a, j, p),
                frame.universe,
                n_max=3,
                pool=pool,
            )
            outcomes.append(CheckOutcome(f"belief_axioms:{tag}", outcome.passed,
                                         outcome.detail, frame_to_document(frame)))

    outcomes.append(check_drc_equivalence(frame))
    outcomes.append(check_topological_equivalence(frame))
    outcomes.append(check_minimum_dense_open(frame))
    return outcomes


def random_frame(
    seed: int, max_states: int = 6, max_items: int = 5
) -> QuantitativeEvidenceFrame:
    """Deterministic random frame: 2..max_states states, 1..max_items items,
    contents non-empty strict subsets, certainties with denominators <= 32."""
    rng = random.Random(seed)
    n = rng.randint(2, max(2, max_states))
    m = rng.randint(1, max(1, max_items))
    universe = make_universe([f"s{k}" for k in range(n)])
    full = universe.full_bits
    items = []
    for i in range(m):
        bits = rng.randrange(1, full)  # excludes 0 and the full set
        den = rng.randint(2, _MAX_CERTAINTY_DENOMINATOR)
        num = rng.randint(1, den - 1)
        items.append(
            EvidenceItem(f"E{i + 1}", StateSet(universe, bits), Fraction(num, den))
        )
    return QuantitativeEvidenceFrame(universe, tuple(items))
