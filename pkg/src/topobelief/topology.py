"""Topology generation from a subbasis, denseness, and minimum dense opens.

All spaces are finite, so arbitrary unions reduce to pairwise ones and every
question below is decidable by direct enumeration. ``generate_topology``
materialises the full family of opens; the ``minimal_open_neighborhoods``
helper answers openness/denseness queries without materialising anything,
which is what the fusion pipeline uses at scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import StateSet, StateUniverse, canonical_key
from .errors import EmptyEvidenceList, UniverseMismatch


@dataclass(frozen=True)
class Topology:
    """An explicit topology: deduplicated opens in canonical order."""

    universe: StateUniverse
    opens: tuple[StateSet, ...]

    def __contains__(self, s: StateSet) -> bool:
        return s in set(self.opens)

    def nonempty_opens(self) -> tuple[StateSet, ...]:
        return tuple(o for o in self.opens if not o.is_empty())

    def __len__(self) -> int:
        return len(self.opens)


def _check_universe(universe: StateUniverse, sets: Sequence[StateSet]) -> None:
    for s in sets:
        if s.universe != universe:
            raise UniverseMismatch("subbasis sets must live in the given universe")


def generate_topology(universe: StateUniverse, subbasis: Sequence[StateSet]) -> Topology:
    """Smallest topology containing ``subbasis``.

    Seeds with every finite intersection of subbasis members (the empty
    intersection contributes the full space) plus the empty set, then closes
    under unions. Unions of intersections are already intersection-closed by
    distributivity, so the union fixpoint is the whole closure.
    """
    _check_universe(universe, subbasis)
    full = universe.full_bits
    basis: set[int] = {full}
    for s in subbasis:
        basis |= {b & s.bits for b in basis}
    opens: set[int] = set(basis) | {0}
    frontier = list(basis)
    basis_list = list(basis)
    while frontier:
        next_frontier = []
        for x in frontier:
            for b in basis_list:
                u = x | b
                if u not in opens:
                    opens.add(u)
                    next_frontier.append(u)
        frontier = next_frontier
    members = sorted((StateSet(universe, bits) for bits in opens), key=canonical_key)
    return Topology(universe, tuple(members))


def is_dense(p: StateSet, topology: Topology) -> bool:
    """True iff ``p`` meets every non-empty open."""
    if p.universe != topology.universe:
        raise UniverseMismatch("proposition and topology use different universes")
    return all(p.bits & o.bits for o in topology.opens if o.bits)


def supports(evidence: StateSet, proposition: StateSet) -> bool:
    """A piece of evidence supports a proposition iff it is contained in it."""
    return evidence.issubset(proposition)


def arguments_for(topology: Topology, proposition: StateSet) -> tuple[StateSet, ...]:
    """All non-empty opens contained in the proposition, in canonical order."""
    if proposition.universe != topology.universe:
        raise UniverseMismatch("proposition and topology use different universes")
    return tuple(
        o for o in topology.opens if o.bits and o.bits & ~proposition.bits == 0
    )


def _signatures(evidence: Sequence[StateSet]) -> list[tuple[int, int]]:
    """Pairs ``(state bit, membership mask over the evidence list)``, one per
    state covered by at least one set."""
    universe = evidence[0].universe
    out = []
    for k in range(universe.size):
        sig = 0
        for i, e in enumerate(evidence):
            if e.bits >> k & 1:
                sig |= 1 << i
        if sig:
            out.append((1 << k, sig))
    return out


def maximal_fip_families(evidence: Sequence[StateSet]) -> tuple[tuple[StateSet, ...], ...]:
    """All subfamilies with non-empty intersection that no strict superfamily keeps.

    A family with common point x is exactly the family of sets containing x,
    once maximality forces it; so the maximal families are the maximal
    per-state membership signatures. Families come back in ascending order of
    their index mask, members in input order.
    """
    if not evidence:
        raise EmptyEvidenceList("need at least one evidence set")
    _check_universe(evidence[0].universe, evidence)
    sigs = {sig for _, sig in _signatures(evidence)}
    maximal = sorted(
        s for s in sigs if not any(s != o and s & o == s for o in sigs)
    )
    return tuple(
        tuple(e for i, e in enumerate(evidence) if mask >> i & 1) for mask in maximal
    )


def min_dense(evidence: Sequence[StateSet]) -> StateSet:
    """The smallest dense open of the topology the evidence generates.

    Equals the union of the intersections of all maximal
    finite-intersection-property families; pointwise, a state belongs iff its
    membership signature is maximal among all signatures.
    """
    if not evidence:
        raise EmptyEvidenceList("need at least one evidence set")
    universe = evidence[0].universe
    _check_universe(universe, evidence)
    pairs = _signatures(evidence)
    sigs = {sig for _, sig in pairs}
    bits = 0
    for point, sig in pairs:
        if not any(sig != o and sig & o == sig for o in sigs):
            bits |= point
    return StateSet(universe, bits)


def minimal_open_neighborhoods(
    universe: StateUniverse, sets: Sequence[StateSet]
) -> tuple[StateSet, ...]:
    """Per state, the smallest open of the generated topology containing it.

    The neighborhood of x is the intersection of every generator containing
    x, or the full space when none does. These answer membership queries
    without materialising the topology: a set is open iff it contains the
    neighborhood of each of its states, and dense iff it meets every
    neighborhood.
    """
    _check_universe(universe, sets)
    full = universe.full_bits
    out = []
    for k in range(universe.size):
        nb = full
        for s in sets:
            if s.bits >> k & 1:
                nb &= s.bits
        out.append(StateSet(universe, nb))
    return tuple(out)


def open_in_generated(neighborhoods: Sequence[StateSet], s: StateSet) -> bool:
    """Openness test against precomputed minimal neighborhoods."""
    bits = s.bits
    for k in range(s.universe.size):
        if bits >> k & 1 and neighborhoods[k].bits & ~bits:
            return False
    return True


def dense_in_generated(neighborhoods: Sequence[StateSet], s: StateSet) -> bool:
    """Denseness test against precomputed minimal neighborhoods."""
    return all(nb.bits & s.bits for nb in neighborhoods)
