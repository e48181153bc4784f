from __future__ import annotations

import json
from fractions import Fraction

from topobelief.core import make_universe
from topobelief.evidence import EvidenceItem, QuantitativeEvidenceFrame, parse_frame
from topobelief.fusion import INTERSECTION, MIN_DENSE, UNION, allocate, custom_allocator
from topobelief.verify import (
    check_allocation_definition,
    check_belief_axioms,
    check_bpa_axioms,
    check_drc_equivalence,
    check_mass_axioms,
    check_minimum_dense_open,
    check_topological_equivalence,
    justified_bpa,
    random_frame,
    run_all_checks,
)
import topobelief.verify as verify_module


def test_random_frame_deterministic():
    assert random_frame(42, 5, 4) == random_frame(42, 5, 4)
    assert random_frame(42) != random_frame(43)


def test_random_frame_shape():
    for seed in range(30):
        frame = random_frame(seed)
        assert 2 <= frame.universe.size <= 6
        assert 1 <= frame.arity <= 5
        for item in frame.items:
            assert not item.content.is_empty()
            assert not item.content.is_full()
            assert 0 < item.certainty < 1
            assert item.certainty.denominator <= 32


def test_mass_axioms_single_evidence_half():
    u = make_universe(["a", "b"])
    frame = QuantitativeEvidenceFrame(
        u, (EvidenceItem("E", u.subset(["a"]), Fraction(1, 2)),)
    )
    values = {s: Fraction(1, 2) for s in frame.all_subsets()}
    outcome = check_mass_axioms(values)
    assert outcome.passed
    assert outcome.detail["total"] == "1"


def test_all_checkers_pass_on_car(car):
    outcomes = run_all_checks(car)
    assert outcomes
    assert all(o.passed for o in outcomes)
    names = [o.check for o in outcomes]
    assert "drc_equivalence" in names
    assert "topological_equivalence" in names
    assert "minimum_dense_open" in names


def test_all_checkers_pass_on_random_frames():
    for seed in range(200):
        frame = random_frame(seed)
        for outcome in run_all_checks(frame):
            assert outcome.passed, (seed, outcome.check, outcome.detail)


def test_outcome_json_shape(car):
    outcome = check_drc_equivalence(car)
    doc = outcome.to_json()
    assert set(doc) == {"check", "frame", "detail"}
    assert doc["check"] == "drc_equivalence"
    # the witness frame is replayable
    assert parse_frame(json.dumps(doc["frame"])) == car


# -- mutation meta-tests: corrupting one value must flip the matching checker ----

def test_mass_checker_detects_corruption(car):
    from topobelief.fusion import mass_table

    values = dict(mass_table(car))
    key = next(iter(values))
    values[key] += Fraction(1, 1000)
    outcome = check_mass_axioms(values)
    assert not outcome.passed
    assert "total" in outcome.detail


def test_mass_checker_detects_out_of_range():
    outcome = check_mass_axioms({"x": Fraction(3, 2), "y": Fraction(-1, 2)})
    assert not outcome.passed


def test_bpa_checker_detects_empty_set_mass(car):
    bpa = justified_bpa(car, INTERSECTION, "ds")
    bpa[car.universe.empty_set()] = Fraction(1, 100)
    assert not check_bpa_axioms(bpa).passed


def test_belief_checker_detects_bad_total(car):
    from topobelief.fusion import belief, justification_frame

    jf = justification_frame(car, "ds")

    def corrupted(p):
        if p.is_full():
            return Fraction(1, 2)
        return belief(car, INTERSECTION, jf, p)

    outcome = check_belief_axioms(corrupted, car.universe)
    assert not outcome.passed
    assert outcome.detail["reason"] == "belief in the full set not 1"


def test_belief_checker_detects_superadditivity_break(car):
    # a deliberately non-monotone evaluator: full marks on two singletons,
    # nothing on their union
    u = car.universe

    def broken(p):
        if p.is_empty():
            return Fraction(0)
        if p.is_full():
            return Fraction(1)
        if p.size == 1:
            return Fraction(1)
        return Fraction(0)

    outcome = check_belief_axioms(broken, u)
    assert not outcome.passed
    assert outcome.detail["reason"] == "superadditivity fails"


def test_allocation_checker_detects_corrupted_image(car):
    table = {s: allocate(car, INTERSECTION, s) for s in car.all_subsets()}
    table[car.subset(["E1"])] = car.universe.subset(["dp"])  # not open for {E1}
    outcome = check_allocation_definition(
        car, [custom_allocator(car, table, "mutant")]
    )
    assert not outcome.passed
    assert outcome.detail["violations"]
    assert outcome.frame_document is not None


def test_drc_checker_detects_corrupted_oracle(car, monkeypatch):
    monkeypatch.setattr(
        verify_module, "belief_from_bpa", lambda m, p: Fraction(0)
    )
    outcome = check_drc_equivalence(car)
    assert not outcome.passed
    assert "proposition" in outcome.detail


def test_topological_checker_detects_corrupted_operator(car, monkeypatch):
    monkeypatch.setattr(
        verify_module, "topological_belief", lambda frame, p: True
    )
    outcome = check_topological_equivalence(car)
    assert not outcome.passed


def test_min_dense_checker_detects_wrong_candidate(car, monkeypatch):
    monkeypatch.setattr(
        verify_module, "min_dense", lambda sets: car.universe.full_set()
    )
    outcome = check_minimum_dense_open(car)
    assert not outcome.passed
    assert outcome.detail["reason"] == "a dense open does not contain the candidate"


def test_checkers_stay_green_without_mutation(car):
    # guard for the monkeypatched tests above: the unpatched checkers pass
    assert check_drc_equivalence(car).passed
    assert check_topological_equivalence(car).passed
    assert check_minimum_dense_open(car).passed
    assert check_allocation_definition(
        car, [INTERSECTION, UNION, MIN_DENSE]
    ).passed
