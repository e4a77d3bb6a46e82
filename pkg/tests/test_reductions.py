"""Chain-of-thought/prefix adapters: mistake accounting and round trips."""

import itertools

import pytest

import exhaust
from cotverify import dimensions, families
from cotverify.core import (
    ALL_CORRECT,
    CotInstance,
    FailTokenRequired,
    Oracle,
    PrefixInstance,
    VersionSpace,
    cot_instances,
)
from cotverify.learners import ScSoa, SoundConservative, run_online
from cotverify.reductions import cot_from_prefix, prefix_from_cot


def test_cot_from_prefix_predicts_first_rejection():
    vc = families.singleton_bitstring_class(3)
    wrapped = cot_from_prefix(ScSoa(vc, 0))
    z = CotInstance(0, (0, 0, 0))
    pred = wrapped.predict(z)
    # A fresh budget-0 learner rejects every non-unanimous prefix.
    assert pred == 1.0


def test_cot_from_prefix_inherits_budgets():
    for vc, k in [
        (families.conjunction_class(2), 0),
        (families.conjunction_class(2), 1),
        (families.indicator_class(3), 1),
        (families.complement_class(3, 2), 2),
    ]:
        total, sound = exhaust.cot_reduction_worst(vc, k, 4)
        assert sound <= k
        assert total <= dimensions.sc_value(VersionSpace.full(vc), k)


def test_cot_from_prefix_updates_inner_once_per_mistake():
    vc = families.indicator_class(3)
    oracle = Oracle(vc, 0)
    inner = ScSoa(vc, 1)
    updates = []
    original = inner.update
    inner.update = lambda z, y: (updates.append((z, y)), original(z, y))
    wrapped = cot_from_prefix(inner)
    t = run_online(wrapped, oracle, cot_instances(vc))
    assert len(updates) == t.total_mistakes


def test_prefix_from_cot_requires_fail_token():
    vc = families.conjunction_class(2)
    with pytest.raises(FailTokenRequired):
        prefix_from_cot(SoundConservative(vc), vc)


def test_prefix_from_cot_protocol_runs_sound():
    vc = families.with_fail_token(families.conjunction_class(2))
    traces = [z for z in cot_instances(vc) if vc.fail_token not in z.steps]
    for target in range(len(vc)):
        oracle = Oracle(vc, target)
        for order in itertools.permutations(traces):
            learner = prefix_from_cot(SoundConservative(vc), vc)
            t = exhaust.run_protocol_prefixes(learner, oracle, order)
            assert t.soundness_mistakes == 0
            assert t.completeness_mistakes <= len(vc) - 1


def test_round_trip_composite_stays_sound():
    vc = families.with_fail_token(families.conjunction_class(2))
    traces = [z for z in cot_instances(vc) if vc.fail_token not in z.steps]
    for target in range(len(vc)):
        oracle = Oracle(vc, target)
        composite = cot_from_prefix(
            prefix_from_cot(SoundConservative(vc), vc)
        )
        t = run_online(composite, oracle, traces * 2)
        assert t.soundness_mistakes == 0
        assert t.completeness_mistakes <= len(vc) - 1


def test_prefix_from_cot_padding():
    vc = families.with_fail_token(families.conjunction_class(3))
    learner = prefix_from_cot(SoundConservative(vc), vc)
    padded = learner._padded(PrefixInstance(0, (1,)))
    assert padded.steps == (1, vc.fail_token, vc.fail_token)


def test_snapshot_composites_are_frozen():
    vc = families.with_fail_token(families.conjunction_class(2))
    oracle = Oracle(vc, 0)
    learner = prefix_from_cot(SoundConservative(vc), vc)
    frozen = learner.snapshot()
    z = PrefixInstance(0, (0,))
    before = frozen(z)
    learner.update(z, oracle.prefix_label(z))
    assert frozen(z) == before
