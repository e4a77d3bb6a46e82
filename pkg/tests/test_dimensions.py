"""Dimension values against brute-force tree enumeration, witness trees,
and the leaf-count recurrence."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import brute
from cotverify import dimensions, families
from cotverify.core import CostVector, NoWitness, VersionSpace, cot_instances

UNIT = CostVector(Fraction(1), Fraction(1), Fraction(0))


def test_known_values_indicator_4():
    vs = VersionSpace.full(families.indicator_class(4))
    assert dimensions.ldim(vs, witness=False).value == 2
    assert dimensions.sc_ldim(vs, 0, witness=False).value == 3
    assert dimensions.sc_ldim(vs, 1, witness=False).value == 2
    assert dimensions.sc_ldim(vs, 2, witness=False).value == 2


def test_known_values_singleton():
    for L in (2, 3, 4):
        vs = VersionSpace.full(families.singleton_bitstring_class(L))
        assert dimensions.ldim(vs, witness=False).value == L
        assert dimensions.sc_ldim(vs, 0, witness=False).value == L


def test_known_values_complement():
    # Rejections are only revealed at full traces, so identifying the
    # target costs one mistake per eliminated verifier.
    for n in (3, 4):
        vs = VersionSpace.full(families.complement_class(n, 2))
        assert dimensions.ldim(vs, witness=False).value == 1


def test_brute_force_equivalence_corpus(corpus):
    for name, vc in corpus.items():
        if len(vc) > 8 or len(vc.universe) > 12:
            continue
        vs = VersionSpace.full(vc)
        assert dimensions.ldim_value(vs) == brute.bf_ldim(vc), name
        for k in (0, 1, 2):
            assert dimensions.sc_value(vs, k) == brute.bf_sc_ldim(vc, k), name


def test_brute_force_equivalence_random():
    rng = random.Random(20260823)
    for trial in range(60):
        vc = brute.random_class(rng)
        vs = VersionSpace.full(vc)
        assert dimensions.ldim_value(vs) == brute.bf_ldim(vc), trial
        k = rng.choice([0, 1, 2])
        assert dimensions.sc_value(vs, k) == brute.bf_sc_ldim(vc, k), trial
        ws, wc = rng.choice([(1, 1), (2, 1), (3, 2)])
        costs = CostVector(Fraction(ws), Fraction(wc), Fraction(0))
        assert dimensions.wsc_value(vs, costs) == brute.bf_wsc_ldim(
            vc, ws, wc
        ), trial


def test_brute_force_equivalence_scl():
    rng = random.Random(7)
    for trial in range(40):
        vc = brute.random_full_trace_class(rng, max_h=6, L=2)
        vs = VersionSpace.full(vc)
        ws, wc, wl = rng.choice([(1, 1, 1), (2, 1, 1), (3, 2, 1)])
        costs = CostVector(Fraction(ws), Fraction(wc), Fraction(wl))
        assert dimensions.scl_value(vs, costs) == brute.bf_scl_ldim(
            vc, ws, wc, wl
        ), trial


def test_sc_decreasing_in_budget(corpus):
    # A larger straight-edge budget only helps the learner, never the
    # adversary: the guaranteed depth is nonincreasing in k.
    for name, vc in corpus.items():
        vs = VersionSpace.full(vc)
        values = [dimensions.sc_value(vs, k) for k in range(4)]
        assert values == sorted(values, reverse=True), name
        assert values[0] >= dimensions.ldim_value(vs) or values[0] == 0


def test_wsc_unit_costs_recover_ldim(corpus_class):
    vs = VersionSpace.full(corpus_class)
    unit = CostVector(Fraction(1), Fraction(1), Fraction(0))
    assert dimensions.wsc_value(vs, unit) == dimensions.ldim_value(vs)


def test_wsc_scale_invariance():
    vs = VersionSpace.full(families.indicator_class(4))
    base = dimensions.wsc_value(vs, CostVector(Fraction(2), Fraction(1)))
    scaled = dimensions.wsc_value(
        vs, CostVector(Fraction(2, 3), Fraction(1, 3))
    )
    assert scaled == base / 3


def test_witnesses_verify_and_certify(corpus):
    costs = CostVector(Fraction(2), Fraction(1), Fraction(0))
    scl_costs = CostVector(Fraction(1), Fraction(1), Fraction(1))
    for name, vc in corpus.items():
        vs = VersionSpace.full(vc)
        for kind, kwargs, value in [
            ("plain", {}, dimensions.ldim_value(vs)),
            ("SC", {"k": 1}, dimensions.sc_value(vs, 1)),
            ("WSC", {"costs": costs}, dimensions.wsc_value(vs, costs)),
            ("SCL", {"costs": scl_costs}, dimensions.scl_value(vs, scl_costs)),
        ]:
            if kind == "SCL" and not cot_instances(vc):
                continue
            if value == 0:
                with pytest.raises(NoWitness):
                    dimensions.extract_witness(vs, kind, **kwargs)
                continue
            tree = dimensions.extract_witness(vs, kind, **kwargs)
            assert dimensions.verify_shattered(tree, vs), (name, kind)
            assert dimensions.certified_value(tree) == value, (name, kind)


def test_sc_witness_at_zero_budget():
    vs = VersionSpace.full(families.indicator_class(4))
    tree = dimensions.extract_witness(vs, "SC", k=0)
    assert tree.budget == 0
    assert dimensions.verify_shattered(tree, vs)
    assert dimensions.certified_value(tree) == 3


def test_dim_results_report_backend():
    vs = VersionSpace.full(families.indicator_class(3))
    res = dimensions.ldim(vs)
    assert res.stats["backend"] in ("pure", "fast")
    assert res.stats["nodes_expanded"] >= 1


def test_restricted_spaces_shrink_dimension():
    vc = families.singleton_bitstring_class(3)
    vs = VersionSpace.full(vc)
    sub = VersionSpace(vc, vs.alive & 0b00001111)
    assert dimensions.ldim_value(sub) <= dimensions.ldim_value(vs)
    assert dimensions.sc_value(sub, 1) <= dimensions.sc_value(vs, 1)


@given(w=st.integers(0, 40), d=st.sampled_from([1, 2, 4, 8]))
@settings(max_examples=80, deadline=None)
def test_min_leaf_recurrence_matches_unrolling(w, d):
    assert dimensions.min_leaf_recurrence(w, d) == brute.min_leaf_unrolled(w, d)


def test_min_leaf_known_values():
    # d = 1 doubles every step; d = 2 is the Fibonacci recurrence.
    assert [dimensions.min_leaf_recurrence(w, 1) for w in range(5)] == [
        1, 2, 4, 8, 16,
    ]
    assert [dimensions.min_leaf_recurrence(w, 2) for w in range(7)] == [
        1, 2, 3, 5, 8, 13, 21,
    ]


def test_max_weight_for_leaves_inverts_recurrence():
    for d in (1, 2, 4, 8):
        for n in (1, 2, 5, 13, 64):
            w = dimensions.max_weight_for_leaves(n, d)
            assert dimensions.min_leaf_recurrence(w, d) <= n
            assert dimensions.min_leaf_recurrence(w + 1, d) > n


def test_wsc_bounded_by_leaf_count_inversion():
    # A weight-w tree with costs (d, 1) has at least L(w) leaves, each
    # pinned to a distinct verifier, so wsc <= max{w : L(w) <= |H|}.
    rng = random.Random(99)
    for _ in range(30):
        vc = brute.random_class(rng, max_h=8)
        vs = VersionSpace.full(vc)
        for d in (2, 4):
            costs = CostVector(Fraction(d), Fraction(1), Fraction(0))
            assert dimensions.wsc_value(vs, costs) <= (
                dimensions.max_weight_for_leaves(len(vc), d)
            )
