"""Generator invariants and class-file round trips."""

import json

import pytest

from cotverify import families
from cotverify.core import (
    ALL_CORRECT,
    CapExceeded,
    CotInstance,
    ParseError,
    PrefixInstance,
    Problem,
    SchemaError,
    StepToken,
    fault_at,
    validate_fail_token,
)


def test_singleton_class_shape():
    vc = families.singleton_bitstring_class(3)
    assert len(vc) == 8
    assert len(vc.universe) == 2 + 4 + 8
    # Verifier b accepts a prefix iff the last step matches its bit.
    assert vc.accepts(0b000, PrefixInstance(0, (0, 0)))
    assert not vc.accepts(0b000, PrefixInstance(0, (0, 1)))


def test_singleton_cot_labels_locate_first_divergence():
    vc = families.singleton_bitstring_class(3)
    for h in range(8):
        bits = tuple((h >> (2 - j)) & 1 for j in range(3))
        assert vc.cot_label_of(h, CotInstance(0, bits)) == ALL_CORRECT
        flipped = (1 - bits[0],) + bits[1:]
        assert vc.cot_label_of(h, CotInstance(0, flipped)) == fault_at(1)


def test_complement_class_rejects_exactly_one_trace():
    vc = families.complement_class(4, 3)
    for h in range(4):
        rejected = [
            z for z in vc.universe if not vc.accepts(h, z)
        ]
        assert len(rejected) == 1
        assert len(rejected[0].steps) == 3


def test_indicator_class_accepts_unit_vector():
    vc = families.indicator_class(4)
    for h in range(4):
        unit = tuple(1 if j == h else 0 for j in range(4))
        assert vc.cot_label_of(h, CotInstance(0, unit)) == ALL_CORRECT


def test_generator_caps():
    with pytest.raises(CapExceeded):
        families.singleton_bitstring_class(17)
    with pytest.raises(CapExceeded):
        families.indicator_class(11)
    with pytest.raises(CapExceeded):
        families.complement_class(5, 2)


def test_river_edges_and_class():
    edges = families.river_edges()
    assert len(edges) == 20
    assert all(families.river_safe(s) and families.river_safe(t)
               for s, t in edges)
    vc = families.river_crossing_class(edges[:16], 4)
    assert len(vc) == 2 ** 4
    # Fully revealed graph leaves a single verifier.
    assert len(families.river_crossing_class(edges, 4)) == 1


def test_river_universe_only_walks_legal_edges():
    vc = families.river_crossing_class(families.river_edges(), 8)
    states = [tuple(int(c) for c in t.name) for t in vc.sigma]
    start = states.index(families.RIVER_START)
    # Chicken alone with fox on the far bank is not a legal successor.
    bad = states.index((0, 1, 1, 0))
    assert PrefixInstance(0, (start, bad)) not in vc
    # A prefix that starts away from the start state is rejected.
    other = states.index((1, 1, 1, 1))
    assert not vc.accepts(0, PrefixInstance(0, (other,)))


def test_river_classic_solution_accepted():
    vc = families.river_crossing_class(families.river_edges(), 8)
    states = [tuple(int(c) for c in t.name) for t in vc.sigma]
    sol = [(0, 0, 0, 0), (1, 1, 0, 0), (0, 1, 0, 0), (1, 1, 1, 0),
           (0, 0, 1, 0), (1, 0, 1, 1), (0, 0, 1, 1), (1, 1, 1, 1)]
    steps = tuple(states.index(s) for s in sol)
    assert vc.cot_label_of(0, CotInstance(0, steps)) == ALL_CORRECT


def test_with_fail_token_valid_and_idempotent():
    vc = families.with_fail_token(families.conjunction_class(3))
    validate_fail_token(vc)
    assert families.with_fail_token(vc) is vc
    F = vc.fail_token
    padded = PrefixInstance(0, (0, F, F))
    assert all(not vc.accepts(h, padded) for h in range(len(vc)))


def test_save_load_round_trip(tmp_path, corpus):
    for name, vc in corpus.items():
        path = tmp_path / f"{name}.json"
        families.save_class(vc, path)
        loaded = families.load_class(path)
        assert loaded.equal_canonical(vc), name


def test_load_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        families.load_class(bad)
    bad.write_text(json.dumps({"sigma": ["0"], "problems": ["x"], "L": 1}))
    with pytest.raises(SchemaError):
        families.load_class(bad)
    bad.write_text(json.dumps({
        "sigma": ["0"], "problems": ["x"], "L": 1,
        "universe": [[0, [0]]],
        "verifiers": [{"id": 0, "rows": [2]}],
    }))
    with pytest.raises(SchemaError):
        families.load_class(bad)


def test_product_class_combines_step_classes():
    vc = families.product_class(
        [StepToken(0, "0"), StepToken(1, "1")],
        [Problem(0, "x")],
        [
            [lambda p, s, b=b: s[-1] == b for b in (0, 1)],
            [lambda p, s: True],
        ],
    )
    assert len(vc) == 2
    assert vc.cot_label_of(0, CotInstance(0, (0, 1))) == ALL_CORRECT
    assert vc.cot_label_of(1, CotInstance(0, (0, 1))) == fault_at(1)
