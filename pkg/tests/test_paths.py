from __future__ import annotations

import json
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellcycle.gadgets import extremal_cover
from ellcycle.hgraph import complete
from ellcycle.paths import (
    CycleSeq,
    PathJoinError,
    PathSeq,
    concat,
    divisibility,
    dump_sequence,
    is_cycle_in,
    is_hamilton_cycle_in,
    is_path_in,
    ordered_ends,
    replace_window,
    sequence_from_dict,
    threshold_denominator,
)
from itertools import permutations


def as_sets(edges):
    return [set(e) for e in edges]


def test_path_edges():
    assert as_sets(PathSeq(range(9), 3, 1).edges()) == [{0, 1, 2}, {2, 3, 4}, {4, 5, 6}, {6, 7, 8}]
    assert as_sets(PathSeq(range(5), 3, 2).edges()) == [{0, 1, 2}, {1, 2, 3}, {2, 3, 4}]
    assert len(PathSeq(range(10), 4, 1).edges()) == 3


def test_path_rejects_bad_orders_and_repeats():
    with pytest.raises(ValueError):
        PathSeq(range(8), 3, 1)
    with pytest.raises(ValueError):
        PathSeq((0, 1, 2, 3, 1), 3, 1)
    with pytest.raises(ValueError):
        PathSeq(range(3), 3, 3)


def test_cycle_edges():
    assert as_sets(CycleSeq(range(6), 3, 1).edges()) == [{0, 1, 2}, {2, 3, 4}, {4, 5, 0}]
    assert len(CycleSeq(range(5), 3, 2).edges()) == 5
    c = CycleSeq(range(8), 4, 2)
    assert len(c.edges()) == 4
    assert set(Counter(v for e in c.edges() for v in e).values()) == {2}


def test_cycle_rejects_non_divisible_and_tiny():
    with pytest.raises(ValueError):
        CycleSeq(range(7), 3, 1)
    with pytest.raises(ValueError):
        CycleSeq(range(4), 3, 1)


def test_consecutive_cycle_edges_share_ell():
    for k, ell, n in [(3, 1, 6), (3, 2, 5), (4, 2, 8), (5, 3, 8), (5, 2, 9)]:
        es = CycleSeq(range(n), k, ell).edges()
        assert all(len(set(es[i]) & set(es[(i + 1) % len(es)])) == ell for i in range(len(es)))


def test_membership():
    assert is_hamilton_cycle_in(complete(6, 3), CycleSeq((3, 0, 5, 1, 2, 4), 3, 1))
    ec = extremal_cover(3, 1, 6)
    assert not any(is_cycle_in(ec, CycleSeq((0,) + p, 3, 1)) for p in permutations(range(1, 6)))
    with pytest.raises(ValueError):
        is_path_in(complete(6, 4), PathSeq(range(5), 3, 1))


def test_ends():
    assert ordered_ends(PathSeq(range(9), 3, 1)) == ((0,), (8,))
    assert ordered_ends(PathSeq(range(9), 5, 3)) == ((0, 1, 2), (6, 7, 8))
    assert PathSeq(range(11), 5, 3).ends() == ((0, 1, 2), (8, 9, 10))


def test_concat():
    assert concat(PathSeq((0, 1, 2), 3, 1), PathSeq((2, 3, 4), 3, 1)).vertices == (0, 1, 2, 3, 4)
    joined = concat(PathSeq((0, 1, 2, 3, 4), 5, 3), PathSeq((2, 3, 4, 5, 6), 5, 3))
    assert len(joined) == 7 and len(joined.edges()) == 2
    with pytest.raises(PathJoinError) as err:
        concat(PathSeq((0, 1, 2), 3, 1), PathSeq((2, 0, 4), 3, 1))
    assert err.value.code == "nontrivial_intersection"
    with pytest.raises(PathJoinError) as err:
        concat(PathSeq((0, 1, 2), 3, 1), PathSeq((3, 4, 5), 3, 1))
    assert err.value.code == "end_mismatch"


def test_threshold_and_divisibility():
    assert threshold_denominator(9, 7) == 10
    assert threshold_denominator(3, 1) == 4
    assert divisibility(7, 4, 2).cycle_feasible is False
    assert divisibility(12, 5, 3) == (True, 1, 6)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 6), st.data())
def test_cycle_symmetries_keep_edges(k, data):
    ell = data.draw(st.integers(1, k - 1))
    m = k - ell
    n = data.draw(st.integers(2 * k - ell, 16).filter(lambda x: x % m == 0))
    verts = data.draw(st.permutations(range(n)))
    c = CycleSeq(tuple(verts), k, ell)
    edges = {frozenset(e) for e in c.edges()}
    for other in (c.reversed(), c.rotated(m), c.canonical()):
        assert {frozenset(e) for e in other.edges()} == edges
    assert c.canonical() == c.reversed().rotated(m * (n // m // 2)).canonical()
    with pytest.raises(ValueError):
        if m > 1:
            c.rotated(1)
        else:
            raise ValueError


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 6), st.data())
def test_reversed_path_keeps_edges(k, data):
    ell = data.draw(st.integers(1, k - 1))
    r = k + (k - ell) * data.draw(st.integers(0, 4))
    p = PathSeq(tuple(data.draw(st.permutations(range(r)))), k, ell)
    assert {frozenset(e) for e in p.reversed().edges()} == {frozenset(e) for e in p.edges()}


def test_replace_window():
    vs = list(range(10))
    assert replace_window(vs, [2, 3, 4], [2, 20, 21, 3, 4], 2) == [0, 1, 2, 20, 21, 3, 4, 5, 6, 7, 8, 9]
    assert replace_window(vs, [4, 3, 2], [4, 20, 21, 3, 2], 2) == [0, 1, 2, 3, 21, 20, 4, 5, 6, 7, 8, 9]
    with pytest.raises(ValueError):
        replace_window(vs, [3, 4, 5], [3, 9, 4, 5], 2)
    with pytest.raises(ValueError):
        replace_window(vs, [2, 4], [2, 4], 2)


def test_certificate_json(tmp_path):
    c = CycleSeq((0, 2, 1, 3, 5, 4), 3, 1)
    f = tmp_path / "c.json"
    dump_sequence(c, f)
    assert json.loads(f.read_text()) == {"k": 3, "ell": 1, "vertices": [0, 2, 1, 3, 5, 4], "cyclic": True}
    assert sequence_from_dict(json.loads(f.read_text())) == c
    p = PathSeq(range(5), 3, 1)
    assert sequence_from_dict(p.to_dict()) == p
