from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from ellcycle.gadgets import build_W, compact_absorber, build_AP, extremal_cover, extremal_parity
from ellcycle.hgraph import KGraph, complete, new_kgraph, random_kgraph
from ellcycle.oracle import (
    SearchBudget,
    Status,
    connect_single_edge,
    find_gadget_copy,
    find_hamilton_cycle,
    find_path_between,
    find_perfect_matching,
    greedy_extend,
    is_perfect_matching,
    iter_perfect_matchings,
)
from ellcycle.paths import PathSeq, is_hamilton_cycle_in, is_path_in


def test_cycle_examples():
    out = find_hamilton_cycle(complete(6, 3), 1)
    assert out.found and is_hamilton_cycle_in(complete(6, 3), out.certificate)
    assert find_hamilton_cycle(extremal_cover(3, 1, 8), 1).status is Status.EXHAUSTED
    assert find_hamilton_cycle(extremal_parity(4, 2, 12), 2).status is Status.EXHAUSTED


def test_cycle_prechecks():
    assert find_hamilton_cycle(complete(7, 3), 1).reason == "divisibility"
    assert find_hamilton_cycle(new_kgraph(6, 3), 1).exhausted


def test_budget_is_not_exhaustion():
    out = find_hamilton_cycle(extremal_parity(4, 2, 12), 2, SearchBudget(max_nodes=50))
    assert out.status is Status.BUDGET and out.certificate is None
    out = find_hamilton_cycle(extremal_parity(4, 2, 12), 2, SearchBudget(max_millis=1))
    assert out.status in (Status.BUDGET, Status.EXHAUSTED)


def test_search_is_deterministic():
    h = random_kgraph(10, 3, 0.5, 3)
    a, b = find_hamilton_cycle(h, 1), find_hamilton_cycle(h, 1)
    assert a.status == b.status and a.certificate == b.certificate


def test_parallel_agrees_with_serial():
    for seed in range(3):
        h = random_kgraph(8, 3, 0.35, seed)
        serial = find_hamilton_cycle(h, 1, count=True)
        par = find_hamilton_cycle(h, 1, SearchBudget(parallel_width=2), count=True)
        assert serial.count == par.count


@pytest.mark.parametrize(
    "n,k,ell,p",
    [(6, 3, 1, 0.5), (7, 3, 2, 0.6), (6, 3, 2, 0.6), (6, 4, 2, 0.5), (8, 5, 3, 0.8), (6, 4, 3, 0.6), (9, 5, 2, 0.8)],
)
def test_count_matches_naive_enumeration(n, k, ell, p):
    # each cycle has 2n/(k-l) sequences: n/(k-l) aligned rotations, two directions
    for seed in range(4):
        h = random_kgraph(n, k, p, seed)
        naive = brute.hamilton_sequences(h, ell)
        out = find_hamilton_cycle(h, ell, count=True)
        assert out.count * 2 * n // (k - ell) == naive
        assert out.found == (naive > 0)
        if out.found:
            assert is_hamilton_cycle_in(h, out.certificate)


def test_path_examples():
    out = find_path_between(complete(10, 3), 1, [0], [5], max_order=9)
    assert out.found and is_path_in(complete(10, 3), out.certificate)
    assert out.certificate.ends() == ((0,), (5,))
    single = new_kgraph(6, 3, [[0, 1, 2]])
    assert find_path_between(single, 1, [3], [4]).exhausted
    with pytest.raises(ValueError):
        find_path_between(complete(6, 3), 1, [0], [0])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_path_search_matches_brute_force(seed):
    rng = random.Random(seed)
    k, ell = rng.choice([(3, 1), (3, 2), (4, 2), (4, 3)])
    h = random_kgraph(8, k, 0.4, seed)
    s, t = rng.sample(range(8), ell), None
    t = rng.sample([v for v in range(8) if v not in s], ell)
    for order in range(k, 9, k - ell):
        if order < 2 * ell:
            continue
        out = find_path_between(h, ell, s, t, max_order=order)
        expect = any(brute.path_exists(h, ell, s, t, r) for r in range(k, order + 1, k - ell) if r >= 2 * ell)
        assert out.found == expect


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_single_edge_fast_path_agrees_with_search(seed):
    rng = random.Random(seed)
    k, ell = rng.choice([(3, 1), (5, 1), (5, 2), (4, 1)])
    n = 9
    h = random_kgraph(n, k, rng.uniform(0.05, 0.5), seed)
    s = rng.sample(range(n), ell)
    t = rng.sample([v for v in range(n) if v not in s], ell)
    fast = connect_single_edge(h, ell, s, t)
    full = find_path_between(h, ell, s, t, max_order=k)
    assert (fast is not None) == full.found
    if fast is not None:
        assert is_path_in(h, fast) and fast.ends() == (tuple(s), tuple(t))


def test_matching_examples():
    out = find_perfect_matching(complete(6, 3))
    assert out.found and is_perfect_matching(complete(6, 3), out.certificate)
    assert find_perfect_matching(extremal_parity(4, 2, 12)).exhausted
    assert find_perfect_matching(complete(7, 3)).reason == "divisibility"
    assert not is_perfect_matching(complete(6, 3), [(0, 1, 2), (2, 3, 4)])


def test_matching_agrees_with_brute_force():
    for seed in range(25):
        h = random_kgraph(9, 3, 0.08, seed)
        assert find_perfect_matching(h).found == brute.has_perfect_matching(h)


def test_matchings_enumerated_once():
    ms = [frozenset(map(frozenset, m)) for m in iter_perfect_matchings(complete(6, 3))]
    assert len(ms) == len(set(ms)) == 10


def test_gadget_copy_examples():
    ap = build_AP(3, 1)
    out = find_gadget_copy(complete(25, 3), ap.host, dict(zip(ap.S, (7, 19))))
    assert out.found
    img = out.certificate
    assert len(set(img)) == ap.host.n and img[ap.S[0]] == 7
    assert all(tuple(sorted(img[u] for u in e)) in complete(25, 3).edges for e in ap.host.edges)
    assert find_gadget_copy(new_kgraph(25, 3), ap.host).exhausted


@pytest.mark.parametrize("seed", range(3))
def test_W_copy_count_matches_brute_force(seed):
    w = build_W(5, 3)
    h = random_kgraph(10, 5, 0.5, seed)
    out = find_gadget_copy(h, w.host, count=True)
    assert out.count == brute.count_embeddings(w.host, h)


def test_anchored_copy_matches_brute_force():
    g = compact_absorber(3, 1)
    for seed in range(6):
        h = random_kgraph(9, 3, 0.25, seed)
        for s in [(0, 1), (2, 7), (4, 8)]:
            anchors = dict(zip(g.S, s))
            assert find_gadget_copy(h, g.host, anchors).found == brute.anchored_embedding_exists(g.host, anchors, h)


def test_greedy_examples():
    h = complete(20, 3)
    out = greedy_extend(h, PathSeq((0, 1, 2), 3, 1), 1, target_order=15)
    assert out is not None and len(out) == 15 and is_path_in(h, out)
    empty = new_kgraph(10, 3)
    assert greedy_extend(empty, PathSeq((0, 1, 2), 3, 1), 1, target_order=5) is None
    ec = extremal_cover(3, 1, 12)
    v1 = range(2)
    stuck = greedy_extend(ec, PathSeq((0, 5, 6), 3, 1), 1, forbidden=v1, target_order=7)
    assert stuck is None
    partial = greedy_extend(ec, PathSeq((0, 5, 6), 3, 1), 1, forbidden=v1, target_order=7, allow_partial=True)
    assert partial.vertices == (0, 5, 6)
