from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellcycle.hgraph import PartiteHost, PartiteSpec, complete_partite
from ellcycle.paths import is_path_in
from ellcycle.strings import aligned_windows_distinct, bubble_schedule, spanning_path_complete_partite, spanning_word, string_S

VALID = [(k, ell) for k in range(3, 7) for ell in range(1, k) if k % (k - ell)]


def test_string_S_hand_example():
    w = string_S((1, 2, 3), (2, 1, 3), 3, 1)
    assert "".join(map(str, w)) == "123213213"
    assert [w[s : s + 3] for s in range(0, 7, 2)] == [[1, 2, 3], [3, 2, 1], [1, 3, 2], [2, 1, 3]]


def test_string_S_identical_orderings():
    assert string_S("abcde", "abcde", 5, 3) == list("abcde") * 3


def test_string_S_rejects_divisible_case():
    with pytest.raises(ValueError):
        string_S((1, 2, 3, 4), (2, 1, 3, 4), 4, 2)
    with pytest.raises(ValueError):
        string_S((1, 2, 3), (3, 2, 1), 3, 1)


@pytest.mark.parametrize("k,ell", VALID)
def test_string_S_every_adjacent_swap(k, ell):
    base = list(range(k))
    for i in range(k - 1):
        b = base[:]
        b[i], b[i + 1] = b[i + 1], b[i]
        w = string_S(base, b, k, ell)
        assert len(w) == k * (k - ell + 1)
        assert w[:k] == base and w[-k:] == b
        assert aligned_windows_distinct(w, k, ell)


@settings(max_examples=50, deadline=None)
@given(st.permutations(range(6)), st.permutations(range(6)))
def test_bubble_schedule_is_adjacent_and_short(c, d):
    steps = bubble_schedule(c, d)
    assert steps[0] == list(c) and steps[-1] == list(d)
    assert len(steps) - 1 <= 15
    for a, b in zip(steps, steps[1:]):
        assert sum(x != y for x, y in zip(a, b)) == 2


@pytest.mark.parametrize("k,ell", VALID)
def test_spanning_word(k, ell):
    # targets as used by the construction: l letters moved to the back, at most k*l swaps
    rng = random.Random(k * 10 + ell)
    c = list(range(k))
    tail = rng.sample(c, ell)
    d = [x for x in c if x not in tail] + tail
    w = spanning_word(c, d, k, ell)
    assert len(w) == k * k * ell * (k - ell) + k
    assert w[:k] == c and w[-k:] == d
    assert aligned_windows_distinct(w, k, ell)


def test_spanning_word_rejects_long_schedules():
    with pytest.raises(ValueError):
        spanning_word([0, 1, 2, 3, 4], [4, 3, 2, 1, 0], 5, 1)


@pytest.mark.parametrize("k,ell,size,order", [(3, 1, 7, 21), (4, 1, 13, 52), (5, 3, 31, 155)])
def test_spanning_path_sizes(k, ell, size, order):
    spec = PartiteSpec((size,) * k)
    host = PartiteHost(spec, k)
    classes = spec.classes()
    beg = tuple(classes[i][0] for i in range(ell))
    end = tuple(classes[k - 1 - i][1] for i in range(ell))
    p = spanning_path_complete_partite(spec, beg, end, k, ell)
    assert len(p) == order and set(p.vertices) == set(range(spec.n))
    assert p.ends() == (beg, end)
    assert is_path_in(host, p)
    if (k, ell) == (3, 1):
        assert len(p.edges()) == 10


def test_partite_host_matches_explicit_graph():
    spec = PartiteSpec((3, 2, 4, 1))
    explicit = complete_partite(spec, 3)
    implicit = PartiteHost(spec, 3)
    assert all((e in implicit) == (e in explicit) for e in combinations(range(spec.n), 3))


def test_unit_step_rejected():
    # k-l = 1 divides every k, so tight paths are outside the construction
    with pytest.raises(ValueError):
        spanning_path_complete_partite(PartiteSpec((13,) * 4), (0, 13, 26), (12, 25, 38), 4, 3)


def test_spanning_path_input_errors():
    spec = PartiteSpec((7, 7, 7))
    with pytest.raises(ValueError):
        spanning_path_complete_partite(spec, (0,), (0,), 3, 1)
    with pytest.raises(ValueError):
        spanning_path_complete_partite(PartiteSpec((6, 7, 7)), (0,), (8,), 3, 1)
    with pytest.raises(ValueError):
        spanning_path_complete_partite(PartiteSpec((13,) * 4), (0, 1), (20, 40), 4, 2)
    with pytest.raises(ValueError):
        spanning_path_complete_partite(PartiteSpec((31,) * 5), (0, 1, 40), (70, 100, 140), 5, 3)
