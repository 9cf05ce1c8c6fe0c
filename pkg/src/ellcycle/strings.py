"""Spanning l-paths of complete k-partite k-graphs via words over the class alphabet.

A word lists, position by position, which vertex class the next path vertex is
drawn from. If every aligned window of k characters is free of repeats, any
class-respecting assignment of vertices to the word is an l-path in the
complete k-partite host.
"""

from __future__ import annotations

from typing import Sequence

from .hgraph import PartiteSpec
from .paths import PathSeq


def _adjacent_swap(a: Sequence, b: Sequence) -> int | None:
    """1-based position i such that ``b`` is ``a`` with entries i, i+1 swapped; None if identical."""
    diff = [j for j in range(len(a)) if a[j] != b[j]]
    if not diff:
        return None
    if len(diff) != 2 or diff[1] != diff[0] + 1 or a[diff[0]] != b[diff[1]] or a[diff[1]] != b[diff[0]]:
        raise ValueError(f"orderings {list(a)} and {list(b)} are neither identical nor adjacent")
    return diff[0] + 1


def _check_ordering(order: Sequence, k: int) -> None:
    if len(order) != k or len(set(order)) != k:
        raise ValueError(f"{list(order)} is not an ordering of a {k}-letter alphabet")


def string_S(a_ord: Sequence, b_ord: Sequence, k: int, ell: int) -> list:
    """Word of length k(k-l+1) that starts with ``a_ord``, ends with ``b_ord`` and
    has no repeated character in any window at positions r(k-l)+1 .. r(k-l)+k.

    ``a_ord`` and ``b_ord`` must be identical or differ by one adjacent swap.
    """
    m = k - ell
    if not 1 <= ell <= k - 1:
        raise ValueError(f"need 1 <= ell <= k-1, got ell={ell}")
    if k % m == 0:
        raise ValueError(f"(k-ell) divides k for k={k}, ell={ell}; no valid word exists")
    _check_ordering(a_ord, k)
    _check_ordering(b_ord, k)
    if sorted(a_ord) != sorted(b_ord):
        raise ValueError("orderings use different alphabets")
    i = _adjacent_swap(a_ord, b_ord)
    if i is None:
        return list(a_ord) * (m + 1)
    p = 1 if i % m else 2
    return list(a_ord) * p + list(b_ord) * (m + 1 - p)


def aligned_windows_distinct(word: Sequence, k: int, ell: int) -> bool:
    m = k - ell
    return all(len(set(word[s : s + k])) == k for s in range(0, len(word) - k + 1, m))


def bubble_schedule(c: Sequence, d: Sequence) -> list[list]:
    """Orderings from ``c`` to ``d``, consecutive ones adjacent.

    Targets of ``d`` are fixed left to right, each bubbled into place.
    """
    cur = list(c)
    out = [list(cur)]
    for j, ch in enumerate(d):
        pos = cur.index(ch)
        while pos > j:
            cur[pos - 1], cur[pos] = cur[pos], cur[pos - 1]
            pos -= 1
            out.append(list(cur))
    return out


def spanning_word(c: Sequence, d: Sequence, k: int, ell: int) -> list:
    """Word of length k^2 l (k-l) + k from ordering ``c`` to ordering ``d``."""
    m = k - ell
    steps = bubble_schedule(c, d)
    if len(steps) - 1 > k * ell:
        raise ValueError(f"{len(steps) - 1} swaps needed, more than k*ell={k * ell}")
    steps += [steps[-1]] * (k * ell + 1 - len(steps))
    word: list = []
    last = k * ell - 1
    for i in range(k * ell):
        s = string_S(steps[i], steps[i + 1], k, ell)
        word.extend(s if i == last else s[:-k])
    assert len(word) == k * k * ell * m + k
    return word


def spanning_path_complete_partite(
    classes: PartiteSpec | Sequence[Sequence[int]],
    pbeg: Sequence[int],
    pend: Sequence[int],
    k: int,
    ell: int,
) -> PathSeq:
    """l-path from ``pbeg`` to ``pend`` through every vertex of K[V1..Vk].

    ``classes`` gives the k vertex classes, each of size k*l*(k-l)+1 (a
    :class:`PartiteSpec` is laid out from vertex 0). Both ends must be disjoint
    and meet every class at most once.
    """
    if isinstance(classes, PartiteSpec):
        classes = classes.classes()
    classes = [list(cl) for cl in classes]
    m = k - ell
    if k % m == 0:
        raise ValueError(f"(k-ell) divides k for k={k}, ell={ell}")
    if len(classes) != k:
        raise ValueError(f"need exactly k={k} classes, got {len(classes)}")
    size = k * ell * m + 1
    if any(len(cl) != size for cl in classes):
        raise ValueError(f"every class must have k*ell*(k-ell)+1 = {size} vertices")
    class_of = {v: i for i, cl in enumerate(classes) for v in cl}
    if len(class_of) != k * size:
        raise ValueError("classes are not disjoint")
    pbeg, pend = list(pbeg), list(pend)
    for name, end in (("start", pbeg), ("final", pend)):
        if len(end) != ell:
            raise ValueError(f"{name} end must have ell={ell} vertices")
        if any(v not in class_of for v in end):
            raise ValueError(f"{name} end has a vertex outside the classes")
        if len({class_of[v] for v in end}) != ell:
            raise ValueError(f"{name} end meets some class twice")
    if set(pbeg) & set(pend):
        raise ValueError("ends are not disjoint")

    beg_cls = [class_of[v] for v in pbeg]
    c = beg_cls + [i for i in range(k) if i not in beg_cls]
    end_cls = [class_of[v] for v in pend]
    d = [i for i in c if i not in end_cls] + end_cls
    word = spanning_word(c, d, k, ell)

    fixed = set(pbeg) | set(pend)
    pools = [[v for v in cl if v not in fixed] for cl in classes]
    pools = [iter(p) for p in pools]
    body = [next(pools[ch]) for ch in word[ell:-ell]]
    return PathSeq(tuple(pbeg + body + pend), k, ell)
