"""Constructive objects: extremal hosts, the W/P/AP/F gadgets, absorption and path colouring."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import ceil
from typing import Mapping, Sequence

from .hgraph import KGraph
from .paths import PathSeq, concat, replace_window, threshold_denominator
from .strings import spanning_path_complete_partite


# ---------------------------------------------------------------------------
# extremal hosts


def parity_class_size(n: int) -> int:
    """Odd size in {n/2-1, n/2, n/2+1} closest to n/2, preferring n/2-1."""
    odd = [a for a in range(n // 2 - 1, n // 2 + 3) if a % 2 and 2 * a >= n - 2 and 2 * a <= n + 2]
    return min(odd, key=lambda a: (abs(2 * a - n), a))


def extremal_parity(k: int, ell: int, n: int) -> KGraph:
    """k-sets meeting a fixed odd class V1 = {0..a-1} in an even number of vertices."""
    if k < 3 or not 1 <= ell <= k - 1:
        raise ValueError(f"need k >= 3 and 1 <= ell <= k-1, got k={k}, ell={ell}")
    if k % (k - ell):
        raise ValueError(f"(k-ell)={k - ell} does not divide k={k}")
    if n % k or n < 3 * k:
        raise ValueError(f"need k | n and n >= 3k, got n={n}, k={k}")
    a = parity_class_size(n)
    edges = [e for e in combinations(range(n), k) if sum(1 for v in e if v < a) % 2 == 0]
    return KGraph(n, k, frozenset(edges))


def cover_class_size(k: int, ell: int, n: int) -> int:
    return ceil(n / threshold_denominator(k, ell)) - 1


def extremal_cover(k: int, ell: int, n: int) -> KGraph:
    """k-sets meeting the small class V1 = {0..a-1}, a = ceil(n/a_kl) - 1."""
    if not 1 <= ell <= k - 1:
        raise ValueError(f"need 1 <= ell <= k-1, got ell={ell}")
    if n % (k - ell):
        raise ValueError(f"(k-ell)={k - ell} does not divide n={n}")
    if n < k:
        raise ValueError(f"need n >= k, got n={n}")
    a = cover_class_size(k, ell, n)
    edges = [e for e in combinations(range(n), k) if e[0] < a]
    return KGraph(n, k, frozenset(edges))


# ---------------------------------------------------------------------------
# W(k, l)


@dataclass(frozen=True)
class WGadget:
    host: KGraph
    X: tuple[int, ...]
    Y: tuple[int, ...]
    Z: tuple[int, ...]
    edge_list: tuple[tuple[int, ...], ...]
    k: int
    ell: int


def build_W(k: int, ell: int) -> WGadget:
    """2l-k+2 edges on 4l-k+2 vertices; edge i is {x1..x_{l+1-i}} + {y1..y_{k-2-l+i}} + {z_i}."""
    if not (2 * ell >= k and ell <= k - 2):
        raise ValueError(f"need k/2 <= ell <= k-2, got k={k}, ell={ell}")
    X = tuple(range(ell))
    Y = tuple(range(ell, 2 * ell))
    nz = 2 * ell - k + 2
    Z = tuple(range(2 * ell, 2 * ell + nz))
    edge_list = []
    for i in range(1, nz + 1):
        e = X[: ell + 1 - i] + Y[: k - 2 - ell + i] + (Z[i - 1],)
        edge_list.append(e)
    host = KGraph(4 * ell - k + 2, k, frozenset(edge_list))
    return WGadget(host, X, Y, Z, tuple(edge_list), k, ell)


# ---------------------------------------------------------------------------
# P(k, l)


@dataclass(frozen=True)
class PGadget:
    host: KGraph
    ends: tuple[tuple[int, ...], tuple[int, ...]]
    paths: tuple[PathSeq, ...]
    class_map: tuple[int, ...]
    W: WGadget


def build_P(k: int, ell: int, seed=None) -> PGadget:
    """4l+1 internally disjoint l-paths between two fixed ordered ends.

    Each path runs through the edges of W(k, l) in order; its i-th segment is a
    spanning path of a complete k-partite k-graph on fresh vertices from the
    classes of edge i. ``class_map[v]`` is the W-vertex whose class holds ``v``.
    With a seed, the W-classes carrying the intermediate ends are drawn at random.
    """
    if not (2 * ell >= k and ell <= k - 1) or k % (k - ell) == 0:
        raise ValueError(f"need k/2 <= ell <= k-1 and (k-ell) not dividing k, got k={k}, ell={ell}")
    w = build_W(k, ell)
    rng = random.Random(seed) if seed is not None else None
    size = k * ell * (k - ell) + 1
    class_map: list[int] = []

    def fresh(wv: int) -> int:
        class_map.append(wv)
        return len(class_map) - 1

    edges = w.edge_list
    t1 = tuple(fresh(x) for x in w.X)
    t2 = tuple(fresh(y) for y in w.Y)
    paths = []
    for _ in range(4 * ell + 1):
        joints = [t1]
        for i in range(len(edges) - 1):
            shared = sorted(set(edges[i]) & set(edges[i + 1]))
            chosen = rng.sample(shared, ell) if rng else shared[:ell]
            joints.append(tuple(fresh(wv) for wv in chosen))
        joints.append(t2)
        path = None
        for i, e in enumerate(edges):
            beg, end = joints[i], joints[i + 1]
            classes = []
            for wv in sorted(e):
                members = [v for v in beg + end if class_map[v] == wv]
                members += [fresh(wv) for _ in range(size - len(members))]
                classes.append(members)
            seg = spanning_path_complete_partite(classes, beg, end, k, ell)
            path = seg if path is None else concat(path, seg)
        paths.append(path)
    all_edges = {tuple(sorted(e)) for p in paths for e in p.edges()}
    host = KGraph(len(class_map), k, frozenset(all_edges))
    return PGadget(host, (t1, t2), tuple(paths), tuple(class_map), w)


# ---------------------------------------------------------------------------
# absorbers


@dataclass(frozen=True)
class Absorber:
    """Two l-paths P (on X) and Q (on X + S) with the same ordered ends.

    Replacing an aligned copy of P inside a longer path by the matching copy
    of Q inserts the (k-l)-set S without disturbing the rest of the path.
    """

    host: KGraph
    S: tuple[int, ...]
    P: PathSeq
    Q: PathSeq
    classes: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def X(self) -> frozenset[int]:
        return frozenset(self.P.vertices)

    @property
    def ends(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.P.ends()

    @property
    def b(self) -> int:
        return self.host.n - len(self.S)


def build_AP(k: int, ell: int) -> Absorber:
    """The k-partite absorbing gadget on k classes of size k l (k-l) + 1."""
    m = k - ell
    if not 1 <= ell <= k - 1 or k % m == 0:
        raise ValueError(f"need 1 <= ell <= k-1 and (k-ell) not dividing k, got k={k}, ell={ell}")
    size = k * ell * m + 1
    classes = [list(range(i * size, (i + 1) * size)) for i in range(k)]
    S = tuple(classes[ell + i][-1] for i in range(m))
    pools = [iter(v for v in cl if v not in S) for cl in classes]
    order = k * size - m
    P = PathSeq(tuple(next(pools[j % k]) for j in range(order)), k, ell)
    beg, end = P.ends()
    Q = list(spanning_path_complete_partite(classes, beg, end, k, ell).vertices)

    class_of = {v: i for i, cl in enumerate(classes) for v in cl}
    prev = -k
    for s in S:
        target = next(
            j for j in range(max(prev + k, ell), len(Q) - ell) if class_of[Q[j]] == class_of[s]
        )
        cur = Q.index(s)
        Q[cur], Q[target] = Q[target], Q[cur]
        prev = target
    Q = PathSeq(tuple(Q), k, ell)

    edges = {tuple(sorted(e)) for e in P.edges() + Q.edges()}
    host = KGraph(k * size, k, frozenset(edges))
    return Absorber(host, S, P, Q, tuple(tuple(cl) for cl in classes))


def compact_absorber(k: int, ell: int) -> Absorber:
    """Smallest insertion absorber: P = x1..xr, Q = P's first end, then S, then the rest of P.

    r is the least order with r >= max(k, 2l) and r = k mod (k-l), so P has
    disjoint ends. Fits hosts far smaller than the k-partite gadget.
    """
    m = k - ell
    if not 1 <= ell <= k - 1:
        raise ValueError(f"need 1 <= ell <= k-1, got ell={ell}")
    r = k
    while r < 2 * ell:
        r += m
    xs = tuple(range(r))
    S = tuple(range(r, r + m))
    P = PathSeq(xs, k, ell)
    Q = PathSeq(xs[:ell] + S + xs[ell:], k, ell)
    edges = {tuple(sorted(e)) for e in P.edges() + Q.edges()}
    return Absorber(KGraph(r + m, k, frozenset(edges)), S, P, Q)


def absorb(host_path: PathSeq, gadget: Absorber, embedding: Mapping[int, int] | Sequence[int]) -> PathSeq:
    """Swap the embedded copy of the gadget's P inside ``host_path`` for the copy of Q.

    ``embedding`` maps gadget vertices to host vertices. The copy of P must sit
    in ``host_path`` at a position divisible by k-l (forwards or reversed), and
    the image of S must avoid ``host_path``.
    """
    img = embedding.__getitem__
    s_img = [img(v) for v in gadget.S]
    if set(s_img) & set(host_path.vertices):
        raise ValueError("absorbed set meets the host path")
    old = [img(v) for v in gadget.P.vertices]
    new = [img(v) for v in gadget.Q.vertices]
    out = replace_window(host_path.vertices, old, new, host_path.step)
    return PathSeq(tuple(out), host_path.k, host_path.ell)


# ---------------------------------------------------------------------------
# colouring and F(k, l)


@dataclass(frozen=True)
class Colouring:
    colour: dict[int, int]
    a: int

    def class_sizes(self, k: int) -> list[int]:
        sizes = [0] * k
        for c in self.colour.values():
            sizes[c - 1] += 1
        return sizes


def colour_path(p: PathSeq) -> Colouring:
    """Proper k-colouring with colour k on the 1-based positions k, k+a, k+2a, ...;
    the remaining vertices are coloured 1..k-1 cyclically in path order."""
    k, a = p.k, threshold_denominator(p.k, p.ell)
    colour: dict[int, int] = {}
    nxt = 0
    for j, v in enumerate(p.vertices, start=1):
        if j >= k and (j - k) % a == 0:
            colour[v] = k
        else:
            colour[v] = nxt + 1
            nxt = (nxt + 1) % (k - 1)
    return Colouring(colour, a)


def is_proper(colouring: Colouring, edges) -> bool:
    return all(len({colouring.colour[v] for v in e}) == len(e) for e in edges)


def f_parts(k: int, ell: int) -> tuple[list[list[int]], list[int]]:
    """Vertex blocks A_1..A_{a-1} and B of F(k, l), each of size k-1."""
    a = threshold_denominator(k, ell)
    blocks = [list(range(i * (k - 1), (i + 1) * (k - 1))) for i in range(a)]
    return blocks[:-1], blocks[-1]


def build_F(k: int, ell: int) -> KGraph:
    """Edges A_i + {b} for every block A_i and every b in B."""
    A, B = f_parts(k, ell)
    edges = [tuple(Ai) + (b,) for Ai in A for b in B]
    return KGraph(threshold_denominator(k, ell) * (k - 1), k, frozenset(edges))
