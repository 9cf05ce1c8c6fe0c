"""k-uniform hypergraphs on dense integer vertices."""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from math import comb
from pathlib import Path
from typing import Iterable, Sequence


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def iter_bits(mask: int):
    """Yield set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class KGraph:
    """An immutable k-graph on vertices ``0..n-1``.

    Edges are stored as sorted tuples; duplicates are dropped silently.
    """

    n: int
    k: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.k, int):
            raise TypeError("n and k must be integers")
        if self.k < 2:
            raise ValueError(f"uniformity must be at least 2, got k={self.k}")
        if self.k > self.n:
            raise ValueError(f"uniformity k={self.k} exceeds vertex count n={self.n}")
        canon = set()
        for e in self.edges:
            t = tuple(sorted(int(v) for v in e))
            if len(t) != self.k:
                raise ValueError(f"edge {list(e)} does not have exactly {self.k} vertices")
            if len(set(t)) != self.k:
                raise ValueError(f"edge {list(e)} repeats a vertex")
            if t[0] < 0 or t[-1] >= self.n:
                raise ValueError(f"edge {list(e)} has a vertex outside [0, {self.n})")
            canon.add(t)
        object.__setattr__(self, "edges", frozenset(canon))

    def __eq__(self, other):
        if not isinstance(other, KGraph):
            return NotImplemented
        return (self.n, self.k, self.edges) == (other.n, other.k, other.edges)

    def __hash__(self):
        return hash((self.n, self.k, self.edges))

    def __repr__(self):
        return f"KGraph(n={self.n}, k={self.k}, m={len(self.edges)})"

    def __contains__(self, edge) -> bool:
        return tuple(sorted(edge)) in self.edges

    def __len__(self) -> int:
        return self.n

    @property
    def vertices(self) -> range:
        return range(self.n)

    def sorted_edges(self) -> list[tuple[int, ...]]:
        return sorted(self.edges)

    @cached_property
    def edge_masks(self) -> frozenset[int]:
        return frozenset(to_mask(e) for e in self.edges)

    @cached_property
    def ext(self) -> dict[int, int]:
        """Map a vertex-set mask ``T`` (|T| < k) to the mask of vertices ``v``
        outside ``T`` such that ``T + v`` lies inside some edge.

        For |T| = k-1 this is exactly the set of vertices completing T to an edge.
        """
        table: dict[int, int] = {}
        for e in self.edges:
            emask = to_mask(e)
            for size in range(self.k):
                for sub in combinations(e, size):
                    smask = to_mask(sub)
                    table[smask] = table.get(smask, 0) | (emask & ~smask)
        return table

    @cached_property
    def incident_masks(self) -> list[list[int]]:
        """``incident_masks[v]`` lists masks of edges containing ``v``, in sorted edge order."""
        out: list[list[int]] = [[] for _ in range(self.n)]
        for e in self.sorted_edges():
            m = to_mask(e)
            for v in e:
                out[v].append(m)
        return out

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_dict(cls, data: dict) -> "KGraph":
        try:
            return cls(int(data["n"]), int(data["k"]), frozenset(tuple(e) for e in data["edges"]))
        except KeyError as exc:
            raise ValueError(f"graph JSON is missing field {exc}") from None


def new_kgraph(n: int, k: int, edges: Iterable[Sequence[int]] = ()) -> KGraph:
    return KGraph(n, k, frozenset(tuple(e) for e in edges))


def dump_graph(h: KGraph, path) -> None:
    Path(path).write_text(json.dumps(h.to_dict()) + "\n")


def load_graph(path) -> KGraph:
    return KGraph.from_dict(json.loads(Path(path).read_text()))


def _check_query(h: KGraph, a) -> int:
    a = set(a)
    if len(a) >= h.k:
        raise ValueError(f"query set has {len(a)} vertices; degree needs fewer than k={h.k}")
    if any(v < 0 or v >= h.n for v in a):
        raise ValueError("query set has a vertex out of range")
    return to_mask(a)


def degree(h: KGraph, a: Iterable[int]) -> int:
    """Number of edges of ``h`` containing ``a``."""
    am = _check_query(h, a)
    return sum(1 for e in h.edge_masks if e & am == am)


def neighbourhood(h: KGraph, a: Iterable[int]) -> set[tuple[int, ...]]:
    """All sets B disjoint from ``a`` with ``a | B`` an edge, as sorted tuples."""
    a = set(a)
    _check_query(h, a)
    return {tuple(v for v in e if v not in a) for e in h.edges if a.issubset(e)}


def min_codegree(h: KGraph) -> int:
    """Minimum degree over all (k-1)-subsets of the vertex set."""
    counts: Counter = Counter()
    for e in h.edges:
        for sub in combinations(e, h.k - 1):
            counts[sub] += 1
    if len(counts) < comb(h.n, h.k - 1):
        return 0
    return min(counts.values())


def restrict(h: KGraph, vs: Iterable[int]) -> tuple[KGraph, list[int]]:
    """Induced sub-k-graph on ``vs``, relabelled to ``0..|vs|-1``.

    Returns the subgraph and ``labels`` with ``labels[i]`` the original vertex of
    new vertex ``i``. With fewer than k vertices the result is edgeless and is
    padded with isolated vertices up to k (``labels`` stays unpadded).
    """
    labels = sorted(set(vs))
    if any(v < 0 or v >= h.n for v in labels):
        raise ValueError("restriction set has a vertex out of range")
    index = {v: i for i, v in enumerate(labels)}
    keep = set(labels)
    edges = [tuple(index[v] for v in e) for e in h.edges if keep.issuperset(e)]
    return KGraph(max(len(labels), h.k), h.k, frozenset(edges)), labels


@dataclass(frozen=True)
class PartiteSpec:
    """Class sizes of a vertex partition laid out consecutively from 0."""

    class_sizes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "class_sizes", tuple(int(s) for s in self.class_sizes))
        if not self.class_sizes or any(s < 1 for s in self.class_sizes):
            raise ValueError("class sizes must be positive")

    @property
    def n(self) -> int:
        return sum(self.class_sizes)

    def classes(self) -> list[list[int]]:
        out, start = [], 0
        for s in self.class_sizes:
            out.append(list(range(start, start + s)))
            start += s
        return out

    def class_of(self) -> list[int]:
        return [i for i, s in enumerate(self.class_sizes) for _ in range(s)]


def complete_partite(spec: PartiteSpec | Sequence[int], k: int) -> KGraph:
    """Complete s-partite k-graph: all k-sets meeting every class at most once."""
    if not isinstance(spec, PartiteSpec):
        spec = PartiteSpec(tuple(spec))
    classes = spec.classes()
    if len(classes) < k:
        raise ValueError(f"need at least k={k} classes, got {len(classes)}")
    edges = []
    for chosen in combinations(classes, k):
        edges.extend(product(*chosen))
    return KGraph(spec.n, k, frozenset(edges))


@dataclass(frozen=True)
class PartiteHost:
    """Complete s-partite k-graph answering edge membership without listing edges.

    Stands in for :func:`complete_partite` in membership checks when the edge
    set is too large to materialize.
    """

    spec: PartiteSpec
    k: int

    def __post_init__(self):
        if len(self.spec.class_sizes) < self.k:
            raise ValueError(f"need at least k={self.k} classes, got {len(self.spec.class_sizes)}")

    @property
    def n(self) -> int:
        return self.spec.n

    @cached_property
    def _class_of(self) -> list[int]:
        return self.spec.class_of()

    def __contains__(self, edge) -> bool:
        e = set(edge)
        if len(e) != self.k or any(not 0 <= v < self.n for v in e):
            return False
        return len({self._class_of[v] for v in e}) == self.k


def complete(n: int, k: int) -> KGraph:
    return KGraph(n, k, frozenset(combinations(range(n), k)))


def random_kgraph(n: int, k: int, p: float, seed=None) -> KGraph:
    """Binomial random k-graph; each k-set is an edge with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    edges = [e for e in combinations(range(n), k) if rng.random() < p]
    return KGraph(n, k, frozenset(edges))


def raise_codegree(h: KGraph, level: int, seed=None) -> KGraph:
    """Add random edges until every (k-1)-set lies in at least ``level`` edges.

    Each step picks a (k-1)-set of currently minimum codegree uniformly at
    random and joins it to a uniformly random vertex it does not yet span an
    edge with.
    """
    if not 0 <= level <= h.n - h.k + 1:
        raise ValueError(f"codegree level must lie in [0, n-k+1], got {level}")
    rng = random.Random(seed)
    edges = set(h.edges)
    counts = {s: 0 for s in combinations(range(h.n), h.k - 1)}
    for e in edges:
        for s in combinations(e, h.k - 1):
            counts[s] += 1
    while True:
        low = min(counts.values())
        if low >= level:
            break
        s = rng.choice([t for t, c in counts.items() if c == low])
        options = [v for v in range(h.n) if v not in s and tuple(sorted(s + (v,))) not in edges]
        e = tuple(sorted(s + (rng.choice(options),)))
        edges.add(e)
        for t in combinations(e, h.k - 1):
            counts[t] += 1
    return KGraph(h.n, h.k, frozenset(edges))
