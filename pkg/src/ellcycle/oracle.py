"""Exact backtracking search: Hamilton l-cycles, l-paths between ordered ends,
perfect matchings and gadget embeddings, plus greedy path extension.

Every search places vertices one position at a time. A position's candidates
are the unused vertices ``v`` such that, for every window still containing it,
the already-placed part of the window plus ``v`` fits inside some edge
(``KGraph.ext``). Positions where a window closes are memoised on the used set
and the placed vertices that later windows still depend on, so a sub-search is
never repeated.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .hgraph import KGraph, iter_bits, to_mask
from .paths import CycleSeq, PathSeq


class Status(str, Enum):
    FOUND = "found"
    EXHAUSTED = "exhausted"
    BUDGET = "budget_exceeded"


@dataclass(frozen=True)
class SearchBudget:
    """Node and wall-clock limits; ``None`` means unlimited."""

    max_nodes: int | None = None
    max_millis: float | None = None
    parallel_width: int = 1

    def __post_init__(self):
        if self.max_nodes is not None and self.max_nodes <= 0:
            raise ValueError("max_nodes must be positive")
        if self.max_millis is not None and self.max_millis <= 0:
            raise ValueError("max_millis must be positive")
        if self.parallel_width < 1:
            raise ValueError("parallel_width must be at least 1")


UNLIMITED = SearchBudget()


@dataclass
class SearchOutcome:
    status: Status
    certificate: object = None
    nodes: int = 0
    elapsed: float = 0.0
    reason: str = ""
    count: int | None = None

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND

    @property
    def exhausted(self) -> bool:
        return self.status is Status.EXHAUSTED

    def to_dict(self) -> dict:
        cert = self.certificate
        if hasattr(cert, "to_dict"):
            cert = cert.to_dict()
        out = {
            "status": self.status.value,
            "certificate": cert,
            "nodes": self.nodes,
            "elapsed_ms": round(self.elapsed, 3),
            "reason": self.reason,
        }
        if self.count is not None:
            out["count"] = self.count
            out["complete"] = self.status is not Status.BUDGET
        return out


class _OutOfBudget(Exception):
    pass


class _Clock:
    def __init__(self, budget: SearchBudget):
        self.max_nodes = budget.max_nodes
        self.deadline = None if budget.max_millis is None else time.perf_counter() + budget.max_millis / 1000
        self.nodes = 0
        self.start = time.perf_counter()

    def tick(self) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise _OutOfBudget
        if self.deadline is not None and not self.nodes & 1023 and time.perf_counter() > self.deadline:
            raise _OutOfBudget

    @property
    def millis(self) -> float:
        return (time.perf_counter() - self.start) * 1000


def _layout(length: int, windows: list[list[int]]):
    """For each position, the earlier positions of each window through it, and
    the positions later windows still need once it is placed."""
    constraints: list[list[tuple[int, ...]]] = [[] for _ in range(length)]
    for w in windows:
        for p in w:
            constraints[p].append(tuple(q for q in w if q < p))
    # dedupe identical constraints and drop ones implied by a superset
    for p in range(length):
        cs = sorted(set(constraints[p]), key=len, reverse=True)
        kept: list[tuple[int, ...]] = []
        for c in cs:
            if not any(set(c) <= set(o) for o in kept):
                kept.append(c)
        constraints[p] = kept
    closing = {max(w) for w in windows}
    frontier: list[tuple[int, ...] | None] = []
    for p in range(length):
        if p in closing:
            need = sorted({q for w in windows if max(w) > p for q in w if q <= p})
            frontier.append(tuple(need))
        else:
            frontier.append(None)
    return constraints, frontier


# ---------------------------------------------------------------------------
# Hamilton l-cycles


def cycle_phase_partner(phase: int, k: int, ell: int) -> int:
    """Window phase of the reversed orientation of a cycle written from vertex 0."""
    return (1 - ell - phase) % (k - ell)


class _CycleSearch:
    def __init__(self, h: KGraph, ell: int, count: bool):
        self.h, self.ell, self.count_mode = h, ell, count
        self.k, self.n, self.m = h.k, h.n, h.k - ell
        self.ext = h.ext
        self.memo: dict = {}
        self.layouts = {}
        for phase in range(self.m):
            wins = [[(s + j) % self.n for j in range(self.k)] for s in range(phase, self.n, self.m)]
            self.layouts[phase] = _layout(self.n, wins)

    def branches(self) -> list[tuple[int, int]]:
        """Top-level (phase, second vertex) choices in search order."""
        out = []
        for phase in range(self.m):
            if cycle_phase_partner(phase, self.k, self.ell) < phase:
                continue
            out.extend((phase, v) for v in range(1, self.n))
        return out

    def run(self, branches: Iterable[tuple[int, int]], clock: _Clock):
        total = 0
        self.first = None
        self.clock = clock
        for phase, second in branches:
            self.phase = phase
            self.oriented = cycle_phase_partner(phase, self.k, self.ell) == phase
            self.constraints, self.frontier = self.layouts[phase]
            self.seq = [0] * self.n
            if not (self._fits(0) and self._fits(1, second)):
                continue
            self.seq[1] = second
            total += self._dfs(2, 1 | (1 << second))
            if self.first is not None and not self.count_mode:
                break
        return total, self.first

    def _fits(self, p: int, v: int = 0) -> bool:
        seq, ext = self.seq, self.ext
        for c in self.constraints[p]:
            tm = 0
            for q in c:
                tm |= 1 << seq[q]
            if not (ext.get(tm, 0) >> v) & 1:
                return False
        return True

    def _dfs(self, p: int, used: int) -> int:
        n, seq = self.n, self.seq
        if p == n:
            if self.first is None:
                self.first = (self.phase, list(seq))
            return 1
        key = None
        front = self.frontier[p - 1]
        if front is not None:
            key = (self.phase, p, used, tuple(seq[q] for q in front), seq[1] if self.oriented else -1)
            hit = self.memo.get(key)
            if hit is not None:
                return hit
        ext = self.ext
        cand = ((1 << n) - 1) & ~used
        for c in self.constraints[p]:
            tm = 0
            for q in c:
                tm |= 1 << seq[q]
            cand &= ext.get(tm, 0)
            if not cand:
                break
        if p == n - 1 and self.oriented:
            cand &= ~((1 << (seq[1] + 1)) - 1)
        total = 0
        while cand:
            low = cand & -cand
            cand ^= low
            v = low.bit_length() - 1
            self.clock.tick()
            seq[p] = v
            got = self._dfs(p + 1, used | low)
            if got:
                total += got
                if not self.count_mode:
                    return total
        if key is not None:
            self.memo[key] = total
        return total


def _cycle_worker(args):
    h, ell, count, branch, budget = args
    search = _CycleSearch(h, ell, count)
    clock = _Clock(budget)
    try:
        total, found = search.run([branch], clock)
    except _OutOfBudget:
        return None, None, clock.nodes
    return total, found, clock.nodes


def _cycle_precheck(h: KGraph, ell: int) -> str:
    k, n = h.k, h.n
    if not 1 <= ell <= k - 1:
        raise ValueError(f"need 1 <= ell <= k-1, got ell={ell}")
    if n % (k - ell):
        return "divisibility"
    if n < 2 * k - ell:
        return "too_few_vertices"
    if not h.edges:
        return "no_edges"
    return ""


def find_hamilton_cycle(h: KGraph, ell: int, budget: SearchBudget = UNLIMITED, count: bool = False) -> SearchOutcome:
    """Exhaustive search for a Hamilton l-cycle of ``h``.

    Cycles are enumerated once per class of vertex sequences equivalent under
    rotation by multiples of k-l and reversal: vertex 0 comes first, each window
    phase is tried, and orientation is fixed by comparing the second and last
    vertex whenever reversal keeps the phase. With ``count=True`` the number of
    such classes is reported in ``count``; the certificate is then the first one
    in search order.
    """
    t0 = time.perf_counter()
    reason = _cycle_precheck(h, ell)
    if reason:
        return SearchOutcome(Status.EXHAUSTED, None, 0, 0.0, reason, 0 if count else None)
    search = _CycleSearch(h, ell, count)
    branches = search.branches()
    nodes = 0
    if budget.parallel_width > 1:
        results = []
        with ProcessPoolExecutor(budget.parallel_width) as pool:
            jobs = [(h, ell, count, b, budget) for b in branches]
            results = list(pool.map(_cycle_worker, jobs))
        total, found, exceeded = 0, None, False
        for t, f, nd in results:
            nodes += nd
            if t is None:
                exceeded = True
                continue
            total += t
            if f is not None and found is None:
                found = f
                if not count:
                    break
    else:
        clock = _Clock(budget)
        exceeded = False
        try:
            total, found = search.run(branches, clock)
        except _OutOfBudget:
            exceeded, total, found = True, None, None
        nodes = clock.nodes
    elapsed = (time.perf_counter() - t0) * 1000
    cert = None
    if found is not None:
        phase, seq = found
        cert = CycleSeq(tuple(seq[phase:] + seq[:phase]), h.k, ell)
    if cert is not None and not count:
        return SearchOutcome(Status.FOUND, cert, nodes, elapsed)
    if exceeded:
        return SearchOutcome(Status.BUDGET, cert, nodes, elapsed, "budget", total if count else None)
    status = Status.FOUND if cert is not None else Status.EXHAUSTED
    return SearchOutcome(status, cert, nodes, elapsed, "", total if count else None)


# ---------------------------------------------------------------------------
# l-paths between ordered ends


class _PathSearch:
    def __init__(self, h: KGraph, ell: int, clock: _Clock):
        self.h, self.ell, self.k, self.m = h, ell, h.k, h.k - ell
        self.ext = h.ext
        self.clock = clock

    def search(self, r: int, s: Sequence[int], t: Sequence[int], allowed: int) -> list[int] | None:
        k, m, ell = self.k, self.m, self.ell
        wins = [list(range(st, st + k)) for st in range(0, r - k + 1, m)]
        self.constraints, self.frontier = _layout(r, wins)
        self.r = r
        self.fixed = {r - ell + j: v for j, v in enumerate(t)}
        self.allowed = allowed & ~to_mask(t)
        self.memo: dict = {}
        self.seq = list(s) + [0] * (r - ell)
        if self._dfs(ell, to_mask(s)):
            return list(self.seq)
        return None

    def _dfs(self, p: int, used: int) -> bool:
        if p == self.r:
            return True
        seq = self.seq
        key = None
        front = self.frontier[p - 1]
        if front is not None:
            key = (p, used, tuple(seq[q] for q in front))
            if key in self.memo:
                return False
        forced = self.fixed.get(p)
        cand = (1 << forced) if forced is not None else self.allowed & ~used
        ext = self.ext
        for c in self.constraints[p]:
            tm = 0
            for q in c:
                tm |= 1 << seq[q]
            cand &= ext.get(tm, 0)
            if not cand:
                break
        while cand:
            low = cand & -cand
            cand ^= low
            self.clock.tick()
            seq[p] = low.bit_length() - 1
            if self._dfs(p + 1, used | low):
                return True
        if key is not None:
            self.memo[key] = True
        return False


def path_orders(k: int, ell: int, max_order: int) -> list[int]:
    """Valid orders of an l-path with disjoint ends, up to ``max_order``."""
    m, out, r = k - ell, [], k
    while r <= max_order:
        if r >= 2 * ell:
            out.append(r)
        r += m
    return out


def find_path_between(
    h: KGraph,
    ell: int,
    s: Sequence[int],
    t: Sequence[int],
    max_order: int | None = None,
    budget: SearchBudget = UNLIMITED,
    allowed: Iterable[int] | None = None,
    spanning: bool = False,
) -> SearchOutcome:
    """Shortest l-path of ``h`` from ordered end ``s`` to ordered end ``t``.

    Orders k, k+(k-l), ... up to ``max_order`` (default n) are tried in turn,
    each exhaustively. Interior vertices come from ``allowed`` (default: all).
    With ``spanning=True`` the path must use every vertex of ``allowed``.
    """
    t0 = time.perf_counter()
    k = h.k
    s, t = list(s), list(t)
    if len(s) != ell or len(t) != ell:
        raise ValueError(f"ends must have ell={ell} vertices")
    if len(set(s)) != ell or len(set(t)) != ell:
        raise ValueError("an end repeats a vertex")
    if set(s) & set(t):
        raise ValueError("ends overlap")
    allowed_mask = (1 << h.n) - 1 if allowed is None else to_mask(allowed)
    allowed_mask |= to_mask(s) | to_mask(t)
    if spanning:
        orders = [bin(allowed_mask).count("1")]
        if (orders[0] - k) % (k - ell) or orders[0] < max(k, 2 * ell):
            return SearchOutcome(Status.EXHAUSTED, None, 0, 0.0, "order")
    else:
        orders = path_orders(k, ell, h.n if max_order is None else max_order)
    clock = _Clock(budget)
    search = _PathSearch(h, ell, clock)
    try:
        for r in orders:
            seq = search.search(r, s, t, allowed_mask)
            if seq is not None:
                cert = PathSeq(tuple(seq), k, ell)
                return SearchOutcome(Status.FOUND, cert, clock.nodes, (time.perf_counter() - t0) * 1000)
    except _OutOfBudget:
        return SearchOutcome(Status.BUDGET, None, clock.nodes, (time.perf_counter() - t0) * 1000, "budget")
    return SearchOutcome(Status.EXHAUSTED, None, clock.nodes, (time.perf_counter() - t0) * 1000)


def connect_single_edge(h: KGraph, ell: int, s: Sequence[int], t: Sequence[int], allowed: Iterable[int] | None = None) -> PathSeq | None:
    """One-edge l-path from ``s`` to ``t`` when 2l < k.

    Pads ``s + t`` with k-1-2l further vertices and looks for a vertex completing
    the resulting (k-1)-set to an edge, trying paddings in increasing order.
    """
    k = h.k
    if 2 * ell >= k:
        raise ValueError("single-edge connection needs ell < k/2")
    ends = set(s) | set(t)
    pool = [v for v in (range(h.n) if allowed is None else sorted(set(allowed))) if v not in ends]
    ext = h.ext
    for pad in combinations(pool, k - 1 - 2 * ell):
        base = to_mask(list(s) + list(t) + list(pad))
        cand = ext.get(base, 0) & to_mask(pool) & ~to_mask(pad)
        if cand:
            x = (cand & -cand).bit_length() - 1
            return PathSeq(tuple(s) + pad + (x,) + tuple(t), k, ell)
    return None


# ---------------------------------------------------------------------------
# perfect matchings


def iter_perfect_matchings(h: KGraph, budget: SearchBudget = UNLIMITED, _clock: _Clock | None = None) -> Iterator[list[tuple[int, ...]]]:
    """All perfect matchings, each covering the lowest uncovered vertex first."""
    if h.n % h.k:
        return
    clock = _clock or _Clock(budget)
    full = (1 << h.n) - 1
    inc = h.incident_masks
    dead: set[int] = set()
    chosen: list[int] = []

    def rec(covered: int):
        if covered == full:
            yield [tuple(iter_bits(e)) for e in chosen]
            return
        if covered in dead:
            return
        free = ~covered & full
        v = (free & -free).bit_length() - 1
        any_found = False
        for e in inc[v]:
            if e & covered:
                continue
            clock.tick()
            chosen.append(e)
            for sol in rec(covered | e):
                any_found = True
                yield sol
            chosen.pop()
        if not any_found:
            dead.add(covered)

    yield from rec(0)


def find_perfect_matching(h: KGraph, budget: SearchBudget = UNLIMITED) -> SearchOutcome:
    t0 = time.perf_counter()
    if h.n % h.k:
        return SearchOutcome(Status.EXHAUSTED, None, 0, 0.0, "divisibility")
    clock = _Clock(budget)
    try:
        for matching in iter_perfect_matchings(h, _clock=clock):
            return SearchOutcome(Status.FOUND, matching, clock.nodes, (time.perf_counter() - t0) * 1000)
    except _OutOfBudget:
        return SearchOutcome(Status.BUDGET, None, clock.nodes, (time.perf_counter() - t0) * 1000, "budget")
    return SearchOutcome(Status.EXHAUSTED, None, clock.nodes, (time.perf_counter() - t0) * 1000)


def is_perfect_matching(h: KGraph, matching: Iterable[Sequence[int]]) -> bool:
    seen: set[int] = set()
    for e in matching:
        if tuple(sorted(e)) not in h.edges or seen & set(e):
            return False
        seen |= set(e)
    return len(seen) == h.n


# ---------------------------------------------------------------------------
# gadget embeddings


@dataclass
class _EmbedPlan:
    order: list[int]
    # per step: list of tuples of earlier step indices forming an edge with this vertex
    constraints: list[list[tuple[int, ...]]] = field(default_factory=list)


def _embed_plan(pattern: KGraph, anchored: Sequence[int]) -> _EmbedPlan:
    order = list(anchored)
    placed = set(order)
    rest = [u for u in range(pattern.n) if u not in placed]
    while rest:
        # most edges touching placed vertices first, lowest index on ties
        def score(u):
            return sum(len(placed & set(e)) for e in pattern.edges if u in e)

        u = max(rest, key=lambda u: (score(u), -u))
        order.append(u)
        placed.add(u)
        rest.remove(u)
    pos = {u: i for i, u in enumerate(order)}
    constraints = []
    for i, u in enumerate(order):
        cs = set()
        for e in pattern.edges:
            if u in e:
                cs.add(tuple(sorted(pos[x] for x in e if pos[x] < i)))
        constraints.append(sorted(cs, key=len, reverse=True))
    return _EmbedPlan(order, constraints)


def find_gadget_copy(
    h: KGraph,
    pattern: KGraph,
    anchors: Mapping[int, int] | None = None,
    budget: SearchBudget = UNLIMITED,
    count: bool = False,
    candidates: Mapping[int, Iterable[int]] | None = None,
) -> SearchOutcome:
    """Injective map of ``pattern`` vertices into ``h`` sending every pattern edge to an edge.

    ``anchors`` pins some pattern vertices; ``candidates`` restricts the images
    of others. The certificate is a list with ``cert[u]`` the image of pattern
    vertex ``u``. With ``count=True`` all embeddings are counted.
    """
    t0 = time.perf_counter()
    if pattern.k != h.k:
        raise ValueError("pattern and host uniformities differ")
    anchors = dict(anchors or {})
    if len(set(anchors.values())) != len(anchors):
        raise ValueError("anchors are not injective")
    if pattern.n > h.n:
        return SearchOutcome(Status.EXHAUSTED, None, 0, 0.0, "pattern larger than host", 0 if count else None)
    plan = _embed_plan(pattern, sorted(anchors))
    full = (1 << h.n) - 1
    domain = []
    for u in plan.order:
        if u in anchors:
            domain.append(1 << anchors[u])
        elif candidates is not None and u in candidates:
            domain.append(to_mask(candidates[u]))
        else:
            domain.append(full)
    ext = h.ext
    img = [0] * pattern.n
    clock = _Clock(budget)
    state = {"count": 0, "cert": None}
    order, cons = plan.order, plan.constraints
    npat = pattern.n

    def rec(i: int, used: int) -> bool:
        if i == npat:
            state["count"] += 1
            if state["cert"] is None:
                cert = [0] * npat
                for j, u in enumerate(order):
                    cert[u] = img[j]
                state["cert"] = cert
            return not count
        cand = domain[i] & ~used
        for c in cons[i]:
            tm = 0
            for j in c:
                tm |= 1 << img[j]
            cand &= ext.get(tm, 0)
            if not cand:
                return False
        while cand:
            low = cand & -cand
            cand ^= low
            clock.tick()
            img[i] = low.bit_length() - 1
            if rec(i + 1, used | low):
                return True
        return False

    try:
        rec(0, 0)
    except _OutOfBudget:
        return SearchOutcome(
            Status.BUDGET, state["cert"], clock.nodes, (time.perf_counter() - t0) * 1000, "budget",
            state["count"] if count else None,
        )
    status = Status.FOUND if state["cert"] is not None else Status.EXHAUSTED
    return SearchOutcome(
        status, state["cert"], clock.nodes, (time.perf_counter() - t0) * 1000, "",
        state["count"] if count else None,
    )


# ---------------------------------------------------------------------------
# greedy extension


def greedy_extend(
    h: KGraph,
    seed: PathSeq,
    ell: int,
    forbidden: Iterable[int] = (),
    target_order: int | None = None,
    allow_partial: bool = False,
) -> PathSeq | None:
    """Extend ``seed`` one vertex at a time, always by the lowest-indexed unused
    vertex forming an edge with the last k-1 vertices.

    Stops at ``target_order`` (default: as long as possible). If stuck before the
    target, returns None, or with ``allow_partial`` the longest prefix that is a
    valid l-path.
    """
    k, m = h.k, h.k - ell
    if seed.ell != ell or seed.k != k:
        raise ValueError("seed parameters do not match")
    if target_order is not None and (target_order - k) % m:
        raise ValueError(f"target order {target_order} is not congruent to k mod k-ell")
    seq = list(seed.vertices)
    used = to_mask(seq) | to_mask(forbidden)
    ext = h.ext
    stuck = False
    while target_order is None or len(seq) < target_order:
        cand = ext.get(to_mask(seq[-(k - 1):]), 0) & ~used
        if not cand:
            stuck = True
            break
        v = (cand & -cand).bit_length() - 1
        seq.append(v)
        used |= 1 << v
    if stuck and target_order is not None and not allow_partial:
        return None
    keep = len(seq) - (len(seq) - k) % m
    return PathSeq(tuple(seq[:keep]), k, ell)
