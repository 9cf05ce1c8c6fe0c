"""Absorb-cover-connect heuristic for Hamilton l-cycles at desk scale.

Phases of one attempt:

1. reserve a random vertex set R;
2. build an absorbing path P0 from disjoint absorber copies ("slots") outside R,
   stitched together by short connecting paths;
3. cover most of the rest by greedily extended paths;
4. connect P0 and the cover paths into a cycle through R;
5. split the uncovered vertices into (k-l)-sets that some slot can absorb and
   substitute each slot by its enlarged path.

Goodness of a (k-l)-set is decided by existence of one absorbing substitution
within budget ("proxy goodness"), not by counting absorbers.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import ceil, floor

from .gadgets import Absorber, build_AP, compact_absorber
from .hgraph import KGraph, restrict
from .oracle import (
    SearchBudget,
    find_gadget_copy,
    find_path_between,
    greedy_extend,
    iter_perfect_matchings,
    path_orders,
    _Clock,
    _OutOfBudget,
)
from .paths import CycleSeq, PathSeq, concat, is_hamilton_cycle_in, replace_window

log = logging.getLogger(__name__)


@dataclass
class PipelineParams:
    alpha: float = 0.2
    eps: float = 0.25
    seed: int = 0
    max_cover_paths: int | None = None
    n_absorbers: int | None = None
    absorber: str = "auto"
    max_connect_order: int | None = None
    restarts: int = 5
    search_nodes: int = 200_000
    max_matchings: int = 200

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if self.absorber not in ("auto", "ap", "compact"):
            raise ValueError(f"unknown absorber {self.absorber!r}")
        if self.restarts < 0:
            raise ValueError("restarts must be non-negative")


class PhaseFailure(Exception):
    def __init__(self, phase: str, reason: str):
        super().__init__(f"{phase}: {reason}")
        self.phase, self.reason = phase, reason


@dataclass
class Slot:
    window: tuple[int, ...]
    witness: tuple[int, ...]
    absorbed: tuple[int, ...] = ()


@dataclass
class AttemptTrace:
    attempt: int
    reservoir: list[int] = field(default_factory=list)
    absorbing_path: list[int] = field(default_factory=list)
    slots: list[Slot] = field(default_factory=list)
    cover_paths: list[list[int]] = field(default_factory=list)
    uncovered: list[int] = field(default_factory=list)
    connections: list[list[int]] = field(default_factory=list)
    leftover: list[int] = field(default_factory=list)
    good_sets: int = 0
    absorbed_sets: list[list[int]] = field(default_factory=list)
    timings_ms: dict[str, float] = field(default_factory=dict)
    failed_phase: str | None = None
    reason: str = ""


@dataclass
class PipelineTrace:
    n: int
    k: int
    ell: int
    params: PipelineParams
    absorber: str = ""
    attempts: list[AttemptTrace] = field(default_factory=list)
    cycle: CycleSeq | None = None
    goodness: str = "proxy goodness"

    @property
    def success(self) -> bool:
        return self.cycle is not None

    @property
    def failed_phase(self) -> str | None:
        return None if self.success or not self.attempts else self.attempts[-1].failed_phase

    @property
    def reason(self) -> str:
        return "" if self.success or not self.attempts else self.attempts[-1].reason

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "ell": self.ell,
            "params": asdict(self.params),
            "absorber": self.absorber,
            "goodness": self.goodness,
            "success": self.success,
            "failed_phase": self.failed_phase,
            "reason": self.reason,
            "cycle": None if self.cycle is None else self.cycle.to_dict(),
            "attempts": [asdict(a) for a in self.attempts],
        }


def choose_absorber(k: int, ell: int, n: int, kind: str = "auto") -> Absorber:
    """The k-partite gadget when asked for or when it uses at most a third of
    the host; otherwise the compact insertion absorber."""
    if kind == "compact":
        return compact_absorber(k, ell)
    if kind == "ap":
        return build_AP(k, ell)
    size = k * (k * ell * (k - ell) + 1)
    return build_AP(k, ell) if 3 * size <= n else compact_absorber(k, ell)


def _absorb_path(h: KGraph, ell: int, window, s_set, budget: SearchBudget) -> PathSeq | None:
    """Path with the ends of ``window`` through exactly ``window + s_set``, if any."""
    out = find_path_between(
        h, ell, window[:ell], window[-ell:], allowed=set(window) | set(s_set), spanning=True, budget=budget
    )
    return out.certificate if out.found else None


def good_sets(h: KGraph, ell: int, budget: SearchBudget | None = None, pattern: Absorber | None = None):
    """(k-l)-sets with at least one absorber copy anchored at them, found within ``budget``."""
    m = h.k - ell
    if pattern is None:
        pattern = choose_absorber(h.k, ell, h.n)
    budget = budget or SearchBudget(max_nodes=100_000)
    out = []
    for s in combinations(range(h.n), m):
        anchors = dict(zip(pattern.S, s))
        if find_gadget_copy(h, pattern.host, anchors, budget).found:
            out.append(s)
    return out


def goodness_graph(h: KGraph, ell: int, budget: SearchBudget | None = None, pattern: Absorber | None = None) -> KGraph:
    """(k-l)-graph of proxy-good sets on the vertices of ``h``."""
    m = h.k - ell
    if m < 2:
        raise ValueError("k-ell = 1: good sets are singletons; use good_sets() instead")
    return KGraph(h.n, m, frozenset(good_sets(h, ell, budget, pattern)))


def _max_bipartite(options: list[list[int]], n_right: int) -> list[int] | None:
    """Assign each left item a distinct right item from its options (augmenting paths)."""
    owner = [-1] * n_right

    def augment(i, seen):
        for j in options[i]:
            if j in seen:
                continue
            seen.add(j)
            if owner[j] < 0 or augment(owner[j], seen):
                owner[j] = i
                return True
        return False

    for i in range(len(options)):
        if not augment(i, set()):
            return None
    assign = [-1] * len(options)
    for j, i in enumerate(owner):
        if i >= 0:
            assign[i] = j
    return assign


class _Attempt:
    def __init__(self, h: KGraph, ell: int, params: PipelineParams, pattern: Absorber, trace: AttemptTrace):
        self.h, self.ell, self.params, self.pattern, self.trace = h, ell, params, pattern, trace
        self.k, self.n, self.m = h.k, h.n, h.k - ell
        self.budget = SearchBudget(max_nodes=params.search_nodes)
        orders = path_orders(self.k, ell, self.n)
        self.connect_order = params.max_connect_order or (orders[0] + 2 * self.m if orders else self.k)

    def _timed(self, name, fn):
        t0 = time.perf_counter()
        try:
            return fn()
        finally:
            self.trace.timings_ms[name] = round((time.perf_counter() - t0) * 1000, 3)

    def run(self, rng: random.Random) -> CycleSeq:
        n, p = self.n, self.params
        self.reservoir = sorted(rng.sample(range(n), floor(p.alpha * n)))
        self.trace.reservoir = list(self.reservoir)
        p0 = self._timed("absorbing_path", self._absorbing_path)
        covers = self._timed("cover", lambda: self._cover(p0))
        cycle = self._timed("connect", lambda: self._connect(p0, covers))
        return self._timed("absorb", lambda: self._absorb(cycle))

    def _absorbing_path(self) -> PathSeq:
        n, m, ell, pat = self.n, self.m, self.ell, self.pattern
        g = self.params.n_absorbers or max(1, ceil(self.params.alpha * n / m))
        outside = [v for v in range(n) if v not in set(self.reservoir)]
        used: set[int] = set()
        p0 = None
        for _ in range(g):
            free = [v for v in outside if v not in used]
            cands = {u: (self.reservoir if u in pat.S else free) for u in range(pat.host.n)}
            out = find_gadget_copy(self.h, pat.host, None, self.budget, candidates=cands)
            if not out.found:
                raise PhaseFailure("absorbing_path", f"no absorber copy among {len(free)} free vertices ({out.status.value})")
            img = out.certificate
            window = PathSeq(tuple(img[u] for u in pat.P.vertices), self.k, ell)
            witness = tuple(img[u] for u in pat.S)
            used |= set(window.vertices)
            if p0 is not None:
                allowed = [v for v in outside if v not in used and v not in p0.vertices]
                link = find_path_between(
                    self.h, ell, p0.vertices[-ell:], window.vertices[:ell], self.connect_order, self.budget, allowed
                )
                if not link.found:
                    raise PhaseFailure("absorbing_path", "could not link absorber copies")
                used |= set(link.certificate.vertices)
                p0 = concat(concat(p0, link.certificate), window)
            else:
                p0 = window
            self.trace.slots.append(Slot(window.vertices, witness))
        self.trace.absorbing_path = list(p0.vertices)
        return p0

    def _cover(self, p0: PathSeq) -> list[PathSeq]:
        h, k, ell = self.h, self.k, self.ell
        cap = self.params.max_cover_paths or self.n
        remaining = set(range(self.n)) - set(p0.vertices) - set(self.reservoir)
        paths: list[PathSeq] = []
        while len(remaining) >= k and len(paths) < cap:
            inside = [e for e in h.sorted_edges() if remaining.issuperset(e)]
            if not inside:
                break
            deg = {v: 0 for v in remaining}
            for e in inside:
                for v in e:
                    deg[v] += 1
            v = min((u for u in remaining if deg[u]), key=lambda u: (deg[u], u))
            e = next(e for e in inside if v in e)
            seed = PathSeq((v,) + tuple(u for u in e if u != v), k, ell)
            forbidden = set(range(self.n)) - remaining
            path = greedy_extend(h, seed, ell, forbidden)
            path = greedy_extend(h, path.reversed(), ell, forbidden)
            paths.append(path)
            remaining -= set(path.vertices)
        self.trace.cover_paths = [list(q.vertices) for q in paths]
        self.trace.uncovered = sorted(remaining)
        if len(remaining) > self.params.eps * self.n:
            raise PhaseFailure("cover", f"{len(remaining)} vertices uncovered, above eps*n = {self.params.eps * self.n:g}")
        return paths

    def _connect(self, p0: PathSeq, covers: list[PathSeq]) -> list[int]:
        ell = self.ell
        pieces = [p0] + list(covers)
        pool = set(self.reservoir)
        seq = list(p0.vertices)
        for i in range(len(pieces)):
            last = i == len(pieces) - 1
            s = pieces[i].vertices[-ell:]
            options = [pieces[0]] if last else [pieces[i + 1], pieces[i + 1].reversed()]
            link = None
            for nxt in options:
                out = find_path_between(self.h, ell, s, nxt.vertices[:ell], self.connect_order, self.budget, pool)
                if out.found:
                    link = out.certificate
                    if not last:
                        pieces[i + 1] = nxt
                    break
            if link is None:
                raise PhaseFailure("connect", f"no connecting path after piece {i} inside the reservoir")
            pool -= set(link.vertices)
            self.trace.connections.append(list(link.vertices))
            if last:
                seq += link.vertices[ell:-ell]
            else:
                seq += link.vertices[ell:] + pieces[i + 1].vertices[ell:]
        return seq

    def _absorb(self, seq: list[int]) -> CycleSeq:
        h, ell, m = self.h, self.ell, self.m
        leftover = sorted(set(range(self.n)) - set(seq))
        self.trace.leftover = leftover
        if leftover:
            slots = self.trace.slots
            sets, options, fills = [], [], {}
            for s in combinations(leftover, m):
                opts = []
                for j, slot in enumerate(slots):
                    q = _absorb_path(h, ell, slot.window, s, self.budget)
                    if q is not None:
                        opts.append(j)
                        fills[s, j] = q
                if opts:
                    sets.append(s)
                    options.append(opts)
            self.trace.good_sets = len(sets)
            if len(leftover) > m * len(slots):
                raise PhaseFailure("absorb", f"{len(leftover)} leftover vertices exceed slot capacity {m * len(slots)}")
            index = {v: i for i, v in enumerate(leftover)}
            g = KGraph(max(len(leftover), m), m, frozenset(tuple(index[v] for v in s) for s in sets))
            plan = None
            clock = _Clock(SearchBudget(max_nodes=self.params.search_nodes))
            try:
                for tried, matching in enumerate(iter_perfect_matchings(g, _clock=clock)):
                    if tried >= self.params.max_matchings:
                        break
                    chosen = [tuple(leftover[i] for i in e) for e in matching]
                    assign = _max_bipartite([options[sets.index(s)] for s in chosen], len(slots))
                    if assign is not None:
                        plan = list(zip(chosen, assign))
                        break
            except _OutOfBudget:
                pass
            if plan is None:
                raise PhaseFailure("absorb", "leftover vertices admit no partition into absorbable sets")
            for s, j in plan:
                q = fills[s, j]
                seq = replace_window(seq, slots[j].window, q.vertices, m)
                slots[j].absorbed = s
                self.trace.absorbed_sets.append(list(s))
        cycle = CycleSeq(tuple(seq), self.k, ell)
        if not is_hamilton_cycle_in(h, cycle):
            raise AssertionError("pipeline produced a sequence that is not a Hamilton cycle")
        return cycle


def run_pipeline(h: KGraph, ell: int, params: PipelineParams | None = None) -> PipelineTrace:
    """Try to build a Hamilton l-cycle of ``h`` by absorption; failures are reported in the trace."""
    params = params or PipelineParams()
    k, n, m = h.k, h.n, h.k - ell
    if not 1 <= ell <= k - 1:
        raise ValueError(f"need 1 <= ell <= k-1, got ell={ell}")
    if n % m:
        raise ValueError(f"(k-ell)={m} does not divide n={n}")
    if k % m == 0:
        raise ValueError(f"(k-ell)={m} divides k={k}; the absorbing gadgets need (k-ell) not dividing k")
    pattern = choose_absorber(k, ell, n, params.absorber)
    trace = PipelineTrace(n, k, ell, params, "ap" if pattern.classes else "compact")
    for attempt in range(params.restarts + 1):
        at = AttemptTrace(attempt)
        trace.attempts.append(at)
        rng = random.Random(f"{params.seed}:{attempt}")
        try:
            trace.cycle = _Attempt(h, ell, params, pattern, at).run(rng)
            return trace
        except PhaseFailure as exc:
            at.failed_phase, at.reason = exc.phase, exc.reason
            log.debug("attempt %d failed in %s: %s", attempt, exc.phase, exc.reason)
    return trace
