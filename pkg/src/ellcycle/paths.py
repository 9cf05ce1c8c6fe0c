"""Vertex sequences of l-paths and l-cycles, and the operations on them."""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import ceil
from pathlib import Path
from typing import NamedTuple, Sequence

from .hgraph import KGraph


def threshold_denominator(k: int, ell: int) -> int:
    """``ceil(k/(k-ell)) * (k-ell)``: the denominator of the codegree threshold."""
    m = k - ell
    return ceil(k / m) * m


def _check_params(k: int, ell: int) -> None:
    if k < 2:
        raise ValueError(f"uniformity must be at least 2, got k={k}")
    if not 1 <= ell <= k - 1:
        raise ValueError(f"overlap must satisfy 1 <= ell <= k-1, got ell={ell}, k={k}")


def _check_distinct(vertices: Sequence[int]) -> None:
    if len(set(vertices)) != len(vertices):
        raise ValueError("vertex sequence repeats a vertex")
    if any(v < 0 for v in vertices):
        raise ValueError("vertex sequence has a negative vertex")


@dataclass(frozen=True)
class PathSeq:
    """Vertex sequence of an l-path: windows of k vertices starting every k-l positions."""

    vertices: tuple[int, ...]
    k: int
    ell: int

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        _check_params(self.k, self.ell)
        _check_distinct(self.vertices)
        r = len(self.vertices)
        if r < self.k or (r - self.k) % (self.k - self.ell):
            raise ValueError(
                f"path order {r} must be at least k={self.k} and congruent to k mod {self.k - self.ell}"
            )

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    @property
    def step(self) -> int:
        return self.k - self.ell

    def edges(self) -> list[tuple[int, ...]]:
        m, k, vs = self.step, self.k, self.vertices
        return [vs[s : s + k] for s in range(0, len(vs) - k + 1, m)]

    def ends(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.vertices[: self.ell], self.vertices[-self.ell :]

    def reversed(self) -> "PathSeq":
        return PathSeq(self.vertices[::-1], self.k, self.ell)

    def to_dict(self) -> dict:
        return {"k": self.k, "ell": self.ell, "vertices": list(self.vertices), "cyclic": False}


@dataclass(frozen=True)
class CycleSeq:
    """Cyclic vertex sequence of an l-cycle, windows starting at positions 0, k-l, 2(k-l), ...

    Consecutive windows must share exactly ``ell`` vertices, which needs
    ``len >= 2k - ell`` in addition to ``(k-l) | len``.
    """

    vertices: tuple[int, ...]
    k: int
    ell: int

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        _check_params(self.k, self.ell)
        _check_distinct(self.vertices)
        n = len(self.vertices)
        if n % (self.k - self.ell):
            raise ValueError(f"cycle order {n} is not divisible by k-ell={self.k - self.ell}")
        if n < 2 * self.k - self.ell:
            raise ValueError(
                f"cycle order {n} is below 2k-ell={2 * self.k - self.ell}; consecutive edges would overlap in more than ell vertices"
            )

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    @property
    def step(self) -> int:
        return self.k - self.ell

    def edges(self) -> list[tuple[int, ...]]:
        vs, k, n = self.vertices, self.k, len(self.vertices)
        return [tuple(vs[(s + j) % n] for j in range(k)) for s in range(0, n, self.step)]

    def rotated(self, shift: int) -> "CycleSeq":
        """Rotate by ``shift`` positions; must be a multiple of k-l to keep the edge set."""
        if shift % self.step:
            raise ValueError("rotation must be a multiple of k-ell")
        vs = self.vertices
        shift %= len(vs)
        return CycleSeq(vs[shift:] + vs[:shift], self.k, self.ell)

    def reversed(self) -> "CycleSeq":
        """Reverse orientation, re-phased so the windows are the same edges."""
        vs, n = self.vertices, len(self.vertices)
        # the window starting at s becomes the window starting at -(s + k - 1)
        start = (self.k - 1) % n
        rev = tuple(vs[(start - i) % n] for i in range(n))
        return CycleSeq(rev, self.k, self.ell)

    def canonical(self) -> "CycleSeq":
        """Lexicographically least sequence among edge-preserving rotations and reversal."""
        options = []
        for base in (self, self.reversed()):
            for s in range(0, len(base), self.step):
                options.append(base.rotated(s).vertices)
        return CycleSeq(min(options), self.k, self.ell)

    def to_dict(self) -> dict:
        return {"k": self.k, "ell": self.ell, "vertices": list(self.vertices), "cyclic": True}


def sequence_from_dict(data: dict) -> PathSeq | CycleSeq:
    cls = CycleSeq if data.get("cyclic", False) else PathSeq
    return cls(tuple(data["vertices"]), int(data["k"]), int(data["ell"]))


def dump_sequence(seq: PathSeq | CycleSeq, path) -> None:
    Path(path).write_text(json.dumps(seq.to_dict()) + "\n")


def path_edges(p: PathSeq) -> list[tuple[int, ...]]:
    return p.edges()


def cycle_edges(c: CycleSeq) -> list[tuple[int, ...]]:
    return c.edges()


def ordered_ends(p: PathSeq) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return p.ends()


def _check_uniformity(h: KGraph, seq) -> None:
    if h.k != seq.k:
        raise ValueError(f"sequence uniformity k={seq.k} does not match host k={h.k}")


def is_path_in(h: KGraph, p: PathSeq) -> bool:
    """Every window of ``p`` is an edge of ``h`` (any host with ``n``, ``k`` and edge membership)."""
    _check_uniformity(h, p)
    if p.vertices and max(p.vertices) >= h.n:
        return False
    return all(e in h for e in p.edges())


def is_cycle_in(h: KGraph, c: CycleSeq) -> bool:
    _check_uniformity(h, c)
    if max(c.vertices) >= h.n:
        return False
    return all(e in h for e in c.edges())


def is_hamilton_cycle_in(h: KGraph, c: CycleSeq) -> bool:
    return len(c) == h.n and is_cycle_in(h, c)


class PathJoinError(ValueError):
    """Raised by :func:`concat`; ``code`` is ``"end_mismatch"`` or ``"nontrivial_intersection"``."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def concat(p: PathSeq, q: PathSeq) -> PathSeq:
    """Join ``p`` and ``q`` along ``p``'s final end, which must be ``q``'s first end."""
    if (p.k, p.ell) != (q.k, q.ell):
        raise ValueError("cannot join paths with different (k, ell)")
    ell = p.ell
    if p.vertices[-ell:] != q.vertices[:ell]:
        raise PathJoinError("end_mismatch", "final end of the first path is not the first end of the second")
    if set(p.vertices) & set(q.vertices) != set(q.vertices[:ell]):
        raise PathJoinError("nontrivial_intersection", "paths intersect outside the shared end")
    return PathSeq(p.vertices + q.vertices[ell:], p.k, ell)


class Divisibility(NamedTuple):
    cycle_feasible: bool
    path_order_residue: int
    a: int


def divisibility(n: int, k: int, ell: int) -> Divisibility:
    """Whether (k-l) | n, the residue of valid path orders mod k-l, and the threshold denominator."""
    _check_params(k, ell)
    m = k - ell
    return Divisibility(n % m == 0, k % m, threshold_denominator(k, ell))


def replace_window(vertices: Sequence[int], old: Sequence[int], new: Sequence[int], step: int) -> list[int]:
    """Replace the aligned occurrence of ``old`` (or its reverse) in ``vertices`` by ``new``.

    The occurrence must start at a multiple of ``step`` so that the edges of the
    surrounding sequence are unaffected. A reversed occurrence is replaced by
    ``new`` reversed.
    """
    vs = list(vertices)
    old, new = list(old), list(new)
    for pat, rep in ((old, new), (old[::-1], new[::-1])):
        try:
            i = vs.index(pat[0])
        except ValueError:
            raise ValueError("window start vertex is not in the sequence") from None
        if vs[i : i + len(pat)] == pat:
            if i % step:
                raise ValueError(f"window starts at position {i}, not aligned to k-ell={step}")
            return vs[:i] + rep + vs[i + len(pat) :]
    raise ValueError("window is not a contiguous subsequence")
