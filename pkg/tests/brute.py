"""Slow reference oracles, written independently of the package search code."""

from __future__ import annotations

from itertools import combinations, permutations


def windows(seq, k, ell, cyclic):
    m, n = k - ell, len(seq)
    starts = range(0, n, m) if cyclic else range(0, n - k + 1, m)
    return [frozenset(seq[(s + j) % n] for j in range(k)) for s in starts]


def edge_set(h):
    return {frozenset(e) for e in h.edges}


def hamilton_sequences(h, ell):
    """Number of vertex orderings whose cyclic windows at multiples of k-ell are all edges."""
    k, n, m = h.k, h.n, h.k - ell
    if n % m or n < 2 * k - ell:
        return 0
    edges = edge_set(h)
    return sum(all(w in edges for w in windows(p, k, ell, True)) for p in permutations(range(n)))


def has_perfect_matching(h):
    if h.n % h.k:
        return False
    edges = [frozenset(e) for e in h.edges]

    def rec(left):
        if not left:
            return True
        v = min(left)
        return any(rec(left - e) for e in edges if v in e and e <= left)

    return rec(frozenset(range(h.n)))


def count_embeddings(pattern, host):
    """Injective maps of pattern vertices into host vertices preserving edges, by full enumeration."""
    edges = edge_set(host)
    pe = [tuple(e) for e in pattern.edges]
    return sum(
        all(frozenset(img[u] for u in e) in edges for e in pe)
        for img in permutations(range(host.n), pattern.n)
    )


def anchored_embedding_exists(pattern, anchors, host):
    """Whether some injective edge-preserving map sends each anchored pattern vertex to its image."""
    edges = edge_set(host)
    pe = [tuple(e) for e in pattern.edges]
    free_pat = [u for u in range(pattern.n) if u not in anchors]
    free_host = [v for v in range(host.n) if v not in anchors.values()]
    for imgs in permutations(free_host, len(free_pat)):
        img = dict(anchors)
        img.update(zip(free_pat, imgs))
        if all(frozenset(img[u] for u in e) in edges for e in pe):
            return True
    return False


def path_exists(h, ell, s, t, order, allowed=None):
    """Some l-path of the given order from ordered end s to ordered end t, interior from allowed."""
    k = h.k
    pool = [v for v in (range(h.n) if allowed is None else allowed) if v not in s and v not in t]
    edges = edge_set(h)
    for mid in permutations(pool, order - 2 * ell):
        seq = list(s) + list(mid) + list(t)
        if all(w in edges for w in windows(seq, k, ell, False)):
            return True
    return False


def codegrees(h):
    out = {}
    for s in combinations(range(h.n), h.k - 1):
        out[s] = sum(1 for e in h.edges if set(s) <= set(e))
    return out
