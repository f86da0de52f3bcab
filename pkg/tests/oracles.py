"""Independent reference computations used by the tests."""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np


def exhaustive_pairing_weight(dist: np.ndarray, to_boundary: np.ndarray | None) -> float:
    """Optimum over every way to pair defects or send them to the boundary.

    Bitmask recursion: the lowest unmatched defect either goes to the
    boundary or pairs with some other unmatched defect.
    """
    k = len(dist)
    full = (1 << k) - 1

    @lru_cache(maxsize=None)
    def best(mask: int) -> float:
        if mask == full:
            return 0.0
        i = next(j for j in range(k) if not mask >> j & 1)
        out = math.inf
        if to_boundary is not None:
            out = to_boundary[i] + best(mask | 1 << i)
        for j in range(i + 1, k):
            if not mask >> j & 1:
                out = min(out, dist[i, j] + best(mask | 1 << i | 1 << j))
        return out

    return best(0)


def in_span_bruteforce(v: np.ndarray, rows: np.ndarray) -> bool:
    """Membership in the GF(2) row span by trying every subset (small inputs)."""
    v = np.asarray(v, dtype=np.uint8) & 1
    if not v.any():
        return True
    m = rows.shape[0]
    for r in range(1, m + 1):
        for sub in itertools.combinations(range(m), r):
            if np.array_equal(np.bitwise_xor.reduce(rows[list(sub)], axis=0), v):
                return True
    return False


def truncated_failure_probability(graph, decode, max_weight: int) -> tuple[float, float]:
    """Exact failure probability from all fault sets up to ``max_weight``.

    Events that can change neither a syndrome nor the logical parity are
    marginalised out exactly. Returns ``(p_low, tail)`` where ``p_low`` sums
    failing configurations of at most ``max_weight`` relevant faults and
    ``tail`` is the total probability of heavier configurations, so the true
    value lies in ``[p_low, p_low + tail]``.
    """
    sup = graph.super_of
    bnd = graph.boundary_super
    rel = []
    for i, e in enumerate(graph.events):
        if e.prob <= 0.0:
            continue
        a, b = int(sup[e.u]), int(sup[e.v])
        touches = (a != b) and not (a == bnd and b == bnd)
        if touches or e.on_logical:
            if e.prob == 0.5 and not e.on_logical:
                # moves a defect inside a zero-weight region only; cannot occur
                raise AssertionError("zero-weight event changes a syndrome")
            rel.append((i, a, b, e.prob, e.on_logical))
    probs = np.array([r[3] for r in rel])
    n = len(rel)
    q_all = float(np.prod(1.0 - probs))
    ratio = probs / (1.0 - probs)
    p_low = 0.0
    mass = 0.0
    for w in range(max_weight + 1):
        for combo in itertools.combinations(range(n), w):
            pr = q_all * float(np.prod(ratio[list(combo)])) if combo else q_all
            mass += pr
            cnt: dict[int, int] = {}
            par = 0
            for c in combo:
                _, a, b, _, on = rel[c]
                cnt[a] = cnt.get(a, 0) ^ 1
                cnt[b] = cnt.get(b, 0) ^ 1
                par ^= int(on)
            defects = sorted(s for s, v in cnt.items() if v and s != bnd)
            flip = decode(graph, defects).flip if defects else False
            if par ^ flip:
                p_low += pr
    return p_low, max(0.0, 1.0 - mass)
