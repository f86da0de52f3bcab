"""Minimum-weight perfect matching of defects with optional boundary.

Each defect may pair with another defect or with its own virtual boundary
copy; virtual copies pair among themselves at zero cost. The blossom solver
is networkx's exact implementation.
"""

from __future__ import annotations

import networkx as nx
import numpy as np

BOUNDARY_MATCH = -1


def match_with_boundary(dist: np.ndarray, to_boundary: np.ndarray | None) -> list[tuple[int, int]]:
    """Exact minimum-weight pairing.

    ``dist[i, j]`` is the cost of joining defects i and j; ``to_boundary[i]``
    the cost of sending i to the boundary (None or inf disables it). Returns
    pairs ``(i, j)`` with ``j == BOUNDARY_MATCH`` for boundary matches,
    sorted by first index.
    """
    k = len(dist)
    if k == 0:
        return []
    finite_b = to_boundary is not None and np.isfinite(to_boundary).any()
    if k == 1:
        if not finite_b or not np.isfinite(to_boundary[0]):
            raise ValueError("single defect and no reachable boundary")
        return [(0, BOUNDARY_MATCH)]
    if k == 2:
        d = dist[0, 1]
        b = to_boundary[0] + to_boundary[1] if finite_b else np.inf
        if not np.isfinite(d) and not np.isfinite(b):
            raise ValueError("defects cannot be matched")
        # equal cost: prefer the direct pair
        if d <= b:
            return [(0, 1)]
        return [(0, BOUNDARY_MATCH), (1, BOUNDARY_MATCH)]

    g = nx.Graph()
    for i in range(k):
        for j in range(i + 1, k):
            if np.isfinite(dist[i, j]):
                g.add_edge(i, j, weight=float(dist[i, j]))
    if finite_b:
        for i in range(k):
            if np.isfinite(to_boundary[i]):
                g.add_edge(i, k + i, weight=float(to_boundary[i]))
        virt = [k + i for i in range(k) if np.isfinite(to_boundary[i])]
        for a in range(len(virt)):
            for b in range(a + 1, len(virt)):
                g.add_edge(virt[a], virt[b], weight=0.0)
    elif k % 2:
        raise ValueError("odd number of defects and no boundary")
    m = nx.min_weight_matching(g)
    if 2 * len(m) != g.number_of_nodes():
        raise ValueError("defects cannot be perfectly matched")
    out = []
    for a, b in m:
        a, b = min(a, b), max(a, b)
        if a >= k:
            continue
        out.append((a, b if b < k else BOUNDARY_MATCH))
    return sorted(out)


def matching_weight(pairs, dist, to_boundary) -> float:
    total = 0.0
    for i, j in pairs:
        total += to_boundary[i] if j == BOUNDARY_MATCH else dist[i, j]
    return float(total)
