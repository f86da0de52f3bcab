"""Planar code with two smooth holes inside a rough outer boundary."""

from __future__ import annotations

import math
from collections import deque
from typing import Sequence

from ..gf2 import PauliOperator
from .base import CssCode, LogicalPair, build_pattern, make_ops

Hole = tuple[int, int, int]  # (x0, y0, d): block of d x d vertices, lower-left corner


def default_holes(L: int) -> list[Hole]:
    """Two square holes of side ceil(L/4) on the middle row, evenly spaced."""
    d = max(2, math.ceil(L / 4))
    gap = max(1, (L - 2 * d) // 3)
    y0 = (L - d) // 2
    return [(gap, y0, d), (L - gap - d, y0, d)]


def _check_holes(L: int, holes: Sequence[Hole]) -> None:
    if len(holes) != 2:
        raise ValueError(f"need exactly two holes, got {len(holes)}")
    for x0, y0, d in holes:
        if d < 2:
            raise ValueError(f"hole at ({x0}, {y0}) has size {d}; a hole must span at least 2 vertices")
        if x0 < 1 or y0 < 1 or x0 + d - 1 > L - 2 or y0 + d - 1 > L - 2:
            raise ValueError(f"hole ({x0}, {y0}, {d}) touches or leaves the outer boundary of L={L}")
    (ax, ay, ad), (bx, by, bd) = holes
    x_apart = ax + ad - 1 < bx or bx + bd - 1 < ax
    y_apart = ay + ad - 1 < by or by + bd - 1 < ay
    if not (x_apart or y_apart):
        raise ValueError("holes overlap or touch")


def build_planar_holes(L: int, holes: Sequence[Hole] | None = None) -> CssCode:
    """Planar code on an L x L vertex grid with two holes, one logical pair.

    The outer boundary is rough (dangling links, every star has weight 4),
    so the only smooth boundaries are the two holes. Inside each hole the
    interior links and plaquettes are removed and perimeter stars drop to
    weight 3. Z_L is the loop around the first hole, X_L the shortest dual
    string joining the holes; they meet on one perimeter link.
    """
    if L < 7:
        # two holes of side 2 plus margins and a gap need 7 vertices across
        raise ValueError(f"planar code with holes needs L >= 7, got {L}")
    holes = list(holes) if holes is not None else default_holes(L)
    _check_holes(L, holes)

    def in_block(p, hole):
        x0, y0, d = hole
        return x0 <= p[0] <= x0 + d - 1 and y0 <= p[1] <= y0 + d - 1

    def interior(p, hole):
        x0, y0, d = hole
        return x0 < p[0] < x0 + d - 1 and y0 < p[1] < y0 + d - 1

    def hole_of_face(f):
        for k, (x0, y0, d) in enumerate(holes):
            if x0 <= f[0] < x0 + d - 1 and y0 <= f[1] < y0 + d - 1:
                return k
        return None

    def ends(e):
        t, x, y = e
        return ((x, y), (x + 1, y)) if t == "h" else ((x, y), (x, y + 1))

    def removed(e):
        a, b = ends(e)
        return any(in_block(a, hl) and in_block(b, hl) and (interior(a, hl) or interior(b, hl)) for hl in holes)

    links = [("h", x, y) for y in range(L) for x in range(-1, L)]
    links += [("v", x, y) for x in range(L) for y in range(-1, L)]
    links = [e for e in links if not removed(e)]
    links.sort(key=lambda e: (e[2], e[1], e[0]))
    idx = {e: i for i, e in enumerate(links)}
    n = len(links)
    coords = [(x + 0.5, float(y)) if t == "h" else (float(x), y + 0.5) for t, x, y in links]

    stars = []
    for y in range(L):
        for x in range(L):
            if any(interior((x, y), hl) for hl in holes):
                continue
            legs = [("h", x, y), ("h", x - 1, y), ("v", x, y), ("v", x, y - 1)]
            stars.append([idx[e] for e in legs if e in idx])

    def face_links(f):
        x, y = f
        return [e for e in (("h", x, y), ("h", x, y + 1), ("v", x, y), ("v", x + 1, y)) if e in idx]

    faces = [(x, y) for y in range(-1, L) for x in range(-1, L)]
    plaquettes = []
    for f in faces:
        if hole_of_face(f) is None and face_links(f):
            plaquettes.append([idx[e] for e in face_links(f)])

    # Z_L: perimeter loop of hole 0
    x0, y0, d = holes[0]
    perim = [
        idx[e]
        for e in links
        if all(in_block(p, holes[0]) and not interior(p, holes[0]) for p in ends(e))
        and not (e[0] == "h" and e[2] not in (y0, y0 + d - 1))
        and not (e[0] == "v" and e[1] not in (x0, x0 + d - 1))
    ]
    # X_L: BFS on faces, hole faces collapsed into one node per hole
    xl = _dual_path(faces, face_links, hole_of_face, idx)
    zl_op = PauliOperator.from_support(n, "Z", perim)
    xl_op = PauliOperator.from_support(n, "X", xl)
    crossing = tuple(sorted(set(perim) & set(xl)))
    pair = LogicalPair(xl_op, zl_op, crossing, crossing[0])
    code = CssCode(
        family="planar_holes",
        size=L,
        n_qubits=n,
        coords=coords,
        x_stabilizers=make_ops(n, "X", stars),
        z_stabilizers=make_ops(n, "Z", plaquettes),
        logical_pairs=[pair],
        pattern=None,
        boundary_metadata={"outer": "rough", "holes": holes, "hole_perimeter": sorted(perim)},
        options={"holes": holes},
    )
    code.pattern = build_pattern(n, [pair], adjacency=code.adjacency)
    return code


def _dual_path(faces, face_links, hole_of_face, idx) -> list[int]:
    def node(f):
        k = hole_of_face(f)
        return ("hole", k) if k is not None else f

    # adjacency between face nodes through shared links
    link_faces: dict[int, list] = {}
    for f in faces:
        for e in face_links(f):
            link_faces.setdefault(idx[e], []).append(node(f))
    nbrs: dict = {}
    for q in sorted(link_faces):
        fs = link_faces[q]
        if len(fs) == 2 and fs[0] != fs[1]:
            a, b = fs
            nbrs.setdefault(a, []).append((b, q))
            nbrs.setdefault(b, []).append((a, q))
    start, goal = ("hole", 0), ("hole", 1)
    prev = {start: None}
    dq = deque([start])
    while dq:
        u = dq.popleft()
        if u == goal:
            break
        for w, q in nbrs.get(u, []):
            if w not in prev:
                prev[w] = (u, q)
                dq.append(w)
    if goal not in prev:
        raise ValueError("holes are not connected through the lattice")
    path = []
    u = goal
    while prev[u] is not None:
        u, q = prev[u]
        path.append(q)
    return sorted(path)
