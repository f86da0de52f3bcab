"""Subsystem surface code with three-qubit triangle gauge operators.

Qubits sit on the vertices of a (2L+1) x (2L+1) grid with the centres of the
L x L square frames left out. In frame (i, j) with lower-left corner
(2i, 2j) the four corner triangles are

    BL = {(0,0), (1,0), (0,1)}    TR = {(2,2), (1,2), (2,1)}
    TL = {(0,2), (1,2), (0,1)}    BR = {(2,0), (1,0), (2,1)}

(offsets from the corner). BL*TR is the diagonal 6-weight Z stabilizer,
TL*BR the anti-diagonal X stabilizer. Two-qubit Z checks close the bottom
and top rows, two-qubit X checks the left and right columns.
"""

from __future__ import annotations

import numpy as np

from ..gf2 import PauliOperator, rank
from ..stabilizer import Role
from .base import CssCode, LogicalPair, build_pattern, make_ops


def _triangles(i: int, j: int) -> dict[str, list[tuple[int, int]]]:
    x, y = 2 * i, 2 * j
    return {
        "BL": [(x, y), (x + 1, y), (x, y + 1)],
        "TR": [(x + 2, y + 2), (x + 1, y + 2), (x + 2, y + 1)],
        "TL": [(x, y + 2), (x + 1, y + 2), (x, y + 1)],
        "BR": [(x + 2, y), (x + 1, y), (x + 2, y + 1)],
    }


def build_subsystem(L: int) -> CssCode:
    """Subsystem surface code with L x L frames.

    Gauge fixing measures the Z-type bottom-left triangle of every frame,
    leaving a single logical pair: Z_L on the left column and X_L on the
    bottom row, crossing at the corner vertex (0, 0), which holds the input.
    """
    if L < 3 or L % 2 == 0:
        raise ValueError(f"subsystem code needs odd L >= 3, got {L}")
    S = 2 * L
    verts = [(x, y) for y in range(S + 1) for x in range(S + 1) if not (x % 2 and y % 2)]
    idx = {v: k for k, v in enumerate(verts)}
    n = len(verts)

    def sup(vs):
        return [idx[v] for v in vs]

    zs, xs, gauge, frames = [], [], [], []
    for j in range(L):
        for i in range(L):
            t = _triangles(i, j)
            zs.append(sup(t["BL"] + t["TR"]))
            xs.append(sup(t["TL"] + t["BR"]))
            gauge.append(sup(t["BL"]))
            frames.append((i, j))
    boundary_z, boundary_x = [], []
    for i in range(L):
        boundary_z.append(sup([(2 * i + 1, 0), (2 * i + 2, 0)]))
        boundary_z.append(sup([(2 * i, S), (2 * i + 1, S)]))
        boundary_x.append(sup([(0, 2 * i), (0, 2 * i + 1)]))
        boundary_x.append(sup([(S, 2 * i + 1), (S, 2 * i + 2)]))

    zl = PauliOperator.from_support(n, "Z", sup([(0, y) for y in range(S + 1)]))
    xl = PauliOperator.from_support(n, "X", sup([(x, 0) for x in range(S + 1)]))
    corner = idx[(0, 0)]
    pair = LogicalPair(xl, zl, (corner,), corner)

    def classify(q: int) -> Role:
        x, y = verts[q]
        return Role.ZERO if y > x else Role.PLUS

    pattern = build_pattern(n, [pair], classify=classify)
    z_all = zs + boundary_z
    x_all = xs + boundary_x
    green = [q for q in range(n) if pattern.roles[q].role is Role.ZERO]
    blue = [q for q in range(n) if pattern.roles[q].role is Role.PLUS]
    meta = {
        "frames": frames,
        "n_frame_checks": L * L,
        "green": green,
        "blue": blue,
        "check_positions": {
            "Z": [_centroid(verts, s) for s in z_all],
            "X": [_centroid(verts, s) for s in x_all],
        },
    }
    return CssCode(
        family="subsystem",
        size=L,
        n_qubits=n,
        coords=list(verts),
        x_stabilizers=make_ops(n, "X", x_all),
        z_stabilizers=make_ops(n, "Z", z_all),
        logical_pairs=[pair],
        pattern=pattern,
        gauge_fixing=make_ops(n, "Z", gauge),
        boundary_metadata=meta,
    )


def _centroid(verts, support) -> tuple[float, float]:
    pts = np.array([verts[q] for q in support], dtype=float)
    return tuple(float(c) for c in pts.mean(axis=0))


def gauge_logical_count(code: CssCode) -> int:
    """Logical qubits before gauge fixing (stabilizers only)."""
    return code.n_qubits - rank(code.hx) - rank(code.hz)


def virtual_lattice(code: CssCode, kind: str) -> dict:
    """Nodes (check positions) and edges (qubit links) of one sector.

    For ``kind == "Z"`` this is the bit-flip lattice (diamonds for the
    6-weight checks, circles for the 2-weight ones); ``"X"`` gives the
    rotated phase-flip lattice.
    """
    g = code.sector_graph(kind)
    pos = code.boundary_metadata["check_positions"][kind]
    n_frames = code.boundary_metadata["n_frame_checks"]
    shapes = ["diamond" if c < n_frames else "circle" for c in range(g.n_checks)]
    return {"positions": pos, "shapes": shapes, "edges": g.edges}
