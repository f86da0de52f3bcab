"""Haah's cubic code: two qubits per vertex of the periodic lattice Z_L^3."""

from __future__ import annotations

import itertools

import numpy as np

from ..gf2 import PauliOperator
from .base import CssCode, LogicalPair, build_pattern, complete_logicals, make_ops, reduce_weight

# cube corner offsets acting on (first, second) qubit of each vertex
_X_CUBE = (
    [(0, 0, 0), (1, 1, 0), (0, 1, 1), (1, 0, 1)],
    [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)],
)
_Z_CUBE = (
    [(1, 1, 1), (0, 1, 1), (1, 0, 1), (1, 1, 0)],
    [(1, 1, 1), (0, 0, 1), (1, 0, 0), (0, 1, 0)],
)


def haah_size_allowed(L: int) -> bool:
    return L % 2 == 1 and 2 <= L <= 200 and L % 15 != 0 and L % 63 != 0


def build_haah(L: int) -> CssCode:
    """Cubic code with logicals on planes crossing along a line.

    Z_L is ZZ on the plane x - y = 0, X_L is IX on the plane x = 0; they meet
    on the second qubits of the line x = y = 0. The input sits at the middle
    of that line and the remaining crossing qubits are Bell-paired with
    their neighbours going round the periodic z direction. A second logical
    pair is completed algebraically and reported but not encoded.
    """
    if not haah_size_allowed(L):
        raise ValueError(f"Haah code needs odd 2 <= L <= 200 with L not a multiple of 15 or 63, got {L}")
    n = 2 * L**3

    def q(x, y, z, k):
        return 2 * (((x % L) * L + (y % L)) * L + (z % L)) + k

    coords = [None] * n
    for x, y, z in itertools.product(range(L), repeat=3):
        for k in (0, 1):
            coords[q(x, y, z, k)] = (x, y, z, k)

    xs, zs = [], []
    for x, y, z in itertools.product(range(L), repeat=3):
        xs.append([q(x + a, y + b, z + c, k) for k in (0, 1) for a, b, c in _X_CUBE[k]])
        zs.append([q(x + a, y + b, z + c, k) for k in (0, 1) for a, b, c in _Z_CUBE[k]])

    zl = [q(x, y, z, k) for x, y, z in itertools.product(range(L), repeat=3) if (x - y) % L == 0 for k in (0, 1)]
    xl = [q(0, y, z, 1) for y in range(L) for z in range(L)]
    line = [q(0, 0, z, 1) for z in range(L)]
    mid = (L - 1) // 2
    x_op = PauliOperator.from_support(n, "X", xl)
    z_op = PauliOperator.from_support(n, "Z", zl)
    pairs = [LogicalPair(x_op, z_op, tuple(sorted(line)), line[mid])]

    x_stabs = make_ops(n, "X", xs)
    z_stabs = make_ops(n, "Z", zs)
    hx = np.array([s.x for s in x_stabs], dtype=np.uint8)
    hz = np.array([s.z for s in z_stabs], dtype=np.uint8)
    for bx, bz in complete_logicals(hx, hz, [(x_op.x, z_op.z)]):
        bx = reduce_weight(bx, hx)
        bz = reduce_weight(bz, hz)
        cross = tuple(int(i) for i in np.flatnonzero(bx & bz))
        pairs.append(LogicalPair(PauliOperator(bx, np.zeros(n, np.uint8)), PauliOperator(np.zeros(n, np.uint8), bz), cross))

    order = [line[(mid + s) % L] for s in range(1, L)]
    bell = [(order[i], order[i + 1]) for i in range(0, len(order), 2)]
    code = CssCode(
        family="haah",
        size=L,
        n_qubits=n,
        coords=coords,
        x_stabilizers=x_stabs,
        z_stabilizers=z_stabs,
        logical_pairs=pairs,
        pattern=None,
        boundary_metadata={"periodic": True, "crossing_line": line, "bell_pairs": bell},
    )
    code.pattern = build_pattern(n, pairs[:1], bell_pairs=bell, adjacency=code.adjacency)
    return code
