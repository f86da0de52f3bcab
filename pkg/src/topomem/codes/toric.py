"""Kitaev toric code on an L x L periodic lattice."""

from __future__ import annotations

from ..gf2 import PauliOperator
from .base import CssCode, LogicalPair, build_pattern, make_ops


def build_toric(L: int) -> CssCode:
    """Toric code with 2L^2 link qubits and two encodable logical pairs.

    Link ``h(x, y)`` joins vertices (x, y)-(x+1, y); ``v(x, y)`` joins
    (x, y)-(x, y+1). Pair 1 crosses at the horizontal link in the lattice
    centre, pair 2 at the vertical link on the corner; these are the two
    points where the diagonals of the sheet meet on the torus.
    """
    if L < 3 or L % 2 == 0:
        raise ValueError(f"toric code needs odd L >= 3, got {L}")
    n = 2 * L * L

    def h(x, y):
        return 2 * ((y % L) * L + (x % L))

    def v(x, y):
        return h(x, y) + 1

    coords: list[tuple] = [None] * n
    for y in range(L):
        for x in range(L):
            coords[h(x, y)] = (x + 0.5, float(y))
            coords[v(x, y)] = (float(x), y + 0.5)

    stars = [[h(x, y), h(x - 1, y), v(x, y), v(x, y - 1)] for y in range(L) for x in range(L)]
    plaquettes = [[h(x, y), h(x, y + 1), v(x, y), v(x + 1, y)] for y in range(L) for x in range(L)]

    c = (L - 1) // 2
    z1 = PauliOperator.from_support(n, "Z", [h(x, c) for x in range(L)])
    x1 = PauliOperator.from_support(n, "X", [h(c, y) for y in range(L)])
    z2 = PauliOperator.from_support(n, "Z", [v(0, y) for y in range(L)])
    x2 = PauliOperator.from_support(n, "X", [v(x, 0) for x in range(L)])
    pairs = [
        LogicalPair(x1, z1, (h(c, c),), h(c, c)),
        LogicalPair(x2, z2, (v(0, 0),), v(0, 0)),
    ]
    code = CssCode(
        family="toric",
        size=L,
        n_qubits=n,
        coords=coords,
        x_stabilizers=make_ops(n, "X", stars),
        z_stabilizers=make_ops(n, "Z", plaquettes),
        logical_pairs=pairs,
        pattern=None,
        boundary_metadata={"periodic": True},
    )
    code.pattern = build_pattern(n, pairs, adjacency=code.adjacency)
    return code
