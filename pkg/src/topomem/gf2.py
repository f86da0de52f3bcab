"""Binary linear algebra and CSS-restricted Pauli operators.

Bit vectors are plain ``numpy`` ``uint8`` arrays holding 0/1 entries; a bit
matrix is a 2-D array of the same dtype whose rows are bit vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


def bitvec(n: int, support: Iterable[int] = ()) -> np.ndarray:
    """Length-``n`` bit vector with ones at ``support``."""
    v = np.zeros(n, dtype=np.uint8)
    for i in support:
        v[i] ^= 1
    return v


def support(v: np.ndarray) -> list[int]:
    return [int(i) for i in np.flatnonzero(v)]


@dataclass(frozen=True, eq=False)
class PauliOperator:
    """Pauli operator stored as X and Z support bits plus a +-1 sign.

    Qubit ``i`` carries X if only ``x[i]`` is set, Z if only ``z[i]`` is set
    and Y if both are. The i-phase of Y is not tracked.
    """

    x: np.ndarray
    z: np.ndarray
    sign: int = 1

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.uint8) & 1
        z = np.asarray(self.z, dtype=np.uint8) & 1
        if x.shape != z.shape or x.ndim != 1:
            raise ValueError("x and z supports must be 1-D and equal length")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        x.flags.writeable = False
        z.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)

    @classmethod
    def from_support(cls, n: int, kind: str, qubits: Iterable[int], sign: int = 1) -> "PauliOperator":
        """Pure X-type or Z-type operator on ``qubits``."""
        bits = bitvec(n, qubits)
        empty = np.zeros(n, dtype=np.uint8)
        if kind == "X":
            return cls(bits, empty, sign)
        if kind == "Z":
            return cls(empty, bits, sign)
        raise ValueError(f"kind must be 'X' or 'Z', got {kind!r}")

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8))

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def kind(self) -> str:
        """'X', 'Z', 'I' for pure operators, 'mixed' otherwise."""
        hx, hz = bool(self.x.any()), bool(self.z.any())
        if hx and hz:
            return "mixed"
        return "X" if hx else ("Z" if hz else "I")

    @property
    def bits(self) -> np.ndarray:
        """The nonzero sector of a pure operator."""
        k = self.kind
        if k == "mixed":
            raise ValueError("operator is not pure-type")
        return self.x if k == "X" else self.z

    def qubits(self) -> list[int]:
        return support(self.x | self.z)

    def __neg__(self) -> "PauliOperator":
        return PauliOperator(self.x, self.z, -self.sign)

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return (
            self.sign == other.sign
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self):
        return hash((self.sign, self.x.tobytes(), self.z.tobytes()))

    def __repr__(self) -> str:
        letters = []
        for i in self.qubits():
            p = "Y" if self.x[i] and self.z[i] else ("X" if self.x[i] else "Z")
            letters.append(f"{p}{i}")
        body = "".join(letters) or "I"
        return f"{'-' if self.sign < 0 else '+'}{body}"


def symplectic_product(a: PauliOperator, b: PauliOperator) -> int:
    """1 if ``a`` and ``b`` anticommute, else 0."""
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} vs {b.n}")
    return int((np.count_nonzero(a.x & b.z) + np.count_nonzero(a.z & b.x)) & 1)


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Product ``a * b``.

    Only pure-type factors are supported: moving Z past X would create
    phases the sign bit cannot hold.
    """
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} vs {b.n}")
    if "mixed" in (a.kind, b.kind):
        raise ValueError("multiply supports pure-type operators only")
    sign = a.sign * b.sign
    # Z_a X_b -> X_b Z_a reorder; zero for pure factors of the same type.
    if np.count_nonzero(a.z & b.x) & 1:
        sign = -sign
    return PauliOperator(a.x ^ b.x, a.z ^ b.z, sign)


def row_reduce(M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2).

    Leftmost pivot column first; among candidate rows the first one wins.
    Returns the reduced matrix (same shape) and the pivot columns.
    """
    M = np.array(M, dtype=np.uint8, ndmin=2)
    return row_reduce_limited(M, M.shape[1])


def rank(M: np.ndarray) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(row_reduce(M)[1])


def nullspace(M: np.ndarray) -> np.ndarray:
    """Basis (as rows) of ``{v : M v = 0}``."""
    M = np.array(M, dtype=np.uint8, ndmin=2)
    n = M.shape[1]
    R, pivots = row_reduce(M)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = R[r, f]
    return basis


class Gf2Solver:
    """Precomputed elimination for repeated solves of ``A c = b``.

    ``A`` is m x n. The transform ``E`` with ``E A = RREF(A)`` is built once, so
    each solve costs one matrix-vector product.
    """

    def __init__(self, A: np.ndarray):
        A = np.array(A, dtype=np.uint8, ndmin=2) & 1
        m, n = A.shape
        aug = np.concatenate([A, np.eye(m, dtype=np.uint8)], axis=1)
        R, piv = row_reduce_limited(aug, n)
        self.shape = (m, n)
        self.rank = len(piv)
        self.pivots = np.array(piv, dtype=np.intp)
        self._E = R[:, n:].astype(np.uint8)

    def solve(self, b: np.ndarray) -> np.ndarray | None:
        """A solution ``c`` (free variables zero), or None if inconsistent."""
        t = (self._E.astype(np.int64) @ (np.asarray(b, dtype=np.int64) & 1)) & 1
        if t[self.rank:].any():
            return None
        c = np.zeros(self.shape[1], dtype=np.uint8)
        c[self.pivots] = t[: self.rank]
        return c


def row_reduce_limited(M: np.ndarray, n_pivot_cols: int) -> tuple[np.ndarray, list[int]]:
    """Like :func:`row_reduce` but only columns ``< n_pivot_cols`` may pivot."""
    R = (np.array(M, dtype=np.uint8, ndmin=2) & 1).copy()
    rows = R.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(n_pivot_cols):
        if r == rows:
            break
        cand = np.flatnonzero(R[r:, c])
        if cand.size == 0:
            continue
        p = r + int(cand[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
        hit = np.flatnonzero(R[:, c])
        hit = hit[hit != r]
        R[hit] ^= R[r]
        pivots.append(c)
        r += 1
    return R, pivots


@dataclass
class SpanDecomposition:
    indices: list[int]
    sign: int = 1


def in_span(op: PauliOperator, gens: Sequence[PauliOperator]) -> SpanDecomposition | None:
    """Express pure-type ``op`` as a product of same-type generators.

    Returns the generator indices used and the residual sign ``s`` such that
    ``op == s * prod(gens[i])``; None when ``op`` is outside the span.
    """
    kind = op.kind
    if kind == "mixed":
        raise ValueError("in_span needs a pure-type operator")
    if not gens:
        return SpanDecomposition([], op.sign) if kind == "I" else None
    sectors = {g.kind for g in gens} - {"I"}
    if kind != "I" and sectors - {kind}:
        raise ValueError("generators must share the operator's type")
    gkind = kind if kind != "I" else (sectors.pop() if sectors else "Z")
    G = np.array([g.x if gkind == "X" else g.z for g in gens], dtype=np.uint8)
    target = op.x if gkind == "X" else op.z
    c = Gf2Solver(G.T).solve(target)
    if c is None:
        return None
    idx = support(c)
    s = op.sign
    for i in idx:
        s *= gens[i].sign
    return SpanDecomposition(idx, s)


def stack(ops: Sequence[PauliOperator], kind: str, n: int | None = None) -> np.ndarray:
    """Rows of the ``kind`` sector of each operator as a bit matrix."""
    if not ops:
        return np.zeros((0, n or 0), dtype=np.uint8)
    return np.array([o.x if kind == "X" else o.z for o in ops], dtype=np.uint8)
