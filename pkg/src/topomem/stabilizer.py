"""Stabilizer simulation restricted to CSS states.

Every state reachable by the encoding protocol is stabilized by pure X-type
and pure Z-type generators, so the two sectors are kept as separate bit
matrices. Each sector also carries destabilizers (Aaronson-Gottesman style):
the Z-stabilizer ``z_i`` is paired with an X-type ``d_i`` with
``d_i . z_k = delta_ik``, which makes deterministic outcomes a single
matrix-vector product instead of a linear solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np

from .gf2 import PauliOperator, rank


class Role(Enum):
    ZERO = "zero"
    PLUS = "plus"
    INPUT = "input"
    BELL = "bell"


@dataclass(frozen=True)
class QubitRole:
    role: Role
    basis: str | None = None  # INPUT only: "Z" or "X"
    eigenvalue: int = 1  # INPUT only
    partner: int | None = None  # BELL only

    @classmethod
    def zero(cls) -> "QubitRole":
        return cls(Role.ZERO)

    @classmethod
    def plus(cls) -> "QubitRole":
        return cls(Role.PLUS)

    @classmethod
    def input(cls, basis: str, eigenvalue: int) -> "QubitRole":
        if basis not in ("Z", "X") or eigenvalue not in (1, -1):
            raise ValueError(f"bad input eigenstate ({basis!r}, {eigenvalue})")
        return cls(Role.INPUT, basis, eigenvalue)

    @classmethod
    def bell(cls, partner: int) -> "QubitRole":
        return cls(Role.BELL, partner=partner)


class PreparationPattern:
    """Per-qubit preparation roles.

    ``InputQubit`` roles are usually left as placeholders by code builders
    (``Role.INPUT`` with no basis) and filled in by :meth:`with_inputs`.
    """

    def __init__(self, roles: list[QubitRole]):
        self.roles = list(roles)
        self._check()

    def _check(self) -> None:
        n = len(self.roles)
        for i, r in enumerate(self.roles):
            if r.role is Role.BELL:
                j = r.partner
                if j is None or not 0 <= j < n or j == i:
                    raise ValueError(f"qubit {i}: dangling Bell partner {j}")
                other = self.roles[j]
                if other.role is not Role.BELL or other.partner != i:
                    raise ValueError(f"qubit {i}: Bell partner {j} is not symmetric")

    def __len__(self) -> int:
        return len(self.roles)

    def qubits_with(self, role: Role) -> list[int]:
        return [i for i, r in enumerate(self.roles) if r.role is role]

    def bell_pairs(self) -> list[tuple[int, int]]:
        return [(i, r.partner) for i, r in enumerate(self.roles) if r.role is Role.BELL and i < r.partner]

    def with_inputs(self, inputs: Mapping[int, tuple[str, int]]) -> "PreparationPattern":
        """Copy with input slots ``{qubit: (basis, eigenvalue)}`` filled."""
        roles = list(self.roles)
        for q, (basis, eig) in inputs.items():
            if roles[q].role is not Role.INPUT:
                raise ValueError(f"qubit {q} is not an input slot")
            roles[q] = QubitRole.input(basis, eig)
        return PreparationPattern(roles)


class CssState:
    """Mutable CSS stabilizer state on ``n`` qubits."""

    def __init__(self, n: int, zs, zsign, xd, xs, xsign, zd, check: bool = False):
        self.n = n
        self.zs = zs  # Z-type stabilizers (r x n)
        self.zsign = zsign
        self.xd = xd  # X-type destabilizers paired with zs
        self.xs = xs  # X-type stabilizers ((n - r) x n)
        self.xsign = xsign
        self.zd = zd  # Z-type destabilizers paired with xs
        self.check = check
        if check:
            self.assert_valid()

    @classmethod
    def prepare(cls, pattern: PreparationPattern, check: bool = False) -> "CssState":
        n = len(pattern)
        zrows, zsign, xdrows = [], [], []
        xrows, xsign, zdrows = [], [], []

        def unit(*qs):
            v = np.zeros(n, dtype=np.uint8)
            v[list(qs)] = 1
            return v

        for q, r in enumerate(pattern.roles):
            if r.role is Role.ZERO or (r.role is Role.INPUT and r.basis == "Z"):
                zrows.append(unit(q))
                zsign.append(r.eigenvalue if r.role is Role.INPUT else 1)
                xdrows.append(unit(q))
            elif r.role is Role.PLUS or (r.role is Role.INPUT and r.basis == "X"):
                xrows.append(unit(q))
                xsign.append(r.eigenvalue if r.role is Role.INPUT else 1)
                zdrows.append(unit(q))
            elif r.role is Role.INPUT:
                raise ValueError(f"input slot on qubit {q} has no eigenstate assigned")
        for a, b in pattern.bell_pairs():
            zrows.append(unit(a, b))
            zsign.append(1)
            xdrows.append(unit(a))
            xrows.append(unit(a, b))
            xsign.append(1)
            zdrows.append(unit(b))

        def mat(rows):
            return np.array(rows, dtype=np.uint8).reshape(len(rows), n)

        return cls(
            n,
            mat(zrows), np.array(zsign, dtype=np.int8), mat(xdrows),
            mat(xrows), np.array(xsign, dtype=np.int8), mat(zdrows),
            check=check,
        )

    def copy(self) -> "CssState":
        return CssState(
            self.n, self.zs.copy(), self.zsign.copy(), self.xd.copy(),
            self.xs.copy(), self.xsign.copy(), self.zd.copy(), self.check,
        )

    # -- queries -----------------------------------------------------------

    def _sector(self, kind: str):
        if kind == "Z":
            return self.zs, self.zsign, self.xd, self.xs
        return self.xs, self.xsign, self.zd, self.zs

    @staticmethod
    def _dot(M: np.ndarray, v: np.ndarray) -> np.ndarray:
        if M.shape[0] == 0:
            return np.zeros(0, dtype=np.uint8)
        idx = np.flatnonzero(v)
        # measured operators are sparse: summing columns beats a dense product
        return (np.bitwise_xor.reduce(M[:, idx], axis=1) if idx.size else np.zeros(M.shape[0], np.uint8)).astype(np.uint8)

    def deterministic_sign(self, op: PauliOperator) -> int | None:
        """Sign ``s`` with ``s * op`` in the stabilizer group, or None."""
        kind = op.kind
        if kind == "I":
            return op.sign
        if kind == "mixed":
            raise ValueError("deterministic_sign needs a pure-type operator")
        v = op.bits
        stabs, signs, destabs, others = self._sector(kind)
        if self._dot(others, v).any():
            return None
        coeff = self._dot(destabs, v).astype(bool)
        # coefficients must reconstruct v; otherwise the tableau lost rank
        recon = np.bitwise_xor.reduce(stabs[coeff], axis=0) if coeff.any() else np.zeros(self.n, np.uint8)
        if not np.array_equal(recon, v):
            raise RuntimeError("operator commutes with the state but is outside the stabilizer span")
        s = int(np.prod(signs[coeff])) if coeff.any() else 1
        return s * op.sign

    def stabilizers(self) -> list[PauliOperator]:
        out = []
        z0 = np.zeros(self.n, dtype=np.uint8)
        for row, s in zip(self.zs, self.zsign):
            out.append(PauliOperator(z0, row, int(s)))
        for row, s in zip(self.xs, self.xsign):
            out.append(PauliOperator(row, z0, int(s)))
        return out

    # -- updates -----------------------------------------------------------

    def measure(self, op: PauliOperator, rng: np.random.Generator) -> int:
        """Measure a pure-type Pauli; returns +1 or -1 and updates the state."""
        det = self.deterministic_sign(op)
        if det is not None:
            return det
        kind = op.kind
        v = op.bits
        outcome = 1 if rng.random() < 0.5 else -1
        if kind == "Z":
            self.xs, self.xsign, self.zd, self.zs, self.zsign, self.xd = self._collapse(
                v, outcome * op.sign, self.xs, self.xsign, self.zd, self.zs, self.zsign, self.xd
            )
        else:
            self.zs, self.zsign, self.xd, self.xs, self.xsign, self.zd = self._collapse(
                v, outcome * op.sign, self.zs, self.zsign, self.xd, self.xs, self.xsign, self.zd
            )
        if self.check:
            self.assert_valid()
        return outcome

    def _collapse(self, v, sgn, other, osign, odestab, same, ssign, sdestab):
        # ``other`` holds the opposite-type stabilizers, some anticommuting with v.
        anti = np.flatnonzero(self._dot(other, v))
        p = int(anti[0])
        pivot = other[p].copy()
        rest = anti[1:]
        other[rest] ^= pivot
        osign[rest] *= osign[p]
        # opposite-sector destabilizers of ``same`` rows (same type as pivot)
        hit = np.flatnonzero(self._dot(sdestab, v))
        sdestab[hit] ^= pivot
        keep = np.ones(other.shape[0], dtype=bool)
        keep[p] = False
        new_other = other[keep]
        new_osign = osign[keep]
        new_odestab = odestab[keep]
        new_same = np.vstack([same, v[None, :]])
        new_ssign = np.append(ssign, np.int8(sgn))
        new_sdestab = np.vstack([sdestab, pivot[None, :]])
        return new_other, new_osign, new_odestab, new_same, new_ssign, new_sdestab

    def apply_pauli(self, p: PauliOperator) -> None:
        """Conjugate by ``p``: flip the sign of every anticommuting generator."""
        if p.x.any():
            self.zsign[self._dot(self.zs, p.x).astype(bool)] *= -1
        if p.z.any():
            self.xsign[self._dot(self.xs, p.z).astype(bool)] *= -1

    def assert_valid(self) -> None:
        n = self.n
        r, s = self.zs.shape[0], self.xs.shape[0]
        assert r + s == n, f"generator count {r + s} != {n}"
        assert not self._matmul(self.xs, self.zs).any(), "generators do not commute"
        assert rank(self.zs) == r and rank(self.xs) == s, "generators not independent"
        assert np.array_equal(self._matmul(self.xd, self.zs), np.eye(r, dtype=np.uint8))
        assert np.array_equal(self._matmul(self.zd, self.xs), np.eye(s, dtype=np.uint8))

    @staticmethod
    def _matmul(A, B):
        if A.shape[0] == 0 or B.shape[0] == 0:
            return np.zeros((A.shape[0], B.shape[0]), dtype=np.uint8)
        return ((A.astype(np.int32) @ B.T.astype(np.int32)) & 1).astype(np.uint8)


def prepare(pattern: PreparationPattern, check: bool = False) -> CssState:
    return CssState.prepare(pattern, check=check)
