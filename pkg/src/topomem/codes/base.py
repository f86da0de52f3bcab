"""Common container and checks for the CSS code families."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Sequence

import numpy as np

from ..gf2 import PauliOperator, nullspace, rank, stack, support, symplectic_product
from ..stabilizer import PreparationPattern, QubitRole, Role


@dataclass(frozen=True)
class LogicalPair:
    """Anticommuting logical pair with its crossing set.

    ``input_qubit`` is None for pairs the builder reports but cannot encode
    alongside the others (their preparation constraints would clash).
    """

    x: PauliOperator
    z: PauliOperator
    crossing: tuple[int, ...]
    input_qubit: int | None = None


@dataclass
class CssCode:
    family: str
    size: int
    n_qubits: int
    coords: list[tuple]
    x_stabilizers: list[PauliOperator]
    z_stabilizers: list[PauliOperator]
    logical_pairs: list[LogicalPair]
    pattern: PreparationPattern
    gauge_fixing: list[PauliOperator] = field(default_factory=list)
    boundary_metadata: dict[str, Any] = field(default_factory=dict)
    options: dict[str, Any] = field(default_factory=dict)

    @cached_property
    def hx(self) -> np.ndarray:
        return stack(self.x_stabilizers, "X", self.n_qubits)

    @cached_property
    def hz(self) -> np.ndarray:
        return stack(self.z_stabilizers, "Z", self.n_qubits)

    def checks(self, kind: str) -> np.ndarray:
        return self.hx if kind == "X" else self.hz

    @property
    def stabilizers(self) -> list[PauliOperator]:
        return self.z_stabilizers + self.x_stabilizers

    @property
    def encodable_pairs(self) -> list[int]:
        return [i for i, p in enumerate(self.logical_pairs) if p.input_qubit is not None]

    def logical_count(self) -> int:
        """``n - rank`` of stabilizers together with gauge-fixing operators."""
        gx = [g for g in self.gauge_fixing if g.kind == "X"]
        gz = [g for g in self.gauge_fixing if g.kind == "Z"]
        rx = rank(np.vstack([self.hx, stack(gx, "X", self.n_qubits)]))
        rz = rank(np.vstack([self.hz, stack(gz, "Z", self.n_qubits)]))
        return self.n_qubits - rx - rz

    @cached_property
    def adjacency(self) -> list[list[int]]:
        """Qubit graph: two qubits are adjacent when a stabilizer holds both."""
        nbrs: list[set[int]] = [set() for _ in range(self.n_qubits)]
        for H in (self.hx, self.hz):
            for row in H:
                qs = np.flatnonzero(row)
                for q in qs:
                    nbrs[q].update(int(r) for r in qs)
        for q, s in enumerate(nbrs):
            s.discard(q)
        return [sorted(s) for s in nbrs]

    def sector_graph(self, kind: str) -> "SectorGraph":
        """Check-level graph of one sector (nodes = checks, edges = qubits)."""
        return SectorGraph.from_checks(self.checks(kind))


BOUNDARY = -1


@dataclass
class SectorGraph:
    """Checks of one type as nodes; each qubit is an edge between its checks.

    Qubits in a single check attach to the virtual node ``BOUNDARY``. The
    graph is ``graphlike`` only when every qubit touches at most two checks.
    """

    n_checks: int
    edges: list[tuple[int, int, int]]  # (check_a, check_b or BOUNDARY, qubit)
    graphlike: bool

    @classmethod
    def from_checks(cls, H: np.ndarray) -> "SectorGraph":
        edges = []
        graphlike = True
        for q in range(H.shape[1]):
            cs = [int(c) for c in np.flatnonzero(H[:, q])]
            if len(cs) == 2:
                edges.append((cs[0], cs[1], q))
            elif len(cs) == 1:
                edges.append((cs[0], BOUNDARY, q))
            elif len(cs) > 2:
                graphlike = False
        return cls(H.shape[0], edges, graphlike)

    @property
    def has_boundary(self) -> bool:
        return any(b == BOUNDARY for _, b, _ in self.edges)


# -- validation ---------------------------------------------------------------


@dataclass
class ValidationReport:
    stabilizer_failures: list[tuple[int, int]]
    logical_stabilizer_failures: list[tuple[int, str, str, int]]
    gauge_failures: list[tuple[int, str, int]]
    anticommutation: np.ndarray  # [i, j] = X_L,i . Z_L,j
    crossing_failures: list[int]
    pattern_failures: list[str]
    logical_count: int
    declared_pairs: int

    @property
    def anticommutation_failures(self) -> list[tuple[int, int]]:
        k = self.declared_pairs
        want = np.eye(k, dtype=np.uint8)
        return [(i, j) for i in range(k) for j in range(k) if self.anticommutation[i, j] != want[i, j]]

    @property
    def count_mismatch(self) -> bool:
        return self.logical_count != self.declared_pairs

    @property
    def failures(self) -> int:
        return (
            len(self.stabilizer_failures)
            + len(self.logical_stabilizer_failures)
            + len(self.gauge_failures)
            + len(self.anticommutation_failures)
            + len(self.crossing_failures)
            + len(self.pattern_failures)
            + int(self.count_mismatch)
        )

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def summary(self) -> str:
        lines = [
            f"stabilizer commutation failures: {len(self.stabilizer_failures)}",
            f"logical/stabilizer commutation failures: {len(self.logical_stabilizer_failures)}",
            f"logical/gauge-fixing commutation failures: {len(self.gauge_failures)}",
            f"logical anticommutation failures: {len(self.anticommutation_failures)}",
            f"even crossing sets: {len(self.crossing_failures)}",
            f"preparation pattern failures: {len(self.pattern_failures)}",
            f"logical qubits: computed {self.logical_count}, declared {self.declared_pairs}",
            f"{self.failures} failures",
        ]
        return "\n".join(lines)


def _anti(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((A.shape[0], B.shape[0]), dtype=np.uint8)
    return ((A.astype(np.int32) @ B.T.astype(np.int32)) & 1).astype(np.uint8)


def validate(code: CssCode) -> ValidationReport:
    n = code.n_qubits
    # stabilizers are stored pure-type but tolerate arbitrary (e.g. injected) ones
    S = code.stabilizers
    SX = np.array([s.x for s in S], dtype=np.uint8).reshape(len(S), n)
    SZ = np.array([s.z for s in S], dtype=np.uint8).reshape(len(S), n)
    comm = (_anti(SX, SZ) ^ _anti(SZ, SX))
    stab_fail = [(int(i), int(j)) for i, j in zip(*np.nonzero(np.triu(comm, 1)))]

    pairs = code.logical_pairs
    k = len(pairs)
    LX = stack([p.x for p in pairs], "X", n)
    LZ = stack([p.z for p in pairs], "Z", n)
    log_fail = []
    for name, L, other in (("X", LX, SZ), ("Z", LZ, SX)):
        bad = _anti(L, other)
        for i, j in zip(*np.nonzero(bad)):
            log_fail.append((int(i), name, "stabilizer", int(j)))
    # logicals of the same type must commute; pure-type ones always do
    gauge_fail = []
    for j, g in enumerate(code.gauge_fixing):
        for i, p in enumerate(pairs):
            if symplectic_product(p.x, g) or symplectic_product(p.z, g):
                gauge_fail.append((i, g.kind, j))
    anti = _anti(LX, LZ)

    cross_fail = []
    for i, p in enumerate(pairs):
        inter = tuple(support(p.x.x & p.z.z))
        if len(inter) % 2 == 0 or inter != tuple(sorted(p.crossing)):
            cross_fail.append(i)

    return ValidationReport(
        stabilizer_failures=stab_fail,
        logical_stabilizer_failures=log_fail,
        gauge_failures=gauge_fail,
        anticommutation=anti,
        crossing_failures=cross_fail,
        pattern_failures=check_pattern(code),
        logical_count=code.logical_count(),
        declared_pairs=k,
    )


def check_pattern(code: CssCode) -> list[str]:
    """Preparation-pattern constraints that make the encoded parity exact."""
    out = []
    pat = code.pattern
    if len(pat) != code.n_qubits:
        return [f"pattern covers {len(pat)} of {code.n_qubits} qubits"]
    for i in code.encodable_pairs:
        p = code.logical_pairs[i]
        q0 = p.input_qubit
        if q0 not in p.crossing:
            out.append(f"pair {i}: input {q0} not in crossing set")
        if pat.roles[q0].role is not Role.INPUT:
            out.append(f"pair {i}: input {q0} has role {pat.roles[q0].role.value}")
        zs, xs, cross = set(p.z.qubits()), set(p.x.qubits()), set(p.crossing)
        for q in zs - cross:
            if pat.roles[q].role is not Role.ZERO:
                out.append(f"pair {i}: Z-logical qubit {q} is not |0>")
        for q in xs - cross:
            if pat.roles[q].role is not Role.PLUS:
                out.append(f"pair {i}: X-logical qubit {q} is not |+>")
        for q in cross - {q0}:
            r = pat.roles[q]
            if r.role is not Role.BELL or r.partner not in cross or r.partner not in code.adjacency[q]:
                out.append(f"pair {i}: crossing qubit {q} is not Bell-paired with an adjacent crossing qubit")
    return out


# -- construction helpers -----------------------------------------------------


def bfs_distances(adjacency: Sequence[Sequence[int]], seeds: Sequence[int]) -> np.ndarray:
    dist = np.full(len(adjacency), np.iinfo(np.int64).max, dtype=np.int64)
    dq = deque()
    for s in seeds:
        dist[s] = 0
        dq.append(s)
    while dq:
        u = dq.popleft()
        for v in adjacency[u]:
            if dist[v] > dist[u] + 1:
                dist[v] = dist[u] + 1
                dq.append(v)
    return dist


def build_pattern(
    n: int,
    pairs: Sequence[LogicalPair],
    bell_pairs: Sequence[tuple[int, int]] = (),
    classify: Callable[[int], Role] | None = None,
    adjacency: Sequence[Sequence[int]] | None = None,
) -> PreparationPattern:
    """Preparation roles for the encodable pairs.

    Qubits of a Z-logical become |0>, of an X-logical |+>, crossing qubits
    are inputs or Bell halves. Every other qubit is assigned by ``classify``
    or, by default, to whichever logical line is closer in the qubit graph
    (ties go to |+>).
    """
    roles: list[QubitRole | None] = [None] * n
    zero_seed, plus_seed = [], []
    for p in pairs:
        if p.input_qubit is None:
            continue
        cross = set(p.crossing)
        for q in p.z.qubits():
            if q not in cross:
                roles[q] = QubitRole.zero()
                zero_seed.append(q)
        for q in p.x.qubits():
            if q not in cross:
                roles[q] = QubitRole.plus()
                plus_seed.append(q)
        roles[p.input_qubit] = QubitRole(Role.INPUT)
    for a, b in bell_pairs:
        roles[a] = QubitRole.bell(b)
        roles[b] = QubitRole.bell(a)
    if classify is None:
        dz = bfs_distances(adjacency, zero_seed)
        dx = bfs_distances(adjacency, plus_seed)

        def classify(q: int) -> Role:
            return Role.ZERO if dz[q] < dx[q] else Role.PLUS

    for q in range(n):
        if roles[q] is None:
            roles[q] = QubitRole(classify(q))
    return PreparationPattern(roles)


def complete_logicals(hx: np.ndarray, hz: np.ndarray, pairs: Sequence[tuple[np.ndarray, np.ndarray]]):
    """Extend given (x_bits, z_bits) logical pairs to a full symplectic basis.

    Returns the extra pairs as bit-vector tuples. Uses the quotients
    ker(hz)/row(hx) for X-logicals and ker(hx)/row(hz) for Z-logicals.
    """
    n = hx.shape[1]
    xs = [np.asarray(p[0], np.uint8) for p in pairs]
    zs = [np.asarray(p[1], np.uint8) for p in pairs]
    cand_x = nullspace(hz) if hz.shape[0] else np.eye(n, dtype=np.uint8)
    cand_z = nullspace(hx) if hx.shape[0] else np.eye(n, dtype=np.uint8)
    extra = []

    def independent(vec, basis_rows):
        base = np.vstack([basis_rows, vec[None, :]]) if basis_rows.shape[0] else vec[None, :]
        return rank(base) > rank(basis_rows)

    while True:
        span_z = np.vstack([hz] + [z[None, :] for z in zs])
        span_x = np.vstack([hx] + [x[None, :] for x in xs])
        new_z = None
        for z in cand_z:
            z = z.copy()
            for x_i, z_i in zip(xs, zs):
                if int(z @ x_i) & 1:
                    z ^= z_i
            if independent(z, span_z):
                new_z = z
                break
        if new_z is None:
            break
        new_x = None
        for x in cand_x:
            x = x.copy()
            for x_i, z_i in zip(xs, zs):
                if int(x @ z_i) & 1:
                    x ^= x_i
            if int(x @ new_z) & 1:
                new_x = x
                break
        if new_x is None:
            raise RuntimeError("no conjugate X-logical found; check matrices are inconsistent")
        xs.append(new_x)
        zs.append(new_z)
        extra.append((new_x, new_z))
    return extra


def reduce_weight(v: np.ndarray, H: np.ndarray, rounds: int = 3) -> np.ndarray:
    """Greedy weight reduction of ``v`` by stabilizer rows."""
    v = v.copy()
    for _ in range(rounds):
        improved = False
        for row in H:
            w = v ^ row
            if w.sum() < v.sum():
                v = w
                improved = True
        if not improved:
            break
    return v


# -- check-matrix text format -------------------------------------------------


@dataclass
class CheckMatrixFile:
    family: str
    size: int
    n_qubits: int
    x_checks: list[list[int]]
    z_checks: list[list[int]]
    gauge: list[tuple[str, list[int]]]
    logicals: list[tuple[list[int], list[int]]]  # (X support, Z support)

    @classmethod
    def from_code(cls, code: CssCode) -> "CheckMatrixFile":
        return cls(
            family=code.family,
            size=code.size,
            n_qubits=code.n_qubits,
            x_checks=[s.qubits() for s in code.x_stabilizers],
            z_checks=[s.qubits() for s in code.z_stabilizers],
            gauge=[(g.kind, g.qubits()) for g in code.gauge_fixing],
            logicals=[(p.x.qubits(), p.z.qubits()) for p in code.logical_pairs],
        )

    def dumps(self) -> str:
        def fmt(qs):
            return ",".join(str(q) for q in sorted(qs))

        lines = [f"family={self.family} L={self.size} n_qubits={self.n_qubits}"]
        lines += [f"X:{fmt(s)}" for s in self.x_checks]
        lines += [f"Z:{fmt(s)}" for s in self.z_checks]
        lines += [f"G{kind}:{fmt(s)}" for kind, s in self.gauge]
        for i, (lx, lz) in enumerate(self.logicals):
            lines.append(f"L{i}X:{fmt(lx)}")
            lines.append(f"L{i}Z:{fmt(lz)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "CheckMatrixFile":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty check-matrix file")
        head = dict(tok.split("=", 1) for tok in lines[0].split())
        try:
            family, size, n = head["family"], int(head["L"]), int(head["n_qubits"])
        except KeyError as exc:
            raise ValueError(f"header missing {exc}") from None
        xc, zc, gauge = [], [], []
        lx: dict[int, list[int]] = {}
        lz: dict[int, list[int]] = {}
        for ln in lines[1:]:
            tag, _, body = ln.partition(":")
            qs = [int(t) for t in body.split(",") if t]
            if any(not 0 <= q < n for q in qs):
                raise ValueError(f"qubit index out of range in line {ln!r}")
            if tag == "X":
                xc.append(qs)
            elif tag == "Z":
                zc.append(qs)
            elif tag in ("GX", "GZ"):
                gauge.append((tag[1], qs))
            elif tag.startswith("L") and tag[-1] in "XZ":
                (lx if tag[-1] == "X" else lz)[int(tag[1:-1])] = qs
            else:
                raise ValueError(f"unrecognised line {ln!r}")
        if sorted(lx) != sorted(lz) or sorted(lx) != list(range(len(lx))):
            raise ValueError("logical pairs incomplete")
        logicals = [(lx[i], lz[i]) for i in range(len(lx))]
        return cls(family, size, n, xc, zc, gauge, logicals)

    def matrices(self) -> tuple[np.ndarray, np.ndarray]:
        hx = np.zeros((len(self.x_checks), self.n_qubits), dtype=np.uint8)
        hz = np.zeros((len(self.z_checks), self.n_qubits), dtype=np.uint8)
        for i, s in enumerate(self.x_checks):
            hx[i, s] = 1
        for i, s in enumerate(self.z_checks):
            hz[i, s] = 1
        return hx, hz


def export_code(code: CssCode) -> str:
    return CheckMatrixFile.from_code(code).dumps()


def import_code(text: str) -> CheckMatrixFile:
    return CheckMatrixFile.loads(text)


def make_ops(n: int, kind: str, supports: Sequence[Sequence[int]]) -> list[PauliOperator]:
    return [PauliOperator.from_support(n, kind, s) for s in supports]


__all__ = [
    "BOUNDARY",
    "CheckMatrixFile",
    "CssCode",
    "LogicalPair",
    "SectorGraph",
    "ValidationReport",
    "build_pattern",
    "complete_logicals",
    "export_code",
    "import_code",
    "validate",
]
