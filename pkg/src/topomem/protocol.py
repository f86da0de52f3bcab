"""Noiseless single-shot encoding into a CSS code and decoding back out."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from . import __version__
from .codes.base import BOUNDARY, CssCode
from .gf2 import Gf2Solver, PauliOperator
from .matching import BOUNDARY_MATCH, match_with_boundary
from .stabilizer import CssState, Role, prepare

OPPOSITE = {"X": "Z", "Z": "X"}


@dataclass
class EncodingRecord:
    syndrome_outcomes: dict[str, list[int]]
    correction_chains: list[PauliOperator]
    chain_crossings: list[list[int]]  # per chain, crossings with each logical pair
    logical_fixups: list[tuple[bool, bool]]  # per pair: (X_L applied, Z_L applied)


@dataclass
class DecodingPlan:
    single_qubit_measurements: list[tuple[int, str]]
    pair_measurements: list[tuple[int, int, str]]
    truncated_operators: tuple[list[int], list[int]]  # (X_T, Z_T)
    input_qubit: int


# -- defect matching ----------------------------------------------------------


class _SectorDecoder:
    """Shortest-path data for one check sector (graphlike) or a linear solver."""

    def __init__(self, code: CssCode, kind: str, avoid: frozenset[int] = frozenset()):
        self.kind = kind
        self.chain_kind = OPPOSITE[kind]
        self.n = code.n_qubits
        H = code.checks(kind)
        g = code.sector_graph(kind)
        self.graphlike = g.graphlike
        self.has_boundary = g.has_boundary
        if not g.graphlike:
            self.solver = Gf2Solver(H)
            return
        m = g.n_checks
        self.m = m
        edge_qubit: dict[tuple[int, int], int] = {}
        for a, b, q in g.edges:
            if q in avoid:
                continue
            b = m if b == BOUNDARY else b
            key = (min(a, b), max(a, b))
            if key not in edge_qubit or q < edge_qubit[key]:
                edge_qubit[key] = q
        self.edge_qubit = edge_qubit
        rows = [a for a, b in edge_qubit] + [b for a, b in edge_qubit]
        cols = [b for a, b in edge_qubit] + [a for a, b in edge_qubit]
        adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(m + 1, m + 1))
        self.dist, self.pred = shortest_path(adj, unweighted=True, return_predecessors=True, directed=False)

    def path(self, a: int, b: int) -> list[int]:
        qs = []
        while b != a:
            p = int(self.pred[a, b])
            if p < 0:
                raise ValueError(f"check {b} unreachable from {a}")
            qs.append(self.edge_qubit[(min(p, b), max(p, b))])
            b = p
        return qs

    def chains(self, defects: Sequence[int]) -> list[np.ndarray]:
        n = self.n
        defects = [int(d) for d in defects]
        if not defects:
            return []
        if not self.graphlike:
            s = np.zeros(self.solver.shape[0], dtype=np.uint8)
            s[defects] = 1
            c = self.solver.solve(s)
            if c is None:
                raise ValueError("syndrome has no correction")
            return [c]
        idx = np.array(defects)
        D = self.dist[np.ix_(idx, idx)]
        bd = self.dist[idx, self.m] if self.has_boundary else None
        pairs = match_with_boundary(D, bd)
        out = []
        for i, j in pairs:
            target = self.m if j == BOUNDARY_MATCH else defects[j]
            v = np.zeros(n, dtype=np.uint8)
            for q in self.path(defects[i], target):
                v[q] ^= 1
            out.append(v)
        return out


def _decoder(code: CssCode, kind: str, avoid_logicals: bool) -> _SectorDecoder:
    cache = code.__dict__.setdefault("_sector_decoders", {})
    key = (kind, avoid_logicals)
    if key not in cache:
        avoid = frozenset()
        if avoid_logicals:
            # chains of the opposite type must not touch logicals of the sector type
            avoid = frozenset(q for p in code.logical_pairs for q in (p.z if kind == "Z" else p.x).qubits())
        dec = _SectorDecoder(code, kind, avoid)
        if avoid and dec.graphlike and not np.isfinite(dec.dist).any(axis=1).all():
            dec = _SectorDecoder(code, kind)
        cache[key] = dec
    return cache[key]


def match_defects_noiseless(
    code: CssCode, defects: Sequence[int], sector: str, avoid_logicals: bool = False
) -> tuple[list[PauliOperator], list[list[int]]]:
    """Chains of the opposite Pauli type whose boundary is ``defects``.

    ``sector`` names the type of the checks that fired. Returns the chains and
    for each chain its crossing count with every logical of type ``sector``.
    """
    dec = _decoder(code, sector, avoid_logicals)
    try:
        vecs = dec.chains(defects)
    except ValueError:
        if not avoid_logicals:
            raise
        vecs = _decoder(code, sector, False).chains(defects)
    kind = dec.chain_kind
    chains = [PauliOperator.from_support(code.n_qubits, kind, np.flatnonzero(v)) for v in vecs]
    logs = [(p.z if sector == "Z" else p.x).bits for p in code.logical_pairs]
    counts = [[int(v[l.astype(bool)].sum()) for l in logs] for v in vecs]
    return chains, counts


# -- encode / decode ----------------------------------------------------------


def _normalize_inputs(code: CssCode, inputs) -> dict[int, tuple[str, int]]:
    enc = code.encodable_pairs
    if isinstance(inputs, tuple) and len(inputs) == 2 and isinstance(inputs[0], str):
        inputs = [inputs] * len(enc)
    inputs = list(inputs)
    if len(inputs) != len(enc):
        raise ValueError(f"{code.family} encodes {len(enc)} logical qubit(s), got {len(inputs)} inputs")
    out = {}
    for i, (basis, eig) in zip(enc, inputs):
        if basis not in ("Z", "X") or eig not in (1, -1):
            raise ValueError(f"bad input eigenstate ({basis!r}, {eig})")
        out[code.logical_pairs[i].input_qubit] = (basis, int(eig))
    return out


def encode(
    code: CssCode,
    inputs,
    rng: np.random.Generator,
    *,
    fast: bool = False,
    avoid_logicals: bool = False,
    check: bool = False,
) -> tuple[CssState, EncodingRecord]:
    """Prepare the product pattern, measure every stabilizer and correct.

    ``inputs`` is one ``(basis, eigenvalue)`` per encodable pair, or a single
    tuple used for all of them. With ``fast`` the stabilizers that are
    already fixed at +1 by the preparation are skipped after checking them.
    """
    state = prepare(code.pattern.with_inputs(_normalize_inputs(code, inputs)), check=check)
    outcomes: dict[str, list[int]] = {}
    for kind, stabs in (("Z", code.z_stabilizers), ("X", code.x_stabilizers)):
        res = []
        for s in stabs:
            if fast:
                det = state.deterministic_sign(s)
                if det == 1:
                    res.append(1)
                    continue
            res.append(state.measure(s, rng))
        outcomes[kind] = res

    chains: list[PauliOperator] = []
    crossings: list[list[int]] = []
    k = len(code.logical_pairs)
    flip_x = np.zeros(k, dtype=np.int64)  # Z-logical parity changed -> apply X_L
    flip_z = np.zeros(k, dtype=np.int64)
    for kind in ("Z", "X"):
        defects = [i for i, r in enumerate(outcomes[kind]) if r == -1]
        cs, counts = match_defects_noiseless(code, defects, kind, avoid_logicals)
        for c, cnt in zip(cs, counts):
            state.apply_pauli(c)
            chains.append(c)
            crossings.append(cnt)
            (flip_x if kind == "Z" else flip_z)[:] += cnt
    fixups = []
    for i, p in enumerate(code.logical_pairs):
        fx, fz = bool(flip_x[i] & 1), bool(flip_z[i] & 1)
        if fx:
            state.apply_pauli(p.x)
        if fz:
            state.apply_pauli(p.z)
        fixups.append((fx, fz))
    return state, EncodingRecord(outcomes, chains, crossings, fixups)


def decoding_plan(code: CssCode, pair_index: int) -> DecodingPlan:
    p = code.logical_pairs[pair_index]
    if p.input_qubit is None:
        raise ValueError(f"logical pair {pair_index} is not encodable")
    q0 = p.input_qubit
    cross = set(p.crossing)
    singles = [(q, "Z") for q in p.z.qubits() if q not in cross]
    singles += [(q, "X") for q in p.x.qubits() if q not in cross]
    pairs = []
    roles = code.pattern.roles
    for q in sorted(cross - {q0}):
        r = roles[q]
        if r.role is not Role.BELL or r.partner not in cross:
            raise ValueError(f"crossing qubit {q} is not Bell-paired inside the crossing set")
        if q < r.partner:
            pairs.append((q, r.partner, "Z"))
            pairs.append((q, r.partner, "X"))
    xt = [q for q in p.x.qubits() if q != q0]
    zt = [q for q in p.z.qubits() if q != q0]
    return DecodingPlan(singles, pairs, (xt, zt), q0)


def _apply_plan(state: CssState, plan: DecodingPlan, rng, n: int) -> tuple[int, int]:
    """Measure the plan; returns parities (of Z_T, of X_T) as 0/1."""
    par = {"Z": 0, "X": 0}
    for q, b in plan.single_qubit_measurements:
        if state.measure(PauliOperator.from_support(n, b, [q]), rng) == -1:
            par[b] ^= 1
    for a, c, b in plan.pair_measurements:
        if state.measure(PauliOperator.from_support(n, b, [a, c]), rng) == -1:
            par[b] ^= 1
    return par["Z"], par["X"]


def decode(code: CssCode, state: CssState, pair_index: int, rng: np.random.Generator) -> tuple[int, int]:
    """Recover the input as (Z eigenvalue, X eigenvalue).

    The state is not modified; each basis is read on its own copy because
    single-qubit Z and X reads of the input do not commute.
    """
    plan = decoding_plan(code, pair_index)
    n = code.n_qubits
    if state.n != n:
        raise ValueError("state and code sizes differ")
    out = []
    for basis in ("Z", "X"):
        s = state.copy()
        zpar, xpar = _apply_plan(s, plan, rng, n)
        # bit flip on odd Z_T parity, phase flip on odd X_T parity
        if zpar:
            s.apply_pauli(PauliOperator.from_support(n, "X", [plan.input_qubit]))
        if xpar:
            s.apply_pauli(PauliOperator.from_support(n, "Z", [plan.input_qubit]))
        out.append(s.measure(PauliOperator.from_support(n, basis, [plan.input_qubit]), rng))
    return out[0], out[1]


# -- roundtrip ----------------------------------------------------------------


@dataclass
class RoundtripResult:
    code: str
    L: int
    basis: str
    eigenvalue: int
    trials: int
    failures: int
    seed: int
    inject: str | None = None
    config: dict = field(default_factory=dict)

    def to_json(self) -> str:
        rec = asdict(self)
        rec["version"] = __version__
        return json.dumps(rec, sort_keys=True)


def roundtrip(
    code: CssCode,
    basis: str,
    eigenvalue: int,
    trials: int,
    seed: int,
    *,
    inject: str | None = None,
    fast: bool = False,
    avoid_logicals: bool = False,
) -> RoundtripResult:
    """Encode then decode ``trials`` times; count trials with a wrong readout.

    Every encodable pair receives the same input. ``inject`` may be
    ``"logical"`` (apply the logical that flips the input after encoding) or
    ``"stabilizer"`` (apply a random stabilizer generator).
    """
    if inject not in (None, "logical", "stabilizer"):
        raise ValueError(f"unknown injection {inject!r}")
    pick = 0 if basis == "Z" else 1
    failures = 0
    stabs = code.stabilizers
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        state, _ = encode(code, (basis, eigenvalue), rng, fast=fast, avoid_logicals=avoid_logicals)
        if inject == "logical":
            for i in code.encodable_pairs:
                p = code.logical_pairs[i]
                state.apply_pauli(p.x if basis == "Z" else p.z)
        elif inject == "stabilizer":
            state.apply_pauli(stabs[int(rng.integers(len(stabs)))])
        ok = all(decode(code, state, i, rng)[pick] == eigenvalue for i in code.encodable_pairs)
        failures += not ok
    return RoundtripResult(
        code.family, code.size, basis, eigenvalue, trials, failures, seed, inject,
        {"fast": fast, "avoid_logicals": avoid_logicals},
    )
