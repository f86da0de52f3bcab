"""Noisy encoding, storage and decoding for the subsystem surface code.

Each sector is simulated as an error frame on a spacetime graph. Nodes are
(check, k) for measurement rounds k = 0..T-1 plus the slice k = T computed
from the final single-qubit readouts. A data-qubit fault in slice k is a
horizontal edge between the checks holding the qubit; a flipped outcome of
round k is a vertical edge from (c, k) to (c, k + 1).

Phase sector: X checks see Z errors. Qubits prepared in |+> (and the input)
are faithful: their slice-0 and slice-T faults have probability p. Qubits
prepared in |0> carry probability 1/2 there, so those edges have weight 0.
Slice-T checks that are not entirely made of faithful non-input qubits
cannot be evaluated and are merged into the boundary. The bit sector is
the same with Z checks, X errors and the roles of the regions swapped.

Zero-weight edges are contracted before shortest paths are computed; none
of them touches the logical line, so crossing parities are unaffected.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.stats import norm

from .codes.subsystem import build_subsystem
from .matching import BOUNDARY_MATCH, match_with_boundary

SECTORS = ("phase", "bit")
BATCH_SIZE = 1000
CSV_COLUMNS = [
    "L", "T", "p_bit", "p_phase", "p_meas", "trials",
    "phase_fail", "bit_fail", "phase_ci_lo", "phase_ci_hi", "bit_ci_lo", "bit_ci_hi", "seed",
]


@dataclass(frozen=True)
class NoiseModel:
    p_bit: float
    p_phase: float
    p_meas: float

    def __post_init__(self):
        for name in ("p_bit", "p_phase", "p_meas"):
            v = getattr(self, name)
            if not 0.0 <= v < 0.5:
                raise ValueError(f"{name} must lie in [0, 1/2), got {v}")

    @classmethod
    def uniform(cls, p: float) -> "NoiseModel":
        return cls(p, p, p)


def edge_weight(p: float) -> float:
    """-log(p / (1 - p)); 0 at p = 1/2, infinite at p = 0."""
    if p <= 0.0:
        return math.inf
    return -math.log(p / (1.0 - p))


@dataclass(frozen=True)
class Event:
    kind: str  # "h" data fault, "v" measurement fault
    index: int  # qubit or check
    slice: int
    u: int  # node ids; boundary == n_nodes
    v: int
    prob: float
    on_logical: bool


@dataclass
class SpacetimeGraph:
    L: int
    T: int
    sector: str
    n_checks: int
    events: list[Event]
    unknown: frozenset[int]  # slice-T nodes merged into the boundary
    logical: tuple[int, ...]
    faithful: frozenset[int]
    # contraction and shortest-path data
    super_of: np.ndarray = field(repr=False, default=None)
    n_super: int = 0
    boundary_super: int = 0
    dist: np.ndarray = field(repr=False, default=None)
    parity: np.ndarray = field(repr=False, default=None)
    pred: np.ndarray = field(repr=False, default=None)
    edge_choice: dict = field(repr=False, default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return self.n_checks * (self.T + 1)

    @property
    def boundary(self) -> int:
        return self.n_nodes

    def node(self, check: int, k: int) -> int:
        return k * self.n_checks + check

    def node_label(self, u: int) -> tuple[int, int] | str:
        if u == self.boundary:
            return "boundary"
        return (u % self.n_checks, u // self.n_checks)

    @property
    def zero_region(self) -> list[int]:
        return [i for i, e in enumerate(self.events) if e.prob == 0.5]

    def weights(self) -> np.ndarray:
        return np.array([edge_weight(e.prob) for e in self.events])

    # -- decoding ------------------------------------------------------------

    def defects_from_events(self, fired: np.ndarray) -> list[int]:
        """Super-nodes with odd syndrome change for a boolean event vector."""
        cnt = np.zeros(self.n_super, dtype=np.int64)
        for i in np.flatnonzero(fired):
            e = self.events[i]
            cnt[self.super_of[e.u]] += 1
            cnt[self.super_of[e.v]] += 1
        cnt[self.boundary_super] = 0
        return [int(s) for s in np.flatnonzero(cnt & 1)]

    def path_edges(self, a: int, b: int) -> list[int]:
        """Event indices of the stored shortest path between super-nodes."""
        out = []
        while b != a:
            p = int(self.pred[a, b])
            if p < 0:
                raise ValueError(f"super-node {b} unreachable from {a}")
            out.append(self.edge_choice[(min(p, b), max(p, b))])
            b = p
        return out


@dataclass
class DefectSet:
    nodes: list[int]  # super-node ids, boundary excluded


@dataclass
class Correction:
    pairs: list[tuple[int, int]]  # super-node pairs; second entry may be the boundary
    weight: float
    flip: bool  # crossing parity of E_min with the logical line


@dataclass
class TrialOutcome:
    phase_fail: bool
    bit_fail: bool
    defect_count: int
    matched_weight: float


def _uf_find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@lru_cache(maxsize=16)
def build_spacetime_graph(L: int, T: int, noise: NoiseModel, sector: str) -> SpacetimeGraph:
    if sector not in SECTORS:
        raise ValueError(f"sector must be one of {SECTORS}, got {sector!r}")
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    code = build_subsystem(L)
    pair = code.logical_pairs[0]
    q_in = pair.input_qubit
    meta = code.boundary_metadata
    if sector == "phase":
        H, region, p_data, logical = code.hx, meta["blue"], noise.p_phase, pair.x.qubits()
    else:
        H, region, p_data, logical = code.hz, meta["green"], noise.p_bit, pair.z.qubits()
    faithful = frozenset(region) | {q_in}
    m, n = H.shape
    g = SpacetimeGraph(L, T, sector, m, [], frozenset(), tuple(logical), frozenset(faithful))
    B = g.boundary
    readable = set(region)
    unknown = frozenset(
        g.node(c, T) for c in range(m) if not set(np.flatnonzero(H[c]).tolist()) <= readable
    )
    g.unknown = unknown
    logset = set(logical)

    def ends(q, k):
        cs = [g.node(int(c), k) for c in np.flatnonzero(H[:, q])]
        cs = [B if c in unknown else c for c in cs]
        if len(cs) == 1:
            cs.append(B)
        return cs[0], cs[1]

    events = []
    for k in range(T + 1):
        for q in range(n):
            if k in (0, T) and q not in faithful:
                prob = 0.5
            else:
                prob = p_data
            u, v = ends(q, k)
            events.append(Event("h", q, k, u, v, prob, q in logset))
        if k < T:
            for c in range(m):
                u, v = g.node(c, k), g.node(c, k + 1)
                v = B if v in unknown else v
                events.append(Event("v", c, k, u, v, noise.p_meas, False))
    g.events = events
    _prepare_paths(g)
    return g


def _prepare_paths(g: SpacetimeGraph) -> None:
    N = g.n_nodes + 1
    parent = list(range(N))
    for u in g.unknown:
        parent[_uf_find(parent, u)] = _uf_find(parent, g.boundary)
    for e in g.events:
        if e.prob == 0.5:
            if e.on_logical:
                raise AssertionError("zero-weight edge on the logical line")
            a, b = _uf_find(parent, e.u), _uf_find(parent, e.v)
            if a != b:
                parent[max(a, b)] = min(a, b)
    roots = sorted({_uf_find(parent, x) for x in range(N)})
    rid = {r: i for i, r in enumerate(roots)}
    g.super_of = np.array([rid[_uf_find(parent, x)] for x in range(N)], dtype=np.int64)
    g.n_super = len(roots)
    g.boundary_super = int(g.super_of[g.boundary])

    # parallel edges: minimum weight, ties to the first event in canonical order
    best: dict[tuple[int, int], tuple[float, int]] = {}
    for i, e in enumerate(g.events):
        if e.prob <= 0.0 or e.prob == 0.5:
            continue
        a, b = int(g.super_of[e.u]), int(g.super_of[e.v])
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        w = edge_weight(e.prob)
        if key not in best or w < best[key][0]:
            best[key] = (w, i)
    g.edge_choice = {k: i for k, (w, i) in best.items()}
    S = g.n_super
    if best:
        keys = np.array(list(best.keys()), dtype=np.int64)
        ws = np.array([w for w, _ in best.values()])
        par = np.array([g.events[i].on_logical for _, i in best.values()], dtype=np.uint8)
    else:
        keys = np.zeros((0, 2), np.int64)
        ws = np.zeros(0)
        par = np.zeros(0, np.uint8)
    adj = csr_matrix((ws, (keys[:, 0], keys[:, 1])), shape=(S, S))
    dist, pred = dijkstra(adj, directed=False, return_predecessors=True)
    epar = coo_matrix((np.concatenate([par, par]), (np.concatenate([keys[:, 0], keys[:, 1]]),
                       np.concatenate([keys[:, 1], keys[:, 0]]))), shape=(S, S)).toarray().astype(np.uint8)
    # parity of each tree path by pointer jumping
    cols = np.broadcast_to(np.arange(S), (S, S))
    anc = np.where(pred >= 0, pred, cols).astype(np.int64)
    parity = np.where(pred >= 0, epar[np.where(pred >= 0, pred, 0), cols], 0).astype(np.uint8)
    while True:
        nxt = np.take_along_axis(anc, anc, axis=1)
        parity ^= np.take_along_axis(parity, anc, axis=1) * (anc != cols)
        if np.array_equal(nxt, anc):
            break
        anc = nxt
    g.dist = dist
    g.parity = parity
    g.pred = pred.astype(np.int32)


def decode_spacetime(graph: SpacetimeGraph, defects: DefectSet | Sequence[int]) -> Correction:
    """Minimum-weight matching of defects to each other or the boundary."""
    nodes = list(defects.nodes if isinstance(defects, DefectSet) else defects)
    Bs = graph.boundary_super
    nodes = [d for d in nodes if d != Bs and graph.dist[d, Bs] > 0.0]
    if not nodes:
        return Correction([], 0.0, False)
    idx = np.array(nodes)
    D = graph.dist[np.ix_(idx, idx)]
    bd = graph.dist[idx, Bs]
    pairs = match_with_boundary(D, bd)
    weight = 0.0
    flip = 0
    out = []
    for i, j in pairs:
        a = nodes[i]
        b = Bs if j == BOUNDARY_MATCH else nodes[j]
        weight += graph.dist[a, b]
        flip ^= int(graph.parity[a, b])
        out.append((a, b))
    return Correction(out, float(weight), bool(flip))


# -- sampling -----------------------------------------------------------------


class _Sampler:
    """Vectorised event sampling and syndrome extraction for one sector."""

    def __init__(self, g: SpacetimeGraph):
        self.g = g
        probs = np.array([e.prob for e in g.events])
        self.active = np.flatnonzero(probs > 0)
        self.probs = probs[self.active]
        ev = [g.events[i] for i in self.active]
        rows = np.repeat(np.arange(len(ev)), 2)
        cols = np.array([[g.super_of[e.u], g.super_of[e.v]] for e in ev], dtype=np.int64).reshape(-1)
        inc = coo_matrix((np.ones(len(rows), np.int64), (rows, cols)), shape=(len(ev), g.n_super)).tocsr()
        self.inc = inc
        self.onlog = np.array([e.on_logical for e in ev], dtype=np.int64)

    def fired(self, rng: np.random.Generator, batch: int) -> np.ndarray:
        return rng.random((batch, len(self.probs))) < self.probs

    def outcomes(self, fired: np.ndarray) -> tuple[np.ndarray, list[list[int]]]:
        """Failure flags and defect lists (E parity xor E_min parity)."""
        g = self.g
        F = csr_matrix(fired.astype(np.int64))
        syn = (F @ self.inc).toarray() & 1
        syn[:, g.boundary_super] = 0
        epar = (fired.astype(np.int64) @ self.onlog) & 1
        fails = np.zeros(fired.shape[0], dtype=bool)
        defects = []
        weights = np.zeros(fired.shape[0])
        for t in range(fired.shape[0]):
            d = np.flatnonzero(syn[t]).tolist()
            defects.append(d)
            if d:
                c = decode_spacetime(g, d)
                fails[t] = bool(epar[t]) ^ c.flip
                weights[t] = c.weight
            else:
                fails[t] = bool(epar[t])
        return fails, defects, weights


@lru_cache(maxsize=16)
def _samplers(L: int, T: int, noise: NoiseModel) -> tuple[_Sampler, _Sampler]:
    return tuple(_Sampler(build_spacetime_graph(L, T, noise, s)) for s in SECTORS)


def _check_lt(L: int, T: int) -> None:
    if L < 3 or L % 2 == 0:
        raise ValueError(f"L must be odd and >= 3, got {L}")
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")


def run_trial(
    L: int,
    T: int,
    noise: NoiseModel,
    rng: np.random.Generator,
    faults: Iterable[tuple[str, str, int, int]] = (),
    background: bool = True,
) -> TrialOutcome:
    """One encode/store/decode cycle.

    ``faults`` forces extra events ``(sector, kind, index, slice)`` with kind
    "h" (data qubit) or "v" (measurement of a check). With ``background``
    False only the forced faults occur; ``noise`` still sets the weights.
    """
    _check_lt(L, T)
    faults = list(faults)
    flags = {}
    total_defects = 0
    total_w = 0.0
    for s, sampler in zip(SECTORS, _samplers(L, T, noise)):
        g = sampler.g
        fired = sampler.fired(rng, 1)[0] if background else np.zeros(len(sampler.probs), bool)
        full = np.zeros(len(g.events), dtype=bool)
        full[sampler.active] = fired
        for sec, kind, index, k in faults:
            if sec != s:
                continue
            hits = [i for i, e in enumerate(g.events) if e.kind == kind and e.index == index and e.slice == k]
            if not hits:
                raise ValueError(f"no event {kind}{index} at slice {k} in sector {s}")
            full[hits[0]] ^= True
        d = g.defects_from_events(full)
        c = decode_spacetime(g, d)
        epar = sum(g.events[i].on_logical for i in np.flatnonzero(full)) & 1
        flags[s] = bool(epar) ^ c.flip
        total_defects += len(d)
        total_w += c.weight
    return TrialOutcome(flags["phase"], flags["bit"], total_defects, total_w)


def wilson_interval(k: int, n: int, confidence: float = 0.99) -> tuple[float, float]:
    if n <= 0:
        return (0.0, 1.0)
    z = float(norm.ppf(0.5 + confidence / 2.0))
    ph = k / n
    den = 1.0 + z * z / n
    centre = (ph + z * z / (2 * n)) / den
    half = z * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / den
    return (max(0.0, centre - half), min(1.0, centre + half))


@dataclass
class MemoryEstimate:
    L: int
    T: int
    noise: NoiseModel
    trials: int
    seed: int
    phase_failures: int
    bit_failures: int
    any_failures: int

    @property
    def phase_rate(self) -> float:
        return self.phase_failures / self.trials

    @property
    def bit_rate(self) -> float:
        return self.bit_failures / self.trials

    @property
    def phase_ci(self) -> tuple[float, float]:
        return wilson_interval(self.phase_failures, self.trials)

    @property
    def bit_ci(self) -> tuple[float, float]:
        return wilson_interval(self.bit_failures, self.trials)

    def csv_row(self) -> list[str]:
        n = self.noise
        vals = [self.L, self.T, n.p_bit, n.p_phase, n.p_meas, self.trials,
                self.phase_rate, self.bit_rate, *self.phase_ci, *self.bit_ci, self.seed]
        return [repr(v) if isinstance(v, float) else str(v) for v in vals]


def _run_batch(L, T, noise, seed, b, size):
    rng = np.random.default_rng([seed, b])
    out = []
    for sampler in _samplers(L, T, noise):
        fails, _, _ = sampler.outcomes(sampler.fired(rng, size))
        out.append(fails)
    return out


def estimate_failure(
    L: int, T: int, noise: NoiseModel, trials: int, seed: int, threads: int = 1
) -> MemoryEstimate:
    """Monte Carlo failure counts; batches of ``BATCH_SIZE`` trials each draw
    from ``default_rng([seed, batch])`` so the result ignores ``threads``."""
    _check_lt(L, T)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    _samplers(L, T, noise)  # build once before threads start
    sizes = [min(BATCH_SIZE, trials - s) for s in range(0, trials, BATCH_SIZE)]
    jobs = [(L, T, noise, seed, b, sz) for b, sz in enumerate(sizes)]
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(lambda a: _run_batch(*a), jobs))
    else:
        results = [_run_batch(*a) for a in jobs]
    ph = np.concatenate([r[0] for r in results])
    bi = np.concatenate([r[1] for r in results])
    return MemoryEstimate(L, T, noise, trials, seed, int(ph.sum()), int(bi.sum()), int((ph | bi).sum()))


def fidelity_lower_bound(phase_rate: float, bit_rate: float) -> float:
    for v in (phase_rate, bit_rate):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"rates must lie in [0, 1], got {v}")
    return max(0.0, 1.0 - phase_rate - bit_rate)


def estimates_csv(rows: Sequence[MemoryEstimate]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.csv_row())
    return buf.getvalue()
