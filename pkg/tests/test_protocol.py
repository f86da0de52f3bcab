import json

import numpy as np
import pytest

from topomem.codes import build_code
from topomem.gf2 import PauliOperator
from topomem.protocol import (
    decode,
    decoding_plan,
    encode,
    match_defects_noiseless,
    roundtrip,
)

FAMILIES = [("toric", 3), ("planar_holes", 7), ("subsystem", 3), ("haah", 3)]
INPUTS = [("Z", 1), ("Z", -1), ("X", 1), ("X", -1)]


@pytest.fixture(scope="module")
def codes():
    return {f: build_code(f, L) for f, L in FAMILIES}


@pytest.mark.parametrize("family", [f for f, _ in FAMILIES])
@pytest.mark.parametrize("inp", INPUTS)
def test_encode_fixes_stabilizers_and_logical(codes, family, inp):
    code = codes[family]
    basis, eig = inp
    for seed in range(25):
        state, rec = encode(code, inp, np.random.default_rng(seed))
        for s in code.stabilizers:
            assert state.deterministic_sign(s) == 1
        for i in code.encodable_pairs:
            p = code.logical_pairs[i]
            assert state.deterministic_sign(p.z if basis == "Z" else p.x) == eig
        assert len(rec.logical_fixups) == len(code.logical_pairs)


def test_toric_two_inputs():
    code = build_code("toric", 3)
    state, _ = encode(code, [("Z", 1), ("X", 1)], np.random.default_rng(1))
    assert state.deterministic_sign(code.logical_pairs[0].z) == 1
    assert state.deterministic_sign(code.logical_pairs[1].x) == 1


def test_fixup_iff_odd_crossing(codes):
    code = codes["toric"]
    for seed in range(20):
        _, rec = encode(code, ("X", 1), np.random.default_rng(seed))
        kinds = [c.kind for c in rec.correction_chains]
        for i, (fx, fz) in enumerate(rec.logical_fixups):
            tot_x = sum(cnt[i] for cnt, k in zip(rec.chain_crossings, kinds) if k == "X")
            tot_z = sum(cnt[i] for cnt, k in zip(rec.chain_crossings, kinds) if k == "Z")
            assert fx == bool(tot_x % 2) and fz == bool(tot_z % 2)


def test_wrong_input_count(codes):
    with pytest.raises(ValueError):
        encode(codes["subsystem"], [("Z", 1), ("Z", 1)], np.random.default_rng(0))
    with pytest.raises(ValueError):
        encode(codes["subsystem"], ("Y", 1), np.random.default_rng(0))


def test_empty_defects(codes):
    chains, counts = match_defects_noiseless(codes["toric"], [], "Z")
    assert chains == [] and counts == []


def test_adjacent_plaquettes_single_link(codes):
    code = codes["toric"]
    # plaquettes 0 and 1 share exactly one link
    shared = np.flatnonzero(code.hz[0] & code.hz[1])
    assert len(shared) == 1
    chains, _ = match_defects_noiseless(code, [0, 1], "Z")
    assert len(chains) == 1 and chains[0].qubits() == [int(shared[0])]
    assert chains[0].kind == "X"


def test_chains_annihilate_random_defects(codes):
    code = codes["subsystem"]
    rng = np.random.default_rng(4)
    for _ in range(30):
        e = (rng.random(code.n_qubits) < 0.2).astype(np.uint8)
        syn = (code.hz.astype(int) @ e) % 2
        chains, _ = match_defects_noiseless(code, list(np.flatnonzero(syn)), "Z")
        total = e.copy()
        for c in chains:
            total ^= c.x
        assert not ((code.hz.astype(int) @ total) % 2).any()


def test_odd_defects_without_boundary_rejected(codes):
    with pytest.raises(ValueError):
        match_defects_noiseless(codes["toric"], [0], "Z")


def test_decoding_plan_shape():
    code = build_code("haah", 3)
    plan = decoding_plan(code, 0)
    measured = {q for q, _ in plan.single_qubit_measurements}
    measured |= {q for a, b, _ in plan.pair_measurements for q in (a, b)}
    assert plan.input_qubit not in measured
    assert len(plan.pair_measurements) == 2  # one Bell pair read in Z and X
    with pytest.raises(ValueError):
        decoding_plan(code, 1)


def test_decode_leaves_state_untouched(codes):
    code = codes["subsystem"]
    rng = np.random.default_rng(9)
    state, _ = encode(code, ("Z", -1), rng)
    before = [state.deterministic_sign(s) for s in code.stabilizers]
    assert decode(code, state, 0, rng)[0] == -1
    assert [state.deterministic_sign(s) for s in code.stabilizers] == before


@pytest.mark.parametrize("family", [f for f, _ in FAMILIES])
def test_roundtrip_and_injections(codes, family):
    code = codes[family]
    for basis, eig in INPUTS:
        assert roundtrip(code, basis, eig, 20, seed=3).failures == 0
    assert roundtrip(code, "Z", 1, 10, seed=3, inject="logical").failures == 10
    assert roundtrip(code, "X", -1, 10, seed=3, inject="logical").failures == 10
    assert roundtrip(code, "X", 1, 10, seed=3, inject="stabilizer").failures == 0


@pytest.mark.parametrize("family", ["toric", "planar_holes"])
def test_avoid_logicals_and_fast_path(codes, family):
    code = codes[family]
    for basis, eig in INPUTS:
        r = roundtrip(code, basis, eig, 15, seed=8, fast=True, avoid_logicals=True)
        assert r.failures == 0


def test_avoiding_chains_do_not_cross(codes):
    code = codes["toric"]
    zl = set(q for p in code.logical_pairs for q in p.z.qubits())
    rng = np.random.default_rng(2)
    for _ in range(10):
        d = sorted(rng.choice(code.hz.shape[0], 4, replace=False).tolist())
        chains, counts = match_defects_noiseless(code, d, "Z", avoid_logicals=True)
        assert all(not (set(c.qubits()) & zl) for c in chains)
        assert all(c == [0, 0] for c in counts)


def test_roundtrip_json_record(codes):
    rec = json.loads(roundtrip(codes["toric"], "X", 1, 3, seed=1).to_json())
    for key in ("code", "L", "basis", "eigenvalue", "trials", "failures", "seed", "version", "config"):
        assert key in rec
    assert rec["failures"] == 0 and rec["code"] == "toric"


def test_roundtrip_deterministic(codes):
    a = roundtrip(codes["haah"], "Z", -1, 5, seed=42).to_json()
    b = roundtrip(codes["haah"], "Z", -1, 5, seed=42).to_json()
    assert a == b


def test_parity_identity(codes):
    # noiseless: parity(X_T) * (input X eigenvalue) = sign(X_L)
    code = codes["subsystem"]
    rng = np.random.default_rng(12)
    p = code.logical_pairs[0]
    q0 = p.input_qubit
    for eig in (1, -1):
        state, _ = encode(code, ("X", eig), rng)
        xt = PauliOperator.from_support(code.n_qubits, "X", [q for q in p.x.qubits() if q != q0])
        s = state.copy()
        par = s.measure(xt, rng)
        inp = s.measure(PauliOperator.from_support(code.n_qubits, "X", [q0]), rng)
        assert par * inp == eig
