import dataclasses

import numpy as np
import pytest

from topomem.codes import (
    CheckMatrixFile,
    build_code,
    build_haah,
    build_planar_holes,
    build_subsystem,
    build_toric,
    default_holes,
    export_code,
    gauge_logical_count,
    haah_size_allowed,
    import_code,
    validate,
    virtual_lattice,
)
from topomem.gf2 import PauliOperator
from topomem.stabilizer import Role


@pytest.mark.parametrize(
    "family,L,n,k",
    [
        ("toric", 3, 18, 2),
        ("toric", 5, 50, 2),
        ("planar_holes", 9, 172, 1),
        ("subsystem", 3, 40, 1),
        ("subsystem", 5, 96, 1),
        ("haah", 3, 54, 2),
    ],
)
def test_sizes_and_validity(family, L, n, k):
    code = build_code(family, L)
    assert code.n_qubits == n
    rep = validate(code)
    assert rep.ok, rep.summary()
    assert rep.logical_count == k
    assert rep.summary().splitlines()[-1] == "0 failures"


def test_toric_generator_products_are_identity():
    # every link lies on two plaquettes and two stars
    code = build_toric(5)
    assert not (code.hz.sum(axis=0) % 2).any()
    assert not (code.hx.sum(axis=0) % 2).any()
    assert code.hz.shape[0] == 25 and code.hx.shape[0] == 25


def test_toric_logical_count_formula():
    # 2L^2 qubits, 2(L^2 - 1) independent generators
    for L in (3, 5, 7):
        assert build_toric(L).logical_count() == 2


def test_injected_fault_detected():
    code = build_toric(3)
    bad = list(code.z_stabilizers)
    bad[0] = PauliOperator(bad[0].x.copy(), bad[0].z ^ np.eye(18, dtype=np.uint8)[4])
    broken = dataclasses.replace(code, z_stabilizers=bad)
    broken.__dict__.pop("hz", None)
    rep = validate(broken)
    assert rep.failures > 0


def test_toric_rejects_bad_sizes():
    for L in (2, 4, 1):
        with pytest.raises(ValueError):
            build_toric(L)


def test_holes_default_geometry():
    assert default_holes(9) == [(1, 3, 3), (5, 3, 3)]
    code = build_planar_holes(9)
    p = code.logical_pairs[0]
    assert len(p.crossing) == 1
    # every star has weight 4 or 3 (hole edges) and the outer boundary is rough
    weights = sorted({int(w) for w in code.hx.sum(axis=1)})
    assert weights == [3, 4]


def test_holes_minimum_size():
    assert validate(build_planar_holes(7)).ok
    with pytest.raises(ValueError):
        build_planar_holes(5)


def test_holes_reject_degenerate_hole():
    with pytest.raises(ValueError, match="at least 2"):
        build_planar_holes(9, [(1, 3, 1), (5, 3, 3)])
    with pytest.raises(ValueError):
        build_planar_holes(9, [(1, 3, 3), (3, 3, 3)])


def test_subsystem_gauge_structure():
    code = build_subsystem(3)
    assert gauge_logical_count(code) == 3 * 3 + 1
    assert code.logical_count() == 1
    weights = sorted({int(w) for w in code.hz.sum(axis=1)} | {int(w) for w in code.hx.sum(axis=1)})
    assert weights == [2, 6]
    # each qubit in at most two checks per sector: both sectors are graphs
    assert code.sector_graph("X").graphlike and code.sector_graph("Z").graphlike
    lat = virtual_lattice(code, "Z")
    assert lat["shapes"].count("diamond") == 9 and lat["shapes"].count("circle") == 6


def test_subsystem_regions():
    code = build_subsystem(5)
    roles = code.pattern.roles
    q0 = code.logical_pairs[0].input_qubit
    assert code.coords[q0] == (0, 0) and roles[q0].role is Role.INPUT
    for q, (x, y) in enumerate(code.coords):
        if q == q0:
            continue
        assert roles[q].role is (Role.ZERO if y > x else Role.PLUS)


def test_haah_crossing_and_bell_pairs():
    code = build_haah(5)
    p = code.logical_pairs[0]
    assert len(p.crossing) == 5
    assert code.logical_pairs[1].input_qubit is None
    bell = code.pattern.bell_pairs()
    assert len(bell) == 2
    for a, b in bell:
        assert a in p.crossing and b in p.crossing and b in code.adjacency[a]
    assert not code.sector_graph("X").graphlike


def test_haah_size_rule():
    assert haah_size_allowed(3) and haah_size_allowed(5)
    assert not haah_size_allowed(15) and not haah_size_allowed(4)
    with pytest.raises(ValueError):
        build_haah(15)


@pytest.mark.parametrize("family,L", [("toric", 3), ("subsystem", 3), ("planar_holes", 7), ("haah", 3)])
def test_export_roundtrip(family, L):
    code = build_code(family, L)
    text = export_code(code)
    f = import_code(text)
    assert f.dumps() == text
    hx, hz = f.matrices()
    assert np.array_equal(hx, code.hx) and np.array_equal(hz, code.hz)
    assert len(f.logicals) == len(code.logical_pairs)


def test_import_rejects_garbage():
    with pytest.raises(ValueError):
        CheckMatrixFile.loads("")
    with pytest.raises(ValueError):
        CheckMatrixFile.loads("family=toric L=3 n_qubits=2\nX:0,5\n")
    with pytest.raises(ValueError):
        CheckMatrixFile.loads("family=toric L=3 n_qubits=2\nQ:0\n")
    with pytest.raises(ValueError):
        CheckMatrixFile.loads("family=toric L=3 n_qubits=2\nL0X:0\n")
