"""String syndromes, loop memories, holes, braiding and hole moves."""

import math

import numpy as np
import pytest

from qsakit.anyon_logic import (
    EncodingError,
    PathError,
    StringPath,
    StringPropagator,
    TopologyError,
    UnsupportedOperationError,
    anyon_walk,
    braiding_phase,
    code_state,
    hole_logicals,
    hole_qubit,
    interleaved_propagators,
    logical_basis,
    loop_cnot,
    loop_path,
    magic_report,
    magic_state,
    memory_basis,
    memory_encode,
    memory_logical_strings,
    memory_qubits,
    naive_move_error,
    path_is_closed,
    path_string,
    predict_syndrome,
    prepare_hole_superposition,
    string_propagator,
    syndrome_of,
)
from qsakit.dense_oracle import Statevector, apply_string
from qsakit.pauli_core import PauliString, commutes
from qsakit.toric_lattice import (
    HoleSpec,
    LatticeSpec,
    build_variant,
    build_wen,
    ground_state_projector,
)

SEED = 20240816

HOLES_SPEC = LatticeSpec(
    rows=3, cols=4, model="kitaev_holes",
    holes=(HoleSpec(((1, 0),), "smooth"), HoleSpec(((1, 2),), "rough")),
)


def random_walk_path(rng, spec, length):
    """Self-avoiding king-move walk with random letters."""
    while True:
        site = (int(rng.integers(0, spec.rows)), int(rng.integers(0, spec.cols)))
        sites = [site]
        for _ in range(length - 1):
            i, j = sites[-1]
            moves = [
                (i + di, j + dj)
                for di in (-1, 0, 1)
                for dj in (-1, 0, 1)
                if (di, dj) != (0, 0)
            ]
            if spec.boundary == "periodic":
                moves = [(a % spec.rows, b % spec.cols) for a, b in moves]
            else:
                moves = [
                    (a, b)
                    for a, b in moves
                    if 0 <= a < spec.rows and 0 <= b < spec.cols
                ]
            moves = [m for m in moves if m not in sites]
            if not moves:
                break
            sites.append(moves[int(rng.integers(0, len(moves)))])
        if len(sites) == length:
            letters = tuple(str(rng.choice(["X", "Y", "Z"])) for _ in sites)
            return StringPath(tuple(sites), letters)


def test_string_path_validation_and_serialization():
    with pytest.raises(PathError):
        StringPath(((0, 0),), ("Q",))
    with pytest.raises(PathError):
        StringPath(((0, 0), (0, 0)), ("Z", "Z"))
    with pytest.raises(PathError):
        StringPath((), ())
    p = StringPath(((0, 0), (1, 1)), ("Z", "X"))
    d = p.to_dict()
    assert d["letters"] == "ZX"
    assert StringPath.from_dict(d) == p
    assert StringPath.from_dict({"sites": [[0, 0]], "letters": ["Y"]}).letters == ("Y",)


def test_path_string_resolution_and_errors():
    spec = LatticeSpec(rows=4, cols=4)
    p = StringPath(((1, 1), (2, 2)), ("Z", "Z"))
    s = path_string(p, spec)
    assert s.letter(spec.site_index(1, 1)) == "Z"
    assert s.letter(spec.site_index(2, 2)) == "Z"
    assert s.weight == 2
    with pytest.raises(PathError):
        path_string(StringPath(((0, 0), (2, 2)), ("Z", "Z")), spec)
    with pytest.raises(PathError):
        path_string(StringPath(((0, 0), (0, 5)), ("Z", "Z")), spec)


def test_prediction_matches_anticommutation_randomized():
    rng = np.random.default_rng(SEED)
    for boundary in ("open", "periodic"):
        spec = LatticeSpec(rows=4, cols=4, boundary=boundary)
        for _ in range(60):
            path = random_walk_path(rng, spec, int(rng.integers(1, 7)))
            assert (
                predict_syndrome(path, spec).entries
                == syndrome_of(path, spec).entries
            )


def test_single_letter_syndromes():
    spec = LatticeSpec(rows=4, cols=4)
    z = syndrome_of(StringPath(((2, 2),), ("Z",)), spec)
    assert z.entries == (((1, 1), "e"), ((2, 2), "e"))
    x = syndrome_of(StringPath(((2, 2),), ("X",)), spec)
    assert x.entries == (((1, 2), "m"), ((2, 1), "m"))
    y = syndrome_of(StringPath(((2, 2),), ("Y",)), spec)
    assert len(y.entries) == 4
    assert {k for _, k in y.entries} == {"e", "m"}


def test_diagonal_string_moves_the_anyon():
    spec = LatticeSpec(rows=5, cols=5)
    path = StringPath(((1, 1), (2, 2), (3, 3)), ("Z", "Z", "Z"))
    s = syndrome_of(path, spec)
    assert s.entries == (((0, 0), "e"), ((3, 3), "e"))


def test_loop_paths_close_and_clear_the_syndrome():
    spec = LatticeSpec(rows=4, cols=4, boundary="periodic")
    for kind in ("e", "m"):
        for orientation in ("vertical", "horizontal"):
            loop = loop_path(spec, kind, orientation)
            assert path_is_closed(loop, spec)
            assert syndrome_of(loop, spec).is_empty()


def test_memory_loop_algebra_is_symbolic():
    spec = LatticeSpec(rows=4, cols=4, boundary="periodic")
    q1, q2 = memory_qubits(spec)
    x1, z1 = memory_logical_strings(q1, spec)
    x2, z2 = memory_logical_strings(q2, spec)
    assert not commutes(x1, z1)
    assert not commutes(x2, z2)
    assert commutes(x1, z2) and commutes(x2, z1)
    assert commutes(x1, x2) and commutes(z1, z2)
    for term in build_wen(spec).terms:
        for logical in (x1, z1, x2, z2):
            assert commutes(logical, term.operator)


def test_memory_basis_and_encode(dense16):
    spec = LatticeSpec(rows=4, cols=4, boundary="periodic")
    basis = memory_basis(spec)
    for i in range(4):
        for j in range(i + 1, 4):
            assert abs(basis[i].inner(basis[j])) <= 1e-10
    rng = np.random.default_rng(SEED + 1)
    amps = rng.normal(size=4) + 1j * rng.normal(size=4)
    amps = amps / np.linalg.norm(amps)
    state = memory_encode(spec, list(amps))
    overlaps = np.array([b.inner(state) for b in basis])
    assert np.max(np.abs(overlaps - amps)) <= 1e-8


def test_single_loop_rotation_amplitudes(dense16):
    spec = LatticeSpec(rows=4, cols=4, boundary="periodic")
    basis = memory_basis(spec)
    q1, _ = memory_qubits(spec)
    prop = string_propagator(q1.x_path, math.pi / 8.0, spec)
    rotated = prop.apply(basis[0])
    a0 = basis[0].inner(rotated)
    a1 = basis[1].inner(rotated)
    assert abs(a0 - math.cos(math.pi / 8.0)) <= 1e-10
    assert abs(a1 - (-1j) * math.sin(math.pi / 8.0)) <= 1e-10


def test_interleaved_crossings_rejected():
    spec = LatticeSpec(rows=4, cols=4, boundary="periodic")
    q1, q2 = memory_qubits(spec)
    x1 = string_propagator(q1.x_path, 0.3, spec)
    z1 = string_propagator(q1.z_path, 0.4, spec)
    x2 = string_propagator(q2.x_path, 0.5, spec)
    assert interleaved_propagators(x1, x2) == (x1, x2)
    with pytest.raises(UnsupportedOperationError):
        interleaved_propagators(x1, z1)


def test_anyon_walk_hop_rules():
    spec = LatticeSpec(rows=4, cols=4)
    walk = anyon_walk(spec, [(0, 0), (1, 1)])
    assert walk.sites == ((1, 1),) and walk.letters == ("Z",)
    walk = anyon_walk(spec, [(1, 1), (0, 2)])
    assert walk.sites == ((1, 2),) and walk.letters == ("X",)


def test_anyon_walk_ring_equals_plaquette():
    spec = LatticeSpec(rows=3, cols=3)
    ring = anyon_walk(spec, [(0, 1), (1, 2), (2, 1), (1, 0), (0, 1)])
    assert path_string(ring, spec) == build_wen(spec).term_at((1, 1)).operator


def test_braiding_phase_is_minus_one():
    spec = LatticeSpec(rows=3, cols=3)
    report = braiding_phase(spec, center=(1, 1))
    assert report["expectation_ground"] == pytest.approx(1.0, abs=1e-10)
    assert report["expectation_excited"] == pytest.approx(-1.0, abs=1e-10)
    assert report["braiding_phase"] == pytest.approx(-1.0, abs=1e-10)


def test_hole_qubit_edges_and_logicals():
    smooth = hole_qubit(HOLES_SPEC.holes[0], HOLES_SPEC)
    rough = hole_qubit(HOLES_SPEC.holes[1], HOLES_SPEC)
    xs, zs = hole_logicals(smooth, HOLES_SPEC)
    xr, zr = hole_logicals(rough, HOLES_SPEC)
    assert xs.weight == 1 and zs.weight == 4
    assert xr.weight == 4 and zr.weight == 1
    assert not commutes(xs, zs)
    assert not commutes(xr, zr)
    assert commutes(xs, zr) and commutes(xr, zs)
    for term in build_variant(HOLES_SPEC).terms:
        for logical in (xs, zs, xr, zr):
            assert commutes(logical, term.operator)


def test_hole_logicals_boundary_side_validation():
    smooth = hole_qubit(HOLES_SPEC.holes[0], HOLES_SPEC)
    with pytest.raises(EncodingError):
        hole_logicals(smooth, HOLES_SPEC, boundary_side="top")
    rough = hole_qubit(HOLES_SPEC.holes[1], HOLES_SPEC)
    with pytest.raises(EncodingError):
        hole_logicals(rough, HOLES_SPEC, boundary_side="bottom")


def test_hole_qubit_requires_declared_hole():
    with pytest.raises(EncodingError):
        hole_qubit(HoleSpec(((0, 1),), "smooth"), HOLES_SPEC)


def test_code_state_is_the_logical_zero():
    state = code_state(HOLES_SPEC)
    for term in build_variant(HOLES_SPEC).terms:
        assert state.expectation(term.operator).real == pytest.approx(1.0)
    for hole in HOLES_SPEC.holes:
        qubit = hole_qubit(hole, HOLES_SPEC)
        _, z_bar = hole_logicals(qubit, HOLES_SPEC)
        assert state.expectation(z_bar).real == pytest.approx(1.0)


def test_logical_basis_is_orthonormal():
    qubits = [hole_qubit(h, HOLES_SPEC) for h in HOLES_SPEC.holes]
    basis = logical_basis(HOLES_SPEC, qubits)
    assert len(basis) == 4
    for i in range(4):
        assert np.isclose(np.linalg.norm(basis[i].data), 1.0)
        for j in range(i + 1, 4):
            assert abs(basis[i].inner(basis[j])) <= 1e-10


def test_magic_state_fidelities():
    qubit = hole_qubit(HOLES_SPEC.holes[0], HOLES_SPEC)
    for theta in (0.0, math.pi / 4.0, math.pi / 2.0, math.pi):
        report = magic_report(qubit, theta, HOLES_SPEC)
        assert report["fidelity"] >= 1.0 - 1e-10
        state = magic_state(qubit, theta, HOLES_SPEC)
        assert isinstance(state, Statevector)


def test_phase_gate_identity_two_by_two():
    for tg in (0.3, math.pi / 8.0, 1.1):
        z = np.diag([1.0, -1.0]).astype(complex)
        pulse = np.exp(1j * tg) * (
            math.cos(tg) * np.eye(2) - 1j * math.sin(tg) * z
        )
        want = np.diag([1.0, np.exp(2j * tg)])
        assert np.max(np.abs(pulse - want)) <= 1e-12


def test_loop_cnot_truth_table_and_composite():
    gate = loop_cnot(HOLES_SPEC.holes[0], HOLES_SPEC.holes[1], HOLES_SPEC)
    table = gate.truth_table()
    assert table["max_distance"] <= 1e-8
    basis = logical_basis(
        HOLES_SPEC,
        [hole_qubit(h, HOLES_SPEC) for h in HOLES_SPEC.holes],
    )
    expected_index = {0: 0, 1: 1, 2: 3, 3: 2}
    for k, state in enumerate(basis):
        out, recorded = gate.composite_apply(state)
        want = basis[expected_index[k]]
        assert abs(abs(out.inner(want)) - 1.0) <= 1e-10
        assert abs(recorded - np.exp(1j * math.pi / 4.0)) <= 1e-12


def test_loop_cnot_rejects_wrong_hole_kinds():
    with pytest.raises(EncodingError):
        loop_cnot(HOLES_SPEC.holes[1], HOLES_SPEC.holes[0], HOLES_SPEC)


def test_loop_cnot_rejects_bad_loops():
    # a contractible loop: the Z-boundary of the kept face at (0, 0)
    from qsakit.toric_lattice import kitaev_face_edge_keys

    contractible = kitaev_face_edge_keys(HOLES_SPEC, 0, 0)
    with pytest.raises(TopologyError):
        loop_cnot(
            HOLES_SPEC.holes[0], HOLES_SPEC.holes[1], HOLES_SPEC,
            loop_edges=contractible,
        )


def test_naive_move_error_values():
    qubit = hole_qubit(HOLES_SPEC.holes[0], HOLES_SPEC)
    extension = ("h", 1, 0)
    for tg, expect_zero in ((math.pi / 4.0, False), (math.pi / 2.0, True)):
        state = prepare_hole_superposition(qubit, tg, HOLES_SPEC)
        report = naive_move_error(state, extension, HOLES_SPEC, qubit, tg)
        assert report["distance"] == pytest.approx(report["predicted"], abs=1e-10)
        if expect_zero:
            assert report["distance"] <= 1e-10
        else:
            assert report["distance"] > 0.5
        assert report["loop_route_distance"] <= 1e-10
