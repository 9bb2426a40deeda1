"""Anyons, string propagators, and logical qubits on the plaquette models.

Wen-model side: Pauli strings on spins create/move anyon pairs on the
diagonally adjacent plaquettes (Z excites the bottom-left/top-right pair, X
the top-left/bottom-right pair, interior excitations cancel pairwise).
Plaquettes are colored by anchor parity -- dark ``(i+j) even`` hosts ``e``
anyons, light hosts ``m`` -- and closed loop strings commute with every
plaquette.  On the periodic lattice the two homology classes of loops supply
two logical qubits (the quantum memory); arbitrary two-qubit encodings are
synthesized from loop-string rotations alone.

Hole-model side: removing a face (smooth hole) or a vertex star (rough hole)
frees one logical qubit each.  Logical operators are the removed stabilizer
(the loop around the hole) paired with a string tying the hole to the
matching boundary.  Magic states, the braiding CNOT, and the single-Pauli
hole-move error live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .pauli_core import LETTERS, PauliString, WeightedPauliSum, commutes, multiply
from .schedule_compiler import ConnectivityGraph, QsaSchedule, compile_schedule
from .dense_oracle import (
    DenseOperator,
    Statevector,
    apply_rotation,
    apply_schedule,
    apply_string,
    check_dense_limit,
)
from .toric_lattice import (
    HoleSpec,
    LatticeSpec,
    build_variant,
    build_wen,
    ground_state_projector,
    kitaev_edge_index,
    kitaev_face_edge_keys,
    kitaev_face_operator,
    kitaev_star_edge_keys,
    kitaev_star_operator,
    plaquette_range,
)

ENCODINGS = ("memory_loops", "smooth_hole", "rough_hole")


class PathError(ValueError):
    """Raised for site paths that do not fit the host lattice."""


class EncodingError(ValueError):
    """Raised for logical-qubit constructions with incompatible geometry."""


class TopologyError(ValueError):
    """Raised when a braid loop does not have the required topology."""


class UnsupportedOperationError(RuntimeError):
    """Raised for operation patterns outside the supported scope."""


# -- string paths ---------------------------------------------------------------


@dataclass(frozen=True)
class StringPath:
    """An ordered list of (row, col) spins with one Pauli letter per spin."""

    sites: tuple[tuple[int, int], ...]
    letters: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.sites) != len(self.letters):
            raise PathError("path needs one letter per site")
        if not self.sites:
            raise PathError("path must not be empty")
        for letter in self.letters:
            if letter not in LETTERS:
                raise PathError(f"invalid path letter {letter!r}")
        if len(set(self.sites)) != len(self.sites):
            raise PathError("path sites must be distinct")

    def to_dict(self) -> dict:
        return {"sites": [list(s) for s in self.sites], "letters": "".join(self.letters)}

    @classmethod
    def from_dict(cls, data: dict) -> "StringPath":
        return cls(
            tuple((int(i), int(j)) for i, j in data["sites"]),
            tuple(str(c) for c in data["letters"]),
        )


def _adjacent(spec: LatticeSpec, a: tuple[int, int], b: tuple[int, int]) -> bool:
    """King-move adjacency on the spin grid, wrapped on the torus."""
    di, dj = abs(a[0] - b[0]), abs(a[1] - b[1])
    if spec.boundary == "periodic":
        di = min(di, spec.rows - di)
        dj = min(dj, spec.cols - dj)
    return max(di, dj) == 1


def path_string(path: StringPath, spec: LatticeSpec) -> PauliString:
    """Resolve a path to the Pauli string it applies.

    Raises:
        PathError: sites off the lattice, or consecutive sites not adjacent.
    """
    if spec.model != "wen":
        raise PathError("string paths address wen-model spins")
    sites: dict[int, str] = {}
    for (i, j), letter in zip(path.sites, path.letters):
        if spec.boundary != "periodic" and not (
            0 <= i < spec.rows and 0 <= j < spec.cols
        ):
            raise PathError(f"path site ({i}, {j}) is off the lattice")
        sites[spec.site_index(i, j)] = letter
    for a, b in zip(path.sites, path.sites[1:]):
        if not _adjacent(spec, a, b):
            raise PathError(f"path sites {a} and {b} are not adjacent")
    return PauliString.from_sites(spec.n_sites, sites)


def path_is_closed(path: StringPath, spec: LatticeSpec) -> bool:
    """True when the last site steps back to the first (loop)."""
    return len(path.sites) > 2 and _adjacent(spec, path.sites[-1], path.sites[0])


# -- syndromes ------------------------------------------------------------------


@dataclass(frozen=True)
class Syndrome:
    """Excited plaquettes with their anyon kinds.

    Kinds follow the color rule: dark plaquettes ``(i+j) even`` (the
    bottom-left plaquette is dark) host ``e`` anyons, light host ``m``.  The
    fermionic composite (an ``e`` and an ``m`` bound on adjacent plaquettes)
    has no dedicated type; a syndrome simply lists both members.
    """

    entries: tuple[tuple[tuple[int, int], str], ...]

    @property
    def plaquettes(self) -> tuple[tuple[int, int], ...]:
        return tuple(p for p, _ in self.entries)

    @property
    def kinds(self) -> tuple[str, ...]:
        return tuple(k for _, k in self.entries)

    def is_empty(self) -> bool:
        return not self.entries

    def to_dict(self) -> dict:
        return {"entries": [[list(p), k] for p, k in self.entries]}


def _anyon_kind(i: int, j: int) -> str:
    return "e" if (i + j) % 2 == 0 else "m"


def syndrome_of(path: StringPath, spec: LatticeSpec) -> Syndrome:
    """Excitations of a path string: the terms it anticommutes with.

    The color picture (Z strings excite the bottom-left/top-right diagonal,
    X strings the antidiagonal, interior pairs cancel) is exactly the
    anticommutation computation performed here.
    """
    if spec.model != "wen":
        raise PathError("syndromes are defined for the wen model")
    string = path_string(path, spec)
    entries = []
    for term in build_wen(spec).terms:
        if not commutes(term.operator, string):
            entries.append((term.index, _anyon_kind(*term.index)))
    return Syndrome(tuple(sorted(entries)))


def predict_syndrome(path: StringPath, spec: LatticeSpec) -> Syndrome:
    """Syndrome via the diagonal color rule instead of anticommutation.

    Per site: Z excites anchors (i-1, j-1) and (i, j); X excites (i-1, j) and
    (i, j-1); Y excites all four.  Repeated excitations cancel pairwise.
    Only standard lattices (no twists) are supported; holes simply cannot be
    excited.
    """
    if spec.twists:
        raise PathError("the color-rule prediction does not cover twist defects")
    path_string(path, spec)  # validate geometry
    prow, pcol = plaquette_range(spec)
    driven = {t.index for t in build_wen(spec).terms}
    excited: set[tuple[int, int]] = set()
    for (i, j), letter in zip(path.sites, path.letters):
        anchors = []
        if letter in ("Z", "Y"):
            anchors += [(i - 1, j - 1), (i, j)]
        if letter in ("X", "Y"):
            anchors += [(i - 1, j), (i, j - 1)]
        for (a, b) in anchors:
            if spec.boundary == "periodic":
                a %= prow
                b %= pcol
            elif not (0 <= a < prow and 0 <= b < pcol):
                continue
            if (a, b) not in driven:
                continue
            excited ^= {(a, b)}
    return Syndrome(tuple(sorted((p, _anyon_kind(*p)) for p in excited)))


# -- string propagators -----------------------------------------------------------


@dataclass(frozen=True)
class StringPropagator:
    """Handle for ``exp(-i tg P)`` with P a (phase-free) Pauli string."""

    n_sites: int
    string: PauliString
    tg: float

    def __post_init__(self) -> None:
        if self.string.phase_exp != 0:
            raise ValueError("propagator strings must carry phase +1")

    def _generator(self) -> WeightedPauliSum:
        return WeightedPauliSum.from_string(self.string)

    def apply(self, state: Statevector, tg: float | None = None) -> Statevector:
        """``cos(tg)|psi> - i sin(tg) P|psi>``, exactly."""
        angle = self.tg if tg is None else tg
        return Statevector.from_array(
            apply_rotation(self._generator(), angle, state.data)
        )

    def unitary(self, tg: float | None = None) -> DenseOperator:
        check_dense_limit(self.n_sites, "string propagator unitary")
        angle = self.tg if tg is None else tg
        dim = 1 << self.n_sites
        m = np.eye(dim, dtype=np.complex128)
        return DenseOperator(self.n_sites, apply_rotation(self._generator(), angle, m))

    def schedule(
        self,
        graph: ConnectivityGraph | None = None,
        strategy: str = "auto",
        tg: float | None = None,
    ) -> QsaSchedule:
        """Compile the propagator into attachment/swapper pulses."""
        if graph is None:
            support = self.string.support
            graph = ConnectivityGraph.from_edges(
                self.n_sites,
                [(a, b) for a in support for b in support if a < b],
            )
        return compile_schedule(
            self.string, graph, strategy=strategy,
            tg=self.tg if tg is None else tg,
        )


def string_propagator(
    path: StringPath, tg: float, spec: LatticeSpec
) -> StringPropagator:
    """Propagator handle for a wen-model path string."""
    return StringPropagator(spec.n_sites, path_string(path, spec), tg)


def interleaved_propagators(
    first: StringPropagator, second: StringPropagator
) -> tuple[StringPropagator, StringPropagator]:
    """Serialize two string propagators, rejecting time-interleaved crossings.

    Two loop propagators whose strings commute can always be applied one
    after the other.  When the strings anticommute (they cross an odd number
    of times) and their physical schedules would have to interleave in time,
    neither serialization represents the braided process; that pattern is
    outside the supported scope.
    """
    if first.n_sites != second.n_sites:
        raise ValueError("propagators act on different registers")
    if not commutes(first.string, second.string):
        raise UnsupportedOperationError(
            "interleaved crossing propagators are not supported: the two "
            "strings anticommute, so no sequential pulse order reproduces "
            "the time-mixed braid"
        )
    return (first, second)


# -- memory loops on the torus ---------------------------------------------------


def _e_letter(i: int, j: int) -> str:
    return "Z" if (i + j) % 2 == 0 else "X"


def _m_letter(i: int, j: int) -> str:
    return "X" if (i + j) % 2 == 0 else "Z"


def loop_path(spec: LatticeSpec, kind: str, orientation: str, offset: int = 0) -> StringPath:
    """A homologically nontrivial loop string on the periodic lattice.

    Both kinds commute with every plaquette (no excitations).  ``e`` loops
    stabilize the reference ground state (+1 eigenvalue, logical-Z role);
    ``m`` loops anticommute with the crossing e-loops and flip the ground
    state into its orthogonal partners (logical-X role).  orientation is
    ``vertical`` (column ``offset``) or ``horizontal`` (row ``offset``).
    """
    if spec.model != "wen" or spec.boundary != "periodic":
        raise PathError("memory loops require the periodic wen model")
    if kind not in ("e", "m"):
        raise PathError(f"loop kind must be 'e' or 'm', got {kind!r}")
    letter = _e_letter if kind == "e" else _m_letter
    if orientation == "vertical":
        sites = tuple((i, offset % spec.cols) for i in range(spec.rows))
    elif orientation == "horizontal":
        sites = tuple((offset % spec.rows, j) for j in range(spec.cols))
    else:
        raise PathError(f"orientation must be vertical or horizontal, got {orientation!r}")
    return StringPath(sites, tuple(letter(i, j) for (i, j) in sites))


@dataclass(frozen=True)
class LogicalQubit:
    """One encoded qubit: loop pair (memory) or hole plus boundary string."""

    encoding: str
    x_path: StringPath | None = None
    z_path: StringPath | None = None
    hole: HoleSpec | None = None
    boundary_side: str | None = None
    x_edges: tuple[tuple, ...] = field(default_factory=tuple)
    z_edges: tuple[tuple, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.encoding not in ENCODINGS:
            raise EncodingError(f"encoding must be one of {ENCODINGS}")


def memory_qubits(spec: LatticeSpec) -> tuple[LogicalQubit, LogicalQubit]:
    """The two loop-encoded qubits of the periodic lattice.

    Qubit 1: logical X = vertical m-loop (column 0), logical Z = horizontal
    e-loop (row 0).  Qubit 2: the transposed pair.  Conjugate pairs cross at
    exactly one spin with clashing letters; all other combinations share
    either nothing, one spin with equal letters, or a full line with an even
    number of clashes, so they commute.
    """
    q1 = LogicalQubit(
        "memory_loops",
        x_path=loop_path(spec, "m", "vertical", 0),
        z_path=loop_path(spec, "e", "horizontal", 0),
    )
    q2 = LogicalQubit(
        "memory_loops",
        x_path=loop_path(spec, "m", "horizontal", 0),
        z_path=loop_path(spec, "e", "vertical", 0),
    )
    return q1, q2


def memory_logical_strings(
    qubit: LogicalQubit, spec: LatticeSpec
) -> tuple[PauliString, PauliString]:
    """(X_logical, Z_logical) strings of a loop-encoded qubit."""
    if qubit.encoding != "memory_loops":
        raise EncodingError("expected a memory_loops qubit")
    if not (path_is_closed(qubit.x_path, spec) and path_is_closed(qubit.z_path, spec)):
        raise PathError("memory loop paths must be closed")
    return path_string(qubit.x_path, spec), path_string(qubit.z_path, spec)


def memory_basis(spec: LatticeSpec) -> tuple[Statevector, ...]:
    """(|G>, X1|G>, X2|G>, X1 X2|G>): the four loop-distinct ground states."""
    if spec.boundary != "periodic":
        raise EncodingError("the quantum memory requires a periodic boundary")
    q1, q2 = memory_qubits(spec)
    x1, _ = memory_logical_strings(q1, spec)
    x2, _ = memory_logical_strings(q2, spec)
    g = ground_state_projector(spec)
    psi1 = Statevector.from_array(apply_string(x1, g.data))
    psi2 = Statevector.from_array(apply_string(x2, g.data))
    psi3 = Statevector.from_array(apply_string(x1, psi2.data))
    return g, psi1, psi2, psi3


def _euler_zxz(u: np.ndarray) -> tuple[float, float, float, float]:
    """Decompose u = exp(i delta) Rz(a) Rx(b) Rz(c) with R*(t) = exp(-i t P/2)."""
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    delta = math.atan2(det.imag, det.real) / 2.0
    su = u * np.exp(-1j * delta)
    beta = 2.0 * math.atan2(abs(su[1, 0]), abs(su[0, 0]))
    ang_a = math.atan2(su[0, 0].imag, su[0, 0].real) if abs(su[0, 0]) > 1e-12 else 0.0
    ang_b = math.atan2(su[1, 0].imag, su[1, 0].real) if abs(su[1, 0]) > 1e-12 else 0.0
    # su = Rz(alpha) Ry(beta) Rz(gamma): su00 = cos(b/2) e^{-i(a+c)/2},
    # su10 = sin(b/2) e^{+i(a-c)/2}; then Ry(b) = Rz(pi/2) Rx(b) Rz(-pi/2).
    alpha = ang_b - ang_a
    gamma = -ang_b - ang_a
    return delta, alpha + math.pi / 2.0, beta, gamma - math.pi / 2.0


def memory_program(spec: LatticeSpec, amplitudes) -> dict:
    """Loop-rotation program preparing the requested memory superposition.

    The target coefficients over (|G>, X1|G>, X2|G>, X1X2|G>) are Schmidt
    decomposed; one XX-loop rotation produces the Schmidt weights, three
    Z-type loop rotations fix the relative phases, and per-qubit ZXZ Euler
    rotations finish the local frames.  Logical Z actions carry measured
    signs (Z_logical|G> = s|G> with s = +-1 read off the ground state), so
    physical angles are sign-corrected.  Scalar factors the hardware would
    never apply are accumulated in ``recorded_phase``.

    Returns:
        dict with ``operations`` (ordered (label, PauliString, angle)),
        ``recorded_phase``, and the normalized target ``amplitudes``.
    """
    a = np.asarray(list(amplitudes), dtype=np.complex128)
    if a.shape != (4,):
        raise ValueError("amplitudes must have exactly four entries")
    norm = np.linalg.norm(a)
    if norm < 1e-12:
        raise ValueError("amplitudes must not all vanish")
    a = a / norm

    q1, q2 = memory_qubits(spec)
    x1, z1 = memory_logical_strings(q1, spec)
    x2, z2 = memory_logical_strings(q2, spec)
    x12 = multiply(x1, x2)
    z12 = multiply(z1, z2)
    if x12.phase_exp or z12.phase_exp:
        raise EncodingError("loop products must combine with phase +1")

    g = ground_state_projector(spec)
    s1 = float(np.round(g.expectation(z1).real))
    s2 = float(np.round(g.expectation(z2).real))
    for name, s, string in (("Z1", s1, z1), ("Z2", s2, z2)):
        if abs(abs(s) - 1.0) > 1e-9 or abs(g.expectation(string) - s) > 1e-9:
            raise EncodingError(f"{name} is not sharp on the ground state")

    # Schmidt split of the 2x2 coefficient matrix (row: qubit-1 bit).
    coeff = np.array([[a[0], a[2]], [a[1], a[3]]], dtype=np.complex128)
    u_mat, svals, vh = np.linalg.svd(coeff)
    chi = math.atan2(float(svals[1]), float(svals[0]))

    operations: list[tuple[str, PauliString, float]] = []
    recorded = complex(1.0)

    if abs(chi) > 1e-14:
        operations.append(("xx_entangle", x12, chi))
    # exp(-i chi X1X2)|00> = cos chi |00> - i sin chi |11|; rephase |11> by +i
    target_phases = np.array([0.0, 0.0, 0.0, math.pi / 2.0])
    mat = np.array(
        [
            [1.0, -1.0, -1.0, -1.0],
            [1.0, -1.0, 1.0, 1.0],
            [1.0, 1.0, -1.0, 1.0],
            [1.0, 1.0, 1.0, -1.0],
        ]
    )
    phi, a2, b2, c2 = np.linalg.solve(mat, target_phases)
    recorded *= np.exp(1j * phi)
    for label, string, half, sign in (
        ("phase_z1", z1, a2, s1),
        ("phase_z2", z2, b2, s2),
        ("phase_z1z2", z12, c2, s1 * s2),
    ):
        if abs(half) > 1e-14:
            operations.append((label, string, float(half) * sign))

    for label, gate, xs, zs, sign in (
        ("local_q2", vh.T.copy(), x2, z2, s2),
        ("local_q1", u_mat, x1, z1, s1),
    ):
        delta, alpha, beta, gamma = _euler_zxz(gate)
        recorded *= np.exp(1j * delta)
        if abs(gamma) > 1e-14:
            operations.append((label + "_rz", zs, (gamma / 2.0) * sign))
        if abs(beta) > 1e-14:
            operations.append((label + "_rx", xs, beta / 2.0))
        if abs(alpha) > 1e-14:
            operations.append((label + "_rz2", zs, (alpha / 2.0) * sign))

    return {
        "amplitudes": a,
        "operations": operations,
        "recorded_phase": recorded,
    }


def memory_encode(spec: LatticeSpec, amplitudes) -> Statevector:
    """Prepare the memory state with the requested basis overlaps.

    Runs the :func:`memory_program` rotations on the ground state and folds
    the recorded scalar phase back in, so the returned state's overlaps with
    the four basis states equal the normalized amplitudes exactly (up to
    float roundoff).
    """
    if spec.boundary != "periodic":
        raise EncodingError("the quantum memory requires a periodic boundary")
    program = memory_program(spec, amplitudes)
    arr = ground_state_projector(spec).data
    for _, string, angle in program["operations"]:
        arr = apply_rotation(WeightedPauliSum.from_string(string), angle, arr)
    return Statevector.from_array(program["recorded_phase"] * arr)


# -- braiding statistics ----------------------------------------------------------


def anyon_walk(spec: LatticeSpec, plaquettes) -> StringPath:
    """The spin string transporting an anyon along a diagonal plaquette walk.

    Each hop between diagonally adjacent plaquettes applies one letter on
    their shared spin: Z for a bottom-left/top-right hop, X for the
    antidiagonal hop.
    """
    plaqs = [tuple(p) for p in plaquettes]
    if len(plaqs) < 2:
        raise PathError("a walk needs at least two plaquettes")
    prow, pcol = plaquette_range(spec)
    sites: list[tuple[int, int]] = []
    letters: list[str] = []
    for p, q in zip(plaqs, plaqs[1:]):
        di = q[0] - p[0]
        dj = q[1] - p[1]
        if spec.boundary == "periodic":
            di = (di + prow // 2) % prow - prow // 2
            dj = (dj + pcol // 2) % pcol - pcol // 2
        if (abs(di), abs(dj)) != (1, 1):
            raise PathError(f"plaquettes {p} and {q} are not diagonal neighbors")
        if (di, dj) == (1, 1):
            spin = q
        elif (di, dj) == (-1, -1):
            spin = p
        elif (di, dj) == (1, -1):
            spin = (p[0] + 1, p[1])
        else:
            spin = (p[0], p[1] + 1)
        spin = (spin[0] % spec.rows, spin[1] % spec.cols) if spec.boundary == "periodic" else spin
        sites.append(spin)
        letters.append("Z" if di * dj > 0 else "X")
    return StringPath(tuple(sites), tuple(letters))


def braiding_phase(spec: LatticeSpec, center: tuple[int, int] = (1, 1)) -> dict:
    """Transport an m anyon around an e anyon and read off the -1.

    An e pair is created by a Z spin flip placing one anyon on the dark
    plaquette ``center``; the m transport loop is the four-hop diagonal walk
    around that plaquette.  The loop operator leaves the ground state alone
    (+1) and multiplies the excited state by -1.
    """
    ci, cj = center
    if _anyon_kind(ci, cj) != "e":
        raise PathError("braiding reference expects a dark (e) center plaquette")
    ring = [
        (ci - 1, cj), (ci, cj + 1), (ci + 1, cj), (ci, cj - 1), (ci - 1, cj),
    ]
    loop = anyon_walk(spec, ring)
    loop_op = path_string(loop, spec)

    g = ground_state_projector(spec)
    error_spin = ((ci + 1) % spec.rows, (cj + 1) % spec.cols)
    error = PauliString.from_sites(spec.n_sites, {spec.site_index(*error_spin): "Z"})
    excited = Statevector.from_array(apply_string(error, g.data))

    ref = complex(g.expectation(loop_op))
    braided = complex(excited.expectation(loop_op))
    return {
        "center": [ci, cj],
        "error_spin": list(error_spin),
        "loop": loop.to_dict(),
        "expectation_ground": ref.real,
        "expectation_excited": braided.real,
        "braiding_phase": (braided / ref).real,
        "syndrome": syndrome_of(
            StringPath((error_spin,), ("Z",)), spec
        ).to_dict(),
    }


# -- hole-model logical qubits -----------------------------------------------------


def code_state(spec: LatticeSpec) -> Statevector:
    """Logical all-|0> state of the hole model.

    Projects |0...0> (already +1 for every Z-type face and for both kinds of
    hole logical Z) onto the +1 space of every kept vertex star.
    """
    if spec.model != "kitaev_holes":
        raise EncodingError("code_state is defined for the kitaev_holes model")
    check_dense_limit(spec.n_sites, "code_state")
    arr = Statevector.basis_state(spec.n_sites, 0).data
    for term in build_variant(spec).terms:
        if term.kind == "vertex":
            arr = (arr + apply_string(term.operator, arr)) / math.sqrt(2.0)
    norm = float(np.linalg.norm(arr))
    if norm < 1e-9:
        raise EncodingError("star projection annihilated the seed state")
    return Statevector.from_array(arr, normalize=True)


def hole_qubit(hole: HoleSpec, spec: LatticeSpec) -> LogicalQubit:
    """Wrap one single-plaquette hole of the spec as a logical qubit."""
    if spec.model != "kitaev_holes":
        raise EncodingError("hole qubits require the kitaev_holes model")
    if spec.boundary != "open":
        raise EncodingError("hole logicals need boundaries to terminate on")
    if hole not in spec.holes:
        raise EncodingError("hole is not part of the lattice spec")
    if len(hole.plaquettes) != 1:
        raise EncodingError("multi-plaquette holes are not supported as qubits")
    (a, b) = hole.plaquettes[0]
    if hole.kind == "smooth":
        return LogicalQubit(
            "smooth_hole", hole=hole, boundary_side="bottom",
            x_edges=tuple(("h", i, b) for i in range(a + 1, spec.rows)),
            z_edges=kitaev_face_edge_keys(spec, a, b),
        )
    return LogicalQubit(
        "rough_hole", hole=hole, boundary_side="top",
        x_edges=kitaev_star_edge_keys(spec, a, b),
        z_edges=tuple(("v", i, b) for i in range(0, a)),
    )


def hole_logicals(
    qubit: LogicalQubit, spec: LatticeSpec, boundary_side: str = "auto"
) -> tuple[PauliString, PauliString]:
    """(X_logical, Z_logical) of a hole qubit.

    Smooth hole: X string of edges from the hole straight down to the smooth
    bottom boundary; Z is the removed face (the Z loop around the hole).
    Rough hole: X is the removed vertex star (the X loop around the hole);
    Z string of edges straight up to the rough top boundary.

    Raises:
        EncodingError: string routed to a boundary of the wrong kind
            (smooth holes need a smooth boundary, rough holes a rough one).
    """
    if qubit.encoding not in ("smooth_hole", "rough_hole"):
        raise EncodingError("expected a hole-encoded qubit")
    if qubit.hole is None or len(qubit.hole.plaquettes) != 1:
        raise EncodingError("hole qubit must carry exactly one plaquette")
    (a, b) = qubit.hole.plaquettes[0]
    if qubit.encoding == "smooth_hole":
        if boundary_side not in ("auto", "bottom"):
            raise EncodingError(
                "a smooth hole's X string must end on a smooth boundary "
                "(bottom); the top boundary is rough"
            )
        x_bar = PauliString.from_sites(
            spec.n_sites,
            {kitaev_edge_index(spec, "h", i, b): "X" for i in range(a + 1, spec.rows)},
        )
        z_bar = kitaev_face_operator(spec, a, b)
    else:
        if boundary_side not in ("auto", "top"):
            raise EncodingError(
                "a rough hole's Z string must end on a rough boundary "
                "(top); the bottom boundary is smooth"
            )
        x_bar = kitaev_star_operator(spec, a, b)
        z_bar = PauliString.from_sites(
            spec.n_sites,
            {kitaev_edge_index(spec, "v", i, b): "Z" for i in range(0, a)},
        )
    return x_bar, z_bar


def logical_basis(spec: LatticeSpec, qubits) -> list[Statevector]:
    """Code-space basis states indexed by logical bits (first qubit = MSB)."""
    base = code_state(spec)
    xs = [hole_logicals(q, spec)[0] for q in qubits]
    states = []
    for idx in range(1 << len(qubits)):
        arr = base.data
        for k, x_bar in enumerate(xs):
            if (idx >> (len(qubits) - 1 - k)) & 1:
                arr = apply_string(x_bar, arr)
        states.append(Statevector.from_array(arr))
    return states


def magic_state(
    qubit: LogicalQubit, theta: float, spec: LatticeSpec
) -> Statevector:
    """Prepare ``(|0> + e^{i theta}|1>)/sqrt(2)`` on one hole qubit.

    The logical-X quarter rotation gives ``(|0> - i|1>)/sqrt(2)``; the -i is
    then turned into e^{i theta} by the phase gate P(theta + pi/2), realized
    as a logical-Z rotation.  The rotation's scalar prefactor
    ``exp(-i (theta + pi/2)/2)`` is a global phase the hardware never needs
    to apply; it is divided back out so the returned state matches the
    target exactly.
    """
    x_bar, z_bar = hole_logicals(qubit, spec)
    arr = code_state(spec).data
    arr = apply_rotation(WeightedPauliSum.from_string(x_bar), math.pi / 4.0, arr)
    phi = theta + math.pi / 2.0
    arr = apply_rotation(WeightedPauliSum.from_string(z_bar), phi / 2.0, arr)
    recorded = complex(np.exp(-1j * phi / 2.0))
    return Statevector.from_array(arr / recorded)


def magic_report(qubit: LogicalQubit, theta: float, spec: LatticeSpec) -> dict:
    """Magic-state preparation summary: fidelity vs analytic target, phase."""
    state = magic_state(qubit, theta, spec)
    x_bar, _ = hole_logicals(qubit, spec)
    zero = code_state(spec)
    one = Statevector.from_array(apply_string(x_bar, zero.data))
    target = Statevector.from_array(
        (zero.data + np.exp(1j * theta) * one.data) / math.sqrt(2.0)
    )
    return {
        "theta": theta,
        "recorded_phase": complex(np.exp(-1j * (theta + math.pi / 2.0) / 2.0)),
        "fidelity": float(state.fidelity(target)),
        "overlap_zero": complex(zero.inner(state)),
        "overlap_one": complex(one.inner(state)),
    }


# -- braiding CNOT -----------------------------------------------------------------


@dataclass(frozen=True)
class LoopCnot:
    """The braid of a smooth (control) hole around a rough (target) hole.

    The braid string is the X loop the control hole traverses; combined with
    the control's boundary tail it equals X_control * X_target up to kept
    stabilizers.  Applying ``exp(-i tg W)`` to |0, t> yields exactly the
    state CNOT produces on a superposed control ``cos(tg)|0> - i sin(tg)|1>``
    against target ``t``; at tg = pi/2 the basis rows |1, t> -> |1, 1-t|
    appear with recorded phase -i.  ``composite_apply`` realizes the exact
    CNOT from three commuting logical rotations plus a recorded scalar.
    """

    spec: LatticeSpec
    control: LogicalQubit
    target: LogicalQubit
    braid: PauliString

    @property
    def n_sites(self) -> int:
        return self.spec.n_sites

    def braid_propagator(self, tg: float) -> StringPropagator:
        return StringPropagator(self.n_sites, self.braid, tg)

    def apply(self, state: Statevector, tg: float) -> Statevector:
        return self.braid_propagator(tg).apply(state)

    def truth_table(self) -> dict:
        """Braid-route CNOT rows on the logical basis.

        Control-0 rows need no braid (the empty hole transports trivially);
        control-1 rows are generated from |0, t> with the tg = pi/2 loop
        propagator and come with the recorded -i.
        """
        basis = logical_basis(self.spec, [self.control, self.target])
        rows = []
        for t in (0, 1):
            out = self.apply(basis[t], 0.0)
            rows.append({
                "input": (0, t), "expected": (0, t),
                "recorded_phase": complex(1.0),
                "distance": float(np.linalg.norm(out.data - basis[t].data)),
            })
        for t in (0, 1):
            out = self.apply(basis[t], math.pi / 2.0)
            expected = basis[2 + (1 - t)]
            rows.append({
                "input": (1, t), "expected": (1, 1 - t),
                "recorded_phase": complex(-1j),
                "distance": float(
                    np.linalg.norm(out.data - (-1j) * expected.data)
                ),
            })
        return {"rows": rows, "max_distance": max(r["distance"] for r in rows)}

    def composite_apply(self, state: Statevector) -> tuple[Statevector, complex]:
        """Exact CNOT: three commuting rotations plus recorded e^{i pi/4}."""
        _, z_c = hole_logicals(self.control, self.spec)
        x_t, _ = hole_logicals(self.target, self.spec)
        zx = multiply(z_c, x_t)
        if zx.phase_exp:
            raise EncodingError("control-Z and target-X strings must be disjoint")
        arr = state.data
        arr = apply_rotation(WeightedPauliSum.from_string(z_c), math.pi / 4.0, arr)
        arr = apply_rotation(WeightedPauliSum.from_string(x_t), math.pi / 4.0, arr)
        arr = apply_rotation(WeightedPauliSum.from_string(zx), -math.pi / 4.0, arr)
        recorded = complex(np.exp(1j * math.pi / 4.0))
        return Statevector.from_array(recorded * arr), recorded


def loop_cnot(
    control_hole: HoleSpec,
    target_hole: HoleSpec,
    spec: LatticeSpec,
    loop_edges=None,
) -> LoopCnot:
    """Build the braiding CNOT handle for two holes of the lattice.

    The default braid string is the control's boundary tail times the loop
    around the target (the dual walk from the boundary to the control hole,
    around the target hole, and back, with doubly crossed edges cancelled).

    Raises:
        EncodingError: control is not smooth / target is not rough.
        TopologyError: the braid loop leaves the code space, fails to
            enclose the target, or fails to drag the control.
    """
    if control_hole.kind != "smooth":
        raise EncodingError("the braided (control) hole must be smooth")
    if target_hole.kind != "rough":
        raise EncodingError("the enclosed (target) hole must be rough")
    control = hole_qubit(control_hole, spec)
    target = hole_qubit(target_hole, spec)
    x_c, z_c = hole_logicals(control, spec)
    x_t, z_t = hole_logicals(target, spec)

    if loop_edges is None:
        braid = multiply(x_c, x_t)
        if braid.phase_exp:
            raise TopologyError("braid string must combine with phase +1")
    else:
        sites = {}
        for key in loop_edges:
            kind, i, j = key
            sites[kitaev_edge_index(spec, str(kind), int(i), int(j))] = "X"
        braid = PauliString.from_sites(spec.n_sites, sites)

    for term in build_variant(spec).terms:
        if not commutes(braid, term.operator):
            raise TopologyError(
                f"braid loop leaves the code space (anticommutes with the "
                f"{term.kind} term at {term.index})"
            )
    if commutes(braid, z_t):
        raise TopologyError("loop does not enclose the target hole")
    if commutes(braid, z_c):
        raise TopologyError("loop does not drag the control hole around")
    return LoopCnot(spec, control, target, braid)


# -- hole moves --------------------------------------------------------------------


def prepare_hole_superposition(
    qubit: LogicalQubit, tg: float, spec: LatticeSpec
) -> Statevector:
    """``exp(-i tg X_logical)|0...0>_L``: hole empty/occupied superposition."""
    x_bar, _ = hole_logicals(qubit, spec)
    arr = apply_rotation(
        WeightedPauliSum.from_string(x_bar), tg, code_state(spec).data
    )
    return Statevector.from_array(arr)


def naive_move_error(
    state: Statevector,
    extension: tuple,
    spec: LatticeSpec,
    qubit: LogicalQubit,
    tg: float,
) -> dict:
    """Compare the single-Pauli hole move against the intended extension.

    ``state`` must be the prepared superposition ``exp(-i tg X_bar)|0>_L``.
    The naive move applies one X on the extension edge; the intended result
    is the propagator of the extended string on |0>_L.  Their distance is
    ``2|cos tg| * f`` with the overlap factor
    ``f = ||(X_ext - 1)|0>_L|| / 2``, which the oracle computes directly.
    The faithful route -- compiling the extended string propagator as one
    pulse schedule -- matches the intended state to numerical precision.
    """
    if qubit.encoding != "smooth_hole":
        raise EncodingError("hole moves are demonstrated on a smooth hole")
    x_bar, _ = hole_logicals(qubit, spec)
    kind, i, j = extension
    ext_index = kitaev_edge_index(spec, str(kind), int(i), int(j))
    if ext_index in x_bar.support:
        raise EncodingError("extension edge already belongs to the hole string")
    ext = PauliString.from_sites(spec.n_sites, {ext_index: "X"})
    extended = multiply(x_bar, ext)

    base = code_state(spec)
    prepared = prepare_hole_superposition(qubit, tg, spec)
    prep_err = float(np.linalg.norm(state.data - prepared.data))
    if prep_err > 1e-8:
        raise ValueError(
            "state is not the prepared hole superposition for this tg "
            f"(deviation {prep_err:.2e})"
        )

    naive = apply_string(ext, state.data)
    intended = apply_rotation(
        WeightedPauliSum.from_string(extended), tg, base.data
    )
    distance = float(np.linalg.norm(naive - intended))
    factor = float(np.linalg.norm(apply_string(ext, base.data) - base.data)) / 2.0
    predicted = 2.0 * abs(math.cos(tg)) * factor

    support = extended.support
    graph = ConnectivityGraph.from_edges(
        spec.n_sites, [(a, b) for a in support for b in support if a < b]
    )
    schedule = compile_schedule(extended, graph, strategy="auto", tg=tg)
    loop_route = apply_schedule(schedule, base)
    loop_route_distance = float(np.linalg.norm(loop_route.data - intended))

    return {
        "tg": tg,
        "extension_edge": [kind, int(i), int(j)],
        "distance": distance,
        "overlap_factor": factor,
        "predicted": predicted,
        "loop_route_distance": loop_route_distance,
        "string_weight": extended.weight,
    }
