"""Dense-matrix and statevector oracle for verifying schedules and states.

Every symbolic claim in the package can be replayed here numerically.  Pauli
strings act as index permutations with phase vectors, so applying a string
(or a pulse, which is ``cos(t) - i sin(t) H`` for involution generators) to a
state costs O(2^n) and to a full matrix O(4^n) -- no dense matrix products
are ever formed.

The register width accepted for dense work is capped by the environment
variable ``QSA_MAX_DENSE_QUBITS`` (default 14).  Full-matrix comparisons are
additionally capped at 10 qubits; beyond that, unitaries are compared by
their action on a batch of seeded random states.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .pauli_core import PauliString, WeightedPauliSum, is_involution
from .propagator_engine import InvolutionRotation, make_attachment, make_swapper
from .schedule_compiler import QsaSchedule

#: Hard cap for full-matrix (4^n) comparisons.
MATRIX_QUBIT_CAP = 10

#: Default number of probe states above the matrix cap.
DEFAULT_PROBES = 20

DENSE_LIMIT_ENV = "QSA_MAX_DENSE_QUBITS"
DEFAULT_DENSE_LIMIT = 14


class ResourceLimitError(RuntimeError):
    """Raised when a dense operation exceeds the configured qubit budget."""


def max_dense_qubits() -> int:
    """Current dense-register cap (env ``QSA_MAX_DENSE_QUBITS``, default 14)."""
    raw = os.environ.get(DENSE_LIMIT_ENV, "")
    try:
        return int(raw) if raw else DEFAULT_DENSE_LIMIT
    except ValueError:
        raise ResourceLimitError(
            f"invalid {DENSE_LIMIT_ENV} value {raw!r}; expected an integer"
        ) from None


def check_dense_limit(n_sites: int, context: str) -> None:
    limit = max_dense_qubits()
    if n_sites > limit:
        raise ResourceLimitError(
            f"{context}: {n_sites} sites exceeds the dense limit of {limit} "
            f"(set {DENSE_LIMIT_ENV} to raise it)"
        )


# -- Pauli action as permutation + phase -------------------------------------


def string_action(string: PauliString) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(perm, phase)`` with ``P |k> = phase[k] |perm[k]>``.

    Site 0 is the leftmost tensor factor (most significant bit), matching
    ``kron(site0, site1, ...)``.
    """
    n = string.n_sites
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    perm = idx.copy()
    phase = np.full(dim, string.phase, dtype=np.complex128)
    for site, letter in enumerate(string.letters):
        if letter == "I":
            continue
        bit = (idx >> (n - 1 - site)) & 1
        sign = 1.0 - 2.0 * bit
        if letter == "X":
            perm = perm ^ (1 << (n - 1 - site))
        elif letter == "Y":
            perm = perm ^ (1 << (n - 1 - site))
            phase = phase * (1j * sign)
        else:  # Z
            phase = phase * sign
    return perm, phase


def apply_string(string: PauliString, array: np.ndarray) -> np.ndarray:
    """Apply a Pauli string to a state (dim,) or matrix (dim, k) array."""
    perm, phase = string_action(string)
    out = np.empty_like(array)
    if array.ndim == 1:
        out[perm] = phase * array
    else:
        out[perm, :] = phase[:, None] * array
    return out


def apply_sum(op: WeightedPauliSum, array: np.ndarray) -> np.ndarray:
    """Apply a weighted Pauli sum to a state or matrix array."""
    out = np.zeros_like(array)
    for coeff, string in op.terms:
        out += coeff * apply_string(string, array)
    return out


def apply_rotation(
    generator: WeightedPauliSum, angle: float, array: np.ndarray
) -> np.ndarray:
    """Apply ``exp(-i * angle * generator)`` assuming the generator is an
    involution (exact closed form ``cos - i sin H``)."""
    return math.cos(angle) * array - 1j * math.sin(angle) * apply_sum(
        generator, array
    )


def _as_sum(op: PauliString | WeightedPauliSum) -> WeightedPauliSum:
    if isinstance(op, PauliString):
        return WeightedPauliSum.from_string(op)
    return op


# -- dense operators ----------------------------------------------------------


@dataclass(frozen=True)
class DenseOperator:
    """An explicit matrix on ``n_sites`` qubits."""

    n_sites: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        dim = 1 << self.n_sites
        if self.matrix.shape != (dim, dim):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match "
                f"{self.n_sites} sites"
            )

    @property
    def dim(self) -> int:
        return 1 << self.n_sites


def to_matrix(op: PauliString | WeightedPauliSum) -> DenseOperator:
    """Explicit matrix of a string or weighted sum (respects the dense cap)."""
    n = op.n_sites
    check_dense_limit(n, "to_matrix")
    dim = 1 << n
    if isinstance(op, PauliString):
        perm, phase = string_action(op)
        m = np.zeros((dim, dim), dtype=np.complex128)
        m[perm, np.arange(dim)] = phase
        return DenseOperator(n, m)
    m = np.zeros((dim, dim), dtype=np.complex128)
    for coeff, string in op.terms:
        perm, phase = string_action(string)
        m[perm, np.arange(dim)] += coeff * phase
    return DenseOperator(n, m)


def expm(
    generator: PauliString | WeightedPauliSum, angle: float
) -> DenseOperator:
    """Exact ``exp(-i * angle * generator)`` as a dense matrix.

    Involution generators use the closed form; anything else falls back to a
    Hermitian eigendecomposition.
    """
    h = _as_sum(generator)
    check_dense_limit(h.n_sites, "expm")
    dim = 1 << h.n_sites
    if is_involution(h):
        m = to_matrix(h).matrix
        return DenseOperator(
            h.n_sites,
            math.cos(angle) * np.eye(dim, dtype=np.complex128)
            - 1j * math.sin(angle) * m,
        )
    m = to_matrix(h).matrix
    vals, vecs = np.linalg.eigh(m)
    u = (vecs * np.exp(-1j * angle * vals)) @ vecs.conj().T
    return DenseOperator(h.n_sites, u)


def _matrix_of(x: DenseOperator | np.ndarray) -> np.ndarray:
    return x.matrix if isinstance(x, DenseOperator) else x


def distance(a: DenseOperator | np.ndarray, b: DenseOperator | np.ndarray) -> float:
    """Spectral distance: the largest singular value of ``a - b``."""
    ma, mb = _matrix_of(a), _matrix_of(b)
    if ma.shape != mb.shape:
        raise ValueError(f"shape mismatch {ma.shape} vs {mb.shape}")
    return float(np.linalg.svd(ma - mb, compute_uv=False)[0])


def frobenius_distance(
    a: DenseOperator | np.ndarray, b: DenseOperator | np.ndarray
) -> float:
    """Frobenius distance; an upper bound on the spectral distance."""
    ma, mb = _matrix_of(a), _matrix_of(b)
    return float(np.linalg.norm(ma - mb))


# -- statevectors --------------------------------------------------------------


@dataclass(frozen=True)
class Statevector:
    """A normalized pure state on ``n_sites`` qubits."""

    n_sites: int
    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.shape != (1 << self.n_sites,):
            raise ValueError(
                f"state dimension {self.data.shape} does not match "
                f"{self.n_sites} sites"
            )
        norm = float(np.linalg.norm(self.data))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state norm {norm} deviates from 1 beyond 1e-12")

    @classmethod
    def from_array(cls, array: np.ndarray, normalize: bool = False) -> "Statevector":
        n = int(array.shape[0]).bit_length() - 1
        if (1 << n) != array.shape[0]:
            raise ValueError(f"dimension {array.shape[0]} is not a power of two")
        data = np.asarray(array, dtype=np.complex128)
        if normalize:
            norm = float(np.linalg.norm(data))
            if norm < 1e-12:
                raise ValueError("cannot normalize a (near-)zero state")
            data = data / norm
        return cls(n, data)

    @classmethod
    def basis_state(cls, n_sites: int, index: int = 0) -> "Statevector":
        check_dense_limit(n_sites, "basis_state")
        data = np.zeros(1 << n_sites, dtype=np.complex128)
        data[index] = 1.0
        return cls(n_sites, data)

    @classmethod
    def random(cls, n_sites: int, seed: int) -> "Statevector":
        check_dense_limit(n_sites, "random state")
        rng = np.random.default_rng(seed)
        data = rng.normal(size=1 << n_sites) + 1j * rng.normal(size=1 << n_sites)
        return cls.from_array(data, normalize=True)

    def inner(self, other: "Statevector") -> complex:
        return complex(np.vdot(self.data, other.data))

    def fidelity(self, other: "Statevector") -> float:
        """``|<self|other>|**2``."""
        return float(abs(self.inner(other)) ** 2)

    def expectation(self, op: PauliString | WeightedPauliSum) -> complex:
        return complex(np.vdot(self.data, apply_sum(_as_sum(op), self.data)))

    def apply(self, op: PauliString | WeightedPauliSum) -> "Statevector":
        """Apply a unitary Pauli string (weighted sums must stay norm-preserving)."""
        return Statevector.from_array(apply_sum(_as_sum(op), self.data))

    def apply_rotation(
        self, generator: PauliString | WeightedPauliSum, angle: float
    ) -> "Statevector":
        return Statevector.from_array(
            apply_rotation(_as_sum(generator), angle, self.data)
        )


# -- schedule execution --------------------------------------------------------


def schedule_pulses(
    schedule: QsaSchedule, tg: float | None = None
) -> list[tuple[WeightedPauliSum, float]]:
    """The schedule's pulse list in time order (first applied first)."""
    n = schedule.n_sites
    if tg is None:
        tg = schedule.tg
    pulses: list[tuple[WeightedPauliSum, float]] = []

    def add(rot: InvolutionRotation) -> None:
        pulses.append((rot.generator, rot.angle))

    for spec in schedule.final_swappers:
        add(make_swapper(spec, n, "inverse"))
    for layer in reversed(schedule.layers):
        for spec in layer:
            add(make_attachment(spec, n, "inverse"))
    pulses.append((WeightedPauliSum.from_string(schedule.seed), tg))
    for layer in schedule.layers:
        for spec in layer:
            add(make_attachment(spec, n, "forward"))
    for spec in schedule.final_swappers:
        add(make_swapper(spec, n, "forward"))
    return pulses


def apply_schedule(
    schedule: QsaSchedule, state: Statevector, tg: float | None = None
) -> Statevector:
    """Run the schedule's pulse sequence on a state."""
    if state.n_sites != schedule.n_sites:
        raise ValueError("state width does not match schedule")
    arr = state.data
    for generator, angle in schedule_pulses(schedule, tg):
        arr = apply_rotation(generator, angle, arr)
    return Statevector.from_array(arr)


def schedule_unitary(schedule: QsaSchedule, tg: float | None = None) -> DenseOperator:
    """The ordered pulse product as an explicit matrix.

    Time order: inverse swappers, inverse attachment pulses (outermost layer
    first), the seed propagator, forward attachment pulses (innermost layer
    first), forward swappers.  Columns are transformed in place, so the cost
    is O(#pulses * 4^n) with no matrix multiplications.
    """
    n = schedule.n_sites
    check_dense_limit(n, "schedule_unitary")
    dim = 1 << n
    m = np.eye(dim, dtype=np.complex128)
    for generator, angle in schedule_pulses(schedule, tg):
        m = apply_rotation(generator, angle, m)
    return DenseOperator(n, m)


def verify_schedule(
    schedule: QsaSchedule,
    tg: float | None = None,
    tolerance: float = 1e-10,
    n_probes: int = DEFAULT_PROBES,
    seed: int = 7,
) -> dict:
    """Compare the schedule's pulse product against the target exponential.

    Up to 10 sites the comparison is the exact spectral distance between the
    full matrices.  Above that (and up to the dense limit) the two unitaries
    are compared by their action on ``n_probes`` seeded random states, and
    the reported distance is the largest L2 deviation.

    Returns a deterministic report dict with the metric, distance, tolerance
    and pass flag.
    """
    n = schedule.n_sites
    tg_eff = schedule.tg if tg is None else tg
    target_sum = WeightedPauliSum.from_string(schedule.target)
    if n <= MATRIX_QUBIT_CAP:
        u = schedule_unitary(schedule, tg_eff)
        v = expm(target_sum, tg_eff)
        dist = distance(u, v)
        metric = "spectral_distance"
        report_seed = None
    else:
        check_dense_limit(n, "verify_schedule")
        worst = 0.0
        for k in range(n_probes):
            probe = Statevector.random(n, seed + k)
            via_schedule = apply_schedule(schedule, probe, tg_eff)
            via_target = probe.apply_rotation(target_sum, tg_eff)
            worst = max(
                worst,
                float(np.linalg.norm(via_schedule.data - via_target.data)),
            )
        dist = worst
        metric = f"max_state_l2[{n_probes} probes]"
        report_seed = seed
    return {
        "n_sites": n,
        "tg": tg_eff,
        "metric": metric,
        "distance": dist,
        "tolerance": tolerance,
        "seed": report_seed,
        "passed": bool(dist <= tolerance),
    }
