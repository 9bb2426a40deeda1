"""Plaquette spin models: builders, digital evolution, ground-state routes.

Two models share the :class:`PlaquetteSet` container:

* ``wen`` -- one spin per vertex of a ``rows x cols`` grid (row 0 at the
  bottom, site index ``i*cols + j``); the four-body term anchored at
  plaquette ``(i, j)`` reads X, Z / Z, X clockwise from its bottom-left spin:
  ``X(i,j) Z(i,j+1) Z(i+1,j) X(i+1,j+1)``.  Twists deform one row into a
  five-body X,Z/Z,Y,X defect plus shifted four-body terms.
* ``kitaev_holes`` -- one qubit per edge of a ``rows x cols`` vertex grid
  with a rough top boundary (the top row of horizontal edges is absent, so
  top faces are three-body and top vertex stars are missing) and smooth
  left/right/bottom boundaries.  Faces carry Z letters, vertex stars X
  letters.  Holes omit single faces (smooth) or vertex stars (rough).

Every builder checks that all emitted terms pairwise commute and that the
four digital groups have pairwise site-disjoint members.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .pauli_core import PauliString, WeightedPauliSum, commutes
from .schedule_compiler import ConnectivityGraph, QsaSchedule, compile_schedule
from .dense_oracle import (
    Statevector,
    apply_rotation,
    apply_string,
    check_dense_limit,
    schedule_pulses,
)

MODELS = ("wen", "kitaev_holes")
BOUNDARIES = ("open", "periodic")
HOLE_KINDS = ("smooth", "rough")


class LatticeError(ValueError):
    """Raised for inconsistent lattice specifications or geometry."""


@dataclass(frozen=True)
class HoleSpec:
    """An undriven region: faces (smooth) or vertex stars (rough).

    For the wen model the kind is carried but has no semantic effect; the
    listed plaquettes are simply never driven.
    """

    plaquettes: tuple[tuple[int, int], ...]
    kind: str = "smooth"

    def __post_init__(self) -> None:
        if self.kind not in HOLE_KINDS:
            raise LatticeError(f"hole kind must be one of {HOLE_KINDS}, got {self.kind!r}")
        if not self.plaquettes:
            raise LatticeError("hole must list at least one plaquette")

    def to_dict(self) -> dict:
        return {"plaquettes": [list(p) for p in self.plaquettes], "kind": self.kind}

    @classmethod
    def from_dict(cls, data: dict) -> "HoleSpec":
        return cls(
            tuple((int(i), int(j)) for i, j in data["plaquettes"]),
            str(data.get("kind", "smooth")),
        )


@dataclass(frozen=True)
class TwistSpec:
    """A dislocation anchored at plaquette ``(row, col)``.

    The anchored plaquette becomes the five-body defect; every standard
    plaquette to its right in the same row is replaced by a skewed four-body
    term, out to the open right boundary.
    """

    row: int
    col: int

    def to_dict(self) -> dict:
        return {"row": self.row, "col": self.col}

    @classmethod
    def from_dict(cls, data: dict) -> "TwistSpec":
        return cls(int(data["row"]), int(data["col"]))


@dataclass(frozen=True)
class LatticeSpec:
    """Geometry + model + coupling for a plaquette lattice."""

    rows: int
    cols: int
    boundary: str = "open"
    model: str = "wen"
    J: float = 1.0
    holes: tuple[HoleSpec, ...] = field(default_factory=tuple)
    twists: tuple[TwistSpec, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.rows < 2 or self.cols < 2:
            raise LatticeError(f"lattice needs rows, cols >= 2, got {self.rows}x{self.cols}")
        if self.boundary not in BOUNDARIES:
            raise LatticeError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        if self.model not in MODELS:
            raise LatticeError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.boundary == "periodic" and (self.rows % 2 or self.cols % 2):
            raise LatticeError(
                "periodic lattices need even rows and cols for the four "
                "commuting groups"
            )
        if self.twists:
            if self.model != "wen":
                raise LatticeError("twists are only defined for the wen model")
            if self.boundary != "open":
                raise LatticeError("twists require an open boundary")
            if self.cols < 3:
                raise LatticeError("twists need cols >= 3")
            rows_used = set()
            for tw in self.twists:
                if not (0 <= tw.row <= self.rows - 2 and 0 <= tw.col <= self.cols - 3):
                    raise LatticeError(f"twist anchor ({tw.row}, {tw.col}) out of range")
                if tw.row in rows_used:
                    raise LatticeError("at most one twist per plaquette row")
                rows_used.add(tw.row)

    @property
    def n_sites(self) -> int:
        """Qubit count: spins for wen, edges for kitaev_holes."""
        if self.model == "wen":
            return self.rows * self.cols
        if self.boundary == "periodic":
            return 2 * self.rows * self.cols
        return (self.rows - 1) * (2 * self.cols - 1)

    def site_index(self, i: int, j: int) -> int:
        """Row-major spin index for the wen model (row 0 at the bottom)."""
        if self.model != "wen":
            raise LatticeError("site_index addresses wen spins; use edge_index")
        if self.boundary == "periodic":
            i %= self.rows
            j %= self.cols
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise LatticeError(f"spin ({i}, {j}) outside the {self.rows}x{self.cols} grid")
        return i * self.cols + j

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "boundary": self.boundary,
            "model": self.model,
            "J": self.J,
            "holes": [h.to_dict() for h in self.holes],
            "twists": [t.to_dict() for t in self.twists],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LatticeSpec":
        return cls(
            rows=int(data["rows"]),
            cols=int(data["cols"]),
            boundary=str(data.get("boundary", "open")),
            model=str(data.get("model", "wen")),
            J=float(data.get("J", 1.0)),
            holes=tuple(HoleSpec.from_dict(h) for h in data.get("holes", [])),
            twists=tuple(TwistSpec.from_dict(t) for t in data.get("twists", [])),
        )


@dataclass(frozen=True)
class PlaquetteTerm:
    """One driven stabilizer term.

    kind is ``plaquette``/``twist``/``skew`` for wen and ``face``/``vertex``
    for the hole model; group is the digital stage (1..4) the term runs in.
    """

    index: tuple[int, int]
    operator: PauliString
    group: int
    kind: str = "plaquette"


@dataclass(frozen=True)
class PlaquetteSet:
    """All driven terms of a lattice, with their digital grouping."""

    n_sites: int
    terms: tuple[PlaquetteTerm, ...]

    def operators(self) -> tuple[PauliString, ...]:
        return tuple(t.operator for t in self.terms)

    def term_at(self, index: tuple[int, int], kind: str | None = None) -> PlaquetteTerm:
        for t in self.terms:
            if t.index == tuple(index) and (kind is None or t.kind == kind):
                return t
        raise LatticeError(f"no driven term at index {tuple(index)} (hole or out of range)")

    def groups(self) -> dict[int, tuple[PlaquetteTerm, ...]]:
        out: dict[int, list[PlaquetteTerm]] = {}
        for t in self.terms:
            out.setdefault(t.group, []).append(t)
        return {g: tuple(v) for g, v in sorted(out.items())}

    def hamiltonian(self, J: float) -> WeightedPauliSum:
        """``H = -J * sum(terms)``."""
        return WeightedPauliSum.from_terms(
            self.n_sites, [(-J, t.operator) for t in self.terms]
        )


def _validate_set(pset: PlaquetteSet) -> None:
    """Builder sanity: mutual commutation and group support-disjointness."""
    ops = pset.terms
    for a in range(len(ops)):
        for b in range(a + 1, len(ops)):
            if not commutes(ops[a].operator, ops[b].operator):
                raise LatticeError(
                    f"terms {ops[a].index}/{ops[a].kind} and "
                    f"{ops[b].index}/{ops[b].kind} do not commute"
                )
    for group, members in pset.groups().items():
        seen: set[int] = set()
        for term in members:
            overlap = seen & set(term.operator.support)
            if overlap:
                raise LatticeError(
                    f"group {group} members share sites {sorted(overlap)}"
                )
            seen |= set(term.operator.support)


# -- wen builder --------------------------------------------------------------


def _wen_group(i: int, j: int) -> int:
    return 2 * (i % 2) + (j % 2) + 1


def _wen_plaquette(spec: LatticeSpec, i: int, j: int) -> PauliString:
    s = spec.site_index
    return PauliString.from_sites(
        spec.n_sites,
        {
            s(i, j): "X",
            s(i, j + 1): "Z",
            s(i + 1, j): "Z",
            s(i + 1, j + 1): "X",
        },
    )


def _wen_twist_pentagon(spec: LatticeSpec, i: int, j: int) -> PauliString:
    """Five-body defect at anchor (i, j); reads X,Z / Z,Y,X over its two rows."""
    s = spec.site_index
    return PauliString.from_sites(
        spec.n_sites,
        {
            s(i, j): "X",
            s(i, j + 1): "Z",
            s(i + 1, j): "Z",
            s(i + 1, j + 1): "Y",
            s(i + 1, j + 2): "X",
        },
    )


def _wen_skew(spec: LatticeSpec, i: int, j: int) -> PauliString:
    """Skewed four-body term in a twist row (shifted one column at the bottom)."""
    s = spec.site_index
    return PauliString.from_sites(
        spec.n_sites,
        {
            s(i, j): "X",
            s(i, j + 1): "Z",
            s(i + 1, j + 1): "Z",
            s(i + 1, j + 2): "X",
        },
    )


def plaquette_range(spec: LatticeSpec) -> tuple[int, int]:
    """Plaquette grid shape: (rows-1, cols-1) open, (rows, cols) periodic."""
    if spec.boundary == "periodic":
        return spec.rows, spec.cols
    return spec.rows - 1, spec.cols - 1


def build_wen(spec: LatticeSpec) -> PlaquetteSet:
    """All driven wen terms with digital groups ``2*(i%2) + (j%2) + 1``.

    Holes skip their plaquettes; a twist replaces its anchor plaquette by the
    five-body defect and the rest of its row by skewed terms.

    Raises:
        LatticeError: wrong model; periodic grids with odd rows or cols
            (the four-group tiling needs even wraparound); invalid holes.
    """
    if spec.model != "wen":
        raise LatticeError(f"build_wen needs model 'wen', got {spec.model!r}")
    prow, pcol = plaquette_range(spec)
    if spec.boundary == "periodic" and (spec.rows % 2 or spec.cols % 2):
        raise LatticeError(
            "periodic lattices need even rows and cols for the four commuting groups"
        )
    holes: set[tuple[int, int]] = set()
    for hole in spec.holes:
        for (i, j) in hole.plaquettes:
            if not (0 <= i < prow and 0 <= j < pcol):
                raise LatticeError(f"hole plaquette ({i}, {j}) out of range")
            if (i, j) in holes:
                raise LatticeError(f"holes overlap at plaquette ({i}, {j})")
            holes.add((i, j))

    twist_rows = {tw.row: tw.col for tw in spec.twists}
    terms: list[PlaquetteTerm] = []
    for i in range(prow):
        for j in range(pcol):
            if (i, j) in holes:
                continue
            if i in twist_rows:
                c = twist_rows[i]
                if j == c:
                    terms.append(
                        PlaquetteTerm((i, j), _wen_twist_pentagon(spec, i, j),
                                      _wen_group(i, j), "twist")
                    )
                    continue
                if j > c:
                    # the anchor's pentagon covers columns c..c+2; skewed terms
                    # continue from column c+1 and the row ends one term early
                    if j <= pcol - 2:
                        terms.append(
                            PlaquetteTerm((i, j), _wen_skew(spec, i, j),
                                          _wen_group(i, j), "skew")
                        )
                    continue
            terms.append(
                PlaquetteTerm((i, j), _wen_plaquette(spec, i, j),
                              _wen_group(i, j), "plaquette")
            )
    pset = PlaquetteSet(spec.n_sites, tuple(terms))
    _validate_set(pset)
    return pset


# -- hole-model builder --------------------------------------------------------


def _kitaev_edges(spec: LatticeSpec) -> dict[tuple, int]:
    """Deterministic edge -> qubit indexing.

    Open boundary: vertical edges first (row-major), then horizontal edges of
    rows 1..rows-1 (the rough top has no row-0 horizontals).  Periodic: every
    vertex gets one downward and one rightward edge.
    """
    edges: dict[tuple, int] = {}
    r, c = spec.rows, spec.cols
    if spec.boundary == "periodic":
        for i in range(r):
            for j in range(c):
                edges[("v", i, j)] = i * c + j
        for i in range(r):
            for j in range(c):
                edges[("h", i, j)] = r * c + i * c + j
    else:
        for i in range(r - 1):
            for j in range(c):
                edges[("v", i, j)] = i * c + j
        for i in range(1, r):
            for j in range(c - 1):
                edges[("h", i, j)] = (r - 1) * c + (i - 1) * (c - 1) + j
    return edges


def kitaev_edge_index(spec: LatticeSpec, kind: str, i: int, j: int) -> int:
    """Qubit index of edge ('v', i, j) = (i,j)-(i+1,j) or ('h', i, j) = (i,j)-(i,j+1)."""
    if spec.boundary == "periodic":
        i %= spec.rows
        j %= spec.cols
    table = _kitaev_edges(spec)
    key = (kind, i, j)
    if key not in table:
        raise LatticeError(f"edge {key} does not exist on this lattice")
    return table[key]


def _kitaev_face_edges(spec: LatticeSpec, i: int, j: int) -> list[tuple]:
    if spec.boundary == "periodic":
        return [("v", i, j), ("v", i, (j + 1) % spec.cols),
                ("h", i, j), ("h", (i + 1) % spec.rows, j)]
    out = [("v", i, j), ("v", i, j + 1), ("h", i + 1, j)]
    if i >= 1:
        out.append(("h", i, j))
    return out


def _kitaev_star_edges(spec: LatticeSpec, i: int, j: int) -> list[tuple]:
    if spec.boundary == "periodic":
        return [("v", i, j), ("v", (i - 1) % spec.rows, j),
                ("h", i, j), ("h", i, (j - 1) % spec.cols)]
    out = [("v", i - 1, j)]
    if i <= spec.rows - 2:
        out.append(("v", i, j))
    if j >= 1:
        out.append(("h", i, j - 1))
    if j <= spec.cols - 2:
        out.append(("h", i, j))
    return out


def kitaev_face_range(spec: LatticeSpec):
    if spec.boundary == "periodic":
        return range(spec.rows), range(spec.cols)
    return range(spec.rows - 1), range(spec.cols - 1)


def kitaev_star_range(spec: LatticeSpec):
    if spec.boundary == "periodic":
        return range(spec.rows), range(spec.cols)
    return range(1, spec.rows), range(spec.cols)


def kitaev_face_edge_keys(spec: LatticeSpec, i: int, j: int) -> tuple[tuple, ...]:
    """Edge keys ('v'|'h', i, j) bounding face (i, j)."""
    fr, fc = kitaev_face_range(spec)
    if i not in fr or j not in fc:
        raise LatticeError(f"face ({i}, {j}) out of range")
    return tuple(_kitaev_face_edges(spec, i, j))


def kitaev_star_edge_keys(spec: LatticeSpec, i: int, j: int) -> tuple[tuple, ...]:
    """Edge keys ('v'|'h', i, j) meeting vertex (i, j)."""
    sr, sc = kitaev_star_range(spec)
    if i not in sr or j not in sc:
        raise LatticeError(f"vertex star ({i}, {j}) out of range")
    return tuple(_kitaev_star_edges(spec, i, j))


def kitaev_face_operator(spec: LatticeSpec, i: int, j: int) -> PauliString:
    """The Z-type face operator at (i, j), whether driven or removed as a hole."""
    fr, fc = kitaev_face_range(spec)
    if i not in fr or j not in fc:
        raise LatticeError(f"face ({i}, {j}) out of range")
    edges = _kitaev_edges(spec)
    return PauliString.from_sites(
        spec.n_sites, {edges[e]: "Z" for e in _kitaev_face_edges(spec, i, j)}
    )


def kitaev_star_operator(spec: LatticeSpec, i: int, j: int) -> PauliString:
    """The X-type vertex star at (i, j), whether driven or removed as a hole."""
    sr, sc = kitaev_star_range(spec)
    if i not in sr or j not in sc:
        raise LatticeError(f"vertex star ({i}, {j}) out of range")
    edges = _kitaev_edges(spec)
    return PauliString.from_sites(
        spec.n_sites, {edges[e]: "X" for e in _kitaev_star_edges(spec, i, j)}
    )


def build_kitaev_holes(spec: LatticeSpec) -> PlaquetteSet:
    """Face (Z) and vertex-star (X) terms with hole regions omitted."""
    if spec.model != "kitaev_holes":
        raise LatticeError(
            f"build_kitaev_holes needs model 'kitaev_holes', got {spec.model!r}"
        )
    if spec.boundary == "periodic" and (spec.rows % 2 or spec.cols % 2):
        raise LatticeError(
            "periodic lattices need even rows and cols for the four commuting groups"
        )
    edges = _kitaev_edges(spec)
    n = spec.n_sites

    smooth_skips: set[tuple[int, int]] = set()
    rough_skips: set[tuple[int, int]] = set()
    for hole in spec.holes:
        target = smooth_skips if hole.kind == "smooth" else rough_skips
        for coord in hole.plaquettes:
            if coord in target:
                raise LatticeError(f"holes overlap at {coord}")
            target.add(coord)

    terms: list[PlaquetteTerm] = []
    removed_support: list[set[int]] = []
    fr, fc = kitaev_face_range(spec)
    for i in fr:
        for j in fc:
            sites = {edges[e]: "Z" for e in _kitaev_face_edges(spec, i, j)}
            if (i, j) in smooth_skips:
                smooth_skips.discard((i, j))
                removed_support.append(set(sites))
                continue
            terms.append(
                PlaquetteTerm((i, j), PauliString.from_sites(n, sites),
                              1 + (i + j) % 2, "face")
            )
    sr, sc = kitaev_star_range(spec)
    for i in sr:
        for j in sc:
            sites = {edges[e]: "X" for e in _kitaev_star_edges(spec, i, j)}
            if (i, j) in rough_skips:
                rough_skips.discard((i, j))
                removed_support.append(set(sites))
                continue
            terms.append(
                PlaquetteTerm((i, j), PauliString.from_sites(n, sites),
                              3 + (i + j) % 2, "vertex")
            )
    if smooth_skips:
        raise LatticeError(f"smooth hole faces out of range: {sorted(smooth_skips)}")
    if rough_skips:
        raise LatticeError(f"rough hole vertices out of range: {sorted(rough_skips)}")
    for a in range(len(removed_support)):
        for b in range(a + 1, len(removed_support)):
            if removed_support[a] & removed_support[b]:
                raise LatticeError("hole regions share edges; holes must be disjoint")

    pset = PlaquetteSet(n, tuple(terms))
    _validate_set(pset)
    return pset


def build_variant(spec: LatticeSpec) -> PlaquetteSet:
    """Dispatch to the model-specific builder (twists/holes included)."""
    if spec.model == "wen":
        return build_wen(spec)
    return build_kitaev_holes(spec)


# -- schedules ----------------------------------------------------------------


def plaquette_schedule(
    i: int, j: int, spec: LatticeSpec, tau: float = 1.0,
    strategy: str = "line_endpoints",
) -> QsaSchedule:
    """Compile one wen term's propagator ``exp(-i * J*tau * P_{i,j})``.

    The default strategy seeds the middle pair of the term's (sorted) support
    and grows both ends, which realizes the standard plaquette with zero
    swappers.

    Raises:
        LatticeError: non-wen model, or no driven term at ``(i, j)``
            (hole overlap / out of range).
    """
    if spec.model != "wen":
        raise LatticeError("plaquette_schedule addresses wen terms")
    term = build_wen(spec).term_at((i, j))
    support = term.operator.support
    graph = ConnectivityGraph.from_edges(
        spec.n_sites, [(a, b) for a in support for b in support if a < b]
    )
    return compile_schedule(
        term.operator, graph, strategy=strategy, tg=spec.J * tau
    )


@dataclass(frozen=True)
class DigitalSequence:
    """Four commuting stages realizing ``exp(+i J tau sum(P))`` exactly.

    Each stage holds one compiled schedule per group member; every schedule's
    seed angle is ``-J*tau``, so the per-term propagator is
    ``exp(+i J tau P)`` and the full product equals the evolution
    ``exp(-i tau H)`` under ``H = -J sum(P)``.
    """

    spec: LatticeSpec
    tau: float
    stages: tuple[tuple[QsaSchedule, ...], ...]

    @property
    def n_sites(self) -> int:
        return self.spec.n_sites

    def pulses(self) -> list[tuple[WeightedPauliSum, float]]:
        """Every pulse of every stage, in execution order."""
        out: list[tuple[WeightedPauliSum, float]] = []
        for stage in self.stages:
            for sched in stage:
                out.extend(schedule_pulses(sched))
        return out

    def apply(self, state: Statevector, angle_offset: float = 0.0) -> Statevector:
        arr = state.data
        for generator, angle in self.pulses():
            arr = apply_rotation(generator, angle + angle_offset, arr)
        return Statevector.from_array(arr)

    def unitary(self, angle_offset: float = 0.0) -> np.ndarray:
        check_dense_limit(self.n_sites, "digital unitary")
        dim = 1 << self.n_sites
        m = np.eye(dim, dtype=np.complex128)
        for generator, angle in self.pulses():
            m = apply_rotation(generator, angle + angle_offset, m)
        return m

    def hamiltonian(self) -> WeightedPauliSum:
        return build_variant(self.spec).hamiltonian(self.spec.J)


def digital_sequence(spec: LatticeSpec, tau: float) -> DigitalSequence:
    """Compile the four-stage digital program for evolution time ``tau``.

    Stages follow the group order 1..4; group members commute (disjoint
    supports), so the intra-stage order is immaterial.  Hole terms are
    absent from every stage by construction.
    """
    pset = build_variant(spec)
    stages = []
    for group, members in pset.groups().items():
        stage = []
        for term in members:
            support = term.operator.support
            graph = ConnectivityGraph.from_edges(
                spec.n_sites, [(a, b) for a in support for b in support if a < b]
            )
            stage.append(
                compile_schedule(
                    term.operator, graph, strategy="line_endpoints",
                    tg=-spec.J * tau,
                )
            )
        stages.append(tuple(stage))
    return DigitalSequence(spec, tau, tuple(stages))


# -- wen ground states ----------------------------------------------------------


def build_psi0(spec: LatticeSpec) -> Statevector:
    """Product seed state: odd-parity spins in |+>, even-parity spins in |0>.

    Odd-anchored plaquettes place X on the odd spins and Z on the even spins,
    so they all stabilize this seed already; the ground state only needs the
    even-anchored half enforced.
    """
    if spec.model != "wen":
        raise LatticeError("build_psi0 is defined for the wen model")
    check_dense_limit(spec.rows * spec.cols, "build_psi0")
    plus = np.array([1.0, 1.0], dtype=np.complex128) / math.sqrt(2.0)
    zero = np.array([1.0, 0.0], dtype=np.complex128)
    state = np.array([1.0], dtype=np.complex128)
    for i in range(spec.rows):
        for j in range(spec.cols):
            state = np.kron(state, plus if (i + j) % 2 else zero)
    return Statevector.from_array(state)


def _even_terms(pset: PlaquetteSet) -> list[PlaquetteTerm]:
    return [t for t in pset.terms if (t.index[0] + t.index[1]) % 2 == 0]


def ground_state_projector(spec: LatticeSpec) -> Statevector:
    """Ground state via ``prod_even (1 + P)/sqrt(2)`` on the seed state.

    Works for open and periodic boundaries (the periodic product of all even
    terms is +1, so the projection never annihilates the seed); the result
    is normalized explicitly.
    """
    if spec.twists:
        raise LatticeError("ground-state construction does not support twists")
    psi0 = build_psi0(spec)
    arr = psi0.data
    for term in _even_terms(build_wen(spec)):
        arr = (arr + apply_string(term.operator, arr)) / math.sqrt(2.0)
    norm = float(np.linalg.norm(arr))
    if norm < 1e-9:
        raise LatticeError("projector annihilated the seed state")
    return Statevector.from_array(arr, normalize=True)


def ground_state_sweep(spec: LatticeSpec):
    """Ground state via the staged unitary sweep (open boundary only).

    Even-anchored plaquettes are grouped into diagonals of constant ``i - j``.
    Diagonals with ``i - j >= 0`` run bottom-left to top-right, each step the
    rotation ``exp(-i pi/4 * XZZY)`` (Y on the top-right corner spin, which
    is still fresh in |0>); diagonals with ``i - j < 0`` run top-right to
    bottom-left with ``exp(-i pi/4 * YZZX)`` (Y on the bottom-left corner).
    While the corner is fresh each rotation acts exactly as ``(1 + P)/sqrt(2)``,
    so the sweep reproduces the projector ground state; stages pick one
    plaquette per diagonal.

    Returns:
        (state, stages) where stages is a tuple of per-stage tuples of
        ``(i, j, "A"|"B")`` entries.
    """
    if spec.boundary != "open":
        raise LatticeError("the unitary sweep requires an open boundary")
    if spec.twists:
        raise LatticeError("ground-state construction does not support twists")
    psi0 = build_psi0(spec)
    s = spec.site_index

    diagonals: dict[int, list[tuple[int, int]]] = {}
    for term in _even_terms(build_wen(spec)):
        i, j = term.index
        diagonals.setdefault(i - j, []).append((i, j))
    plan: dict[int, list[tuple[int, int, str]]] = {}
    for c, members in diagonals.items():
        members.sort()
        if c >= 0:
            plan[c] = [(i, j, "A") for (i, j) in members]
        else:
            plan[c] = [(i, j, "B") for (i, j) in reversed(members)]

    n_stages = max(len(v) for v in plan.values()) if plan else 0
    stages = []
    for step in range(n_stages):
        stage = tuple(
            plan[c][step] for c in sorted(plan) if step < len(plan[c])
        )
        stages.append(stage)

    arr = psi0.data
    used_corners: set[int] = set()
    for stage in stages:
        for (i, j, kind) in stage:
            if kind == "A":
                letters = {s(i, j): "X", s(i, j + 1): "Z",
                           s(i + 1, j): "Z", s(i + 1, j + 1): "Y"}
                corner = s(i + 1, j + 1)
            else:
                letters = {s(i, j): "Y", s(i, j + 1): "Z",
                           s(i + 1, j): "Z", s(i + 1, j + 1): "X"}
                corner = s(i, j)
            if corner in used_corners:
                raise LatticeError(
                    f"sweep ordering bug: corner spin {corner} reused at ({i},{j})"
                )
            generator = PauliString.from_sites(spec.n_sites, letters)
            arr = apply_rotation(
                WeightedPauliSum.from_string(generator), math.pi / 4, arr
            )
            # every spin this plaquette touched is no longer fresh
            used_corners |= {s(i, j), s(i, j + 1), s(i + 1, j), s(i + 1, j + 1)}
    return Statevector.from_array(arr), tuple(stages)
