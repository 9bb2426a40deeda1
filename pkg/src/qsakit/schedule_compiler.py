"""Compile N-body Pauli targets into layered attachment/swapper schedules.

A schedule grows a two-site seed string into the target's support with layers
of simultaneous attachments (pairwise site-disjoint within a layer, so they
commute), then fixes every site's letter with at most one swapper per site.
The growth bookkeeping is purely symbolic: each attachment toggles the
connector letter between the canonical pair (X/Z here) and writes X onto the
fresh site, so the final letters are a deterministic function of how often a
site served as connector.

Strategies:

* ``doubling`` -- every grown site tries to attach a fresh neighbor each
  layer (connectors ascending, each claiming its lowest unclaimed fresh
  neighbor); admitted only when some seed edge reaches the target support in
  ``ceil(log2 N) - 1`` layers.
* ``line_endpoints`` -- seed in the middle of a Hamiltonian path of the
  support, grow both endpoints outward: ``ceil(N/2) - 1`` layers.
* ``single_endpoint`` -- seed at one end of the path, grow one site per
  layer: ``N - 2`` layers.
* ``greedy`` -- the doubling growth rule from the lowest-index seed edge,
  with whatever depth results (always succeeds on a connected support).
* ``auto`` -- first of doubling, line_endpoints, single_endpoint that the
  graph admits, else greedy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .pauli_core import PauliString
from .propagator_engine import (
    AttachmentSpec,
    SwapperSpec,
    apply_swap,
    conjugate_string,
    make_attachment,
)

STRATEGIES = ("doubling", "line_endpoints", "single_endpoint", "greedy", "auto")

#: Canonical letter pair used during growth: a connector toggles X <-> Z.
GROW_ALPHA = "Z"
GROW_BETA = "X"
ATTACHED_LETTER = "X"


class CompileError(ValueError):
    """Base class for compilation failures."""


class UnsupportedTargetError(CompileError):
    """Target cannot be scheduled (too small, or phase not +1)."""


class DisconnectedSupportError(CompileError):
    """Target support is not connected in the given graph."""


class StrategyInfeasibleError(CompileError):
    """The requested strategy is not admitted by the graph."""


@dataclass(frozen=True)
class ConnectivityGraph:
    """Undirected hardware graph on ``n_sites`` vertices."""

    n_sites: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be positive, got {self.n_sites}")
        for a, b in self.edges:
            if not (0 <= a < b < self.n_sites):
                raise ValueError(f"bad edge ({a}, {b}) for {self.n_sites} sites")

    @classmethod
    def from_edges(cls, n_sites: int, edges) -> "ConnectivityGraph":
        normalized = frozenset(
            (min(a, b), max(a, b)) for a, b in edges if a != b
        )
        if any(a == b for a, b in edges):
            raise ValueError("self-loop in edge list")
        return cls(n_sites, normalized)

    @classmethod
    def complete(cls, n_sites: int) -> "ConnectivityGraph":
        return cls.from_edges(
            n_sites, [(a, b) for a in range(n_sites) for b in range(a + 1, n_sites)]
        )

    @classmethod
    def path(cls, n_sites: int) -> "ConnectivityGraph":
        return cls.from_edges(n_sites, [(i, i + 1) for i in range(n_sites - 1)])

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def neighbors(self, site: int) -> tuple[int, ...]:
        out = [b for a, b in self.edges if a == site]
        out += [a for a, b in self.edges if b == site]
        return tuple(sorted(out))

    def to_dict(self) -> dict:
        return {"n_sites": self.n_sites, "edges": sorted(list(e) for e in self.edges)}

    @classmethod
    def from_dict(cls, data: dict) -> "ConnectivityGraph":
        return cls.from_edges(int(data["n_sites"]), [tuple(e) for e in data["edges"]])


@dataclass(frozen=True)
class QsaSchedule:
    """A compiled pulse schedule.

    Attributes:
        n_sites: Register width.
        seed: Two-site Pauli string whose propagator ``exp(-i tg seed)`` the
            schedule conjugates.
        tg: Seed rotation angle (the only tunable knob of the whole schedule).
        layers: Attachment layers, innermost first.
        final_swappers: Letter-fixing swappers (disjoint sites), conjugating
            the whole grown propagator as the outermost sandwich.
        target: The N-body string the schedule realizes.
    """

    n_sites: int
    seed: PauliString
    tg: float
    layers: tuple[tuple[AttachmentSpec, ...], ...]
    final_swappers: tuple[SwapperSpec, ...]
    target: PauliString

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def n_attachments(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def to_dict(self) -> dict:
        return {
            "n_sites": self.n_sites,
            "seed": {"string": self.seed.format(), "tg": self.tg},
            "layers": [
                [spec.to_dict() for spec in layer] for layer in self.layers
            ],
            "final_swappers": [spec.to_dict() for spec in self.final_swappers],
            "target": self.target.format(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QsaSchedule":
        n_sites = int(data["n_sites"])
        seed = PauliString.parse(data["seed"]["string"], n_sites)
        tg = float(data["seed"]["tg"])
        layers = tuple(
            tuple(AttachmentSpec.from_dict(d) for d in layer)
            for layer in data["layers"]
        )
        swappers = tuple(
            SwapperSpec.from_dict(d) for d in data.get("final_swappers", [])
        )
        target = PauliString.parse(data["target"], n_sites)
        return cls(n_sites, seed, tg, layers, swappers, target)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "QsaSchedule":
        return cls.from_dict(json.loads(text))


def depth_bound(n_support: int, strategy: str) -> int:
    """Exact layer count of each strategy on an admitting graph."""
    if n_support < 2:
        raise ValueError("depth bounds are defined for supports of >= 2 sites")
    if strategy == "doubling":
        return (n_support - 1).bit_length() - 1
    if strategy == "line_endpoints":
        return (n_support + 1) // 2 - 1
    if strategy == "single_endpoint":
        return n_support - 2
    raise ValueError(f"no depth bound for strategy {strategy!r}")


# -- growth planning (site indices only) ------------------------------------


def _induced_adjacency(support: tuple[int, ...], graph: ConnectivityGraph):
    sset = set(support)
    return {
        s: tuple(x for x in graph.neighbors(s) if x in sset) for s in support
    }


def _check_connected(support: tuple[int, ...], adj) -> bool:
    seen = {support[0]}
    stack = [support[0]]
    while stack:
        for x in adj[stack.pop()]:
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return len(seen) == len(support)


def _grow_from_seed(seed: tuple[int, int], support_set: set, adj):
    """Greedy maximal growth; returns layers of (connector, attached) or None."""
    grown = set(seed)
    layers: list[list[tuple[int, int]]] = []
    while grown != support_set:
        fresh = support_set - grown
        layer: list[tuple[int, int]] = []
        claimed: set[int] = set()
        for connector in sorted(grown):
            candidates = [
                x for x in adj[connector] if x in fresh and x not in claimed
            ]
            if candidates:
                attached = min(candidates)
                layer.append((connector, attached))
                claimed.add(attached)
        if not layer:
            return None
        layers.append(layer)
        grown |= claimed
    return layers


def _plan_doubling(support, adj, require_bound: bool):
    support_set = set(support)
    seed_edges = sorted(
        (a, b) for a in support for b in adj[a] if a < b
    )
    best = None
    for seed in seed_edges:
        layers = _grow_from_seed(seed, support_set, adj)
        if layers is None:
            continue
        if best is None or len(layers) < len(best[1]):
            best = (seed, layers)
    if best is None:
        raise StrategyInfeasibleError("no seed edge grows to the full support")
    if require_bound and len(best[1]) != depth_bound(len(support), "doubling"):
        raise StrategyInfeasibleError(
            f"graph does not admit doubling: best depth {len(best[1])} "
            f"!= bound {depth_bound(len(support), 'doubling')}"
        )
    return best


def _hamiltonian_path(support, adj):
    """A deterministic Hamiltonian path of the support, or None.

    The ascending-index order is preferred when it happens to be a path;
    otherwise a backtracking search (neighbors ascending, endpoints tried by
    ascending degree then index) finds one.
    """
    ordered = list(support)
    if all(ordered[i + 1] in adj[ordered[i]] for i in range(len(ordered) - 1)):
        return ordered

    n = len(support)
    starts = sorted(support, key=lambda s: (len(adj[s]), s))

    def extend(path: list[int], used: set) -> list[int] | None:
        if len(path) == n:
            return path
        for nxt in sorted(adj[path[-1]]):
            if nxt not in used:
                used.add(nxt)
                path.append(nxt)
                found = extend(path, used)
                if found is not None:
                    return found
                path.pop()
                used.remove(nxt)
        return None

    for start in starts:
        found = extend([start], {start})
        if found is not None:
            return found
    return None


def _plan_line_endpoints(support, adj):
    order = _hamiltonian_path(support, adj)
    if order is None:
        raise StrategyInfeasibleError("support has no Hamiltonian path in graph")
    n = len(order)
    k = (n - 2) // 2
    seed = (order[k], order[k + 1])
    layers = []
    radius = 1
    while True:
        layer = []
        left = k - radius
        right = k + 1 + radius
        if left >= 0:
            layer.append((order[left + 1], order[left]))
        if right <= n - 1:
            layer.append((order[right - 1], order[right]))
        if not layer:
            break
        layers.append(layer)
        radius += 1
    return seed, layers


def _plan_single_endpoint(support, adj):
    order = _hamiltonian_path(support, adj)
    if order is None:
        raise StrategyInfeasibleError("support has no Hamiltonian path in graph")
    seed = (order[0], order[1])
    layers = [[(order[i], order[i + 1])] for i in range(1, len(order) - 1)]
    return seed, layers


def _plan_greedy(support, adj):
    support_set = set(support)
    seed_edges = sorted((a, b) for a in support for b in adj[a] if a < b)
    for seed in seed_edges:
        layers = _grow_from_seed(seed, support_set, adj)
        if layers is not None:
            return seed, layers
    raise StrategyInfeasibleError("greedy growth found no viable seed edge")


# -- compilation -------------------------------------------------------------


def compile_schedule(
    target: PauliString,
    graph: ConnectivityGraph,
    strategy: str = "auto",
    tg: float = 1.0,
) -> QsaSchedule:
    """Compile ``exp(-i tg target)`` into an attachment/swapper schedule.

    Args:
        target: N-body Pauli string with phase +1 and at least two
            non-identity letters.
        graph: Hardware connectivity; every attachment must run on an edge.
        strategy: One of ``doubling``, ``line_endpoints``, ``single_endpoint``,
            ``greedy``, ``auto``.
        tg: Seed rotation angle stored in the schedule.

    Raises:
        UnsupportedTargetError: Single-site/identity target, width mismatch,
            or target phase differing from +1 (the replay identity only
            reproduces +1-phase strings).
        DisconnectedSupportError: Support not connected inside the graph.
        StrategyInfeasibleError: Explicit strategy not admitted by the graph.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected {STRATEGIES}")
    if target.n_sites != graph.n_sites:
        raise UnsupportedTargetError(
            f"target on {target.n_sites} sites, graph on {graph.n_sites}"
        )
    if target.phase_exp != 0:
        raise UnsupportedTargetError(
            f"target phase must be +1, got {target.format()!r}"
        )
    support = target.support
    if len(support) < 2:
        raise UnsupportedTargetError(
            f"target must act on at least two sites, got {target.format()!r}"
        )
    adj = _induced_adjacency(support, graph)
    if not _check_connected(support, adj):
        raise DisconnectedSupportError(
            f"target support {support} is not connected in the graph"
        )

    if strategy == "auto":
        plan = None
        for candidate in ("doubling", "line_endpoints", "single_endpoint"):
            try:
                plan = _plan(candidate, support, adj)
                break
            except StrategyInfeasibleError:
                continue
        if plan is None:
            plan = _plan("greedy", support, adj)
    else:
        plan = _plan(strategy, support, adj)
    seed_pair, layer_pairs = plan

    return _materialize(target, seed_pair, layer_pairs, tg)


def _plan(strategy, support, adj):
    if strategy == "doubling":
        return _plan_doubling(support, adj, require_bound=True)
    if strategy == "line_endpoints":
        return _plan_line_endpoints(support, adj)
    if strategy == "single_endpoint":
        return _plan_single_endpoint(support, adj)
    if strategy == "greedy":
        return _plan_greedy(support, adj)
    raise ValueError(f"unknown strategy {strategy!r}")


def _materialize(
    target: PauliString,
    seed_pair: tuple[int, int],
    layer_pairs,
    tg: float,
) -> QsaSchedule:
    """Turn a growth plan into specs, track letters, and emit swappers."""
    n = target.n_sites
    letters = {seed_pair[0]: "X", seed_pair[1]: "X"}
    layers = []
    for pairs in layer_pairs:
        layer = []
        for connector, attached in pairs:
            layer.append(
                AttachmentSpec(
                    connector_site=connector,
                    alpha=GROW_ALPHA,
                    beta=GROW_BETA,
                    attached_site=attached,
                    attached_letter=ATTACHED_LETTER,
                )
            )
            letters[connector] = "Z" if letters[connector] == "X" else "X"
            letters[attached] = ATTACHED_LETTER
        layers.append(tuple(layer))

    swappers = []
    for site in sorted(letters):
        want = target.letter(site)
        have = letters[site]
        if want != have:
            swappers.append(SwapperSpec(site=site, alpha=have, beta=want))

    seed = PauliString.from_sites(n, {seed_pair[0]: "X", seed_pair[1]: "X"})
    schedule = QsaSchedule(
        n_sites=n,
        seed=seed,
        tg=tg,
        layers=tuple(layers),
        final_swappers=tuple(swappers),
        target=target,
    )
    replayed = replay_symbolic(schedule)
    if replayed != target:
        raise CompileError(
            f"internal replay mismatch: grew {replayed.format()}, "
            f"wanted {target.format()}"
        )
    return schedule


def replay_symbolic(schedule: QsaSchedule) -> PauliString:
    """Push the seed string through every conjugation, exactly.

    Attachment layers are applied innermost-first; the swapper sandwich acts
    last.  Every intermediate conjugation must collapse to a single string
    with coefficient +1 (CollapseError otherwise).
    """
    q = schedule.seed
    for layer in schedule.layers:
        for spec in layer:
            q = conjugate_string(q, make_attachment(spec, schedule.n_sites))
    for spec in schedule.final_swappers:
        q = apply_swap(q, spec)
    return q


def validate(
    schedule: QsaSchedule, graph: ConnectivityGraph | None = None
) -> list[str]:
    """Structural and replay checks; returns a list of violations (empty = ok).

    Checks: seed shape, per-layer site disjointness, attached-site freshness,
    connector membership and letter compatibility, edge existence (when a
    graph is supplied), swapper-layer disjointness, and exact replay of the
    target with coefficient +1.
    """
    violations: list[str] = []
    n = schedule.n_sites

    if schedule.seed.n_sites != n or schedule.target.n_sites != n:
        violations.append("seed/target register width differs from n_sites")
        return violations
    if schedule.seed.weight != 2:
        violations.append(f"seed must act on exactly 2 sites, acts on {schedule.seed.weight}")
    if schedule.seed.phase_exp != 0:
        violations.append("seed phase must be +1")
    if schedule.target.phase_exp != 0:
        violations.append("target phase must be +1")

    if graph is not None and schedule.seed.weight == 2:
        a, b = schedule.seed.support
        if not graph.has_edge(a, b):
            violations.append(f"seed pair ({a}, {b}) is not a graph edge")

    current = set(schedule.seed.support)
    letters = {s: schedule.seed.letter(s) for s in current}
    for idx, layer in enumerate(schedule.layers, start=1):
        engaged: set[int] = set()
        for spec in layer:
            pair = {spec.connector_site, spec.attached_site}
            if pair & engaged:
                violations.append(
                    f"layer {idx}: attachments share sites {sorted(pair & engaged)}"
                )
            engaged |= pair
            if spec.connector_site not in current:
                violations.append(
                    f"layer {idx}: connector {spec.connector_site} not in grown support"
                )
            elif letters.get(spec.connector_site) not in (spec.alpha, spec.beta):
                violations.append(
                    f"layer {idx}: connector {spec.connector_site} carries "
                    f"{letters.get(spec.connector_site)!r}, spec expects "
                    f"{spec.alpha}/{spec.beta}"
                )
            if spec.attached_site in current:
                violations.append(
                    f"layer {idx}: attached site {spec.attached_site} is not fresh"
                )
            if graph is not None and not graph.has_edge(
                spec.connector_site, spec.attached_site
            ):
                violations.append(
                    f"layer {idx}: ({spec.connector_site}, {spec.attached_site}) "
                    f"is not a graph edge"
                )
        for spec in layer:
            if spec.connector_site in letters:
                have = letters[spec.connector_site]
                if have == spec.alpha:
                    letters[spec.connector_site] = spec.beta
                elif have == spec.beta:
                    letters[spec.connector_site] = spec.alpha
            letters[spec.attached_site] = spec.attached_letter
            current.add(spec.attached_site)

    swap_sites = [spec.site for spec in schedule.final_swappers]
    if len(swap_sites) != len(set(swap_sites)):
        violations.append("final swapper layer touches a site twice")
    for spec in schedule.final_swappers:
        if spec.site not in current:
            violations.append(f"swapper on site {spec.site} outside grown support")
        elif letters.get(spec.site) not in (spec.alpha, spec.beta):
            violations.append(
                f"swapper on site {spec.site} expects {spec.alpha}/{spec.beta}, "
                f"string carries {letters.get(spec.site)!r}"
            )

    try:
        replayed = replay_symbolic(schedule)
    except Exception as exc:  # CollapseError and friends
        violations.append(f"replay failed: {exc}")
        return violations
    if replayed != schedule.target:
        violations.append(
            f"replay mismatch: got {replayed.format()}, "
            f"target {schedule.target.format()}"
        )
    return violations
