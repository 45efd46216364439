"""Node/edge signatures over all ordered source/sink pairs, and what they buy.

For every ordered pair (a,b) the network is solved with unit current from a
to b.  Each node collects its voltage across all N(N-1) ordered pairs; each
edge collects its current.  Sorted and quantized, these vectors are label
independent, so equal vectors group nodes into orbit candidates, the multiset
of all vectors fingerprints the whole graph, and the class structure prunes
isomorphism search and drives canonical labeling.

Only the N(N-1)/2 unordered pairs are solved; the reversed pair contributes
the exact negation thanks to the sum-zero gauge.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExhaustedError, GraphError, NonFiniteError
from .graph import Graph
from .solver import build_system, solve_all_pairs

DEFAULT_TOL = 1e-8
DEFAULT_BUDGET = 10**6


def quantize(x: float, tol: float = DEFAULT_TOL) -> float:
    """Snap x to the grid of multiples of tol.

    Odd under negation, and quantize(0) is +0.0.  This is the equality
    convention for comparing solved voltages/currents in floating point.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if not math.isfinite(x):
        raise NonFiniteError(f"cannot quantize {x}")
    return round(x / tol) * tol + 0.0


def _grid(values: np.ndarray, tol: float) -> np.ndarray:
    """Vectorized snap-to-grid, in integer grid units."""
    if not np.all(np.isfinite(values)):
        raise NonFiniteError("non-finite value in solve results")
    return np.rint(values / tol).astype(np.int64)


@dataclass(frozen=True)
class NodeSignature:
    """Sorted grid-unit voltages of one node over all N(N-1) ordered pairs."""

    node: int
    values: tuple[int, ...]
    tol: float


@dataclass(frozen=True)
class EdgeSignature:
    """Sorted grid-unit currents of one edge over all N(N-1) ordered pairs."""

    edge: tuple[int, int]
    values: tuple[int, ...]
    tol: float


@dataclass(frozen=True)
class OrbitPartition:
    """Disjoint node classes sharing identical signatures; orbit candidates."""

    classes: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Fingerprint:
    """Label-invariant multiset summary of all node and edge signatures."""

    n: int
    m: int
    tol: float
    node_part: tuple[tuple[int, ...], ...]  # sorted multiset of value vectors
    edge_part: tuple[tuple[int, ...], ...]

    def to_json(self) -> str:
        """Canonical serialization: quantized decimals, fixed key order."""
        fmt = lambda k: format(k * self.tol, ".17g")
        obj = {
            "n": self.n,
            "m": self.m,
            "tol": format(self.tol, ".17g"),
            "edge_part": [[fmt(k) for k in sig] for sig in self.edge_part],
            "node_part": [[fmt(k) for k in sig] for sig in self.node_part],
        }
        return json.dumps(obj, separators=(",", ":"), sort_keys=True)

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()


def _solve_grid(graph: Graph, tol: float):
    """One factorization, all unordered pair solves, snapped to the grid."""
    system = build_system(graph)
    pairs, V = solve_all_pairs(system)
    return pairs, V, _grid(V, tol)


def _node_signatures_from_grid(graph: Graph, G: np.ndarray, tol: float):
    sigs = []
    for k in range(graph.n):
        row = np.concatenate([G[k], -G[k]])
        row.sort()
        sigs.append(NodeSignature(k + 1, tuple(int(x) for x in row), tol))
    return sigs


def _edge_signatures_from_solves(graph: Graph, V: np.ndarray, tol: float):
    sigs = []
    for u, v, w in graph.edges:
        cur = _grid(w * (V[u - 1] - V[v - 1]), tol)
        row = np.concatenate([cur, -cur])
        row.sort()
        sigs.append(EdgeSignature((u, v), tuple(int(x) for x in row), tol))
    return sigs


def all_node_signatures(graph: Graph, tol: float = DEFAULT_TOL) -> list[NodeSignature]:
    if graph.n < 2:
        raise GraphError("need at least 2 nodes")
    _, _, G = _solve_grid(graph, tol)
    return _node_signatures_from_grid(graph, G, tol)


def all_edge_signatures(graph: Graph, tol: float = DEFAULT_TOL) -> list[EdgeSignature]:
    if graph.m < 1:
        raise GraphError("need at least 1 edge")
    _, V, _ = _solve_grid(graph, tol)
    return _edge_signatures_from_solves(graph, V, tol)


def _signature_classes(sigs: list[NodeSignature]) -> dict[tuple, list[int]]:
    classes: dict[tuple, list[int]] = {}
    for sig in sigs:
        classes.setdefault(sig.values, []).append(sig.node)
    return classes


def orbit_partition(graph: Graph, tol: float = DEFAULT_TOL) -> OrbitPartition:
    """Group nodes by identical signature; classes ordered deterministically."""
    classes = _signature_classes(all_node_signatures(graph, tol))
    ordered = sorted(classes.items(), key=lambda kv: (kv[0], min(kv[1])))
    return OrbitPartition(tuple(tuple(sorted(nodes)) for _, nodes in ordered))


def fingerprint(graph: Graph, tol: float = DEFAULT_TOL) -> Fingerprint:
    """Canonical summary; permuting node labels leaves it byte-identical.

    One factorization and one batch of pair solves feed both parts.
    """
    if graph.n < 2 or graph.m < 1:
        raise GraphError("need at least 2 nodes and 1 edge")
    _, V, G = _solve_grid(graph, tol)
    node_sigs = _node_signatures_from_grid(graph, G, tol)
    edge_sigs = _edge_signatures_from_solves(graph, V, tol)
    return Fingerprint(
        n=graph.n,
        m=graph.m,
        tol=tol,
        node_part=tuple(sorted(s.values for s in node_sigs)),
        edge_part=tuple(sorted(s.values for s in edge_sigs)),
    )


@dataclass(frozen=True)
class IsoVerdict:
    """Outcome of an isomorphism screen.

    kind is one of "distinct-certified", "possibly-isomorphic", or
    "isomorphic-certified"; a certified isomorphism always carries a mapping
    that has passed independent edge-and-weight verification.
    """

    kind: str
    mapping: dict[int, int] | None = None
    reason: str = ""

    DISTINCT = "distinct-certified"
    POSSIBLE = "possibly-isomorphic"
    ISOMORPHIC = "isomorphic-certified"


def verify_mapping(g1: Graph, g2: Graph, mapping: dict[int, int]) -> bool:
    """Independent check that mapping is a weight-preserving edge bijection."""
    if sorted(mapping) != list(range(1, g1.n + 1)):
        return False
    if sorted(mapping.values()) != list(range(1, g2.n + 1)):
        return False
    if g1.m != g2.m:
        return False
    for u, v, w in g1.edges:
        if g2.weight(mapping[u], mapping[v]) != w:
            return False
    return True


def find_isomorphism(
    g1: Graph,
    g2: Graph,
    tol: float = DEFAULT_TOL,
    node_budget: int = DEFAULT_BUDGET,
) -> dict[int, int] | None:
    """Backtracking matcher restricted to equal-signature node classes.

    Returns a weight-preserving mapping, or None when the search space is
    exhausted (a proof of non-isomorphism).  Raises BudgetExhaustedError when
    node_budget expansions run out first.
    """
    if g1.n != g2.n or g1.m != g2.m:
        return None
    c1 = _signature_classes(all_node_signatures(g1, tol))
    c2 = _signature_classes(all_node_signatures(g2, tol))
    if sorted((k, len(v)) for k, v in c1.items()) != sorted(
        (k, len(v)) for k, v in c2.items()
    ):
        return None
    candidates = {}
    for sig, nodes in c1.items():
        for x in nodes:
            candidates[x] = c2[sig]
    # Fail-first: smallest class first, then lowest node id.
    order = sorted(
        candidates, key=lambda x: (len(candidates[x]), x)
    )
    mapping: dict[int, int] = {}
    used: set[int] = set()
    budget = [node_budget]

    def extend(depth: int) -> bool:
        if depth == len(order):
            return True
        x = order[depth]
        for y in candidates[x]:
            if y in used:
                continue
            if budget[0] <= 0:
                raise BudgetExhaustedError(
                    f"isomorphism search exceeded {node_budget} expansions"
                )
            budget[0] -= 1
            ok = all(
                g1.weight(x, xp) == g2.weight(y, yp) for xp, yp in mapping.items()
            )
            if not ok:
                continue
            mapping[x] = y
            used.add(y)
            if extend(depth + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    return dict(mapping) if extend(0) else None


def iso_screen(
    g1: Graph,
    g2: Graph,
    tol: float = DEFAULT_TOL,
    node_budget: int = DEFAULT_BUDGET,
) -> IsoVerdict:
    """Fingerprint screen plus verified search; never certifies without proof."""
    if g1.n != g2.n:
        return IsoVerdict(IsoVerdict.DISTINCT, reason="node counts differ")
    if g1.m != g2.m:
        return IsoVerdict(IsoVerdict.DISTINCT, reason="edge counts differ")
    if fingerprint(g1, tol).digest() != fingerprint(g2, tol).digest():
        return IsoVerdict(IsoVerdict.DISTINCT, reason="fingerprints differ")
    try:
        mapping = find_isomorphism(g1, g2, tol, node_budget)
    except BudgetExhaustedError:
        return IsoVerdict(IsoVerdict.POSSIBLE, reason="search budget exhausted")
    if mapping is None:
        # Exhausted search with equal fingerprints: a completed search is
        # itself a certificate of non-isomorphism.
        return IsoVerdict(IsoVerdict.DISTINCT, reason="search exhausted, no mapping")
    if not verify_mapping(g1, g2, mapping):
        return IsoVerdict(IsoVerdict.POSSIBLE, reason="mapping failed verification")
    return IsoVerdict(IsoVerdict.ISOMORPHIC, mapping=mapping, reason="verified mapping")


@dataclass(frozen=True)
class CanonicalLabeling:
    """Canonical node order and the adjacency weight sequence it minimizes.

    order[i] is the original node id placed at canonical position i.  form is
    the column-incremental upper-triangle weight sequence of the reordered
    adjacency matrix: entries (0,1), (0,2), (1,2), (0,3), ... certified is
    False when the tie-exploration budget ran out before the search finished.
    """

    order: tuple[int, ...]
    form: tuple[float, ...]
    certified: bool
    expansions: int

    def form_json(self) -> str:
        return json.dumps(
            {
                "n": len(self.order),
                "form": [format(x, ".17g") for x in self.form],
            },
            separators=(",", ":"),
            sort_keys=True,
        )

    def digest(self) -> str:
        return hashlib.sha256(self.form_json().encode()).hexdigest()


def canonical_labeling(
    graph: Graph,
    tol: float = DEFAULT_TOL,
    budget: int = DEFAULT_BUDGET,
) -> CanonicalLabeling:
    """Order signature classes lexicographically, break ties by backtracking.

    Positions are grouped by signature class (classes sorted by signature);
    within that structure the search picks the permutation minimizing the
    adjacency weight sequence.  Fully explored ties make the result label
    invariant.
    """
    if graph.n == 1:
        return CanonicalLabeling((1,), (), True, 0)
    classes = _signature_classes(all_node_signatures(graph, tol))
    ordered_classes = [
        sorted(nodes) for _, nodes in sorted(classes.items(), key=lambda kv: kv[0])
    ]
    # class_of_position[k] indexes into ordered_classes
    class_of_position = []
    for ci, cls in enumerate(ordered_classes):
        class_of_position.extend([ci] * len(cls))
    n = graph.n
    wfn = graph.weight

    def column(prefix: list[int], cand: int) -> list[float]:
        return [wfn(p, cand) or 0.0 for p in prefix]

    # Greedy seed guarantees a complete form even if the budget is tiny.
    used = set()
    seed: list[int] = []
    for k in range(n):
        cls = ordered_classes[class_of_position[k]]
        node = next(x for x in cls if x not in used)
        used.add(node)
        seed.append(node)
    best_order = list(seed)
    best_form: list[float] = []
    for k in range(1, n):
        best_form.extend(column(seed[:k], seed[k]))

    expansions = [0]
    exhausted = [False]

    def search(prefix: list[int], form: list[float], tied: bool) -> bool:
        """tied: partial form equals the incumbent's prefix (else strictly less).

        Returns True when the incumbent best was replaced inside this subtree;
        the caller's partial is then a prefix of the new best, so it flips back
        to tied for the remaining siblings.
        """
        nonlocal best_order, best_form
        k = len(prefix)
        if k == n:
            if not tied:
                best_order = list(prefix)
                best_form = list(form)
                return True
            return False
        updated = False
        cls = ordered_classes[class_of_position[k]]
        for cand in cls:
            if cand in prefix_set:
                continue
            if expansions[0] >= budget:
                exhausted[0] = True
                return updated
            expansions[0] += 1
            col = column(prefix, cand)
            child_tied = tied
            if tied:
                ref = best_form[len(form) : len(form) + len(col)]
                if col > ref:
                    continue
                if col < ref:
                    child_tied = False
            prefix.append(cand)
            prefix_set.add(cand)
            if search(prefix, form + col, child_tied):
                updated = True
                tied = True
            prefix.pop()
            prefix_set.discard(cand)
            if exhausted[0]:
                return updated
        return updated

    prefix_set: set[int] = set()
    search([], [], True)
    return CanonicalLabeling(
        tuple(best_order), tuple(best_form), not exhausted[0], expansions[0]
    )
