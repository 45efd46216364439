"""Laplacian construction and unit-current pair solves.

Three strategies for the singular system L v = e_a - e_b:

* grounded:       factor the (N-1)x(N-1) reduced system once (Cholesky) and
                  back-substitute per pair; the default and fastest.
* pseudoinverse:  spectral decomposition of L with the zero mode deflated.
* universal sink: augment with a sink node tied to every node, which makes the
                  system nonsingular but changes the physical network; the
                  result is approximate and flagged as such.

All voltage vectors are gauge-fixed to sum to zero, which makes the (b,a)
solution the exact elementwise negation of the (a,b) solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    EigendecompositionFailedError,
    FactorizationFailedError,
    GraphMismatchError,
    SameSourceSinkError,
    SecondEigenvalueNearZeroError,
)
from .graph import Graph, adjacency

# Incremented by build_system; lets callers assert the factor-once contract.
_factorization_count = 0


def factorization_count() -> int:
    return _factorization_count


def reset_factorization_count() -> None:
    global _factorization_count
    _factorization_count = 0


def laplacian(graph: Graph) -> np.ndarray:
    """L = D - A; symmetric, rows sum to zero."""
    a = adjacency(graph)
    return np.diag(a.sum(axis=1)) - a


@dataclass(frozen=True)
class LaplacianSystem:
    """Laplacian plus a reusable Cholesky factor of the grounded reduced system.

    Immutable after construction; solve calls share the factor read-only and
    are safe to run concurrently.
    """

    graph: Graph
    L: np.ndarray
    ground: int
    reduced: np.ndarray
    factor: tuple = field(repr=False)
    keep: np.ndarray = field(repr=False)  # row/col indices with ground removed


@dataclass(frozen=True)
class VoltageProfile:
    """Node voltages for a unit current injected at a, withdrawn at b."""

    a: int
    b: int
    v: np.ndarray
    method: str = "grounded"
    approximate: bool = False


@dataclass(frozen=True)
class PairCurrents:
    """Per-edge currents i_uv = w_uv (v_u - v_v), oriented by stored edge order."""

    a: int
    b: int
    currents: tuple[float, ...]


def build_system(graph: Graph, ground: int | None = None) -> LaplacianSystem:
    """Factor the reduced Laplacian once for reuse over many right-hand sides."""
    global _factorization_count
    n = graph.n
    if n < 2:
        raise FactorizationFailedError("need at least 2 nodes")
    if ground is None:
        ground = n
    if not 1 <= ground <= n:
        raise FactorizationFailedError(f"ground node {ground} outside 1..{n}")
    L = laplacian(graph)
    keep = np.array([i for i in range(n) if i != ground - 1])
    reduced = L[np.ix_(keep, keep)]
    try:
        factor = scipy.linalg.cho_factor(reduced)
    except scipy.linalg.LinAlgError as exc:
        raise FactorizationFailedError(str(exc))
    _factorization_count += 1
    return LaplacianSystem(graph, L, ground, reduced, factor, keep)


def _injection(n, a, b):
    if a == b:
        raise SameSourceSinkError(f"source and sink are both node {a}")
    if not (1 <= a <= n and 1 <= b <= n):
        raise SameSourceSinkError(f"nodes ({a},{b}) outside 1..{n}")
    rhs = np.zeros(n)
    rhs[a - 1] = 1.0
    rhs[b - 1] -= 1.0
    return rhs


def solve_pair(system: LaplacianSystem, a: int, b: int) -> VoltageProfile:
    """Solve via the grounded reduced factor, then shift to the sum-zero gauge."""
    n = system.graph.n
    rhs = _injection(n, a, b)
    v = np.zeros(n)
    v[system.keep] = scipy.linalg.cho_solve(system.factor, rhs[system.keep])
    v -= v.mean()
    return VoltageProfile(a, b, v, method="grounded")


def solve_all_pairs(system: LaplacianSystem):
    """Solve every unordered pair (a<b) against the shared factor in one call.

    Returns (pairs, V) where V[:, k] is the gauge-fixed voltage vector for
    pairs[k].  Pair order is fixed (lexicographic) so downstream assembly is
    deterministic.
    """
    n = system.graph.n
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    B = np.zeros((n, len(pairs)))
    for k, (a, b) in enumerate(pairs):
        B[a - 1, k] = 1.0
        B[b - 1, k] = -1.0
    V = np.zeros((n, len(pairs)))
    V[system.keep, :] = scipy.linalg.cho_solve(system.factor, B[system.keep, :])
    V -= V.mean(axis=0)
    return pairs, V


def solve_pair_pseudoinverse(graph: Graph, a: int, b: int) -> VoltageProfile:
    """Solve via eigendecomposition of L with the zero eigenvalue deflated."""
    n = graph.n
    rhs = _injection(n, a, b)
    L = laplacian(graph)
    try:
        eigvals, eigvecs = np.linalg.eigh(L)
    except np.linalg.LinAlgError as exc:
        raise EigendecompositionFailedError(str(exc))
    scale = max(eigvals[-1], 1.0)
    if n < 2 or eigvals[1] < 1e-12 * scale:
        raise SecondEigenvalueNearZeroError(
            f"algebraic connectivity {eigvals[1] if n > 1 else 0.0} is numerically zero"
        )
    # Range of L+ is orthogonal to the all-ones vector, so v is already
    # sum-zero; the final shift only removes rounding in the gauge.
    v = eigvecs[:, 1:] @ ((eigvecs[:, 1:].T @ rhs) / eigvals[1:])
    v -= v.mean()
    return VoltageProfile(a, b, v, method="pseudoinverse")


def solve_pair_universal_sink(
    graph: Graph, a: int, b: int, sink_weight: float = 1.0
) -> VoltageProfile:
    """Solve the sink-augmented system; approximate by construction.

    With the sink grounded, deleting its row/column leaves L + sink_weight * I,
    which is positive definite without removing any original node.
    """
    if not sink_weight > 0:
        raise FactorizationFailedError(f"sink_weight must be positive, got {sink_weight}")
    n = graph.n
    rhs = _injection(n, a, b)
    M = laplacian(graph) + sink_weight * np.eye(n)
    try:
        factor = scipy.linalg.cho_factor(M)
    except scipy.linalg.LinAlgError as exc:
        raise FactorizationFailedError(str(exc))
    v = scipy.linalg.cho_solve(factor, rhs)
    v -= v.mean()
    return VoltageProfile(a, b, v, method="universal-sink", approximate=True)


def pair_currents(graph: Graph, profile: VoltageProfile) -> PairCurrents:
    """Edge currents from a voltage profile solved on the same graph."""
    if profile.v.shape != (graph.n,):
        raise GraphMismatchError(
            f"profile has {profile.v.shape[0]} voltages but graph has {graph.n} nodes"
        )
    currents = tuple(
        w * (profile.v[u - 1] - profile.v[v - 1]) for u, v, w in graph.edges
    )
    return PairCurrents(profile.a, profile.b, currents)


def node_balance(graph: Graph, currents: PairCurrents) -> np.ndarray:
    """Net current out of each node; +1 at the source, -1 at the sink, else 0."""
    out = np.zeros(graph.n)
    for (u, v, _), i in zip(graph.edges, currents.currents):
        out[u - 1] += i
        out[v - 1] -= i
    return out


def kcl_residual(graph: Graph, profile: VoltageProfile) -> float:
    """max-norm of L v - (e_a - e_b)."""
    rhs = np.zeros(graph.n)
    rhs[profile.a - 1] = 1.0
    rhs[profile.b - 1] = -1.0
    return float(np.abs(laplacian(graph) @ profile.v - rhs).max())


def effective_resistance(system: LaplacianSystem, a: int, b: int) -> float:
    """Two-point resistance v_a - v_b under unit current injection."""
    profile = solve_pair(system, a, b)
    return float(profile.v[a - 1] - profile.v[b - 1])
