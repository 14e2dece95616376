"""W-random graphs from step graphons and their empirical densities."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .graphs import SimpleGraph, StepGraphon


@dataclass(frozen=True)
class SampleSpec:
    n: int
    graphon: StepGraphon
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be positive, got {self.n}")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")


def _rng(seed: int) -> np.random.Generator:
    # Philox is counter based: the stream depends only on the seed, not the platform
    return np.random.Generator(np.random.Philox(seed))


def sample_adjacency(spec: SampleSpec) -> np.ndarray:
    """Boolean adjacency matrix of a W-random graph.

    Latent positions are drawn as block labels with probabilities equal to the
    block masses, which has the same law as uniform positions for a step
    graphon.
    """
    rng = _rng(spec.seed)
    h = spec.graphon
    blocks = rng.choice(h.k, size=spec.n, p=h.masses)
    iu, ju = np.triu_indices(spec.n, 1)
    prob = h.values[blocks[iu], blocks[ju]]
    on = rng.random(len(iu)) < prob
    A = np.zeros((spec.n, spec.n), dtype=bool)
    A[iu[on], ju[on]] = True
    return A | A.T


def sample_w_random(spec: SampleSpec) -> SimpleGraph:
    A = sample_adjacency(spec)
    i, j = np.nonzero(np.triu(A, 1))
    return SimpleGraph(spec.n, np.column_stack([i, j]))


def adjacency_densities(A: np.ndarray) -> tuple[float, float]:
    n = A.shape[0]
    Af = A.astype(np.float32)
    edges = float(Af.sum(dtype=np.float64)) / 2
    # trace(A^3) = 6 * #triangles; entries of A @ A are exact small integers
    closed = float((Af * (Af @ Af)).sum(dtype=np.float64))
    return 2 * edges / n**2, closed / n**3


def empirical_densities(G: SimpleGraph) -> tuple[float, float]:
    """(2E / n^2, 6 * triangles / n^3): homomorphism densities of K2 and K3 in G."""
    return adjacency_densities(G.adjacency(dtype=bool))


def replicate_densities(graphon: StepGraphon, n: int, seeds) -> list[tuple[int, float, float]]:
    """(seed, e, t) for independent samples, in seed order."""
    out = []
    for s in seeds:
        e, t = adjacency_densities(sample_adjacency(SampleSpec(n, graphon, int(s))))
        out.append((int(s), e, t))
    return out
