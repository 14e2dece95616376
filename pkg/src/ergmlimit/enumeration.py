"""Exhaustive finite-n normalization constants for the edge-triangle model.

Every graph on n labelled vertices is an edge-subset bitmask. A scan over all
masks tabulates how many graphs have E edges and T triangles; every
normalization constant is then an exact weighted sum over that table.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import DomainError, EmptyShellError, SizeError
from .functionals import _distinct_permutations, _subset_matrix
from .graphs import StepGraphon, equal_mass_refinement

MAX_N = 8
CHUNK_BITS = 20


@dataclass(frozen=True)
class EnumSpec:
    n: int
    beta1: float = 0.0
    beta2: float = 0.0
    e_target: float | None = None
    alpha: float | None = None

    def __post_init__(self):
        if not 2 <= self.n:
            raise DomainError(f"n must be at least 2, got {self.n}")
        if self.n > MAX_N:
            raise SizeError(f"n = {self.n} exceeds the exhaustive limit {MAX_N}")
        if self.alpha is not None:
            if self.e_target is None:
                raise DomainError("alpha given without e_target")
            if self.alpha <= 0:
                raise DomainError("alpha must be positive")
        if self.e_target is not None and not 0 <= self.e_target <= 1:
            raise DomainError("e_target must lie in [0, 1]")

    @property
    def conditional(self) -> bool:
        return self.alpha is not None


@dataclass
class EnumResult:
    psi: float
    graph_count: int
    total_graphs: int
    log_partition: float

    def to_dict(self) -> dict:
        return {
            "psi": self.psi,
            "graph_count": self.graph_count,
            "total_graphs": self.total_graphs,
            "log_partition": self.log_partition,
        }


def _pairs(n):
    return list(combinations(range(n), 2))


def _row_masks(masks: np.ndarray, n: int) -> list[np.ndarray]:
    """Neighbourhood bitmask of every vertex, for a batch of edge masks."""
    rows = [np.zeros_like(masks) for _ in range(n)]
    for bit, (i, j) in enumerate(_pairs(n)):
        on = (masks >> bit) & 1
        rows[i] |= on << j
        rows[j] |= on << i
    return rows


def _popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x.astype(np.uint64)).astype(np.int64)


def edge_triangle_counts(masks: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Edge and triangle counts for a batch of edge-subset masks.

    Triangles come from row intersections: for each edge {i, j} with i < j,
    the common neighbours above j close a triangle exactly once.
    """
    masks = np.asarray(masks, dtype=np.int64)
    E = _popcount(masks)
    rows = _row_masks(masks, n)
    T = np.zeros_like(masks)
    for bit, (i, j) in enumerate(_pairs(n)):
        above = ((1 << n) - 1) ^ ((1 << (j + 1)) - 1)
        T += ((masks >> bit) & 1) * _popcount(rows[i] & rows[j] & above)
    return E, T


def triangle_count_naive(mask: int, n: int) -> int:
    adj = np.zeros((n, n), dtype=bool)
    for bit, (i, j) in enumerate(_pairs(n)):
        if (mask >> bit) & 1:
            adj[i, j] = adj[j, i] = True
    return sum(
        1
        for i in range(n)
        for j in range(i + 1, n)
        for k in range(j + 1, n)
        if adj[i, j] and adj[j, k] and adj[i, k]
    )


def _chunk_table(start: int, stop: int, n: int) -> np.ndarray:
    m = n * (n - 1) // 2
    tmax = math.comb(n, 3)
    E, T = edge_triangle_counts(np.arange(start, stop, dtype=np.int64), n)
    return np.bincount(E * (tmax + 1) + T, minlength=(m + 1) * (tmax + 1))


def _build_table(n: int, threads: int) -> np.ndarray:
    m = n * (n - 1) // 2
    tmax = math.comb(n, 3)
    total = 1 << m
    step = 1 << min(CHUNK_BITS, m)
    ranges = [(s, min(s + step, total)) for s in range(0, total, step)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(lambda r: _chunk_table(r[0], r[1], n), ranges))
    table = np.sum(parts, axis=0)  # integer sums, order-independent
    return table.reshape(m + 1, tmax + 1)


_TABLES: dict[int, np.ndarray] = {}


def count_table(n: int, threads: int = 1) -> np.ndarray:
    """``table[E, T]`` = number of labelled graphs with E edges and T triangles."""
    if n > MAX_N:
        raise SizeError(f"n = {n} exceeds the exhaustive limit {MAX_N}")
    if n not in _TABLES:
        _TABLES[n] = _build_table(n, threads)
    return _TABLES[n]


def _exact(x: float) -> Fraction:
    # decimal reading of the float, so e = 0.5, alpha = 0.1 mean exactly 1/2 and 1/10
    return Fraction(repr(float(x)))


def shell_mask(n: int, e_target: float, alpha: float) -> np.ndarray:
    """Boolean over E: strict |2E/n^2 - e| < alpha, decided in exact arithmetic."""
    m = n * (n - 1) // 2
    e, a = _exact(e_target), _exact(alpha)
    return np.array([abs(Fraction(2 * E, n * n) - e) < a for E in range(m + 1)])


def _log_weights(n: int, beta1: float, beta2: float) -> np.ndarray:
    m = n * (n - 1) // 2
    tmax = math.comb(n, 3)
    E = np.arange(m + 1)[:, None]
    T = np.arange(tmax + 1)[None, :]
    # n^2 (beta1 * 2E/n^2 + beta2 * 6T/n^3)
    return 2.0 * beta1 * E + 6.0 * beta2 * T / n


def _log_sum(table: np.ndarray, logw: np.ndarray) -> float:
    nz = table > 0
    terms = np.log(table[nz].astype(float)) + logw[nz]
    top = terms.max()
    return float(top + math.log(math.fsum(np.exp(terms - top).tolist())))


def exact_psi_n(spec: EnumSpec, threads: int = 1) -> EnumResult:
    """psi_n = n^-2 log sum over all graphs of exp(n^2 T(h^G)); ignores any shell."""
    n = spec.n
    table = count_table(n, threads)
    logz = _log_sum(table, _log_weights(n, spec.beta1, spec.beta2))
    total = 1 << (n * (n - 1) // 2)
    return EnumResult(logz / n**2, total, total, logz)


def exact_conditional_psi(spec: EnumSpec, threads: int = 1) -> EnumResult:
    """psi^e_{n,alpha}: the same sum restricted to graphs in the edge-density shell."""
    if not spec.conditional:
        raise DomainError("conditional psi needs e_target and alpha")
    n = spec.n
    table = count_table(n, threads) * shell_mask(n, spec.e_target, spec.alpha)[:, None]
    count = int(table.sum())
    if count == 0:
        raise EmptyShellError(
            f"no graph on {n} vertices has edge density within {spec.alpha} of {spec.e_target}"
        )
    logz = _log_sum(table, _log_weights(n, spec.beta1, spec.beta2))
    return EnumResult(logz / n**2, count, 1 << (n * (n - 1) // 2), logz)


# --- conditional concentration ----------------------------------------------

MAX_CONCENTRATION_N = 7


def _shell_masks(n: int, e_target: float, alpha: float, start: int, stop: int):
    masks = np.arange(start, stop, dtype=np.int64)
    E, T = edge_triangle_counts(masks, n)
    keep = shell_mask(n, e_target, alpha)[E]
    return masks[keep], E[keep], T[keep]


def _adjacency_batch(masks: np.ndarray, n: int) -> np.ndarray:
    A = np.zeros((len(masks), n, n))
    for bit, (i, j) in enumerate(_pairs(n)):
        on = ((masks >> bit) & 1).astype(float)
        A[:, i, j] = on
        A[:, j, i] = on
    return A


def _batch_cut_norm(D: np.ndarray, S: np.ndarray) -> np.ndarray:
    """Cut norm of each weighted difference matrix in the batch ``D``."""
    R = np.matmul(S, D)
    pos = np.maximum(R, 0.0).sum(axis=2)
    # negative part from the positive part and the row totals
    neg = pos - R.sum(axis=2)
    return np.maximum(pos.max(axis=1), neg.max(axis=1))


def conditional_concentration(spec: EnumSpec, reference: StepGraphon, eta: float):
    """Mass of graphs at cut distance >= eta from ``reference`` under the conditional measure.

    Returns ``(mass_far, mean_t)`` where ``mean_t`` is the conditional mean
    triangle density. Cut distances use the block-permutation upper bound of
    :func:`ergmlimit.functionals.cut_distance_upper`, vectorized over graphs.
    """
    if not spec.conditional:
        raise DomainError("concentration needs e_target and alpha")
    n = spec.n
    if n > MAX_CONCENTRATION_N:
        raise SizeError(f"n = {n} exceeds the concentration limit {MAX_CONCENTRATION_N}")
    probe = StepGraphon(np.full(n, 1.0 / n), np.zeros((n, n)))
    refined = equal_mass_refinement(probe, reference, n)
    if refined is None or refined[0].k != n:
        raise SizeError(f"reference is not a step function on {n} equal blocks")
    ref_values = refined[1].values
    # permuting the reference instead of the graph gives the same minimum
    ref_perms = [ref_values[np.ix_(p, p)] for p in _distinct_permutations(ref_values)]
    S = _subset_matrix(n)
    total = 1 << (n * (n - 1) // 2)
    logw_fn = lambda E, T: 2.0 * spec.beta1 * E + 6.0 * spec.beta2 * T / n  # noqa: E731

    logs, far, tri = [], [], []
    step = 1 << 16
    for start in range(0, total, step):
        masks, E, T = _shell_masks(n, spec.e_target, spec.alpha, start, min(start + step, total))
        if not len(masks):
            continue
        A = _adjacency_batch(masks, n)
        dist = np.full(len(masks), np.inf)
        for P in ref_perms:
            dist = np.minimum(dist, _batch_cut_norm((A - P) / n**2, S))
        logs.append(logw_fn(E, T))
        far.append(dist >= eta)
        tri.append(6.0 * T / n**3)
    if not logs:
        raise EmptyShellError(
            f"no graph on {n} vertices has edge density within {spec.alpha} of {spec.e_target}"
        )
    logs = np.concatenate(logs)
    far = np.concatenate(far)
    tri = np.concatenate(tri)
    wts = np.exp(logs - logs.max())
    z = math.fsum(wts.tolist())
    mass_far = math.fsum(wts[far].tolist()) / z
    mean_t = math.fsum((wts * tri).tolist()) / z
    return mass_far, mean_t
