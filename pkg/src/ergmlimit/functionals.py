"""Exact functionals of step graphons: homomorphism densities, rate function, cut norm."""
from __future__ import annotations

import math
from itertools import permutations
from string import ascii_letters

import numpy as np

from .errors import DomainError, SizeError
from .graphs import (
    EDGE,
    TRIANGLE,
    SimpleGraph,
    StepGraphon,
    common_refinement,
    equal_mass_refinement,
)

MAX_HOM_VERTICES = 10
MAX_CUT_BLOCKS = 16
MAX_PERM_BLOCKS = 9
HALF_LOG2 = 0.5 * math.log(2.0)


def _contract(H: SimpleGraph, h: StepGraphon, free=(), skip_edge=None):
    """Sum over block assignments of V(H) \\ free of mass and edge-value products.

    Vertices in ``free`` keep their block index as an output axis and carry no
    mass factor. ``skip_edge`` (an index into ``H.edges``) drops one edge factor.
    """
    letters = ascii_letters[: H.n_vertices]
    operands, subs = [], []
    for v in range(H.n_vertices):
        operands.append(h.masses if v not in free else np.ones(h.k))
        subs.append(letters[v])
    for idx, (i, j) in enumerate(H.edges):
        if idx == skip_edge:
            continue
        operands.append(h.values)
        subs.append(letters[i] + letters[j])
    out = "".join(letters[v] for v in free)
    expr = ",".join(subs) + "->" + out
    return np.einsum(expr, *operands, optimize=len(operands) > 2)


def hom_density(H: SimpleGraph, h: StepGraphon) -> float:
    """t(H, h), exact for step graphons."""
    if H.n_vertices > MAX_HOM_VERTICES:
        raise SizeError(f"H has {H.n_vertices} vertices; limit is {MAX_HOM_VERTICES}")
    return float(_contract(H, h))


def edge_density(h: StepGraphon) -> float:
    w = h.masses
    return float(w @ h.values @ w)


def triangle_density(h: StepGraphon) -> float:
    return hom_density(TRIANGLE, h)


def rate_function_scalar(u):
    """I(u) = u log u / 2 + (1 - u) log(1 - u) / 2 with 0 log 0 = 0.

    Accepts scalars or arrays; returns the same shape.
    """
    arr = np.asarray(u, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > 1):
        raise DomainError(f"rate function needs u in [0, 1], got {u!r}")
    out = 0.5 * (_xlogx(arr) + _xlogx(1.0 - arr))
    return float(out) if np.ndim(out) == 0 else out


def _xlogx(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log(safe), 0.0)


def rate_function(h: StepGraphon) -> float:
    w = h.masses
    return float(w @ rate_function_scalar(h.values) @ w)


def entropy(h: StepGraphon) -> float:
    """-I(h), the quantity maximized in the variational problems."""
    return -rate_function(h)


# --- cut norm ---------------------------------------------------------------

def _subset_matrix(k: int) -> np.ndarray:
    masks = np.arange(1 << k, dtype=np.int64)
    return ((masks[:, None] >> np.arange(k)) & 1).astype(float)


def _exact_value(M: np.ndarray, s_bits, t_bits) -> float:
    return math.fsum(M[np.ix_(s_bits, t_bits)].ravel().tolist())


def _weighted_difference(a: StepGraphon, b: StepGraphon) -> np.ndarray:
    w = a.masses
    return np.outer(w, w) * (a.values - b.values)


def cut_norm_matrix(M: np.ndarray) -> float:
    """max over block subsets S, T of |sum_{i in S, j in T} M_ij|.

    The value of a pair (S, T) is defined as the correctly rounded
    (``math.fsum``) sum of its entries, so the result does not depend on
    summation order. For each S the best T is read off the signs of the
    partial row sums; candidates within 1e-12 of the float optimum are then
    re-scored exactly.
    """
    k = M.shape[0]
    if k > MAX_CUT_BLOCKS:
        raise SizeError(f"{k} blocks; exhaustive cut norm limited to {MAX_CUT_BLOCKS}")
    S = _subset_matrix(k)
    R = S @ M
    pos = np.where(R > 0, R, 0.0).sum(axis=1)
    neg = -np.where(R < 0, R, 0.0).sum(axis=1)
    best = max(pos.max(), neg.max())
    rows = np.nonzero((pos >= best - 1e-12) | (neg >= best - 1e-12))[0]
    result = 0.0
    for r in rows:
        s_bits = np.nonzero(S[r])[0]
        if not len(s_bits):
            continue
        for t_bits in (np.nonzero(R[r] > 0)[0], np.nonzero(R[r] < 0)[0]):
            if len(t_bits):
                result = max(result, abs(_exact_value(M, s_bits, t_bits)))
    return result


def cut_norm(a: StepGraphon, b: StepGraphon) -> float:
    """d_box(a, b) = sup_{S,T} |int_{S x T} (a - b)|, exact on the common refinement."""
    ra, rb = common_refinement(a, b)
    return cut_norm_matrix(_weighted_difference(ra, rb))


def _distinct_permutations(values: np.ndarray):
    """Block permutations, skipping those that merely swap identical blocks."""
    k = len(values)
    seen = set()
    for perm in permutations(range(k)):
        key = values[np.ix_(perm, perm)].tobytes()
        if key in seen:
            continue
        seen.add(key)
        yield perm


def cut_distance_upper(a: StepGraphon, b: StepGraphon) -> float:
    """Upper bound on delta_box: minimum of d_box over block relabelings.

    Both graphons are refined onto a common equal-mass partition (at most 9
    blocks) and the blocks of ``a`` are permuted. Exact when the optimal
    measure-preserving map permutes those blocks.
    """
    refined = equal_mass_refinement(a, b, MAX_PERM_BLOCKS)
    if refined is None:
        raise SizeError(f"no common equal-mass partition with <= {MAX_PERM_BLOCKS} blocks")
    ra, rb = refined
    return min(
        cut_norm_matrix(_weighted_difference(ra.permuted(p), rb))
        for p in _distinct_permutations(ra.values)
    )


__all__ = [
    "EDGE",
    "TRIANGLE",
    "HALF_LOG2",
    "hom_density",
    "edge_density",
    "triangle_density",
    "rate_function_scalar",
    "rate_function",
    "entropy",
    "cut_norm",
    "cut_norm_matrix",
    "cut_distance_upper",
]
