import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_graphon
from ergmlimit.errors import DomainError, SizeError
from ergmlimit.functionals import (
    cut_distance_upper,
    cut_norm,
    cut_norm_matrix,
    edge_density,
    hom_density,
    rate_function,
    rate_function_scalar,
    triangle_density,
)
from ergmlimit.graphs import (
    EDGE,
    TRIANGLE,
    SimpleGraph,
    StepGraphon,
    common_refinement,
    complete_graph,
    constant_graphon,
    cycle_graph,
    graph_to_graphon,
    path_graph,
    symmetric_bipodal,
)

PATTERNS = [EDGE, TRIANGLE, path_graph(3), path_graph(4), cycle_graph(4), complete_graph(4),
            SimpleGraph(3, [(0, 1)])]


def brute_hom_density(H, h):
    """Sum over all block assignments of the vertices."""
    total = []
    for assign in product(range(h.k), repeat=H.n_vertices):
        term = math.prod(h.masses[a] for a in assign)
        for i, j in H.edge_list():
            term *= h.values[assign[i], assign[j]]
        total.append(term)
    return math.fsum(total)


def brute_hom_count(H, G):
    A = G.adjacency()
    return sum(
        all(A[f[i], f[j]] for i, j in H.edge_list())
        for f in product(range(G.n_vertices), repeat=H.n_vertices)
    )


def naive_cut_norm(M):
    k = len(M)
    best = 0.0
    for s in range(1, 1 << k):
        S = [i for i in range(k) if s >> i & 1]
        for t in range(1, 1 << k):
            T = [j for j in range(k) if t >> j & 1]
            best = max(best, abs(math.fsum(M[i, j] for i in S for j in T)))
    return best


seeds = st.integers(0, 2**32 - 1)


@given(seeds, st.integers(1, 4), st.sampled_from(PATTERNS))
def test_hom_density_matches_brute_force(seed, k, H):
    h = random_graphon(np.random.default_rng(seed), k)
    assert hom_density(H, h) == pytest.approx(brute_hom_density(H, h), rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("H", PATTERNS)
def test_hom_density_of_graph_counts_homomorphisms(H):
    G = SimpleGraph(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 1)])
    expected = brute_hom_count(H, G) / 5**H.n_vertices
    assert hom_density(H, graph_to_graphon(G)) == pytest.approx(expected, rel=1e-13)


@given(seeds, st.sampled_from(PATTERNS), st.sampled_from(PATTERNS))
def test_disjoint_union_is_multiplicative(seed, F, H):
    h = random_graphon(np.random.default_rng(seed), 3)
    lhs = hom_density(F.disjoint_union(H), h)
    assert lhs == pytest.approx(hom_density(F, h) * hom_density(H, h), rel=1e-12, abs=1e-15)


@given(seeds, st.permutations(range(4)))
def test_block_permutation_invariance(seed, perm):
    h = random_graphon(np.random.default_rng(seed), 4)
    for H in PATTERNS:
        assert hom_density(H, h.permuted(list(perm))) == pytest.approx(hom_density(H, h), rel=1e-12)


@given(seeds, st.integers(1, 5))
def test_kruskal_katona(seed, k):
    h = random_graphon(np.random.default_rng(seed), k)
    assert triangle_density(h) <= edge_density(h) ** 1.5 + 1e-15


def test_constant_and_bipodal_densities():
    assert edge_density(constant_graphon(0.3)) == pytest.approx(0.3)
    assert triangle_density(constant_graphon(0.3)) == pytest.approx(0.027)
    eps = 0.2
    h = symmetric_bipodal(eps)
    assert edge_density(h) == pytest.approx(0.5, abs=1e-15)
    assert triangle_density(h) == pytest.approx(0.125 - eps**3, abs=1e-15)


def test_hom_density_size_limit():
    with pytest.raises(SizeError):
        hom_density(complete_graph(11), constant_graphon(0.5))


def test_rate_function_values():
    assert rate_function_scalar(0.0) == 0.0
    assert rate_function_scalar(1.0) == 0.0
    assert rate_function_scalar(0.5) == pytest.approx(-math.log(2) / 2, abs=1e-16)
    u = 0.3
    assert rate_function_scalar(u) == pytest.approx(0.5 * (u * math.log(u) + (1 - u) * math.log(1 - u)))
    with pytest.raises(DomainError):
        rate_function_scalar(1.2)


@given(seeds, st.integers(1, 5))
def test_rate_function_is_mass_weighted(seed, k):
    h = random_graphon(np.random.default_rng(seed), k)
    ref = sum(h.masses[a] * h.masses[b] * rate_function_scalar(h.values[a, b])
              for a in range(k) for b in range(k))
    assert rate_function(h) == pytest.approx(ref, rel=1e-12, abs=1e-15)
    # Jensen: the constant graphon minimizes I at fixed edge density
    assert rate_function(h) >= rate_function_scalar(edge_density(h)) - 1e-15


@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_cut_norm_matches_naive(seed, ka, kb):
    rng = np.random.default_rng(seed)
    a, b = random_graphon(rng, ka), random_graphon(rng, kb)
    ra, rb = common_refinement(a, b)
    M = np.outer(ra.masses, ra.masses) * (ra.values - rb.values)
    assert cut_norm(a, b) == naive_cut_norm(M)


@given(seeds)
def test_cut_norm_metric_properties(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_graphon(rng, 3) for _ in range(3))
    assert cut_norm(a, a) == 0.0
    assert cut_norm(a, b) == cut_norm(b, a)
    assert cut_norm(a, c) <= cut_norm(a, b) + cut_norm(b, c) + 1e-15
    # cut norm is bounded by the L1 distance
    ra, rb = common_refinement(a, b)
    l1 = float(np.sum(np.outer(ra.masses, ra.masses) * np.abs(ra.values - rb.values)))
    assert cut_norm(a, b) <= l1 + 1e-15


def test_cut_norm_examples():
    assert cut_norm(constant_graphon(0.7), constant_graphon(0.2)) == pytest.approx(0.5)
    # +-eps checkerboard: best cut takes one diagonal block
    assert cut_norm(symmetric_bipodal(0.2), constant_graphon(0.5)) == pytest.approx(0.05)
    with pytest.raises(SizeError):
        cut_norm_matrix(np.zeros((17, 17)))


def test_cut_distance_sees_relabelings(rng):
    h = random_graphon(rng, 4, equal=True)
    perm = [2, 0, 3, 1]
    assert cut_norm(h, h.permuted(perm)) > 0
    assert cut_distance_upper(h, h.permuted(perm)) == 0.0
    assert cut_distance_upper(h, constant_graphon(0.5)) <= cut_norm(h, constant_graphon(0.5))


def test_cut_distance_needs_small_common_partition():
    a = StepGraphon(np.array([0.3, 0.7]), np.array([[0.1, 0.2], [0.2, 0.3]]))
    with pytest.raises(SizeError):
        cut_distance_upper(a, symmetric_bipodal(0.1))
