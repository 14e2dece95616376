import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_graphon
from ergmlimit.errors import DomainError
from ergmlimit.functionals import edge_density, triangle_density
from ergmlimit.graphs import (
    SimpleGraph,
    complete_graph,
    constant_graphon,
    graph_to_graphon,
    symmetric_bipodal,
)
from ergmlimit.sampling import (
    SampleSpec,
    empirical_densities,
    replicate_densities,
    sample_w_random,
)


def test_trivial_graphons():
    assert sample_w_random(SampleSpec(5, constant_graphon(1.0), 1)) == complete_graph(5)
    assert sample_w_random(SampleSpec(5, constant_graphon(0.0), 1)).n_edges == 0


def test_small_graph_densities():
    assert empirical_densities(complete_graph(3)) == pytest.approx((2 / 3, 2 / 9), abs=1e-15)
    assert empirical_densities(complete_graph(4)) == (0.75, 0.375)
    assert empirical_densities(SimpleGraph(5)) == (0.0, 0.0)


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 8))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return SimpleGraph(n, [p for p, k in zip(pairs, keep) if k])


@given(graphs())
def test_empirical_matches_graphon_functionals(G):
    e, t = empirical_densities(G)
    h = graph_to_graphon(G)
    assert e == pytest.approx(edge_density(h), abs=1e-15)
    assert t == pytest.approx(triangle_density(h), abs=1e-15)


def test_seed_determinism():
    h = symmetric_bipodal(0.3)
    a = sample_w_random(SampleSpec(300, h, 42))
    b = sample_w_random(SampleSpec(300, h, 42))
    c = sample_w_random(SampleSpec(300, h, 43))
    assert a == b and a != c


def test_mean_edge_density_matches_graphon():
    rng = np.random.default_rng(11)
    for _ in range(5):
        h = random_graphon(rng, 3)
        es = [e for _, e, _ in replicate_densities(h, 500, range(50))]
        assert abs(np.mean(es) - edge_density(h)) < 0.01


def test_bipodal_concentration_within_four_se():
    h = symmetric_bipodal(0.47)
    rows = replicate_densities(h, 600, range(20))
    es = np.array([r[1] for r in rows])
    ts = np.array([r[2] for r in rows])
    se_e = es.std(ddof=1) / np.sqrt(len(es))
    se_t = ts.std(ddof=1) / np.sqrt(len(ts))
    assert abs(es.mean() - 0.5) <= 4 * se_e + 1.0 / 600  # 2E/n^2 misses 1/n of the diagonal
    assert abs(ts.mean() - (0.125 - 0.47**3)) <= 4 * se_t + 3.0 / 600


@pytest.mark.parametrize("seed", [-1, 2**64])
def test_seed_range(seed):
    with pytest.raises(DomainError):
        SampleSpec(5, constant_graphon(0.5), seed)


def test_max_seed_accepted():
    assert sample_w_random(SampleSpec(4, constant_graphon(0.5), 2**64 - 1)).n_vertices == 4
