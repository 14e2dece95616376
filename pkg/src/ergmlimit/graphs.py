"""Finite simple graphs, step graphons, and their file formats."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .errors import DomainError

MASS_TOL = 1e-12
MIN_BLOCK = 1e-14


@dataclass(frozen=True, eq=False)
class SimpleGraph:
    """Simple undirected graph on vertices ``0..n_vertices-1``.

    ``edges`` is an ``(m, 2)`` int array with ``i < j`` in every row, sorted
    lexicographically. Any iterable of pairs is accepted and normalized.
    """

    n_vertices: int
    edges: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))

    def __post_init__(self):
        n = int(self.n_vertices)
        if n < 1:
            raise DomainError(f"graph needs at least one vertex, got {n}")
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if len(e):
            if np.any(e[:, 0] == e[:, 1]):
                raise DomainError("loops are not allowed")
            if e.min() < 0 or e.max() >= n:
                raise DomainError("vertex index out of range")
            e = np.sort(e, axis=1)
            keys = e[:, 0] * n + e[:, 1]
            order = np.argsort(keys, kind="stable")
            e, keys = e[order], keys[order]
            if np.any(np.diff(keys) == 0):
                raise DomainError("duplicate edge")
        e.setflags(write=False)
        object.__setattr__(self, "n_vertices", n)
        object.__setattr__(self, "edges", e)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in self.edges]

    def adjacency(self, dtype=np.int8) -> np.ndarray:
        a = np.zeros((self.n_vertices, self.n_vertices), dtype=dtype)
        if self.n_edges:
            a[self.edges[:, 0], self.edges[:, 1]] = 1
            a[self.edges[:, 1], self.edges[:, 0]] = 1
        return a

    def __eq__(self, other):
        if not isinstance(other, SimpleGraph):
            return NotImplemented
        return self.n_vertices == other.n_vertices and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.n_vertices, self.edges.tobytes()))

    def __repr__(self):
        return f"SimpleGraph(n_vertices={self.n_vertices}, edges={self.edge_list()})"

    def disjoint_union(self, other: SimpleGraph) -> SimpleGraph:
        shifted = other.edges + self.n_vertices
        return SimpleGraph(self.n_vertices + other.n_vertices, np.vstack([self.edges, shifted]))

    @classmethod
    def from_adjacency(cls, a) -> SimpleGraph:
        a = np.asarray(a)
        i, j = np.nonzero(np.triu(a, 1))
        return cls(a.shape[0], np.column_stack([i, j]))


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, list(combinations(range(n), 2)))


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, (i + 1) % n) for i in range(n)])


EDGE = complete_graph(2)
TRIANGLE = complete_graph(3)


def named_graph(name: str) -> SimpleGraph:
    """Parse ``K3``, ``P4``, ``C5`` style names."""
    kind, size = name[:1].upper(), name[1:]
    makers = {"K": complete_graph, "P": path_graph, "C": cycle_graph}
    if kind not in makers or not size.isdigit():
        raise DomainError(f"unknown graph name {name!r}")
    return makers[kind](int(size))


@dataclass(frozen=True, eq=False)
class StepGraphon:
    """Symmetric kernel constant on the blocks of a partition of [0, 1]."""

    masses: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        w = np.array(self.masses, dtype=float).reshape(-1)
        v = np.array(self.values, dtype=float)
        k = len(w)
        if k == 0:
            raise DomainError("graphon needs at least one block")
        if v.shape != (k, k):
            raise DomainError(f"values must be {k}x{k}, got {v.shape}")
        if np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise DomainError("block masses must be strictly positive")
        if abs(w.sum() - 1.0) > MASS_TOL:
            raise DomainError(f"block masses sum to {w.sum()!r}, not 1")
        if not np.all(np.isfinite(v)) or v.min() < 0 or v.max() > 1:
            raise DomainError("graphon values must lie in [0, 1]")
        if not np.array_equal(v, v.T):
            raise DomainError("graphon values must be symmetric")
        w.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "masses", w)
        object.__setattr__(self, "values", v)

    @property
    def k(self) -> int:
        return len(self.masses)

    def boundaries(self) -> np.ndarray:
        b = np.concatenate([[0.0], np.cumsum(self.masses)])
        b[-1] = 1.0
        return b

    def permuted(self, perm) -> StepGraphon:
        """Relabel blocks: new block ``i`` is old block ``perm[i]``."""
        p = np.asarray(perm)
        return StepGraphon(self.masses[p], self.values[np.ix_(p, p)])

    def on_partition(self, boundaries) -> StepGraphon:
        """Re-express on a finer partition given by sorted boundary points."""
        b = np.asarray(boundaries, dtype=float)
        mids = 0.5 * (b[:-1] + b[1:])
        idx = block_index(self, mids)
        w = np.diff(b)
        return StepGraphon(w / w.sum(), self.values[np.ix_(idx, idx)])

    def __call__(self, x, y):
        return self.values[block_index(self, x), block_index(self, y)]

    def __repr__(self):
        return f"StepGraphon(masses={self.masses.tolist()}, values={self.values.tolist()})"

    def to_dict(self) -> dict:
        return {"masses": self.masses.tolist(), "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> StepGraphon:
        return cls(d["masses"], d["values"])


def block_index(h: StepGraphon, x) -> np.ndarray:
    """Block containing each point of ``x`` (right-closed blocks, as in ceil(nx))."""
    x = np.asarray(x, dtype=float)
    inner = np.cumsum(h.masses)[:-1]
    return np.searchsorted(inner, x, side="left")


def constant_graphon(p: float) -> StepGraphon:
    return StepGraphon([1.0], [[p]])


def bipodal_graphon(c: float, p11: float, p12: float, p22: float) -> StepGraphon:
    return StepGraphon([c, 1.0 - c], [[p11, p12], [p12, p22]])


def symmetric_bipodal(eps: float) -> StepGraphon:
    """Equal blocks, 1/2 - eps inside each block and 1/2 + eps across."""
    return bipodal_graphon(0.5, 0.5 - eps, 0.5 + eps, 0.5 - eps)


def bipartite_test_graphon(e: float) -> StepGraphon:
    """Equal blocks, empty inside each block, density 2e across (triangle free)."""
    if not 0 <= e <= 0.5:
        raise DomainError(f"need 0 <= e <= 1/2, got {e}")
    return bipodal_graphon(0.5, 0.0, 2 * e, 0.0)


def graph_to_graphon(G: SimpleGraph) -> StepGraphon:
    n = G.n_vertices
    return StepGraphon(np.full(n, 1.0 / n), G.adjacency(dtype=float))


def common_refinement(a: StepGraphon, b: StepGraphon) -> tuple[StepGraphon, StepGraphon]:
    pts = np.unique(np.concatenate([a.boundaries(), b.boundaries()]))
    keep = np.concatenate([[True], np.diff(pts) >= MIN_BLOCK])
    pts = pts[keep]
    pts[-1] = 1.0
    return a.on_partition(pts), b.on_partition(pts)


def equal_mass_refinement(a: StepGraphon, b: StepGraphon, max_blocks: int):
    """Smallest m <= max_blocks such that both partitions are unions of m equal blocks."""
    bounds = np.concatenate([a.boundaries(), b.boundaries()])
    for m in range(1, max_blocks + 1):
        scaled = bounds * m
        if np.all(np.abs(scaled - np.round(scaled)) < 1e-9):
            grid = np.arange(m + 1) / m
            return a.on_partition(grid), b.on_partition(grid)
    return None


# --- file formats -----------------------------------------------------------

def read_graphon(path) -> StepGraphon:
    with open(path) as fh:
        return StepGraphon.from_dict(json.load(fh))


def write_graphon(h: StepGraphon, path) -> None:
    Path(path).write_text(json.dumps(h.to_dict()) + "\n")


def parse_graph(text: str) -> SimpleGraph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DomainError("empty graph file")
    n, m = int(lines[0][0]), int(lines[0][1])
    if len(lines) - 1 != m:
        raise DomainError(f"header promises {m} edges, file has {len(lines) - 1}")
    return SimpleGraph(n, [(int(i), int(j)) for i, j in lines[1:]])


def format_graph(G: SimpleGraph) -> str:
    rows = [f"{G.n_vertices} {G.n_edges}"] + [f"{i} {j}" for i, j in G.edges]
    return "\n".join(rows) + "\n"


def read_graph(path) -> SimpleGraph:
    return parse_graph(Path(path).read_text())


def write_graph(G: SimpleGraph, path) -> None:
    Path(path).write_text(format_graph(G))


@dataclass(frozen=True)
class ModelParams:
    beta1: float = 0.0
    beta2: float = 0.0
    e_target: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.e_target <= 1.0:
            raise DomainError(f"e_target must lie in [0, 1], got {self.e_target}")
