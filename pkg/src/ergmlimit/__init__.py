"""Graph-limit functionals and constrained exponential random graph variational problems."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BoundaryError,
    ConvergenceError,
    DomainError,
    EmptyShellError,
    RegionError,
    SizeError,
)
from .graphs import (  # noqa: E402
    ModelParams,
    SimpleGraph,
    StepGraphon,
    bipartite_test_graphon,
    complete_graph,
    constant_graphon,
    graph_to_graphon,
    symmetric_bipodal,
)
from .functionals import (  # noqa: E402
    cut_distance_upper,
    cut_norm,
    edge_density,
    hom_density,
    rate_function,
    rate_function_scalar,
    triangle_density,
)

__all__ = [
    "__version__",
    "BoundaryError",
    "ConvergenceError",
    "DomainError",
    "EmptyShellError",
    "RegionError",
    "SizeError",
    "ModelParams",
    "SimpleGraph",
    "StepGraphon",
    "bipartite_test_graphon",
    "complete_graph",
    "constant_graphon",
    "graph_to_graphon",
    "symmetric_bipodal",
    "cut_distance_upper",
    "cut_norm",
    "edge_density",
    "hom_density",
    "rate_function",
    "rate_function_scalar",
    "triangle_density",
]
