"""Delta_H kernels and the Euler-Lagrange equation for two-parameter models.

The unconstrained stationarity condition for ``beta1 t(K2, h) + beta2 t(H2, h) - I(h)``
is the logistic fixed point

    h = logistic(2 beta1 Delta_{K2} h + 2 beta2 Delta_{H2} h),

and the constrained maximizers of ``-I`` satisfy, for some multipliers,

    Delta_{H2} h = beta1 + (beta2 / 2) log(1/h - 1).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit, logit

from .errors import BoundaryError, DomainError, SizeError
from .functionals import _contract
from .graphs import EDGE, TRIANGLE, SimpleGraph, StepGraphon

MAX_DELTA_VERTICES = 8


def delta_H(H: SimpleGraph, h: StepGraphon) -> np.ndarray:
    """Block matrix of Delta_H h.

    Each edge {r, s} contributes the integral of the remaining edge factors
    over the other vertices with x_r, x_s pinned to the block pair. The
    kernel is symmetrized edge by edge, which leaves the first variation of
    t(H, .) along symmetric perturbations unchanged:
    d t(H, h) = sum_ab w_a w_b Delta[a, b] dh[a, b].
    """
    if H.n_vertices > MAX_DELTA_VERTICES:
        raise SizeError(f"H has {H.n_vertices} vertices; limit is {MAX_DELTA_VERTICES}")
    out = np.zeros((h.k, h.k))
    for idx, (r, s) in enumerate(H.edges):
        K = _contract(H, h, free=(int(r), int(s)), skip_edge=idx)
        out += 0.5 * (K + K.T)
    return out


@dataclass(frozen=True)
class ELConfig:
    beta1: float = 0.0
    beta2: float = 0.0
    H2: SimpleGraph = field(default_factory=lambda: TRIANGLE)
    blocks: int = 8
    damping: float = 0.5
    tol: float = 1e-10
    max_iter: int = 10000

    def __post_init__(self):
        if not 1 <= self.blocks <= 64:
            raise DomainError(f"blocks must be in 1..64, got {self.blocks}")
        if not 0 < self.damping <= 1:
            raise DomainError(f"damping must be in (0, 1], got {self.damping}")
        if self.tol <= 0 or self.max_iter < 1:
            raise DomainError("tol must be positive and max_iter >= 1")


@dataclass
class ELSolution:
    graphon: StepGraphon
    residual_sup: float
    iterations: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "graphon": self.graphon.to_dict(),
            "residual_sup": self.residual_sup,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _field(h: StepGraphon, beta1: float, beta2: float, H2: SimpleGraph) -> np.ndarray:
    return 2.0 * beta1 * delta_H(EDGE, h) + 2.0 * beta2 * delta_H(H2, h)


def el_map(h: StepGraphon, beta1: float, beta2: float, H2: SimpleGraph) -> np.ndarray:
    """logistic(2 beta1 Delta_{K2} h + 2 beta2 Delta_{H2} h) as a block matrix."""
    return expit(_field(h, beta1, beta2, H2))


def _symmetric(v):
    return 0.5 * (v + v.T)


def el_fixed_point(cfg: ELConfig, init: StepGraphon | None = None) -> ELSolution:
    """Damped iteration of the logistic map on equal-mass blocks.

    Non-convergence is reported through ``converged=False``, not raised.
    """
    m = cfg.blocks
    masses = np.full(m, 1.0 / m)
    if init is None:
        values = np.full((m, m), 0.5)
    else:
        if init.k != m or not np.allclose(init.masses, masses, atol=1e-12):
            raise DomainError(f"init must have {m} equal-mass blocks")
        values = np.array(init.values)
        if values.min() <= 0 or values.max() >= 1:
            raise BoundaryError("init values must lie strictly inside (0, 1)")
    lam = cfg.damping
    h = StepGraphon(masses, values)
    residual = np.inf
    it = 0
    for it in range(1, cfg.max_iter + 1):
        field_ = _symmetric(_field(h, cfg.beta1, cfg.beta2, cfg.H2))
        target = expit(field_)
        residual = float(np.max(np.abs(target - h.values)))
        # near 0 or 1 a small residual in h is a large one in logit form; require both,
        # up to the rounding floor of logit(h)
        v = h.values
        floor = 1e-14 / float(np.min(v * (1.0 - v)))
        if residual <= cfg.tol and np.max(np.abs(field_ - logit(v))) <= cfg.tol + floor:
            it -= 1
            break
        h = StepGraphon(masses, _symmetric((1 - lam) * h.values + lam * target))
    else:
        target = _symmetric(el_map(h, cfg.beta1, cfg.beta2, cfg.H2))
        residual = float(np.max(np.abs(target - h.values)))
    return ELSolution(h, residual, it, residual <= cfg.tol)


def logit_residual(h: StepGraphon, beta1: float, beta2: float, H2: SimpleGraph) -> float:
    """sup |2 beta1 Delta_{K2} h + 2 beta2 Delta_{H2} h - log(h / (1 - h))|."""
    _require_interior(h)
    return float(np.max(np.abs(_field(h, beta1, beta2, H2) - logit(h.values))))


def _require_interior(h: StepGraphon):
    if h.values.min() <= 0 or h.values.max() >= 1:
        raise BoundaryError("graphon must be bounded away from 0 and 1")


def stationarity_residual(h: StepGraphon, beta1: float, beta2: float, H2: SimpleGraph) -> float:
    """max over block pairs of |Delta_{H2} h - beta1 - (beta2/2) log(1/h - 1)|."""
    _require_interior(h)
    lhs = delta_H(H2, h)
    rhs = beta1 + 0.5 * beta2 * np.log(1.0 / h.values - 1.0)
    return float(np.max(np.abs(lhs - rhs)))


def recover_multipliers(h: StepGraphon, H2: SimpleGraph, value_tol: float = 1e-12):
    """Fit Delta_{H2} h ~ beta1 + (beta2/2) log(1/h - 1) by mass-weighted least squares.

    Returns ``(beta1, beta2, residual, degenerate)``; ``residual`` is the sup
    over block pairs of the fitted equation's error. A graphon with fewer than
    two distinct values is degenerate: then beta2 = 0 and beta1 is the
    weighted mean of Delta_{H2} h.
    """
    _require_interior(h)
    delta = delta_H(H2, h).ravel()
    x = 0.5 * np.log(1.0 / h.values - 1.0).ravel()
    wts = np.outer(h.masses, h.masses).ravel()
    vals = h.values.ravel()
    degenerate = bool(vals.max() - vals.min() <= value_tol)
    if degenerate:
        beta1 = float(np.sum(wts * delta) / np.sum(wts))
        beta2 = 0.0
    else:
        sw = np.sqrt(wts)
        A = np.column_stack([np.ones_like(x), x]) * sw[:, None]
        (beta1, beta2), *_ = np.linalg.lstsq(A, delta * sw, rcond=None)
        beta1, beta2 = float(beta1), float(beta2)
    residual = float(np.max(np.abs(delta - beta1 - beta2 * x)))
    return beta1, beta2, residual, degenerate
