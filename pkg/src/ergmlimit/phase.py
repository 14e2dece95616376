"""Constrained free energy psi^{e, beta2} = sup_t (beta2 t + s(e, t)) and its transition.

beta1 is held at 0: at fixed edge density it only shifts psi by beta1 * e.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .functionals import rate_function_scalar
from .variational import (
    BipodalParams,
    EntropyPoint,
    region_bounds,
    s_curve,
    s_half_closed,
    s_numeric,
)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
SUPPORT_SLACK = 1e-8
CLOSED_GRID = 2048
NUMERIC_GRID = 48
CLOSED_VALIDATION = 1000
NUMERIC_VALIDATION = 64
TIE_TOL = 1e-9


@dataclass(frozen=True)
class PhasePoint:
    beta2: float
    psi: float
    t_star: float
    eps_star: float
    maximizer: BipodalParams
    tie: bool = False

    def row(self) -> dict:
        return {"beta2": self.beta2, "psi": self.psi, "t_star": self.t_star, "eps_star": self.eps_star}


@dataclass(frozen=True)
class CriticalPoint:
    e: float
    beta2_c: float
    t_c: float
    eps_c: float
    support_margin: float = 0.0
    conjectural: bool = False

    def to_dict(self) -> dict:
        return {"e": self.e, "beta2_c": self.beta2_c, "t_c": self.t_c, "eps_c": self.eps_c,
                "support_margin": self.support_margin, "conjectural": self.conjectural}


@dataclass(frozen=True)
class JumpReport:
    size: float
    beta2_above: float
    beta2_below: float
    first_order: bool


def golden_section(f, a: float, b: float, tol: float):
    """Minimize a unimodal f on [a, b] to an interval of width tol; returns (x, f(x))."""
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = f(x2)
    return (float(x1), float(f1)) if f1 <= f2 else (float(x2), float(f2))


def _eps(e: float, t: float) -> float:
    return max(e**3 - t, 0.0) ** (1.0 / 3.0)


def _check_e(e: float):
    if not 0 < e <= 0.5:
        raise DomainError(f"phase analysis needs 0 < e <= 1/2, got {e}")


class EntropyCurve:
    """s(e, .) on [t_min, e^3] with memoized evaluations.

    Closed form on e = 1/2; elsewhere bipodal search, warm-started from the
    nearest point already computed.
    """

    def __init__(self, e: float, starts: int = 8):
        _check_e(e)
        self.e = e
        self.top = e**3
        self.t_min = region_bounds(e)[0]
        self.closed = e == 0.5
        self.starts = starts
        self.s_top = -rate_function_scalar(e)
        self._memo: dict[float, EntropyPoint] = {}

    def point(self, t: float) -> EntropyPoint:
        t = float(min(max(t, self.t_min), self.top))
        if t in self._memo:
            return self._memo[t]
        if self.closed:
            pt = s_half_closed(t)
        else:
            warm = []
            if self._memo:
                near = min(self._memo, key=lambda u: abs(u - t))
                warm = [self._memo[near].maximizer]
            pt = s_numeric(self.e, t, starts=self.starts, warm=warm)
        self._memo[t] = pt
        return pt

    def s(self, t: float) -> float:
        return self.point(t).s

    def scan(self, ts) -> list[EntropyPoint]:
        if self.closed:
            return [self.point(t) for t in ts]
        pts = s_curve(self.e, ts, continuation_starts=4)
        for p in pts:
            self._memo.setdefault(float(p.t), p)
        return pts

    def ratio(self, t: float) -> float:
        """Slope of the chord from (t, s(t)) to the Erdos-Renyi endpoint."""
        return (self.s_top - self.s(t)) / (self.top - t)


_CURVES: dict[float, EntropyCurve] = {}
_CRITICAL: dict[tuple, CriticalPoint] = {}


def entropy_curve(e: float) -> EntropyCurve:
    if e not in _CURVES:
        _CURVES[e] = EntropyCurve(e)
    return _CURVES[e]


def critical_point(e: float, tol: float = 1e-10, grid: int | None = None,
                   validation: int | None = None) -> CriticalPoint:
    """Locate beta2_c as minus the minimal chord slope to the Erdos-Renyi endpoint.

    The slope (s(e^3) - s(t)) / (e^3 - t) is minimized over a grid on
    [t_min, e^3), then refined by golden section to width ``tol`` in t. The
    resulting support line is checked to dominate s on a validation grid.
    """
    key = (e, tol, grid, validation)
    if key in _CRITICAL:
        return _CRITICAL[key]
    curve = entropy_curve(e)
    n = grid or (CLOSED_GRID if curve.closed else NUMERIC_GRID)
    ts = curve.t_min + (curve.top - curve.t_min) * np.arange(n) / n
    if not curve.closed:
        curve.scan(ts)
    ratios = np.array([curve.ratio(t) for t in ts])
    j = int(np.argmin(ratios))
    if j == n - 1:
        raise ConvergenceError(
            f"chord slope keeps decreasing toward the endpoint at e = {e}",
            best_residual=float(ratios[j]),
        )
    lo, hi = ts[max(j - 1, 0)], ts[j + 1]
    t_c, m_c = golden_section(curve.ratio, lo, hi, tol)
    if j == 0 and ratios[0] <= m_c:
        t_c, m_c = float(ts[0]), float(ratios[0])
    t_c, m_c = float(t_c), float(m_c)

    nv = validation or (CLOSED_VALIDATION if curve.closed else NUMERIC_VALIDATION)
    vt = curve.t_min + (curve.top - curve.t_min) * np.arange(nv + 1) / nv
    if not curve.closed:
        curve.scan(vt)
    margin = min(curve.s_top + m_c * (t - curve.top) - curve.s(t) for t in vt)
    if margin < -SUPPORT_SLACK:
        raise ConvergenceError(
            f"support line at e = {e} fails to dominate s (margin {margin:.3e})", best_residual=margin
        )
    cp = CriticalPoint(e, -m_c, t_c, _eps(e, t_c), float(margin), conjectural=not curve.closed)
    _CRITICAL[key] = cp
    return cp


def psi_constrained(e: float, beta2: float, crit: CriticalPoint | None = None) -> PhasePoint:
    """sup over t of beta2 t + s(e, t) for beta2 <= 0, with the maximizing t."""
    _check_e(e)
    if beta2 > 0:
        raise DomainError(f"repulsive regime needs beta2 <= 0, got {beta2}")
    curve = entropy_curve(e)
    crit = crit or critical_point(e)
    if beta2 >= crit.beta2_c - TIE_TOL:
        # the support line at the ER endpoint has slope -beta2_c, so h = e wins
        tie = abs(beta2 - crit.beta2_c) <= TIE_TOL
        psi = beta2 * curve.top + curve.s_top
        return PhasePoint(beta2, psi, curve.top, 0.0, BipodalParams.constant(e), tie)

    def neg(t):
        return -(beta2 * t + curve.s(t))

    # concave part of s lies below t_c; keep the grid as a guard against local maxima
    ts = np.linspace(curve.t_min, crit.t_c, 33)
    vals = [neg(t) for t in ts]
    j = int(np.argmin(vals))
    lo, hi = ts[max(j - 1, 0)], ts[min(j + 1, len(ts) - 1)]
    t_star, val = golden_section(neg, lo, hi, 1e-12 if curve.closed else 1e-8)
    for t_edge in (curve.t_min, crit.t_c):
        if neg(t_edge) < val:
            t_star, val = t_edge, neg(t_edge)
    pt = curve.point(t_star)
    return PhasePoint(beta2, float(-val) + 0.0, float(pt.t), _eps(e, pt.t), pt.maximizer)


def phase_scan(e: float, beta2_grid) -> list[PhasePoint]:
    grid = [float(b) for b in beta2_grid]
    if not grid or grid[0] > 0 or any(b2 > b1 for b1, b2 in zip(grid, grid[1:])):
        raise DomainError("beta2 grid must be sorted descending and start at or below 0")
    crit = critical_point(e)
    return [psi_constrained(e, b, crit) for b in grid]


def detect_jump(points: list[PhasePoint]) -> JumpReport:
    """Largest change in t_star between neighbours; first order if it dwarfs the median."""
    t = np.array([p.t_star for p in points])
    if len(t) < 2:
        return JumpReport(0.0, math.nan, math.nan, False)
    d = np.abs(np.diff(t))
    j = int(np.argmax(d))
    med = float(np.median(d))
    return JumpReport(float(d[j]), points[j].beta2, points[j + 1].beta2, bool(d[j] > 10 * med))


def critical_curve(e_grid, tol: float = 1e-8):
    """critical_point for each e; failures are recorded as (e, None, message)."""
    out = []
    for e in e_grid:
        try:
            out.append((float(e), critical_point(float(e), tol=tol), None))
        except (DomainError, ConvergenceError) as exc:
            out.append((float(e), None, str(exc)))
    return out
