"""Constrained entropy s(e, t) = max{-I(h) : e(h) = e, t(h) = t}.

On e = 1/2 the maximizer is the symmetric bipodal graphon and s is closed
form. Elsewhere in the repulsive region (e <= 1/2, t <= e^3) the maximum is
searched over bipodal graphons (c, p11, p12, p22): an exact scan of the
feasible bipodal set locates candidates and a Newton iteration on the KKT
system polishes them. Away from e = 1/2 the bipodal form of
the maximizer is conjectural and results say so.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import ConvergenceError, DomainError, RegionError
from .functionals import HALF_LOG2, rate_function_scalar
from .graphs import StepGraphon, bipodal_graphon

CONSTRAINT_TOL = 1e-9
REGION_SLACK = 1e-9
DEFAULT_STARTS = 32


@dataclass(frozen=True)
class BipodalParams:
    c: float
    p11: float
    p12: float
    p22: float

    def __post_init__(self):
        if not 0 < self.c < 1:
            raise DomainError(f"block mass c must be in (0, 1), got {self.c}")
        for p in (self.p11, self.p12, self.p22):
            if not 0 <= p <= 1:
                raise DomainError(f"bipodal values must lie in [0, 1], got {p}")

    def graphon(self) -> StepGraphon:
        return bipodal_graphon(self.c, self.p11, self.p12, self.p22)

    def as_array(self) -> np.ndarray:
        return np.array([self.c, self.p11, self.p12, self.p22])

    def canonical(self) -> BipodalParams:
        """Representative with c <= 1/2 (and p11 <= p22 when c = 1/2)."""
        c, a, b, g = self.c, self.p11, self.p12, self.p22
        if c > 0.5 or (c == 0.5 and a > g):
            c, a, g = 1.0 - c, g, a
        return BipodalParams(c, a, b, g)

    @classmethod
    def constant(cls, p: float) -> BipodalParams:
        return cls(0.5, p, p, p)


@dataclass(frozen=True)
class EntropyPoint:
    e: float
    t: float
    s: float
    maximizer: BipodalParams
    conjectural: bool = False

    def row(self) -> dict:
        m = self.maximizer
        return {"e": self.e, "t": self.t, "s": self.s,
                "c": m.c, "p11": m.p11, "p12": m.p12, "p22": m.p22}


# --- bipodal densities and their gradients ------------------------------------

def bipodal_edge(x) -> float:
    c, a, b, g = x
    d = 1.0 - c
    return c * c * a + 2 * c * d * b + d * d * g


def bipodal_triangle(x) -> float:
    c, a, b, g = x
    d = 1.0 - c
    return c**3 * a**3 + 3 * c * c * d * a * b * b + 3 * c * d * d * g * b * b + d**3 * g**3


def _I(u: float) -> float:
    u = min(max(u, 0.0), 1.0)
    out = 0.0
    if u > 0.0:
        out += u * math.log(u)
    if u < 1.0:
        out += (1.0 - u) * math.log1p(-u)
    return 0.5 * out


def bipodal_rate(x) -> float:
    """I of the bipodal graphon; also accepts an (n, 4) array of parameter rows."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 2:
        c, a, b, g = x.T
        d = 1.0 - c
        Ia, Ib, Ig = (rate_function_scalar(np.clip(v, 0.0, 1.0)) for v in (a, b, g))
        return c * c * Ia + 2 * c * d * Ib + d * d * Ig
    c, a, b, g = (float(v) for v in x)
    d = 1.0 - c
    return c * c * _I(a) + 2 * c * d * _I(b) + d * d * _I(g)


def _grad_edge(x):
    c, a, b, g = x
    d = 1.0 - c
    return np.array([2 * c * a + 2 * (d - c) * b - 2 * d * g, c * c, 2 * c * d, d * d])


def _grad_triangle(x):
    c, a, b, g = x
    d = 1.0 - c
    return np.array([
        3 * c * c * a**3 + 3 * (2 * c * d - c * c) * a * b * b
        + 3 * (d * d - 2 * c * d) * g * b * b - 3 * d * d * g**3,
        3 * c**3 * a * a + 3 * c * c * d * b * b,
        6 * c * c * d * a * b + 6 * c * d * d * g * b,
        3 * c * d * d * b * b + 3 * d**3 * g * g,
    ])


def _rate_prime(u):
    u = np.clip(u, 1e-300, 1.0 - 1e-16)
    return 0.5 * np.log(u / (1.0 - u))


def _grad_rate(x):
    c, a, b, g = x
    d = 1.0 - c
    Ia, Ib, Ig = _I(a), _I(b), _I(g)
    da, db, dg = _rate_prime(np.array([a, b, g]))
    return np.array([2 * c * Ia + 2 * (d - c) * Ib - 2 * d * Ig, c * c * da, 2 * c * d * db, d * d * dg])


# --- optimizer ----------------------------------------------------------------

_LOWER = np.array([1e-9, 0.0, 0.0, 0.0])
_UPPER = np.array([1 - 1e-9, 1.0, 1.0, 1.0])
GRID_C = 64
GRID_P = 129


def feasible_on_grid(e: float, t: float, n_c: int = GRID_C, n_p: int = GRID_P):
    """All bipodal graphons with c on a grid in (0, 1/2], p11 on a grid in [0, 1].

    With c and p11 fixed the edge constraint gives p22 linearly in p12 and the
    triangle constraint becomes a cubic in p12, solved exactly; every real
    root with p12, p22 in [0, 1] is returned. Rows are (c, p11, p12, p22).
    """
    c = 0.5 * np.arange(1, n_c + 1) / n_c
    a = np.linspace(0.0, 1.0, n_p)
    C, A = (m.ravel() for m in np.meshgrid(c, a, indexing="ij"))
    D = 1.0 - C
    G0 = (e - C * C * A) / (D * D)
    G1 = 2 * C / D
    k3 = -3 * C * D * D * G1 - D**3 * G1**3
    k2 = 3 * C * C * D * A + 3 * C * D * D * G0 + 3 * D**3 * G0 * G1 * G1
    k1 = -3 * D**3 * G0 * G0 * G1
    k0 = C**3 * A**3 + D**3 * G0**3 - t
    comp = np.zeros((len(C), 3, 3))
    comp[:, 0, :] = -np.column_stack([k2, k1, k0]) / k3[:, None]
    comp[:, 1, 0] = 1.0
    comp[:, 2, 1] = 1.0
    roots = np.linalg.eigvals(comp)
    rows = []
    for r in range(3):
        b = roots[:, r]
        real = np.abs(b.imag) < 1e-9
        b = b.real
        g = G0 - G1 * b
        ok = real & (b > -1e-12) & (b < 1 + 1e-12) & (g > -1e-12) & (g < 1 + 1e-12)
        rows.append(np.column_stack([C[ok], A[ok], np.clip(b[ok], 0, 1), np.clip(g[ok], 0, 1)]))
    return np.vstack(rows)


def _constraints(x, e0, t0):
    return np.array([bipodal_edge(x) - e0, bipodal_triangle(x) - t0])


def _lagrangian_grad(x, lam):
    return _grad_rate(x) + lam[0] * _grad_edge(x) + lam[1] * _grad_triangle(x)


def _newton_polish(x0, e0, t0, snap_tol, max_iter=60):
    """Newton iteration on the KKT system with values near 0/1 held at the bound.

    Returns None when the iterate ends off the constraint set.
    """
    x = np.array(x0, dtype=float)
    x[1:] = np.where(x[1:] < snap_tol, 0.0, np.where(x[1:] > 1 - snap_tol, 1.0, x[1:]))
    for _ in range(max_iter):
        free = np.ones(4, dtype=bool)
        free[1:] = (x[1:] > 0.0) & (x[1:] < 1.0)
        g = _constraints(x, e0, t0)
        J = np.vstack([_grad_edge(x), _grad_triangle(x)])[:, free]
        rows = np.linalg.norm(J, axis=1) > 1e-12
        if np.any(~rows & (np.abs(g) > CONSTRAINT_TOL)):
            return None
        J, g = J[rows], g[rows]
        gf = _grad_rate(x)[free]
        lam = np.zeros(2)
        if len(g):
            lam[rows] = np.linalg.lstsq(J.T, -gf, rcond=None)[0]
        stat = gf + J.T @ lam[rows]
        if np.max(np.abs(g), initial=0.0) < 1e-15 and np.max(np.abs(stat), initial=0.0) < 1e-11:
            break
        # Hessian of the Lagrangian by central differences of its gradient
        idx = np.nonzero(free)[0]
        H = np.zeros((len(idx), len(idx)))
        for col, i in enumerate(idx):
            h = 1e-6
            xp, xm = x.copy(), x.copy()
            xp[i] += h
            xm[i] -= h
            H[:, col] = (_lagrangian_grad(xp, lam)[free] - _lagrangian_grad(xm, lam)[free]) / (2 * h)
        H = 0.5 * (H + H.T)
        K = np.block([[H, J.T], [J, np.zeros((len(g), len(g)))]])
        sol = np.linalg.lstsq(K, -np.concatenate([stat, g]), rcond=None)[0]
        dx = np.zeros(4)
        dx[free] = sol[: len(idx)]
        step = 1.0
        for i in np.nonzero(dx)[0]:
            room = (_UPPER[i] - x[i]) if dx[i] > 0 else (_LOWER[i] - x[i])
            if abs(dx[i]) > abs(room):
                step = min(step, room / dx[i])
        x_new = np.clip(x + step * dx, _LOWER, _UPPER)
        if not np.all(np.isfinite(x_new)):
            return None
        moved = np.max(np.abs(x_new - x))
        x = x_new
        if moved < 1e-14:
            break
    if np.max(np.abs(_constraints(x, e0, t0))) > CONSTRAINT_TOL:
        return None
    return x


def _spread_candidates(pts: np.ndarray, scores: np.ndarray, limit: int, radius: float):
    """Best-first selection of up to ``limit`` points at least ``radius`` apart in (c, p11)."""
    order = np.argsort(-scores, kind="stable")
    chosen = []
    for i in order:
        if chosen and np.min(np.max(np.abs(pts[chosen, :2] - pts[i, :2]), axis=1)) <= radius:
            continue
        chosen.append(i)
        if len(chosen) == limit:
            break
    return pts[chosen]


def _validate_repulsive(e: float, t: float):
    if not 0 < e <= 0.5:
        raise DomainError(f"entropy maximization needs 0 < e <= 1/2, got e = {e}")
    t_min, t_max = region_bounds(e)
    if t < t_min - REGION_SLACK or t > t_max + REGION_SLACK:
        raise RegionError(f"(e, t) = ({e}, {t}) is outside the feasible region [{t_min}, {t_max}]")
    if t > e**3 + REGION_SLACK:
        raise DomainError(f"t = {t} lies above the Erdos-Renyi curve e^3 = {e**3}")


def _best(candidates):
    """Highest entropy, ties broken by lexicographic parameter order."""
    return max(candidates, key=lambda pr: (pr[0], tuple(-v for v in pr[1].as_array())))


def s_half_closed(t: float) -> EntropyPoint:
    """s(1/2, t) from the symmetric bipodal graphon with eps = (1/8 - t)^(1/3)."""
    if not 0.0 <= t <= 0.125:
        raise DomainError(f"closed form needs 0 <= t <= 1/8, got {t}")
    eps = min((0.125 - t) ** (1.0 / 3.0), 0.5)
    s = -rate_function_scalar(0.5 + eps)
    return EntropyPoint(0.5, t, s, BipodalParams(0.5, 0.5 - eps, 0.5 + eps, 0.5 - eps))


def s_numeric(e: float, t: float, starts: int = DEFAULT_STARTS, tol: float = CONSTRAINT_TOL,
              warm=()) -> EntropyPoint:
    """Maximize -I over bipodal graphons with edge density e and triangle density t.

    The feasible bipodal set is scanned exactly on a (c, p11) grid; the best
    ``starts`` well-separated grid points, plus any ``warm`` starts, are
    polished by Newton's method on the KKT system. A polished point replaces
    its start only if it is feasible to ``tol`` and not worse.
    """
    _validate_repulsive(e, t)
    if t >= e**3 - 1e-15:
        # Jensen: the constant graphon is the unique maximizer on the ER curve
        return EntropyPoint(e, t, -rate_function_scalar(e), BipodalParams.constant(e), e != 0.5)
    t = max(t, 0.0)
    grid = feasible_on_grid(e, t)
    seeds = [np.asarray(w.as_array() if isinstance(w, BipodalParams) else w, dtype=float)
             for w in warm]
    if len(grid):
        scores = -bipodal_rate(grid)
        seeds += list(_spread_candidates(grid, scores, starts, radius=2.5 / GRID_C))
    found, best_res = [], np.inf
    for x0 in seeds:
        res0 = float(np.max(np.abs(_constraints(x0, e, t))))
        best_res = min(best_res, res0)
        options = [x0] if res0 <= tol else []
        for snap in (1e-7, 0.0):
            x = _newton_polish(x0, e, t, snap)
            if x is not None:
                options.append(x)
        for x in options:
            if np.max(np.abs(_constraints(x, e, t))) <= tol:
                params = BipodalParams(*[float(v) for v in x]).canonical()
                found.append((-bipodal_rate(params.as_array()), params))
    if not found:
        raise ConvergenceError(
            f"no feasible bipodal maximizer found for (e, t) = ({e}, {t})", best_residual=best_res
        )
    s, params = _best(found)
    return EntropyPoint(e, t, s, params, conjectural=(e != 0.5))


def s_value(e: float, t: float, **kw) -> EntropyPoint:
    """Closed form on e = 1/2, bipodal search elsewhere."""
    if e == 0.5:
        return s_half_closed(min(max(t, 0.0), 0.125))
    return s_numeric(e, t, **kw)


def s_curve(e: float, ts, starts: int = DEFAULT_STARTS, continuation_starts: int = 4):
    """s(e, t) along a grid of t values, warm-starting each point from its neighbour.

    The first point gets the full multi-start budget; later points use the
    previous maximizer plus ``continuation_starts`` quasi-random starts.
    """
    out = []
    prev = None
    for t in ts:
        if e == 0.5:
            out.append(s_half_closed(t))
            continue
        if prev is None:
            pt = s_numeric(e, t, starts=starts)
        else:
            pt = s_numeric(e, t, starts=continuation_starts, warm=[prev])
        prev = pt.maximizer
        out.append(pt)
    return out


# --- feasible region ----------------------------------------------------------

MAX_PODAL = 6


def _unpack(z, k):
    w = z[:k]
    V = np.zeros((k, k))
    V[np.triu_indices(k)] = z[k:]
    return w, V + np.triu(V, 1).T


def _kpodal_edge(z, k):
    w, V = _unpack(z, k)
    return float(w @ V @ w)


def _kpodal_triangle(z, k):
    w, V = _unpack(z, k)
    WV = V * w[None, :]
    return float(w @ np.diag(WV @ WV @ V))


def _pair_weights(w, k):
    P = 2.0 * np.outer(w, w)
    P[np.diag_indices(k)] *= 0.5
    return P[np.triu_indices(k)]


def _kpodal_edge_grad(z, k):
    w, V = _unpack(z, k)
    return np.concatenate([2 * V @ w, _pair_weights(w, k)])


def _kpodal_triangle_grad(z, k):
    w, V = _unpack(z, k)
    WV = V * w[None, :]
    gw = 3 * np.diag(WV @ WV @ V)
    Q = V @ (V * w[:, None])  # Q[x, y] = sum_c V_xc w_c V_cy
    gv = 3 * _pair_weights(w, k) * Q[np.triu_indices(k)]
    return np.concatenate([gw, gv])


def _multipartite_seed(e: float, k: int):
    """Complete k-partite graphon with k-1 equal parts and one smaller part, density e."""
    # 1 - (k-1) a^2 - (1 - (k-1) a)^2 = e  ->  quadratic in a
    A = (k - 1) + (k - 1) ** 2
    B = -2 * (k - 1)
    disc = B * B - 4 * A * e
    if disc < 0:
        return None
    a = (-B + math.sqrt(disc)) / (2 * A)
    b = 1 - (k - 1) * a
    if not (0 < b <= a + 1e-12):
        return None
    return np.array([a] * (k - 1) + [b]), 1.0 - np.eye(k)


def _min_triangle(e: float, random_seeds: int = 3) -> float:
    best = np.inf
    rng = np.random.default_rng(7)
    for k in range(2, MAX_PODAL + 1):
        seeds = []
        ms = _multipartite_seed(e, k)
        if ms is not None:
            seeds.append(ms)
        for _ in range(random_seeds):
            V = rng.uniform(size=(k, k))
            seeds.append((rng.dirichlet(np.ones(k)), 0.5 * (V + V.T)))
        iu = np.triu_indices(k)
        bounds = [(1e-9, 1.0)] * k + [(0.0, 1.0)] * len(iu[0])
        cons = [
            {"type": "eq", "fun": lambda z: _kpodal_edge(z, k) - e,
             "jac": lambda z: _kpodal_edge_grad(z, k)},
            {"type": "eq", "fun": lambda z: np.sum(z[:k]) - 1.0,
             "jac": lambda z: np.concatenate([np.ones(k), np.zeros(len(z) - k)])},
        ]
        for w, V in seeds:
            z0 = np.concatenate([w, V[iu]])
            if abs(_kpodal_edge(z0, k) - e) < 1e-12:
                best = min(best, _kpodal_triangle(z0, k))
            res = minimize(_kpodal_triangle, z0, args=(k,), jac=_kpodal_triangle_grad,
                           method="SLSQP", bounds=bounds, constraints=cons,
                           options={"ftol": 1e-15, "maxiter": 500})
            z = res.x
            if abs(_kpodal_edge(z, k) - e) < 1e-10 and abs(z[:k].sum() - 1) < 1e-10 and z.min() >= -1e-12:
                best = min(best, _kpodal_triangle(z, k))
    return float(best)


def region_bounds(e: float) -> tuple[float, float]:
    """Feasible triangle densities at edge density e.

    The upper bound is e^(3/2). The lower bound is 0 for e <= 1/2; above 1/2
    it is estimated by minimizing the triangle density over step graphons with
    at most six blocks, seeded with complete multipartite graphons.
    """
    if not 0.0 <= e <= 1.0:
        raise DomainError(f"edge density must lie in [0, 1], got {e}")
    t_max = e**1.5
    if e <= 0.5:
        return 0.0, t_max
    if e == 1.0:
        return 1.0, 1.0
    return _min_triangle_cached(float(e)), t_max


_T_MIN_CACHE: dict[float, float] = {}


def _min_triangle_cached(e: float) -> float:
    if e not in _T_MIN_CACHE:
        with warnings.catch_warnings():
            # SLSQP clips trial points to the box and warns each time
            warnings.filterwarnings("ignore", "Values in x were outside bounds", RuntimeWarning)
            _T_MIN_CACHE[e] = _min_triangle(e)
    return _T_MIN_CACHE[e]


def rs_lower_bound_check(e: float, grid) -> float:
    """min over the grid of (s(e, e^3) - s(e, t)) / (e^3 - t)^(2/3).

    A positive value certifies the two-thirds power lower bound on the grid,
    with the returned value as the constant.
    """
    grid = np.sort(np.asarray(grid, dtype=float))
    e3 = e**3
    if grid.size == 0 or grid[0] < 0 or grid[-1] >= e3:
        raise RegionError(f"grid must satisfy 0 <= t < e^3 = {e3}")
    top = -rate_function_scalar(e)
    pts = s_curve(e, grid)
    ratios = [(top - p.s) / (e3 - p.t) ** (2.0 / 3.0) for p in pts]
    return float(min(ratios))


__all__ = [
    "BipodalParams",
    "EntropyPoint",
    "HALF_LOG2",
    "s_half_closed",
    "s_numeric",
    "s_value",
    "s_curve",
    "region_bounds",
    "rs_lower_bound_check",
    "bipodal_edge",
    "bipodal_triangle",
    "bipodal_rate",
]
