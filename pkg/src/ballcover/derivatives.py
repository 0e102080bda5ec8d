"""One-sided norm derivatives, duality sets, smoothness classification.

For a norm N and nonzero x, the one-sided derivatives in direction y are

    rho_plus(x, y)  = lim_{t -> 0+} N(x) (N(x + t y) - N(x)) / t
    rho_minus(x, y) = lim_{t -> 0-} N(x) (N(x + t y) - N(x)) / t

Convexity of the norm makes both limits exist with rho_minus <= rho_plus,
and they equal N(x) times the support extremes of y over the duality set
J(x) = {f in the dual unit sphere : f(x) = N(x)}. Every supported family has
a closed form (the analytic backend); an independent finite-difference
estimator with monotone bracketing serves as the cross-check oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .config import ANALYTIC_TOL
from .errors import InternalInconsistencyError, PreconditionError
from .spaces import INF, Space, as_vector, norm

# Relative tolerance for deciding which coordinates/functionals attain the max.
ACTIVE_RTOL = 1e-12


@dataclass(frozen=True)
class DerivativePair:
    """The pair (rho_minus, rho_plus) with provenance and an error bound.

    ``error_bound`` is 0 for the analytic backend; for finite differences it
    bounds the distance of each entry from the true one-sided limit.
    """

    rho_minus: float
    rho_plus: float
    method: str  # "analytic" | "finite_difference"
    error_bound: float = 0.0


@dataclass(frozen=True)
class DualitySet:
    """Extreme points of J(x); ``kind`` is "singleton" or "polytope"."""

    kind: str
    extreme_points: np.ndarray  # shape (k, dim)


@dataclass(frozen=True)
class SmoothnessVerdict:
    smooth: bool
    margin: float  # max over basis directions of rho_plus - rho_minus

    def __bool__(self) -> bool:
        return self.smooth


def _require_nonzero(space: Space, x, name: str = "x") -> np.ndarray:
    v = as_vector(space, x)
    if norm(space, v) == 0.0:
        raise PreconditionError(f"{name} must be nonzero")
    return v


def rho_analytic(space: Space, x, y) -> DerivativePair:
    """Exact one-sided derivatives from the family's closed form."""
    xv = _require_nonzero(space, x)
    yv = as_vector(space, y)
    spec = space.spec
    if spec.kind == "lp":
        if spec.p == INF:
            nx = float(np.abs(xv).max())
            active = np.abs(xv) >= nx * (1.0 - ACTIVE_RTOL)
            vals = np.sign(xv[active]) * yv[active]
            return DerivativePair(nx * float(vals.min()), nx * float(vals.max()), "analytic")
        p = spec.p
        if p == 1.0:
            nx = float(np.abs(xv).sum())
            support = xv != 0.0
            base = float(np.sign(xv[support]) @ yv[support])
            off = float(np.abs(yv[~support]).sum())
            return DerivativePair(nx * (base - off), nx * (base + off), "analytic")
        nx = norm(space, xv)
        val = float(nx ** (2.0 - p) * (np.sign(xv) * np.abs(xv) ** (p - 1.0)) @ yv)
        return DerivativePair(val, val, "analytic")
    F = spec.functionals
    fx = F @ xv
    nx = float(np.abs(fx).max())
    active = np.abs(fx) >= nx * (1.0 - ACTIVE_RTOL)
    vals = np.sign(fx[active]) * (F[active] @ yv)
    return DerivativePair(nx * float(vals.min()), nx * float(vals.max()), "analytic")


def rho_finite_difference(space: Space, x, y, rel_tol: float = 1e-7,
                          kmax: int = 48, return_probes: bool = False):
    """Estimate the derivative pair from difference quotients.

    Evaluates q(t) = N(x) (N(x + t y) - N(x)) / t on t_k = t0 / 2^k. By
    convexity q is nondecreasing in t, so the q(t_k) decrease to rho_plus and
    the q(-t_k) increase to rho_minus; each side stops once the successive
    change drops below rel_tol * max(1, N(x) N(y)). The error bound adds a
    floating-cancellation allowance 1e-8 N(x) N(y) / t_final.
    """
    xv = _require_nonzero(space, x)
    yv = as_vector(space, y)
    nx = norm(space, xv)
    ny = norm(space, yv)
    t0 = nx / max(1.0, ny)
    stop = rel_tol * max(1.0, nx * ny)

    def side(sign: float):
        probes = []
        prev = None
        change = np.inf
        t = t0
        for _ in range(kmax + 1):
            q = sign * nx * (norm(space, xv + (sign * t) * yv) - nx) / t
            probes.append((sign * t, q))
            if prev is not None:
                change = abs(q - prev)
                if change < stop:
                    break
            prev = q
            t *= 0.5
        if not np.isfinite(change):
            change = 0.0
        err = change + 1e-8 * nx * ny / t
        return q, err, probes

    q_plus, err_plus, probes_plus = side(1.0)
    q_minus, err_minus, probes_minus = side(-1.0)
    pair = DerivativePair(q_minus, q_plus, "finite_difference",
                          error_bound=max(err_plus, err_minus))
    if return_probes:
        return pair, {"plus": probes_plus, "minus": probes_minus}
    return pair


def duality_set(space: Space, x) -> DualitySet:
    """Extreme points of J(x) = {f in the dual sphere : f(x) = N(x)}."""
    xv = _require_nonzero(space, x)
    spec = space.spec
    if spec.kind == "lp":
        if spec.p == INF:
            nx = float(np.abs(xv).max())
            active = np.flatnonzero(np.abs(xv) >= nx * (1.0 - ACTIVE_RTOL))
            pts = np.zeros((active.size, space.dim))
            pts[np.arange(active.size), active] = np.sign(xv[active])
            return _as_duality_set(pts)
        p = spec.p
        if p == 1.0:
            support = xv != 0.0
            base = np.sign(xv)
            off = np.flatnonzero(~support)
            if off.size == 0:
                return _as_duality_set(base[None, :])
            pts = []
            for signs in itertools.product((1.0, -1.0), repeat=off.size):
                f = base.copy()
                f[off] = signs
                pts.append(f)
            return _as_duality_set(np.array(pts))
        nx = norm(space, xv)
        f = np.sign(xv) * np.abs(xv) ** (p - 1.0) / nx ** (p - 1.0)
        return _as_duality_set(f[None, :])
    F = spec.functionals
    fx = F @ xv
    nx = float(np.abs(fx).max())
    active = np.flatnonzero(np.abs(fx) >= nx * (1.0 - ACTIVE_RTOL))
    # Active functionals have dual norm exactly 1: they attain the norm at
    # x/N(x) and never exceed it, so no renormalization is needed.
    cand = np.sign(fx[active])[:, None] * F[active]
    cand = _dedupe_rows(cand, tol=1e-9)
    if cand.shape[0] > 1:
        cand = _extreme_rows(cand)
    return _as_duality_set(cand)


def _as_duality_set(pts: np.ndarray) -> DualitySet:
    pts = np.ascontiguousarray(pts)
    pts.setflags(write=False)
    return DualitySet("singleton" if pts.shape[0] == 1 else "polytope", pts)


def _dedupe_rows(rows: np.ndarray, tol: float) -> np.ndarray:
    out: list[np.ndarray] = []
    for r in rows:
        if not any(np.max(np.abs(r - q)) <= tol for q in out):
            out.append(r)
    return np.array(out)


def _extreme_rows(rows: np.ndarray) -> np.ndarray:
    """Drop rows expressible as convex combinations of the others."""
    from scipy.optimize import linprog

    keep = np.ones(rows.shape[0], dtype=bool)
    for i in range(rows.shape[0]):
        others = rows[keep & (np.arange(rows.shape[0]) != i)]
        if others.shape[0] == 0:
            continue
        A_eq = np.vstack([others.T, np.ones(others.shape[0])])
        b_eq = np.concatenate([rows[i], [1.0]])
        res = linprog(np.zeros(others.shape[0]), A_eq=A_eq, b_eq=b_eq,
                      bounds=[(0.0, None)] * others.shape[0], method="highs")
        if res.success:
            keep[i] = False
    if not keep.any():
        raise InternalInconsistencyError("extreme-point filter removed every candidate")
    return rows[keep]


def is_smooth(space: Space, x, tol: float = ANALYTIC_TOL) -> SmoothnessVerdict:
    """Whether J(x) is a singleton, together with a quantitative margin.

    The margin is the maximum over the coordinate basis of
    rho_plus(x, e_j) - rho_minus(x, e_j); it vanishes exactly when J(x) has
    zero width in every coordinate direction, i.e. is a single point.
    """
    xv = _require_nonzero(space, x)
    gap = 0.0
    e = np.zeros(space.dim)
    for j in range(space.dim):
        e[:] = 0.0
        e[j] = 1.0
        pair = rho_analytic(space, xv, e)
        gap = max(gap, pair.rho_plus - pair.rho_minus)
    smooth = duality_set(space, xv).kind == "singleton"
    return SmoothnessVerdict(smooth=smooth, margin=gap)
