"""Certified local ball-covering decisions.

For nonzero x, y the question is whether some open ball centered at lam * x
contains y while excluding the origin (radius at most |lam| N(x)). Writing

    g(lam) = N(lam x - y) - |lam| N(x),

a ball at lam exists exactly when g(lam) < 0. Over lam > 0 the function g is
convex with g(0) = N(y) > 0 and g(lam) -> -rho_minus(x, y) / N(x), so it is
nonincreasing and the decision reduces to the sign of rho_minus(x, y):
doubling probes either find a strictly negative gap (a Witness with an
explicit margin) or the derivative certifies absence. The lam < 0 case is
the mirror image through -x and the sign of rho_plus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ANALYTIC_TOL
from .derivatives import rho_analytic
from .errors import InternalInconsistencyError, PreconditionError
from .spaces import Space, as_vector, norm, norm_batch

_MAX_DOUBLINGS = 60


@dataclass(frozen=True)
class Witness:
    """A certified ball B(lam * x, radius) containing y and excluding 0.

    Invariants: N(lam x - y) + margin <= radius <= |lam| N(x), margin > 0.
    """

    lam: float
    radius: float
    margin: float


@dataclass(frozen=True)
class WitnessAbsence:
    """Certified nonexistence on one side, with the deciding derivative.

    ``rho_value`` is rho_minus(x, y) for side "+" and rho_plus(x, y) for
    side "-"; ``gap_limit`` is the stabilized limit of the gap profile.
    """

    side: str
    rho_value: float
    gap_limit: float


@dataclass(frozen=True)
class GapProfile:
    samples: tuple[tuple[float, float], ...]  # (lam, g(lam)) along doubling probes
    limit_estimate: float


def _nonzero_pair(space: Space, x, y):
    xv = as_vector(space, x)
    yv = as_vector(space, y)
    nx = norm(space, xv)
    ny = norm(space, yv)
    if nx == 0.0:
        raise PreconditionError("x must be nonzero")
    if ny == 0.0:
        raise PreconditionError("y must be nonzero")
    return xv, yv, nx, ny


def gap(space: Space, x, y, lam: float) -> float:
    """g(lam) = N(lam x - y) - |lam| N(x); negative values certify a ball."""
    xv = as_vector(space, x)
    yv = as_vector(space, y)
    nx = norm(space, xv)
    if nx == 0.0:
        raise PreconditionError("x must be nonzero")
    return norm(space, lam * xv - yv) - abs(lam) * nx


def gap_profile(space: Space, x, y, rel_tol: float = 1e-7,
                max_doublings: int = _MAX_DOUBLINGS) -> GapProfile:
    """Sample g along doubling lam > 0 until successive changes stabilize."""
    xv, yv, nx, ny = _nonzero_pair(space, x, y)
    lam = float(max(1, math.ceil(ny / nx)))
    stop = rel_tol * max(1.0, ny)
    samples = []
    prev = None
    for _ in range(max_doublings + 1):
        g = norm(space, lam * xv - yv) - lam * nx
        samples.append((lam, g))
        if prev is not None and abs(g - prev) < stop:
            break
        prev = g
        lam *= 2.0
    return GapProfile(samples=tuple(samples), limit_estimate=samples[-1][1])


def positive_witness(space: Space, x, y, tol: float = ANALYTIC_TOL):
    """Witness for a ball at lam > 0, or certified absence via rho_minus.

    Searches lam over ceil(N(y)/N(x)) * 2^k. Soundness of a returned witness
    is re-checked numerically; completeness of the search follows from the
    monotone convergence g(lam) -> -rho_minus(x, y) / N(x).
    """
    xv, yv, nx, ny = _nonzero_pair(space, x, y)
    pair = rho_analytic(space, xv, yv)
    if pair.rho_minus <= tol:
        profile = gap_profile(space, xv, yv)
        return WitnessAbsence("+", pair.rho_minus, profile.limit_estimate)
    lam = float(max(1, math.ceil(ny / nx)))
    for _ in range(_MAX_DOUBLINGS + 1):
        dist = norm(space, lam * xv - yv)
        if dist - lam * nx < -tol:
            w = Witness(lam=lam, radius=(dist + lam * nx) / 2.0,
                        margin=(lam * nx - dist) / 2.0)
            check_witness(space, xv, yv, w)
            return w
        lam *= 2.0
    raise InternalInconsistencyError(
        f"rho_minus = {pair.rho_minus} > 0 but no negative gap found up to "
        f"lam = {lam / 2.0}; tolerance conflict"
    )


def negative_witness(space: Space, x, y, tol: float = ANALYTIC_TOL):
    """Witness for a ball at lam < 0, or certified absence via rho_plus.

    Equivalent to the positive problem at -x, since
    rho_minus(-x, y) = -rho_plus(x, y).
    """
    xv = as_vector(space, x)
    result = positive_witness(space, -xv, y, tol=tol)
    if isinstance(result, Witness):
        w = Witness(lam=-result.lam, radius=result.radius, margin=result.margin)
        check_witness(space, xv, as_vector(space, y), w)
        return w
    return WitnessAbsence("-", -result.rho_value, result.gap_limit)


def check_witness(space: Space, x, y, w: Witness, slack: float = 1e-12) -> None:
    """Re-verify the Witness invariants by direct evaluation."""
    xv = as_vector(space, x)
    yv = as_vector(space, y)
    dist = norm(space, w.lam * xv - yv)
    bound = abs(w.lam) * norm(space, xv)
    scale = max(1.0, bound)
    ok = (w.margin > 0.0
          and dist + w.margin <= w.radius + slack * scale
          and w.radius <= bound + slack * scale)
    if not ok:
        raise InternalInconsistencyError(
            f"witness invariants violated: dist={dist}, radius={w.radius}, "
            f"margin={w.margin}, |lam| N(x)={bound}"
        )


def witness_bruteforce_oracle(space: Space, x, y, side: str = "+",
                              tol: float = ANALYTIC_TOL) -> bool:
    """Independent grid decision: is g < 0 somewhere on the given side?

    Scans the dense logarithmic grid lam in +/- {1e-6 * 1.01^j} up to
    1e9 * N(y) / N(x) and reports whether min g < -10 tol. Used as the
    equivalence-testing oracle; near-threshold inputs are excluded by the
    callers' tolerance filters.
    """
    xv, yv, nx, ny = _nonzero_pair(space, x, y)
    if side not in ("+", "-"):
        raise PreconditionError(f"side must be '+' or '-', got {side!r}")
    top = 1e9 * ny / nx
    count = max(2, int(math.ceil(math.log(top / 1e-6) / math.log(1.01))) + 1)
    lams = 1e-6 * 1.01 ** np.arange(count)
    if side == "-":
        lams = -lams
    gaps = norm_batch(space, lams[:, None] * xv[None, :] - yv[None, :]) - np.abs(lams) * nx
    return bool(gaps.min() < -10.0 * tol)
