"""Birkhoff-James orthogonality and the one-sided-derivative trichotomy.

x is Birkhoff-James orthogonal to y when N(x + t y) >= N(x) for every scalar
t, which happens exactly when rho_minus(x, y) <= 0 <= rho_plus(x, y). Each
nonzero pair therefore falls in exactly one of three classes: strictly
positive side, strictly negative side, or orthogonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ANALYTIC_TOL
from .derivatives import DerivativePair, rho_analytic, rho_finite_difference
from .errors import PreconditionError
from .spaces import Space, as_vector, norm, norm_batch

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_GSS_ITERATIONS = 200


@dataclass(frozen=True)
class PairClass:
    """Trichotomy tag plus the derivative pair that decided it."""

    tag: str  # positive_side | negative_side | bj_orthogonal | inconclusive
    rho: DerivativePair


def bj_orthogonal(space: Space, x, y, tol: float = ANALYTIC_TOL) -> bool:
    """Analytic test: rho_minus <= tol and rho_plus >= -tol."""
    pair = rho_analytic(space, x, y)
    return pair.rho_minus <= tol and pair.rho_plus >= -tol


def bj_bruteforce_oracle(space: Space, x, y, tol: float = ANALYTIC_TOL) -> bool:
    """Independent check by direct minimization of t -> N(x + t y).

    The minimizer satisfies |t| N(y) <= 2 N(x) (else N(x + t y) > N(x)), so a
    golden-section search on [-L, L] with L = 4 N(x) / N(y) brackets it; the
    function is convex, hence unimodal. Returns whether the minimum stays
    above N(x) - tol.
    """
    return bool(bj_bruteforce_oracle_batch(space, [x], [y], tol=tol)[0])


def bj_bruteforce_oracle_batch(space: Space, X, Y, tol: float = ANALYTIC_TOL) -> np.ndarray:
    """Vectorized form of :func:`bj_bruteforce_oracle` over row-paired arrays."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    nx = norm_batch(space, X)
    ny = norm_batch(space, Y)
    if np.any(nx == 0.0) or np.any(ny == 0.0):
        raise PreconditionError("x and y must be nonzero")
    L = 4.0 * nx / ny
    lo, hi = -L, L.copy()

    def h(t):
        return norm_batch(space, X + t[:, None] * Y)

    t1 = hi - _GOLDEN * (hi - lo)
    t2 = lo + _GOLDEN * (hi - lo)
    h1, h2 = h(t1), h(t2)
    h_best = np.minimum(h1, h2)
    for _ in range(_GSS_ITERATIONS):
        move_right = h1 > h2
        lo = np.where(move_right, t1, lo)
        hi = np.where(move_right, hi, t2)
        t1 = hi - _GOLDEN * (hi - lo)
        t2 = lo + _GOLDEN * (hi - lo)
        h1, h2 = h(t1), h(t2)
        h_best = np.minimum(h_best, np.minimum(h1, h2))
    return h_best >= nx - tol


def classify_pair(space: Space, x, y, tol: float = ANALYTIC_TOL,
                  method: str = "analytic") -> PairClass:
    """Exactly one of positive_side / negative_side / bj_orthogonal.

    The ordering rho_minus <= rho_plus makes the two strict sides mutually
    exclusive. With the finite-difference backend a sign decision landing
    inside the backend's error band is reported as inconclusive instead.
    """
    xv = as_vector(space, x)
    yv = as_vector(space, y)
    if norm(space, xv) == 0.0 or norm(space, yv) == 0.0:
        raise PreconditionError("x and y must be nonzero")
    if method == "analytic":
        pair = rho_analytic(space, xv, yv)
        band = tol
    elif method == "finite_difference":
        pair = rho_finite_difference(space, xv, yv)
        band = tol + pair.error_bound
    else:
        raise PreconditionError(f"unknown method {method!r}")
    if pair.rho_minus > band:
        return PairClass("positive_side", pair)
    if pair.rho_plus < -band:
        return PairClass("negative_side", pair)
    if pair.rho_minus <= tol and pair.rho_plus >= -tol:
        return PairClass("bj_orthogonal", pair)
    # Only reachable when the backend's error band straddles a sign decision.
    return PairClass("inconclusive", pair)
