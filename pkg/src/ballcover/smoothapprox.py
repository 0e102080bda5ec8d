"""Witness transfer along sequences of smooth points.

If a ball centered on the ray through x contains y (and excludes the
origin), and x_n -> x with every x_n smooth, then some x_{n0} already
carries such a ball: rho_minus(x_{n0}, y) > 0 for some n0. This module
ships concrete smoothing sequences for the supported families, notably the
l-infinity sequence u_n = (1, 1 - 1/n, ..., 1 - 1/n) converging to the
all-ones corner, and the scan that finds n0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import ANALYTIC_TOL
from .derivatives import is_smooth, rho_analytic
from .errors import InternalInconsistencyError, PreconditionError, TransferExhausted
from .spaces import INF, Space, as_vector, norm
from .witness import Witness, positive_witness

DEFAULT_N_MAX = 10_000


@dataclass(frozen=True)
class SmoothingSequence:
    """Rule n -> x_n; every generated point must be smooth in the space."""

    family: str  # linf_shrink | radial_lp_blend | custom_list
    generate: Callable[[int], np.ndarray]


def linf_shrink_sequence(d: int, n: int) -> np.ndarray:
    """u_n in l-infinity of dimension d: 1 in the first coordinate and
    1 - 1/n elsewhere. Each u_n has a unique maximal coordinate, hence is
    smooth; the distance to the all-ones vector is exactly 1/n."""
    if d < 2:
        raise PreconditionError("need dimension >= 2")
    if n < 1:
        raise PreconditionError("sequence index starts at 1")
    u = np.full(d, 1.0 - 1.0 / n)
    u[0] = 1.0
    return u


def linf_shrink(d: int) -> SmoothingSequence:
    return SmoothingSequence("linf_shrink", lambda n: linf_shrink_sequence(d, n))


def radial_lp_blend(space: Space, x) -> SmoothingSequence:
    """Blend x toward a family-specific smooth anchor: x_n = x + (w - x)/n.

    Smooth lp spaces need no motion (w = x). For l-infinity the anchor is
    the signed basis vector of the first maximal coordinate, which makes the
    maximum unique for every n; for l1 it is the full-support sign vector,
    which clears every zero coordinate.
    """
    xv = as_vector(space, x)
    if norm(space, xv) == 0.0:
        raise PreconditionError("x must be nonzero")
    spec = space.spec
    if spec.kind == "lp" and spec.p == INF:
        j = int(np.argmax(np.abs(xv)))
        anchor = np.zeros(space.dim)
        anchor[j] = np.sign(xv[j]) if xv[j] != 0.0 else 1.0
    elif spec.kind == "lp" and spec.p == 1.0:
        anchor = np.where(xv != 0.0, np.sign(xv), 1.0)
    elif spec.kind == "lp":
        anchor = xv
    else:
        raise PreconditionError(
            "no generic smoothing anchor for polyhedral norms; use a custom list")
    return SmoothingSequence("radial_lp_blend",
                             lambda n: xv + (anchor - xv) / n)


def custom_list(points) -> SmoothingSequence:
    pts = [np.asarray(p, dtype=float) for p in points]
    if not pts:
        raise PreconditionError("custom list must be nonempty")

    def generate(n: int) -> np.ndarray:
        if not (1 <= n <= len(pts)):
            raise IndexError(n)
        return pts[n - 1]

    return SmoothingSequence("custom_list", generate)


def transfer_witness(space: Space, x, y, seq: SmoothingSequence,
                     n_max: int = DEFAULT_N_MAX,
                     tol: float = ANALYTIC_TOL) -> tuple[int, Witness]:
    """First n0 with rho_minus(x_{n0}, y) > tol, plus the resulting witness.

    Requires the hypothesis to hold at x itself (positive_witness succeeds).
    Exhausting n_max raises TransferExhausted with the best derivative seen,
    since for a genuine smoothing sequence the scan must terminate.
    """
    xv = as_vector(space, x)
    base = positive_witness(space, xv, y, tol=tol)
    if not isinstance(base, Witness):
        raise PreconditionError(
            f"hypothesis violated: no positive-side ball at x "
            f"(rho_minus = {base.rho_value})")
    best = -np.inf
    for n in range(1, n_max + 1):
        try:
            xn = seq.generate(n)
        except IndexError:
            break
        verdict = is_smooth(space, xn)
        if not verdict.smooth:
            raise InternalInconsistencyError(
                f"smoothing sequence produced a non-smooth point at n = {n} "
                f"(margin {verdict.margin})")
        rho = rho_analytic(space, xn, y).rho_minus
        best = max(best, rho)
        if rho > tol:
            w = positive_witness(space, xn, y, tol=tol)
            if not isinstance(w, Witness):
                raise InternalInconsistencyError(
                    "positive derivative at x_n but witness search failed")
            return n, w
    raise TransferExhausted(
        f"no transferable witness up to n_max = {n_max} "
        f"(best rho_minus = {best}); widen the scan or loosen tol",
        n_max=n_max, best_rho=best)
