"""Finite-dimensional real normed spaces.

Two fully computable families are supported:

* ``lp`` spaces for 1 <= p <= infinity (infinity is the token ``INF``, kept
  out of float arithmetic on purpose), and
* ``polyhedral`` max-norms ``x -> max_i |<f_i, x>|`` for a finite spanning
  family of functionals, whose unit ball is a symmetric polytope.

Besides norm and dual-pairing evaluation the module provides certified
norm-equivalence constants against the Euclidean norm and delta-nets of the
unit sphere, both of which back the coverage certificates downstream.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputFormatError, PreconditionError

# Distinguished token for p = infinity; not a float by design.
INF = "inf"

# Nets above this dimension must be requested explicitly (size is exponential).
DEFAULT_NET_DIM_CAP = 6
DEFAULT_NET_MAX_POINTS = 25_000_000


@dataclass(frozen=True)
class NormSpec:
    """Descriptor of a norm family: ``lp`` with exponent p, or ``polyhedral``
    with a spanning list of functionals (one per row)."""

    kind: str
    p: float | str | None = None
    functionals: np.ndarray | None = None


@dataclass(frozen=True)
class Space:
    dim: int
    spec: NormSpec


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problems: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class SphereNet:
    """Finite set of unit vectors such that every unit vector of the space is
    within ``resolution`` of some net point, in the space's own norm."""

    points: np.ndarray  # shape (N, dim), each row of unit norm
    resolution: float


def lp_space(dim: int, p) -> Space:
    """Build an lp space; ``p`` may be a number in [1, inf), math.inf, or "inf"."""
    if p == INF or (isinstance(p, float) and math.isinf(p)):
        p = INF
    else:
        p = float(p)
    return Space(dim=int(dim), spec=NormSpec(kind="lp", p=p))


def polyhedral_space(functionals) -> Space:
    """Build a polyhedral max-norm space from a (m, dim) functional array."""
    F = np.atleast_2d(np.asarray(functionals, dtype=float))
    F = np.array(F, copy=True)
    F.setflags(write=False)
    return Space(dim=F.shape[1], spec=NormSpec(kind="polyhedral", functionals=F))


def validate_space(space: Space) -> ValidationReport:
    """Check the descriptor invariants; polyhedral span is checked by rank."""
    problems = []
    if space.dim < 1:
        problems.append(f"dimension must be >= 1, got {space.dim}")
    spec = space.spec
    if spec.kind == "lp":
        if spec.p != INF:
            if not isinstance(spec.p, (int, float)) or not math.isfinite(spec.p):
                problems.append(f"p must be a finite number or {INF!r}, got {spec.p!r}")
            elif spec.p < 1:
                problems.append(f"p must satisfy p >= 1, got {spec.p}")
    elif spec.kind == "polyhedral":
        F = spec.functionals
        if F is None or F.size == 0:
            problems.append("polyhedral norm needs a nonempty functional list")
        else:
            if F.shape[1] != space.dim:
                problems.append(
                    f"functionals have length {F.shape[1]}, space dimension is {space.dim}"
                )
            if not np.all(np.isfinite(F)):
                problems.append("functionals contain non-finite entries")
            elif np.linalg.matrix_rank(F) < space.dim:
                problems.append(
                    "functionals do not span the space (seminorm only): "
                    f"rank {np.linalg.matrix_rank(F)} < {space.dim}"
                )
    else:
        problems.append(f"unknown norm kind {spec.kind!r}")
    return ValidationReport(ok=not problems, problems=problems)


def require_valid(space: Space) -> None:
    report = validate_space(space)
    if not report.ok:
        raise PreconditionError("invalid space: " + "; ".join(report.problems))


def as_vector(space: Space, x) -> np.ndarray:
    """Coerce to a 1-D float array matching the space dimension."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.shape[0] != space.dim:
        raise PreconditionError(
            f"vector of length {v.shape} does not match space dimension {space.dim}"
        )
    if not np.all(np.isfinite(v)):
        raise PreconditionError("vector has non-finite entries")
    return v


def norm(space: Space, x) -> float:
    """Evaluate the space's norm at x."""
    v = as_vector(space, x)
    return float(_norm_rows(space, v[None, :])[0])


def norm_batch(space: Space, X: np.ndarray) -> np.ndarray:
    """Row-wise norms of an (N, dim) array. No per-row validation."""
    return _norm_rows(space, np.asarray(X, dtype=float))


def _norm_rows(space: Space, X: np.ndarray) -> np.ndarray:
    spec = space.spec
    if spec.kind == "lp":
        if spec.p == INF:
            return np.abs(X).max(axis=1)
        p = spec.p
        if p == 1.0:
            return np.abs(X).sum(axis=1)
        if p == 2.0:
            return np.sqrt(np.einsum("ij,ij->i", X, X))
        return (np.abs(X) ** p).sum(axis=1) ** (1.0 / p)
    if spec.kind == "polyhedral":
        return np.abs(X @ spec.functionals.T).max(axis=1)
    raise PreconditionError(f"unknown norm kind {spec.kind!r}")


def dual_pair(f, x) -> float:
    """Standard pairing <f, x> = sum f_i x_i."""
    fv = np.asarray(f, dtype=float)
    xv = np.asarray(x, dtype=float)
    if fv.shape != xv.shape:
        raise PreconditionError(f"dimension mismatch: {fv.shape} vs {xv.shape}")
    return float(fv @ xv)


def dual_exponent(p) -> float | str:
    if p == INF:
        return 1.0
    if p == 1.0:
        return INF
    return p / (p - 1.0)


def dual_norm(space: Space, f) -> float:
    """Norm of a functional in the dual space.

    lp duals are the conjugate-exponent lq norms; for polyhedral norms the
    value is obtained by maximizing <f, x> over the primal unit ball, a small
    linear program in the ball's facet description.
    """
    fv = as_vector(space, f)
    spec = space.spec
    if spec.kind == "lp":
        q = dual_exponent(spec.p)
        if q == INF:
            return float(np.abs(fv).max())
        if q == 1.0:
            return float(np.abs(fv).sum())
        return float((np.abs(fv) ** q).sum() ** (1.0 / q))
    from scipy.optimize import linprog

    F = spec.functionals
    A = np.vstack([F, -F])
    res = linprog(-fv, A_ub=A, b_ub=np.ones(A.shape[0]), bounds=[(None, None)] * space.dim,
                  method="highs")
    if not res.success:
        raise PreconditionError(f"dual norm LP failed: {res.message}")
    return float(-res.fun)


def unit(space: Space, x) -> np.ndarray:
    """x normalized to unit norm in the space."""
    v = as_vector(space, x)
    n = norm(space, v)
    if n == 0.0:
        raise PreconditionError("cannot normalize the zero vector")
    return v / n


def equivalence_constants(space: Space) -> tuple[float, float]:
    """Certified constants with c1 * |x|_2 <= |x| <= c2 * |x|_2 for all x.

    lp uses the classical dimension constants. For polyhedral norms,
    c2 = max_i |f_i|_2 and c1 = sigma_min(F) / sqrt(m) with F the stacked
    functionals: max_i |<f_i, x>| >= |F x|_2 / sqrt(m) >= sigma_min |x|_2 / sqrt(m).
    """
    require_valid(space)
    n = space.dim
    spec = space.spec
    if spec.kind == "lp":
        inv_p = 0.0 if spec.p == INF else 1.0 / spec.p
        if inv_p >= 0.5:  # p <= 2
            return 1.0, float(n ** (inv_p - 0.5))
        return float(n ** (inv_p - 0.5)), 1.0
    F = spec.functionals
    m = F.shape[0]
    c2 = float(np.linalg.norm(F, axis=1).max())
    sigma_min = float(np.linalg.svd(F, compute_uv=False)[-1])
    return sigma_min / math.sqrt(m), c2


def unit_sphere_net(space: Space, delta: float, dim_cap: int = DEFAULT_NET_DIM_CAP,
                    max_points: int = DEFAULT_NET_MAX_POINTS) -> SphereNet:
    """delta-net of the unit sphere, in the space's own norm.

    Dimension 2 uses a uniform angular grid with chord spacing
    delta * c1 / (4 c2), conservative under normalization. Dimensions 3 and
    up grid the faces of the unit cube with per-axis spacing
    h = delta * b / beta, where b lower-bounds the space norm on the cube
    surface and beta bounds it on the per-face error box; normalizing the
    grid onto the sphere then preserves the delta guarantee because
    |x/|x| - y/|y|| <= 2 |x - y| / |x|.
    """
    require_valid(space)
    if not (delta > 0):
        raise PreconditionError(f"delta must be positive, got {delta}")
    if space.dim > dim_cap:
        raise PreconditionError(
            f"net dimension {space.dim} above cap {dim_cap}; raise dim_cap to override"
        )
    # Any two unit vectors are within 2 of each other, so one point suffices.
    if delta >= 2.0:
        e1 = np.zeros(space.dim)
        e1[0] = 1.0
        pt = unit(space, e1)
        return SphereNet(points=_frozen(pt[None, :]), resolution=float(delta))
    if space.dim == 1:
        pts = np.array([[1.0], [-1.0]]) / norm(space, np.array([1.0]))
        return SphereNet(points=_frozen(pts), resolution=float(delta))

    c1, c2 = equivalence_constants(space)
    if space.dim == 2:
        chord = delta * c1 / (4.0 * c2)
        m = int(math.ceil(math.pi / chord))
        if m > max_points:
            raise PreconditionError(f"net of {m} points exceeds cap {max_points}")
        theta = 2.0 * math.pi * np.arange(m) / m
        dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    else:
        spec = space.spec
        if spec.kind == "lp":
            b_low = 1.0  # |v|_p >= |v|_inf = 1 on the cube surface
            if spec.p == INF:
                beta = 1.0
            else:
                beta = float((space.dim - 1) ** (1.0 / spec.p))
        else:
            b_low = c1  # |v| >= c1 |v|_2 >= c1 |v|_inf
            beta = c2 * math.sqrt(space.dim - 1)
        h = delta * b_low / beta
        m = int(math.ceil(2.0 / h))
        n_est = 2 * space.dim * (m + 1) ** (space.dim - 1)
        if n_est > max_points:
            raise PreconditionError(
                f"net of about {n_est} points exceeds cap {max_points}; "
                "increase delta or max_points"
            )
        axis = np.linspace(-1.0, 1.0, m + 1)
        faces = []
        for a in range(space.dim):
            grids = np.meshgrid(*([axis] * (space.dim - 1)), indexing="ij")
            flat = np.stack([g.ravel() for g in grids], axis=1)
            for sign in (1.0, -1.0):
                face = np.empty((flat.shape[0], space.dim))
                face[:, a] = sign
                cols = [c for c in range(space.dim) if c != a]
                face[:, cols] = flat
                faces.append(face)
        dirs = np.concatenate(faces, axis=0)
    pts = dirs / _norm_rows(space, dirs)[:, None]
    return SphereNet(points=_frozen(pts), resolution=float(delta))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


# --- space description files ------------------------------------------------

def space_from_dict(data: dict) -> Space:
    try:
        dim = int(data["dim"])
        nd = data["norm"]
        kind = nd["kind"]
        if kind == "lp":
            space = lp_space(dim, nd["p"])
        elif kind == "polyhedral":
            space = polyhedral_space(nd["functionals"])
            if space.dim != dim:
                raise InputFormatError(
                    f"functional length {space.dim} disagrees with dim {dim}"
                )
        else:
            raise InputFormatError(f"unknown norm kind {kind!r}")
    except InputFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed space description: {exc}") from exc
    report = validate_space(space)
    if not report.ok:
        raise PreconditionError("invalid space: " + "; ".join(report.problems))
    return space


def space_to_dict(space: Space) -> dict:
    spec = space.spec
    if spec.kind == "lp":
        p = spec.p if spec.p == INF else float(spec.p)
        return {"dim": space.dim, "norm": {"kind": "lp", "p": p}}
    return {
        "dim": space.dim,
        "norm": {"kind": "polyhedral", "functionals": spec.functionals.tolist()},
    }


def load_space(path) -> Space:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputFormatError(f"cannot read space file {path}: {exc}") from exc
    return space_from_dict(data)
