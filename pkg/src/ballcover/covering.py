"""Ball coverings with coverage certificates.

A ball covering of a target set is a finite family of open balls, none
containing the origin, whose union contains the target. Constructions here
assign every target point to a functional that is strictly positive on it,
grow a ball on the ray through that functional's norming point (the merged
form of the per-point witness search), and certify the result:

* finite targets are checked point by point;
* the unit sphere is checked on a delta-net, full coverage following from
  the 1-Lipschitz transfer whenever every net point has slack > delta.

The module also builds the classical symmetric 2n-ball and smooth (n+1)-ball
coverings, and the adversary that exhibits an uncovered unit vector for any
candidate family that is too small.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .config import ANALYTIC_TOL, CERT_SLACK, NULLSPACE_SV_TOL
from .derivatives import duality_set, rho_analytic
from .errors import (CertificateFailure, InputFormatError, InternalInconsistencyError,
                     NotExposedError, PreconditionError, SeparationHypothesisError)
from .spaces import (INF, Space, SphereNet, as_vector, dual_exponent, dual_norm, norm,
                     norm_batch, unit_sphere_net)

_CHUNK = 1 << 18
_MAX_DOUBLINGS = 60


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float


@dataclass(frozen=True)
class TargetSet:
    """Either a finite list of nonzero points or the unit sphere via a net."""

    kind: str  # "finite_points" | "unit_sphere"
    points: np.ndarray | None = None
    net: SphereNet | None = None


@dataclass(frozen=True)
class CoverageCertificate:
    """Net-slack certificate: with a net of resolution delta, slack > delta at
    every net point covers the whole continuous target."""

    min_slack: float
    net_resolution: float
    full_cover: bool
    origin_excluded: bool = True


@dataclass(frozen=True)
class Covering:
    balls: tuple[Ball, ...]
    certificate: CoverageCertificate | None = None


@dataclass(frozen=True)
class UncoveredPoint:
    """A unit vector outside (or on the boundary of) every candidate ball."""

    point: np.ndarray
    per_ball_slack: np.ndarray  # radius - distance per ball, all <= 0


def finite_target(space: Space, points) -> TargetSet:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] == 0 or pts.shape[1] != space.dim:
        raise PreconditionError("finite target needs a nonempty (N, dim) point list")
    if norm_batch(space, pts).min() <= 0.0:
        raise PreconditionError("finite target must stay away from the origin")
    return TargetSet(kind="finite_points", points=pts)


def sphere_target(space: Space, delta: float, **net_kwargs) -> TargetSet:
    return TargetSet(kind="unit_sphere", net=unit_sphere_net(space, delta, **net_kwargs))


def _target_points(target: TargetSet) -> tuple[np.ndarray, float]:
    if target.kind == "finite_points":
        return target.points, 0.0
    if target.kind == "unit_sphere":
        return target.net.points, target.net.resolution
    raise PreconditionError(f"unknown target kind {target.kind!r}")


# --- Proposition-style merging of collinear balls ----------------------------

def merge_collinear(space: Space, balls, direction, lambda_target: float) -> Ball:
    """Replace balls centered at lam_i * x (lam_i > 0, r_i <= lam_i N(x)) by a
    single ball at lambda_target * x containing their union.

    The radius max_i (r_i + (lambda_target - lam_i) N(x)) both contains every
    input ball (triangle inequality) and stays at most lambda_target * N(x).
    """
    x = as_vector(space, direction)
    nx = norm(space, x)
    if nx == 0.0:
        raise PreconditionError("direction must be nonzero")
    if not balls:
        raise PreconditionError("need at least one ball to merge")
    lams = []
    for b in balls:
        c = as_vector(space, b.center)
        lam = float(c @ x) / float(x @ x)
        if lam <= 0.0 or norm(space, c - lam * x) > 1e-9 * max(1.0, abs(lam) * nx):
            raise PreconditionError(
                "ball centers must be positive multiples of the common direction"
            )
        if not (0.0 < b.radius <= lam * nx * (1.0 + 1e-12)):
            raise PreconditionError(
                f"ball radius {b.radius} outside (0, lam N(x)] = (0, {lam * nx}]"
            )
        lams.append(lam)
    if lambda_target < max(lams) * (1.0 - 1e-12):
        raise PreconditionError(
            f"lambda_target {lambda_target} below max lambda {max(lams)}"
        )
    radius = max(b.radius + (lambda_target - lam) * nx for b, lam in zip(balls, lams))
    return Ball(center=lambda_target * x, radius=float(radius))


# --- coverage verification ----------------------------------------------------

def verify_cover(space: Space, covering, target: TargetSet,
                 slack_margin: float = CERT_SLACK) -> CoverageCertificate:
    """Evaluate the slack max_i (r_i - N(c_i - y)) at every target point.

    ``full_cover`` requires the minimal slack to exceed the net resolution
    (strictly, by the configured margin) and every ball to exclude the
    origin: radius <= N(center) + 1e-12.
    """
    balls = covering.balls if isinstance(covering, Covering) else tuple(covering)
    if not balls:
        raise PreconditionError("covering has no balls")
    pts, delta = _target_points(target)
    origin_ok = all(b.radius <= norm(space, b.center) + 1e-12 for b in balls)
    min_slack = math.inf
    for start in range(0, pts.shape[0], _CHUNK):
        chunk = pts[start:start + _CHUNK]
        best = np.full(chunk.shape[0], -np.inf)
        for b in balls:
            np.maximum(best, b.radius - norm_batch(space, chunk - b.center), out=best)
        min_slack = min(min_slack, float(best.min()))
    full = origin_ok and (min_slack > delta + slack_margin)
    return CoverageCertificate(min_slack=min_slack, net_resolution=delta,
                               full_cover=full, origin_excluded=origin_ok)


# --- exposed functionals and their smooth norming points ----------------------

def exposed_norming_point(space: Space, f, tol: float = ANALYTIC_TOL) -> np.ndarray:
    """Unit x with f(x) = dual norm of f and J(x) = {f / dual norm}.

    Exists exactly when f (normalized) is an exposed point of the dual ball:
    always in the smooth lp range, the cube vertices for the dual of l1, the
    signed coordinates for the dual of l-infinity, and the polytope vertices
    in the polyhedral case (decided by a margin LP).
    """
    fv = as_vector(space, f)
    if not np.any(fv):
        raise PreconditionError("functional must be nonzero")
    spec = space.spec
    nf = dual_norm(space, fv)
    if spec.kind == "lp":
        if spec.p == INF:
            nz = np.flatnonzero(np.abs(fv) > 1e-12 * nf)
            if nz.size != 1:
                raise NotExposedError(
                    "dual of l-infinity exposes only single-coordinate functionals",
                    duality_info={"support_size": int(nz.size)})
            x = np.zeros(space.dim)
            x[nz[0]] = math.copysign(1.0, fv[nz[0]])
        elif spec.p == 1.0:
            if np.abs(fv).min() < nf * (1.0 - 1e-12):
                raise NotExposedError(
                    "dual of l1 exposes only the cube vertices (all entries of "
                    "maximal modulus)",
                    duality_info={"moduli": np.abs(fv).tolist()})
            x = np.sign(fv) / space.dim
        else:
            q = dual_exponent(spec.p)
            x = np.sign(fv) * np.abs(fv) ** (q - 1.0) / nf ** (q - 1.0)
    else:
        x = _polyhedral_norming_point(space, fv, nf)
    x = x / norm(space, x)
    ds = duality_set(space, x)
    fhat = fv / nf
    if ds.kind != "singleton" or np.max(np.abs(ds.extreme_points[0] - fhat)) > 1e-9:
        raise NotExposedError(
            "candidate norming point is not smooth with J(x) = {f}",
            duality_info=ds)
    return x


def _polyhedral_norming_point(space: Space, fv: np.ndarray, nf: float) -> np.ndarray:
    from scipy.optimize import linprog

    F = space.spec.functionals
    m = F.shape[0]
    match = None
    for i in range(m):
        for sign in (1.0, -1.0):
            g = sign * F[i]
            ng2 = float(g @ g)
            if ng2 == 0.0:
                continue
            t = float(fv @ g) / ng2
            if t > 0 and np.max(np.abs(fv - t * g)) <= 1e-9 * max(1.0, np.abs(fv).max()):
                match = g
                break
        if match is not None:
            break
    if match is None:
        raise NotExposedError(
            "functional is not a positive multiple of any generator, hence not a "
            "vertex of the dual ball")
    # maximize s with match(x) = 1 and all other facets at distance >= s.
    others = np.vstack([F, -F])
    others = others[np.max(np.abs(others - match), axis=1) > 1e-12]
    n = space.dim
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = np.hstack([others, np.ones((others.shape[0], 1))])
    b_ub = np.ones(others.shape[0])
    A_eq = np.hstack([match, [0.0]])[None, :]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                  bounds=[(None, None)] * n + [(None, 1.0)], method="highs")
    if not res.success:
        raise NotExposedError(f"vertex LP failed: {res.message}")
    s = res.x[-1]
    if s <= 1e-9:
        raise NotExposedError(
            "generator is not a vertex of the dual ball (vertex margin "
            f"{s:.3e})")
    return res.x[:n]


# --- constructions -------------------------------------------------------------

def cover_from_functionals(space: Space, target: TargetSet, functionals,
                           tol: float = ANALYTIC_TOL) -> Covering:
    """Cover the target with exactly one ball per functional.

    Requires every functional to be exposed (smooth norming point x_i) and
    max_i f_i(y) > 0 for every target point. Each point is assigned to its
    maximizing functional; per direction, a doubling search grows one merged
    ball on the ray through x_i that contains all assigned points with
    positive margin. Directions with no assigned points keep a small ball
    B(x_i, N(x_i)/2) so the advertised count is preserved.
    """
    F = np.atleast_2d(np.asarray(functionals, dtype=float))
    if F.shape[1] != space.dim:
        raise PreconditionError("functionals must match the space dimension")
    norming = [exposed_norming_point(space, f, tol=tol) for f in F]
    fhat = np.array([f / dual_norm(space, f) for f in F])
    pts, delta = _target_points(target)
    assign = np.empty(pts.shape[0], dtype=np.int64)
    for start in range(0, pts.shape[0], _CHUNK):
        chunk = pts[start:start + _CHUNK]
        vals = chunk @ fhat.T
        best = vals.max(axis=1)
        bad = np.flatnonzero(best <= 0.0)
        if bad.size:
            y = chunk[bad[0]]
            raise SeparationHypothesisError(
                f"separation hypothesis violated: max_i f_i(y) <= 0 at y = {y.tolist()}",
                point=y)
        assign[start:start + _CHUNK] = vals.argmax(axis=1)
    if target.kind == "unit_sphere":
        target_slack = 1.1 * delta + 1e-9
    else:
        target_slack = 1e-6 * max(1.0, float(norm_batch(space, pts).max()))
    balls = []
    for i, x_i in enumerate(norming):
        sub = pts[assign == i]
        balls.append(_merged_witness_ball(space, x_i, sub, target_slack))
    certificate = verify_cover(space, balls, target)
    return Covering(balls=tuple(balls), certificate=certificate)


def _merged_witness_ball(space: Space, x_unit: np.ndarray, pts: np.ndarray,
                         target_slack: float) -> Ball:
    """One ball on the ray through x_unit containing pts with margin.

    Doubles lam until max_y N(lam x - y) - lam N(x) < -2 * target_slack (the
    merged form of the per-point witness search: the max-gap is convex,
    nonincreasing, with limit -min_y rho_minus(x, y) / N(x) < 0), or until
    the gap stops improving; the certificate then has the final word.
    """
    nx = norm(space, x_unit)
    if pts.shape[0] == 0:
        return Ball(center=x_unit.copy(), radius=nx / 2.0)
    lam = float(max(1, math.ceil(float(norm_batch(space, pts).max()) / nx)))
    prev_gap = math.inf
    for _ in range(_MAX_DOUBLINGS + 1):
        R = float(norm_batch(space, lam * x_unit - pts).max())
        gap = R - lam * nx
        if gap < -2.0 * target_slack:
            return Ball(center=lam * x_unit, radius=(R + lam * nx) / 2.0)
        if prev_gap - gap < 1e-12 * max(1.0, lam * nx):
            break
        prev_gap = gap
        lam *= 2.0
    return Ball(center=lam * x_unit, radius=min((R + lam * nx) / 2.0, lam * nx))


def symmetric_cover_2n(space: Space, exposed_functionals, net_delta: float,
                       **net_kwargs) -> Covering:
    """Symmetric covering of the unit sphere by 2n balls from n independent
    exposed functionals, certified on a delta-net.

    Runs the functional construction on {+/- f_i} and then symmetrizes each
    direction pair by lifting both balls to the larger lam (the collinear
    merge), so the output is exactly mirror-symmetric.
    """
    F = np.atleast_2d(np.asarray(exposed_functionals, dtype=float))
    n = space.dim
    if F.shape[0] != n:
        raise PreconditionError(f"need exactly {n} functionals, got {F.shape[0]}")
    if np.linalg.matrix_rank(F) < n:
        raise PreconditionError("functionals are not linearly independent")
    target = sphere_target(space, net_delta, **net_kwargs)
    raw = cover_from_functionals(space, target, np.vstack([F, -F]))
    balls = []
    for i in range(n):
        plus, minus = raw.balls[i], raw.balls[i + n]
        lam_p = norm(space, plus.center)
        lam_m = norm(space, minus.center)
        direction = plus.center / lam_p
        lam = max(lam_p, lam_m)
        radius = max(plus.radius + (lam - lam_p), minus.radius + (lam - lam_m))
        balls.append(Ball(center=lam * direction, radius=radius))
        balls.append(Ball(center=-lam * direction, radius=radius))
    certificate = verify_cover(space, balls, target)
    covering = Covering(balls=tuple(balls), certificate=certificate)
    if not certificate.full_cover:
        raise CertificateFailure(
            f"coverage certificate failed (min slack {certificate.min_slack:.3e} "
            f"vs net resolution {certificate.net_resolution}); try a smaller delta",
            covering=covering, certificate=certificate)
    return covering


def smooth_cover_n_plus_1(space: Space, independent_functionals,
                          target: TargetSet | None = None,
                          net_delta: float | None = None) -> Covering:
    """Covering by n+1 balls in a smooth lp space (1 < p < infinity).

    Takes n independent unit functionals, appends the normalized negative of
    their sum, and runs the functional construction: if all f_i(y) <= 0 with
    some strict (forced for y != 0 by independence), the appended functional
    is strictly positive on y.
    """
    spec = space.spec
    if not (spec.kind == "lp" and spec.p != INF and spec.p != 1.0):
        raise PreconditionError(
            "n+1 construction requires a smooth lp space (1 < p < infinity)")
    F = np.atleast_2d(np.asarray(independent_functionals, dtype=float))
    n = space.dim
    if F.shape[0] != n or np.linalg.matrix_rank(F) < n:
        raise PreconditionError(f"need {n} linearly independent functionals")
    norms = np.array([dual_norm(space, f) for f in F])
    if np.max(np.abs(norms - 1.0)) > 1e-9:
        raise PreconditionError("functionals must have unit dual norm")
    extra = -F.sum(axis=0)
    extra = extra / dual_norm(space, extra)
    if target is None:
        if net_delta is None:
            raise PreconditionError("need a target set or a net delta")
        target = sphere_target(space, net_delta)
    covering = cover_from_functionals(space, target, np.vstack([F, extra]))
    if not covering.certificate.full_cover:
        raise CertificateFailure(
            f"coverage certificate failed (min slack "
            f"{covering.certificate.min_slack:.3e}); try a smaller delta",
            covering=covering, certificate=covering.certificate)
    return covering


# --- lower-bound adversary ------------------------------------------------------

def adversary_uncovered(space: Space, candidate, symmetric: bool,
                        sv_tol: float = NULLSPACE_SV_TOL) -> UncoveredPoint:
    """Unit vector provably outside every candidate ball.

    Symmetric candidates with fewer than n center pairs: pick one duality
    functional per pair and take a unit vector of their common kernel; it is
    Birkhoff-James orthogonal to every center, hence outside both balls of
    each pair. Asymmetric candidates with m <= n balls: same construction on
    the first n-1 (or all m < n) centers; with m = n the remaining ball is
    defeated through the sign of rho_minus at its center, which cannot be
    positive at both z and -z. The returned point is re-verified by direct
    distance computation against every ball.
    """
    balls = list(candidate)
    n = space.dim
    if not balls:
        raise PreconditionError("candidate list is empty")
    centers = []
    for b in balls:
        c = as_vector(space, b.center)
        nc = norm(space, c)
        if nc == 0.0:
            raise PreconditionError("ball centers must be nonzero")
        if not (0.0 < b.radius <= nc + 1e-12):
            raise PreconditionError(
                f"ball radius {b.radius} must lie in (0, N(center)] = (0, {nc}]")
        centers.append(c)

    if symmetric:
        reps = _symmetric_pairs(space, centers)
        if len(reps) >= n:
            raise PreconditionError(
                f"{len(reps)} symmetric pairs leave no kernel in dimension {n}")
        funcs = [duality_set(space, centers[i]).extreme_points[0] for i in reps]
        z = _unit_kernel_vector(space, np.array(funcs), sv_tol)
    else:
        m = len(balls)
        if m > n:
            raise PreconditionError(f"asymmetric candidate needs at most {n} balls")
        k = min(m, n - 1)
        funcs = [duality_set(space, centers[i]).extreme_points[0] for i in range(k)]
        z = _unit_kernel_vector(space, np.array(funcs), sv_tol)
        if m == n:
            if rho_analytic(space, centers[-1], z).rho_minus > 0.0:
                z = -z
    slacks = np.array([b.radius - norm(space, c - z)
                       for b, c in zip(balls, centers)])
    if slacks.max() > 1e-12:
        raise InternalInconsistencyError(
            f"constructed point is inside a candidate ball (slack {slacks.max()})")
    return UncoveredPoint(point=z, per_ball_slack=slacks)


def _symmetric_pairs(space: Space, centers: list[np.ndarray]) -> list[int]:
    """Indices of one representative center per +/- pair."""
    scale = max(float(np.abs(c).max()) for c in centers)
    used = [False] * len(centers)
    reps = []
    for i, c in enumerate(centers):
        if used[i]:
            continue
        partner = None
        for j in range(i + 1, len(centers)):
            if not used[j] and np.max(np.abs(centers[j] + c)) <= 1e-9 * max(1.0, scale):
                partner = j
                break
        if partner is None:
            raise PreconditionError(
                f"center {c.tolist()} has no mirror partner; candidate is not symmetric")
        used[i] = used[partner] = True
        reps.append(i)
    return reps


def _unit_kernel_vector(space: Space, F: np.ndarray, sv_tol: float) -> np.ndarray:
    """Space-unit vector in the kernel of the stacked functionals."""
    F = np.atleast_2d(F)
    if F.shape[0] >= space.dim:
        raise PreconditionError("kernel construction needs fewer rows than dim")
    _, _, Vt = np.linalg.svd(F)
    z = Vt[-1]
    residual = float(np.abs(F @ z).max())
    if residual > sv_tol * max(1.0, float(np.abs(F).max())):
        raise InternalInconsistencyError(
            f"null-space residual {residual} above threshold")
    nz = np.flatnonzero(np.abs(z) > 1e-12)
    if z[nz[0]] < 0:
        z = -z
    return z / norm(space, z)


# --- covering exchange files -----------------------------------------------------

def target_to_dict(target: TargetSet) -> dict:
    if target.kind == "unit_sphere":
        return {"kind": "unit_sphere", "delta": target.net.resolution}
    return {"kind": "finite_points", "points": target.points.tolist()}


def target_from_dict(space: Space, data: dict, **net_kwargs) -> TargetSet:
    try:
        kind = data["kind"]
        if kind == "unit_sphere":
            return sphere_target(space, float(data["delta"]), **net_kwargs)
        if kind == "finite_points":
            return finite_target(space, data["points"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed target description: {exc}") from exc
    raise InputFormatError(f"unknown target kind {kind!r}")


def certificate_to_dict(cert: CoverageCertificate) -> dict:
    return {"min_slack": cert.min_slack, "net_resolution": cert.net_resolution,
            "full_cover": cert.full_cover, "origin_excluded": cert.origin_excluded}


def covering_to_dict(covering: Covering, target: TargetSet) -> dict:
    payload = {
        "balls": [{"center": b.center.tolist(), "radius": float(b.radius)}
                  for b in covering.balls],
        "target": target_to_dict(target),
    }
    if covering.certificate is not None:
        payload["certificate"] = certificate_to_dict(covering.certificate)
    return payload


def balls_from_dicts(space: Space, items) -> list[Ball]:
    try:
        return [Ball(center=as_vector(space, it["center"]), radius=float(it["radius"]))
                for it in items]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed ball list: {exc}") from exc


def save_covering(path, covering: Covering, target: TargetSet) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(covering_to_dict(covering, target), fh, indent=2)
        fh.write("\n")


def load_covering_file(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputFormatError(f"cannot read covering file {path}: {exc}") from exc
    if "balls" not in data:
        raise InputFormatError("covering file lacks a 'balls' entry")
    return data
