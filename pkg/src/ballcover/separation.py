"""Positive separation by subdifferential selections vs. finite ball coverings.

A family of unit directions x_i positively separates a point set when every
selection of one duality functional per direction takes a strictly positive
value somewhere on each point. Because the selection minimum over J(x_i) is
attained at an extreme point, this is equivalent to: every point a has some
i with rho_minus(x_i, a) > 0, which is in turn equivalent to the existence
of a ball covering with centers on the rays through the x_i. Both reductions
are implemented, together with an exhaustive selection enumeration kept as
an independent desk-scale oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .config import ANALYTIC_TOL
from .covering import (Ball, Covering, CoverageCertificate, finite_target,
                       merge_collinear, verify_cover)
from .derivatives import duality_set, rho_analytic
from .errors import InputFormatError, InternalInconsistencyError, PreconditionError
from .orthogonality import bj_orthogonal
from .spaces import INF, Space, norm, norm_batch, space_from_dict
from .witness import Witness, WitnessAbsence, positive_witness

_ORACLE_CAP = 10 ** 6


@dataclass(frozen=True)
class SelectionInstance:
    """Unit directions x_i and a finite point set A staying off the origin."""

    space: Space
    directions: np.ndarray  # (m, dim)
    points: np.ndarray      # (N, dim)


@dataclass(frozen=True)
class SeparationVerdict:
    separated: bool
    # point index -> index of a direction with rho_minus(x_i, a) > tol
    witness_index: dict[int, int] = field(default_factory=dict)
    failing_point: int | None = None
    # one functional per direction, all nonpositive on the failing point
    violating_selection: np.ndarray | None = None


@dataclass(frozen=True)
class EquivalenceReport:
    """Both directions of the separation/covering equivalence on one instance."""

    separated: bool
    covering: Covering | None
    necessity_verified: bool | None
    absence_certified: bool | None
    agree: bool


@dataclass(frozen=True)
class ClosureReport:
    distance_ok: bool                 # hypothesis (i): d(0, closure) > 0
    disjointness_ok: bool | None      # hypothesis (ii); None when (i) already failed
    violations: list = field(default_factory=list)  # (dir index, point, pair)
    open_separated: bool | None = None
    conclusion_verified: bool | None = None
    witness_index: dict[int, int] = field(default_factory=dict)


def make_instance(space: Space, directions, points, unit_tol: float = 1e-9) -> SelectionInstance:
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if dirs.shape[1] != space.dim or pts.shape[1] != space.dim:
        raise PreconditionError("directions and points must match the space dimension")
    if dirs.shape[0] == 0 or pts.shape[0] == 0:
        raise PreconditionError("need at least one direction and one point")
    dn = norm_batch(space, dirs)
    if np.max(np.abs(dn - 1.0)) > unit_tol:
        raise PreconditionError("directions must have unit norm")
    if norm_batch(space, pts).min() <= 0.0:
        raise PreconditionError("points must stay away from the origin")
    return SelectionInstance(space=space, directions=dirs, points=pts)


def instance_from_dict(data: dict) -> tuple[SelectionInstance, np.ndarray | None]:
    """Parse {"space", "directions", "points", optional "closure_points"}."""
    try:
        space = space_from_dict(data["space"])
        instance = make_instance(space, data["directions"], data["points"])
        closure = data.get("closure_points")
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed instance: {exc}") from exc
    return instance, (None if closure is None else np.atleast_2d(np.asarray(closure, float)))


def positively_separates(instance: SelectionInstance,
                         tol: float = ANALYTIC_TOL) -> SeparationVerdict:
    """Per-point search for a direction with rho_minus(x_i, a) > tol.

    A point without such a direction defeats separation: picking for each i
    an extreme functional minimizing f(a) gives a selection that is
    nonpositive on it everywhere.
    """
    space = instance.space
    witness = {}
    for a_idx, a in enumerate(instance.points):
        found = None
        for i, x in enumerate(instance.directions):
            if rho_analytic(space, x, a).rho_minus > tol:
                found = i
                break
        if found is None:
            selection = np.array([
                _min_extreme(space, x, a) for x in instance.directions
            ])
            return SeparationVerdict(separated=False, witness_index=witness,
                                     failing_point=a_idx,
                                     violating_selection=selection)
        witness[a_idx] = found
    return SeparationVerdict(separated=True, witness_index=witness)


def _min_extreme(space: Space, x, a) -> np.ndarray:
    ext = duality_set(space, x).extreme_points
    return ext[int(np.argmin(ext @ np.asarray(a, dtype=float)))]


def selection_oracle_exhaustive(instance: SelectionInstance,
                                cap: int = _ORACLE_CAP) -> bool:
    """Enumerate every selection of extreme duality functionals and check that
    each positively separates all points. Desk-scale oracle; requires a
    family with finite extreme duality sets (l1, l-infinity, polyhedral).
    """
    space = instance.space
    spec = space.spec
    if spec.kind == "lp" and spec.p not in (1.0, INF):
        raise PreconditionError(
            "exhaustive selections need finite duality sets (l1, l-infinity or "
            "polyhedral)")
    extremes = [duality_set(space, x).extreme_points for x in instance.directions]
    total = 1
    for e in extremes:
        total *= e.shape[0]
        if total > cap:
            raise PreconditionError(f"selection count exceeds cap {cap}")
    values = [e @ instance.points.T for e in extremes]  # (k_i, N) each
    for combo in itertools.product(*(range(e.shape[0]) for e in extremes)):
        sup = np.max(np.stack([v[k] for v, k in zip(values, combo)]), axis=0)
        if np.any(sup <= 0.0):
            return False
    return True


def separation_ballcover_equivalence(instance: SelectionInstance,
                                     net_delta: float = 0.0,
                                     tol: float = ANALYTIC_TOL) -> EquivalenceReport:
    """Run both directions of the covering/separation equivalence.

    Sufficiency: when separation holds, build the covering from per-point
    witnesses merged per direction and certify it (``net_delta`` is recorded
    as the sampling resolution the finite set stands in for, so full
    coverage requires slack above it). Necessity: every point covered by a
    ray ball must have rho_minus > 0 at that ray. When separation fails,
    certify witness absence on every ray for the failing point instead.
    """
    space = instance.space
    verdict = positively_separates(instance, tol=tol)
    target = finite_target(space, instance.points)
    if not verdict.separated:
        a = instance.points[verdict.failing_point]
        absences = [positive_witness(space, x, a, tol=tol)
                    for x in instance.directions]
        certified = all(isinstance(r, WitnessAbsence) for r in absences)
        return EquivalenceReport(separated=False, covering=None,
                                 necessity_verified=None,
                                 absence_certified=certified, agree=certified)

    per_direction: dict[int, list[tuple[float, float]]] = {}
    for a_idx, i in verdict.witness_index.items():
        w = positive_witness(space, instance.directions[i],
                             instance.points[a_idx], tol=tol)
        if not isinstance(w, Witness):
            raise InternalInconsistencyError(
                "separation witness direction failed to produce a ball")
        per_direction.setdefault(i, []).append((w.lam, w.radius))
    balls = []
    for i, x in enumerate(instance.directions):
        if i in per_direction:
            lam_max = max(lam for lam, _ in per_direction[i])
            pieces = [Ball(center=lam * x, radius=r) for lam, r in per_direction[i]]
            balls.append(merge_collinear(space, pieces, x, lam_max))
        else:
            balls.append(Ball(center=x.copy(), radius=0.5))
    raw_cert = verify_cover(space, balls, target)
    cert = CoverageCertificate(min_slack=raw_cert.min_slack,
                               net_resolution=float(net_delta),
                               full_cover=raw_cert.origin_excluded
                               and raw_cert.min_slack > net_delta,
                               origin_excluded=raw_cert.origin_excluded)
    covering = Covering(balls=tuple(balls), certificate=cert)

    necessity = True
    for a in instance.points:
        covering_dirs = [i for i, b in enumerate(balls)
                         if norm(space, b.center - a) < b.radius]
        if not covering_dirs:
            necessity = False
            break
        for i in covering_dirs:
            if rho_analytic(space, instance.directions[i], a).rho_minus <= 0.0:
                necessity = False
    agree = bool(cert.full_cover and necessity)
    return EquivalenceReport(separated=True, covering=covering,
                             necessity_verified=necessity,
                             absence_certified=None, agree=agree)


def closure_precondition_check(instance: SelectionInstance, closure_points,
                               tol: float = ANALYTIC_TOL) -> ClosureReport:
    """Check the closure-transfer hypotheses and, when they hold, that the
    strict separation extends to the closure points.

    Hypothesis (i): the closure list stays at positive distance from the
    origin. Hypothesis (ii): no closure point is Birkhoff-James orthogonal
    to any direction. A violation is demonstrated on the offending point via
    its derivative pair.
    """
    space = instance.space
    closure = np.atleast_2d(np.asarray(closure_points, dtype=float))
    if closure.shape[1] != space.dim:
        raise PreconditionError("closure points must match the space dimension")
    dist0 = float(norm_batch(space, closure).min())
    if dist0 <= tol:
        return ClosureReport(distance_ok=False, disjointness_ok=None)
    violations = []
    for a in closure:
        for i, x in enumerate(instance.directions):
            if bj_orthogonal(space, x, a, tol=tol):
                violations.append((i, a, rho_analytic(space, x, a)))
    if violations:
        return ClosureReport(distance_ok=True, disjointness_ok=False,
                             violations=violations)
    open_separated = positively_separates(instance, tol=tol).separated
    witness = {}
    verified = True
    for a_idx, a in enumerate(closure):
        found = None
        for i, x in enumerate(instance.directions):
            if rho_analytic(space, x, a).rho_minus > tol:
                found = i
                break
        if found is None:
            verified = False
        else:
            witness[a_idx] = found
    return ClosureReport(distance_ok=True, disjointness_ok=True,
                         violations=[], open_separated=open_separated,
                         conclusion_verified=verified if open_separated else None,
                         witness_index=witness)
