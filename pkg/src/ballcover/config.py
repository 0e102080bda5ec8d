"""Default numerical tolerances, overridable per call."""

from __future__ import annotations

from dataclasses import dataclass

# Sign decisions on analytically computed quantities.
ANALYTIC_TOL = 1e-9
# Agreement between finite-difference and analytic derivative backends.
FD_TOL = 1e-5
# Strict-inequality margin demanded by coverage certificates.
CERT_SLACK = 1e-12
# Singular values below this are treated as zero in null-space extraction.
NULLSPACE_SV_TOL = 1e-10


@dataclass(frozen=True)
class Tolerances:
    """Bundle of the configurable tolerances, mainly for the CLI."""

    analytic: float = ANALYTIC_TOL
    finite_difference: float = FD_TOL
    certificate_slack: float = CERT_SLACK


DEFAULT_TOLERANCES = Tolerances()
