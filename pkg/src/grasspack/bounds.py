"""Rankin-type upper bounds and feasibility-parameter conversions.

The bounds come from embedding the packing space into a Euclidean sphere;
attaining them forces strong structure (equidistant or equi-isoclinic
configurations), so each report also carries the largest N for which
attainment is possible at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInput
from .geometry import Field, Metric

__all__ = [
    "BoundReport",
    "rankin_chordal",
    "rankin_spectral",
    "rankin_projective",
    "mu_from_rho",
    "rho_from_mu",
]


@dataclass(frozen=True)
class BoundReport:
    """Upper bound on a squared packing diameter.

    ``bound_value`` is the squared diameter cap; for line packings
    ``degrees`` additionally expresses it as the minimum acute angle.
    ``attainability_limit`` is the largest N for which equality is possible;
    ``equidistance_implied`` records that meeting the bound forces all pairs
    to be equidistant (equi-isoclinic for the spectral bound).
    """

    bound_value: float
    attainable: bool
    attainability_limit: int
    equidistance_implied: bool
    degrees: float | None = None


def _check_subspace_args(d: int, K: int, N: int) -> None:
    if not (1 <= K < d):
        raise InvalidInput(f"need 1 <= K < d, got K={K}, d={d}")
    if N < 2:
        raise InvalidInput(f"need N >= 2, got N={N}")


def rankin_chordal(d: int, K: int, N: int, field: Field) -> BoundReport:
    """Squared chordal packing diameter is at most K(d-K)/d * N/(N-1)."""
    _check_subspace_args(d, K, N)
    bound = (K * (d - K) / d) * (N / (N - 1))
    limit = d * (d + 1) // 2 if field is Field.REAL else d * d
    return BoundReport(
        bound_value=bound,
        attainable=N <= limit,
        attainability_limit=limit,
        equidistance_implied=True,
    )


def rankin_spectral(d: int, K: int, N: int, field: Field) -> BoundReport:
    """Squared spectral packing diameter is at most (d-K)/d * N/(N-1).

    Attainment forces an equi-isoclinic configuration, so the attainability
    limit is the Lemmens-Seidel cap on how many equi-isoclinic subspaces fit.
    """
    _check_subspace_args(d, K, N)
    bound = ((d - K) / d) * (N / (N - 1))
    if field is Field.REAL:
        limit = d * (d + 1) // 2 - K * (K + 1) // 2 + 1
    else:
        limit = d * d - K * K + 1
    return BoundReport(
        bound_value=bound,
        attainable=N <= limit,
        attainability_limit=limit,
        equidistance_implied=True,
    )


def rankin_projective(d: int, N: int, field: Field) -> BoundReport:
    """Line-packing bound: squared sine of the minimum angle is at most
    (d-1)N / (d(N-1)).  Configurations meeting it must be equiangular."""
    if d < 2:
        raise InvalidInput(f"need d >= 2, got d={d}")
    if N < 2:
        raise InvalidInput(f"need N >= 2, got N={N}")
    bound = ((d - 1) * N) / (d * (N - 1))
    limit = d * (d + 1) // 2 if field is Field.REAL else d * d
    return BoundReport(
        bound_value=bound,
        attainable=N <= limit,
        attainability_limit=limit,
        equidistance_implied=True,
        degrees=math.degrees(math.asin(math.sqrt(min(bound, 1.0)))),
    )


def mu_from_rho(rho: float, metric: Metric, K: int = 1) -> float:
    """Convert a target packing diameter into the block-magnitude cap.

    Chordal: mu = sqrt(K - rho^2); spectral and sphere: mu = sqrt(1 - rho^2);
    Fubini-Study: mu = cos(rho).
    """
    if metric is Metric.CHORDAL:
        if not 0.0 <= rho <= math.sqrt(K) + 1e-12:
            raise InvalidInput(f"chordal rho must lie in [0, sqrt(K)], got {rho}")
        return math.sqrt(max(0.0, K - rho * rho))
    if metric in (Metric.SPECTRAL, Metric.SPHERE):
        if not 0.0 <= rho <= 1.0 + 1e-12:
            raise InvalidInput(f"{metric.value} rho must lie in [0, 1], got {rho}")
        return math.sqrt(max(0.0, 1.0 - rho * rho))
    if metric is Metric.FUBINI_STUDY:
        if not 0.0 <= rho <= math.pi / 2 + 1e-12:
            raise InvalidInput(f"fubini_study rho must lie in [0, pi/2], got {rho}")
        return max(0.0, math.cos(rho))
    raise InvalidInput(f"no feasibility parameter for metric {metric}")


def rho_from_mu(mu: float, metric: Metric, K: int = 1) -> float:
    """Inverse of :func:`mu_from_rho`."""
    if metric is Metric.CHORDAL:
        if not 0.0 <= mu <= math.sqrt(K) + 1e-12:
            raise InvalidInput(f"chordal mu must lie in [0, sqrt(K)], got {mu}")
        return math.sqrt(max(0.0, K - mu * mu))
    if metric in (Metric.SPECTRAL, Metric.SPHERE):
        if not 0.0 <= mu <= 1.0 + 1e-12:
            raise InvalidInput(f"{metric.value} mu must lie in [0, 1], got {mu}")
        return math.sqrt(max(0.0, 1.0 - mu * mu))
    if metric is Metric.FUBINI_STUDY:
        if not 0.0 <= mu <= 1.0 + 1e-12:
            raise InvalidInput(f"fubini_study mu must lie in [0, 1], got {mu}")
        return math.acos(min(1.0, max(0.0, mu)))
    raise InvalidInput(f"no feasibility parameter for metric {metric}")
