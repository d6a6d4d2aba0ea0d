"""Random subspace generation and rejection-sampled starting configurations.

Subspaces are drawn uniformly by orthonormalizing Gaussian matrices; the
starting-point sampler keeps a draw only when it is sufficiently far from
everything accepted so far, and gives up (with a count of what it managed)
once the draw budget is spent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InitFailure, InvalidInput, RankDeficient
from .geometry import Configuration, Field
from .linalg import qr_orthonormal

__all__ = ["InitParams", "random_subspace", "initial_configuration", "gaussian_matrix"]


@dataclass(frozen=True)
class InitParams:
    """Similarity cap, draw budget, and seed for the rejection sampler."""

    tau: float
    max_draws: int = 10000
    seed: int = 0

    def __post_init__(self):
        if not self.tau > 0:
            raise InvalidInput(f"tau must be positive, got {self.tau}")
        if self.max_draws < 1:
            raise InvalidInput("max_draws must be >= 1")


def gaussian_matrix(d: int, K: int, field: Field, rng: np.random.Generator) -> np.ndarray:
    """d-by-K matrix of iid standard normal entries.

    Complex entries have independent real and imaginary parts of variance
    1/2 each, so the complex variance is one and the distribution is
    invariant under left multiplication by any fixed unitary.
    """
    if field is Field.COMPLEX:
        return math.sqrt(0.5) * (
            rng.standard_normal((d, K)) + 1j * rng.standard_normal((d, K))
        )
    return rng.standard_normal((d, K))


def random_subspace(d: int, K: int, field: Field, rng: np.random.Generator) -> np.ndarray:
    """Orthonormal frame for a uniformly random K-dimensional subspace."""
    if not 1 <= K <= d:
        raise InvalidInput(f"need 1 <= K <= d, got K={K}, d={d}")
    while True:
        try:
            return qr_orthonormal(gaussian_matrix(d, K, field, rng))
        except RankDeficient:
            continue  # probability-zero event; redraw


def initial_configuration(
    d: int,
    K: int,
    N: int,
    field: Field,
    params: InitParams,
    *,
    signed_similarity: bool = False,
) -> Configuration:
    """Draw subspaces until N mutually dissimilar ones are accepted.

    Similarity between frames is the Frobenius norm of their product, so
    tau = sqrt(K) places no restriction.  With ``signed_similarity`` (unit
    vectors on a sphere, K = 1) the signed inner product is capped instead,
    which keeps antipodal near-duplicates apart from genuine neighbors.
    Raises InitFailure carrying the accepted count once ``max_draws`` draws
    are consumed.  Deterministic for a fixed seed.
    """
    if params.tau > math.sqrt(K) + 1e-12:
        raise InvalidInput(f"tau={params.tau} exceeds the maximum similarity sqrt(K)")
    if signed_similarity and K != 1:
        raise InvalidInput("signed similarity applies to K = 1 points only")
    rng = np.random.default_rng(params.seed)
    accepted: list[np.ndarray] = []
    for _ in range(params.max_draws):
        X = random_subspace(d, K, field, rng)
        if signed_similarity:
            fits = all(float(np.real(Y.conj().T @ X)[0, 0]) <= params.tau for Y in accepted)
        else:
            fits = all(float(np.linalg.norm(Y.conj().T @ X)) <= params.tau for Y in accepted)
        if fits:
            accepted.append(X)
            if len(accepted) == N:
                return Configuration(field=field, blocks=np.stack(accepted))
    raise InitFailure(
        f"accepted only {len(accepted)} of {N} subspaces within {params.max_draws} draws",
        accepted=len(accepted),
    )
