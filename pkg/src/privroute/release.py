"""Gaussian release of edge weights with a non-negativity clamp.

Each released weight is ``max(0, w(e) + Z(e))`` with ``Z(e)`` i.i.d.
``Normal(0, sigma**2)``. The clamp keeps weights non-negative and, being
data-independent post-processing, costs nothing in privacy. ``sigma``
calibrated via ``sigma_from`` gives (epsilon, delta)-differential privacy
for edge-weight functions with sensitivity ``delta_f``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import WeightedGraph
from .seeds import Seed, generator


def sigma_from(epsilon: float, delta: float, delta_f: float) -> float:
    """Noise scale sqrt(2 ln(1.25/delta)) * delta_f / epsilon."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0,1), got {delta}")
    if delta_f <= 0:
        raise ValueError(f"delta_f must be > 0, got {delta_f}")
    return math.sqrt(2.0 * math.log(1.25 / delta)) * delta_f / epsilon


@dataclass(frozen=True)
class PrivacyParams:
    """Resolved noise scale plus whichever parameterization produced it.

    Exactly one of three routes applies: (epsilon, delta, delta_f),
    a noise percentage of the released graph's mean edge weight, or a
    directly chosen sigma.
    """

    sigma: float
    epsilon: float | None = None
    delta: float | None = None
    delta_f: float | None = None
    noise_pct: float | None = None

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")

    @classmethod
    def from_epsilon_delta(
        cls, epsilon: float, delta: float, delta_f: float
    ) -> "PrivacyParams":
        return cls(
            sigma=sigma_from(epsilon, delta, delta_f),
            epsilon=epsilon,
            delta=delta,
            delta_f=delta_f,
        )

    @classmethod
    def from_sigma(cls, sigma: float) -> "PrivacyParams":
        return cls(sigma=sigma)

    @classmethod
    def from_noise_pct(cls, noise_pct: float, g: WeightedGraph) -> "PrivacyParams":
        """Sigma as a percentage of the mean ground-truth edge weight.

        The mean is taken over the graph as released, i.e. after any
        sparsity zeroing.
        """
        if noise_pct < 0:
            raise ValueError(f"noise_pct must be >= 0, got {noise_pct}")
        return cls(sigma=noise_pct / 100.0 * g.mean_weight, noise_pct=noise_pct)


@dataclass(frozen=True)
class NoisyRelease:
    """One privatized graph: same topology, clamped noisy weights."""

    graph: WeightedGraph
    sigma: float
    trial_seed: Seed


def release(g: WeightedGraph, sigma: float, trial_seed: Seed) -> NoisyRelease:
    """Draw one privatized copy of ``g``.

    Noise is drawn per edge in canonical edge order from the stream keyed
    by ``trial_seed`` (numpy PCG64, ziggurat normals), so identical inputs
    give a bit-identical release.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    weights = np.array([w for _, _, w in g.edges])
    noise = generator(trial_seed).normal(0.0, sigma, size=len(weights))
    released = np.maximum(0.0, weights + noise)
    return NoisyRelease(graph=g.with_weights(released.tolist()), sigma=sigma, trial_seed=trial_seed)
