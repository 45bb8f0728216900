"""Scikit-learn style front end for the MRF level generators."""

from __future__ import annotations

from typing import Sequence

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .board import Level, check_levels
from .mrf import Cpd, NeighborhoodSpec, SamplerConfig, sample_many, train


class MrfLevelGenerator(BaseEstimator):
    """Learns tile conditionals from a level corpus and samples new levels.

    Parameters mirror the functional API: `neighborhood` picks the local
    four-cell context or the mirror-augmented global one; sampling runs
    `sweeps` sequential Gibbs passes in `scan` order starting from `init`.

    >>> gen = MrfLevelGenerator(neighborhood="global").fit(levels)
    >>> fresh = gen.sample(10)
    """

    def __init__(
        self,
        neighborhood: str = "global",
        sweeps: int = 50,
        scan: str = "random",
        init: str = "marginal",
        random_state: int = 0,
    ):
        self.neighborhood = neighborhood
        self.sweeps = sweeps
        self.scan = scan
        self.init = init
        self.random_state = random_state

    def fit(self, X: Sequence[Level], y=None) -> "MrfLevelGenerator":
        """Count neighborhood conditionals over a corpus of valid levels."""
        levels = check_levels(X)
        self.cpd_: Cpd = train(levels, NeighborhoodSpec(self.neighborhood))
        self.n_levels_ = len(levels)
        return self

    def _sampler_config(self, random_state: int | None) -> SamplerConfig:
        seed = self.random_state if random_state is None else random_state
        return SamplerConfig(sweeps=self.sweeps, scan=self.scan, seed=seed, init=self.init)

    def sample(self, n_samples: int = 1, random_state: int | None = None) -> list[Level]:
        """Draw levels on independent streams keyed by (seed, level index)."""
        if not hasattr(self, "cpd_"):
            raise NotFittedError("MrfLevelGenerator must be fitted before sampling")
        return sample_many(self.cpd_, self._sampler_config(random_state), n_samples)
