"""Seeded instance generation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Instance

PROFILES = ("uniform", "aligned", "adversarial-ties")
ALIASES = {"adversarial-ties-in-L'": "adversarial-ties", "adversarial-ties-in-l'": "adversarial-ties"}


@dataclass(frozen=True)
class GenSpec:
    p: int
    n: int
    seed: int = 0
    profile: str = "uniform"

    def __post_init__(self):
        if self.p < 2 or self.n < 1:
            raise ValueError(f"need p >= 2 and n >= 1, got p={self.p}, n={self.n}")
        object.__setattr__(self, "profile", ALIASES.get(self.profile, self.profile))
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.profile not in PROFILES:
            raise ValueError(f"unknown profile {self.profile!r}; choose from {PROFILES}")


def generate(spec: GenSpec | None = None, **kw) -> Instance:
    """Build an instance.

    * ``uniform``: every row an independent uniform permutation.
    * ``aligned``: member ``i`` ranks ``i, i+1, ..., i-1`` of every foreign
      party, so same-index members are mutual first choices.
    * ``adversarial-ties``: a random order per target party; even parties
      rank by it and odd parties by its reverse, so any block mixing both
      parities sums to the same score for every foreign family.
    """
    if spec is None:
        spec = GenSpec(**kw)
    p, n = spec.p, spec.n
    rng = np.random.default_rng([spec.seed, p, n, PROFILES.index(spec.profile)])
    prefs = np.full((p, n, p, n), -1, dtype=np.int64)
    for a in range(p):
        for b in range(p):
            if a == b:
                continue
            if spec.profile == "uniform":
                prefs[a, :, b] = rng.permuted(np.tile(np.arange(n), (n, 1)), axis=1)
            else:
                prefs[a, :, b] = (np.arange(n)[:, None] + np.arange(n)) % n
    if spec.profile == "adversarial-ties":
        orders = [rng.permutation(n) for _ in range(p)]
        for a in range(p):
            for b in range(p):
                if a != b:
                    prefs[a, :, b] = orders[b] if a % 2 == 0 else orders[b][::-1]
    return Instance.from_prefs(prefs)
