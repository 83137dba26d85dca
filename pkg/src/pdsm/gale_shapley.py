"""Two-party deferred acceptance between a proposer and a responder party."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BoundViolation
from .model import Instance, Matching


def round_bound(n: int) -> int:
    """Maximum number of batch rounds for ``n`` proposers."""
    return n * n - 2 * n + 2


@dataclass(frozen=True, eq=False)
class Bijection:
    proposer: int
    responder: int
    pairs: np.ndarray
    rounds_used: int

    def __eq__(self, other):
        if not isinstance(other, Bijection):
            return NotImplemented
        return (
            self.proposer == other.proposer
            and self.responder == other.responder
            and self.rounds_used == other.rounds_used
            and np.array_equal(self.pairs, other.pairs)
        )

    __hash__ = None

    @property
    def inverse(self) -> np.ndarray:
        inv = np.empty_like(self.pairs)
        inv[self.pairs] = np.arange(self.pairs.size)
        return inv

    def as_matching(self) -> Matching:
        """Families over the two parties, in party-index order."""
        n = self.pairs.size
        fam = np.empty((n, 2), dtype=np.int64)
        fam[:, 0] = np.arange(n)
        fam[:, 1] = self.pairs if self.proposer < self.responder else self.inverse
        return Matching(fam)


def gs(instance: Instance, proposer: int, responder: int, *, backend=None) -> Bijection:
    """Proposer-optimal stable bijection between two parties of ``instance``."""
    if proposer == responder:
        raise ValueError("proposer and responder must be different parties")
    for q in (proposer, responder):
        if not 0 <= q < instance.p:
            raise ValueError(f"party index {q} out of range")
    prop_pref = instance.prefs[proposer, :, responder]
    resp_rank = instance.ranks[responder, :, proposer]
    pairs, rounds = kernels.gale_shapley(prop_pref, resp_rank, backend=backend)
    if rounds > round_bound(instance.n):
        raise BoundViolation(f"gs used {rounds} rounds, bound is {round_bound(instance.n)}")
    pairs.flags.writeable = False
    return Bijection(proposer, responder, pairs, rounds)


def is_stable_2party(instance: Instance, proposer: int, responder: int, bijection) -> bool:
    """Classic blocking-pair test: nobody pair strictly prefers each other."""
    pairs = np.asarray(bijection.pairs if isinstance(bijection, Bijection) else bijection)
    n = instance.n
    inv = np.empty_like(pairs)
    inv[pairs] = np.arange(n)
    r_x = instance.ranks[proposer, :, responder]   # (x, y)
    r_y = instance.ranks[responder, :, proposer]   # (y, x)
    x_cur = r_x[np.arange(n), pairs]
    y_cur = r_y[np.arange(n), inv]
    x_wants = r_x < x_cur[:, None]
    y_wants = r_y.T < y_cur[None, :]
    return not bool(np.any(x_wants & y_wants))
