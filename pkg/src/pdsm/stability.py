"""Exhaustive stability oracle.

``verify`` walks all ``n**p`` candidate families (party 0 outermost) and
applies the weak/strict blocking test to every one not already in the
matching. Nothing here depends on how the matching was produced.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import GuardError
from .model import ElementRef, Instance, Matching, family_indices, rank, relative

MAX_CANDIDATES = 10**7
MAX_MATCHINGS = 10**6
WITNESS_CAP = 10


@dataclass
class BlockingReport:
    stable: bool
    witnesses: list = field(default_factory=list)
    candidates_checked: int = 0

    def __bool__(self):
        return self.stable


def is_blocking(instance: Instance, matching: Matching, candidate) -> bool:
    """Literal blocking-family predicate for a family outside ``matching``.

    Every member must weakly prefer each other member to its current
    relative from that party, and every member must strictly prefer at
    least one of them.
    """
    fam = family_indices(candidate)
    if fam.size != instance.p:
        raise ValueError(f"candidate has {fam.size} members, expected {instance.p}")
    if matching.contains(fam):
        raise ValueError("candidate is already a family of the matching")
    refs = [ElementRef(a, int(i)) for a, i in enumerate(fam)]
    for x in refs:
        improves = False
        for z in refs:
            if z.party == x.party:
                continue
            cur = relative(matching, x, z.party)
            if rank(instance, x, z) > rank(instance, x, cur):
                return False
            if rank(instance, x, z) < rank(instance, x, cur):
                improves = True
        if not improves:
            return False
    return True


def _decode(ordinal: int, p: int, n: int) -> tuple:
    digits = []
    for _ in range(p):
        ordinal, d = divmod(ordinal, n)
        digits.append(d)
    return tuple(reversed(digits))


def _ordinal(members, n: int) -> int:
    out = 0
    for d in members:
        out = out * n + int(d)
    return out


def verify(
    instance: Instance,
    matching: Matching,
    *,
    cap: int = WITNESS_CAP,
    max_candidates: int = MAX_CANDIDATES,
    jobs: int = 1,
    backend=None,
) -> BlockingReport:
    """Exhaustively search for blocking families.

    The scan stops once ``cap`` witnesses are known; the verdict is fixed by
    the first. ``candidates_checked`` counts non-matching candidates up to
    and including the last witness reported (all of them when stable).
    """
    p, n = instance.p, instance.n
    if matching.p != p or matching.n != n:
        raise ValueError(f"matching shape {matching.families.shape} does not fit instance ({n}, {p})")
    total = n**p
    if total > max_candidates:
        raise GuardError(
            f"{total} candidate families exceeds the guard of {max_candidates}; "
            "raise the limit or use a sampling check"
        )
    cap = max(int(cap), 1)
    ranks, rel = instance.ranks, matching.relatives
    if jobs <= 1:
        hits = kernels.blocking_scan(ranks, rel, 0, total, cap, backend=backend)
    else:
        bounds = np.linspace(0, total, jobs + 1).astype(np.int64)
        with ThreadPoolExecutor(jobs) as pool:
            parts = pool.map(
                lambda lo_hi: kernels.blocking_scan(ranks, rel, lo_hi[0], lo_hi[1], cap, backend=backend),
                zip(bounds[:-1], bounds[1:]),
            )
            hits = np.concatenate(list(parts))[:cap]
    if hits.size:
        last = int(hits[-1])
        fam_ords = [_ordinal(row, n) for row in matching.families]
        checked = last + 1 - sum(1 for o in fam_ords if o <= last) if hits.size == cap else total - n
    else:
        checked = total - n
    witnesses = [_decode(int(h), p, n) for h in hits]
    return BlockingReport(not witnesses, witnesses, checked)


def all_matchings(p: int, n: int):
    """Every matching: party 0 fixed in order, permutations for the rest."""
    perms = list(itertools.permutations(range(n)))
    base = np.arange(n, dtype=np.int64)
    for combo in itertools.product(perms, repeat=p - 1):
        yield Matching(np.column_stack([base, *combo]))


def enumerate_stable(instance: Instance, *, max_matchings: int = MAX_MATCHINGS, backend=None) -> list[Matching]:
    """All stable matchings, in the deterministic order of :func:`all_matchings`."""
    count = math.factorial(instance.n) ** (instance.p - 1)
    if count > max_matchings:
        raise GuardError(f"{count} matchings exceeds the guard of {max_matchings}")
    return [
        m
        for m in all_matchings(instance.p, instance.n)
        if verify(instance, m, cap=1, backend=backend).stable
    ]
