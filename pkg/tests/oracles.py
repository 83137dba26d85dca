"""Slow, obviously-correct reference computations used only by tests."""
import itertools

import numpy as np


def brute_stable_bijections(ranks, a, b):
    """All stable bijections a -> b by trying every permutation."""
    n = ranks.shape[1]
    out = []
    for perm in itertools.permutations(range(n)):
        inv = np.argsort(perm)
        ok = True
        for x in range(n):
            for y in range(n):
                if perm[x] == y:
                    continue
                if ranks[a, x, b, y] < ranks[a, x, b, perm[x]] and ranks[b, y, a, x] < ranks[b, y, a, inv[y]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(np.array(perm))
    return out


def brute_proposer_optimal(ranks, a, b):
    """The stable bijection every proposer weakly prefers to all others."""
    stable = brute_stable_bijections(ranks, a, b)
    n = ranks.shape[1]
    for cand in stable:
        if all(ranks[a, x, b, cand[x]] <= ranks[a, x, b, other[x]] for other in stable for x in range(n)):
            return cand
    raise AssertionError("no proposer-optimal stable bijection")


def brute_verify(ranks, families):
    """Blocking families by direct loops over every member tuple."""
    p = ranks.shape[0]
    n = ranks.shape[1]
    fams = {tuple(int(v) for v in row) for row in families}
    rel = {}
    for row in families:
        for a in range(p):
            rel[a, int(row[a])] = [int(v) for v in row]
    hits = []
    for cand in itertools.product(range(n), repeat=p):
        if cand in fams:
            continue
        blocking = True
        for a in range(p):
            x = cand[a]
            cur = rel[a, x]
            weak = all(ranks[a, x, b, cand[b]] <= ranks[a, x, b, cur[b]] for b in range(p) if b != a)
            strict = any(ranks[a, x, b, cand[b]] < ranks[a, x, b, cur[b]] for b in range(p) if b != a)
            if not (weak and strict):
                blocking = False
                break
        if blocking:
            hits.append(cand)
    return hits
