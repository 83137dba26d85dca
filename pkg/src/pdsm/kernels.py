"""Hot loops: batch-round deferred acceptance and the blocking-family scan.

Each kernel has a numba version and a vectorized numpy version with the
same outputs. ``backend`` picks one; ``None`` defers to ``PDSM_BACKEND``.
"""
import numpy as np

from ._accel import njit, resolve


@njit(cache=True, nogil=True)
def _gs_numba(prop_pref, resp_rank):
    n = prop_pref.shape[0]
    cursor = np.zeros(n, np.int64)
    held = np.full(n, -1, np.int64)
    free = np.arange(n)
    nfree = n
    rejected = np.empty(n, np.int64)
    rounds = 0
    while nfree > 0:
        rounds += 1
        nrej = 0
        for k in range(nfree):
            i = free[k]
            j = prop_pref[i, cursor[i]]
            cursor[i] += 1
            h = held[j]
            if h < 0:
                held[j] = i
            elif resp_rank[j, i] < resp_rank[j, h]:
                held[j] = i
                rejected[nrej] = h
                nrej += 1
            else:
                rejected[nrej] = i
                nrej += 1
        for k in range(nrej):
            free[k] = rejected[k]
        nfree = nrej
    match = np.empty(n, np.int64)
    for j in range(n):
        match[held[j]] = j
    return match, rounds


def _gs_numpy(prop_pref, resp_rank):
    n = prop_pref.shape[0]
    cursor = np.zeros(n, np.int64)
    held = np.full(n, -1, np.int64)
    free = np.arange(n)
    rounds = 0
    while free.size:
        rounds += 1
        target = prop_pref[free, cursor[free]]
        cursor[free] += 1
        hit = np.unique(target)
        holders = held[hit]
        keep = holders >= 0
        who = np.concatenate([free, holders[keep]])
        where = np.concatenate([target, hit[keep]])
        order = np.lexsort((resp_rank[where, who], where))
        who, where = who[order], where[order]
        first = np.ones(who.size, bool)
        first[1:] = where[1:] != where[:-1]
        held[where[first]] = who[first]
        free = np.sort(who[~first])
    match = np.empty(n, np.int64)
    match[held] = np.arange(n)
    return match, rounds


def gale_shapley(prop_pref, resp_rank, backend=None):
    """Run batch-round deferred acceptance.

    ``prop_pref[i]`` lists responder indices in proposer ``i``'s order and
    ``resp_rank[j, i]`` is responder ``j``'s rank of proposer ``i``. Returns
    ``(match, rounds)`` with ``match[i]`` the responder paired to ``i``.
    """
    prop_pref = np.ascontiguousarray(prop_pref, dtype=np.int64)
    resp_rank = np.ascontiguousarray(resp_rank, dtype=np.int64)
    if resolve(backend) == "numba":
        match, rounds = _gs_numba(prop_pref, resp_rank)
        return match, int(rounds)
    return _gs_numpy(prop_pref, resp_rank)


@njit(cache=True, nogil=True)
def _scan_numba(ranks, rel, cur, start, stop, cap):
    p = rel.shape[0]
    n = rel.shape[1]
    out = np.empty(cap, np.int64)
    found = 0
    cand = np.empty(p, np.int64)
    rest = start
    for a in range(p - 1, -1, -1):
        cand[a] = rest % n
        rest //= n
    for ordinal in range(start, stop):
        existing = True
        for b in range(1, p):
            if rel[0, cand[0], b] != cand[b]:
                existing = False
                break
        if not existing:
            blocking = True
            for a in range(p):
                x = cand[a]
                strict = False
                for b in range(p):
                    if b == a:
                        continue
                    r = ranks[a, x, b, cand[b]]
                    c = cur[a, x, b]
                    if r > c:
                        blocking = False
                        break
                    if r < c:
                        strict = True
                if not blocking or not strict:
                    blocking = False
                    break
            if blocking:
                out[found] = ordinal
                found += 1
                if found == cap:
                    break
        a = p - 1
        while a >= 0:
            cand[a] += 1
            if cand[a] < n:
                break
            cand[a] = 0
            a -= 1
    return out[:found]


_CHUNK = 1 << 16


def _scan_numpy(ranks, rel, cur, start, stop, cap):
    p, n = rel.shape[:2]
    weights = n ** np.arange(p - 1, -1, -1, dtype=np.int64)
    hits = []
    found = 0
    for lo in range(start, stop, _CHUNK):
        ordinal = np.arange(lo, min(lo + _CHUNK, stop), dtype=np.int64)
        cand = (ordinal[:, None] // weights) % n
        existing = np.ones(ordinal.size, bool)
        for b in range(1, p):
            existing &= rel[0, cand[:, 0], b] == cand[:, b]
        blocking = ~existing
        for a in range(p):
            x = cand[:, a]
            strict = np.zeros(ordinal.size, bool)
            for b in range(p):
                if b == a:
                    continue
                r = ranks[a, x, b, cand[:, b]]
                c = cur[a, x, b]
                blocking &= r <= c
                strict |= r < c
            blocking &= strict
        got = ordinal[blocking][: cap - found]
        hits.append(got)
        found += got.size
        if found == cap:
            break
    if not hits:
        return np.empty(0, np.int64)
    return np.concatenate(hits)


def current_ranks(ranks, rel):
    """``cur[a, i, b]``: rank ``(a, i)`` gives its current party-``b`` relative."""
    p, n = rel.shape[:2]
    a = np.arange(p)[:, None, None]
    i = np.arange(n)[None, :, None]
    b = np.arange(p)[None, None, :]
    return np.ascontiguousarray(ranks[a, i, b, rel], dtype=np.int64)


def blocking_scan(ranks, rel, start, stop, cap, backend=None):
    """Ordinals of blocking candidates in ``[start, stop)``, at most ``cap``.

    A candidate's ordinal is its member tuple read as a base-``n`` number,
    party 0 most significant. Existing families are skipped.
    """
    ranks = np.ascontiguousarray(ranks, dtype=np.int64)
    rel = np.ascontiguousarray(rel, dtype=np.int64)
    cur = current_ranks(ranks, rel)
    if cap <= 0 or stop <= start:
        return np.empty(0, np.int64)
    if resolve(backend) == "numba":
        return _scan_numba(ranks, rel, cur, int(start), int(stop), int(cap))
    return _scan_numpy(ranks, rel, cur, int(start), int(stop), int(cap))
