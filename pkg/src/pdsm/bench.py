"""Round-count benchmark for elemental algorithms."""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .elemental import path_tree, random_tree, run_elemental, star_tree
from .errors import BoundViolation
from .gale_shapley import round_bound
from .generator import GenSpec, generate
from .model import Instance

SHAPES = ("path", "star", "random")


@dataclass
class BenchRecord:
    p: int
    n: int
    seed: int
    shape: str
    total_rounds: int
    wall_time: float
    bound: int


def make_tree(p: int, shape: str, seed: int):
    if shape == "path":
        return path_tree(p)
    if shape == "star":
        return star_tree(p)
    if shape == "random":
        return random_tree(p, np.random.default_rng([seed, p, 7]))
    raise ValueError(f"unknown plan shape {shape!r}")


def bench_one(p: int, n: int, seed: int, shape: str = "path", backend=None) -> BenchRecord:
    inst = generate(GenSpec(p, n, seed))
    tree = make_tree(p, shape, seed)
    t0 = time.perf_counter()
    res = run_elemental(inst, tree, backend=backend)
    wall = time.perf_counter() - t0
    bound = (p - 1) * round_bound(n)
    if res.total_rounds > bound:
        raise BoundViolation(f"p={p} n={n} seed={seed}: {res.total_rounds} rounds > bound {bound}")
    return BenchRecord(p, n, seed, shape, res.total_rounds, wall, bound)


def _star(args):
    return bench_one(*args)


def run_bench(p_values, n_values, seeds: int, shape: str = "path", *, jobs: int = 1, backend=None) -> list[BenchRecord]:
    if not p_values or not n_values or seeds < 1:
        raise ValueError("p range, n range and seed count must be nonempty")
    tasks = [(p, n, s, shape, backend) for p in p_values for n in n_values for s in range(seeds)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(_star, tasks, chunksize=16))
    return [bench_one(*t) for t in tasks]


def mean_rounds(records) -> dict:
    groups = {}
    for r in records:
        groups.setdefault((r.p, r.n), []).append(r.total_rounds)
    return {k: float(np.mean(v)) for k, v in groups.items()}


def linear_fit(x, y):
    """Least-squares line; returns ``(slope, intercept, r_squared)``."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def summarize(records) -> dict:
    """Fits of mean rounds against ``p - 1`` (per n) and ``n**2`` (per p),
    plus mean-round ratios wherever both ``n`` and ``2n`` were measured."""
    means = mean_rounds(records)
    ps = sorted({p for p, _ in means})
    ns = sorted({n for _, n in means})
    vs_p = {}
    for n in ns:
        pts = [(p - 1, means[p, n]) for p in ps if (p, n) in means]
        if len(pts) >= 2:
            vs_p[n] = linear_fit(*zip(*pts))
    vs_n2 = {}
    doubling = {}
    for p in ps:
        pts = [(n * n, means[p, n]) for n in ns if (p, n) in means]
        if len(pts) >= 2:
            vs_n2[p] = linear_fit(*zip(*pts))
        for n in ns:
            if (p, 2 * n) in means and means[p, n] > 0:
                doubling[p, n] = means[p, 2 * n] / means[p, n]
    return {"means": means, "vs_p": vs_p, "vs_n2": vs_n2, "doubling": doubling}


def to_csv(records) -> str:
    buf = io.StringIO()
    fields = list(BenchRecord.__dataclass_fields__)
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in records:
        row = asdict(r)
        row["wall_time"] = f"{r.wall_time:.6f}"
        w.writerow(row)
    return buf.getvalue()


def format_summary(summary) -> str:
    lines = []
    for n, (slope, icpt, r2) in sorted(summary["vs_p"].items()):
        lines.append(f"n={n}: mean rounds ~ {slope:.3f}*(p-1) + {icpt:.3f}  R^2={r2:.4f}")
    for p, (slope, icpt, r2) in sorted(summary["vs_n2"].items()):
        lines.append(f"p={p}: mean rounds ~ {slope:.4f}*n^2 + {icpt:.3f}  R^2={r2:.4f}")
    for (p, n), ratio in sorted(summary["doubling"].items()):
        lines.append(f"p={p}: rounds(n={2 * n}) / rounds(n={n}) = {ratio:.3f}")
    return "\n".join(lines)


def _worst_rows(n: int):
    # Men 0..n-2 cycle over women 0..n-2 starting at their own index, man n-1
    # starts at woman 0, and woman n-1 is everyone's last choice. Each woman
    # prefers later suitors, so every round after the first moves exactly one
    # man one step down his list.
    k = n - 1
    men = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        start = i if i < k else 0
        men[i, :k] = [(start + t) % k for t in range(k)] if k else []
        men[i, k] = k
    arrivals = [[] for _ in range(n)]
    held = {}
    cursor = [0] * n
    free = list(range(n))
    while free:
        nxt = []
        for i in free:
            arrivals[men[i, cursor[i]]].append(i)
        for i in free:
            j = men[i, cursor[i]]
            cursor[i] += 1
            if j in held and held[j] not in free:
                nxt.append(held[j])
            held[j] = arrivals[j][-1]
        nxt += [i for i in free if held[men[i, cursor[i] - 1]] != i]
        free = sorted(set(nxt))
    women = np.empty((n, n), dtype=np.int64)
    for j in range(n):
        seen = list(dict.fromkeys(reversed(arrivals[j])))
        women[j] = seen + [i for i in range(n) if i not in seen]
    return men, women


def worst_case_instance(n: int):
    """Two-party instance whose GS run takes exactly ``n*n - 2*n + 2`` rounds."""
    prefs = np.full((2, n, 2, n), -1, dtype=np.int64)
    prefs[0, :, 1], prefs[1, :, 0] = _worst_rows(n)
    return Instance.from_prefs(prefs)
