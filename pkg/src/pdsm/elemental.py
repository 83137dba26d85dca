"""Elemental algorithms: one GS run per edge of a directed spanning tree.

Vertex ``i`` of a tree is party ``i`` of the instance. Families are read
off by walking tree paths from party 0, so the root member order fixes the
family order.
"""
from __future__ import annotations

import itertools
import os
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import BoundViolation, GuardError, StructureError
from .gale_shapley import Bijection, gs, round_bound
from .model import Instance, Matching

DEFAULT_MAX_ENUM_P = 8


@dataclass(frozen=True)
class DirectedTree:
    p: int
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        problems = check_tree(self.p, self.edges)
        if problems:
            raise StructureError("; ".join(problems))

    @classmethod
    def _trusted(cls, p: int, edges) -> "DirectedTree":
        # skips validation; only for edge lists known to form a tree
        tree = object.__new__(cls)
        object.__setattr__(tree, "p", p)
        object.__setattr__(tree, "edges", tuple(edges))
        return tree

    def reversed_edge(self, k: int) -> "DirectedTree":
        edges = list(self.edges)
        a, b = edges[k]
        edges[k] = (b, a)
        return DirectedTree(self.p, edges)

    def to_dict(self) -> dict:
        return {"edges": [list(e) for e in self.edges]}


def check_tree(p: int, edges) -> list[str]:
    """Violations of the directed-spanning-tree invariants (empty when ok)."""
    out = []
    edges = [tuple(e) for e in edges]
    if p < 2:
        out.append(f"need at least 2 vertices, got {p}")
    if len(edges) != p - 1:
        out.append(f"edge count {len(edges)}, a spanning tree on {p} vertices has {p - 1}")
    parent = list(range(max(p, 0)))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    seen = set()
    for a, b in edges:
        if not (0 <= a < p and 0 <= b < p):
            out.append(f"edge ({a}->{b}) leaves the vertex range 0..{p - 1}")
            continue
        if a == b:
            out.append(f"self-loop at {a}")
            continue
        key = (min(a, b), max(a, b))
        if key in seen:
            out.append(f"duplicate edge between {key[0]} and {key[1]}")
            continue
        seen.add(key)
        ra, rb = find(a), find(b)
        if ra == rb:
            out.append(f"edge ({a}->{b}) closes a cycle")
            continue
        parent[ra] = rb
    if p >= 2 and len({find(v) for v in range(p)}) > 1:
        out.append("not spanning: graph is disconnected")
    return out


def prufer_decode(seq, p: int) -> list[tuple[int, int]]:
    """Undirected edges ``(lo, hi)`` of the labeled tree coded by ``seq``."""
    seq = [int(v) for v in seq]
    if len(seq) != p - 2 or any(not 0 <= v < p for v in seq):
        raise ValueError(f"not a Prufer sequence for {p} vertices: {seq}")
    degree = [1] * p
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = degree.index(1)
        edges.append((min(leaf, v), max(leaf, v)))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = [i for i in range(p) if degree[i] == 1]
    edges.append((u, w))
    return sorted(edges)


def orient(undirected, mask: int) -> list[tuple[int, int]]:
    """Bit ``k`` of ``mask`` flips the k-th edge (sorted order) to high -> low."""
    return [(hi, lo) if mask >> k & 1 else (lo, hi) for k, (lo, hi) in enumerate(sorted(undirected))]


def max_enum_p() -> int:
    return int(os.environ.get("PDSM_MAX_ENUM_P", DEFAULT_MAX_ENUM_P))


def enumerate_trees(p: int, *, max_p: int | None = None) -> Iterator[DirectedTree]:
    """Every directed spanning tree on ``p`` labeled vertices, exactly once.

    Order: Prufer sequences lexicographically, then orientation mask ascending.
    """
    limit = max_enum_p() if max_p is None else max_p
    if p < 2:
        raise ValueError("p must be at least 2")
    if p > limit:
        raise GuardError(f"refusing to enumerate trees for p={p} > {limit}; raise PDSM_MAX_ENUM_P to override")
    for seq in itertools.product(range(p), repeat=p - 2):
        undirected = prufer_decode(seq, p)
        for mask in range(1 << (p - 1)):
            yield DirectedTree._trusted(p, orient(undirected, mask))


def count_elemental(p: int) -> int:
    if p < 2:
        raise ValueError("p must be at least 2")
    return 2 ** (p - 1) * p ** (p - 2)


def path_tree(p: int) -> DirectedTree:
    return DirectedTree(p, [(a, a + 1) for a in range(p - 1)])


def star_tree(p: int, center: int = 0) -> DirectedTree:
    return DirectedTree(p, [(center, b) for b in range(p) if b != center])


def random_tree(p: int, rng: np.random.Generator) -> DirectedTree:
    seq = rng.integers(0, p, size=p - 2) if p > 2 else []
    mask = int(rng.integers(0, 1 << (p - 1)))
    return DirectedTree(p, orient(prufer_decode(seq, p), mask))


_SHORTHAND = re.compile(r"^prufer:(?P<seq>[0-9,]*)/orient:(?P<mask>\d+)$")


def parse_shorthand(text: str, p: int) -> DirectedTree:
    """``prufer:<comma-separated seq>/orient:<mask>`` to a tree on ``p`` vertices."""
    m = _SHORTHAND.match(text.strip())
    if not m:
        raise ValueError(f"bad plan shorthand {text!r}; expected prufer:<seq>/orient:<mask>")
    seq = [int(v) for v in m["seq"].split(",") if v != ""]
    mask = int(m["mask"])
    if mask >= 1 << (p - 1):
        raise StructureError(f"orientation mask {mask} needs fewer than {p - 1} bits")
    try:
        undirected = prufer_decode(seq, p)
    except ValueError as exc:
        raise StructureError(str(exc)) from None
    return DirectedTree(p, orient(undirected, mask))


def shorthand(tree: DirectedTree) -> str:
    """Inverse of :func:`parse_shorthand`."""
    undirected = sorted((min(a, b), max(a, b)) for a, b in tree.edges)
    seq = prufer_encode(undirected, tree.p)
    mask = 0
    directed = set(tree.edges)
    for k, (lo, hi) in enumerate(undirected):
        if (hi, lo) in directed:
            mask |= 1 << k
    return f"prufer:{','.join(map(str, seq))}/orient:{mask}"


def prufer_encode(undirected, p: int) -> list[int]:
    adj = {v: set() for v in range(p)}
    for a, b in undirected:
        adj[a].add(b)
        adj[b].add(a)
    seq = []
    for _ in range(p - 2):
        leaf = min(v for v in adj if len(adj[v]) == 1)
        (nbr,) = adj.pop(leaf)
        adj[nbr].discard(leaf)
        seq.append(nbr)
    return seq


@dataclass(frozen=True, eq=False)
class ElementalResult:
    matching: Matching
    bijections: tuple

    @property
    def rounds(self) -> tuple:
        return tuple(b.rounds_used for b in self.bijections)

    @property
    def total_rounds(self) -> int:
        return sum(self.rounds)


def compose(n: int, p: int, bijections) -> Matching:
    """Assemble families by following bijections outward from party 0."""
    maps = {a: [] for a in range(p)}
    for bij in bijections:
        maps[bij.proposer].append((bij.responder, bij.pairs))
        maps[bij.responder].append((bij.proposer, bij.inverse))
    fam = np.full((n, p), -1, dtype=np.int64)
    fam[:, 0] = np.arange(n)
    queue = deque([0])
    done = {0}
    while queue:
        u = queue.popleft()
        for v, m in maps[u]:
            if v not in done:
                fam[:, v] = m[fam[:, u]]
                done.add(v)
                queue.append(v)
    return Matching(fam)


def run_elemental(instance: Instance, tree: DirectedTree, *, backend=None) -> ElementalResult:
    """Run GS along every tree edge and compose the bijections into a matching."""
    if isinstance(tree, (list, tuple)):
        tree = DirectedTree(instance.p, tree)
    if tree.p != instance.p:
        raise StructureError(f"plan spans {tree.p} parties, instance has {instance.p}")
    bijections = tuple(gs(instance, a, b, backend=backend) for a, b in tree.edges)
    total = sum(b.rounds_used for b in bijections)
    limit = (instance.p - 1) * round_bound(instance.n)
    if total > limit:
        raise BoundViolation(f"elemental run used {total} rounds, bound is {limit}")
    return ElementalResult(compose(instance.n, instance.p, bijections), bijections)


__all__ = [
    "Bijection",
    "DirectedTree",
    "ElementalResult",
    "check_tree",
    "count_elemental",
    "enumerate_trees",
    "orient",
    "parse_shorthand",
    "path_tree",
    "prufer_decode",
    "prufer_encode",
    "random_tree",
    "run_elemental",
    "shorthand",
    "star_tree",
]
