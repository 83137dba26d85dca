"""Problem partitions, reduced problems and expansion.

A reduced problem treats each block of parties as one party and each
family of the block's matching as one individual. A family ``F`` ranks a
foreign block's families ``G`` by the summed score
``sum(rank(x, y) for x in F for y in G)``; equal scores are broken by the
lower family index and counted.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructureError
from .model import Instance, Matching


@dataclass(frozen=True)
class Partition:
    p: int
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(int(v) for v in b)) for b in self.blocks), key=lambda b: b[:1]))
        object.__setattr__(self, "blocks", blocks)
        flat = [v for b in blocks for v in b]
        if any(len(b) == 0 for b in blocks):
            raise StructureError("partition has an empty block")
        if sorted(flat) != list(range(self.p)):
            raise StructureError(f"blocks {list(map(list, blocks))} do not partition parties 0..{self.p - 1}")
        if len(blocks) < 2:
            raise StructureError("a problem partition needs at least 2 blocks")
        if all(len(b) == 1 for b in blocks):
            raise StructureError("a problem partition needs a block with at least 2 parties")

    def __len__(self):
        return len(self.blocks)

    def to_list(self) -> list:
        return [list(b) for b in self.blocks]


def set_partitions(items):
    """All set partitions of ``items`` (restricted-growth order)."""
    items = list(items)
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[head]] + part
        for k in range(len(part)):
            yield part[:k] + [[head] + part[k]] + part[k + 1:]


def problem_partitions(p: int) -> list[Partition]:
    """Every problem partition of ``p`` parties, in canonical block order."""
    out = set()
    for part in set_partitions(range(p)):
        if len(part) >= 2 and any(len(b) >= 2 for b in part):
            out.add(Partition(p, part))
    return sorted(out, key=lambda q: q.blocks)


@dataclass(frozen=True, eq=False)
class Provenance:
    """Which base family each derived individual stands for.

    ``families[q]`` has shape ``(n, len(blocks[q]))``; row ``f`` lists the
    members of the base family behind derived member ``(q, f)`` in the
    block's party order.
    """

    base_p: int
    blocks: tuple
    families: tuple

    def base_family(self, q: int, f: int) -> dict:
        return {a: int(i) for a, i in zip(self.blocks[q], self.families[q][f])}


@dataclass(frozen=True, eq=False)
class ReducedInstance:
    base: Instance
    partition: Partition
    block_matchings: tuple
    derived: Instance
    provenance: Provenance
    scores: np.ndarray
    ties: int

    def to_side_table(self) -> dict:
        """Derived label -> base member labels of the family it stands for."""
        table = {}
        for q, block in enumerate(self.provenance.blocks):
            for f in range(self.derived.n):
                fam = self.provenance.base_family(q, f)
                table[self.derived.members[q][f]] = [self.base.members[a][fam[a]] for a in block]
        return {"provenance": table, "ties": self.ties}


def singleton_matching(n: int) -> Matching:
    return Matching(np.arange(n, dtype=np.int64)[:, None])


def block_name(base: Instance, block) -> str:
    return "+".join(base.party_names[a] for a in block)


def block_scores(base: Instance, q_parties, q_fams, r_parties, r_fams) -> np.ndarray:
    """``out[f, g]``: summed ranks family ``f`` of Q gives family ``g`` of R."""
    n = base.n
    out = np.zeros((n, n), dtype=np.int64)
    for ia, a in enumerate(q_parties):
        xs = q_fams[:, ia]
        for jb, b in enumerate(r_parties):
            ys = r_fams[:, jb]
            out += base.ranks[a][np.ix_(xs, [b], ys)][:, 0, :]
    return out


def reduce(base: Instance, partition: Partition, block_matchings) -> ReducedInstance:
    """Collapse each block to a party whose members are the block's families."""
    if partition.p != base.p:
        raise StructureError(f"partition covers {partition.p} parties, instance has {base.p}")
    block_matchings = list(block_matchings)
    if len(block_matchings) != len(partition):
        raise StructureError(f"{len(block_matchings)} block matchings for {len(partition)} blocks")
    n = base.n
    fams = []
    for q, (block, m) in enumerate(zip(partition.blocks, block_matchings)):
        if m is None and len(block) == 1:
            m = singleton_matching(n)
        if not isinstance(m, Matching) or m.p != len(block) or m.n != n:
            raise StructureError(f"block {q} {list(block)} needs a matching over {len(block)} parties of {n}")
        fams.append(m.families)
        block_matchings[q] = m

    k = len(partition)
    scores = np.zeros((k, n, k, n), dtype=np.int64)
    prefs = np.full((k, n, k, n), -1, dtype=np.int64)
    ties = 0
    for q in range(k):
        for r in range(k):
            if q == r:
                continue
            s = block_scores(base, partition.blocks[q], fams[q], partition.blocks[r], fams[r])
            scores[q, :, r] = s
            order = np.argsort(s, axis=1, kind="stable")
            prefs[q, :, r] = order
            ranked = np.take_along_axis(s, order, axis=1)
            ties += int(np.count_nonzero(ranked[:, 1:] == ranked[:, :-1]))

    names = [block_name(base, b) for b in partition.blocks]
    members = [[f"{name}:{f}" for f in range(n)] for name in names]
    derived = Instance(names, members, prefs)
    prov = Provenance(base.p, partition.blocks, tuple(fams))
    return ReducedInstance(base, partition, tuple(block_matchings), derived, prov, scores, ties)


def expand(reduced_matching: Matching, provenance) -> Matching:
    """Replace each derived family by the union of the base families it holds."""
    if isinstance(provenance, ReducedInstance):
        provenance = provenance.provenance
    rm = reduced_matching.families
    if rm.shape[1] != len(provenance.blocks):
        raise StructureError(f"reduced matching has {rm.shape[1]} parties, provenance has {len(provenance.blocks)} blocks")
    n = rm.shape[0]
    out = np.full((n, provenance.base_p), -1, dtype=np.int64)
    for q, block in enumerate(provenance.blocks):
        out[:, list(block)] = provenance.families[q][rm[:, q]]
    return Matching(out)
