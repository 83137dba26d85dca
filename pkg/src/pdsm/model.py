"""Problem model: parties, preference arrays, families and matchings.

Elements are addressed by ``(party, member)`` integer pairs. Labels only
matter at the I/O boundary. Ranks are 1-based; 1 is the most preferred.
"""
from __future__ import annotations

from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ValidationError


class ElementRef(NamedTuple):
    party: int
    member: int


def _readonly(a):
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.flags.writeable = False
    return a


class Instance:
    """A p-party instance with strict, complete preference rows.

    ``prefs[a, i, b]`` is the ordered list of party ``b`` member indices as
    ranked by member ``i`` of party ``a`` (most preferred first). The
    ``prefs[a, :, a]`` slices are unused and hold ``-1``. A short row is
    padded with ``-1`` so that :func:`validate` can report it.

    Construction validates by default and raises :class:`ValidationError`;
    pass ``check=False`` to build a deliberately broken instance.
    """

    def __init__(self, party_names, members, prefs, *, check=True):
        self.party_names = tuple(str(s) for s in party_names)
        self.members = tuple(tuple(str(s) for s in row) for row in members)
        prefs = np.asarray(prefs, dtype=np.int64)
        self.prefs = _readonly(prefs)
        if check:
            report = validate(self)
            if report:
                raise ValidationError(report)

    @property
    def p(self) -> int:
        return self.prefs.shape[0]

    @property
    def n(self) -> int:
        return self.prefs.shape[1]

    @classmethod
    def from_prefs(cls, prefs, party_names=None, members=None, **kw):
        """Build with synthesized labels (``P0``, ``P0.0``, ...) where missing."""
        prefs = np.asarray(prefs, dtype=np.int64)
        p, n = prefs.shape[:2]
        if party_names is None:
            party_names = [f"P{a}" for a in range(p)]
        if members is None:
            members = [[f"{party_names[a]}.{i}" for i in range(n)] for a in range(p)]
        return cls(party_names, members, prefs, **kw)

    @cached_property
    def ranks(self) -> np.ndarray:
        """``ranks[a, i, b, j]``: 1-based rank of ``(b, j)`` for ``(a, i)``; 0 when a == b."""
        p, n = self.p, self.n
        r = np.zeros((p, n, p, n), dtype=np.int64)
        pos = np.arange(1, n + 1, dtype=np.int64)
        for a in range(p):
            for b in range(p):
                if a == b:
                    continue
                rows = self.prefs[a, :, b]
                np.put_along_axis(r[a, :, b], rows, np.broadcast_to(pos, rows.shape), axis=1)
        return _readonly(r)

    @cached_property
    def label_index(self) -> dict:
        return {
            label: ElementRef(a, i)
            for a, row in enumerate(self.members)
            for i, label in enumerate(row)
        }

    def label(self, x) -> str:
        return self.members[x[0]][x[1]]

    def restrict(self, parties: Sequence[int]) -> "Instance":
        """The subproblem over ``parties`` (in the given order)."""
        idx = np.asarray(parties, dtype=np.int64)
        sub = self.prefs[np.ix_(idx, np.arange(self.n), idx)]
        return Instance(
            [self.party_names[a] for a in idx],
            [self.members[a] for a in idx],
            sub,
            check=False,
        )

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.party_names == other.party_names
            and self.members == other.members
            and np.array_equal(self.prefs, other.prefs)
        )

    __hash__ = None

    def __repr__(self):
        return f"Instance(p={self.p}, n={self.n}, parties={list(self.party_names)})"


def validate(instance: Instance) -> list[str]:
    """Return every invariant violation; an empty list means the instance is valid."""
    out = []
    prefs = instance.prefs
    if prefs.ndim != 4 or prefs.shape[0] != prefs.shape[2] or prefs.shape[1] != prefs.shape[3]:
        return [f"preference array has shape {prefs.shape}, expected (p, n, p, n)"]
    p, n = prefs.shape[:2]
    if p < 2:
        out.append(f"need at least 2 parties, got {p}")
    if n < 1:
        out.append("parties must have at least one member")
    if len(instance.party_names) != p:
        out.append(f"{len(instance.party_names)} party names for {p} parties")
    elif len(set(instance.party_names)) != p:
        out.append("party names are not distinct")
    if len(instance.members) != p:
        out.append(f"{len(instance.members)} member lists for {p} parties")
        return out
    for a, row in enumerate(instance.members):
        if len(row) != n:
            out.append(f"party {a} has {len(row)} members, expected {n}")
    labels = [s for row in instance.members for s in row]
    if len(set(labels)) != len(labels):
        out.append("member labels are not unique across the community")
    if out:
        return out

    target = np.arange(n)
    for a in range(p):
        for i in range(n):
            who = instance.members[a][i]
            for b in range(p):
                if b == a:
                    continue
                row = prefs[a, i, b]
                where = f"row {who}->{instance.party_names[b]}"
                filled = row[row >= 0]
                if filled.size != n:
                    out.append(f"{where}: row has {filled.size} of {n} entries")
                    continue
                if np.any(row >= n):
                    out.append(f"{where}: member index out of range")
                    continue
                if not np.array_equal(np.sort(row), target):
                    dup = [instance.members[b][j] for j in np.unique(row) if np.count_nonzero(row == j) > 1]
                    out.append(f"{where}: not a permutation (repeated {', '.join(dup)})")
    return out


def rank(instance: Instance, x, y) -> int:
    """1-based rank of ``y`` in ``x``'s row for ``y``'s party."""
    if x[0] == y[0]:
        raise ValueError(f"rank undefined within one party ({x} vs {y})")
    return int(instance.ranks[x[0], x[1], y[0], y[1]])


class Matching:
    """A partition of the community into ``n`` families.

    ``families[k, a]`` is the party-``a`` member of family ``k``. Family
    order is kept as given; :meth:`canonical` sorts by the party-0 member.
    """

    def __init__(self, families, *, p=None, n=None):
        fam = np.asarray(families, dtype=np.int64)
        if fam.ndim != 2:
            raise ValidationError([f"families must be a 2-d array, got shape {fam.shape}"])
        n_ = fam.shape[0] if n is None else n
        p_ = fam.shape[1] if p is None else p
        problems = []
        if fam.shape != (n_, p_):
            problems.append(f"expected {n_} families of {p_} members, got shape {fam.shape}")
        else:
            for a in range(p_):
                col = np.sort(fam[:, a])
                if not np.array_equal(col, np.arange(n_)):
                    problems.append(f"party {a} members are not covered exactly once")
        if problems:
            raise ValidationError(problems)
        self.families = _readonly(fam)

    @property
    def n(self) -> int:
        return self.families.shape[0]

    @property
    def p(self) -> int:
        return self.families.shape[1]

    @cached_property
    def family_of(self) -> np.ndarray:
        """``family_of[a, i]``: index of the family holding ``(a, i)``."""
        out = np.empty((self.p, self.n), dtype=np.int64)
        k = np.arange(self.n)
        for a in range(self.p):
            out[a, self.families[:, a]] = k
        return _readonly(out)

    @cached_property
    def relatives(self) -> np.ndarray:
        """``relatives[a, i, b]``: party-``b`` relative of ``(a, i)``."""
        return _readonly(self.families[self.family_of])

    def family(self, k) -> tuple:
        return tuple(ElementRef(a, int(i)) for a, i in enumerate(self.families[k]))

    def __iter__(self):
        return (self.family(k) for k in range(self.n))

    def __len__(self):
        return self.n

    def canonical(self) -> "Matching":
        order = np.argsort(self.families[:, 0], kind="stable")
        return Matching(self.families[order])

    def contains(self, family) -> bool:
        fam = family_indices(family)
        k = self.family_of[0, fam[0]]
        return bool(np.array_equal(self.families[k], fam))

    def __eq__(self, other):
        if not isinstance(other, Matching):
            return NotImplemented
        return np.array_equal(self.families, other.families)

    __hash__ = None

    def __repr__(self):
        return f"Matching({self.families.tolist()})"


def family_indices(family) -> np.ndarray:
    """Member indices in party order from ElementRefs or plain indices."""
    items = list(family)
    if items and isinstance(items[0], tuple):
        items = sorted(items, key=lambda r: r[0])
        if [r[0] for r in items] != list(range(len(items))):
            raise ValueError("family must hold exactly one member of each party")
        items = [r[1] for r in items]
    return np.asarray(items, dtype=np.int64)


def relative(matching: Matching, x, party: int) -> ElementRef:
    """``x``'s relative from ``party``; ``relative(m, x, x.party) == x``."""
    a, i = x
    if not (0 <= a < matching.p and 0 <= i < matching.n):
        raise KeyError(f"element {tuple(x)} is not in the matching")
    if not 0 <= party < matching.p:
        raise KeyError(f"party {party} is not in the matching")
    return ElementRef(party, int(matching.relatives[a, i, party]))
