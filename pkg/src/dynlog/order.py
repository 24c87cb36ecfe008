"""Finite bounded posets, finite lattices and families of bounded morphisms.

Elements are addressed by integer index internally; every public entry point
also accepts the element's display name.  Order relations are dense boolean
matrices, ``leq[i, j]`` meaning element ``i`` is below element ``j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CycleDetected,
    DynlogError,
    NoBottom,
    NotALattice,
    NotAMorphism,
    NoTop,
    TrivialLattice,
    UnknownElement,
)

__all__ = [
    "Poset",
    "TruthLattice",
    "BoundedMorphismFamily",
    "build_poset",
    "as_complete_lattice",
    "meet_subset",
    "join_subset",
    "check_full_set",
    "chain",
    "diamond",
    "BOOL2",
]


def _transitive_closure(rel: np.ndarray) -> np.ndarray:
    closure = rel.copy()
    n = len(closure)
    # Warshall, one vectorised row update per pivot
    for k in range(n):
        closure |= closure[:, k : k + 1] & closure[k : k + 1, :]
    return closure


class Poset:
    """A finite bounded partial order.

    ``leq`` must already be a partial order; use :func:`build_poset` to
    start from cover pairs.  Construction checks reflexivity, antisymmetry
    and transitivity and locates the bounds.
    """

    def __init__(self, names: Sequence[str], leq):
        names = tuple(str(x) for x in names)
        if len(set(names)) != len(names):
            dup = next(x for x in names if names.count(x) > 1)
            raise DynlogError(f"duplicate element name {dup!r}")
        if not names:
            raise NoBottom("empty poset has no bottom")
        leq = np.array(leq, dtype=bool)
        n = len(names)
        if leq.shape != (n, n):
            raise DynlogError(f"order matrix has shape {leq.shape}, expected {(n, n)}")
        if not leq.diagonal().all():
            raise DynlogError("order is not reflexive")
        both = leq & leq.T
        np.fill_diagonal(both, False)
        if both.any():
            i, j = map(int, np.argwhere(both)[0])
            raise CycleDetected(f"{names[i]!r} and {names[j]!r} are below each other")
        if ((leq.astype(np.uint8) @ leq.astype(np.uint8) > 0) & ~leq).any():
            raise DynlogError("order is not transitive")
        leq.flags.writeable = False
        self.names = names
        self.leq = leq
        self.n = n
        self._index = {x: i for i, x in enumerate(names)}

        bottoms = np.flatnonzero(leq.all(axis=1))
        tops = np.flatnonzero(leq.all(axis=0))
        if len(bottoms) != 1:
            raise NoBottom("poset has no least element")
        if len(tops) != 1:
            raise NoTop("poset has no greatest element")
        self.bottom = int(bottoms[0])
        self.top = int(tops[0])

    def index(self, x) -> int:
        """Resolve an element name (or a valid index) to its index."""
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            if 0 <= x < self.n:
                return int(x)
            raise UnknownElement(f"element index {x} out of range")
        try:
            return self._index[x]
        except KeyError:
            raise UnknownElement(f"unknown element {x!r}") from None

    def le(self, a, b) -> bool:
        return bool(self.leq[self.index(a), self.index(b)])

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.names)

    @cached_property
    def _key(self):
        return (self.names, self.leq.tobytes())

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self is other or self._key == other._key

    def __hash__(self):
        return hash(self._key)

    @cached_property
    def covers(self) -> list[tuple[str, str]]:
        """Cover pairs ``(lo, hi)`` in declaration order."""
        lt = self.leq.copy()
        np.fill_diagonal(lt, False)
        between = (lt.astype(np.uint8) @ lt.astype(np.uint8)) > 0
        cov = lt & ~between
        return [(self.names[i], self.names[j]) for i, j in zip(*np.nonzero(cov))]

    def __repr__(self):
        return f"Poset({list(self.names)!r})"


def build_poset(elements: Sequence[str], cover_pairs: Iterable[tuple[str, str]]) -> Poset:
    """Build a bounded poset as the reflexive-transitive closure of ``cover_pairs``.

    >>> p = build_poset(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    >>> p.le("a", "b"), p.le("0", "1")
    (False, True)
    """
    elements = [str(x) for x in elements]
    if len(set(elements)) != len(elements):
        raise DynlogError("element names must be unique")
    index = {x: i for i, x in enumerate(elements)}
    rel = np.eye(len(elements), dtype=bool)
    for lo, hi in cover_pairs:
        for x in (lo, hi):
            if x not in index:
                raise UnknownElement(f"cover pair references undeclared element {x!r}")
        rel[index[lo], index[hi]] = True
    return Poset(elements, _transitive_closure(rel))


class TruthLattice:
    """A non-trivial finite lattice with pairwise meet and join tables.

    Finite and bounded with all pairwise bounds means complete, so subset
    meets and joins are folds over the tables with ``meet([]) == top`` and
    ``join([]) == bottom``.
    """

    def __init__(self, poset: Poset, meet_table: np.ndarray, join_table: np.ndarray):
        self.poset = poset
        meet_table.flags.writeable = False
        join_table.flags.writeable = False
        self.meet_table = meet_table
        self.join_table = join_table

    names = property(lambda self: self.poset.names)
    leq = property(lambda self: self.poset.leq)
    n = property(lambda self: self.poset.n)
    bottom = property(lambda self: self.poset.bottom)
    top = property(lambda self: self.poset.top)

    def index(self, x) -> int:
        return self.poset.index(x)

    def __len__(self):
        return self.poset.n

    def __eq__(self, other):
        if not isinstance(other, TruthLattice):
            return NotImplemented
        return self.poset == other.poset

    def __hash__(self):
        return hash(self.poset)

    def __repr__(self):
        return f"TruthLattice({list(self.names)!r})"

    def meet(self, a: int, b: int) -> int:
        return int(self.meet_table[a, b])

    def join(self, a: int, b: int) -> int:
        return int(self.join_table[a, b])

    def meet_all(self, xs: Iterable[int]) -> int:
        acc = self.top
        for x in xs:
            acc = int(self.meet_table[acc, x])
        return acc

    def join_all(self, xs: Iterable[int]) -> int:
        acc = self.bottom
        for x in xs:
            acc = int(self.join_table[acc, x])
        return acc

    def complement(self, a: int) -> int | None:
        """Some complement of ``a``, or ``None`` if ``a`` has none."""
        for c in range(self.n):
            if self.meet_table[a, c] == self.bottom and self.join_table[a, c] == self.top:
                return c
        return None

    def distributivity_witness(self) -> tuple[int, int, int] | None:
        m, j = self.meet_table, self.join_table
        idx = np.arange(self.n)
        a, b, c = np.meshgrid(idx, idx, idx, indexing="ij")
        bad = m[a, j[b, c]] != j[m[a, b], m[a, c]]
        if bad.any():
            return tuple(int(v) for v in np.argwhere(bad)[0])
        return None


def _bound_table(leq: np.ndarray, upper: bool) -> tuple[np.ndarray, tuple[int, int] | None]:
    n = len(leq)
    table = np.zeros((n, n), dtype=np.intp)
    for a in range(n):
        for b in range(a, n):
            if upper:
                cands = np.flatnonzero(leq[a] & leq[b])
                best = cands[leq[np.ix_(cands, cands)].all(axis=1)]
            else:
                cands = np.flatnonzero(leq[:, a] & leq[:, b])
                best = cands[leq[np.ix_(cands, cands)].all(axis=0)]
            if len(best) != 1:
                return table, (a, b)
            table[a, b] = table[b, a] = best[0]
    return table, None


def as_complete_lattice(p: Poset) -> TruthLattice:
    """Check that every pair of ``p`` has a meet and a join, and tabulate them."""
    if p.n < 2:
        raise TrivialLattice("a truth lattice needs bottom != top")
    join_table, bad = _bound_table(p.leq, upper=True)
    if bad is not None:
        raise NotALattice((p.names[bad[0]], p.names[bad[1]]), f"{p.names[bad[0]]!r} and {p.names[bad[1]]!r} have no join")
    meet_table, bad = _bound_table(p.leq, upper=False)
    if bad is not None:
        raise NotALattice((p.names[bad[0]], p.names[bad[1]]), f"{p.names[bad[0]]!r} and {p.names[bad[1]]!r} have no meet")
    return TruthLattice(p, meet_table, join_table)


def meet_subset(lattice: TruthLattice, xs: Iterable) -> str:
    """Greatest lower bound of ``xs`` (names or indices); top for the empty set."""
    return lattice.names[lattice.meet_all(lattice.index(x) for x in xs)]


def join_subset(lattice: TruthLattice, xs: Iterable) -> str:
    """Least upper bound of ``xs``; bottom for the empty set."""
    return lattice.names[lattice.join_all(lattice.index(x) for x in xs)]


def chain(*names: str) -> TruthLattice:
    """The chain ``names[0] < names[1] < ...``; ``chain()`` is the 3-chain 0 < m < 1."""
    names = names or ("0", "m", "1")
    return as_complete_lattice(build_poset(names, zip(names, names[1:])))


def diamond(a: str = "a", b: str = "b") -> TruthLattice:
    return as_complete_lattice(
        build_poset(["0", a, b, "1"], [("0", a), ("0", b), (a, "1"), (b, "1")])
    )


BOOL2 = chain("0", "1")


@dataclass(frozen=True, eq=False)
class BoundedMorphismFamily:
    """Indexed bounded-poset morphisms ``h_s : source -> target``.

    ``maps[k, a]`` is the target index of ``h_{index[k]}(a)``.
    """

    source: Poset
    target: TruthLattice
    index: tuple[str, ...]
    maps: np.ndarray = field(repr=False)

    def __post_init__(self):
        maps = np.asarray(self.maps, dtype=np.intp)
        object.__setattr__(self, "index", tuple(self.index))
        if maps.shape != (len(self.index), self.source.n):
            raise NotAMorphism(f"maps has shape {maps.shape}")
        if maps.size and (maps.min() < 0 or maps.max() >= self.target.n):
            raise NotAMorphism("map value outside the target lattice")
        tl = self.target.leq
        for k, s in enumerate(self.index):
            h = maps[k]
            if h[self.source.bottom] != self.target.bottom or h[self.source.top] != self.target.top:
                raise NotAMorphism(f"h_{s} does not preserve the bounds")
            # a <= b must imply h(a) <= h(b)
            if (self.source.leq & ~tl[np.ix_(h, h)]).any():
                raise NotAMorphism(f"h_{s} is not order-preserving")
        maps.flags.writeable = False
        object.__setattr__(self, "maps", maps)

    def pointwise_leq(self) -> np.ndarray:
        """``out[a, b]`` iff ``h_s(a) <= h_s(b)`` for every index ``s``."""
        m = self.maps
        return self.target.leq[m[:, :, None], m[:, None, :]].all(axis=0)


def check_full_set(family: BoundedMorphismFamily) -> bool:
    """True iff the family jointly reflects the order of its source."""
    return not (family.pointwise_leq() & ~family.source.leq).any()
