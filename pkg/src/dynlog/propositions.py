"""Propositions as value tables ``S -> M`` and bounded algebras of them."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    CarrierMismatch,
    DynlogError,
    MissingBottom,
    MissingTop,
    NotFullSet,
    NotMeetClosed,
    UnknownElement,
    UnknownState,
)
from .order import BOOL2, BoundedMorphismFamily, Poset, TruthLattice, check_full_set

__all__ = [
    "StateSet",
    "Proposition",
    "PropositionAlgebra",
    "Subposet",
    "pointwise_leq",
    "contains_all_crisp",
    "crisp_tuples",
    "all_crisp_algebra",
    "meet_closed_subposet",
    "subposet",
    "embed_pointwise",
]


@dataclass(frozen=True)
class StateSet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(str(x) for x in self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise DynlogError("state set must be non-empty")
        if len(set(names)) != len(names):
            raise DynlogError("state names must be unique")

    @cached_property
    def _index(self):
        return {x: i for i, x in enumerate(self.names)}

    def index(self, s) -> int:
        if isinstance(s, (int, np.integer)) and not isinstance(s, bool):
            if 0 <= s < len(self.names):
                return int(s)
            raise UnknownState(f"state index {s} out of range")
        try:
            return self._index[s]
        except KeyError:
            raise UnknownState(f"unknown state {s!r}") from None

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, s):
        return s in self._index


class Proposition:
    """A total map from a state set into a truth lattice.

    Identity is the value table (plus carriers); display names live on the
    algebra, not here.
    """

    __slots__ = ("states", "lattice", "values")

    def __init__(self, states: StateSet, lattice: TruthLattice, values: Sequence[int]):
        values = tuple(int(v) for v in values)
        if len(values) != len(states):
            raise CarrierMismatch(f"{len(values)} values for {len(states)} states")
        if any(v < 0 or v >= lattice.n for v in values):
            raise UnknownElement(f"value outside the truth lattice in {values}")
        self.states = states
        self.lattice = lattice
        self.values = values

    @classmethod
    def from_mapping(cls, states: StateSet, lattice: TruthLattice, table: Mapping[str, str]):
        missing = [s for s in states if s not in table]
        if missing:
            raise CarrierMismatch(f"no value for state(s) {missing}")
        extra = [s for s in table if s not in states]
        if extra:
            raise UnknownState(f"unknown state(s) {extra}")
        return cls(states, lattice, [lattice.index(table[s]) for s in states])

    def __call__(self, s) -> str:
        return self.lattice.names[self.values[self.states.index(s)]]

    def __eq__(self, other):
        if not isinstance(other, Proposition):
            return NotImplemented
        return (
            self.values == other.values
            and self.states == other.states
            and self.lattice == other.lattice
        )

    def __hash__(self):
        return hash(self.values)

    def __le__(self, other):
        return pointwise_leq(self, other)

    def render(self) -> str:
        return " ".join(f"{s}:{self.lattice.names[v]}" for s, v in zip(self.states, self.values))

    def __repr__(self):
        return f"Proposition({self.render()})"


def _same_carriers(p, q):
    if p.states != q.states or p.lattice != q.lattice:
        raise CarrierMismatch("propositions live over different states or lattices")


def pointwise_leq(p: Proposition, q: Proposition) -> bool:
    _same_carriers(p, q)
    leq = p.lattice.leq
    return all(leq[a, b] for a, b in zip(p.values, q.values))


class _MemberTable:
    """Shared behaviour of algebras and subposets: a stack of value tables."""

    lattice: TruthLattice
    states: StateSet
    matrix: np.ndarray
    names: tuple[str, ...]

    def __len__(self):
        return len(self.names)

    @cached_property
    def members(self) -> tuple[Proposition, ...]:
        return tuple(Proposition(self.states, self.lattice, row) for row in self.matrix)

    @cached_property
    def _by_values(self):
        return {tuple(int(v) for v in row): i for i, row in enumerate(self.matrix)}

    @cached_property
    def _by_name(self):
        return {x: i for i, x in enumerate(self.names)}

    def find(self, values) -> int | None:
        """Index of the member with the given value table, or ``None``."""
        if isinstance(values, Proposition):
            if values.states != self.states or values.lattice != self.lattice:
                return None
            values = values.values
        return self._by_values.get(tuple(int(v) for v in values))

    def position(self, item) -> int:
        """Index of a member given by display name or :class:`Proposition`."""
        if isinstance(item, Proposition):
            _same_carriers(item, self)
            i = self.find(item)
            if i is None:
                raise UnknownElement(f"{item!r} is not a member")
            return i
        try:
            return self._by_name[item]
        except KeyError:
            raise UnknownElement(f"unknown proposition {item!r}") from None

    def __getitem__(self, item) -> Proposition:
        return self.members[self.position(item)]

    def __contains__(self, item):
        if isinstance(item, Proposition):
            return self.find(item) is not None
        return item in self._by_name

    def name_of(self, values) -> str | None:
        i = self.find(values)
        return None if i is None else self.names[i]

    @cached_property
    def pointwise_order(self) -> np.ndarray:
        """``out[i, j]`` iff member ``i`` is pointwise below member ``j``."""
        m = self.matrix
        return self.lattice.leq[m[:, None, :], m[None, :, :]].all(axis=2)

    @property
    def has_top(self) -> bool:
        return self.find([self.lattice.top] * len(self.states)) is not None

    @property
    def has_bottom(self) -> bool:
        return self.find([self.lattice.bottom] * len(self.states)) is not None

    def meet_closure_witness(self) -> tuple[str, str] | None:
        mt = self.lattice.meet_table
        for i, j in itertools.combinations(range(len(self)), 2):
            if self.find(mt[self.matrix[i], self.matrix[j]]) is None:
                return self.names[i], self.names[j]
        return None

    def join_closure_witness(self) -> tuple[str, str] | None:
        jt = self.lattice.join_table
        for i, j in itertools.combinations(range(len(self)), 2):
            if self.find(jt[self.matrix[i], self.matrix[j]]) is None:
                return self.names[i], self.names[j]
        return None


class PropositionAlgebra(_MemberTable):
    """A bounded subposet of ``M^S`` ordered pointwise.

    ``matrix[i, k]`` is the lattice index of member ``i`` at state ``k``.
    Members without a user-given name get their rendered value table as name.
    """

    def __init__(self, lattice: TruthLattice, states: StateSet, rows, names: Sequence[str | None] | None = None):
        matrix = np.array([list(r.values) if isinstance(r, Proposition) else list(r) for r in rows], dtype=np.intp)
        if matrix.ndim != 2 or matrix.shape[1] != len(states):
            raise CarrierMismatch(f"member tables must have {len(states)} entries")
        if matrix.size and (matrix.min() < 0 or matrix.max() >= lattice.n):
            raise UnknownElement("member value outside the truth lattice")
        matrix.flags.writeable = False
        self.lattice = lattice
        self.states = states
        self.matrix = matrix
        if names is None:
            names = [None] * len(matrix)
        if len(names) != len(matrix):
            raise DynlogError("one name per member required")
        self.names = tuple(
            n if n is not None else _tuple_name(lattice, row) for n, row in zip(names, matrix)
        )
        if len(set(self.names)) != len(self.names):
            raise DynlogError("proposition names must be unique")
        if len(self._by_values) != len(matrix):
            raise DynlogError("duplicate member value tables")
        if not self.has_bottom:
            raise MissingBottom("algebra lacks the constant-bottom proposition")
        if not self.has_top:
            raise MissingTop("algebra lacks the constant-top proposition")

    @property
    def bottom(self) -> Proposition:
        return self.members[self.find([self.lattice.bottom] * len(self.states))]

    @property
    def top(self) -> Proposition:
        return self.members[self.find([self.lattice.top] * len(self.states))]

    def as_poset(self) -> Poset:
        """The members as an abstract bounded poset, keyed by display name."""
        return Poset(self.names, self.pointwise_order)

    def __repr__(self):
        return f"PropositionAlgebra({len(self)} members over {list(self.states)})"


def _tuple_name(lattice, row) -> str:
    return "(" + ",".join(lattice.names[v] for v in row) + ")"


class Subposet(_MemberTable):
    """A chosen subset C of an algebra's members, in the algebra's order.

    Only the constraints a caller asks for are enforced; see
    :func:`subposet` and :func:`meet_closed_subposet`.
    """

    def __init__(self, parent: PropositionAlgebra, positions: Iterable[int]):
        positions = sorted(set(int(i) for i in positions))
        self.parent = parent
        self.positions = tuple(positions)
        self.lattice = parent.lattice
        self.states = parent.states
        self.matrix = parent.matrix[list(positions)] if positions else np.zeros((0, len(parent.states)), np.intp)
        self.names = tuple(parent.names[i] for i in positions)

    @property
    def meet_closed(self) -> bool:
        return self.meet_closure_witness() is None

    def __repr__(self):
        return f"Subposet({list(self.names)!r})"


def _positions(algebra, chosen):
    return [algebra.position(c) for c in chosen]


def subposet(algebra: PropositionAlgebra, chosen: Iterable, *, require: str = "top") -> Subposet:
    """Select members of ``algebra``; ``require`` is ``"top"``, ``"bottom"`` or ``"none"``."""
    c = Subposet(algebra, _positions(algebra, chosen))
    if require == "top" and not c.has_top:
        raise MissingTop("subposet must contain the top proposition")
    if require == "bottom" and not c.has_bottom:
        raise MissingBottom("subposet must contain the bottom proposition")
    return c


def meet_closed_subposet(algebra: PropositionAlgebra, chosen: Iterable) -> Subposet:
    """Validate that ``chosen`` contains top and is closed under pointwise meets."""
    c = Subposet(algebra, _positions(algebra, chosen))
    if not c.has_top:
        raise MissingTop("subposet must contain the top proposition")
    bad = c.meet_closure_witness()
    if bad is not None:
        raise NotMeetClosed(bad)
    return c


def crisp_tuples(lattice: TruthLattice, n_states: int) -> list[tuple[int, ...]]:
    """All ``{bottom, top}``-valued tables over ``n_states`` states."""
    return list(itertools.product((lattice.bottom, lattice.top), repeat=n_states))


def contains_all_crisp(algebra: _MemberTable) -> bool:
    return all(algebra.find(t) is not None for t in crisp_tuples(algebra.lattice, len(algebra.states)))


def all_crisp_algebra(states: StateSet | Sequence[str], lattice: TruthLattice = BOOL2, names=None) -> PropositionAlgebra:
    """The algebra of every crisp table; ``names`` maps value tuples to display names."""
    if not isinstance(states, StateSet):
        states = StateSet(tuple(states))
    rows = sorted(crisp_tuples(lattice, len(states)), key=lambda t: (sum(v == lattice.top for v in t), [v != lattice.top for v in t]))
    names = names or {}
    return PropositionAlgebra(lattice, states, rows, [names.get(r) for r in rows])


def embed_pointwise(family: BoundedMorphismFamily) -> PropositionAlgebra:
    """Image of ``family.source`` in ``M^S`` under ``a -> (h_s(a))_s``.

    Requires a full family, so that the image is order-isomorphic to the source.
    """
    if not check_full_set(family):
        raise NotFullSet("the morphism family does not reflect the source order")
    states = StateSet(family.index)
    return PropositionAlgebra(family.target, states, family.maps.T, family.source.names)
