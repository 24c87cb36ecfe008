"""Transition frames ``(S, R)`` and labelled acceptors ``(X, S, R)``."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import DynlogError, UnknownInput, UnknownState
from .propositions import StateSet

__all__ = [
    "TransitionFrame",
    "Automaton",
    "fibre",
    "is_deterministic",
    "successors",
    "predecessors",
    "to_dot",
    "relabel",
]


@dataclass(frozen=True)
class TransitionFrame:
    """A state set with a binary relation given as ``(source, target)`` name pairs."""

    states: StateSet
    rel: frozenset

    def __post_init__(self):
        rel = frozenset((str(s), str(t)) for s, t in self.rel)
        for s, t in rel:
            for x in (s, t):
                if x not in self.states:
                    raise UnknownState(f"transition references unknown state {x!r}")
        object.__setattr__(self, "rel", rel)

    @classmethod
    def from_matrix(cls, states: StateSet, adj: np.ndarray) -> "TransitionFrame":
        return cls(states, frozenset((states.names[i], states.names[j]) for i, j in zip(*np.nonzero(adj))))

    @cached_property
    def matrix(self) -> np.ndarray:
        """Boolean adjacency matrix, ``matrix[i, j]`` iff state i R state j."""
        adj = np.zeros((len(self.states), len(self.states)), dtype=bool)
        for s, t in self.rel:
            adj[self.states.index(s), self.states.index(t)] = True
        adj.flags.writeable = False
        return adj

    def sorted_pairs(self) -> list[tuple[str, str]]:
        idx = self.states.index
        return sorted(self.rel, key=lambda p: (idx(p[0]), idx(p[1])))

    def __len__(self):
        return len(self.rel)


@dataclass(frozen=True)
class Automaton:
    """An acceptor: inputs, states and labelled transitions ``(x, s, t)``.

    No initial or final states; an input may label no transition at all.
    """

    inputs: tuple[str, ...]
    states: StateSet
    rel: frozenset

    def __post_init__(self):
        inputs = tuple(str(x) for x in self.inputs)
        if not inputs:
            raise DynlogError("input set must be non-empty")
        if len(set(inputs)) != len(inputs):
            raise DynlogError("input names must be unique")
        rel = frozenset((str(x), str(s), str(t)) for x, s, t in self.rel)
        for x, s, t in rel:
            if x not in inputs:
                raise UnknownInput(f"transition references unknown input {x!r}")
            for y in (s, t):
                if y not in self.states:
                    raise UnknownState(f"transition references unknown state {y!r}")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "rel", rel)

    @classmethod
    def from_fibres(cls, states: StateSet, fibres: dict[str, Iterable[tuple[str, str]]]) -> "Automaton":
        return cls(tuple(fibres), states, frozenset((x, s, t) for x, pairs in fibres.items() for s, t in pairs))

    def fibres(self) -> dict[str, TransitionFrame]:
        return {x: fibre(self, x) for x in self.inputs}

    def sorted_triples(self) -> list[tuple[str, str, str]]:
        xi = {x: i for i, x in enumerate(self.inputs)}
        si = self.states.index
        return sorted(self.rel, key=lambda r: (xi[r[0]], si(r[1]), si(r[2])))


def fibre(a: Automaton, x: str) -> TransitionFrame:
    """The frame ``(S, R_x)`` of one input label."""
    if x not in a.inputs:
        raise UnknownInput(f"unknown input {x!r}")
    return TransitionFrame(a.states, frozenset((s, t) for y, s, t in a.rel if y == x))


def is_deterministic(a: Automaton) -> bool:
    seen = set()
    for x, s, _ in a.rel:
        if (x, s) in seen:
            return False
        seen.add((x, s))
    return True


def successors(f: TransitionFrame, s: str) -> frozenset:
    f.states.index(s)
    return frozenset(t for u, t in f.rel if u == s)


def predecessors(f: TransitionFrame, t: str) -> frozenset:
    f.states.index(t)
    return frozenset(s for s, u in f.rel if u == t)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(a: Automaton, name: str = "automaton") -> str:
    """Graphviz source, nodes in declaration order, one edge per labelled triple."""
    lines = [f"digraph {_quote(name)} {{"]
    for s in a.states:
        lines.append(f"  {_quote(s)};")
    for x, s, t in a.sorted_triples():
        lines.append(f"  {_quote(s)} -> {_quote(t)} [label={_quote(x)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def relabel(a: Automaton, mapping: dict[str, str], states: StateSet | None = None) -> Automaton:
    """Rename states through ``mapping``; ``states`` fixes the new declaration order."""
    if states is None:
        states = StateSet(tuple(mapping.get(s, s) for s in a.states))
    return Automaton(a.inputs, states, frozenset((x, mapping.get(s, s), mapping.get(t, t)) for x, s, t in a.rel))
