"""Building an automaton from a partially known upper (or lower) functor.

The states are canonical: for an arbitrary bounded poset B they are the proper
down-sets ``D`` (``0 in D``, ``1 not in D``), each acting as the 2-valued
morphism ``h_D(a) = 0 iff a in D``; for a finite Boolean algebra they are the
ultrafilters, i.e. the principal filters of the atoms.  Either family embeds B
into ``2^S``, and the given functor's tables are read over that ``S``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import limits
from .automaton import Automaton
from .dynamics import (
    LOWER,
    UPPER,
    TransitionFunctor,
    _lower_images,
    _upper_images,
    lower_relation_matrix,
    upper_relation_matrix,
)
from .errors import (
    CarrierMismatch,
    DynlogError,
    ExtensionMismatch,
    InvariantViolation,
    MissingBottom,
    MissingTop,
    NotAMorphism,
    NotALattice,
    NotBoolean,
    NotMeetClosed,
    PreconditionFailed,
    TrivialLattice,
)
from .order import BOOL2, BoundedMorphismFamily, Poset, as_complete_lattice, check_full_set
from .propositions import PropositionAlgebra, StateSet, embed_pointwise

DOWNSET = "downset"
ULTRAFILTER = "ultrafilter"

__all__ = [
    "DOWNSET",
    "ULTRAFILTER",
    "CanonicalStateSpace",
    "downset_state_space",
    "ultrafilter_state_space",
    "iter_proper_downsets",
    "is_boolean",
    "check_meet_preserving",
    "check_join_preserving",
    "synthesize",
    "synthesize_dual",
    "Synthesis",
]


@dataclass(eq=False)
class CanonicalStateSpace:
    """Canonical states of an abstract bounded poset.

    ``blocks[k]`` holds the element indices of the k-th down-set (DOWNSET) or
    ultrafilter (ULTRAFILTER); ``eval[k, a]`` is ``h_k(a)`` in ``{0, 1}``.
    """

    kind: str
    base: Poset
    states: tuple[str, ...]
    blocks: tuple[frozenset, ...]
    eval: np.ndarray = field(repr=False)

    def family(self) -> BoundedMorphismFamily:
        return BoundedMorphismFamily(self.base, BOOL2, self.states, self.eval)

    @cached_property
    def algebra(self) -> PropositionAlgebra:
        """The base embedded into ``2^states``; members keep the base's element names."""
        return embed_pointwise(self.family())

    @property
    def state_set(self) -> StateSet:
        return self.algebra.states

    def rename_states(self, mapping: dict[str, str]) -> "CanonicalStateSpace":
        return CanonicalStateSpace(self.kind, self.base, tuple(mapping.get(s, s) for s in self.states), self.blocks, self.eval)

    def realize(self, algebra: PropositionAlgebra) -> dict[str, str] | None:
        """Match canonical states to states of a crisp algebra with the same members.

        Canonical state ``k`` matches original state ``s`` when every member
        ``b`` has ``h_k(b) == b(s)``.  Returns ``{canonical: original}`` if this
        is a bijection, else ``None``.
        """
        if algebra.names != self.base.names:
            return None
        lat = algebra.lattice
        crisp = np.where(algebra.matrix == lat.top, 1, np.where(algebra.matrix == lat.bottom, 0, -1))
        if (crisp < 0).any() or len(algebra.states) != len(self.states):
            return None
        out = {}
        for k, name in enumerate(self.states):
            hits = [s for j, s in enumerate(algebra.states) if np.array_equal(crisp[:, j], self.eval[k])]
            if len(hits) != 1:
                return None
            out[name] = hits[0]
        if len(set(out.values())) != len(out):
            return None
        return out

    def __len__(self):
        return len(self.states)


def _as_poset(B) -> Poset:
    if isinstance(B, Poset):
        return B
    if isinstance(B, PropositionAlgebra):
        return B.as_poset()
    if hasattr(B, "poset"):
        return B.poset
    raise DynlogError(f"cannot read {type(B).__name__} as a bounded poset")


def iter_proper_downsets(p: Poset):
    """Yield every down-set containing bottom and missing top, as index frozensets.

    Elements are decided along a linear extension; an element may join only
    once everything strictly below it has.
    """
    leq = p.leq
    order = sorted(range(p.n), key=lambda i: (int(leq[:, i].sum()), i))
    below = [frozenset(int(j) for j in np.flatnonzero(leq[:, i]) if j != i) for i in range(p.n)]
    chosen: set[int] = set()

    def walk(k):
        if k == len(order):
            yield frozenset(chosen)
            return
        i = order[k]
        if i == p.top:
            yield from walk(k + 1)
            return
        if below[i] <= chosen:
            chosen.add(i)
            yield from walk(k + 1)
            chosen.discard(i)
        if i != p.bottom:
            yield from walk(k + 1)

    yield from walk(0)


def _check_family(space: CanonicalStateSpace):
    try:
        fam = space.family()
    except NotAMorphism as exc:
        raise InvariantViolation(f"canonical state is not a bounded morphism: {exc}") from exc
    if not check_full_set(fam):
        raise InvariantViolation("canonical family does not reflect the order")


def downset_state_space(B, *, max_base: int | None = None, max_states: int | None = None, override: bool = False) -> CanonicalStateSpace:
    """All proper down-sets of ``B`` (a Poset, a lattice or a proposition algebra).

    The state named ``D[a,b]`` is the down-set generated by its maximal elements
    ``a`` and ``b``.
    """
    p = _as_poset(B)
    if p.n < 2:
        raise TrivialLattice("a one-element poset has no proper down-set")
    limits.enforce("base poset size", p.n, max_base or limits.MAX_DOWNSET_BASE, override)
    cap = max_states or limits.MAX_CANONICAL_STATES
    found = []
    for d in iter_proper_downsets(p):
        found.append(d)
        limits.enforce("number of canonical states", len(found), cap, override)
    found.sort(key=lambda d: (len(d), sorted(d)))
    leq = p.leq
    names = []
    for d in found:
        maxima = [i for i in sorted(d) if not any(leq[i, j] and i != j for j in d)]
        names.append("D[" + ",".join(p.names[i] for i in maxima) + "]")
    ev = np.ones((len(found), p.n), dtype=np.intp)
    for k, d in enumerate(found):
        ev[k, list(d)] = 0
    space = CanonicalStateSpace(DOWNSET, p, tuple(names), tuple(found), ev)
    _check_family(space)
    return space


def _pointwise_boolean_witness(B: PropositionAlgebra):
    lat = B.lattice
    m = B.matrix
    if not np.isin(m, (lat.bottom, lat.top)).all():
        i = int(np.flatnonzero(~np.isin(m, (lat.bottom, lat.top)).all(axis=1))[0])
        return f"member {B.names[i]!r} is not crisp"
    for i in range(len(B)):
        comp = np.where(m[i] == lat.top, lat.bottom, lat.top)
        if B.find(comp) is None:
            return f"pointwise complement of {B.names[i]!r} is missing"
    bad = B.meet_closure_witness()
    if bad:
        return f"pointwise meet of {bad[0]!r} and {bad[1]!r} is missing"
    bad = B.join_closure_witness()
    if bad:
        return f"pointwise join of {bad[0]!r} and {bad[1]!r} is missing"
    return None


def is_boolean(B) -> bool:
    try:
        _boolean_lattice(B)
    except NotBoolean:
        return False
    return True


def _boolean_lattice(B):
    if isinstance(B, PropositionAlgebra):
        why = _pointwise_boolean_witness(B)
        if why:
            raise NotBoolean(why)
    p = _as_poset(B)
    try:
        lat = as_complete_lattice(p)
    except (NotALattice, TrivialLattice) as exc:
        raise NotBoolean(str(exc)) from exc
    w = lat.distributivity_witness()
    if w is not None:
        raise NotBoolean(tuple(p.names[i] for i in w), f"distributivity fails at {tuple(p.names[i] for i in w)}")
    for a in range(p.n):
        if lat.complement(a) is None:
            raise NotBoolean(p.names[a], f"{p.names[a]!r} has no complement")
    return p, lat


def ultrafilter_state_space(B) -> CanonicalStateSpace:
    """Ultrafilters of a finite Boolean algebra, one per atom, named by the atom."""
    p, lat = _boolean_lattice(B)
    leq = p.leq
    atoms = [a for a in range(p.n) if a != p.bottom and leq[p.bottom, a]
             and not any(c not in (p.bottom, a) and leq[c, a] for c in range(p.n))]
    blocks = tuple(frozenset(int(b) for b in np.flatnonzero(leq[a])) for a in atoms)
    ev = leq[atoms].astype(np.intp)
    space = CanonicalStateSpace(ULTRAFILTER, p, tuple(p.names[a] for a in atoms), blocks, ev)
    _check_family(space)
    # each h_W must be a homomorphism of Boolean algebras
    for k, a in enumerate(atoms):
        h = ev[k]
        if (h[lat.meet_table] != np.minimum.outer(h, h)).any() or (h[lat.join_table] != np.maximum.outer(h, h)).any():
            raise InvariantViolation(f"ultrafilter of {p.names[a]!r} is not a homomorphism")
    return space


# -- meet / join preservation -----------------------------------------------

@dataclass
class PreservationResult:
    holds: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.holds


def _preservation(T: TransitionFunctor, label, meet: bool) -> PreservationResult:
    dom = T.domain
    lat = T.lattice
    table = lat.meet_table if meet else lat.join_table
    unit = lat.top if meet else lat.bottom
    labels = T.labels if label is None else (T._label(label),)
    bad = dom.meet_closure_witness() if meet else dom.join_closure_witness()
    if bad is not None:
        if meet:
            raise NotMeetClosed(bad)
        raise DynlogError(f"domain is not join-closed: {bad}")
    unit_pos = dom.find([unit] * len(dom.states))
    for x in labels:
        img = T.images[x]
        if unit_pos is None or (img[unit_pos] != unit).any():
            return PreservationResult(False, (x, lat.names[unit]))
        for i, j in itertools.combinations(range(len(dom)), 2):
            k = dom.find(table[dom.matrix[i], dom.matrix[j]])
            if not np.array_equal(img[k], table[img[i], img[j]]):
                return PreservationResult(False, (x, dom.names[i], dom.names[j]))
    return PreservationResult(True)


def check_meet_preserving(T: TransitionFunctor, label=None) -> PreservationResult:
    """``T_x(y meet z) == T_x(y) meet T_x(z)`` on a meet-closed domain, and ``T_x(1) == 1``."""
    return _preservation(T, label, meet=True)


def check_join_preserving(P: TransitionFunctor, label=None) -> PreservationResult:
    """Dual of :func:`check_meet_preserving`, with ``P_x(0) == 0``."""
    return _preservation(P, label, meet=False)


# -- synthesis --------------------------------------------------------------

class Synthesis(NamedTuple):
    automaton: Automaton
    extension: TransitionFunctor


def _domain_positions(C, space):
    emb = space.algebra
    if C.states != emb.states or C.lattice != emb.lattice:
        raise CarrierMismatch("subposet is not over the canonical states")
    rows = []
    for row in C.matrix:
        i = emb.find(row)
        if i is None:
            raise CarrierMismatch(f"{C.name_of(row)!r} is not a member of the embedded algebra")
        rows.append(i)
    return rows


def _check_domain(F: TransitionFunctor, C):
    if F.domain is C:
        return
    same = len(F.domain) == len(C) and all(F.domain.find(row) is not None for row in C.matrix)
    if not same:
        raise CarrierMismatch("functor domain differs from the given subposet")


def _run(C, F: TransitionFunctor, space: CanonicalStateSpace, upper: bool) -> Synthesis:
    direction = UPPER if upper else LOWER
    if F.direction != direction:
        raise DynlogError(f"expected a {direction} functor")
    _check_domain(F, C)
    rows = _domain_positions(F.domain, space)
    dom = F.domain
    if upper and not dom.has_top:
        raise MissingTop("subposet must contain the top proposition")
    if not upper and not dom.has_bottom:
        raise MissingBottom("subposet must contain the bottom proposition")
    err = F.validation_error()
    if err is not None:
        raise err
    if space.kind == ULTRAFILTER:
        check = check_meet_preserving if upper else check_join_preserving
        if not upper and dom.join_closure_witness() is not None:
            raise PreconditionFailed("NotJoinClosed", dom.join_closure_witness())
        res = check(F)
        if not res:
            raise PreconditionFailed("NotMeetPreserving" if upper else "NotJoinPreserving", res.witness)

    emb = space.algebra
    relation = upper_relation_matrix if upper else lower_relation_matrix
    images = _upper_images if upper else _lower_images
    fibres, ext = {}, {}
    names = emb.states.names
    for x in F.labels:
        mat = relation(F, x)
        fibres[x] = [(names[i], names[j]) for i, j in zip(*np.nonzero(mat))]
        ext[x] = images(mat, emb.matrix, emb.lattice)
        got = ext[x][rows]
        diff = np.flatnonzero((got != F.images[x]).any(axis=1))
        if len(diff):
            raise ExtensionMismatch(dom.names[diff[0]], x)
    automaton = Automaton.from_fibres(emb.states, fibres)
    return Synthesis(automaton, TransitionFunctor(direction, emb, ext))


def synthesize(C, T: TransitionFunctor, space: CanonicalStateSpace) -> Synthesis:
    """Induce an automaton on the canonical states from an upper functor on ``C``.

    ``C`` must contain top and ``T`` must be monotone with ``T_x(1) = 1``; over
    an ultrafilter space ``C`` must also be meet-closed and ``T`` meet-preserving.
    The induced automaton's upper functor is then checked to agree with ``T``
    on ``C``; a disagreement raises :class:`ExtensionMismatch`.
    """
    return _run(C, T, space, upper=True)


def synthesize_dual(C, P: TransitionFunctor, space: CanonicalStateSpace) -> Synthesis:
    """Order dual of :func:`synthesize` for a lower functor on ``C`` containing bottom.

    Over an ultrafilter space ``C`` must be join-closed and ``P`` join-preserving.
    """
    return _run(C, P, space, upper=False)
