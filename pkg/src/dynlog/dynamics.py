"""Transition functors built from relations, and relations induced by functors.

The upper functor of a frame sends ``b`` to ``s -> meet{b(t) | s R t}`` and the
lower functor sends ``a`` to ``t -> join{a(s) | s R t}``.  Going back, a
functor ``T`` induces ``R_T = {(s, t) | T(b)(s) <= b(t) for all b}`` and a
functor ``P`` induces ``R^P = {(s, t) | a(s) <= P(a)(t) for all a}``, the
quantifier ranging over the functor's own domain.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import limits
from .automaton import Automaton, TransitionFrame, fibre
from .errors import (
    AdjunctionRequired,
    CarrierMismatch,
    DynlogError,
    InvariantViolation,
    PreconditionFailed,
    UnknownElement,
    UnknownInput,
)
from .propositions import (
    Proposition,
    PropositionAlgebra,
    Subposet,
    contains_all_crisp,
)

UPPER = "upper"
LOWER = "lower"

__all__ = [
    "UPPER",
    "LOWER",
    "TransitionFunctor",
    "upper_functor_from_frame",
    "lower_functor_from_frame",
    "labelled_functors",
    "induced_upper_relation",
    "induced_lower_relation",
    "induced_state_transition_relation",
    "check_adjunction",
    "check_inclusion_conditions",
    "check_recovery_witnesses",
    "recover",
    "AdjunctionResult",
    "InclusionReport",
    "WitnessReport",
    "LabelRecovery",
    "RecoveryReport",
]


class TransitionFunctor:
    """A labelled family of maps from a domain of propositions into ``M^S``.

    ``images[x][i]`` is the value table assigned to domain member ``i`` under
    label ``x``.  Images are raw tables and need not be domain members.
    """

    def __init__(self, direction: str, domain: PropositionAlgebra | Subposet, images: Mapping[str, np.ndarray]):
        if direction not in (UPPER, LOWER):
            raise DynlogError(f"direction must be {UPPER!r} or {LOWER!r}")
        if not images:
            raise DynlogError("a functor needs at least one label")
        self.direction = direction
        self.domain = domain
        self.images = {}
        shape = (len(domain), len(domain.states))
        for x, img in images.items():
            img = np.array(img, dtype=np.intp)
            if img.shape != shape:
                raise CarrierMismatch(f"label {x!r}: image table has shape {img.shape}, expected {shape}")
            if img.size and (img.min() < 0 or img.max() >= domain.lattice.n):
                raise UnknownElement(f"label {x!r}: image value outside the truth lattice")
            img.flags.writeable = False
            self.images[str(x)] = img
        self.labels = tuple(self.images)

    lattice = property(lambda self: self.domain.lattice)
    states = property(lambda self: self.domain.states)

    @classmethod
    def from_tables(cls, direction, domain, tables: Mapping[str, Mapping]) -> "TransitionFunctor":
        """Build from ``{label: {member: image}}``.

        Members are names or propositions of ``domain``.  An image may be a
        :class:`Proposition`, the name of a member of the domain (or of its
        parent algebra), a ``{state: element}`` mapping, or a sequence of
        element names in state order.  Every label must cover the whole domain.
        """
        images = {}
        for x, table in tables.items():
            img = np.full((len(domain), len(domain.states)), -1, dtype=np.intp)
            for member, image in table.items():
                img[domain.position(member)] = _resolve_image(domain, image)
            missing = [domain.names[i] for i in np.flatnonzero((img < 0).any(axis=1))]
            if missing:
                raise DynlogError(f"label {x!r}: no image for {missing}")
            images[x] = img
        return cls(direction, domain, images)

    def _label(self, label):
        if label is None:
            if len(self.labels) != 1:
                raise DynlogError("label required for a functor with several labels")
            return self.labels[0]
        if label not in self.images:
            raise UnknownInput(f"unknown label {label!r}")
        return label

    def image(self, label, member) -> Proposition:
        row = self.images[self._label(label)][self.domain.position(member)]
        return Proposition(self.states, self.lattice, row)

    def table(self, label=None) -> dict[str, Proposition]:
        label = self._label(label)
        return {name: Proposition(self.states, self.lattice, row) for name, row in zip(self.domain.names, self.images[label])}

    def single(self, label) -> "TransitionFunctor":
        label = self._label(label)
        return TransitionFunctor(self.direction, self.domain, {label: self.images[label]})

    def restrict(self, domain: Subposet | PropositionAlgebra) -> "TransitionFunctor":
        """The same functor on a smaller domain (a subset of the current one)."""
        rows = []
        for prop in domain.members:
            i = self.domain.find(prop)
            if i is None:
                raise CarrierMismatch(f"{prop!r} is not in the functor's domain")
            rows.append(i)
        return TransitionFunctor(self.direction, domain, {x: img[rows] for x, img in self.images.items()})

    def maps_into(self, target) -> dict[str, bool]:
        """Per label, whether every image is a member of ``target``."""
        return {x: all(target.find(row) is not None for row in img) for x, img in self.images.items()}

    def validation_error(self) -> PreconditionFailed | None:
        """First violated functor invariant (monotone, unit), or ``None``."""
        order = self.domain.pointwise_order
        leq = self.lattice.leq
        unit = self.lattice.top if self.direction == UPPER else self.lattice.bottom
        unit_pos = self.domain.find([unit] * len(self.states))
        for x, img in self.images.items():
            img_order = leq[img[:, None, :], img[None, :, :]].all(axis=2)
            bad = order & ~img_order
            if bad.any():
                i, j = map(int, np.argwhere(bad)[0])
                return PreconditionFailed("NotMonotone", (x, self.domain.names[i], self.domain.names[j]))
            if unit_pos is not None and (img[unit_pos] != unit).any():
                reason = "TopNotPreserved" if self.direction == UPPER else "BottomNotPreserved"
                return PreconditionFailed(reason, (x, self.domain.names[unit_pos]))
        return None

    def validate(self) -> "TransitionFunctor":
        err = self.validation_error()
        if err is not None:
            raise err
        return self

    def __repr__(self):
        return f"TransitionFunctor({self.direction}, labels={list(self.labels)}, |domain|={len(self.domain)})"


def _resolve_image(domain, image):
    lattice, states = domain.lattice, domain.states
    if isinstance(image, Proposition):
        if image.states != states or image.lattice != lattice:
            raise CarrierMismatch("image lives over different carriers")
        return image.values
    if isinstance(image, str):
        for pool in (getattr(domain, "parent", None), domain):
            if pool is not None and image in pool:
                return pool[image].values
        raise UnknownElement(f"unknown proposition {image!r}")
    if isinstance(image, Mapping):
        return Proposition.from_mapping(states, lattice, image).values
    values = [lattice.index(v) for v in image]
    return Proposition(states, lattice, values).values


# -- functors from frames ---------------------------------------------------

def _upper_images(adj: np.ndarray, matrix: np.ndarray, lattice) -> np.ndarray:
    out = np.full(matrix.shape, lattice.top, dtype=np.intp)
    for t in range(adj.shape[1]):
        srcs = adj[:, t]
        if srcs.any():
            out[:, srcs] = lattice.meet_table[out[:, srcs], matrix[:, t : t + 1]]
    return out


def _lower_images(adj: np.ndarray, matrix: np.ndarray, lattice) -> np.ndarray:
    out = np.full(matrix.shape, lattice.bottom, dtype=np.intp)
    for s in range(adj.shape[0]):
        tgts = adj[s, :]
        if tgts.any():
            out[:, tgts] = lattice.join_table[out[:, tgts], matrix[:, s : s + 1]]
    return out


def _check_frame(frame, domain):
    if frame.states != domain.states:
        raise CarrierMismatch("frame and algebra have different state sets")


def upper_functor_from_frame(frame: TransitionFrame, B, label: str = "_") -> TransitionFunctor:
    """``T_R(b)(s) = meet{b(t) | s R t}``; an empty successor set gives top."""
    _check_frame(frame, B)
    return TransitionFunctor(UPPER, B, {label: _upper_images(frame.matrix, B.matrix, B.lattice)})


def lower_functor_from_frame(frame: TransitionFrame, A, label: str = "_") -> TransitionFunctor:
    """``P_R(a)(t) = join{a(s) | s R t}``; an empty predecessor set gives bottom."""
    _check_frame(frame, A)
    return TransitionFunctor(LOWER, A, {label: _lower_images(frame.matrix, A.matrix, A.lattice)})


def _enforce_caps(n_states, n_members, override):
    limits.enforce("number of states", n_states, limits.MAX_STATES, override)
    limits.enforce("algebra size", n_members, limits.MAX_ALGEBRA, override)


def labelled_functors(a: Automaton, B, *, override: bool = False) -> tuple[TransitionFunctor, TransitionFunctor]:
    """The labelled upper and lower functors ``(T_R, P_R)`` of an automaton."""
    if a.states != B.states:
        raise CarrierMismatch("automaton and algebra have different state sets")
    _enforce_caps(len(a.states), len(B), override)
    fibres = a.fibres()
    T = TransitionFunctor(UPPER, B, {x: _upper_images(f.matrix, B.matrix, B.lattice) for x, f in fibres.items()})
    P = TransitionFunctor(LOWER, B, {x: _lower_images(f.matrix, B.matrix, B.lattice) for x, f in fibres.items()})
    return T, P


# -- induced relations ------------------------------------------------------

def upper_relation_matrix(T: TransitionFunctor, label=None) -> np.ndarray:
    """Boolean matrix of ``R_T``: all domain members ``b`` satisfy ``T(b)(s) <= b(t)``."""
    img = T.images[T._label(label)]
    dom = T.domain.matrix
    return T.lattice.leq[img[:, :, None], dom[:, None, :]].all(axis=0)


def lower_relation_matrix(P: TransitionFunctor, label=None) -> np.ndarray:
    """Boolean matrix of ``R^P``: all domain members ``a`` satisfy ``a(s) <= P(a)(t)``."""
    img = P.images[P._label(label)]
    dom = P.domain.matrix
    return P.lattice.leq[dom[:, :, None], img[:, None, :]].all(axis=0)


def induced_upper_relation(T: TransitionFunctor, label=None) -> TransitionFrame:
    return TransitionFrame.from_matrix(T.states, upper_relation_matrix(T, label))


def induced_lower_relation(P: TransitionFunctor, label=None) -> TransitionFrame:
    return TransitionFrame.from_matrix(P.states, lower_relation_matrix(P, label))


def induced_state_transition_relation(F: TransitionFunctor) -> Automaton:
    """The induced automaton: ``R_T`` for an upper functor, ``R^P`` for a lower one."""
    induce = induced_upper_relation if F.direction == UPPER else induced_lower_relation
    return Automaton.from_fibres(F.states, {x: induce(F, x).rel for x in F.labels})


# -- adjunction and inclusions ----------------------------------------------

def _pairing(P: TransitionFunctor, T: TransitionFunctor):
    if P.direction != LOWER or T.direction != UPPER:
        raise DynlogError("expected a lower functor P and an upper functor T")
    if P.states != T.states or P.lattice != T.lattice:
        raise CarrierMismatch("functors live over different carriers")
    if P.labels == T.labels:
        return [(x, x, x) for x in P.labels]
    if len(P.labels) == 1 and len(T.labels) == 1:
        name = P.labels[0] if P.labels == T.labels else f"{P.labels[0]}|{T.labels[0]}"
        return [(name, P.labels[0], T.labels[0])]
    raise CarrierMismatch(f"label sets differ: {P.labels} vs {T.labels}")


@dataclass
class AdjunctionResult:
    holds: bool
    witness: tuple[str, str, str] | None = None  # (label, a, b)

    def __bool__(self):
        return self.holds


def check_adjunction(P: TransitionFunctor, T: TransitionFunctor) -> AdjunctionResult:
    """Check ``P_x(a) <= b  <=>  a <= T_x(b)`` for every label, ``a`` and ``b``."""
    leq = T.lattice.leq
    A, B = P.domain.matrix, T.domain.matrix
    for name, px, tx in _pairing(P, T):
        Pimg, Timg = P.images[px], T.images[tx]
        lhs = leq[Pimg[:, None, :], B[None, :, :]].all(axis=2)
        rhs = leq[A[:, None, :], Timg[None, :, :]].all(axis=2)
        bad = lhs != rhs
        if bad.any():
            i, j = map(int, np.argwhere(bad)[0])
            return AdjunctionResult(False, (name, P.domain.names[i], T.domain.names[j]))
    return AdjunctionResult(True)


def _triples(label, mat, names):
    return {(label, names[i], names[j]) for i, j in zip(*np.nonzero(mat))}


@dataclass
class InclusionReport:
    P_into_B: bool
    T_into_A: bool
    RT_subset_RP: bool
    RP_subset_RT: bool
    equal: bool
    per_label: dict = field(default_factory=dict)


def check_inclusion_conditions(P: TransitionFunctor, T: TransitionFunctor) -> InclusionReport:
    """Closure flags of an adjoint pair and the inclusions between ``R_T`` and ``R^P``.

    ``P`` acts on its domain A and ``T`` on its domain B.  If ``P`` maps A into
    B then ``R_T`` is contained in ``R^P``, and dually; a failure of either
    implication raises :class:`InvariantViolation`.
    """
    adj = check_adjunction(P, T)
    if not adj:
        raise AdjunctionRequired(adj.witness)
    names = T.states.names
    p_into = P.maps_into(T.domain)
    t_into = T.maps_into(P.domain)
    rt, rp = set(), set()
    per_label = {}
    for name, px, tx in _pairing(P, T):
        mt = upper_relation_matrix(T, tx)
        mp = lower_relation_matrix(P, px)
        flags = {
            "P_into_B": p_into[px],
            "T_into_A": t_into[tx],
            "RT_subset_RP": bool((~mt | mp).all()),
            "RP_subset_RT": bool((~mp | mt).all()),
        }
        flags["equal"] = flags["RT_subset_RP"] and flags["RP_subset_RT"]
        if flags["P_into_B"] and not flags["RT_subset_RP"]:
            raise InvariantViolation(f"label {name!r}: P(A) within B but R_T not within R^P")
        if flags["T_into_A"] and not flags["RP_subset_RT"]:
            raise InvariantViolation(f"label {name!r}: T(B) within A but R^P not within R_T")
        per_label[name] = flags
        rt |= _triples(name, mt, names)
        rp |= _triples(name, mp, names)
    return InclusionReport(
        P_into_B=all(f["P_into_B"] for f in per_label.values()),
        T_into_A=all(f["T_into_A"] for f in per_label.values()),
        RT_subset_RP=rt <= rp,
        RP_subset_RT=rp <= rt,
        equal=rt == rp,
        per_label=per_label,
    )


# -- recoverability ---------------------------------------------------------

@dataclass
class WitnessReport:
    """Witness search for recoverability of a single frame.

    ``witnesses["upper"][(s, t)]`` is the first ``b`` with
    ``meet{b(u) | s R u}`` not below ``b(t)``, for each non-edge ``(s, t)``;
    ``witnesses["lower"][(s, t)]`` the first ``a`` with ``a(s)`` not below
    ``join{a(u) | u R t}``.  The ``*_uniform`` flags record the stronger form
    where one ``b`` serves every ``s`` for a fixed ``t`` (one ``a`` every ``t``
    for a fixed ``s``).
    """

    upper_ok: bool
    lower_ok: bool
    upper_uniform: bool
    lower_uniform: bool
    witnesses: dict
    missing: dict


def check_recovery_witnesses(f: TransitionFrame, B, A=None) -> WitnessReport:
    A = B if A is None else A
    _check_frame(f, B)
    _check_frame(f, A)
    leq = B.lattice.leq
    adj = f.matrix
    names = f.states.names
    n = len(names)
    T = _upper_images(adj, B.matrix, B.lattice)
    P = _lower_images(adj, A.matrix, A.lattice)
    # up_fail[b, s, t]: b separates the non-edge (s, t) on the upper side
    up_fail = ~leq[T[:, :, None], B.matrix[:, None, :]]
    lo_fail = ~leq[A.matrix[:, :, None], P[:, None, :]]
    non_edges = ~adj

    wit = {"upper": {}, "lower": {}}
    missing = {"upper": [], "lower": []}
    for s in range(n):
        for t in range(n):
            if not non_edges[s, t]:
                continue
            for side, fail, dom in (("upper", up_fail, B), ("lower", lo_fail, A)):
                hits = np.flatnonzero(fail[:, s, t])
                if len(hits):
                    wit[side][(names[s], names[t])] = dom.names[hits[0]]
                else:
                    missing[side].append((names[s], names[t]))

    upper_uniform = all(
        (up_fail[:, non_edges[:, t], t].all(axis=1)).any() for t in range(n) if non_edges[:, t].any()
    )
    lower_uniform = all(
        (lo_fail[:, s, non_edges[s, :]].all(axis=1)).any() for s in range(n) if non_edges[s, :].any()
    )
    report = WitnessReport(
        upper_ok=not missing["upper"],
        lower_ok=not missing["lower"],
        upper_uniform=upper_uniform,
        lower_uniform=lower_uniform,
        witnesses=wit,
        missing=missing,
    )
    if report.upper_ok:
        rt = upper_relation_matrix(TransitionFunctor(UPPER, B, {"_": T}))
        if not np.array_equal(rt, adj):
            raise InvariantViolation("upper witnesses exist but R differs from R_T")
    if report.lower_ok:
        rp = lower_relation_matrix(TransitionFunctor(LOWER, A, {"_": P}))
        if not np.array_equal(rp, adj):
            raise InvariantViolation("lower witnesses exist but R differs from R^P")
    return report


@dataclass
class LabelRecovery:
    original: TransitionFrame
    induced_upper: TransitionFrame
    induced_lower: TransitionFrame
    upper_matches: bool
    lower_matches: bool
    T_into_B: bool
    P_into_B: bool


@dataclass
class RecoveryReport:
    side: str
    per_label: dict[str, LabelRecovery]
    overall: bool
    upper_automaton: Automaton
    lower_automaton: Automaton
    all_crisp: bool


def recover(a: Automaton, B, side: str = "both", *, override: bool = False) -> RecoveryReport:
    """Rebuild the automaton from its labelled functors on ``B`` and compare.

    ``side`` chooses which induced automaton decides ``overall``: ``"upper"``,
    ``"lower"`` or ``"both"``.
    """
    if side not in ("upper", "lower", "both"):
        raise DynlogError(f"side must be upper, lower or both, not {side!r}")
    T, P = labelled_functors(a, B, override=override)
    t_into = T.maps_into(B)
    p_into = P.maps_into(B)
    per_label = {}
    for x in a.inputs:
        orig = fibre(a, x)
        mt = upper_relation_matrix(T, x)
        mp = lower_relation_matrix(P, x)
        adj = orig.matrix
        if (adj & ~mt).any() or (adj & ~mp).any():
            raise InvariantViolation(f"label {x!r}: R is not contained in its induced relations")
        up, lo = bool(np.array_equal(mt, adj)), bool(np.array_equal(mp, adj))
        if up and t_into[x] and not lo:
            raise InvariantViolation(f"label {x!r}: recoverable from T with T(B) in B, but not from P")
        if lo and p_into[x] and not up:
            raise InvariantViolation(f"label {x!r}: recoverable from P with P(B) in B, but not from T")
        per_label[x] = LabelRecovery(
            original=orig,
            induced_upper=TransitionFrame.from_matrix(a.states, mt),
            induced_lower=TransitionFrame.from_matrix(a.states, mp),
            upper_matches=up,
            lower_matches=lo,
            T_into_B=t_into[x],
            P_into_B=p_into[x],
        )
    ups = all(r.upper_matches for r in per_label.values())
    los = all(r.lower_matches for r in per_label.values())
    overall = {"upper": ups, "lower": los, "both": ups and los}[side]
    crisp = contains_all_crisp(B)
    if crisp and not (ups and los):
        raise InvariantViolation("algebra contains every crisp proposition but the automaton was not recovered")
    return RecoveryReport(
        side=side,
        per_label=per_label,
        overall=overall,
        upper_automaton=Automaton.from_fibres(a.states, {x: r.induced_upper.rel for x, r in per_label.items()}),
        lower_automaton=Automaton.from_fibres(a.states, {x: r.induced_lower.rel for x, r in per_label.items()}),
        all_crisp=crisp,
    )
