import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynlog import (
    BOOL2,
    DOWNSET,
    LOWER,
    UPPER,
    PropositionAlgebra,
    StateSet,
    TransitionFrame,
    TransitionFunctor,
    all_crisp_algebra,
    chain,
    check_join_preserving,
    check_meet_preserving,
    diamond,
    downset_state_space,
    lower_functor_from_frame,
    subposet,
    synthesize,
    synthesize_dual,
    ultrafilter_state_space,
    upper_functor_from_frame,
)
from dynlog import bundles
from dynlog.automaton import relabel
from dynlog.errors import (
    ExtensionMismatch,
    MissingTop,
    NotBoolean,
    NotMeetClosed,
    PreconditionFailed,
    SizeCapExceeded,
    TrivialLattice,
)
from dynlog.textio import parse_functors, parse_subposet

import oracles
import reference
from strategies import bounded_posets, state_names


def leq_pairs(p):
    return {(i, j) for i in range(p.n) for j in range(p.n) if p.leq[i, j]}


def cube():
    return all_crisp_algebra(["s1", "s2", "s3"]).as_poset()


def transport(images_by_name, emb, names, direction=UPPER):
    """A functor on the members ``names`` of ``emb`` whose images are members of ``emb``."""
    C = subposet(emb, names, require="top" if direction == UPPER else "bottom")
    return C, TransitionFunctor.from_tables(direction, C, {x: {m: t[m] for m in names} for x, t in images_by_name.items()})


def oracle_relation(C, F, x, upper=True):
    dom = oracles.rows(C)
    img = oracles.rows_of(F, x)
    if upper:
        return oracles.induced_upper(C.states.names, C.lattice, dom, img)
    return oracles.induced_lower(C.states.names, C.lattice, dom, img)


# -- down-set spaces ---------------------------------------------------------

def test_two_element_chain_has_one_downset():
    space = downset_state_space(BOOL2.poset)
    assert len(space) == 1
    assert space.blocks == (frozenset({0}),)


def test_diamond_downsets():
    L = diamond()
    space = downset_state_space(L.poset)
    got = {frozenset(L.names[i] for i in b) for b in space.blocks}
    assert got == {frozenset("0"), frozenset("0a"), frozenset("0b"), frozenset("0ab")}
    brute = oracles.all_downsets(L.names, leq_pairs(L.poset))
    assert len(space) == len([d for d in brute if 0 in d and 3 not in d]) == 4


def test_cube_has_eighteen_proper_downsets():
    p = cube()
    space = downset_state_space(p)
    brute = oracles.all_downsets(p.names, leq_pairs(p))
    # down-sets correspond one-to-one with antichains (their maximal elements)
    assert len(brute) == len(oracles.antichains(p.n, leq_pairs(p))) == 20
    proper = {d for d in brute if p.bottom in d and p.top not in d}
    assert len(proper) == 18
    assert set(space.blocks) == proper


def test_downset_needs_two_elements_and_respects_caps():
    from dynlog import Poset

    with pytest.raises(TrivialLattice):
        downset_state_space(Poset(["*"], [[True]]))
    with pytest.raises(SizeCapExceeded):
        downset_state_space(cube(), max_states=5)
    assert len(downset_state_space(cube(), max_states=5, override=True)) == 18


@given(bounded_posets())
def test_downset_evaluations_are_bounded_morphisms(p):
    space = downset_state_space(p)
    brute = {d for d in oracles.all_downsets(p.names, leq_pairs(p)) if p.bottom in d and p.top not in d}
    assert set(space.blocks) == brute
    for h in space.eval:
        assert h[p.bottom] == 0 and h[p.top] == 1
        for a, b in leq_pairs(p):
            assert not (h[b] == 0 and h[a] == 1)
    assert oracles.full_set(p.names, leq_pairs(p), {(0, 0), (0, 1), (1, 1)}, space.eval)
    assert space.algebra.as_poset() == p


# -- ultrafilter spaces --------------------------------------------------------

def test_skyline_ultrafilters_match_states(skyline_algebra):
    space = ultrafilter_state_space(skyline_algebra)
    assert space.states == ("p", "q", "r")
    assert space.realize(skyline_algebra) == {"p": "s1", "q": "s2", "r": "s3"}


def test_small_boolean_algebras():
    assert len(ultrafilter_state_space(BOOL2.poset)) == 1
    assert ultrafilter_state_space(diamond().poset).states == ("a", "b")


def test_non_boolean_inputs():
    with pytest.raises(NotBoolean):
        ultrafilter_state_space(chain().poset)
    B = PropositionAlgebra(BOOL2, StateSet(("s1", "s2")), [(0, 0), (1, 0), (1, 1)])
    with pytest.raises(NotBoolean):
        ultrafilter_state_space(B)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_one_ultrafilter_per_atom(n):
    B = all_crisp_algebra(state_names(n))
    space = ultrafilter_state_space(B)
    p = B.as_poset()
    atoms = [a for a in range(p.n) if a != p.bottom
             and all(c in (p.bottom, a) for c in range(p.n) if p.leq[c, a])]
    assert len(space) == len(atoms) == n


# -- the apthbool bundle ---------------------------------------------------------

@pytest.fixture(scope="module")
def apthbool():
    from dynlog.textio import parse_propositions

    B = parse_propositions(bundles.path("apthbool", "propositions.txt").read_text())
    space = ultrafilter_state_space(B)
    emb = space.algebra
    T = parse_functors(bundles.path("apthbool", "functor.txt").read_text(), emb)["T"]
    C = subposet(emb, parse_subposet(bundles.path("apthbool", "subposet.txt").read_text()))
    return B, space, C, T


def test_apthbool_synthesis(apthbool):
    B, space, C, T = apthbool
    result = synthesize(C, T, space)
    a = relabel(result.automaton, space.realize(B), B.states)
    got = {x: {(s, t) for y, s, t in a.rel if y == x} for x in a.inputs}
    # literal evaluation of the induced relation on the five members of C
    mapping = space.realize(B)
    for x in ("x1", "x2"):
        brute = {(mapping[s], mapping[t]) for s, t in oracle_relation(C, T, x)}
        assert got[x] == brute
    assert got["x2"] == reference.R["x2"]
    # C cannot tell s3 apart from the x1-successors of s1 and s2
    assert got["x1"] == reference.R["x1"] | {("s1", "s3"), ("s2", "s3")}
    for x in ("x1", "x2"):
        rows = [result.extension.domain.position(m) for m in C.names]
        assert np.array_equal(result.extension.images[x][rows], T.images[x])


def test_apthbool_functor_preserves_meets(apthbool):
    _, _, C, T = apthbool
    assert check_meet_preserving(T, "x1")
    assert check_meet_preserving(T)
    emb = C.parent
    meet = np.minimum(emb["q'"].values, emb["p'"].values)
    assert tuple(meet) == emb["r"].values == T.image("x1", "r").values


def test_top_only_subposet_gives_total_relation():
    space = downset_state_space(diamond().poset)
    emb = space.algebra
    C, T = transport({"x": {"1": "1"}}, emb, ["1"])
    result = synthesize(C, T, space)
    assert len(result.automaton.rel) == len(space) ** 2


def test_bottom_only_subposet_gives_total_relation():
    space = downset_state_space(diamond().poset)
    C, P = transport({"x": {"0": "0"}}, space.algebra, ["0"], LOWER)
    result = synthesize_dual(C, P, space)
    assert len(result.automaton.rel) == len(space) ** 2


def counterexample_functor(B):
    C = subposet(B, ["0", "p", "q", "r'", "1"])
    T = TransitionFunctor.from_tables(UPPER, C, {"x": {"0": "0", "p": "p'", "q": "q'", "r'": "1", "1": "1"}})
    return C, T


def test_meet_preservation_counterexample(skyline_algebra):
    C, T = counterexample_functor(skyline_algebra)
    assert T.validation_error() is None
    res = check_meet_preserving(T)
    assert not res and res.witness == ("x", "p", "q")
    # exhaustive pair scan
    rows = dict(zip(C.names, oracles.rows(C)))
    img = dict(zip(C.names, oracles.rows_of(T, "x")))
    broken = []
    for y, z in itertools.combinations(C.names, 2):
        m = tuple(min(u, v) for u, v in zip(rows[y], rows[z]))
        k = next(n for n in C.names if rows[n] == m)
        if img[k] != tuple(min(u, v) for u, v in zip(img[y], img[z])):
            broken.append((y, z))
    assert broken == [("p", "q")]


def test_unit_must_be_preserved(skyline_algebra):
    C = subposet(skyline_algebra, ["0", "r", "1"])
    T = TransitionFunctor.from_tables(UPPER, C, {"x": {"0": "0", "r": "r", "1": "p'"}})
    res = check_meet_preserving(T)
    assert not res and res.witness == ("x", "1")


def test_meet_check_needs_closed_domain(skyline_algebra):
    C = subposet(skyline_algebra, ["p", "q", "1"])
    T = TransitionFunctor.from_tables(UPPER, C, {"x": {"p": "1", "q": "1", "1": "1"}})
    with pytest.raises(NotMeetClosed):
        check_meet_preserving(T)


def test_ultrafilter_synthesis_rejects_non_meet_preserving(skyline_algebra):
    space = ultrafilter_state_space(skyline_algebra)
    C, T = counterexample_functor(space.algebra)
    with pytest.raises(PreconditionFailed) as info:
        synthesize(C, T, space)
    assert info.value.reason == "NotMeetPreserving"


def test_downset_synthesis_accepts_monotone_functor(skyline_algebra):
    space = downset_state_space(skyline_algebra)
    C, T = counterexample_functor(space.algebra)
    result = synthesize(C, T, space)
    assert result.extension is not None


def test_synthesis_preconditions(skyline_algebra):
    space = downset_state_space(skyline_algebra)
    emb = space.algebra
    C = subposet(emb, ["0", "p", "1"])
    shrinking = TransitionFunctor.from_tables(UPPER, C, {"x": {"0": "1", "p": "0", "1": "1"}})
    with pytest.raises(PreconditionFailed) as info:
        synthesize(C, shrinking, space)
    assert info.value.reason == "NotMonotone"
    C = subposet(emb, ["0", "r", "1"])
    lowered = TransitionFunctor.from_tables(UPPER, C, {"x": {"0": "0", "r": "r", "1": "p'"}})
    with pytest.raises(PreconditionFailed) as info:
        synthesize(C, lowered, space)
    assert info.value.reason == "TopNotPreserved"
    C0 = subposet(emb, ["0", "p"], require="none")
    F = TransitionFunctor.from_tables(UPPER, C0, {"x": {"0": "0", "p": "p"}})
    with pytest.raises(MissingTop):
        synthesize(C0, F, space)


def test_extension_mismatch_on_an_incomplete_space():
    # Only two of the four down-sets of the diamond.  The family is still
    # full, but extending T needs every down-set, so a monotone T
    # that joins a and b up to 1 cannot be extended.
    from dynlog import CanonicalStateSpace

    L = diamond()
    ev = np.array([[0, 0, 1, 1], [0, 1, 0, 1]])
    space = CanonicalStateSpace(DOWNSET, L.poset, ("D[a]", "D[b]"), (frozenset({0, 1}), frozenset({0, 2})), ev)
    C = subposet(space.algebra, ["0", "a", "b", "1"])
    T = TransitionFunctor.from_tables(UPPER, C, {"x": {"0": "0", "a": "1", "b": "1", "1": "1"}})
    assert T.validation_error() is None
    assert oracle_relation(C, T, "x") == set()
    with pytest.raises(ExtensionMismatch) as info:
        synthesize(C, T, space)
    assert (info.value.member, info.value.label) == ("0", "x")


def test_dual_on_full_algebra_recovers_fibres(skyline, skyline_algebra):
    space = ultrafilter_state_space(skyline_algebra)
    emb = space.algebra
    names = list(emb.names)
    C, P = transport(reference.LOWER, emb, names, LOWER)
    result = synthesize_dual(C, P, space)
    a = relabel(result.automaton, space.realize(skyline_algebra), skyline_algebra.states)
    assert a == skyline


def test_dual_on_join_closed_subposet(skyline_algebra):
    space = ultrafilter_state_space(skyline_algebra)
    emb = space.algebra
    names = ["0", "p", "q", "r'", "1"]
    C, P = transport(reference.LOWER, emb, names, LOWER)
    assert check_join_preserving(P)
    result = synthesize_dual(C, P, space)
    mapping = space.realize(skyline_algebra)
    for x in P.labels:
        brute = oracle_relation(C, P, x, upper=False)
        got = {(s, t) for y, s, t in result.automaton.rel if y == x}
        assert got == brute
        assert {(mapping[s], mapping[t]) for s, t in got} >= reference.R[x]
        rows = [result.extension.domain.position(m) for m in names]
        assert np.array_equal(result.extension.images[x][rows], P.images[x])


def test_dual_over_ultrafilters_needs_join_closed(skyline_algebra):
    space = ultrafilter_state_space(skyline_algebra)
    C, P = transport(reference.LOWER, space.algebra, ["0", "p", "q", "1"], LOWER)
    with pytest.raises(PreconditionFailed) as info:
        synthesize_dual(C, P, space)
    assert info.value.reason == "NotJoinClosed"


# -- round-trip properties -----------------------------------------------------

@st.composite
def monotone_functor_on(draw, emb, direction=UPPER):
    """Random C of ``emb`` with the unit, and a random monotone unit-preserving map."""
    unit = "1" if direction == UPPER else "0"
    names = sorted(set(draw(st.lists(st.sampled_from(emb.names)))) | {unit}, key=emb.names.index)
    C = subposet(emb, names, require="top" if direction == UPPER else "bottom")
    order = C.pointwise_order
    n = len(emb.states)
    images = {}
    # visit members bottom-up (upper) or top-down (lower) so bounds are known
    visit = sorted(range(len(C)), key=lambda i: order[:, i].sum() if direction == UPPER else order[i].sum())
    for i in visit:
        bits = np.array(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
        if C.names[i] == unit:
            row = np.full(n, 1 if direction == UPPER else 0)
        elif direction == UPPER:
            below = [images[j] for j in images if order[j, i]]
            row = np.maximum.reduce(below + [bits]) if below else bits
        else:
            above = [images[j] for j in images if order[i, j]]
            row = np.minimum.reduce(above + [bits]) if above else bits
        images[i] = row
    table = np.array([images[i] for i in range(len(C))])
    return C, TransitionFunctor(direction, C, {"x": table})


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_extension_agrees_over_downset_spaces(data):
    p = data.draw(bounded_posets(max_inner=4))
    space = downset_state_space(p)
    C, T = data.draw(monotone_functor_on(space.algebra))
    result = synthesize(C, T, space)
    rows = [result.extension.domain.position(m) for m in C.names]
    assert np.array_equal(result.extension.images["x"][rows], T.images["x"])
    assert {(s, t) for _, s, t in result.automaton.rel} == oracle_relation(C, T, "x")


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_dual_extension_agrees_over_downset_spaces(data):
    p = data.draw(bounded_posets(max_inner=4))
    space = downset_state_space(p)
    C, P = data.draw(monotone_functor_on(space.algebra, LOWER))
    result = synthesize_dual(C, P, space)
    rows = [result.extension.domain.position(m) for m in C.names]
    assert np.array_equal(result.extension.images["x"][rows], P.images["x"])


@st.composite
def ground_truth(draw, max_states=4):
    n = draw(st.integers(1, max_states))
    states = state_names(n)
    rel = draw(st.sets(st.tuples(st.sampled_from(states), st.sampled_from(states))))
    B = all_crisp_algebra(states)
    keep = set(draw(st.lists(st.sampled_from(B.names)))) | {B.names[-1]}
    m = {name: np.array(B[name].values) for name in B.names}
    while True:
        extra = {B.name_of(np.minimum(m[a], m[b])) for a in keep for b in keep} - keep
        if not extra:
            break
        keep |= extra
    return B, TransitionFrame(B.states, rel), sorted(keep, key=B.names.index)


@settings(max_examples=80, deadline=None)
@given(ground_truth())
def test_ground_truth_round_trip_over_ultrafilters(inst):
    B, frame, chosen = inst
    space = ultrafilter_state_space(B)
    T_full = upper_functor_from_frame(frame, B)
    table = {"x": {m: B.name_of(T_full.image("_", m).values) for m in chosen}}
    C, T = transport(table, space.algebra, chosen)
    result = synthesize(C, T, space)
    rows = [result.extension.domain.position(m) for m in chosen]
    assert np.array_equal(result.extension.images["x"][rows], T.images["x"])
    mapping = space.realize(B)
    got = {(mapping[s], mapping[t]) for _, s, t in result.automaton.rel}
    assert frame.rel <= got
    if len(chosen) == len(B):
        assert got == frame.rel


@settings(max_examples=60, deadline=None)
@given(ground_truth())
def test_dual_ground_truth_round_trip_over_ultrafilters(inst):
    B, frame, chosen = inst
    # the dual needs a join-closed C with bottom: take complements of a meet-closed C
    m = {name: np.array(B[name].values) for name in B.names}
    dual = sorted({B.name_of(1 - m[c]) for c in chosen}, key=B.names.index)
    space = ultrafilter_state_space(B)
    P_full = lower_functor_from_frame(frame, B)
    table = {"x": {a: B.name_of(P_full.image("_", a).values) for a in dual}}
    C, P = transport(table, space.algebra, dual, LOWER)
    result = synthesize_dual(C, P, space)
    rows = [result.extension.domain.position(a) for a in dual]
    assert np.array_equal(result.extension.images["x"][rows], P.images["x"])
