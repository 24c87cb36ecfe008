import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dynlog import (
    BOOL2,
    Proposition,
    PropositionAlgebra,
    StateSet,
    all_crisp_algebra,
    chain,
    contains_all_crisp,
    meet_closed_subposet,
    pointwise_leq,
    subposet,
)
from dynlog.errors import CarrierMismatch, DynlogError, MissingBottom, MissingTop, NotMeetClosed, UnknownState

from strategies import algebras

S3 = StateSet(("s1", "s2", "s3"))


def prop(*bits, lattice=BOOL2, states=S3):
    return Proposition(states, lattice, bits)


def test_incomparable_atoms_and_coatoms():
    p, p_ = prop(1, 0, 0), prop(0, 1, 1)
    assert not pointwise_leq(p, p_)
    assert not pointwise_leq(p_, p)


def test_bottom_below_everything(skyline_algebra):
    zero = skyline_algebra["0"]
    assert all(pointwise_leq(zero, m) for m in skyline_algebra.members)


def test_r_below_p_prime(skyline_algebra):
    assert skyline_algebra["r"] <= skyline_algebra["p'"]
    assert prop(0, 0, 1) <= prop(0, 1, 1)


def test_leq_rejects_mixed_carriers():
    with pytest.raises(CarrierMismatch):
        pointwise_leq(prop(0, 0, 1), prop(0, 1, 1, lattice=chain()))
    with pytest.raises(CarrierMismatch):
        pointwise_leq(prop(0, 0, 1), Proposition(StateSet(("a", "b", "c")), BOOL2, (0, 0, 1)))


def test_proposition_from_mapping():
    m = Proposition.from_mapping(S3, chain(), {"s1": "0", "s2": "m", "s3": "1"})
    assert m("s2") == "m" and m.values == (0, 1, 2)
    with pytest.raises(CarrierMismatch):
        Proposition.from_mapping(S3, BOOL2, {"s1": "0"})
    with pytest.raises(UnknownState):
        Proposition.from_mapping(S3, BOOL2, {"s1": "0", "s2": "0", "s3": "0", "s4": "1"})


def test_skyline_algebra_is_all_crisp(skyline_algebra):
    assert contains_all_crisp(skyline_algebra)
    assert len(skyline_algebra) == 8
    expected = {"0": (0, 0, 0), "p": (1, 0, 0), "q": (0, 1, 0), "r": (0, 0, 1),
                "p'": (0, 1, 1), "q'": (1, 0, 1), "r'": (1, 1, 0), "1": (1, 1, 1)}
    assert {n: skyline_algebra[n].values for n in skyline_algebra.names} == expected


def test_constants_only_lack_crisp_tuples():
    B = PropositionAlgebra(BOOL2, StateSet(("s1", "s2")), [(0, 0), (1, 1)])
    assert not contains_all_crisp(B)


def test_crisp_tuples_over_three_chain():
    L = chain()
    rows = [(L.bottom, L.bottom), (L.top, L.top), (0, 2), (2, 0)]
    B = PropositionAlgebra(L, StateSet(("s1", "s2")), rows)
    brute = list(itertools.product((L.bottom, L.top), repeat=2))
    assert all(B.find(t) is not None for t in brute)
    assert contains_all_crisp(B)
    assert not contains_all_crisp(PropositionAlgebra(L, B.states, rows[:3]))


def test_algebra_needs_bounds_and_no_duplicates():
    states = StateSet(("s1", "s2"))
    with pytest.raises(MissingBottom):
        PropositionAlgebra(BOOL2, states, [(1, 1), (1, 0)])
    with pytest.raises(MissingTop):
        PropositionAlgebra(BOOL2, states, [(0, 0), (1, 0)])
    with pytest.raises(DynlogError):
        PropositionAlgebra(BOOL2, states, [(0, 0), (1, 0), (1, 0), (1, 1)])


def test_unnamed_members_get_tuple_names():
    B = PropositionAlgebra(BOOL2, StateSet(("s1", "s2")), [(0, 0), (1, 0), (1, 1)])
    assert B.names == ("(0,0)", "(1,0)", "(1,1)")


def test_apthbool_subposet_is_meet_closed(skyline_algebra):
    C = meet_closed_subposet(skyline_algebra, ["0", "r", "p'", "q'", "1"])
    assert C.meet_closed
    meet = np.minimum(skyline_algebra["p'"].values, skyline_algebra["q'"].values)
    assert tuple(meet) == skyline_algebra["r"].values


def test_top_alone_is_meet_closed(skyline_algebra):
    assert meet_closed_subposet(skyline_algebra, ["1"]).names == ("1",)


def test_atoms_without_bottom_are_not_meet_closed(skyline_algebra):
    with pytest.raises(NotMeetClosed) as info:
        meet_closed_subposet(skyline_algebra, ["p", "q", "1"])
    assert set(info.value.pair) == {"p", "q"}
    with pytest.raises(MissingTop):
        meet_closed_subposet(skyline_algebra, ["0", "p"])


def test_subposet_requirements(skyline_algebra):
    assert subposet(skyline_algebra, ["0", "p"], require="bottom").has_bottom
    assert subposet(skyline_algebra, ["p"], require="none").names == ("p",)
    with pytest.raises(MissingBottom):
        subposet(skyline_algebra, ["p", "1"], require="bottom")


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_all_crisp_algebra_is_boolean(n):
    B = all_crisp_algebra([f"s{i}" for i in range(n)])
    assert len(B) == 2 ** n
    order = B.pointwise_order
    # bounded: constant-0 below all, constant-1 above all
    assert order[B.position(B.bottom)].all() and order[:, B.position(B.top)].all()
    assert B.meet_closure_witness() is None and B.join_closure_witness() is None
    for row in B.matrix:
        assert B.find(1 - row) is not None


@given(algebras())
def test_pointwise_order_is_bounded_partial_order(B):
    order = B.pointwise_order
    assert order.diagonal().all()
    assert np.array_equal(order & order.T, np.eye(len(B), dtype=bool))
    assert ((order.astype(int) @ order.astype(int) > 0) <= order).all()
    assert order[B.position(B.bottom)].all() and order[:, B.position(B.top)].all()


@given(algebras(), st.data())
def test_pointwise_leq_matches_definition(B, data):
    i = data.draw(st.integers(0, len(B) - 1))
    j = data.draw(st.integers(0, len(B) - 1))
    p, q = B.members[i], B.members[j]
    brute = all(B.lattice.leq[a, b] for a, b in zip(p.values, q.values))
    assert pointwise_leq(p, q) == brute == bool(B.pointwise_order[i, j])
