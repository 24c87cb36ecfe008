import pytest
from hypothesis import given

from dynlog import Automaton, StateSet, TransitionFrame, fibre, is_deterministic, predecessors, successors, to_dot
from dynlog.automaton import relabel
from dynlog.errors import UnknownInput, UnknownState

from strategies import automata, state_names

R_X1 = {("s1", "s2"), ("s2", "s1"), ("s3", "s3")}
R_X2 = {("s2", "s3"), ("s3", "s3")}


def test_skyline_fibres(skyline):
    assert fibre(skyline, "x1").rel == R_X1
    assert fibre(skyline, "x2").rel == R_X2


def test_unused_label_has_empty_fibre():
    a = Automaton(("x1", "x2"), StateSet(("s1",)), frozenset({("x1", "s1", "s1")}))
    assert fibre(a, "x2").rel == frozenset()
    with pytest.raises(UnknownInput):
        fibre(a, "x3")


def test_determinism(skyline):
    # every (input, source) pair occurs at most once among the five triples
    heads = [(x, s) for x, s, _ in skyline.rel]
    assert len(heads) == len(set(heads)) == 5
    assert is_deterministic(skyline)
    grown = Automaton(skyline.inputs, skyline.states, skyline.rel | {("x2", "s2", "s1")})
    assert not is_deterministic(grown)
    assert is_deterministic(Automaton(("x",), StateSet(("s",)), frozenset()))


def test_successors_and_predecessors(skyline):
    f = fibre(skyline, "x2")
    assert successors(f, "s1") == frozenset()
    assert predecessors(f, "s3") == {"s2", "s3"}
    ident = TransitionFrame(skyline.states, frozenset((s, s) for s in skyline.states))
    assert all(successors(ident, s) == {s} for s in skyline.states)
    with pytest.raises(UnknownState):
        successors(f, "s9")


def test_transitions_must_use_declared_names():
    with pytest.raises(UnknownState):
        Automaton(("x",), StateSet(("s1",)), frozenset({("x", "s1", "s2")}))
    with pytest.raises(UnknownInput):
        Automaton(("x",), StateSet(("s1",)), frozenset({("y", "s1", "s1")}))


def test_skyline_dot(skyline):
    expected = (
        'digraph "automaton" {\n'
        '  "s1";\n  "s2";\n  "s3";\n'
        '  "s1" -> "s2" [label="x1"];\n'
        '  "s2" -> "s1" [label="x1"];\n'
        '  "s3" -> "s3" [label="x1"];\n'
        '  "s2" -> "s3" [label="x2"];\n'
        '  "s3" -> "s3" [label="x2"];\n'
        "}\n"
    )
    assert to_dot(skyline) == expected


def test_relabel_round_trip(skyline):
    forward = {"s1": "T1", "s2": "T2", "s3": "shed"}
    back = {v: k for k, v in forward.items()}
    moved = relabel(skyline, forward)
    assert moved.states.names == ("T1", "T2", "shed")
    assert relabel(moved, back) == skyline


@given(automata(state_names(3), max_inputs=3))
def test_fibres_partition_the_triples(a):
    pieces = [{(x, s, t) for s, t in fibre(a, x).rel} for x in a.inputs]
    assert set().union(*pieces) == a.rel
    assert sum(len(p) for p in pieces) == len(a.rel)


@given(automata(state_names(4)))
def test_successors_predecessors_are_adjoint(a):
    for x in a.inputs:
        f = fibre(a, x)
        for s in a.states:
            for t in a.states:
                assert (t in successors(f, s)) == (s in predecessors(f, t))
