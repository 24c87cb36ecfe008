"""Transition functors of a small three-state automaton.

Loads the bundled ``skyline`` automaton together with its eight-member
Boolean algebra of propositions, prints both labelled functors, and shows
that the transition relation can be read back from either of them.

Run with ``python demos/shuttle_functors.py``.
"""
from dynlog import bundles, check_adjunction, check_recovery_witnesses, labelled_functors, recover
from dynlog.automaton import fibre
from dynlog.textio import parse_automaton, parse_propositions


def load():
    a = parse_automaton(bundles.path("skyline", "automaton.txt").read_text())
    B = parse_propositions(bundles.path("skyline", "propositions.txt").read_text())
    return a, B


def show_functor(F, B):
    for x in F.labels:
        print(f"  label {x}")
        for m in B.names:
            print(f"    {m:>2} -> {B.name_of(F.image(x, m).values)}")


if __name__ == "__main__":
    a, B = load()
    print("states:", " ".join(a.states.names))
    print("members:", " ".join(B.names))

    T, P = labelled_functors(a, B)
    print("\nupper functor T (meet over successors)")
    show_functor(T, B)
    print("\nlower functor P (join over predecessors)")
    show_functor(P, B)

    # P and T are adjoint label by label: P(a) <= b exactly when a <= T(b)
    print("\nadjunction holds:", bool(check_adjunction(P, T)))

    for x in a.inputs:
        rep = check_recovery_witnesses(fibre(a, x), B)
        sample = sorted(rep.witnesses["upper"].items())[:2]
        print(f"witnesses for {x}: upper ok={rep.upper_ok}, lower ok={rep.lower_ok}, e.g. {sample}")

    report = recover(a, B)
    print("\nrecovered from both sides:", report.overall)
    for x, lab in report.per_label.items():
        pairs = sorted(lab.induced_upper.rel)
        print(f"  {x}: {pairs}")
