"""Propositions with more than two truth values.

Truth values come from the three-element chain ``0 < m < 1``.  A few graded
propositions over a two-state automaton are pushed through the functors,
and we compare recovery against the algebra that also holds every crisp
table.

Run with ``python demos/lattice_truth.py``.
"""
from dynlog import (
    Automaton,
    PropositionAlgebra,
    StateSet,
    all_crisp_algebra,
    chain,
    check_adjunction,
    labelled_functors,
    recover,
)

L = chain()
S = StateSet(("u", "v"))


def algebra(rows, names):
    return PropositionAlgebra(L, S, [tuple(L.index(v) for v in row) for row in rows], names)


if __name__ == "__main__":
    a = Automaton.from_fibres(S, {"go": [("u", "v"), ("v", "v")], "stay": [("u", "u")]})
    graded = algebra(
        [("0", "0"), ("m", "0"), ("m", "m"), ("1", "m"), ("1", "1")],
        ["bot", "faint", "half", "mostly", "top"],
    )
    print("truth values:", " < ".join(L.names))
    print("meet table of the chain:\n", L.meet_table)

    T, P = labelled_functors(a, graded)
    for x in T.labels:
        row = {m: "".join(T.image(x, m).render()) for m in graded.names}
        print(f"T_{x}:", row)
    print("adjunction holds:", bool(check_adjunction(P, T)))

    # every graded member is at least as true at u as at v, so nothing rules
    # out a "go" step into u
    rep = recover(a, graded)
    print("\nrecovered from the graded algebra:", rep.overall)
    for x, lab in rep.per_label.items():
        print(f"  {x}: upper {sorted(lab.induced_upper.rel)}")

    rep = recover(a, all_crisp_algebra(S, L))
    print(f"recovered from the crisp algebra: {rep.overall} (all crisp: {rep.all_crisp})")
