"""Building automata back from functors.

Two parts.  First the canonical state spaces: down-sets of a bounded poset
and ultrafilters of a Boolean algebra.  Then synthesis, where an upper
functor known only on part of the algebra induces an automaton on the
canonical states.

Run with ``python demos/synthesis.py``.
"""
from dynlog import (
    UPPER,
    TransitionFunctor,
    bundles,
    diamond,
    downset_state_space,
    labelled_functors,
    subposet,
    synthesize,
    ultrafilter_state_space,
)
from dynlog.automaton import relabel
from dynlog.errors import DynlogError
from dynlog.textio import parse_automaton, parse_propositions, parse_subposet


def show_space(title, space):
    print(f"{title}: {len(space)} states")
    for name, block in zip(space.states, space.blocks):
        members = sorted(space.base.names[i] for i in block)
        print(f"  {name:>4}  {{{', '.join(members)}}}")


def tables(F, names):
    """``{label: {member: image name}}`` with images named in ``names``."""
    return {x: {m: names.name_of(F.image(x, m).values) for m in F.domain.names} for x in F.labels}


if __name__ == "__main__":
    show_space("down-sets of the diamond", downset_state_space(diamond().poset))

    a = parse_automaton(bundles.path("skyline", "automaton.txt").read_text())
    B = parse_propositions(bundles.path("skyline", "propositions.txt").read_text())
    space = ultrafilter_state_space(B)
    show_space("\nultrafilters of the skyline algebra", space)

    # the full upper functor rebuilds the automaton up to renaming states
    T, _ = labelled_functors(a, B)
    full = subposet(space.algebra, B.names)
    result = synthesize(full, TransitionFunctor.from_tables(UPPER, full, tables(T, B)), space)
    names = space.realize(B)
    rebuilt = relabel(result.automaton, names, B.states)
    print("\ncanonical states realized as", names)
    print("rebuilt automaton equals the original:", rebuilt == a)

    # a functor known only on a meet-closed part of the algebra
    members = parse_subposet(bundles.path("apthbool", "subposet.txt").read_text())
    C = subposet(space.algebra, members)
    known = tables(T.restrict(subposet(B, members)), B)
    partial = TransitionFunctor.from_tables(UPPER, C, known)
    result = synthesize(C, partial, space)
    rebuilt = relabel(result.automaton, names, B.states)
    print(f"\nsynthesis from {', '.join(members)}")
    for x in rebuilt.inputs:
        pairs = sorted((s, t) for y, s, t in rebuilt.rel if y == x)
        print(f"  {x}: {pairs}")
    print("  (fewer known propositions can only add transitions)")

    # T(0) above T(r) breaks monotonicity, so no automaton can produce it
    known["x2"]["r"] = "0"
    try:
        synthesize(C, TransitionFunctor.from_tables(UPPER, C, known), space)
        print("\nunexpected: tampered functor accepted")
    except DynlogError as exc:
        print(f"\ntampered functor rejected: {type(exc).__name__}: {exc}")
