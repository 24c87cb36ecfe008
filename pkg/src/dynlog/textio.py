"""Line-based text formats for lattices, propositions, automata and functors.

Every format is UTF-8, one directive per line, ``#`` starts a comment::

    # lattice / poset
    elements: 0 m 1
    cover: 0 m
    cover: m 1

    # propositions (values are lattice element names)
    states: s1 s2 s3
    prop p = s1:1 s2:0 s3:0
    algebra: 0 p ALL_CRISP

    # automaton
    inputs: x1 x2
    states: s1 s2 s3
    trans: x1 s1 s2

    # functors; an image is a member name or a full value table
    functor T upper
    label x1: p -> q
    label x2: 0 -> s1:1 s2:0 s3:0

    # subposet of an algebra
    subposet: 0 r p' q' 1

``BOOL2`` names the built-in two-element lattice wherever a lattice file
is expected.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .automaton import Automaton
from .dynamics import LOWER, UPPER, TransitionFunctor
from .errors import DynlogError, ParseError, ValidationError
from .order import BOOL2, Poset, TruthLattice, as_complete_lattice, build_poset
from .propositions import PropositionAlgebra, StateSet, Subposet, crisp_tuples

__all__ = [
    "parse_poset",
    "parse_lattice",
    "load_lattice",
    "format_poset",
    "parse_propositions",
    "format_propositions",
    "parse_automaton",
    "format_automaton",
    "parse_functors",
    "format_functor",
    "parse_subposet",
    "format_subposet",
    "detect_kind",
    "Workspace",
    "parse_workspace",
]


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _directive(line: str):
    head, sep, rest = line.partition(":")
    if not sep or " " in head.strip():
        return None, line
    return head.strip(), rest.strip()


def _wrap(exc: DynlogError, path, line=None):
    return ValidationError(str(exc), path, line)


# -- posets and lattices ------------------------------------------------------

def parse_poset(text: str, path=None) -> Poset:
    elements, covers = None, []
    for no, line in _lines(text):
        key, rest = _directive(line)
        if key == "elements":
            if elements is not None:
                raise ParseError("duplicate 'elements' line", path, no)
            elements = rest.split()
        elif key == "cover":
            pair = rest.split()
            if len(pair) != 2:
                raise ParseError("cover needs exactly two elements", path, no)
            if elements is None:
                raise ParseError("'cover' before 'elements'", path, no)
            for x in pair:
                if x not in elements:
                    raise ValidationError(f"undeclared element {x!r}", path, no)
            covers.append(tuple(pair))
        else:
            raise ParseError(f"unexpected line {line!r}", path, no)
    if not elements:
        raise ParseError("missing 'elements' line", path)
    try:
        return build_poset(elements, covers)
    except DynlogError as exc:
        raise _wrap(exc, path) from exc


def parse_lattice(text: str, path=None) -> TruthLattice:
    p = parse_poset(text, path)
    try:
        return as_complete_lattice(p)
    except DynlogError as exc:
        raise _wrap(exc, path) from exc


def load_lattice(spec: str | Path | None) -> TruthLattice:
    """``None`` or ``"BOOL2"`` gives the two-element lattice, anything else is a path."""
    if spec is None or str(spec) == "BOOL2":
        return BOOL2
    path = Path(spec)
    return parse_lattice(path.read_text(encoding="utf-8"), str(path))


def format_poset(p: Poset | TruthLattice) -> str:
    if isinstance(p, TruthLattice):
        p = p.poset
    lines = ["elements: " + " ".join(p.names)]
    lines += [f"cover: {lo} {hi}" for lo, hi in p.covers]
    return "\n".join(lines) + "\n"


# -- propositions -----------------------------------------------------------

def parse_propositions(text: str, lattice: TruthLattice = BOOL2, path=None) -> PropositionAlgebra:
    states = None
    props: dict[str, tuple] = {}
    algebra = None
    algebra_line = None
    for no, line in _lines(text):
        if line.startswith("prop "):
            name, eq, table = line[5:].partition("=")
            name = name.strip()
            if not eq or not name or " " in name:
                raise ParseError("expected 'prop <name> = s:<elem> ...'", path, no)
            if states is None:
                raise ParseError("'prop' before 'states'", path, no)
            if name in props:
                raise ValidationError(f"duplicate proposition {name!r}", path, no)
            props[name] = _parse_table(table.split(), states, lattice, path, no)
            continue
        key, rest = _directive(line)
        if key == "states":
            if states is not None:
                raise ParseError("duplicate 'states' line", path, no)
            try:
                states = StateSet(tuple(rest.split()))
            except DynlogError as exc:
                raise _wrap(exc, path, no) from exc
        elif key == "algebra":
            algebra, algebra_line = rest.split(), no
        else:
            raise ParseError(f"unexpected line {line!r}", path, no)
    if states is None:
        raise ParseError("missing 'states' line", path)

    rows, names = [], []
    seen = set()

    def add(name, row, no):
        if row in seen:
            raise ValidationError(f"duplicate member table for {name!r}", path, no)
        seen.add(row)
        rows.append(row)
        names.append(name)

    if algebra is None:
        for name, row in props.items():
            add(name, row, None)
    else:
        by_row = {}
        for name, row in props.items():
            by_row.setdefault(row, name)
        for token in algebra:
            if token == "ALL_CRISP":
                crisp = set(crisp_tuples(lattice, len(states)))
                order = [row for row in props.values() if row in crisp]
                order += [row for row in _crisp_order(lattice, len(states)) if row not in order]
                for row in order:
                    if row not in seen:
                        add(by_row.get(row), row, algebra_line)
            elif token in props:
                add(token, props[token], algebra_line)
            else:
                raise ValidationError(f"unknown proposition {token!r} in algebra", path, algebra_line)
    try:
        return PropositionAlgebra(lattice, states, rows, names)
    except DynlogError as exc:
        raise _wrap(exc, path, algebra_line) from exc


def _crisp_order(lattice, n):
    rows = crisp_tuples(lattice, n)
    return sorted(rows, key=lambda t: (sum(v == lattice.top for v in t), [v != lattice.top for v in t]))


def _parse_table(tokens, states, lattice, path, no) -> tuple:
    values = {}
    for tok in tokens:
        s, sep, e = tok.partition(":")
        if not sep:
            raise ParseError(f"expected state:element, got {tok!r}", path, no)
        if s not in states:
            raise ValidationError(f"unknown state {s!r}", path, no)
        if s in values:
            raise ValidationError(f"state {s!r} given twice", path, no)
        try:
            values[s] = lattice.index(e)
        except DynlogError as exc:
            raise _wrap(exc, path, no) from exc
    missing = [s for s in states if s not in values]
    if missing:
        raise ValidationError(f"no value for state(s) {missing}", path, no)
    return tuple(values[s] for s in states)


def _render_row(states, lattice, row) -> str:
    return " ".join(f"{s}:{lattice.names[v]}" for s, v in zip(states, row))


def format_propositions(B: PropositionAlgebra) -> str:
    lines = ["states: " + " ".join(B.states)]
    for name, row in zip(B.names, B.matrix):
        lines.append(f"prop {name} = {_render_row(B.states, B.lattice, row)}")
    lines.append("algebra: " + " ".join(B.names))
    return "\n".join(lines) + "\n"


# -- automata ---------------------------------------------------------------

_REJECTED = {"initial", "final", "accept", "accepting", "start", "output", "outputs"}


def parse_automaton(text: str, path=None) -> Automaton:
    inputs = states = None
    triples = []
    for no, line in _lines(text):
        key, rest = _directive(line)
        if key in _REJECTED:
            raise ValidationError(f"'{key}' is not supported: automata here are plain acceptors without initial or final states", path, no)
        if key == "inputs":
            inputs = tuple(rest.split())
        elif key == "states":
            try:
                states = StateSet(tuple(rest.split()))
            except DynlogError as exc:
                raise _wrap(exc, path, no) from exc
        elif key == "trans":
            parts = rest.split()
            if len(parts) != 3:
                raise ParseError("expected 'trans: <input> <from> <to>'", path, no)
            if inputs is None or states is None:
                raise ParseError("'trans' before 'inputs' and 'states'", path, no)
            x, s, t = parts
            if x not in inputs:
                raise ValidationError(f"undeclared input {x!r}", path, no)
            for y in (s, t):
                if y not in states:
                    raise ValidationError(f"undeclared state {y!r}", path, no)
            triples.append((x, s, t))
        else:
            raise ParseError(f"unexpected line {line!r}", path, no)
    if inputs is None or states is None:
        raise ParseError("automaton needs 'inputs' and 'states' lines", path)
    try:
        return Automaton(inputs, states, frozenset(triples))
    except DynlogError as exc:
        raise _wrap(exc, path) from exc


def format_automaton(a: Automaton) -> str:
    lines = ["inputs: " + " ".join(a.inputs), "states: " + " ".join(a.states)]
    lines += [f"trans: {x} {s} {t}" for x, s, t in a.sorted_triples()]
    return "\n".join(lines) + "\n"


# -- functors ---------------------------------------------------------------

def parse_functors(text: str, algebra: PropositionAlgebra, path=None) -> dict[str, TransitionFunctor]:
    """Parse one or more functor blocks whose members live in ``algebra``.

    The domain of each functor is the set of members listed for its labels;
    every label must list the same members.
    """
    blocks: list[list] = []
    for no, line in _lines(text):
        if line.startswith("functor "):
            parts = line.split()
            if len(parts) != 3 or parts[2] not in (UPPER, LOWER):
                raise ParseError("expected 'functor <name> upper|lower'", path, no)
            blocks.append([parts[1], parts[2], no, {}])
            continue
        if line.startswith("label "):
            if not blocks:
                raise ParseError("'label' before 'functor'", path, no)
            head, sep, body = line[6:].partition(":")
            lhs, arrow, rhs = body.partition("->")
            label, member, image = head.strip(), lhs.strip(), rhs.split()
            if not sep or not arrow or not label or not member or not image:
                raise ParseError("expected 'label <x>: <prop> -> <image>'", path, no)
            if member not in algebra:
                raise ValidationError(f"unknown proposition {member!r}", path, no)
            if len(image) == 1 and image[0] in algebra:
                row = tuple(int(v) for v in algebra[image[0]].values)
            else:
                row = _parse_table(image, algebra.states, algebra.lattice, path, no)
            table = blocks[-1][3].setdefault(label, {})
            if member in table:
                raise ValidationError(f"label {label!r}: {member!r} given twice", path, no)
            table[member] = (row, no)
            continue
        raise ParseError(f"unexpected line {line!r}", path, no)

    out = {}
    for name, direction, no, tables in blocks:
        if name in out:
            raise ValidationError(f"duplicate functor {name!r}", path, no)
        if not tables:
            raise ValidationError(f"functor {name!r} has no labels", path, no)
        domains = {x: frozenset(t) for x, t in tables.items()}
        first = next(iter(domains.values()))
        for x, d in domains.items():
            if d != first:
                raise ValidationError(f"functor {name!r}: label {x!r} covers different members", path, no)
        positions = sorted(algebra.position(m) for m in first)
        domain = algebra if len(positions) == len(algebra) else Subposet(algebra, positions)
        images = {}
        for x, t in tables.items():
            images[x] = np.array([t[m][0] for m in domain.names], dtype=np.intp)
        out[name] = TransitionFunctor(direction, domain, images)
    return out


def format_functor(F: TransitionFunctor, name: str, names_from: PropositionAlgebra | None = None) -> str:
    """Render ``F`` in the functor format; images are named when ``names_from`` has them."""
    pool = names_from or getattr(F.domain, "parent", None) or F.domain
    lines = [f"functor {name} {F.direction}"]
    for x in F.labels:
        for member, row in zip(F.domain.names, F.images[x]):
            shown = pool.name_of(row) if pool.states == F.states else None
            if shown is None:
                shown = _render_row(F.states, F.lattice, row)
            lines.append(f"label {x}: {member} -> {shown}")
    return "\n".join(lines) + "\n"


# -- subposets --------------------------------------------------------------

def parse_subposet(text: str, path=None) -> list[str]:
    members = None
    for no, line in _lines(text):
        key, rest = _directive(line)
        if key != "subposet" or members is not None:
            raise ParseError(f"unexpected line {line!r}", path, no)
        members = rest.split()
    if members is None:
        raise ParseError("missing 'subposet' line", path)
    return members


def format_subposet(C) -> str:
    return "subposet: " + " ".join(C.names) + "\n"


# -- workspaces -------------------------------------------------------------

def detect_kind(text: str) -> str:
    """One of ``lattice``, ``propositions``, ``automaton``, ``functor``, ``subposet``."""
    keys = set()
    for _, line in _lines(text):
        if line.startswith("functor "):
            return "functor"
        if line.startswith("prop "):
            keys.add("prop")
            continue
        key, _ = _directive(line)
        if key:
            keys.add(key)
    if "elements" in keys:
        return "lattice"
    if "inputs" in keys:
        return "automaton"
    if "subposet" in keys:
        return "subposet"
    if "states" in keys:
        return "propositions"
    raise ParseError("cannot tell what kind of file this is")


@dataclass
class Workspace:
    lattice: TruthLattice = BOOL2
    algebra: PropositionAlgebra | None = None
    automaton: Automaton | None = None
    functors: dict = field(default_factory=dict)
    subposet: list | None = None
    options: dict = field(default_factory=dict)


def parse_workspace(files, lattice: str | Path | None = None, **options) -> Workspace:
    """Read and cross-validate a set of files, whatever order they come in."""
    texts = {}
    for f in files:
        path = Path(f)
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise ParseError(f"cannot read file: {exc}", str(path)) from exc
        try:
            kind = detect_kind(text)
        except ParseError as exc:
            raise ParseError(str(exc), str(path)) from exc
        texts.setdefault(kind, []).append((str(path), text))

    for kind in texts:
        if kind != "functor" and len(texts[kind]) > 1:
            raise ValidationError(f"more than one {kind} file given", texts[kind][1][0])

    ws = Workspace(options=dict(options))
    if "lattice" in texts:
        if lattice is not None:
            raise ValidationError("lattice given both as option and as file")
        path, text = texts["lattice"][0]
        ws.lattice = parse_lattice(text, path)
    else:
        ws.lattice = load_lattice(lattice)
    if "propositions" in texts:
        path, text = texts["propositions"][0]
        ws.algebra = parse_propositions(text, ws.lattice, path)
    if "automaton" in texts:
        path, text = texts["automaton"][0]
        ws.automaton = parse_automaton(text, path)
        if ws.algebra is not None and ws.algebra.states != ws.automaton.states:
            raise ValidationError("automaton and propositions declare different states", path)
    if "subposet" in texts:
        path, text = texts["subposet"][0]
        ws.subposet = parse_subposet(text, path)
        if ws.algebra is not None:
            for m in ws.subposet:
                if m not in ws.algebra:
                    raise ValidationError(f"unknown proposition {m!r} in subposet", path)
    for path, text in texts.get("functor", []):
        if ws.algebra is None:
            raise ValidationError("functor files need a propositions file", path)
        for name, F in parse_functors(text, ws.algebra, path).items():
            if name in ws.functors:
                raise ValidationError(f"duplicate functor {name!r}", path)
            ws.functors[name] = F
    return ws
