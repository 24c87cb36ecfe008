"""Text and structured renderings of dynlog results.

Each ``*_report`` function returns ``(text, data)``: ``text`` is the
human-readable report and ``data`` a JSON-ready dict whose key order is fixed
by construction, so both are byte-stable for fixed inputs.
"""
from __future__ import annotations

import json

from .dynamics import AdjunctionResult, InclusionReport, RecoveryReport, TransitionFunctor, WitnessReport
from .textio import format_automaton, format_functor


def dump_json(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _image_label(F: TransitionFunctor, pool, row):
    name = pool.name_of(row) if pool is not None and pool.states == F.states else None
    if name is not None:
        return name
    return {s: F.lattice.names[v] for s, v in zip(F.states, row)}


def functor_data(F: TransitionFunctor, pool=None) -> dict:
    pool = pool or getattr(F.domain, "parent", None) or F.domain
    return {
        "direction": F.direction,
        "labels": {
            x: {m: _image_label(F, pool, row) for m, row in zip(F.domain.names, F.images[x])}
            for x in F.labels
        },
    }


def functor_report(functors: dict[str, TransitionFunctor], pool=None):
    text = "".join(format_functor(F, name, pool) for name, F in functors.items())
    data = {name: functor_data(F, pool) for name, F in functors.items()}
    return text, data


def _pairs(frame):
    return [list(p) for p in frame.sorted_pairs()]


def _fmt_pairs(frame):
    return "{" + ", ".join(f"({s},{t})" for s, t in frame.sorted_pairs()) + "}"


def recovery_report(rep: RecoveryReport):
    lines, labels = [], {}
    for x, r in rep.per_label.items():
        up = "R_T = R" if r.upper_matches else "R_T != R"
        lo = "R^P = R" if r.lower_matches else "R^P != R"
        lines.append(f"label {x}: {up}, {lo}")
        lines.append(f"  R     = {_fmt_pairs(r.original)}")
        lines.append(f"  R_T   = {_fmt_pairs(r.induced_upper)}")
        lines.append(f"  R^P   = {_fmt_pairs(r.induced_lower)}")
        lines.append(f"  T(B) in B: {_yes(r.T_into_B)}, P(B) in B: {_yes(r.P_into_B)}")
        labels[x] = {
            "original": _pairs(r.original),
            "induced_upper": _pairs(r.induced_upper),
            "induced_lower": _pairs(r.induced_lower),
            "upper_matches": r.upper_matches,
            "lower_matches": r.lower_matches,
            "T_into_B": r.T_into_B,
            "P_into_B": r.P_into_B,
        }
    sides = {"both": "both sides", "upper": "upper side", "lower": "lower side"}[rep.side]
    if rep.overall:
        verdict = f"recoverable ({sides}, all labels)"
    else:
        failing = [x for x, r in rep.per_label.items()
                   if (rep.side != "lower" and not r.upper_matches) or (rep.side != "upper" and not r.lower_matches)]
        verdict = f"not recoverable ({sides}; failing labels: {' '.join(failing)})"
    lines.append(f"verdict: {verdict}")
    data = {"side": rep.side, "labels": labels, "all_crisp": rep.all_crisp, "overall": rep.overall, "verdict": verdict}
    return "\n".join(lines) + "\n", data


def _yes(flag):
    return "yes" if flag else "no"


def adjunction_report(res: AdjunctionResult, inclusion: InclusionReport | None = None):
    data = {"holds": res.holds, "witness": list(res.witness) if res.witness else None}
    if res.holds:
        lines = ["adjunction: P(a) <= b iff a <= T(b) holds for all labels, a, b"]
    else:
        x, a, b = res.witness
        lines = [f"adjunction: fails at label {x}, a = {a}, b = {b}"]
    if inclusion is not None:
        data["inclusion"] = {
            "P_into_B": inclusion.P_into_B,
            "T_into_A": inclusion.T_into_A,
            "RT_subset_RP": inclusion.RT_subset_RP,
            "RP_subset_RT": inclusion.RP_subset_RT,
            "equal": inclusion.equal,
            "per_label": inclusion.per_label,
        }
        lines.append(f"P(A) in B: {_yes(inclusion.P_into_B)}, T(B) in A: {_yes(inclusion.T_into_A)}")
        lines.append(f"R_T in R^P: {_yes(inclusion.RT_subset_RP)}, R^P in R_T: {_yes(inclusion.RP_subset_RT)}")
    return "\n".join(lines) + "\n", data


def witnesses_report(reports: dict[str, WitnessReport]):
    lines, data = [], {}
    for x, w in reports.items():
        lines.append(f"label {x}: upper {'ok' if w.upper_ok else 'fails'}"
                     f"{' (one b per target)' if w.upper_ok and w.upper_uniform else ''}, "
                     f"lower {'ok' if w.lower_ok else 'fails'}"
                     f"{' (one a per source)' if w.lower_ok and w.lower_uniform else ''}")
        for side in ("upper", "lower"):
            for (s, t), m in w.witnesses[side].items():
                lines.append(f"  {side} ({s},{t}): {m}")
            for s, t in w.missing[side]:
                lines.append(f"  {side} ({s},{t}): no witness")
        data[x] = {
            "upper_ok": w.upper_ok,
            "lower_ok": w.lower_ok,
            "upper_uniform": w.upper_uniform,
            "lower_uniform": w.lower_uniform,
            "witnesses": {side: [[s, t, m] for (s, t), m in w.witnesses[side].items()] for side in ("upper", "lower")},
            "missing": {side: [list(p) for p in w.missing[side]] for side in ("upper", "lower")},
        }
    ok = all(w.upper_ok and w.lower_ok for w in reports.values())
    lines.append("verdict: " + ("witness conditions hold" if ok else "witness conditions fail"))
    return "\n".join(lines) + "\n", {"labels": data, "overall": ok}


def states_report(space):
    lines = [f"space: {space.kind} ({len(space)} states)"]
    names = space.base.names
    data = {"kind": space.kind, "states": {}}
    for name, block, row in zip(space.states, space.blocks, space.eval):
        members = [names[i] for i in sorted(block)]
        what = "down-set" if space.kind == "downset" else "ultrafilter"
        lines.append(f"state {name}: {what} {{{', '.join(members)}}}")
        lines.append("  " + " ".join(f"{m}:{v}" for m, v in zip(names, row)))
        data["states"][name] = {"set": members, "eval": {m: int(v) for m, v in zip(names, row)}}
    return "\n".join(lines) + "\n", data


def synthesis_report(space, automaton, functors, realization):
    lines = [f"space: {space.kind} ({len(space)} states: {' '.join(space.states)})"]
    if realization:
        lines.append("states realized as: " + " ".join(f"{k}={v}" for k, v in realization.items()))
    for name, F in functors.items():
        for x in F.labels:
            lines.append(f"functor {name}, label {x}: extension agrees on {len(F.domain)} members")
    lines.append("verdict: extension verified")
    data = {
        "space": space.kind,
        "states": list(space.states),
        "realization": realization,
        "automaton": [list(t) for t in automaton.sorted_triples()],
        "verified": True,
    }
    return "\n".join(lines) + "\n" + format_automaton(automaton), data
