"""Plain-text model files.

A model file is a sequence of ``[section]`` blocks; ``#`` starts a comment
and blank lines are ignored::

    [model]
    format_version: 1
    kind: transducer            # or automaton
    bound: 1                    # transducers only
    implicit_unobservable_loops: yes

    [alphabet]
    # name  c|uc  o|uo  [p]
    h=L     uc    o
    q_o=0   c     o

    [states]
    # label  flags: initial marked bad dump
    0 initial marked
    1 marked

    [transitions]
    0 h=L 1                     # automaton: src event dst
    0 h=L h=M 1                 # transducer: src event output dst
    1 q_o=0 - 0                 # "-" is the empty output; a,b,c for longer outputs

    [attack_spec]
    bound: 1
    mode: actuator-preserving
    enablement: initial
    protected: h=H
    alter: h=L -> h=L | h=M | -

Every state must be declared, exactly one state is initial and the
transition relation must be deterministic. With
``implicit_unobservable_loops: yes`` each unobservable event gets a silent
self-loop at every state of a transducer.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .alphabet import Alphabet, Event
from .attack import MODES, AttackSpec
from .automaton import Automaton
from .errors import ModelSyntaxError, ValidationError
from .transducer import (EPSILON, Transducer, has_unobservable_selfloops,
                         with_unobservable_selfloops)

FORMAT_VERSION = 1
SECTIONS = ("model", "alphabet", "states", "transitions", "attack_spec")
STATE_FLAGS = ("initial", "marked", "bad", "dump")


@dataclass
class ModelFile:
    machine: Automaton | None
    spec: AttackSpec | None = None


def _yes(value: str, line: int) -> bool:
    v = value.lower()
    if v in ("yes", "true", "1"):
        return True
    if v in ("no", "false", "0"):
        return False
    raise ModelSyntaxError(f"expected yes/no, got {value!r}", line)


def _output(token: str, line: int) -> tuple:
    if token in ("-", "ε"):
        return EPSILON
    parts = tuple(token.split(","))
    if any(not p for p in parts):
        raise ModelSyntaxError(f"malformed output string {token!r}", line)
    return parts


def _key_value(text: str, line: int) -> tuple[str, str]:
    if ":" not in text:
        raise ModelSyntaxError(f"expected 'key: value', got {text!r}", line)
    k, v = text.split(":", 1)
    return k.strip(), v.strip()


def _parse_spec(rows, alphabet: Alphabet | None) -> AttackSpec:
    bound, mode, enablement = 1, MODES[-1], "initial"
    protected: set[str] = set()
    relation: dict[str, set] = {}
    for line, text in rows:
        key, value = _key_value(text, line)
        if key == "bound":
            try:
                bound = int(value)
            except ValueError:
                raise ModelSyntaxError(f"bound must be an integer, got {value!r}", line)
        elif key == "mode":
            mode = value
        elif key == "enablement":
            enablement = value
        elif key == "protected":
            protected.update(v.strip() for v in value.split(",") if v.strip())
        elif key == "alter":
            if "->" not in value:
                raise ModelSyntaxError("expected 'alter: event -> out | out'", line)
            ev, outs = value.split("->", 1)
            ev = ev.strip()
            relation.setdefault(ev, set()).update(
                _output(o.strip(), line) for o in outs.split("|"))
        else:
            raise ModelSyntaxError(f"unknown attack_spec key {key!r}", line)
    if alphabet is not None:
        for ev in protected | set(relation):
            if ev not in alphabet:
                raise ValidationError(f"attack_spec mentions undeclared event {ev!r}")
    return AttackSpec(bound, frozenset(protected), relation or None, mode, enablement)


def parse_text(text: str) -> ModelFile:
    sections: dict[str, list] = {}
    current = None
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("[") and body.endswith("]"):
            current = body[1:-1].strip()
            if current not in SECTIONS:
                raise ModelSyntaxError(f"unknown section [{current}]", no)
            if current in sections:
                raise ModelSyntaxError(f"duplicate section [{current}]", no)
            sections[current] = []
            continue
        if current is None:
            raise ModelSyntaxError("content before the first section", no)
        sections[current].append((no, body))

    header = {}
    for no, body in sections.get("model", []):
        k, v = _key_value(body, no)
        header[k] = (v, no)
    version = int(header.get("format_version", (str(FORMAT_VERSION), 0))[0])
    if version != FORMAT_VERSION:
        raise ModelSyntaxError(f"unsupported format_version {version}",
                               header["format_version"][1])
    kind = header.get("kind", ("automaton", 0))[0]
    if kind not in ("automaton", "transducer"):
        raise ModelSyntaxError(f"unknown kind {kind!r}", header["kind"][1])

    alphabet = None
    if "alphabet" in sections:
        events = []
        for no, body in sections["alphabet"]:
            toks = body.split()
            if len(toks) not in (3, 4) or toks[1] not in ("c", "uc") \
                    or toks[2] not in ("o", "uo") or (len(toks) == 4 and toks[3] != "p"):
                raise ModelSyntaxError("expected 'name c|uc o|uo [p]'", no)
            if "," in toks[0]:
                raise ModelSyntaxError(f"event names may not contain ',': {toks[0]!r}", no)
            try:
                events.append(Event(toks[0], toks[1] == "c", toks[2] == "o", len(toks) == 4))
            except ValidationError as exc:
                raise ModelSyntaxError(str(exc), no) from None
        try:
            alphabet = Alphabet(events)
        except ValidationError as exc:
            raise ModelSyntaxError(str(exc), sections["alphabet"][0][0]) from None

    spec = _parse_spec(sections["attack_spec"], alphabet) if "attack_spec" in sections else None
    if "states" not in sections and "transitions" not in sections:
        return ModelFile(None, spec)
    if alphabet is None:
        raise ModelSyntaxError("missing [alphabet] section", 0)
    return ModelFile(_build_machine(kind, header, alphabet, sections), spec)


def _build_machine(kind, header, alphabet, sections) -> Automaton:
    states: dict[str, set] = {}
    for no, body in sections.get("states", []):
        toks = body.split()
        if toks[0] in states:
            raise ModelSyntaxError(f"state {toks[0]!r} declared twice", no)
        bad_flags = [t for t in toks[1:] if t not in STATE_FLAGS]
        if bad_flags:
            raise ModelSyntaxError(f"unknown state flag {bad_flags[0]!r}", no)
        states[toks[0]] = set(toks[1:])
    initial = [s for s, f in states.items() if "initial" in f]
    if len(initial) != 1:
        raise ValidationError(f"exactly one initial state required, found {len(initial)}")
    for s, f in states.items():
        if "bad" in f and "marked" not in f:
            raise ValidationError(f"bad state {s!r} must also be marked")

    transducer = kind == "transducer"
    width = 4 if transducer else 3
    trans = []
    for no, body in sections.get("transitions", []):
        toks = body.split()
        if len(toks) != width:
            raise ModelSyntaxError(f"expected {width} fields per transition", no)
        src, ev, dst = toks[0], toks[1], toks[-1]
        for st in (src, dst):
            if st not in states:
                raise ModelSyntaxError(f"undeclared state {st!r}", no)
        if ev not in alphabet:
            raise ModelSyntaxError(f"undeclared event {ev!r}", no)
        if transducer:
            out = _output(toks[2], no)
            for o in out:
                if o not in alphabet:
                    raise ModelSyntaxError(f"undeclared output event {o!r}", no)
            trans.append((no, src, (ev, out), dst))
        else:
            trans.append((no, src, ev, dst))

    seen: dict = {}
    for no, src, lab, dst in trans:
        prev = seen.setdefault((src, lab), dst)
        if prev != dst:
            shown = f"{lab[0]}/{','.join(lab[1]) or 'ε'}" if transducer else lab
            raise ValidationError(f"line {no}: nondeterministic transition from {src!r} on "
                                  f"{shown} (to {prev!r} and {dst!r})")

    order = sorted(states, key=_natural)
    order.remove(initial[0])
    order.insert(0, initial[0])
    cls = Transducer if transducer else Automaton
    m = cls.build(alphabet, [(s, lab, d) for _, s, lab, d in trans], initial[0],
                  marked=[s for s in order if "marked" in states[s]],
                  bad=[s for s in order if "bad" in states[s]], states=order)
    if not transducer:
        return m
    bound = int(header.get("bound", ("1", 0))[0])
    for _, _, (ev, out), _ in trans:
        if len(out) > bound:
            raise ValidationError(f"output of length {len(out)} exceeds bound {bound}")
    revealing = frozenset(i for i, s in enumerate(m.labels) if "dump" in states[s])
    m = m.derive(m.labels, m.delta, m.initial, m.marked, m.bad, bound=bound,
                 revealing=revealing)
    if _yes(*header.get("implicit_unobservable_loops", ("no", 0))):
        for row in m.delta:
            for (ev, out) in row:
                if not alphabet[ev].observable:
                    raise ValidationError(
                        f"explicit transition on unobservable {ev!r} with implicit loops on")
        m = with_unobservable_selfloops(m)
    return m


def _natural(label: str):
    return (0, int(label), "") if label.lstrip("-").isdigit() else (1, 0, label)


def read_model(path) -> ModelFile:
    return parse_text(Path(path).read_text(encoding="utf-8"))


def parse_model(path) -> Automaton:
    """Automaton or transducer stored in ``path``."""
    mf = read_model(path)
    if mf.machine is None:
        raise ValidationError(f"{path}: no [states]/[transitions] sections")
    return mf.machine


def read_attack_spec(path) -> AttackSpec:
    mf = read_model(path)
    if mf.spec is None:
        raise ValidationError(f"{path}: no [attack_spec] section")
    return mf.spec


# ----------------------------------------------------------------------
# output

def state_names(m: Automaton) -> list[str]:
    """Printable, unique, whitespace-free state names: the labels when they
    already are such strings, otherwise the state indices."""
    labels = [str(lab) for lab in m.labels]
    simple = all(isinstance(lab, (str, int)) for lab in m.labels)
    if simple and len(set(labels)) == len(labels) \
            and not any(ch.isspace() or ch == "#" for lab in labels for ch in lab) \
            and all(labels):
        return labels
    return [str(i) for i in range(m.n_states)]


def _spec_lines(spec: AttackSpec, alphabet: Alphabet) -> list[str]:
    out = ["[attack_spec]", f"bound: {spec.n}", f"mode: {spec.feasibility_mode}",
           f"enablement: {spec.enablement}"]
    if spec.protected:
        out.append("protected: " + ",".join(sorted(spec.protected)))
    if spec.relation is not None:
        for ev in sorted(spec.relation):
            outs = sorted(spec.relation[ev], key=lambda u: (len(u), u))
            out.append(f"alter: {ev} -> " + " | ".join(",".join(u) or "-" for u in outs))
    return out


def emit_text(m: Automaton | None, spec: AttackSpec | None = None) -> str:
    lines = ["[model]", f"format_version: {FORMAT_VERSION}"]
    if m is None:
        return "\n".join(lines + [""] + _spec_lines(spec, Alphabet())) + "\n"
    transducer = isinstance(m, Transducer)
    implicit = transducer and not m.is_empty() and bool(m.alphabet.unobservable) \
        and has_unobservable_selfloops(m)
    lines.append(f"kind: {'transducer' if transducer else 'automaton'}")
    if transducer:
        lines.append(f"bound: {m.bound}")
        lines.append(f"implicit_unobservable_loops: {'yes' if implicit else 'no'}")
    lines += ["", "[alphabet]"]
    for ev in m.alphabet:
        flag = " p" if ev.protected else ""
        lines.append(f"{ev.name} {'c' if ev.controllable else 'uc'} "
                     f"{'o' if ev.observable else 'uo'}{flag}")
    if m.is_empty():
        lines.append("# empty: no states")
        if spec is not None:
            lines += [""] + _spec_lines(spec, m.alphabet)
        return "\n".join(lines) + "\n"
    names = state_names(m)
    order = sorted(range(m.n_states), key=lambda i: _natural(names[i]))
    revealing = getattr(m, "revealing", frozenset())
    lines += ["", "[states]"]
    for i in order:
        flags = [f for f, on in (("initial", i == m.initial), ("marked", i in m.marked),
                                 ("bad", i in m.bad), ("dump", i in revealing)) if on]
        lines.append(" ".join([names[i]] + flags))
    lines += ["", "[transitions]"]
    rows = []
    for s, lab, t in m.transitions():
        if transducer:
            ev, out = lab
            if implicit and not m.alphabet[ev].observable:
                continue
            rows.append((_natural(names[s]), ev, out,
                         f"{names[s]} {ev} {','.join(out) or '-'} {names[t]}"))
        else:
            rows.append((_natural(names[s]), lab, (), f"{names[s]} {lab} {names[t]}"))
    lines += [r[-1] for r in sorted(rows)]
    if spec is not None:
        lines += [""] + _spec_lines(spec, m.alphabet)
    return "\n".join(lines) + "\n"


def emit_model(m: Automaton, path=None, spec: AttackSpec | None = None) -> str:
    text = emit_text(m, spec)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
