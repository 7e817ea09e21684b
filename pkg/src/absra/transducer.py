"""Finite-state transducers over event/output-string pairs.

A transducer is an :class:`~absra.automaton.Automaton` whose transition
labels are pairs ``(event, output)`` where ``output`` is a tuple of
observable event names of length at most ``bound``. The empty tuple is the
silent output.

Sequential composition with a supervisor routes every transition whose
output the supervisor cannot follow to a deadlocking dump state. Such dump
states are kept and listed in ``revealing``: a synthesized attack must be
able to see them in order to avoid them.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Mapping

from .alphabet import Alphabet
from .automaton import Automaton, determinize, explore
from . import automaton as _fa
from .errors import CapacityError, ProtectionViolationError, ValidationError

if TYPE_CHECKING:
    from .attack import AttackSpec

EPSILON: tuple = ()
DUMP = "d"


def delta_n_cap() -> int:
    return int(os.environ.get("ABSRA_MAX_DELTA_N", 10_000))


@dataclass(frozen=True, eq=False)
class Transducer(Automaton):
    """Transducer with optional composite-state bookkeeping.

    ``parts[i]`` records, for state ``i`` of a composition or impact product,
    the indices of the component states it was built from: ``(y, z)`` for
    ``A∘S`` and ``(x, y, z)`` for ``G×(A∘S)``. Dump states carry ``None`` in
    the attack/supervisor slots.
    """

    bound: int = 1
    parts: tuple | None = None
    revealing: frozenset = frozenset()

    def _restrict_extra(self, order, remap) -> dict:
        parts = None if self.parts is None else tuple(self.parts[o] for o in order)
        return {"parts": parts,
                "revealing": frozenset(remap[s] for s in self.revealing if s in remap)}

    def _empty_like(self):
        return self.derive((), (), None, (), (), parts=None if self.parts is None else (),
                           revealing=frozenset())

    def plant_state(self, i: int):
        return self.parts[i][0]

    def supervisor_state(self, i: int):
        return self.parts[i][-1]


def as_transducer(a: Automaton, bound: int, **extra) -> Transducer:
    if isinstance(a, Transducer) and not extra:
        return a
    return Transducer(a.alphabet, a.labels, a.delta, a.initial, a.marked, a.bad,
                      bound=bound, **extra)


def fmt_output(u: tuple) -> str:
    return ",".join(u) if u else "ε"


def fmt_pair(lab) -> str:
    sigma, u = lab
    return f"{sigma}/{fmt_output(u)}"


# ----------------------------------------------------------------------
# output vocabulary

def build_delta_n(sigma_o: Iterable[str], n: int, cap: int | None = None) -> list[tuple]:
    """All observable strings of length at most ``n``, shortest first."""
    if n < 0:
        raise ValidationError("output bound must be non-negative")
    events = sorted(set(sigma_o))
    cap = delta_n_cap() if cap is None else cap
    size = sum(len(events) ** i for i in range(n + 1))
    if size > cap:
        raise CapacityError(
            f"Δ_{n} over {len(events)} observable events has {size} strings (cap {cap}); "
            "use a smaller bound or restrict the alteration relation")
    out: list[tuple] = []
    for length in range(n + 1):
        out.extend(itertools.product(events, repeat=length))
    return out


def check_relation(alphabet: Alphabet, relation: Mapping[str, Iterable[tuple]], n: int,
                   protected: Iterable[str] = ()) -> None:
    protected = set(protected)
    for sigma, outs in relation.items():
        if sigma not in alphabet or not alphabet[sigma].observable:
            raise ValidationError(f"relation entry for non-observable event {sigma!r}")
        for u in outs:
            if len(u) > n:
                raise ValidationError(f"output {fmt_output(u)} for {sigma} longer than {n}")
            for ev in u:
                if ev not in alphabet or not alphabet[ev].observable:
                    raise ValidationError(f"output event {ev!r} is not observable")
            if sigma in protected and tuple(u) != (sigma,):
                raise ProtectionViolationError(
                    f"protected event {sigma!r} may only be reported as itself")


# ----------------------------------------------------------------------
# constructions

def build_a0(alphabet: Alphabet, spec: "AttackSpec") -> Transducer:
    """Single-state transducer offering every alteration the relation allows.

    Protected events only echo themselves; unobservable events self-loop
    with the silent output.
    """
    protected = set(spec.protected) | alphabet.protected
    relation = spec.relation_for(alphabet)
    check_relation(alphabet, relation, spec.n, protected)
    row = {}
    for ev in alphabet:
        if not ev.observable:
            row[(ev.name, EPSILON)] = 0
            continue
        for u in relation[ev.name]:
            row[(ev.name, tuple(u))] = 0
    return Transducer(alphabet, ("y0",), (row,), 0, frozenset({0}), bound=spec.n)


def seq_compose(a: Transducer, s: Automaton) -> Transducer:
    """Attacked supervisor ``A∘S``.

    Observable inputs advance ``S`` along the whole output string; if ``S``
    cannot follow it the transition enters the dump state. Unobservable
    inputs advance ``S`` on the input itself and are simply absent when
    ``S`` disables them.
    """
    alphabet = a.alphabet
    if a.is_empty() or s.is_empty():
        return Transducer(alphabet, bound=a.bound, parts=(), revealing=frozenset())
    hidden = alphabet.unobservable

    def successors(node):
        if node == DUMP:
            return
        y, z = node
        row = a.delta[y]
        for lab in sorted(row):
            sigma, u = lab
            y2 = row[lab]
            if sigma in hidden:
                if u:
                    continue
                z2 = s.delta[z].get(sigma)
                if z2 is not None:
                    yield lab, (y2, z2)
            else:
                z2 = s.run(u, start=z)
                yield lab, (DUMP if z2 is None else (y2, z2))

    t = explore(alphabet, (a.initial, s.initial), successors,
                lambda n: n != DUMP and n[0] in a.marked and n[1] in s.marked,
                cls=Transducer, bound=a.bound)
    parts = tuple(None if n == DUMP else n for n in t.labels)
    labels = tuple(DUMP if n == DUMP else (a.labels[n[0]], s.labels[n[1]]) for n in t.labels)
    revealing = frozenset(i for i, n in enumerate(t.labels) if n == DUMP)
    return Transducer(alphabet, labels, t.delta, t.initial, t.marked, bound=a.bound,
                      parts=parts, revealing=revealing)


def impact(g: Automaton, t: Transducer) -> Transducer:
    """Closed loop ``G × (A∘S)`` of a plant and an attacked supervisor.

    A pair fires when the plant can execute its input event and the
    composition defines the pair. Composites whose attack part is the dump
    state are kept (flagged in ``revealing``); they are never marked.
    """
    alphabet = g.alphabet.union(t.alphabet)
    if g.is_empty() or t.is_empty():
        return Transducer(alphabet, bound=t.bound, parts=(), revealing=frozenset())

    def successors(node):
        x, w = node
        if w in t.revealing:
            return
        row = t.delta[w]
        gx = g.delta[x]
        for lab in sorted(row):
            x2 = gx.get(lab[0])
            if x2 is not None:
                yield lab, (x2, row[lab])

    p = explore(alphabet, (g.initial, t.initial), successors,
                lambda n: n[0] in g.marked and n[1] in t.marked,
                lambda n: n[0] in g.bad, cls=Transducer, bound=t.bound)
    parts, labels = [], []
    for x, w in p.labels:
        if w in t.revealing:
            parts.append((x, None, None))
            labels.append((g.labels[x], DUMP))
        elif t.parts is not None and t.parts[w] is not None:
            parts.append((x,) + tuple(t.parts[w]))
            labels.append((g.labels[x],) + tuple(t.labels[w]))
        else:
            parts.append((x, w, None))
            labels.append((g.labels[x], t.labels[w]))
    revealing = frozenset(i for i, (x, w) in enumerate(p.labels) if w in t.revealing)
    return Transducer(alphabet, tuple(labels), p.delta, p.initial, p.marked, p.bad,
                      bound=t.bound, parts=tuple(parts), revealing=revealing)


def input_automaton(t: Automaton) -> Automaton:
    """Recognizer of the input image ψ of a transducer (marked and closed)."""
    if t.is_empty():
        return Automaton.empty(t.alphabet)

    def edges(s):
        for lab, d in t.delta[s].items():
            yield lab[0], d

    return determinize(t.alphabet, [t.initial], edges, t.marked.__contains__)


def output_automaton(t: Automaton) -> Automaton:
    """Recognizer of the output image θ of a transducer (marked and closed).

    Each output string is unrolled into a chain of single-event steps through
    fresh, never-marked intermediate states; silent outputs become
    silent moves.
    """
    alphabet = t.alphabet.restrict(t.alphabet.observable)
    if t.is_empty():
        return Automaton.empty(alphabet)

    def edges(node):
        if node[0] == "s":
            i = node[1]
            for lab, d in t.delta[i].items():
                u = lab[1]
                if not u:
                    yield None, ("s", d)
                elif len(u) == 1:
                    yield u[0], ("s", d)
                else:
                    yield u[0], ("m", i, lab, 1)
        else:
            _, i, lab, k = node
            u = lab[1]
            d = t.delta[i][lab]
            yield u[k], (("s", d) if k + 1 == len(u) else ("m", i, lab, k + 1))

    return determinize(alphabet, [("s", t.initial)], edges,
                       lambda n: n[0] == "s" and n[1] in t.marked)


def union(t1: Transducer, t2: Transducer) -> Transducer:
    """Deterministic transducer recognizing the union of both languages."""
    if t1.bound != t2.bound:
        raise ValidationError("union of transducers with different output bounds")
    u = _fa.union(t1, t2)
    return as_transducer(u, t1.bound)


def prefix(t: Transducer) -> Transducer:
    """Drop dump states and mark every remaining state."""
    keep = t.reachable() - set(t.revealing)
    r = t.restrict(keep)
    return r.derive(r.labels, r.delta, r.initial, range(r.n_states), ())


def canonicalize(g: Automaton, a: Transducer, s: Automaton) -> Transducer:
    """Canonical attack: the impact product with every non-dump state marked."""
    return prefix(impact(g, seq_compose(a, s)))


def has_unobservable_selfloops(t: Transducer) -> bool:
    """Whether every state self-loops each unobservable event with silent
    output and has no other transition on it."""
    hidden = t.alphabet.unobservable
    for s, row in enumerate(t.delta):
        for sigma in hidden:
            if row.get((sigma, EPSILON)) != s:
                return False
        for (sigma, u), d in row.items():
            if sigma in hidden and (u or d != s):
                return False
    return True


def with_unobservable_selfloops(t: Transducer) -> Transducer:
    hidden = sorted(t.alphabet.unobservable)
    delta = []
    for s, row in enumerate(t.delta):
        new = {lab: d for lab, d in row.items() if lab[0] not in hidden}
        for sigma in hidden:
            new[(sigma, EPSILON)] = s
        delta.append(new)
    return t.derive(t.labels, delta, t.initial, t.marked, t.bad)

