"""Supremal controllable and normal sublanguages.

The fixed point is computed by state deletion on a refined structure::

    R = (generator × completed requirement) × observer

Refining against the observer makes every state of ``R`` carry the set of
generator/requirement states consistent with the observations so far. Two
strings with the same observable projection therefore reach states in the
same observer class, and normality of the prefix closure becomes a
class-wise condition: a class is either wholly inside the candidate or
wholly outside it. Controllability is a per-state condition on
uncontrollable exits, and non-blocking is a trim. All three deletions only
remove strings that no controllable-and-normal sublanguage can contain, so
the stable candidate is the supremal one.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Callable, Hashable

from .automaton import (Automaton, Verdict, explore, intersect, inverse_project,
                        is_sublanguage, observer_cap, prefix_close, project,
                        shortest_word, trim, union)
from .errors import CapacityError, DomainError
from .transducer import Transducer


@dataclass(frozen=True)
class SynthesisContext:
    """A generator together with its uncontrollable and observable labels.

    ``observable`` is either a label set or a predicate over labels.
    """

    generator: Automaton
    uncontrollable: frozenset = frozenset()
    observable: frozenset | Callable[[Hashable], bool] = frozenset()

    @classmethod
    def for_plant(cls, g: Automaton) -> "SynthesisContext":
        return cls(g, g.alphabet.uncontrollable, g.alphabet.observable)

    @classmethod
    def for_attack(cls, imp: Transducer) -> "SynthesisContext":
        # every alteration may be withheld, so nothing is uncontrollable;
        # a pair is observed exactly when its input event is
        obs = imp.alphabet.observable
        return cls(imp, frozenset(), lambda lab: lab[0] in obs)

    def is_observable(self, lab) -> bool:
        if callable(self.observable):
            return self.observable(lab)
        return lab in self.observable


@dataclass
class SynthesisOutcome:
    recognizer: Automaton
    iterations: int = 0
    trace: list = field(default_factory=list)
    witness: tuple | None = None
    origin: tuple = ()
    candidate_states: int = 0

    @property
    def empty(self) -> bool:
        return self.recognizer.is_empty()


class Refinement:
    """The observer-refined product on which supCN is a state-deletion
    fixed point. Candidates are sets of state indices of ``self.structure``."""

    def __init__(self, ctx: SynthesisContext, requirement: Automaton):
        self.ctx = ctx
        g, e = ctx.generator, requirement
        self.generator = g
        if g.is_empty():
            self.structure = Automaton.empty(g.alphabet)
            self.initial_candidate = frozenset()
            return
        obs = ctx.is_observable
        e0 = e.initial

        def h_step(h, lab):
            x, q = h
            x2 = g.delta[x].get(lab)
            if x2 is None:
                return None
            return (x2, None if q is None else e.delta[q].get(lab))

        def closure(hs):
            seen = set(hs)
            stack = list(hs)
            while stack:
                h = stack.pop()
                for lab in g.delta[h[0]]:
                    if not obs(lab):
                        h2 = h_step(h, lab)
                        if h2 not in seen:
                            seen.add(h2)
                            stack.append(h2)
            return frozenset(seen)

        classes: dict[frozenset, int] = {}
        cap = observer_cap()

        def intern(q):
            k = classes.get(q)
            if k is None:
                if len(classes) >= cap:
                    raise CapacityError(f"observer exceeded {cap} states")
                k = classes[q] = len(classes)
                members.append(q)
            return k

        members: list[frozenset] = []
        steps: dict = {}

        def obs_step(k, lab):
            key = (k, lab)
            if key not in steps:
                moved = {h_step(h, lab) for h in members[k]}
                moved.discard(None)
                steps[key] = intern(closure(moved))
            return steps[key]

        h0 = (g.initial, e0)
        start = (h0, intern(closure([h0])))

        def successors(node):
            h, k = node
            for lab in sorted(g.delta[h[0]]):
                h2 = h_step(h, lab)
                yield lab, (h2, obs_step(k, lab) if obs(lab) else k)

        self.structure = explore(g.alphabet, start, successors,
                                 lambda n: n[0][0] in g.marked and n[0][1] is not None
                                 and n[0][1] in e.marked)
        labels = self.structure.labels
        self.gen = tuple(n[0][0] for n in labels)
        self.cls = tuple(n[1] for n in labels)
        self.class_members: dict[int, list[int]] = {}
        for i, k in enumerate(self.cls):
            self.class_members.setdefault(k, []).append(i)
        self.initial_candidate = frozenset(i for i, n in enumerate(labels)
                                           if n[0][1] is not None)

    @property
    def size(self) -> int:
        return self.structure.n_states

    def _trim(self, cand: set) -> set:
        r = self.structure
        if r.initial not in cand:
            return set()
        seen = {r.initial}
        stack = [r.initial]
        while stack:
            s = stack.pop()
            for t in r.delta[s].values():
                if t in cand and t not in seen:
                    seen.add(t)
                    stack.append(t)
        targets = {s for s in seen if s in r.marked}
        preds: dict[int, list[int]] = {}
        for s in seen:
            for t in r.delta[s].values():
                if t in seen:
                    preds.setdefault(t, []).append(s)
        live = set(targets)
        stack = list(targets)
        while stack:
            t = stack.pop()
            for s in preds.get(t, ()):
                if s not in live:
                    live.add(s)
                    stack.append(s)
        return live

    def prune(self, cand, trace: list | None = None) -> frozenset:
        """Largest sub-candidate whose language is controllable, has a normal
        prefix closure, and is non-blocking."""
        r = self.structure
        unc = self.ctx.uncontrollable
        cand = set(cand)
        while True:
            before = len(cand)
            cand = self._trim(cand)
            if trace is not None and before != len(cand):
                trace.append(("nonblocking", before - len(cand)))
            bad_c = {s for s in cand
                     if any(lab in unc and t not in cand for lab, t in r.delta[s].items())}
            bad_n = set()
            for k in {self.cls[s] for s in cand}:
                mem = self.class_members[k]
                if any(m not in cand for m in mem):
                    bad_n.update(m for m in mem if m in cand)
            if trace is not None:
                if bad_c:
                    trace.append(("controllability", len(bad_c)))
                if bad_n - bad_c:
                    trace.append(("normality", len(bad_n - bad_c)))
            if not bad_c and not bad_n:
                return frozenset(cand)
            cand -= bad_c | bad_n

    def enabled_within(self, s: int, cand) -> list:
        return [lab for lab, t in self.structure.delta[s].items() if t in cand]

    def recognizer(self, cand, marked=None) -> Automaton:
        """Sub-automaton on ``cand``, shaped like the generator (a
        transducer generator yields a transducer whose ``parts`` are those of
        the generator states)."""
        r = self.structure
        g = self.generator
        cand = frozenset(cand)
        marked = r.marked & cand if marked is None else frozenset(marked)
        sub = r.restrict(cand)
        if sub.is_empty():
            if isinstance(g, Transducer):
                return Transducer(g.alphabet, bound=g.bound, parts=(), revealing=frozenset())
            return Automaton.empty(g.alphabet)
        order = _restrict_order(r, cand)
        labels = tuple((g.labels[self.gen[o]], o) for o in order)
        new_marked = frozenset(i for i, o in enumerate(order) if o in marked)
        new_bad = frozenset(i for i in new_marked if self.gen[order[i]] in g.bad)
        if isinstance(g, Transducer):
            parts = None if g.parts is None else tuple(g.parts[self.gen[o]] for o in order)
            return Transducer(g.alphabet, labels, sub.delta, 0, new_marked, new_bad,
                              bound=g.bound, parts=parts)
        return Automaton(g.alphabet, labels, sub.delta, 0, new_marked, new_bad)

    def origin(self, cand) -> tuple:
        r = self.structure
        if r.initial not in cand:
            return ()
        return tuple(self.gen[o] for o in _restrict_order(r, frozenset(cand)))


def _restrict_order(r: Automaton, cand) -> list:
    order = sorted(cand)
    order.remove(r.initial)
    order.insert(0, r.initial)
    return order


# ----------------------------------------------------------------------
# checks

def _require_sublanguage(k: Automaton, ctx: SynthesisContext) -> None:
    v = is_sublanguage(k, ctx.generator)
    if not v:
        raise DomainError("candidate is not a sublanguage of the generator", v.witness)


def is_controllable(k: Automaton, ctx: SynthesisContext) -> Verdict:
    """Whether prefix(K)·uncontrollable ∩ L(generator) stays in prefix(K)."""
    _require_sublanguage(k, ctx)
    kbar = prefix_close(trim(k))
    g = ctx.generator
    if kbar.is_empty() or not ctx.uncontrollable:
        return Verdict(True)
    gbar = prefix_close(g)
    prod = intersect(kbar, gbar)
    best = None
    for i, (a, b) in enumerate(prod.labels):
        for lab in sorted(gbar.delta[b]):
            if lab in ctx.uncontrollable and lab not in kbar.delta[a]:
                w = shortest_word(prod, {i}) + (lab,)
                if best is None or (len(w), w) < (len(best), best):
                    best = w
    return Verdict(best is None, best)


def normal_closure(k: Automaton, ctx: SynthesisContext) -> Automaton:
    """Recognizer of P⁻¹(P(prefix(K))) ∩ L(generator)."""
    kbar = prefix_close(trim(k))
    g = prefix_close(ctx.generator)
    p = project(kbar, ctx.is_observable, alphabet=g.alphabet)
    lifted = inverse_project(p, sorted(g.label_set()), keep=ctx.is_observable)
    return intersect(lifted, g)


def is_normal(k: Automaton, ctx: SynthesisContext) -> Verdict:
    """Normality of the prefix closure of L_m(k) w.r.t. the generator."""
    _require_sublanguage(k, ctx)
    kbar = prefix_close(trim(k))
    if kbar.is_empty():
        return Verdict(True)
    return is_sublanguage(normal_closure(k, ctx), kbar)


# ----------------------------------------------------------------------
# synthesis

def sup_cn(ctx: SynthesisContext, requirement: Automaton, check: bool | None = None
           ) -> SynthesisOutcome:
    """Supremal K ⊆ L_m(generator) ∩ L_m(requirement) that is controllable
    and whose prefix closure is normal."""
    ref = Refinement(ctx, requirement)
    trace: list = []
    cand = ref.prune(ref.initial_candidate, trace)
    rec = ref.recognizer(cand)
    out = SynthesisOutcome(rec, iterations=1, trace=trace, origin=ref.origin(cand),
                           candidate_states=ref.size)
    if not rec.is_empty():
        out.witness = shortest_word(rec, rec.marked)
    if check is None:
        check = bool(os.environ.get("ABSRA_DEBUG"))
    if check and not rec.is_empty():
        assert is_controllable(rec, ctx), "supCN result not controllable"
        assert is_normal(rec, ctx), "supCN result not normal"
    return out


def brute_force_sup_cn(ctx: SynthesisContext, requirement: Automaton,
                       guard: int = 12) -> Automaton:
    """Test oracle: union of every sub-automaton of the refined product whose
    marked language passes the definitional controllability and normality
    checks. Exponential; refuses products larger than ``guard`` states."""
    ref = Refinement(ctx, requirement)
    r = ref.structure
    g = ctx.generator
    result = Automaton.empty(g.alphabet)
    if r.is_empty():
        return result
    if r.n_states > guard:
        raise CapacityError(f"oracle guard: {r.n_states} > {guard} states")
    pool = sorted(ref.initial_candidate - {r.initial})
    if r.initial not in ref.initial_candidate:
        return result
    seen = set()
    for size in range(len(pool) + 1):
        for extra in itertools.combinations(pool, size):
            sub = trim(r.restrict({r.initial, *extra}))
            if sub.is_empty():
                continue
            key = (sub.labels, tuple(tuple(sorted(row.items())) for row in sub.delta))
            if key in seen:
                continue
            seen.add(key)
            plain = Automaton(g.alphabet, sub.labels, sub.delta, 0, sub.marked)
            if is_controllable(plain, ctx) and is_normal(plain, ctx):
                result = union(result, plain)
    return result
