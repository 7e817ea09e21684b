"""Deterministic finite automata with partial transition functions.

Every automaton is immutable once built. States are dense integer indices
``0..n-1``; ``labels`` holds an optional display label for each of them.
Transition labels are event names for plain automata and ``(event, output)``
pairs for transducers; the algorithms here only require labels to be
hashable and mutually comparable so that iteration order is deterministic.

The canonical empty automaton has no states and ``initial is None``.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Callable, Hashable, Iterable, NamedTuple

from .alphabet import Alphabet
from .errors import CapacityError, ValidationError

Label = Hashable
Word = tuple

SINK = "⊥"


def observer_cap() -> int:
    return int(os.environ.get("ABSRA_MAX_OBSERVER_STATES", 2 ** 20))


class Verdict(NamedTuple):
    """Outcome of a language check; falsy when the check fails."""

    holds: bool
    witness: Word | None = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True, eq=False)
class Automaton:
    alphabet: Alphabet
    labels: tuple = ()
    delta: tuple = ()
    initial: int | None = None
    marked: frozenset = frozenset()
    bad: frozenset = frozenset()

    @classmethod
    def build(cls, alphabet: Alphabet, transitions: Iterable[tuple], initial,
              marked: Iterable = (), bad: Iterable = (), states: Iterable = ()):
        """Build from labelled transitions ``(src, label, dst)``.

        State labels are taken in first-seen order: ``initial`` first, then
        the explicit ``states`` sequence, then transition endpoints.
        """
        order: dict = {}

        def idx(lbl):
            if lbl not in order:
                order[lbl] = len(order)
            return order[lbl]

        idx(initial)
        for s in states:
            idx(s)
        edges = [(idx(s), lab, idx(t)) for s, lab, t in transitions]
        marked = [idx(s) for s in marked]
        bad = [idx(s) for s in bad]
        delta: list[dict] = [dict() for _ in order]
        for s, lab, t in edges:
            prev = delta[s].get(lab)
            if prev is not None and prev != t:
                raise ValidationError(
                    f"nondeterministic transition at state {list(order)[s]!r} on {lab!r}")
            delta[s][lab] = t
        return cls(alphabet, tuple(order), tuple(delta), 0,
                   frozenset(marked), frozenset(bad) & frozenset(marked))

    @classmethod
    def empty(cls, alphabet: Alphabet, **extra):
        return cls(alphabet, **extra)

    def derive(self, labels, delta, initial, marked, bad=frozenset(), **extra):
        """Return an object of the same kind with new structure."""
        return replace(self, labels=tuple(labels), delta=tuple(delta), initial=initial,
                       marked=frozenset(marked), bad=frozenset(bad), **extra)

    # -- basic queries -------------------------------------------------
    @property
    def n_states(self) -> int:
        return len(self.delta)

    def is_empty(self) -> bool:
        """True for the canonical empty automaton (no initial state)."""
        return self.initial is None

    @property
    def desirable(self) -> frozenset:
        return self.marked - self.bad

    def transitions(self):
        for s, row in enumerate(self.delta):
            for lab in sorted(row):
                yield s, lab, row[lab]

    def label_set(self) -> frozenset:
        return frozenset(lab for row in self.delta for lab in row)

    def run(self, word: Iterable, start: int | None = None) -> int | None:
        state = self.initial if start is None else start
        for lab in word:
            if state is None:
                return None
            state = self.delta[state].get(lab)
        return state

    def accepts(self, word: Iterable) -> bool:
        """Membership in the marked language."""
        st = self.run(word)
        return st is not None and st in self.marked

    def generates(self, word: Iterable) -> bool:
        """Membership in the closed language."""
        return self.run(word) is not None

    def reachable(self) -> set[int]:
        if self.initial is None:
            return set()
        seen = {self.initial}
        stack = [self.initial]
        while stack:
            s = stack.pop()
            for t in self.delta[s].values():
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen

    def coreachable(self, targets: Iterable[int] | None = None) -> set[int]:
        targets = set(self.marked if targets is None else targets)
        preds: list[list[int]] = [[] for _ in self.delta]
        for s, row in enumerate(self.delta):
            for t in row.values():
                preds[t].append(s)
        seen = set(targets)
        stack = list(targets)
        while stack:
            t = stack.pop()
            for s in preds[t]:
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
        return seen

    def restrict(self, keep: Iterable[int]):
        """Sub-automaton on the kept states; the initial state must be kept
        or the result is empty."""
        keep = set(keep)
        if self.initial is None or self.initial not in keep:
            return self._empty_like()
        order = sorted(keep)
        if order[0] != self.initial:
            order.remove(self.initial)
            order.insert(0, self.initial)
        remap = {old: new for new, old in enumerate(order)}
        delta = [{lab: remap[t] for lab, t in self.delta[old].items() if t in remap}
                 for old in order]
        extra = self._restrict_extra(order, remap)
        return self.derive([self.labels[o] for o in order], delta, 0,
                           {remap[s] for s in self.marked if s in remap},
                           {remap[s] for s in self.bad if s in remap}, **extra)

    def _restrict_extra(self, order, remap) -> dict:
        return {}

    def _empty_like(self):
        return self.derive((), (), None, (), ())

    def __repr__(self) -> str:
        return (f"{type(self).__name__}(states={self.n_states}, "
                f"transitions={sum(len(r) for r in self.delta)}, "
                f"marked={len(self.marked)}, bad={len(self.bad)})")


# ----------------------------------------------------------------------
# traversal helpers

def shortest_word(a: Automaton, targets: Callable[[int], bool] | Iterable[int]) -> Word | None:
    """Shortest word leading from the initial state to a target state.

    Successors are expanded in sorted label order, so among words of minimal
    length the lexicographically smallest one is returned.
    """
    if a.initial is None:
        return None
    if not callable(targets):
        tset = set(targets)
        targets = tset.__contains__
    parent: dict[int, tuple[int, Label] | None] = {a.initial: None}
    queue = deque([a.initial])
    while queue:
        s = queue.popleft()
        if targets(s):
            word = []
            while parent[s] is not None:
                s, lab = parent[s]
                word.append(lab)
            return tuple(reversed(word))
        for lab in sorted(a.delta[s]):
            t = a.delta[s][lab]
            if t not in parent:
                parent[t] = (s, lab)
                queue.append(t)
    return None


def access_words(a: Automaton) -> dict[int, Word]:
    """Shortest (length-lexicographic) access word for every reachable state."""
    if a.initial is None:
        return {}
    words = {a.initial: ()}
    queue = deque([a.initial])
    while queue:
        s = queue.popleft()
        for lab in sorted(a.delta[s]):
            t = a.delta[s][lab]
            if t not in words:
                words[t] = words[s] + (lab,)
                queue.append(t)
    return words


def enabled(a: Automaton, state: int) -> frozenset:
    if not 0 <= state < a.n_states:
        raise KeyError(f"unknown state {state!r}")
    return frozenset(a.delta[state])


# ----------------------------------------------------------------------
# structural operations

def trim(a: Automaton) -> Automaton:
    """Keep states that are reachable and co-reachable to a marked state."""
    return a.restrict(a.reachable() & a.coreachable())


def accessible(a: Automaton) -> Automaton:
    return a.restrict(a.reachable())


def prefix_close(a: Automaton) -> Automaton:
    """Mark every reachable state, so the marked language equals L(a)."""
    b = accessible(a)
    return b.derive(b.labels, b.delta, b.initial, range(b.n_states), b.bad)


def explore(alphabet: Alphabet, start: Hashable,
            successors: Callable[[Hashable], Iterable[tuple[Label, Hashable]]],
            is_marked: Callable[[Hashable], bool],
            is_bad: Callable[[Hashable], bool] = lambda node: False,
            cap: int | None = None, cls=Automaton, **extra) -> Automaton:
    """Breadth-first construction of the reachable part of an implicit DFA.

    ``successors(node)`` yields ``(label, node')`` pairs, at most one per
    label. Node objects become the display labels of the result.
    """
    index = {start: 0}
    nodes = [start]
    delta: list[dict] = []
    i = 0
    while i < len(nodes):
        node = nodes[i]
        row = {}
        for lab, nxt in successors(node):
            j = index.get(nxt)
            if j is None:
                j = index[nxt] = len(nodes)
                nodes.append(nxt)
                if cap is not None and len(nodes) > cap:
                    raise CapacityError(f"construction exceeded {cap} states")
            row[lab] = j
        delta.append(row)
        i += 1
    marked = {k for k, n in enumerate(nodes) if is_marked(n)}
    bad = {k for k in marked if is_bad(nodes[k])}
    return cls(alphabet, tuple(nodes), tuple(delta), 0, frozenset(marked),
               frozenset(bad), **extra)


def determinize(alphabet: Alphabet, starts: Iterable[Hashable],
                edges: Callable[[Hashable], Iterable[tuple[Label | None, Hashable]]],
                is_marked: Callable[[Hashable], bool], cap: int | None = None) -> Automaton:
    """Subset construction over an implicit NFA; ``None`` labels are silent."""
    cap = observer_cap() if cap is None else cap
    cache: dict = {}

    def out(node):
        if node not in cache:
            cache[node] = list(edges(node))
        return cache[node]

    def closure(nodes):
        seen = set(nodes)
        stack = list(nodes)
        while stack:
            n = stack.pop()
            for lab, m in out(n):
                if lab is None and m not in seen:
                    seen.add(m)
                    stack.append(m)
        return frozenset(seen)

    def successors(subset):
        moves: dict = {}
        for n in subset:
            for lab, m in out(n):
                if lab is not None:
                    moves.setdefault(lab, set()).add(m)
        for lab in sorted(moves):
            yield lab, closure(moves[lab])

    start = closure(starts)
    if not start:
        return Automaton.empty(alphabet)
    return explore(alphabet, start, successors,
                   lambda subset: any(is_marked(n) for n in subset), cap=cap)


def minimize(a: Automaton) -> Automaton:
    """Minimal DFA for the marked language (bad flags respected)."""
    t = trim(a)
    if t.is_empty():
        return t
    block = [(s in t.marked, s in t.bad) for s in range(t.n_states)]
    while True:
        sigs = {}
        new = []
        for s in range(t.n_states):
            sig = (block[s], tuple(sorted((lab, block[d]) for lab, d in t.delta[s].items())))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == len(set(block)):
            break
        block = new
    ids = {block[t.initial]: 0}
    for s in range(t.n_states):
        ids.setdefault(block[s], len(ids))
    n = len(ids)
    delta: list[dict] = [dict() for _ in range(n)]
    labels = [None] * n
    marked, bad = set(), set()
    for s in range(t.n_states):
        b = ids[block[s]]
        labels[b] = b
        for lab, d in t.delta[s].items():
            delta[b][lab] = ids[block[d]]
        if s in t.marked:
            marked.add(b)
        if s in t.bad:
            bad.add(b)
    return Automaton(t.alphabet, tuple(labels), tuple(delta), 0,
                     frozenset(marked), frozenset(bad))


# ----------------------------------------------------------------------
# language algebra

def sync_product(a: Automaton, b: Automaton) -> Automaton:
    """Synchronous product: shared events synchronise, private ones interleave.

    A product state is bad when either component is bad.
    """
    alphabet = a.alphabet.union(b.alphabet)
    if a.is_empty() or b.is_empty():
        return Automaton.empty(alphabet)
    only_a = set(a.alphabet.names) - set(b.alphabet.names)
    only_b = set(b.alphabet.names) - set(a.alphabet.names)

    def successors(node):
        x, y = node
        ra, rb = a.delta[x], b.delta[y]
        for lab in sorted(set(ra) | set(rb)):
            if lab in ra and lab in rb:
                yield lab, (ra[lab], rb[lab])
            elif lab in ra and lab in only_a:
                yield lab, (ra[lab], y)
            elif lab in rb and lab in only_b:
                yield lab, (x, rb[lab])

    return explore(alphabet, (a.initial, b.initial), successors,
                   lambda n: n[0] in a.marked and n[1] in b.marked,
                   lambda n: n[0] in a.bad or n[1] in b.bad)


def intersect(a: Automaton, b: Automaton) -> Automaton:
    """Product over a common label universe: a label fires only if both
    operands define it. Works for event- and pair-labelled automata alike."""
    if a.is_empty() or b.is_empty():
        return Automaton.empty(a.alphabet)

    def successors(node):
        x, y = node
        ra, rb = a.delta[x], b.delta[y]
        for lab in sorted(ra.keys() & rb.keys()):
            yield lab, (ra[lab], rb[lab])

    return explore(a.alphabet, (a.initial, b.initial), successors,
                   lambda n: n[0] in a.marked and n[1] in b.marked,
                   lambda n: n[0] in a.bad)


def _keep_fn(keep) -> Callable[[Label], bool]:
    if callable(keep):
        return keep
    keep = frozenset(keep)
    return keep.__contains__


def project(a: Automaton, keep, alphabet: Alphabet | None = None) -> Automaton:
    """Deterministic recognizer of the natural projection of ``a``.

    ``keep`` is a set of labels or a predicate over labels; other labels are
    erased and the result is determinized.
    """
    keepf = _keep_fn(keep)
    if alphabet is None:
        if callable(keep):
            alphabet = a.alphabet
        else:
            alphabet = a.alphabet.restrict(keep)
    if a.is_empty():
        return Automaton.empty(alphabet)

    def edges(s):
        for lab, t in a.delta[s].items():
            yield (lab if keepf(lab) else None), t

    return determinize(alphabet, [a.initial], edges, a.marked.__contains__)


def inverse_project(a: Automaton, full, keep=None) -> Automaton:
    """Self-loop every label of ``full`` that is not in ``keep`` at every state.

    ``full`` is an Alphabet or a label collection; ``keep`` defaults to the
    event names of ``a``'s alphabet.
    """
    if isinstance(full, Alphabet):
        universe = full.names
        alphabet = full
    else:
        universe = tuple(full)
        alphabet = a.alphabet
    keepf = _keep_fn(a.alphabet.names if keep is None else keep)
    if a.is_empty():
        return Automaton.empty(alphabet)
    loops = [lab for lab in universe if not keepf(lab)]
    delta = []
    for s, row in enumerate(a.delta):
        new = dict(row)
        for lab in loops:
            new.setdefault(lab, s)
        delta.append(new)
    return Automaton(alphabet, a.labels, tuple(delta), a.initial, a.marked, a.bad)


def complement(a: Automaton, universe) -> Automaton:
    """Marked-language complement w.r.t. ``universe``; the closed language of
    the result is universe*. The completing sink never leaks elsewhere."""
    labs = sorted(universe.names if isinstance(universe, Alphabet) else universe)
    alphabet = universe if isinstance(universe, Alphabet) else a.alphabet
    n = a.n_states
    sink = n
    delta = [{lab: a.delta[s].get(lab, sink) for lab in labs} for s in range(n)]
    delta.append({lab: sink for lab in labs})
    initial = sink if a.initial is None else a.initial
    marked = set(range(n + 1)) - set(a.marked)
    res = Automaton(alphabet, tuple(a.labels) + (SINK,), tuple(delta), initial,
                    frozenset(marked))
    return accessible(res)


def difference(a: Automaton, b: Automaton) -> Automaton:
    """Trimmed recognizer of L_m(a) minus L_m(b)."""
    if a.is_empty():
        return Automaton.empty(a.alphabet)

    def successors(node):
        x, y = node
        rb = b.delta[y] if y is not None else {}
        for lab in sorted(a.delta[x]):
            yield lab, (a.delta[x][lab], rb.get(lab))

    prod = explore(a.alphabet, (a.initial, b.initial), successors,
                   lambda n: n[0] in a.marked and (n[1] is None or n[1] not in b.marked),
                   lambda n: n[0] in a.bad)
    return trim(prod)


def union(a: Automaton, b: Automaton) -> Automaton:
    """Deterministic recognizer of L_m(a) | L_m(b) (and of L(a) | L(b))."""
    if a.is_empty():
        return accessible(b)
    if b.is_empty():
        return accessible(a)

    def successors(node):
        x, y = node
        ra = a.delta[x] if x is not None else {}
        rb = b.delta[y] if y is not None else {}
        for lab in sorted(ra.keys() | rb.keys()):
            yield lab, (ra.get(lab), rb.get(lab))

    return explore(a.alphabet, (a.initial, b.initial), successors,
                   lambda n: n[0] in a.marked or n[1] in b.marked,
                   lambda n: n[0] in a.bad or n[1] in b.bad)


def is_sublanguage(a: Automaton, b: Automaton) -> Verdict:
    """Whether L_m(a) is contained in L_m(b); otherwise a shortest witness."""
    if a.is_empty():
        return Verdict(True)
    start = (a.initial, b.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        x, y = node
        if x in a.marked and (y is None or y not in b.marked):
            word = []
            while parent[node] is not None:
                node, lab = parent[node]
                word.append(lab)
            return Verdict(False, tuple(reversed(word)))
        rb = b.delta[y] if y is not None else {}
        for lab in sorted(a.delta[x]):
            nxt = (a.delta[x][lab], rb.get(lab))
            if nxt not in parent:
                parent[nxt] = (node, lab)
                queue.append(nxt)
    return Verdict(True)


def language_equal(a: Automaton, b: Automaton) -> Verdict:
    """Marked-language equality, with a witness from the symmetric difference."""
    v = is_sublanguage(a, b)
    if not v:
        return v
    return is_sublanguage(b, a)


def closed_equal(a: Automaton, b: Automaton) -> Verdict:
    return language_equal(prefix_close(a), prefix_close(b))


def remark(a: Automaton, marked: Iterable[int], bad: Iterable[int] | None = None):
    """Same structure with a new marker set."""
    marked = frozenset(marked)
    bad = a.bad & marked if bad is None else frozenset(bad)
    return a.derive(a.labels, a.delta, a.initial, marked, bad)


# ----------------------------------------------------------------------
# supervisors

@dataclass
class FeasibilityReport:
    """Observation-consistency and legality findings for a supervisor.

    ``consistency`` holds pairs of supervisor strings with equal observable
    projection but different enabled-event sets; ``legality`` holds strings of
    the closed loop that drive the plant into a bad marker state.
    """

    consistency: list = field(default_factory=list)
    legality: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.consistency and not self.legality


def check_supervisor_feasibility(s: Automaton, plant: Automaton) -> FeasibilityReport:
    report = FeasibilityReport()
    if s.is_empty():
        return report
    obs = s.alphabet.observable
    observer = project(s, obs)
    # product of S with its own observer; strings with equal projection share
    # the observer component
    def successors(node):
        z, q = node
        for lab in sorted(s.delta[z]):
            q2 = observer.delta[q].get(lab) if lab in obs else q
            yield lab, (s.delta[z][lab], q2)

    prod = explore(s.alphabet, (s.initial, observer.initial), successors, lambda n: True)
    words = access_words(prod)
    first: dict = {}
    for i in sorted(words, key=lambda k: (len(words[k]), words[k])):
        z, q = prod.labels[i]
        en = frozenset(s.delta[z])
        if q not in first:
            first[q] = (words[i], en)
        elif first[q][1] != en:
            report.consistency.append((first[q][0], words[i]))
    closed_loop = sync_product(s, plant)
    for b in sorted(closed_loop.bad):
        w = shortest_word(closed_loop, {b})
        if w is not None:
            report.legality.append(w)
    report.legality.sort(key=lambda w: (len(w), w))
    return report


def as_supervisor(k: Automaton) -> Automaton:
    """Minimal all-states-marked recognizer of the prefix closure of L_m(k)."""
    t = trim(k)
    if t.is_empty():
        return Automaton.empty(k.alphabet)
    closed = Automaton(t.alphabet, t.labels, t.delta, t.initial,
                       frozenset(range(t.n_states)))
    return minimize(closed)


def all_marked(a: Automaton) -> Automaton:
    b = accessible(a)
    return Automaton(b.alphabet, b.labels, b.delta, b.initial,
                     frozenset(range(b.n_states)))
