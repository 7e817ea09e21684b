"""Randomized checks shared by the module tests and the acceptance suite.
Each function takes a seed and returns a list of human-readable
violations (empty when everything holds)."""

from __future__ import annotations

import itertools
import random

import oracles
from absra.attack import AttackSpec, fixed_point_check, synthesize_absra, verify_absra
from absra.automaton import (all_marked, closed_equal, is_sublanguage, language_equal,
                             prefix_close)
from absra.errors import CapacityError
from absra.robust import synthesize_robust
from absra.synthesis import Refinement, SynthesisContext, brute_force_sup_cn, sup_cn
from absra.transducer import build_a0, canonicalize, prefix, seq_compose, union
from randgen import (enumerate_strings, legal_supervisor, observation_driven,
                     random_alphabet, random_automaton, random_plant, random_transducer,
                     safety_requirement)


# ----------------------------------------------------------------------
# composition laws

def composition_instance(seed: int):
    rng = random.Random(seed)
    al = random_alphabet(rng, rng.randint(2, 4))
    g = random_plant(rng, al, rng.randint(1, 6))
    s = all_marked(random_automaton(rng, al, rng.randint(1, 4), density=0.6))
    a1 = random_transducer(rng, al, rng.randint(1, 3), max_out=2)
    a2 = random_transducer(rng, al, rng.randint(1, 3), max_out=2)
    return g, s, a1, a2


def _sub_transducer(rng, a):
    keep = [(s, lab) for s, row in enumerate(a.delta) for lab in row if rng.random() < 0.7]
    keep = set(keep)
    delta = [{lab: t for lab, t in row.items() if (s, lab) in keep}
             for s, row in enumerate(a.delta)]
    return a.derive(a.labels, delta, a.initial, a.marked, a.bad)


def composition_law_violations(seed: int, max_len: int = 10) -> list[str]:
    g, s, a1, a2 = composition_instance(seed)
    rng = random.Random(seed ^ 0x5EED)
    out = []
    hidden = g.alphabet.unobservable

    def closed(a, sup):
        return enumerate_strings(seq_compose(a, sup), max_len)

    def marked(a, sup):
        return enumerate_strings(seq_compose(a, sup), max_len, marked=True)

    # the builders agree with the string-level definitions
    for a in (a1, a2):
        if closed(a, s) != oracles.composition(a, s, max_len):
            out.append("composition closed language differs from definition")
        if marked(a, s) != oracles.composition(a, s, max_len, True):
            out.append("composition marked language differs from definition")
        from absra.transducer import impact
        imp = impact(g, seq_compose(a, s))
        if enumerate_strings(imp, max_len) != oracles.impact(g, a, s, max_len):
            out.append("impact closed language differs from definition")
        if enumerate_strings(imp, max_len, True) != oracles.impact(g, a, s, max_len, True):
            out.append("impact marked language differs from definition")

    # (1) outputs of marked composed strings are marked supervisor strings
    s_obs = observation_driven(s)
    for w in marked(a1, s_obs):
        if not s_obs.accepts(oracles.theta(w)):
            out.append(f"theta image {oracles.theta(w)} not in L_m(S)")
            break
    for w in marked(a1, s):
        if not s.accepts(oracles.theta_hat(w, hidden)):
            out.append(f"supervisor-side image of {w} not in L_m(S)")
            break
    # (2) composed marked strings are marked attack strings
    if not marked(a1, s) <= enumerate_strings(a1, max_len, marked=True):
        out.append("L_m(A∘S) ⊄ L_m(A)")
    # (3) input image of the impact = input image of the composition ∩ plant
    imp_m = oracles.impact(g, a1, s, max_len, True)
    imp_c = oracles.impact(g, a1, s, max_len)
    lm_g = enumerate_strings(g, max_len, marked=True)
    l_g = enumerate_strings(g, max_len)
    if {oracles.psi(w) for w in imp_m} != {oracles.psi(w) for w in marked(a1, s)} & lm_g:
        out.append("marked input image of impact differs")
    if {oracles.psi(w) for w in imp_c} != {oracles.psi(w) for w in closed(a1, s)} & l_g:
        out.append("closed input image of impact differs")
    # monotonicity
    sub = _sub_transducer(rng, a2)
    if not enumerate_strings(sub, max_len) <= enumerate_strings(a2, max_len):
        out.append("sub-transducer generator is broken")
    if not closed(sub, s) <= closed(a2, s):
        out.append("composition is not monotone")
    # union distributes
    both = union(a1, a2)
    if closed(both, s) != closed(a1, s) | closed(a2, s):
        out.append("composition does not distribute over union")
    return out


# ----------------------------------------------------------------------
# attack instances

def attack_instance(seed: int, max_states=4, max_events=3, need_attack=None):
    """A plant with bad states and a legal supervisor. With ``need_attack``
    set, draws are repeated until the supremal attack is (non)empty."""
    rng = random.Random(seed)
    for _ in range(5000):
        al = random_alphabet(rng, rng.randint(2, max_events), p_obs=0.85)
        g = random_plant(rng, al, rng.randint(2, max_states), density=0.7)
        s = legal_supervisor(g, rng if rng.random() < 0.5 else None)
        if s is None:
            continue
        if need_attack is None:
            return g, s
        empty = synthesize_absra(g, s, AttackSpec(), check=False).empty
        if empty != need_attack:
            return g, s
    return None


def _subsets(rng, n, limit):
    everything = list(range(1, n))
    if n - 1 <= 8:
        for k in range(n):
            for c in itertools.combinations(everything, k):
                yield {0, *c}
    else:
        for _ in range(limit):
            yield {0, *(i for i in everything if rng.random() < 0.6)}


def supremality_violations(seed: int, stats: dict | None = None) -> list[str]:
    """Sub-transducers of the canonical all-alterations attack: pairwise
    unions of admissible ones stay admissible, and each is contained in the
    synthesized attack."""
    inst = attack_instance(seed, need_attack=seed % 2 == 0)
    if inst is None:
        return ["no instance found"]
    g, s = inst
    spec = AttackSpec()
    a0 = build_a0(g.alphabet, spec)
    canon = canonicalize(g, a0, s)
    res = synthesize_absra(g, s, spec, check=False)
    out = []
    if stats is not None:
        stats.setdefault("iterations", []).append((res.iterations, res.candidate_states))
    if not res.empty:
        if not verify_absra(res.recognizer, g, s, spec).is_absra:
            out.append("synthesized attack fails the verifier")
    if canon.is_empty():
        return out
    rng = random.Random(seed)
    passing = []
    for keep in _subsets(rng, canon.n_states, 200):
        sub = prefix(canon.restrict(keep))
        if sub.is_empty():
            continue
        if verify_absra(sub, g, s, spec).is_absra:
            passing.append(sub)
    if stats is not None:
        stats["passing"] = stats.get("passing", 0) + len(passing)
    for sub in passing:
        if res.empty or not is_sublanguage(prefix_close(sub), prefix_close(res.recognizer)):
            out.append("admissible sub-attack not contained in the synthesized attack")
            break
    for x, y in itertools.combinations(passing[:12], 2):
        if not verify_absra(union(x, y), g, s, spec).is_absra:
            out.append("union of two admissible attacks is not admissible")
            break
    return out


def procedure_bound_violations(seed: int, max_states: int = 5, stats: dict | None = None
                               ) -> list[str]:
    """Iteration bound and fixed-point identity of attack synthesis."""
    inst = attack_instance(seed, max_states=max_states, max_events=3,
                           need_attack=seed % 2 == 0)
    if inst is None:
        return ["no instance found"]
    g, s = inst
    out = []
    for spec in (AttackSpec(), AttackSpec(enablement="candidate"),
                 AttackSpec(feasibility_mode="plant-aware")):
        res = synthesize_absra(g, s, spec, check=False)
        if stats is not None:
            stats["runs"] = stats.get("runs", 0) + 1
            stats["max_iterations"] = max(stats.get("max_iterations", 0), res.iterations)
        if res.iterations > max(res.candidate_states, 1):
            out.append(f"{res.iterations} iterations > {res.candidate_states} states")
        if not res.empty and not fixed_point_check(g, s, res):
            out.append("re-running supCN on the attack's impact changes the result")
    return out


def robust_instance(seed: int, need_attack: bool | None = None):
    """Plant, safety requirement and spec. With ``need_attack`` set, draws
    repeat until the unattacked supervisor does (or does not) admit an attack."""
    rng = random.Random(seed)
    for _ in range(2000):
        al = random_alphabet(rng, rng.randint(2, 3), p_obs=0.85)
        g = random_plant(rng, al, rng.randint(2, 5), density=0.6)
        e = safety_requirement(g)
        obs = [ev.name for ev in al if ev.observable]
        protected = frozenset(x for x in obs if rng.random() < 0.3)
        spec = AttackSpec().with_protected(al, protected)
        if need_attack is None:
            return g, e, spec
        hat = synthesize_robust(g, e, spec).hat_supervisor
        if hat.is_empty():
            continue
        if synthesize_absra(g, hat, spec, check=False).empty != need_attack:
            return g, e, spec
    return None


def robust_violations(seed: int, stats: dict | None = None) -> list[str]:
    """Every nonempty robust supervisor admits no attack, re-checked by a
    fresh synthesis. Single-pass runs are tallied in ``stats`` only."""
    inst = robust_instance(seed, need_attack=seed % 2 == 0)
    if inst is None:
        return ["no instance found"]
    g, e, spec = inst
    out = []

    def tally(key):
        if stats is not None:
            stats[key] = stats.get(key, 0) + 1

    for mode in ("closed", "literal", "lifted"):
        res = synthesize_robust(g, e, spec, mode=mode)
        tally((mode, "stalled" if res.stalled else "empty" if res.empty else "nonempty"))
        if not res.empty:
            residual = synthesize_absra(g, res.supervisor, spec, check=False)
            if not residual.empty:
                out.append(f"{mode}: residual attack against the robust supervisor")
            if not res.residual_attack_empty:
                out.append(f"{mode}: robust outcome records a residual attack")
            if not is_sublanguage(res.language, res.hat_supervisor):
                out.append(f"{mode}: robust language escapes the unattacked supervisor")
        once = synthesize_robust(g, e, spec, mode=mode, max_rounds=1)
        if not once.empty:
            fresh = synthesize_absra(g, once.supervisor, spec, check=False).empty
            if fresh != once.residual_attack_empty:
                out.append(f"{mode}: single-pass residual flag disagrees with a fresh synthesis")
            tally((mode, "single-pass", "clean" if fresh else "residual"))
    return out


# ----------------------------------------------------------------------
# supCN oracle

def sup_cn_instance(seed: int, guard: int = 12):
    """Instances spread over structure sizes: the seed picks a lower bound
    of 1, 5 or 9 states and draws repeat until the size lands in range."""
    rng = random.Random(seed)
    low = (1, 5, 9)[seed % 3]
    while True:
        al = random_alphabet(rng, rng.randint(2, 3))
        g = random_automaton(rng, al, rng.randint(2, 6), density=0.55, p_marked=0.5)
        e = random_automaton(rng, al, rng.randint(1, 3), density=0.7, p_marked=0.6)
        ctx = SynthesisContext.for_plant(g)
        size = Refinement(ctx, e).size
        if low <= size <= guard:
            return ctx, e, size


def sup_cn_violations(seed: int, sizes: list | None = None) -> list[str]:
    ctx, e, size = sup_cn_instance(seed)
    if sizes is not None:
        sizes.append(size)
    fast = sup_cn(ctx, e, check=True).recognizer
    try:
        slow = brute_force_sup_cn(ctx, e, guard=12)
    except CapacityError:
        return ["oracle refused an instance within the guard"]
    v = language_equal(fast, slow)
    if not v:
        return [f"supCN differs from brute force (witness {v.witness})"]
    if not closed_equal(fast, slow):
        return ["supCN closure differs from brute force"]
    return []
