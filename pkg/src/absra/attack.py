"""Supremal bounded sensor-alteration attack synthesis and its verifier.

An attack intercepts each observable event and forwards a bounded string of
observable events to the supervisor instead. An admissible attack is covert
(the supervisor only sees strings it expects), damaging (every behaviour it
produces can still end in a bad plant state), keeps the attacked closed
loop normal, and does not change which events are enabled at any point.

`synthesize_absra` computes the largest such attack; `verify_absra`
re-checks the four properties from scratch using only the language
operations of :mod:`absra.automaton` and :mod:`absra.transducer`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .alphabet import Alphabet
from .automaton import (Automaton, Verdict, check_supervisor_feasibility, intersect,
                        inverse_project, is_sublanguage, language_equal, prefix_close,
                        project, remark, shortest_word, trim)
from .errors import ConfigError, DomainError, ValidationError
from .synthesis import Refinement, SynthesisContext, SynthesisOutcome, is_normal, sup_cn
from .transducer import (Transducer, build_a0, build_delta_n, impact, input_automaton,
                         output_automaton, prefix, seq_compose)
from . import transducer as _td

MODES = ("supervisor-exact", "plant-aware", "actuator-preserving")
DEFAULT_MODE = "actuator-preserving"
ENABLEMENTS = ("initial", "candidate")


@dataclass(frozen=True)
class AttackSpec:
    """What the attacker may do.

    ``relation`` maps an observable event to the output strings it may be
    replaced by. Events absent from the mapping are only forwarded
    unchanged. With ``relation=None`` every uncontrollable observable event
    (a sensor reading) may be replaced by any string of at most ``n``
    observable events, and commands are forwarded unchanged.
    """

    n: int = 1
    protected: frozenset = frozenset()
    relation: Mapping[str, frozenset] | None = None
    feasibility_mode: str = DEFAULT_MODE
    enablement: str = "initial"

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError("output bound must be non-negative")
        if self.feasibility_mode not in MODES:
            raise ConfigError(f"unknown feasibility mode {self.feasibility_mode!r}; "
                              f"expected one of {', '.join(MODES)}")
        if self.enablement not in ENABLEMENTS:
            raise ConfigError(f"unknown enablement reading {self.enablement!r}; "
                              f"expected one of {', '.join(ENABLEMENTS)}")
        object.__setattr__(self, "protected", frozenset(self.protected))
        if self.relation is not None:
            rel = {ev: frozenset(tuple(u) for u in outs) for ev, outs in self.relation.items()}
            object.__setattr__(self, "relation", rel)

    def relation_for(self, alphabet: Alphabet) -> dict[str, frozenset]:
        """Explicit relation over every observable event of ``alphabet``."""
        protected = self.protected | alphabet.protected
        full = {}
        for ev in alphabet:
            if not ev.observable:
                continue
            if self.relation is not None and ev.name in self.relation:
                full[ev.name] = self.relation[ev.name]
            elif self.relation is None and not ev.controllable and ev.name not in protected:
                full[ev.name] = frozenset(build_delta_n(alphabet.observable, self.n))
            else:
                full[ev.name] = frozenset({(ev.name,)})
        return full

    def with_protected(self, alphabet: Alphabet, names: Iterable[str]) -> "AttackSpec":
        """Same attacker with ``names`` protected: their alterations are
        dropped from the relation."""
        names = frozenset(names)
        base = replace(self, protected=frozenset())
        rel = base.relation_for(alphabet)
        for ev in names:
            rel[ev] = frozenset({(ev,)})
        return replace(self, protected=names, relation=rel)


# ----------------------------------------------------------------------
# enablement (property 4)

def _violates(psi_enabled: set, x: int, z: int, g: Automaton, s: Automaton, mode: str) -> bool:
    en_g = set(g.delta[x])
    en_s = set(s.delta[z])
    if mode == "supervisor-exact":
        return psi_enabled != en_s
    if mode == "plant-aware":
        return psi_enabled != en_g & en_s
    if mode == "actuator-preserving":
        ctrl = g.alphabet.controllable
        unc = en_g - ctrl
        return (psi_enabled & ctrl != en_g & en_s & ctrl) or not unc <= psi_enabled
    raise ConfigError(f"unknown feasibility mode {mode!r}")


def initial_enablement(a0: Transducer, g: Automaton, s: Automaton, x: int, z: int) -> set:
    """Input events with a non-revealing move at ``(x, y0, z)`` of the impact
    of the single-state attack ``a0``."""
    hidden = g.alphabet.unobservable
    row = a0.delta[a0.initial]
    out = set()
    for sigma, u in row:
        if sigma in out or sigma not in g.delta[x]:
            continue
        if sigma in hidden:
            if sigma in s.delta[z]:
                out.add(sigma)
        elif s.run(u, start=z) is not None:
            out.add(sigma)
    return out


def check_feasibility(imp: Transducer, g: Automaton, s: Automaton,
                      mode: str = DEFAULT_MODE, a0: Transducer | None = None) -> list:
    """Composite states of an impact product where the attacked closed loop
    enables a different event set than the supervisor would.

    With ``a0`` the enablement at a composite ``(x, y, z)`` is that of
    ``(x, y0, z)`` in the impact of ``a0``; otherwise it is the impact's own.
    Only non-revealing moves count. The supervisor state is the one the
    composition tracked through the altered outputs.
    """
    if mode not in MODES:
        raise ConfigError(f"unknown feasibility mode {mode!r}")
    bad = []
    for c in sorted(imp.reachable()):
        if c in imp.revealing:
            continue
        x, _, z = imp.parts[c]
        if a0 is not None:
            psi = initial_enablement(a0, g, s, x, z)
        else:
            psi = {lab[0] for lab, t in imp.delta[c].items() if t not in imp.revealing}
        if _violates(psi, x, z, g, s, mode):
            bad.append(c)
    return bad


def build_damage_requirement(imp: Transducer, plant: Automaton | None = None) -> Transducer:
    """Marked strings of the impact that leave the plant in a bad state."""
    return trim(remark(imp, imp.bad, imp.bad))


# ----------------------------------------------------------------------
# synthesis

@dataclass
class AttackOutcome(SynthesisOutcome):
    """Result of attack synthesis.

    ``recognizer`` is the supremal attack (all states marked); ``language``
    recognizes its damage strings; ``final_requirement`` is the requirement
    of the last iteration.
    """

    language: Automaton | None = None
    final_requirement: Automaton | None = None
    impact: Transducer | None = None
    a0: Transducer | None = None


def synthesize_absra(g: Automaton, s: Automaton, spec: AttackSpec | None = None,
                     check: bool = True) -> AttackOutcome:
    spec = AttackSpec() if spec is None else spec
    if check:
        report = check_supervisor_feasibility(s, g)
        if not report.ok:
            warnings.warn(f"supervisor is not feasible/legal for the plant: {report}",
                          stacklevel=2)
    a0 = build_a0(g.alphabet, spec)
    imp = impact(g, seq_compose(a0, s))
    e0 = build_damage_requirement(imp, g)
    ctx = SynthesisContext.for_attack(imp)
    ref = Refinement(ctx, e0)
    cand = ref.initial_candidate
    trace: list = []
    k = 0
    while True:
        k += 1
        requirement = cand
        steps: list = []
        cand = ref.prune(cand, steps)
        violating = set()
        for r in cand:
            x, _, z = imp.parts[ref.gen[r]]
            if spec.enablement == "initial":
                psi = initial_enablement(a0, g, s, x, z)
            else:
                psi = {lab[0] for lab in ref.enabled_within(r, cand)}
            if _violates(psi, x, z, g, s, spec.feasibility_mode):
                violating.add(r)
        trace.append({"iteration": k, "pruned": steps, "kept": len(cand),
                      "feasibility_violations": len(violating)})
        if not cand or not violating:
            break
        cand = cand - violating
    language = ref.recognizer(cand)
    attack = prefix(language) if not language.is_empty() else language
    witness = shortest_word(language, language.marked) if not language.is_empty() else None
    return AttackOutcome(attack, iterations=k, trace=trace, witness=witness,
                         origin=ref.origin(cand), candidate_states=ref.size,
                         language=language,
                         final_requirement=ref.recognizer(requirement),
                         impact=imp, a0=a0)


def fixed_point_check(g: Automaton, s: Automaton, outcome: AttackOutcome) -> Verdict:
    """Re-run supCN on the impact of the synthesized attack with the final
    requirement: it must return the damage language both of the synthesis
    and of that impact."""
    attack = outcome.recognizer
    if attack.is_empty():
        return Verdict(True)
    imp = impact(g, seq_compose(attack, s))
    again = sup_cn(SynthesisContext.for_attack(imp), outcome.final_requirement).recognizer
    v = language_equal(again, outcome.language)
    if not v:
        return v
    return language_equal(again, build_damage_requirement(imp, g))


# ----------------------------------------------------------------------
# verification

@dataclass
class AbsraReport:
    """Outcome of :func:`verify_absra`.

    ``normal`` and ``damage_strong`` are judged on pair strings inside the
    impact of the all-alterations attack, the space in which the attack is
    synthesized. ``normal_plant`` is the same normality condition stated on
    plant strings against L(G); it is reported but not required, because a
    supervisor that disables unobservable events can violate it for every
    attack that deletes or substitutes readings.
    """

    covert: Verdict
    damage_strong: Verdict
    damage_weak: Verdict
    normal: Verdict
    feasible: bool
    violations: list = field(default_factory=list)
    within_relation: Verdict = Verdict(True)
    normal_plant: Verdict = Verdict(True)

    @property
    def is_absra(self) -> bool:
        return bool(self.within_relation and self.covert and self.damage_strong
                    and self.normal and self.feasible)

    def lines(self) -> list[str]:
        def show(name, v):
            status = "pass" if v else "FAIL"
            extra = "" if v or v.witness is None else f"  witness: {_fmt_word(v.witness)}"
            return f"{name}: {status}{extra}"

        out = [show("within_relation", self.within_relation), show("covert", self.covert),
               show("damage_strong", self.damage_strong),
               show("damage_weak", self.damage_weak), show("normal", self.normal)]
        feas = "pass" if self.feasible else f"FAIL  composites: {self.violations}"
        out.append(f"feasible: {feas}")
        out.append(show("normal_plant (informational)", self.normal_plant))
        out.append(f"is_absra: {'yes' if self.is_absra else 'no'}")
        return out


def _fmt_word(w) -> str:
    if not w:
        return "ε"
    return " ".join(_td.fmt_pair(x) if isinstance(x, tuple) else str(x) for x in w)


def _closure(a: Automaton) -> Automaton:
    return prefix_close(trim(a))


def verify_absra(a: Transducer, g: Automaton, s: Automaton,
                 spec: AttackSpec | None = None) -> AbsraReport:
    """Check an attack against the closed loop ``(g, s)`` from scratch."""
    spec = AttackSpec() if spec is None else spec
    if a.is_empty():
        raise DomainError("cannot verify an empty attack")
    a0 = build_a0(g.alphabet, spec)
    imp0 = impact(g, seq_compose(a0, s))
    imp = impact(g, seq_compose(a, s))
    closed, closed0 = prefix_close(imp), prefix_close(imp0)
    within = is_sublanguage(closed, closed0)

    covert = is_sublanguage(prefix_close(output_automaton(a)), prefix_close(s))

    # damage on pair strings: every reachable composite can still reach a bad one
    live = imp.coreachable(imp.bad)
    stuck = shortest_word(imp, lambda i: i not in live)
    strong_pairs = Verdict(stuck is None, stuck)
    behaviour = prefix_close(input_automaton(imp))
    bad_sites = {i for i, p in enumerate(imp.parts) if p[0] in g.bad}
    damage = input_automaton(remark(imp, bad_sites, ()))
    strong_inputs = language_equal(behaviour, _closure(damage))
    strong = strong_pairs if not strong_pairs else strong_inputs
    hit = shortest_word(imp, bad_sites)
    weak = Verdict(hit is not None, hit)

    if within:
        ctx = SynthesisContext.for_attack(imp0)
        normal = is_normal(closed, SynthesisContext(closed0, ctx.uncontrollable, ctx.observable))
    else:
        normal = Verdict(False, within.witness)
    plant_closed = prefix_close(g)
    observed = project(behaviour, g.alphabet.observable, alphabet=g.alphabet)
    lifted = inverse_project(observed, g.alphabet, keep=g.alphabet.observable)
    normal_plant = is_sublanguage(intersect(lifted, plant_closed), behaviour)

    violations = check_feasibility(imp, g, s, spec.feasibility_mode,
                                   a0 if spec.enablement == "initial" else None)
    return AbsraReport(covert, strong, weak, normal, not violations,
                       [imp.labels[c] for c in violations], within, normal_plant)


def union_preserves_absra_check(a1: Transducer, a2: Transducer, g: Automaton,
                                s: Automaton, spec: AttackSpec | None = None) -> AbsraReport:
    for a in (a1, a2):
        if not verify_absra(a, g, s, spec).is_absra:
            raise DomainError("union check requires two admissible attacks")
    return verify_absra(_td.union(a1, a2), g, s, spec)
