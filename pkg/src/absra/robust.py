"""Supervisors that no admissible sensor-alteration attack can defeat, and a
brute-force search for the smallest set of observable events to protect."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .attack import AttackOutcome, AttackSpec, synthesize_absra
from .automaton import (Automaton, as_supervisor, closed_equal, difference, inverse_project,
                        prefix_close, trim)
from .errors import CapacityError, ConfigError
from .synthesis import SynthesisContext, sup_cn
from .transducer import output_automaton

DIFFERENCE_MODES = ("closed", "literal", "lifted")


@dataclass
class RobustOutcome:
    """``rounds`` counts attack-removal passes. ``stalled`` is set when a pass
    left the closed behaviour unchanged while an attack remained, in which
    case no robust supervisor is reported."""

    supervisor: Automaton
    hat_supervisor: Automaton
    attack_language: Automaton | None = None
    residual_attack_empty: bool = True
    language: Automaton | None = None
    attack: AttackOutcome | None = None
    rounds: int = 0
    stalled: bool = False

    @property
    def empty(self) -> bool:
        return self.supervisor.is_empty()


ROUND_CAP = 100


def lift_requirement(g: Automaton, e: Automaton) -> Automaton:
    """Requirement over the plant alphabet; events it does not mention are
    inserted freely."""
    names = set(g.alphabet.names)
    if set(e.alphabet.names) == names:
        return e
    return inverse_project(e, g.alphabet, keep=set(e.alphabet.names))


def _attack_outputs(att: AttackOutcome, mode: str, g: Automaton) -> Automaton:
    if mode == "closed":
        return prefix_close(trim(output_automaton(att.recognizer)))
    theta = output_automaton(att.language)
    if mode == "literal":
        return theta
    # every plant string whose observation is a damaging output string
    return inverse_project(theta, g.alphabet, keep=g.alphabet.observable)


def _robust_from(g: Automaton, hat: Automaton, s_hat: Automaton, spec: AttackSpec,
                 mode: str, max_rounds: int | None = None) -> RobustOutcome:
    ctx = SynthesisContext.for_plant(g)
    empty = Automaton.empty(g.alphabet)
    current, k, theta = s_hat, hat, None
    att = synthesize_absra(g, current, spec, check=False)
    rounds = 0
    while not att.empty:
        if max_rounds is not None and rounds >= max_rounds:
            return RobustOutcome(current, s_hat, theta, False, k, att, rounds)
        if rounds >= ROUND_CAP:
            raise CapacityError(f"robust synthesis did not settle in {ROUND_CAP} rounds")
        rounds += 1
        theta = _attack_outputs(att, mode, g)
        k = sup_cn(ctx, difference(prefix_close(current), theta)).recognizer
        if k.is_empty():
            return RobustOutcome(empty, s_hat, theta, True, k, att, rounds)
        nxt = as_supervisor(k)
        if max_rounds is None and closed_equal(nxt, current):
            return RobustOutcome(empty, s_hat, theta, True, empty, att, rounds, stalled=True)
        current = nxt
        att = synthesize_absra(g, current, spec, check=False)
    return RobustOutcome(current, s_hat, theta, True, k, att, rounds)


def _hat(g: Automaton, e: Automaton):
    hat = sup_cn(SynthesisContext.for_plant(g), lift_requirement(g, e)).recognizer
    return hat, (None if hat.is_empty() else as_supervisor(hat))


def synthesize_robust(g: Automaton, e: Automaton, spec: AttackSpec | None = None,
                      mode: str = "closed", max_rounds: int | None = None) -> RobustOutcome:
    """Robust supervisor for plant ``g`` and requirement ``e``.

    ``mode`` selects what is removed from the behaviour of the unattacked
    supervisor before the second supCN pass: the closed output image of the
    supremal attack (``closed``), its marked output image (``literal``), or
    every plant string observed as a marked output string (``lifted``).

    The removal is repeated against each new supervisor until the supremal
    attack is empty. ``max_rounds=1`` performs a single pass and only
    records whether an attack remains.
    """
    if mode not in DIFFERENCE_MODES:
        raise ConfigError(f"unknown difference mode {mode!r}; expected one of "
                          f"{', '.join(DIFFERENCE_MODES)}")
    spec = AttackSpec() if spec is None else spec
    hat, s_hat = _hat(g, e)
    if s_hat is None:
        empty = Automaton.empty(g.alphabet)
        return RobustOutcome(empty, empty, None, True, hat)
    return _robust_from(g, hat, s_hat, spec, mode, max_rounds)


@dataclass
class MinProtectOutcome:
    protected_set: frozenset | None
    supervisor: Automaton
    subsets_examined: int
    trace: list = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.protected_set is not None


def min_protected(g: Automaton, e: Automaton, spec_base: AttackSpec | None = None,
                  mode: str = "closed", max_rounds: int | None = None) -> MinProtectOutcome:
    """Smallest set of observable events whose protection admits a nonempty
    robust supervisor.

    Subsets are tried by increasing size; within a size, in the order the
    events are declared in the plant alphabet. The unattacked supervisor does
    not depend on the protected set and is computed once.
    """
    if mode not in DIFFERENCE_MODES:
        raise ConfigError(f"unknown difference mode {mode!r}")
    spec_base = AttackSpec() if spec_base is None else spec_base
    hat, s_hat = _hat(g, e)
    obs = [ev.name for ev in g.alphabet if ev.observable]
    trace: list = []
    examined = 0
    for size in range(len(obs) + 1):
        for subset in itertools.combinations(obs, size):
            examined += 1
            chosen = frozenset(subset)
            if s_hat is None:
                trace.append((subset, "empty", True))
                continue
            spec = spec_base.with_protected(g.alphabet, chosen)
            out = _robust_from(g, hat, s_hat, spec, mode, max_rounds)
            trace.append((subset, "empty" if out.empty else "nonempty",
                          out.residual_attack_empty))
            if not out.empty and out.residual_attack_empty:
                return MinProtectOutcome(chosen, out.supervisor, examined, trace)
    return MinProtectOutcome(None, Automaton.empty(g.alphabet), examined, trace)
