"""Bounded sensor-alteration attacks on supervisory control loops: attack
synthesis, attack verification and attack-robust supervisor synthesis."""

from .alphabet import Alphabet, Event
from .attack import (AbsraReport, AttackOutcome, AttackSpec, check_feasibility,
                     fixed_point_check, synthesize_absra, union_preserves_absra_check,
                     verify_absra)
from .automaton import (Automaton, FeasibilityReport, Verdict, check_supervisor_feasibility,
                        closed_equal, difference, intersect, inverse_project,
                        is_sublanguage, language_equal, minimize, prefix_close, project,
                        sync_product, trim)
from .dot import emit_dot
from .errors import (AbsraError, AttributeMismatchError, CapacityError, ConfigError,
                     DomainError, ModelSyntaxError, ProtectionViolationError,
                     ValidationError)
from .modelio import emit_model, parse_model, read_model
from .robust import MinProtectOutcome, RobustOutcome, min_protected, synthesize_robust
from .synthesis import (SynthesisContext, SynthesisOutcome, brute_force_sup_cn,
                        is_controllable, is_normal, sup_cn)
from .transducer import (Transducer, build_a0, canonicalize, impact, input_automaton,
                         output_automaton, seq_compose)

__version__ = "0.1.0"

__all__ = [
    "AbsraError",
    "AbsraReport",
    "Alphabet",
    "AttackOutcome",
    "AttackSpec",
    "AttributeMismatchError",
    "Automaton",
    "CapacityError",
    "ConfigError",
    "DomainError",
    "Event",
    "FeasibilityReport",
    "MinProtectOutcome",
    "ModelSyntaxError",
    "ProtectionViolationError",
    "RobustOutcome",
    "SynthesisContext",
    "SynthesisOutcome",
    "Transducer",
    "ValidationError",
    "Verdict",
    "brute_force_sup_cn",
    "build_a0",
    "canonicalize",
    "check_feasibility",
    "check_supervisor_feasibility",
    "closed_equal",
    "difference",
    "emit_dot",
    "emit_model",
    "fixed_point_check",
    "impact",
    "input_automaton",
    "intersect",
    "inverse_project",
    "is_controllable",
    "is_normal",
    "is_sublanguage",
    "language_equal",
    "min_protected",
    "minimize",
    "output_automaton",
    "parse_model",
    "prefix_close",
    "project",
    "read_model",
    "seq_compose",
    "sup_cn",
    "sync_product",
    "synthesize_absra",
    "synthesize_robust",
    "trim",
    "union_preserves_absra_check",
    "verify_absra",
]
