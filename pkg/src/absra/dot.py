"""Graphviz export. Marked states are shaded; bad states are drawn as red
double circles; transducer edges read ``event/output``."""

from __future__ import annotations

from pathlib import Path

from .automaton import Automaton
from .modelio import _natural, state_names
from .transducer import Transducer, fmt_pair


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(m: Automaton, path=None, name: str = "G") -> str:
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;", "  node [shape=circle];"]
    if m.is_empty():
        lines.append('  empty [shape=plaintext, label="empty"];')
    else:
        names = state_names(m)
        revealing = getattr(m, "revealing", frozenset())
        lines.append("  __start [shape=point];")
        lines.append(f"  __start -> {_q(names[m.initial])};")
        for i in sorted(range(m.n_states), key=lambda i: _natural(names[i])):
            attrs = []
            if i in m.marked:
                attrs += ["style=filled", "fillcolor=lightgray"]
            if i in m.bad:
                attrs += ["shape=doublecircle", "color=red", "penwidth=2"]
            if i in revealing:
                attrs += ["shape=box", "style=dashed"]
            suffix = f" [{', '.join(attrs)}]" if attrs else ""
            lines.append(f"  {_q(names[i])}{suffix};")
        edges: dict = {}
        for s, lab, t in m.transitions():
            text = fmt_pair(lab) if isinstance(m, Transducer) else str(lab)
            edges.setdefault((s, t), []).append(text)
        for (s, t), labs in sorted(edges.items(),
                                   key=lambda kv: (_natural(names[kv[0][0]]),
                                                   _natural(names[kv[0][1]]))):
            lines.append(f"  {_q(names[s])} -> {_q(names[t])} "
                         f"[label={_q(', '.join(sorted(labs)))}];")
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
