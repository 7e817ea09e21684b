"""String-level reference semantics for sequential composition and the
impact product, written directly from their definitions. They enumerate
bounded-length languages and share no code with the automaton builders."""

from __future__ import annotations

_DUMP = object()


def _run(s, z, word):
    for ev in word:
        z = s.delta[z].get(ev)
        if z is None:
            return None
    return z


def _walk(a, s, g, max_len):
    """Yield (word, y, z, x) for every pair string of length <= max_len that
    the attack can issue against ``s`` (and the plant ``g``, when given).
    ``z`` is ``_DUMP`` once the supervisor could not follow an output."""
    if a.is_empty() or s.is_empty() or (g is not None and g.is_empty()):
        return
    hidden = a.alphabet.unobservable
    stack = [((), a.initial, s.initial, None if g is None else g.initial)]
    while stack:
        w, y, z, x = stack.pop()
        yield w, y, z, x
        if z is _DUMP or len(w) == max_len:
            continue
        for (sigma, u), y2 in a.delta[y].items():
            if g is not None:
                x2 = g.delta[x].get(sigma)
                if x2 is None:
                    continue
            else:
                x2 = None
            if sigma in hidden:
                if u:
                    continue
                z2 = s.delta[z].get(sigma)
                if z2 is None:
                    continue
            else:
                z2 = _run(s, z, u)
                if z2 is None:
                    z2 = _DUMP
            stack.append((w + ((sigma, u),), y2, z2, x2))


def composition(a, s, max_len, marked=False) -> set:
    out = set()
    for w, y, z, _ in _walk(a, s, None, max_len):
        if not marked or (z is not _DUMP and y in a.marked and z in s.marked):
            out.add(w)
    return out


def impact(g, a, s, max_len, marked=False) -> set:
    out = set()
    for w, y, z, x in _walk(a, s, g, max_len):
        if not marked or (z is not _DUMP and x in g.marked and y in a.marked
                          and z in s.marked):
            out.add(w)
    return out


def psi(w) -> tuple:
    return tuple(p[0] for p in w)


def theta(w) -> tuple:
    return tuple(ev for p in w for ev in p[1])


def theta_hat(w, hidden) -> tuple:
    """Output image in which unobservable events pass through unchanged."""
    out = []
    for sigma, u in w:
        out.extend((sigma,) if sigma in hidden else u)
    return tuple(out)
