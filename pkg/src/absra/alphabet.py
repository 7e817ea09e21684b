"""Events and alphabets with controllable/observable/protected partitions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import AttributeMismatchError, ValidationError


@dataclass(frozen=True, order=True)
class Event:
    name: str
    controllable: bool = False
    observable: bool = True
    protected: bool = False

    def __post_init__(self):
        if not self.name or any(ch.isspace() for ch in self.name):
            raise ValidationError(f"bad event name {self.name!r}")
        if self.protected and not self.observable:
            raise ValidationError(f"protected event {self.name!r} must be observable")

    def flags(self) -> tuple[bool, bool, bool]:
        return (self.controllable, self.observable, self.protected)


class Alphabet:
    """An ordered, name-unique collection of events.

    Declaration order is preserved; it is used wherever a deterministic
    enumeration over events is needed (for instance the protected-subset
    search). The family of control patterns is never built: a supervisor
    is valid only if it leaves every uncontrollable event enabled, which the
    controllability checks enforce.
    """

    __slots__ = ("_events", "_index")

    def __init__(self, events: Iterable[Event] = ()):
        self._events: tuple[Event, ...] = tuple(events)
        self._index: dict[str, Event] = {}
        for ev in self._events:
            if ev.name in self._index:
                raise ValidationError(f"duplicate event name {ev.name!r}")
            self._index[ev.name] = ev

    @classmethod
    def build(cls, controllable=(), uncontrollable=(), unobservable=()) -> "Alphabet":
        """Convenience constructor from name lists; every name is observable
        unless listed in `unobservable`."""
        hidden = set(unobservable)
        evs = [Event(n, True, n not in hidden) for n in controllable]
        evs += [Event(n, False, n not in hidden) for n in uncontrollable]
        return cls(evs)

    def __iter__(self) -> Iterator[Event]:
        return iter(self._events)

    def __len__(self) -> int:
        return len(self._events)

    def __contains__(self, name) -> bool:
        return name in self._index

    def __getitem__(self, name: str) -> Event:
        return self._index[name]

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and set(self._events) == set(other._events)

    def __hash__(self) -> int:
        return hash(frozenset(self._events))

    def __repr__(self) -> str:
        return f"Alphabet({[e.name for e in self._events]})"

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self._events)

    @property
    def controllable(self) -> frozenset[str]:
        return frozenset(e.name for e in self._events if e.controllable)

    @property
    def uncontrollable(self) -> frozenset[str]:
        return frozenset(e.name for e in self._events if not e.controllable)

    @property
    def observable(self) -> frozenset[str]:
        return frozenset(e.name for e in self._events if e.observable)

    @property
    def unobservable(self) -> frozenset[str]:
        return frozenset(e.name for e in self._events if not e.observable)

    @property
    def protected(self) -> frozenset[str]:
        return frozenset(e.name for e in self._events if e.protected)

    def order(self, name: str) -> int:
        return self._events.index(self._index[name])

    def restrict(self, names: Iterable[str]) -> "Alphabet":
        keep = set(names)
        return Alphabet(e for e in self._events if e.name in keep)

    def union(self, other: "Alphabet") -> "Alphabet":
        evs = list(self._events)
        for ev in other:
            mine = self._index.get(ev.name)
            if mine is None:
                evs.append(ev)
            elif mine.flags()[:2] != ev.flags()[:2]:
                raise AttributeMismatchError(
                    f"event {ev.name!r} declared with conflicting attributes")
        return Alphabet(evs)

    def with_protected(self, names: Iterable[str]) -> "Alphabet":
        prot = set(names)
        return Alphabet(Event(e.name, e.controllable, e.observable, e.name in prot)
                        for e in self._events)
