import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from absra.alphabet import Alphabet, Event
from absra.automaton import (Automaton, as_supervisor, check_supervisor_feasibility,
                             closed_equal, complement, difference, enabled, intersect,
                             inverse_project, is_sublanguage, language_equal, minimize,
                             prefix_close, project, shortest_word, sync_product, trim,
                             union)
from absra.errors import AttributeMismatchError, ValidationError
from absra.fixtures import tank_plant, tank_supervisor

from randgen import enumerate_strings, random_alphabet, random_automaton

L = 6


def small(seed, k=3, n=4, **kw):
    rng = random.Random(seed)
    al = random_alphabet(rng, k)
    return random_automaton(rng, al, n, **kw)


seeds = st.integers(0, 10 ** 6)


class TestAlphabet:
    def test_protected_must_be_observable(self):
        with pytest.raises(ValidationError):
            Event("x", observable=False, protected=True)

    def test_union_rejects_conflicting_flags(self):
        a = Alphabet([Event("x", controllable=True)])
        b = Alphabet([Event("x", controllable=False)])
        with pytest.raises(AttributeMismatchError):
            a.union(b)

    def test_partitions(self):
        al = Alphabet.build(controllable=["c"], uncontrollable=["u", "h"], unobservable=["h"])
        assert al.controllable == {"c"}
        assert al.uncontrollable == {"u", "h"}
        assert al.unobservable == {"h"}
        assert al.names == ("c", "u", "h")

    def test_bad_name(self):
        with pytest.raises(ValidationError):
            Event("a b")


class TestBasics:
    def test_tank_shape(self):
        g = tank_plant()
        assert g.n_states == 10
        assert g.bad == {9}
        assert g.desirable == {5}
        assert g.accepts(["h=L", "q_o=1"])
        assert not g.accepts(["h=L"])
        assert g.generates(["h=L"])

    def test_nondeterminism_rejected(self):
        al = Alphabet([Event("a")])
        with pytest.raises(ValidationError):
            Automaton.build(al, [(0, "a", 1), (0, "a", 2)], 0)

    def test_empty_automaton(self):
        e = Automaton.empty(Alphabet([Event("a")]))
        assert e.is_empty() and not e.generates([])
        assert trim(e).is_empty()

    def test_enabled_unknown_state(self):
        with pytest.raises(KeyError):
            enabled(tank_plant(), 42)

    def test_shortest_word_is_lexicographic_among_shortest(self):
        al = Alphabet([Event("a"), Event("b")])
        a = Automaton.build(al, [(0, "b", 1), (0, "a", 2), (1, "a", 3), (2, "b", 3)], 0,
                            marked=[3])
        assert shortest_word(a, a.marked) == ("a", "b")

    def test_trim_removes_blocking(self):
        g = tank_plant()
        s = tank_supervisor()
        assert trim(g).n_states == 10
        assert not trim(s).is_empty()


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_minimize_preserves_languages(seed):
    a = small(seed)
    m = minimize(a)
    assert language_equal(a, m)
    assert closed_equal(trim(a), m)
    assert m.n_states <= max(trim(a).n_states, 0) or trim(a).is_empty()


@settings(max_examples=60, deadline=None)
@given(seeds, seeds)
def test_boolean_operations_match_enumeration(s1, s2):
    rng = random.Random(s1)
    al = random_alphabet(rng, 3)
    a = random_automaton(rng, al, 3)
    b = random_automaton(random.Random(s2), al, 3)
    la, lb = enumerate_strings(a, L, True), enumerate_strings(b, L, True)
    assert enumerate_strings(intersect(a, b), L, True) == la & lb
    assert enumerate_strings(union(a, b), L, True) == la | lb
    assert enumerate_strings(difference(a, b), L, True) == la - lb
    sigma_star = inverse_project(Automaton.build(al, [], 0, marked=[0]), al, keep=())
    universe = enumerate_strings(sigma_star, L, True)
    assert enumerate_strings(complement(a, al), L, True) == universe - la
    assert bool(is_sublanguage(intersect(a, b), a))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_projection_matches_enumeration(seed):
    a = small(seed, k=3, n=3)
    obs = a.alphabet.observable
    p = project(a, obs)
    # every projected string of a short word is recognized by the projection
    for w in enumerate_strings(a, L):
        assert p.generates([x for x in w if x in obs])
    for w in enumerate_strings(a, L, True):
        assert p.accepts([x for x in w if x in obs])
    # and conversely (bounded): each projected string lifts to some word
    images = {tuple(x for x in w if x in obs) for w in enumerate_strings(a, L + 4)}
    for v in enumerate_strings(p, 3):
        assert v in images


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_inverse_projection(seed):
    a = small(seed, k=3, n=3)
    obs = a.alphabet.observable
    p = project(a, obs)
    lifted = inverse_project(p, a.alphabet, keep=obs)
    for w in enumerate_strings(lifted, 4, True):
        assert p.accepts([x for x in w if x in obs])
    assert is_sublanguage(a, lifted)


@settings(max_examples=40, deadline=None)
@given(seeds, seeds)
def test_sync_product_shared_alphabet_is_intersection(s1, s2):
    rng = random.Random(s1)
    al = random_alphabet(rng, 2)
    a = random_automaton(rng, al, 3)
    b = random_automaton(random.Random(s2), al, 3)
    assert language_equal(sync_product(a, b), intersect(a, b))


def test_sync_product_interleaves_private_events():
    a = Automaton.build(Alphabet([Event("a")]), [(0, "a", 1)], 0, marked=[1])
    b = Automaton.build(Alphabet([Event("b")]), [(0, "b", 1)], 0, marked=[1])
    p = sync_product(a, b)
    assert enumerate_strings(p, 3, True) == {("a", "b"), ("b", "a")}


def test_tank_supervisor_is_feasible_and_legal():
    rep = check_supervisor_feasibility(tank_supervisor(), tank_plant())
    assert rep.ok


def test_uncontrolled_plant_is_illegal():
    rep = check_supervisor_feasibility(prefix_close(tank_plant()), tank_plant())
    assert rep.legality
    assert rep.legality[0][-1] == "h=EH"


def test_observation_inconsistency_detected():
    al = Alphabet([Event("u", observable=False), Event("c", controllable=True)])
    s = Automaton.build(al, [(0, "u", 1), (1, "c", 2)], 0, marked=[0, 1, 2])
    rep = check_supervisor_feasibility(s, s)
    assert rep.consistency
    assert rep.consistency[0] == ((), ("u",))


def test_as_supervisor_marks_everything():
    s = as_supervisor(tank_supervisor())
    assert s.marked == frozenset(range(s.n_states))
    assert closed_equal(s, tank_supervisor())
