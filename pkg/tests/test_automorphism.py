import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treeaut.automorphism import (Automaton, AutomatonMismatch, MalformedPortrait,
                                  NotInLevelStabilizer, Portrait, activity, apply, common, compose,
                                  enumerate_portraits, equals, from_portrait, invert, is_identity,
                                  lift, phi, phi_n, portrait, section, validate_automaton)
from treeaut.io import parse_element
from treeaut.perm import Perm, symmetric_group
from treeaut.tree import ROOT, iter_vertices, level_vertices, vertex

from conftest import naive_apply, words

SWAP = Perm((1, 0))
ID2 = Perm.identity(2)
D = 6


def E(aut, text):
    return parse_element(aut, text)


# -- validation -------------------------------------------------------------

def test_validate_identity_only():
    aut = Automaton.build(2, {"e": ("id", "ee")})
    assert validate_automaton(aut).valid
    assert aut.identity == "e"


def test_validate_unknown_state():
    aut = Automaton.build(2, {"e": ("id", "ee"), "a": ("(0 1)", ["e", "z"])})
    report = validate_automaton(aut)
    assert not report.valid
    assert [v.kind for v in report.violations] == ["UnknownState"]


def test_validate_not_a_permutation():
    aut = Automaton.build(2, {"e": ("id", "ee"), "a": ((0, 0), "ee")})
    assert [v.kind for v in validate_automaton(aut).violations] == ["NotAPermutation"]


def test_validate_bad_identity_designation():
    aut = Automaton.build(2, {"e": ("id", "ee"), "t": ("(0 1)", "et")}, identity="t")
    assert [v.kind for v in validate_automaton(aut).violations] == ["BadIdentityState"]


# -- activity, sections, action --------------------------------------------------

def test_activity(swap):
    assert activity(swap.one()) == ID2
    assert activity(E(swap, "a")) == SWAP
    assert activity(E(swap, "a*a")) == ID2


def test_sections(odo):
    t = E(odo, "t")
    assert is_identity(section(odo.one(), vertex("0101")))
    assert equals(section(t, vertex("1")), t)
    assert is_identity(section(t, vertex("0")))
    assert equals(section(E(odo, "t*t"), vertex("0")), t)


def test_apply_examples(swap, odo, grig):
    assert apply(E(swap, "a"), vertex("0110")) == vertex("1110")
    assert apply(E(odo, "t"), vertex("110")) == vertex("001")
    assert apply(grig.one(), vertex("010")) == vertex("010")


@pytest.mark.parametrize("n", range(8))
def test_odometer_is_little_endian_increment(odo, n):
    def bits(k):
        return tuple((k >> i) & 1 for i in range(3))
    assert apply(E(odo, "t"), bits(n)) == bits((n + 1) % 8)


def test_compose_and_invert(swap, odo, grig):
    a = E(swap, "a")
    assert all(apply(compose(a, swap.one()), v) == apply(a, v) for v in iter_vertices(5, 2))
    assert is_identity(compose(a, a))
    with pytest.raises(AutomatonMismatch):
        compose(a, E(odo, "t"))
    assert is_identity(invert(grig.one()))
    assert equals(invert(a), a)
    assert apply(invert(E(odo, "t")), vertex("001")) == vertex("110")


def test_is_identity(swap, odo):
    assert is_identity(swap.one())
    assert is_identity(E(swap, "a*a"))
    assert not is_identity(E(odo, "t"))
    assert not is_identity(E(odo, "t^8"))


def test_equals(odo, grig):
    tt = E(odo, "t*t")
    assert equals(tt, tt)
    # trivial activity with both sections t
    aut = Automaton.build(2, {"e": ("id", "ee"), "t": ("(0 1)", "et"), "s": ("id", "tt")})
    assert equals(E(aut, "t*t"), E(aut, "s"))
    assert equals(E(grig, "b*c"), E(grig, "d"))
    assert not equals(E(grig, "b"), E(grig, "c"))


def test_grigorchuk_relations(grig):
    for rel in ["a^2", "b^2", "c^2", "d^2", "b*c*d^-1", "c*d*b^-1", "d*b*c^-1", "(a*d)"]:
        if rel == "(a*d)":
            assert is_identity(E(grig, "a*d*a*d*a*d*a*d"))
            assert not is_identity(E(grig, "a*d*a*d"))
            continue
        assert is_identity(E(grig, rel)), rel


def test_portraits(grig, swap, odo):
    P = portrait(grig.one(), 3)
    assert P.depth == 3 and all(perm.is_identity() for perm in P.perms)
    assert portrait(E(swap, "a"), 2).assignment == {ROOT: SWAP, (0,): ID2, (1,): ID2}
    assert portrait(E(odo, "t"), 2).assignment == {ROOT: SWAP, (0,): ID2, (1,): SWAP}


def test_from_portrait(swap):
    assert is_identity(from_portrait(Portrait.identity(3, 2)))
    g = from_portrait(portrait(E(swap, "a"), 2), base=swap)
    assert equals(g, lift(E(swap, "a"), g.automaton))
    with pytest.raises(MalformedPortrait):
        Portrait(2, 2, (SWAP,))
    with pytest.raises(MalformedPortrait):
        Portrait.from_mapping({ROOT: SWAP, (0,): ID2}, 2, 2)


def portraits(draw_p=st.integers(2, 3), draw_depth=st.integers(0, 3)):
    @st.composite
    def build(draw):
        p, depth = draw(draw_p), draw(draw_depth)
        if p == 3:
            depth = min(depth, 2)
        n = ((p ** depth) - 1) // (p - 1)
        perms = draw(st.lists(st.sampled_from(symmetric_group(p)), min_size=n, max_size=n))
        return Portrait(depth, p, tuple(perms))
    return build()


@given(portraits())
def test_portrait_round_trip(P):
    g = from_portrait(P)
    assert portrait(g, P.depth) == P
    assert all(apply(g, v) == P(v) for v in iter_vertices(P.depth + 1, P.p))


def test_phi(grig, odo):
    secs, act = phi(grig.one())
    assert act == ID2 and all(is_identity(s) for s in secs)
    secs, act = phi(E(odo, "t"))
    assert act == SWAP and is_identity(secs[0]) and equals(secs[1], E(odo, "t"))
    secs, act = phi(E(grig, "b"))
    assert act == ID2 and equals(secs[0], E(grig, "a")) and equals(secs[1], E(grig, "c"))


def test_phi_n(grig):
    assert len(phi_n(grig.one(), 2)) == 4 and all(map(is_identity, phi_n(grig.one(), 2)))
    first, second = phi_n(E(grig, "b"), 1)
    assert equals(first, E(grig, "a")) and equals(second, E(grig, "c"))
    with pytest.raises(NotInLevelStabilizer):
        phi_n(E(grig, "a"), 1)


# -- properties ------------------------------------------------------------

@pytest.fixture(scope="module", params=["rootswap", "odometer", "grigorchuk"])
def fixture_aut(request):
    from treeaut.io import load_fixture
    return load_fixture(request.param)


def _check_laws(aut, g, h):
    vertices = list(iter_vertices(D, aut.p))
    gh = compose(g, h)
    for v in vertices:
        assert apply(gh, v) == apply(g, apply(h, v))
        assert apply(invert(g), apply(g, v)) == v
        assert apply(g, v) == naive_apply(aut, g.word, v)
    assert activity(gh) == activity(g) * activity(h)
    for a in range(aut.p):
        lhs = section(gh, (a,))
        rhs = compose(section(g, (activity(h)(a),)), section(h, (a,)))
        assert equals(lhs, rhs)
    for n in range(D + 1):
        assert sorted(apply(g, v) for v in level_vertices(n, aut.p)) == level_vertices(n, aut.p)


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_group_laws(fixture_aut, data):
    g = data.draw(words(fixture_aut))
    h = data.draw(words(fixture_aut))
    _check_laws(fixture_aut, g, h)


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_equals_matches_portraits(grig, data):
    g = data.draw(words(grig))
    h = data.draw(words(grig))
    same = all(portrait(g, n) == portrait(h, n) for n in range(D + 1))
    if equals(g, h):
        assert same
    elif same:
        # unequal elements must differ somewhere deeper
        assert any(portrait(g, n) != portrait(h, n) for n in range(D + 1, 16))


def test_equals_is_equivalence(grig):
    rng = random.Random(3)
    from treeaut.verify import random_element
    pool = [random_element(grig, rng, 5) for _ in range(25)] + [E(grig, "b*c"), E(grig, "d"), E(grig, "c*b")]
    for g in pool:
        assert equals(g, g)
        for h in pool:
            assert equals(g, h) == equals(h, g)
            if equals(g, h):
                assert all(equals(g, k) == equals(h, k) for k in pool)


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_phi_n_multiplicative(grig, data):
    n = data.draw(st.integers(1, 2))
    g = data.draw(words(grig).filter(lambda x: in_stab_(x, n)))
    h = data.draw(words(grig).filter(lambda x: in_stab_(x, n)))
    lhs = phi_n(compose(g, h), n)
    for x, y, z in zip(lhs, phi_n(g, n), phi_n(h, n)):
        assert equals(x, compose(y, z))


def in_stab_(g, n):
    return all(apply(g, v) == v for v in level_vertices(n, g.automaton.p))


def test_enumerate_portraits_count():
    assert sum(1 for _ in enumerate_portraits(2, 2)) == 8
    assert sum(1 for _ in enumerate_portraits(3, 1)) == 6


def test_portrait_group_operations():
    autos = list(enumerate_portraits(2, 2))
    for g in autos:
        assert (g * g.inverse()).is_identity()
        for h in autos:
            gh = g * h
            assert all(gh(v) == g(h(v)) for v in iter_vertices(3, 2))


def test_common_merges_finitary_elements():
    autos = list(enumerate_portraits(2, 2))
    g, h = from_portrait(autos[3]), from_portrait(autos[5])
    g2, h2 = common(g, h)
    assert g2.automaton == h2.automaton
    prod = compose(g2, h2)
    assert all(apply(prod, v) == autos[3](autos[5](v)) for v in iter_vertices(3, 2))
