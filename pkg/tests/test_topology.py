import random

import pytest

from treeaut.automorphism import apply, compose, finitary_elements, from_portrait, invert, merge_automata, lift, Portrait
from treeaut.io import parse_element
from treeaut.perm import Perm, symmetric_group
from treeaut.topology import (EQUAL, CapExceeded, agreement_level, congruence_distance,
                              converges_congruence, in_rist, in_stab, in_vertex_stab,
                              same_coset_mod_stab)
from treeaut.tree import iter_vertices, level_vertices, vertex
from treeaut.verify import random_element


def E(aut, text):
    return parse_element(aut, text)


def brute_agreement(g, h, cap):
    """Deepest level <= cap on which g and h agree, by visiting vertices."""
    for n in range(1, cap + 1):
        if any(apply(g, v) != apply(h, v) for v in level_vertices(n, g.automaton.p)):
            return n - 1
    return cap


def test_vertex_stab(grig, swap):
    assert in_vertex_stab(grig.one(), vertex("01"))
    assert not in_vertex_stab(E(swap, "a"), vertex("0"))
    assert in_vertex_stab(E(grig, "b"), vertex("1"))


def test_in_stab(odo, swap, grig):
    for g in (E(odo, "t"), E(swap, "a"), E(grig, "b*a")):
        assert in_stab(g, 0)
    assert not in_stab(E(swap, "a"), 1)
    assert in_stab(E(odo, "t*t"), 1)
    for k in range(6):
        assert in_stab(E(odo, f"t^{2 ** k}"), k)
        assert not in_stab(E(odo, f"t^{2 ** k}"), k + 1)


def test_agreement_level(grig, swap):
    b = E(grig, "b")
    assert agreement_level(b, b, 8) == EQUAL
    assert agreement_level(E(swap, "a"), swap.one(), 8) == 0
    assert agreement_level(b, grig.one(), 8) == 1
    assert apply(b, vertex("00")) == vertex("01")


def test_congruence_distance(odo, swap):
    t = E(odo, "t")
    assert congruence_distance(t, t, 4) == 0
    assert congruence_distance(E(swap, "a"), swap.one(), 4) == 1
    assert congruence_distance(E(odo, "t*t"), odo.one(), 4) == 0.5
    assert apply(E(odo, "t*t"), vertex("00")) == vertex("01")
    with pytest.raises(CapExceeded):
        congruence_distance(E(odo, "t^16"), odo.one(), 3)


def test_agreement_matches_brute_force(grig):
    rng = random.Random(11)
    for _ in range(60):
        g, h = random_element(grig, rng), random_element(grig, rng)
        level = agreement_level(g, h, 7)
        if level != EQUAL:
            assert level == brute_agreement(g, h, 7)


def test_same_coset(odo, swap, grig):
    t = E(odo, "t")
    assert same_coset_mod_stab(t, t, 3)
    assert not same_coset_mod_stab(swap.one(), E(swap, "a"), 1)
    # t and the root swap have the same activity
    aut = merge_automata(odo, swap)
    assert same_coset_mod_stab(lift(t, aut), lift(E(swap, "a"), aut), 1)
    rng = random.Random(5)
    for _ in range(50):
        g, h = random_element(grig, rng), random_element(grig, rng)
        for n in range(4):
            by_vertices = all(apply(g, v) == apply(h, v) for v in level_vertices(n, 2))
            assert same_coset_mod_stab(g, h, n) == by_vertices


def test_in_rist(grig, swap):
    assert in_rist(grig.one(), vertex("01"), 4)
    P = Portrait.from_mapping({(): Perm((0, 1)), (0,): Perm((1, 0)), (1,): Perm((0, 1))}, 2, 2)
    assert in_rist(from_portrait(P), vertex("0"), 3)
    verdict = in_rist(E(swap, "a"), vertex("0"), 3)
    assert not verdict and verdict.witness == vertex("1")
    # b = (a, c) moves vertices below both children
    assert not in_rist(E(grig, "b"), vertex("0"), 4)
    assert not in_rist(E(grig, "b"), vertex("1"), 4)


def test_in_rist_needs_trivial_activity_for_p3():
    # root activity (1 2) fixes the letter 0 but still moves vertex "1" outside T_0
    P = Portrait.from_mapping({(): Perm((0, 2, 1))}, 1, 3)
    verdict = in_rist(from_portrait(P), vertex("0"), 2)
    assert not verdict and verdict.witness == vertex("1")


def test_rist_brute_force_on_aut_t3():
    """in_rist agrees with 'fixes every vertex outside T_v' on all of Aut(T_3)."""
    elements = finitary_elements(2, 3)
    for g in elements:
        for v in [vertex("0"), vertex("1"), vertex("01"), vertex("")]:
            outside = [u for u in iter_vertices(4, 2) if u[:len(v)] != v]
            assert bool(in_rist(g, v, 4)) == all(apply(g, u) == u for u in outside)


def test_convergence_profiles(odo, swap):
    t = E(odo, "t")
    const = converges_congruence([t, t, t], 8)
    assert const.distances == [0, 0] and const.cauchy
    powers = converges_congruence([E(odo, f"t^{2 ** i}") for i in range(4)], 8, limit=odo.one())
    assert powers.limit_distances == [1, 0.5, 0.25, 0.125]
    assert powers.converges and powers.cauchy
    assert powers.distances == [1, 0.5, 0.25]
    a, one = E(swap, "a"), swap.one()
    alt = converges_congruence([a, one, a, one], 8)
    assert alt.distances == [1, 1, 1] and not alt.cauchy
    assert powers.stabilization[1] == 1 and powers.stabilization[2] == 2


def _triples(aut, rng, n):
    return [tuple(random_element(aut, rng) for _ in range(3)) for _ in range(n)]


@pytest.mark.parametrize("name", ["rootswap", "odometer", "grigorchuk"])
def test_metric_properties(name):
    from treeaut.io import load_fixture
    aut = load_fixture(name)
    rng = random.Random(7)
    d = lambda x, y: congruence_distance(x, y, 16)  # noqa: E731
    for g, h, k in _triples(aut, rng, 40):
        assert d(g, h) <= max(d(g, k), d(k, h))
        assert d(compose(k, g), compose(k, h)) == d(g, h) == d(compose(g, k), compose(h, k))
        for n in range(5):
            if in_stab(g, n + 1):
                assert in_stab(g, n)
            assert in_stab(compose(compose(k, g), invert(k)), n) == in_stab(g, n)


def test_rist_normality_desk_scale():
    rng = random.Random(2)
    sym = symmetric_group(2)
    for _ in range(40):
        v = tuple(rng.randrange(2) for _ in range(rng.randint(1, 2)))
        assignment = {u: (rng.choice(sym) if u[:len(v)] == v else Perm.identity(2))
                      for u in iter_vertices(2, 2)}
        g = from_portrait(Portrait.from_mapping(assignment, 3, 2))
        k = from_portrait(Portrait(3, 2, tuple(rng.choice(sym) for _ in range(7))))
        aut = merge_automata(g.automaton, k.automaton)
        g, k = lift(g, aut), lift(k, aut)
        assert in_rist(g, v, 4)
        assert in_rist(compose(compose(k, g), invert(k)), apply(k, v), 4)
