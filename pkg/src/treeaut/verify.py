"""Desk-scale verification suites used by ``treeaut verify`` and the acceptance tests.

Each suite returns a list of :class:`CheckResult`; a suite passes when all of
its results do. Random material comes from a seeded ``random.Random`` so runs
are reproducible.
"""
from __future__ import annotations

import random
import time
from typing import Sequence

from .automorphism import (Automaton, Element, action_on_levels, apply, compose,
                           enumerate_portraits, equals, finitary_elements, invert,
                           is_identity, portrait)
from .checks import CheckResult
from .finite import (PathModel, build_complex, check_path_coverage, d_topology_equivalence,
                     functional_plot_enumeration_check, vertex_valued_maps_constant)
from .io import FIXTURES, load_fixture, parse_element
from .topology import (CapExceeded, congruence_distance, converges_congruence, in_stab)
from .tree import format_vertex, iter_vertices
from .wire import CurveSamples, coset_geodesic_equivalence, stabilization_from_cosets

GRIGORCHUK_RELATORS = ("a*a", "b*b", "c*c", "d*d", "b*c*d", "c*d*b", "d*b*c", "(a*d)^4")


def random_element(aut: Automaton, rng: random.Random, max_len: int = 8) -> Element:
    gens = aut.generators()
    word = [(rng.choice(gens), rng.choice((1, -1))) for _ in range(rng.randint(0, max_len))]
    return Element.from_word(aut, word)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        results = fn(*args, **kwargs)
        elapsed = time.perf_counter() - t0
        for r in results:
            r.seconds = r.seconds or elapsed / len(results)
        return results
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def group_axioms(aut: Automaton, name: str, rng: random.Random,
                 samples: int = 200, depth: int = 6) -> list[CheckResult]:
    """Action laws for random triples on every vertex of length ``<= depth``."""
    vertices = list(iter_vertices(depth, aut.p))
    one = aut.one()
    failures = {"associativity": None, "identity": None, "inverse": None}
    for _ in range(samples):
        g, h, k = (random_element(aut, rng) for _ in range(3))
        gh_k, g_hk = compose(compose(g, h), k), compose(g, compose(h, k))
        g_one, one_g = compose(g, one), compose(one, g)
        g_inv = invert(g)
        g_g_inv = compose(g, g_inv)
        for v in vertices:
            gv = apply(g, v)
            chained = apply(g, apply(h, apply(k, v)))
            if failures["associativity"] is None and not (apply(gh_k, v) == apply(g_hk, v) == chained):
                failures["associativity"] = f"{g}, {h}, {k} at {format_vertex(v)}"
            if failures["identity"] is None and not (apply(g_one, v) == apply(one_g, v) == gv):
                failures["identity"] = f"{g} at {format_vertex(v)}"
            if failures["inverse"] is None and not (apply(g_inv, gv) == v == apply(g_g_inv, v)):
                failures["inverse"] = f"{g} at {format_vertex(v)}"
    return [CheckResult(f"axioms/{law} {name}", bad is None, samples * len(vertices),
                        detail=f"depth<={depth}", counterexample=bad)
            for law, bad in failures.items()]


def _with_relators(aut: Automaton, g: Element, rng: random.Random) -> Element:
    codes = list(g.codes)
    for _ in range(rng.randint(1, 3)):
        text = rng.choice(GRIGORCHUK_RELATORS).replace("(a*d)^4", "a*d*a*d*a*d*a*d")
        r = parse_element(aut, text)
        pos = rng.randint(0, len(codes))
        codes[pos:pos] = r.codes
    return Element(aut, tuple(codes))


@_timed
def equality_oracle(aut: Automaton, rng: random.Random, samples: int = 100, depth: int = 8) -> list[CheckResult]:
    """Exact equality against portrait equality, plus the Grigorchuk relations."""
    agree, equal_pairs, bad = 0, 0, None
    for i in range(samples):
        g = random_element(aut, rng)
        h = _with_relators(aut, g, rng) if i % 2 == 0 else random_element(aut, rng)
        exact = equals(g, h)
        by_portrait = portrait(g, depth) == portrait(h, depth)
        equal_pairs += exact
        if exact == by_portrait:
            agree += 1
        elif bad is None:
            bad = f"{g} vs {h}: equals={exact} portrait={by_portrait}"
    results = [CheckResult("equality/oracle grigorchuk", agree == samples, samples, agree,
                           detail=f"portrait depth {depth}, {equal_pairs} equal pairs", counterexample=bad)]
    relations = ["a*a", "b*b", "c*c", "d*d", ("b*c", "d"), ("c*d", "b"), ("d*b", "c")]
    for rel in relations:
        if isinstance(rel, tuple):
            ok = equals(parse_element(aut, rel[0]), parse_element(aut, rel[1]))
            label = f"{rel[0]}={rel[1]}"
        else:
            ok = is_identity(parse_element(aut, rel))
            label = f"{rel}=1"
        results.append(CheckResult(f"equality/relation {label}", ok))
    return results


@_timed
def counting(p: int = 2, depths: Sequence[int] = (2, 3)) -> list[CheckResult]:
    """Distinct actions among all portraits of depth ``d`` against ``(p!)**((p**d-1)/(p-1))``."""
    from math import factorial
    out = []
    for d in depths:
        portraits = list(enumerate_portraits(p, d))
        distinct = {action_on_levels(P, d, p) for P in portraits}
        expected = factorial(p) ** ((p ** d - 1) // (p - 1))
        out.append(CheckResult(f"counting Aut(T_{d}) p={p}", len(distinct) == expected,
                               len(portraits), len(distinct), detail=f"expected {expected}"))
    return out


@_timed
def ultrametric(aut: Automaton, name: str, rng: random.Random,
                samples: int = 200, cap: int = 16, levels: int = 6) -> list[CheckResult]:
    failures = {"nesting": None, "ultrametric": None, "bi-invariance": None, "stab-normality": None}

    def d(x, y):
        return congruence_distance(x, y, cap)

    for _ in range(samples):
        g, h, k = (random_element(aut, rng) for _ in range(3))
        for n in range(levels):
            if in_stab(g, n + 1) and not in_stab(g, n) and failures["nesting"] is None:
                failures["nesting"] = f"{g} level {n}"
            conj = compose(compose(k, g), invert(k))
            if in_stab(conj, n) != in_stab(g, n) and failures["stab-normality"] is None:
                failures["stab-normality"] = f"{k} {g} {k}^-1 level {n}"
        try:
            dgh = d(g, h)
            if dgh > max(d(g, k), d(k, h)) and failures["ultrametric"] is None:
                failures["ultrametric"] = f"{g}, {h}, {k}"
            if not (d(compose(k, g), compose(k, h)) == dgh == d(compose(g, k), compose(h, k))) \
                    and failures["bi-invariance"] is None:
                failures["bi-invariance"] = f"{g}, {h}, {k}"
        except CapExceeded as exc:
            failures["ultrametric"] = failures["ultrametric"] or str(exc)
    return [CheckResult(f"metric/{law} {name}", bad is None, samples, counterexample=bad)
            for law, bad in failures.items()]


def odometer_powers(cap: int = 16):
    aut = load_fixture("odometer")
    t = aut.gen("t")
    seq = [t ** (2 ** i) for i in range(4)]
    profile = converges_congruence(seq, cap, limit=aut.one())
    expected = [1.0, 0.5, 0.25, 0.125]
    ok = profile.limit_distances == expected and profile.converges and profile.cauchy
    result = CheckResult("metric/odometer powers t,t^2,t^4,t^8", bool(ok), 4,
                         detail="distances to 1: " + ", ".join(f"{x:g}" for x in profile.limit_distances),
                         counterexample=None if ok else str(profile.limit_distances))
    return result, profile


def axioms_suite(automata: dict[str, Automaton], seed: int = 0) -> tuple[list[CheckResult], list]:
    """Criteria on the group layer: axioms, equality oracle, counting, metric."""
    rng = random.Random(seed)
    results: list[CheckResult] = []
    profiles = []
    for name, aut in automata.items():
        results += group_axioms(aut, name, rng)
    if "grigorchuk" in automata:
        results += equality_oracle(automata["grigorchuk"], rng)
    results += counting()
    for name, aut in automata.items():
        results += ultrametric(aut, name, rng)
    if "odometer" in automata:
        t0 = time.perf_counter()
        res, profile = odometer_powers()
        res.seconds = time.perf_counter() - t0
        results.append(res)
        profiles.append(("odometer powers", profile))
    return results, profiles


def smooth_curves_suite(p: int = 2, d: int = 2, length: int = 3) -> tuple[list[CheckResult], list]:
    t0 = time.perf_counter()
    elements = finitary_elements(p, d)
    eq = coset_geodesic_equivalence(elements, length, p)
    eq.seconds = time.perf_counter() - t0
    results = [eq]
    profiles = []
    # a coset-compatible curve must stabilize and converge: odometer powers t^(2^n)
    aut = load_fixture("odometer")
    t = aut.gen("t")
    t0 = time.perf_counter()
    s = CurveSamples.from_list([t ** (2 ** n) for n in range(6)])
    verdict = stabilization_from_cosets(s)
    results.append(CheckResult("smooth-curves/stabilization t^(2^n)", verdict.holds, len(s),
                               detail="stable_from " + " ".join(f"{k}:{v}" for k, v in verdict.stable_from.items()),
                               seconds=time.perf_counter() - t0))
    if verdict.profile is not None:
        profiles.append(("curve t^(2^n)", verdict.profile))
    return results, profiles


D_TOPOLOGY_DEFAULT = ((2, 1), (2, 2), (3, 1))
DISCRETENESS_DEFAULT = ((3, 2, 1), (3, 2, 2), (2, 2, 3))
VERTEX_MAPS_DEFAULT = ((3, 2, 1), (5, 2, 1), (3, 2, 2), (3, 3, 1), (2, 2, 2))


def d_topology_suite(instances: Sequence[tuple[int, int]] = D_TOPOLOGY_DEFAULT) -> list[CheckResult]:
    results = []
    for p, d in instances:
        m = build_complex(p, d)
        results.append(check_path_coverage(m))
        results.append(d_topology_equivalence(m))
    return results


def discreteness_suite(instances: Sequence[tuple[int, int, int]] = DISCRETENESS_DEFAULT,
                       vertex_instances: Sequence[tuple[int, int, int]] = VERTEX_MAPS_DEFAULT) -> list[CheckResult]:
    """``(path points, p, d)`` instances for both enumeration checks."""
    results = [functional_plot_enumeration_check(PathModel.abstract(k), p, d) for k, p, d in instances]
    results += [vertex_valued_maps_constant(PathModel.abstract(k), build_complex(p, d))
                for k, p, d in vertex_instances]
    return results


def fixture_automata() -> dict[str, Automaton]:
    return {name: load_fixture(name) for name in FIXTURES}
