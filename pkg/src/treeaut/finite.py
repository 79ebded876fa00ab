"""Finite Alexandrov models of truncated trees and of lines.

The depth-``d`` truncation of the tree is modelled by its face poset: one
point per vertex, one per edge, with each vertex below its incident edges.
Open sets are the up-closed sets, so the smallest open set around a vertex
is its open star and every edge point is open on its own. Curves are
modelled by leaf-to-leaf geodesic paths, finite shadows of injective,
bicontinuous lines. Continuity between such spaces is order preservation.

Subsets are int bitmasks over the model's point indices.
"""
from __future__ import annotations

import random
import time
from itertools import combinations, product
from typing import Iterable, Sequence

from .automorphism import enumerate_portraits
from .checks import CheckResult
from .tree import Vertex, format_vertex, iter_vertices, level_vertices

EXHAUSTIVE_LIMIT = 25
ENUMERATION_LIMIT = 2_000_000

Point = tuple[str, Vertex]  # ("v", word) or ("e", word of the lower endpoint)


class BadParameters(ValueError):
    pass


class TooLargeForExhaustive(ValueError):
    pass


class TooLarge(ValueError):
    pass


def point_name(pt: Point) -> str:
    kind, word = pt
    return format_vertex(word) if kind == "v" else f"e[{format_vertex(word)}]"


class _UpSetSpace:
    """A finite poset whose opens are its up-sets.

    ``covers`` lists pairs ``(i, j)`` with point ``i`` immediately below ``j``.
    """

    points: tuple[Point, ...]
    covers: tuple[tuple[int, int], ...]

    def _init_order(self):
        self.index = {pt: i for i, pt in enumerate(self.points)}
        up = [0] * len(self.points)
        for i, j in self.covers:
            up[i] |= 1 << j
        self.up = tuple(up)
        self.constraints = tuple((1 << i, m) for i, m in enumerate(up) if m)
        above = [{i} for i in range(len(self.points))]
        for i, j in self.covers:
            above[i].add(j)
        self._above = tuple(frozenset(s) for s in above)

    def __len__(self):
        return len(self.points)

    def leq(self, i: int, j: int) -> bool:
        return j in self._above[i]

    def mask(self, pts: Iterable[Point]) -> int:
        m = 0
        for pt in pts:
            m |= 1 << self.index[pt]
        return m

    def members(self, S: int) -> list[Point]:
        return [pt for i, pt in enumerate(self.points) if S >> i & 1]

    def open_star(self, i: int) -> int:
        return (1 << i) | self.up[i]


class ComplexModel(_UpSetSpace):
    def __init__(self, p: int, d: int):
        self.p, self.d = p, d
        vertices = list(iter_vertices(d, p))
        edges = [v for v in vertices if v]
        self.points = tuple([("v", v) for v in vertices] + [("e", v) for v in edges])
        index = {pt: i for i, pt in enumerate(self.points)}
        covers = []
        for v in edges:
            e = index[("e", v)]
            covers.append((index[("v", v[:-1])], e))
            covers.append((index[("v", v)], e))
        self.covers = tuple(covers)
        self._init_order()
        self.vertex_indices = tuple(i for i, pt in enumerate(self.points) if pt[0] == "v")
        self.leaves = tuple(level_vertices(d, p))

    def __repr__(self):
        return f"ComplexModel(p={self.p}, d={self.d})"


class PathModel(_UpSetSpace):
    """An alternating chain of vertex- and edge-points.

    ``embedding`` gives the model index of each path point when the path is a
    geodesic inside a :class:`ComplexModel`; abstract paths (domains of
    curves) have none.
    """

    def __init__(self, points: Sequence[Point], embedding: Sequence[int] | None = None):
        if len(points) < 2:
            raise ValueError("a path has at least two points")
        for a, b in zip(points, points[1:]):
            if {a[0], b[0]} != {"v", "e"}:
                raise ValueError("path points must alternate between vertices and edges")
        self.points = tuple(points)
        covers = []
        for i in range(len(points) - 1):
            lo, hi = (i, i + 1) if points[i][0] == "v" else (i + 1, i)
            covers.append((lo, hi))
        self.covers = tuple(covers)
        self._init_order()
        self.embedding = None if embedding is None else tuple(embedding)

    @classmethod
    def abstract(cls, k: int) -> PathModel:
        """``k`` points ``v e v e ...``, a finite stand-in for an interval of the line."""
        return cls([("v", (i,)) if i % 2 == 0 else ("e", (i,)) for i in range(k)])

    def __repr__(self):
        return "PathModel(" + " ".join(point_name(pt) for pt in self.points) + ")"


def build_complex(p: int, d: int) -> ComplexModel:
    if not (isinstance(p, int) and isinstance(d, int)) or p < 2 or d < 1:
        raise BadParameters(f"need p >= 2 and d >= 1, got p={p}, d={d}")
    return ComplexModel(p, d)


def _geodesic(u: Vertex, w: Vertex) -> list[Point]:
    k = 0
    while k < min(len(u), len(w)) and u[k] == w[k]:
        k += 1
    up = []
    for n in range(len(u), k, -1):
        up += [("v", u[:n]), ("e", u[:n])]
    down = []
    for n in range(k + 1, len(w) + 1):
        down += [("e", w[:n]), ("v", w[:n])]
    return up + [("v", u[:k])] + down


def enumerate_geodesic_paths(m: ComplexModel) -> list[PathModel]:
    """Every leaf-to-leaf geodesic, one per unordered pair of leaves."""
    paths = []
    for u, w in combinations(m.leaves, 2):
        pts = _geodesic(u, w)
        paths.append(PathModel(pts, [m.index[pt] for pt in pts]))
    return paths


def check_path_coverage(m: ComplexModel, paths: Sequence[PathModel] | None = None) -> CheckResult:
    """Every edge lies on a path, and every two edges at a vertex lie on a common path."""
    paths = enumerate_geodesic_paths(m) if paths is None else paths
    on_path = [frozenset(path.embedding) for path in paths]
    missing = None
    checked = 0
    for i, pt in enumerate(m.points):
        if pt[0] == "e":
            checked += 1
            if not any(i in s for s in on_path) and missing is None:
                missing = point_name(pt)
            continue
        incident = [j for j in range(len(m.points)) if m.up[i] >> j & 1]
        for a, b in combinations(incident, 2):
            checked += 1
            if not any(i in s and a in s and b in s for s in on_path) and missing is None:
                missing = f"{point_name(pt)} with {point_name(m.points[a])}, {point_name(m.points[b])}"
    return CheckResult(f"path coverage p={m.p} d={m.d}", missing is None, checked,
                       detail=f"{len(paths)} paths", counterexample=missing)


def is_open(m: _UpSetSpace, S: int) -> bool:
    for bit, need in m.constraints:
        if S & bit and S & need != need:
            return False
    return True


def _d_constraints(m: ComplexModel, paths: Sequence[PathModel]) -> tuple[tuple[int, int], ...]:
    """Openness of every path preimage, rewritten in model coordinates.

    Paths embed injectively, so the preimage of ``S`` is open in a path iff
    each vertex of the path lying in ``S`` has its path neighbours in ``S``.
    """
    out = set()
    for path in paths:
        for bit, need in path.constraints:
            i = bit.bit_length() - 1
            mask = 0
            for j in range(len(path.points)):
                if need >> j & 1:
                    mask |= 1 << path.embedding[j]
            out.add((1 << path.embedding[i], mask))
    return tuple(sorted(out))


def is_d_open(m: ComplexModel, S: int, paths: Sequence[PathModel] | None = None) -> bool:
    """Open preimage under every geodesic path inclusion."""
    paths = enumerate_geodesic_paths(m) if paths is None else paths
    for path in paths:
        pre = 0
        for j, i in enumerate(path.embedding):
            if S >> i & 1:
                pre |= 1 << j
        if not is_open(path, pre):
            return False
    return True


def d_topology_equivalence(m: ComplexModel, samples: int | None = None, seed: int = 0) -> CheckResult:
    """``is_open(S) == is_d_open(S)`` for every subset ``S`` of points.

    Exhaustive up to 25 points. Larger models need ``samples``: then every
    open star, its complement and ``samples`` random subsets are checked.
    """
    t0 = time.perf_counter()
    n = len(m.points)
    paths = enumerate_geodesic_paths(m)
    d_constraints = _d_constraints(m, paths)

    def d_open(S):
        for bit, need in d_constraints:
            if S & bit and S & need != need:
                return False
        return True

    if n <= EXHAUSTIVE_LIMIT and samples is None:
        subsets: Iterable[int] = range(1 << n)
        mode, total = "exhaustive", 1 << n
    elif samples is None:
        raise TooLargeForExhaustive(f"{n} points > {EXHAUSTIVE_LIMIT}; pass a sample count")
    else:
        rng = random.Random(seed)
        full = (1 << n) - 1
        stars = [m.open_star(i) for i in m.vertex_indices]
        chosen = stars + [full ^ s for s in stars] + [rng.getrandbits(n) for _ in range(samples)]
        subsets, mode, total = chosen, "sampled", len(chosen)
    opens = 0
    counterexample = None
    for S in subsets:
        a = is_open(m, S)
        opens += a
        if a != d_open(S):
            counterexample = "{" + ", ".join(point_name(pt) for pt in m.members(S)) + "}"
            break
    return CheckResult(
        f"d-topology p={m.p} d={m.d}", counterexample is None, total, opens,
        detail=f"{mode}, {len(paths)} geodesic paths, {n} points",
        counterexample=counterexample, seconds=time.perf_counter() - t0,
    )


def _monotone(domain: _UpSetSpace, target: _UpSetSpace, f: Sequence[int]) -> bool:
    return all(target.leq(f[i], f[j]) for i, j in domain.covers)


def vertex_valued_maps_constant(path: PathModel, m: ComplexModel, limit: int = ENUMERATION_LIMIT) -> CheckResult:
    """Every continuous map ``path -> m`` that only hits vertex points is constant."""
    t0 = time.perf_counter()
    k, targets = len(path.points), m.vertex_indices
    total = len(targets) ** k
    if total > limit:
        raise TooLarge(f"{total} candidate maps exceed the limit {limit}")
    continuous = 0
    bad = None
    for f in product(targets, repeat=k):
        if _monotone(path, m, f):
            continuous += 1
            if len(set(f)) > 1 and bad is None:
                bad = " ".join(point_name(m.points[i]) for i in f)
    return CheckResult(
        f"vertex-valued maps constant path={k} p={m.p} d={m.d}", bad is None, total, continuous,
        detail=f"{continuous} continuous", counterexample=bad, seconds=time.perf_counter() - t0,
    )


def point_action(g, m: ComplexModel) -> tuple[int, ...]:
    """Permutation of model points induced by a tree automorphism (Portrait or Element).

    A vertex goes to its image; the edge above ``v`` goes to the edge above ``g(v)``.
    """
    return tuple(m.index[(kind, tuple(g(word)))] for kind, word in m.points)


def evaluation_compatible(m: ComplexModel, act_lo: Sequence[int], act_hi: Sequence[int]) -> bool:
    """Evaluation respects a domain cover ``x < x'``: ``q(x)(t) <= q(x')(t)`` for every point ``t``."""
    return all(m.leq(a, b) for a, b in zip(act_lo, act_hi))


def functional_plot_enumeration_check(path: PathModel, p: int, d: int,
                                      limit: int = ENUMERATION_LIMIT) -> CheckResult:
    """Maps ``q: path -> Aut(T_d)`` with continuous evaluation ``(x, t) -> q(x)(t)`` are constant.

    The product ``path x T_d`` carries the product order; its covers are a
    domain cover with a fixed model point, or a fixed domain point with a
    model cover. Every candidate ``q`` is tested against both kinds.
    """
    t0 = time.perf_counter()
    m = build_complex(p, d)
    autos = list(enumerate_portraits(p, d))
    k = len(path.points)
    total = len(autos) ** k
    if total > limit:
        raise TooLarge(f"{total} candidate maps exceed the limit {limit}")
    acts = [point_action(g, m) for g in autos]
    model_ok = [all(m.leq(act[i], act[j]) for i, j in m.covers) for act in acts]
    pair_ok = [[evaluation_compatible(m, a, b) for b in acts] for a in acts]
    continuous = 0
    constants = 0
    bad = None
    for q in product(range(len(autos)), repeat=k):
        if not all(model_ok[i] for i in q):
            continue
        if not all(pair_ok[q[i]][q[j]] for i, j in path.covers):
            continue
        continuous += 1
        if len(set(q)) == 1:
            constants += 1
        elif bad is None:
            bad = " | ".join(str(autos[i].perms) for i in q)
    passed = bad is None and constants == len(autos)
    return CheckResult(
        f"discreteness path={k} p={p} d={d}", passed, total, continuous,
        detail=f"|Aut(T_{d})|={len(autos)}, {continuous} continuous, "
               + ("all constant" if bad is None else "non-constant found"),
        counterexample=bad, seconds=time.perf_counter() - t0,
    )
