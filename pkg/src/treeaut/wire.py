"""Geodesic lines of the tree and discrete-time checks on curves into Aut T.

A bi-infinite geodesic is stored by its vertex of minimal length ``v0`` and
the two rays descending from it. Its canonical parameterization puts
``v0`` at 0 and the vertices at integer parameters, one level per unit, so
open unit intervals are edges; nothing non-integer is ever evaluated. Both
sides descend, hence ``line_vertex(L, n)`` has length ``|v0| + |n|``.

A line is stored once (rays in lexicographic order), but as a curve it may
be traversed in either direction; :func:`geodesic_image_check` checks both.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from .automorphism import Element, _reduce, _split, apply, section
from .checks import CheckResult
from .topology import ConvergenceProfile, converges_congruence, same_coset_mod_stab
from .tree import ROOT, Vertex, format_vertex, is_adjacent, vertex


class RequiresRootLine(ValueError):
    pass


class CosetConditionFailed(ValueError):
    pass


def _primitive(word: tuple[int, ...]) -> tuple[int, ...]:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


@dataclass(frozen=True)
class Ray:
    """The infinite word ``preperiod . period . period ...``, kept in normal form."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        pre, per = tuple(self.preperiod), tuple(self.period)
        if not per:
            raise ValueError("period must be nonempty")
        per = _primitive(per)
        while pre and pre[-1] == per[-1]:
            per = (pre[-1],) + per[:-1]
            pre = pre[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def parse(cls, text: str) -> Ray:
        m = re.fullmatch(r"\s*(\d*)\((\d+)\)\s*", text)
        if not m:
            raise ValueError(f"ray must look like 01(10), got {text!r}")
        return cls(vertex(m.group(1)), vertex(m.group(2)))

    def letter(self, i: int) -> int:
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def prefix(self, n: int) -> Vertex:
        return tuple(self.letter(i) for i in range(n))

    def __lt__(self, other: Ray) -> bool:
        # eventually periodic words are decided by a prefix of this length
        n = max(len(self.preperiod), len(other.preperiod)) + len(self.period) * len(other.period)
        return self.prefix(n) < other.prefix(n)

    def __str__(self) -> str:
        return f"{format_vertex(self.preperiod, machine=True)}({format_vertex(self.period)})"


@dataclass(frozen=True)
class GeodesicLine:
    v0: Vertex
    minus: Ray
    plus: Ray

    def __post_init__(self):
        object.__setattr__(self, "v0", tuple(self.v0))
        if self.minus.letter(0) == self.plus.letter(0):
            raise ValueError("the two rays must leave v0 through different children")
        if self.plus < self.minus:
            minus, plus = self.plus, self.minus
            object.__setattr__(self, "minus", minus)
            object.__setattr__(self, "plus", plus)

    @property
    def contains_root(self) -> bool:
        return self.v0 == ROOT

    @classmethod
    def parse(cls, text: str) -> GeodesicLine:
        """``line v0=ε minus=0(0) plus=1(1)``; the leading ``line`` is optional."""
        fields = dict(tok.split("=", 1) for tok in text.split() if "=" in tok)
        try:
            return cls(vertex(fields.get("v0", "")), Ray.parse(fields["minus"]), Ray.parse(fields["plus"]))
        except KeyError as exc:
            raise ValueError(f"line literal is missing {exc}") from None

    def __str__(self) -> str:
        return f"line v0={format_vertex(self.v0)} minus={self.minus} plus={self.plus}"


def line_vertex(L: GeodesicLine, n: int) -> Vertex:
    if n >= 0:
        return L.v0 + L.plus.prefix(n)
    return L.v0 + L.minus.prefix(-n)


def _image_ray(g: Element, ray: Ray) -> Ray:
    """Image of an eventually periodic ray; periodic again since the pair
    (section-word, phase in the period) can take finitely many values."""
    aut = g.automaton
    word = _reduce(aut, g.codes)
    letters: list[int] = []
    seen: dict[tuple, int] = {}
    start = len(ray.preperiod)
    i = 0
    while True:
        if i >= start:
            key = (word, (i - start) % len(ray.period))
            if key in seen:
                first = seen[key]
                return Ray(tuple(letters[:first]), tuple(letters[first:]))
            seen[key] = i
        a = ray.letter(i)
        if word:
            images, sections = _split(aut, word)
            letters.append(images[a])
            word = _reduce(aut, sections[a])
        else:
            letters.append(a)
        i += 1


def apply_to_line(g: Element, L: GeodesicLine) -> GeodesicLine:
    h = section(g, L.v0)
    return GeodesicLine(apply(g, L.v0), _image_ray(h, L.minus), _image_ray(h, L.plus))


def root_lines(p: int, depth: int) -> list[GeodesicLine]:
    """One root line through every pair of level-``depth`` vertices in different first-level subtrees."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    lines = []
    for a in range(p):
        for b in range(a + 1, p):
            for tail_a in product(range(p), repeat=depth - 1):
                for tail_b in product(range(p), repeat=depth - 1):
                    wa, wb = (a,) + tail_a, (b,) + tail_b
                    lines.append(GeodesicLine(ROOT, Ray(wa[:-1], wa[-1:]), Ray(wb[:-1], wb[-1:])))
    return lines


@dataclass(frozen=True)
class CurveSamples:
    """Values ``s(n)`` of a curve into Aut T at the integers of ``[lo, hi]``."""

    lo: int
    hi: int
    values: Mapping[int, Element]

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty window")
        missing = [n for n in range(self.lo, self.hi + 1) if n not in self.values]
        if missing:
            raise ValueError(f"no sample at {missing}")

    @classmethod
    def from_list(cls, values: Sequence[Element], start: int = 0) -> CurveSamples:
        return cls(start, start + len(values) - 1, {start + i: g for i, g in enumerate(values)})

    def __call__(self, n: int) -> Element:
        return self.values[n]

    def __len__(self):
        return self.hi - self.lo + 1

    def translate(self, k: Element) -> CurveSamples:
        return CurveSamples(self.lo, self.hi, {n: k * g for n, g in self.values.items()})


@dataclass
class CurveVerdict:
    holds: bool
    index: int | None = None
    level: int | None = None
    detail: str = ""

    def __bool__(self):
        return self.holds

    def __str__(self):
        return "pass" if self.holds else f"fail at index {self.index}, level {self.level}: {self.detail}"


def _coset_pairs(s: CurveSamples) -> Iterable[tuple[int, int, int]]:
    """(index, neighbour index, level) for every constraint in the window."""
    for n in range(max(s.lo, 0), s.hi):
        yield n, n + 1, n
    for m in range(max(-s.hi, 0), -s.lo):
        yield -m, -m - 1, m


def coset_condition_check(s: CurveSamples) -> CurveVerdict:
    """``s(n), s(n+1)`` share a coset of ``stab(n)`` and ``s(-m), s(-m-1)`` one of ``stab(m)``."""
    for i, j, level in _coset_pairs(s):
        if not same_coset_mod_stab(s(i), s(j), level):
            return CurveVerdict(False, i, level, f"s({i}) and s({j}) differ on level {level}")
    return CurveVerdict(True)


def geodesic_image_check(s: CurveSamples, L: GeodesicLine, depth: int) -> CurveVerdict:
    """Along the root line ``L``, ``s(n+1)(L(n+1))`` must be a child of ``s(n)(L(n))``.

    Checked for ``0 <= n < depth`` in both directions of travel along ``L``.
    """
    if not L.contains_root:
        raise RequiresRootLine("the geodesic image check needs a line through the root")
    if s.lo > 0 or s.hi < depth:
        raise ValueError(f"samples must cover [0, {depth}]")
    for n in range(depth):
        for sign in (1, -1):
            here = apply(s(n), line_vertex(L, sign * n))
            there = apply(s(n + 1), line_vertex(L, sign * (n + 1)))
            if not (is_adjacent(here, there) and len(there) == len(here) + 1):
                return CurveVerdict(False, n, n,
                                    f"{format_vertex(there)} is not a child of {format_vertex(here)}")
    return CurveVerdict(True)


@dataclass
class StabilizationVerdict:
    holds: bool
    stable_from: dict[int, int]
    failures: list[tuple[int, int, int]]
    profile: ConvergenceProfile | None

    def __bool__(self):
        return self.holds


def stabilization_from_cosets(s: CurveSamples, cap: int = 16) -> StabilizationVerdict:
    """Check ``s(n) stab(n) == s(n+k) stab(n)`` for all ``n, k`` in the window.

    Requires the coset condition; the chain of consecutive cosets through the
    filtration ``stab(n+1) <= stab(n)`` then forces it. ``stable_from[n]`` is
    the first nonnegative index from which all samples share one coset of
    ``stab(n)``.
    """
    first = coset_condition_check(s)
    if not first:
        raise CosetConditionFailed(str(first))
    failures = []
    for n in range(max(s.lo, 0), s.hi + 1):
        for k in range(1, s.hi - n + 1):
            if not same_coset_mod_stab(s(n), s(n + k), n):
                failures.append((n, n + k, n))
    for m in range(max(-s.hi, 0), -s.lo + 1):
        for k in range(1, -s.lo - m + 1):
            if not same_coset_mod_stab(s(-m), s(-m - k), m):
                failures.append((-m, -m - k, m))
    stable_from = {}
    lo = max(s.lo, 0)
    for n in range(0, s.hi + 1):
        start = s.hi
        while start > lo and same_coset_mod_stab(s(start - 1), s(start), n):
            start -= 1
        stable_from[n] = start
    terms = [s(n) for n in range(lo, s.hi + 1)]
    profile = converges_congruence(terms, cap) if len(terms) >= 2 else None
    return StabilizationVerdict(not failures, stable_from, failures, profile)


def coset_geodesic_equivalence(elements: Sequence[Element], length: int, p: int) -> CheckResult:
    """Run both curve checks on every length-``length`` sequence over ``elements``.

    The verdicts must coincide; the geodesic side uses every root line to
    depth ``length - 1``.
    """
    depth = length - 1
    lines = root_lines(p, depth)
    agree = 0
    total = 0
    passing = 0
    counterexample = None
    for combo in product(range(len(elements)), repeat=length):
        s = CurveSamples.from_list([elements[i] for i in combo])
        cosets = bool(coset_condition_check(s))
        images = all(geodesic_image_check(s, L, depth) for L in lines)
        total += 1
        passing += cosets
        if cosets == images:
            agree += 1
        elif counterexample is None:
            counterexample = f"indices {combo}: coset={cosets} geodesic={images}"
    return CheckResult(
        name=f"coset<=>geodesic p={p} len={length}",
        passed=agree == total,
        candidates=total,
        passing=passing,
        detail=f"{agree} agreeing verdicts over {len(lines)} root lines",
        counterexample=counterexample,
    )
