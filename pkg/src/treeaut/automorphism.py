"""Automorphisms of the p-regular rooted tree given by finite self-similar automata.

Conventions
-----------
Automorphisms act on the LEFT. An element ``g`` with activity ``pi_g`` and
first-level sections ``g|_a`` acts by::

    g(a w) = pi_g(a) . g|_a(w)

from which follow

* ``pi_{gh} = pi_g o pi_h`` and ``(gh)|_a = g|_{pi_h(a)} . h|_a``,
* ``pi_{g^-1} = pi_g^-1`` and ``(g^-1)|_a = (g|_{pi_g^-1(a)})^-1``.

An :class:`Element` is a formal group word ``x_1 x_2 ... x_k`` over the states
of an automaton and their inverses; it denotes the composite with ``x_k``
applied first. Words are never normalised eagerly. Equality of elements is
decided semantically by :func:`is_identity`, which explores every section-word
reachable from ``g h^-1``. Sections of a word of length ``L`` are words of
length at most ``L``, so the exploration visits at most ``(2 s)^L`` words for
an automaton with ``s`` states and always terminates.

Internally a word is a tuple of integer codes: state ``i`` is ``2 i`` and its
inverse is ``2 i + 1``.
"""
from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .perm import NotAPermutation, Perm
from .tree import Vertex, check_alphabet, format_vertex, iter_vertices, level_vertices

Word = tuple[int, ...]


class AutomatonMismatch(ValueError):
    pass


class InvalidAutomaton(ValueError):
    pass


class NotInLevelStabilizer(ValueError):
    pass


class MalformedPortrait(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str  # UnknownState | NotAPermutation | WrongArity | DuplicateState | BadIdentityState
    state: str
    detail: str

    def __str__(self):
        return f"{self.kind}: state {self.state}: {self.detail}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid


@dataclass(frozen=True)
class Automaton:
    """Mealy-type automaton over the alphabet ``{0, ..., p-1}``.

    ``outputs[i]`` is the image list of state ``states[i]`` at the root and
    ``transitions[i][a]`` names its section at letter ``a``. Invalid data is
    accepted by the constructor so that :func:`validate_automaton` can report
    it; anything that acts on the tree calls :meth:`require_valid` first.
    """

    p: int
    states: tuple[str, ...]
    outputs: tuple[tuple[int, ...], ...]
    transitions: tuple[tuple[str, ...], ...]
    identity: str | None = None

    @classmethod
    def build(cls, p: int, table: Mapping[str, tuple], identity: str | None = None) -> Automaton:
        """``table`` maps a state name to ``(perm, [section names])``.

        ``perm`` may be a :class:`Perm`, an image tuple or cycle text. When
        ``identity`` is omitted the first state with trivial output and all
        transitions to itself is designated.
        """
        check_alphabet(p)
        states, outputs, transitions = [], [], []
        for name, (perm, targets) in table.items():
            if isinstance(perm, str):
                perm = Perm.parse(perm, p)
            images = perm.images if isinstance(perm, Perm) else tuple(perm)
            states.append(name)
            outputs.append(tuple(images))
            transitions.append(tuple(targets))
        if identity is None:
            for name, images, targets in zip(states, outputs, transitions):
                if images == tuple(range(p)) and all(t == name for t in targets):
                    identity = name
                    break
        return cls(p, tuple(states), tuple(outputs), tuple(transitions), identity)

    def require_valid(self) -> None:
        report = self._report
        if not report.valid:
            raise InvalidAutomaton("; ".join(map(str, report.violations)))

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def output(self, name: str) -> Perm:
        return Perm(self.outputs[self._index[name]])

    def section_names(self, name: str) -> tuple[str, ...]:
        return self.transitions[self._index[name]]

    def gen(self, name: str, exponent: int = 1) -> Element:
        return Element.from_word(self, [(name, exponent)])

    def one(self) -> Element:
        return Element(self, ())

    def generators(self, include_trivial: bool = False) -> list[str]:
        return [s for s in self.states
                if include_trivial or self._index[s] * 2 not in self._trivial]

    # -- cached tables ---------------------------------------------------

    @cached_property
    def _report(self) -> ValidationReport:
        return validate_automaton(self)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.states)}

    @cached_property
    def _tables(self) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
        self.require_valid()
        out, nxt = [], []
        for i in range(len(self.states)):
            images = self.outputs[i]
            inv = Perm(images).inverse().images
            targets = [self._index[t] for t in self.transitions[i]]
            out.append(images)
            nxt.append(tuple(2 * t for t in targets))
            out.append(inv)
            nxt.append(tuple(2 * targets[inv[c]] + 1 for c in range(self.p)))
        return tuple(out), tuple(nxt)

    @cached_property
    def _trivial(self) -> frozenset[int]:
        """Codes of states acting as the identity (greatest fixed point)."""
        ident = tuple(range(self.p))
        alive = {i for i in range(len(self.states)) if self.outputs[i] == ident}
        changed = True
        while changed:
            changed = False
            for i in list(alive):
                if any(self._index[t] not in alive for t in self.transitions[i]):
                    alive.discard(i)
                    changed = True
        return frozenset(c for i in alive for c in (2 * i, 2 * i + 1))


def validate_automaton(aut: Automaton) -> ValidationReport:
    report = ValidationReport()
    add = report.violations.append
    p = aut.p
    if not isinstance(p, int) or p < 2:
        add(Violation("BadAlphabet", "-", f"alphabet size {p!r} < 2"))
        return report
    seen: set[str] = set()
    for name in aut.states:
        if name in seen:
            add(Violation("DuplicateState", name, "declared twice"))
        seen.add(name)
    for name, images, targets in zip(aut.states, aut.outputs, aut.transitions):
        if sorted(images) != list(range(p)):
            add(Violation("NotAPermutation", name, f"output {tuple(images)} is not a bijection of 0..{p - 1}"))
        if len(targets) != p:
            add(Violation("WrongArity", name, f"{len(targets)} transitions for alphabet of size {p}"))
        for t in targets:
            if t not in seen and t not in aut.states:
                add(Violation("UnknownState", name, f"transition to undeclared state {t!r}"))
    if aut.identity is not None:
        if aut.identity not in aut.states:
            add(Violation("UnknownState", aut.identity, "designated identity state is not declared"))
        else:
            i = aut.states.index(aut.identity)
            if tuple(aut.outputs[i]) != tuple(range(p)) or any(t != aut.identity for t in aut.transitions[i]):
                add(Violation("BadIdentityState", aut.identity,
                              "designated identity state must have trivial output and loop on every letter"))
    return report


def merge_automata(*automata: Automaton) -> Automaton:
    """Union of automata over one alphabet; shared names must agree."""
    if not automata:
        raise ValueError("nothing to merge")
    p = automata[0].p
    table: dict[str, tuple] = {}
    identity = None
    for aut in automata:
        if aut.p != p:
            raise AutomatonMismatch(f"alphabet sizes differ: {p} vs {aut.p}")
        for name, images, targets in zip(aut.states, aut.outputs, aut.transitions):
            entry = (tuple(images), tuple(targets))
            if table.setdefault(name, entry) != entry:
                raise AutomatonMismatch(f"state {name!r} has conflicting definitions")
        identity = identity or aut.identity
    return Automaton.build(p, table, identity=identity)


def _same(g: Element, h: Element) -> Automaton:
    if g.automaton is not h.automaton and g.automaton != h.automaton:
        raise AutomatonMismatch("elements live over different automata")
    return g.automaton


@dataclass(frozen=True)
class Element:
    """A group word over the states of ``automaton``.

    ``==`` compares words syntactically; use :func:`equals` for equality of
    the tree automorphisms they denote.
    """

    automaton: Automaton
    codes: Word

    @classmethod
    def from_word(cls, aut: Automaton, word: Iterable[tuple[str, int]]) -> Element:
        aut.require_valid()
        codes = []
        for name, exp in word:
            if name not in aut:
                raise InvalidAutomaton(f"unknown state {name!r}")
            if exp not in (1, -1):
                raise ValueError("exponents must be +1 or -1")
            codes.append(2 * aut._index[name] + (exp == -1))
        return cls(aut, tuple(codes))

    @cached_property
    def _reduced(self) -> Word:
        return _reduce(self.automaton, self.codes)

    @property
    def word(self) -> tuple[tuple[str, int], ...]:
        names = self.automaton.states
        return tuple((names[c >> 1], -1 if c & 1 else 1) for c in self.codes)

    def __mul__(self, other: Element) -> Element:
        return compose(self, other)

    def __pow__(self, n: int) -> Element:
        base = self if n >= 0 else invert(self)
        return Element(self.automaton, base.codes * abs(n))

    def __invert__(self) -> Element:
        return invert(self)

    def __call__(self, v: Vertex) -> Vertex:
        return apply(self, v)

    def __repr__(self) -> str:
        return f"Element({self})"

    def __str__(self) -> str:
        if not self.codes:
            return "1"
        return "*".join(n if e == 1 else f"{n}^-1" for n, e in self.word)


# -- word-level machinery -------------------------------------------------

def _reduce(aut: Automaton, codes: Sequence[int]) -> Word:
    trivial = aut._trivial
    stack: list[int] = []
    for c in codes:
        if c in trivial:
            continue
        if stack and stack[-1] == c ^ 1:
            stack.pop()
        else:
            stack.append(c)
    return tuple(stack)


def _split(aut: Automaton, codes: Word) -> tuple[tuple[int, ...], list[Word]]:
    """Activity images and unreduced first-level section words of ``codes``."""
    out, nxt = aut._tables
    p = aut.p
    images = []
    sections = []
    for a in range(p):
        c = a
        sec = [0] * len(codes)
        for i in range(len(codes) - 1, -1, -1):
            k = codes[i]
            sec[i] = nxt[k][c]
            c = out[k][c]
        images.append(c)
        sections.append(tuple(sec))
    return tuple(images), sections


def _act(aut: Automaton, codes: Word, v: Vertex) -> Vertex:
    out, nxt = aut._tables
    trivial = aut._trivial
    letters = list(v)
    n = len(letters)
    for k in reversed(codes):
        state = k
        for i in range(n):
            if state in trivial:
                break
            a = letters[i]
            letters[i] = out[state][a]
            state = nxt[state][a]
    return tuple(letters)


def _section_codes(aut: Automaton, codes: Word, v: Vertex) -> Word:
    out, nxt = aut._tables
    current = list(codes)
    for a in v:
        c = a
        for i in range(len(current) - 1, -1, -1):
            k = current[i]
            current[i] = nxt[k][c]
            c = out[k][c]
        current = list(_reduce(aut, current))
    return tuple(current)


def _is_trivial(aut: Automaton, codes: Word) -> bool:
    start = _reduce(aut, codes)
    seen = {start}
    queue = deque([start])
    ident = tuple(range(aut.p))
    while queue:
        w = queue.popleft()
        if not w:
            continue
        images, sections = _split(aut, w)
        if images != ident:
            return False
        for s in sections:
            s = _reduce(aut, s)
            if s not in seen:
                seen.add(s)
                queue.append(s)
    return True


# -- public operations ----------------------------------------------------

def activity(g: Element) -> Perm:
    out, _ = g.automaton._tables
    images = list(range(g.automaton.p))
    for k in reversed(g.codes):
        images = [out[k][x] for x in images]
    return Perm(tuple(images))


def section(g: Element, v: Vertex) -> Element:
    """``g|_v``: the action induced on the subtree at ``v``, moved back to the root."""
    return Element(g.automaton, _section_codes(g.automaton, g.codes, tuple(v)))


def apply(g: Element, v: Vertex) -> Vertex:
    return _act(g.automaton, g._reduced, tuple(v))


def compose(g: Element, h: Element) -> Element:
    """The product ``g h``: apply ``h`` first, then ``g``."""
    return Element(_same(g, h), g.codes + h.codes)


def invert(g: Element) -> Element:
    return Element(g.automaton, tuple(c ^ 1 for c in reversed(g.codes)))


def is_identity(g: Element) -> bool:
    return _is_trivial(g.automaton, g.codes)


def equals(g: Element, h: Element) -> bool:
    aut = _same(g, h)
    return _is_trivial(aut, g.codes + invert(h).codes)


def phi(g: Element) -> tuple[tuple[Element, ...], Perm]:
    """Wreath recursion: ``(g|_0, ..., g|_{p-1})`` and the activity of ``g``."""
    aut = g.automaton
    images, sections = _split(aut, g.codes)
    return tuple(Element(aut, _reduce(aut, s)) for s in sections), Perm(images)


def fixes_level(g: Element, n: int) -> bool:
    """True iff ``g`` fixes every vertex of length ``n``.

    Walks the distinct section-words level by level and requires trivial
    activity above level ``n``; cost is bounded by the number of distinct
    section-words, not by ``p**n``.
    """
    if n < 0:
        raise ValueError("level must be >= 0")
    aut = g.automaton
    ident = tuple(range(aut.p))
    frontier = {_reduce(aut, g.codes)}
    for _ in range(n):
        following = set()
        for w in frontier:
            if not w:
                continue
            images, sections = _split(aut, w)
            if images != ident:
                return False
            following.update(_reduce(aut, s) for s in sections)
        frontier = following
        if frontier <= {()}:
            return True
    return True


def first_moving_level(g: Element, cap: int) -> int | None:
    """Smallest ``k <= cap`` such that ``g`` moves a vertex of length ``k``, else None."""
    aut = g.automaton
    ident = tuple(range(aut.p))
    frontier = {_reduce(aut, g.codes)}
    for level in range(1, cap + 1):
        following = set()
        for w in frontier:
            if not w:
                continue
            images, sections = _split(aut, w)
            if images != ident:
                return level
            following.update(_reduce(aut, s) for s in sections)
        frontier = following
        if frontier <= {()}:
            return None
    return None


def phi_n(g: Element, n: int) -> list[Element]:
    """Sections of ``g`` at the level-``n`` vertices, in lexicographic order.

    Defined on the level stabilizer, where it is an isomorphism onto the
    ``p**n``-fold product.
    """
    if not fixes_level(g, n):
        raise NotInLevelStabilizer(f"{g} does not fix level {n}")
    aut = g.automaton
    level = [_reduce(aut, g.codes)]
    for _ in range(n):
        level = [_reduce(aut, s) for w in level for s in _split(aut, w)[1]]
    return [Element(aut, w) for w in level]


# -- portraits ------------------------------------------------------------

def _level_offset(n: int, p: int) -> int:
    return (p ** n - 1) // (p - 1)


def _vertex_index(v: Vertex, p: int) -> int:
    r = 0
    for a in v:
        r = r * p + a
    return _level_offset(len(v), p) + r


@dataclass(frozen=True)
class Portrait:
    """Local permutations at every vertex of length ``< depth``.

    As an automorphism the portrait acts trivially below ``depth``, so
    portraits of one depth are exactly the elements of ``Aut(T_depth)``.
    ``perms`` is indexed shortest-first, lexicographically within a level.
    """

    depth: int
    p: int
    perms: tuple[Perm, ...]

    def __post_init__(self):
        if self.depth < 0:
            raise MalformedPortrait("depth must be >= 0")
        if len(self.perms) != _level_offset(self.depth, self.p):
            raise MalformedPortrait(f"expected {_level_offset(self.depth, self.p)} permutations, got {len(self.perms)}")
        for perm in self.perms:
            if not isinstance(perm, Perm) or perm.degree != self.p:
                raise MalformedPortrait(f"entry {perm!r} is not a permutation of degree {self.p}")

    @classmethod
    def from_mapping(cls, assignment: Mapping[Vertex, Perm], depth: int, p: int) -> Portrait:
        expected = set(iter_vertices(depth - 1, p)) if depth > 0 else set()
        keys = {tuple(v) for v in assignment}
        if keys != expected:
            missing = sorted(expected - keys)
            extra = sorted(keys - expected)
            raise MalformedPortrait(f"domain mismatch: missing {missing[:3]}, unexpected {extra[:3]}")
        ordered = sorted(keys, key=lambda v: (len(v), v))
        return cls(depth, p, tuple(assignment[v] for v in ordered))

    @classmethod
    def identity(cls, depth: int, p: int) -> Portrait:
        return cls(depth, p, (Perm.identity(p),) * _level_offset(depth, p))

    @property
    def assignment(self) -> dict[Vertex, Perm]:
        vertices = iter_vertices(self.depth - 1, self.p) if self.depth > 0 else ()
        return dict(zip(vertices, self.perms))

    def at(self, v: Vertex) -> Perm:
        if len(v) >= self.depth:
            return Perm.identity(self.p)
        return self.perms[_vertex_index(v, self.p)]

    def __call__(self, v: Vertex) -> Vertex:
        out = []
        index = 0
        for i, a in enumerate(v):
            if i >= self.depth:
                out.extend(v[i:])
                break
            out.append(self.perms[index].images[a])
            index = index * self.p + 1 + a
        return tuple(out)

    def __mul__(self, other: Portrait) -> Portrait:
        if self.p != other.p:
            raise AutomatonMismatch("portraits over different alphabets")
        depth = max(self.depth, other.depth)
        vertices = iter_vertices(depth - 1, self.p) if depth > 0 else ()
        return Portrait(depth, self.p, tuple(self.at(other(v)) * other.at(v) for v in vertices))

    def inverse(self) -> Portrait:
        vertices = iter_vertices(self.depth - 1, self.p) if self.depth > 0 else ()
        table = {}
        for v in vertices:
            table[self(v)] = self.at(v).inverse()
        return Portrait.from_mapping(table, self.depth, self.p)

    def is_identity(self) -> bool:
        return all(perm.is_identity() for perm in self.perms)

    def __str__(self) -> str:
        return "\n".join(f"{format_vertex(v)}\t{perm}" for v, perm in self.assignment.items())


def portrait(g: Element, n: int) -> Portrait:
    if n < 0:
        raise ValueError("depth must be >= 0")
    aut = g.automaton
    perms: list[Perm] = []
    memo: dict[Word, tuple] = {}
    level = [_reduce(aut, g.codes)]
    for _ in range(n):
        following = []
        for w in level:
            if w not in memo:
                images, sections = _split(aut, w)
                memo[w] = (Perm(images), [_reduce(aut, s) for s in sections])
            perm, sections = memo[w]
            perms.append(perm)
            following.extend(sections)
        level = following
    return Portrait(n, aut.p, tuple(perms))


def _state_name(images: tuple[int, ...], targets: tuple[str, ...]) -> str:
    digest = hashlib.sha1(repr((images, targets)).encode()).hexdigest()
    return "f" + digest[:10]


def from_portrait(P: Portrait, p: int | None = None, base: Automaton | None = None) -> Element:
    """Finitary element acting as ``P`` above its depth and trivially below.

    States are named by a hash of the sub-portrait they encode, so elements
    built from different portraits can be merged into one automaton (see
    :func:`merge_automata` and :func:`lift`). With ``base`` the synthesized
    states are added to a copy of ``base``.
    """
    if not isinstance(P, Portrait):
        raise MalformedPortrait("expected a Portrait")
    p = P.p if p is None else p
    if p != P.p:
        raise MalformedPortrait(f"portrait is over p={P.p}, not p={p}")
    if base is not None and base.p != p:
        raise AutomatonMismatch("base automaton has a different alphabet")
    if base is not None and base.identity is not None:
        ident = base.identity
    else:
        ident = "e" if base is None or "e" not in base else "_e"
    table: dict[str, tuple] = {ident: (tuple(range(p)), (ident,) * p)}
    identity_images = tuple(range(p))

    def build(v: Vertex) -> str:
        if len(v) >= P.depth:
            return ident
        targets = tuple(build(v + (a,)) for a in range(p))
        images = P.at(v).images
        if images == identity_images and all(t == ident for t in targets):
            return ident
        name = _state_name(images, targets)
        table[name] = (images, targets)
        return name

    root = build(())
    aut = Automaton.build(p, table, identity=ident)
    if base is not None:
        aut = merge_automata(base, aut)
    if root == ident:
        return Element(aut, ())
    return Element.from_word(aut, [(root, 1)])


def lift(g: Element, aut: Automaton) -> Element:
    """Re-express ``g`` over a larger automaton containing its states."""
    src = g.automaton
    for name in {n for n, _ in g.word}:
        if name not in aut or aut.output(name) != src.output(name) \
                or aut.section_names(name) != src.section_names(name):
            raise AutomatonMismatch(f"state {name!r} is not carried over unchanged")
    return Element.from_word(aut, g.word)


def common(*elements: Element) -> list[Element]:
    """Lift elements onto the union of their automata."""
    autos = []
    for g in elements:
        if g.automaton not in autos:
            autos.append(g.automaton)
    if len(autos) == 1:
        return list(elements)
    merged = merge_automata(*autos)
    return [lift(g, merged) for g in elements]


def enumerate_portraits(p: int, depth: int):
    """Every element of ``Aut(T_depth)`` as a portrait; ``(p!)**((p**depth-1)/(p-1))`` of them."""
    from itertools import product

    from .perm import symmetric_group

    sym = symmetric_group(p)
    for perms in product(sym, repeat=_level_offset(depth, p)):
        yield Portrait(depth, p, perms)


def finitary_elements(p: int, depth: int, base: Automaton | None = None) -> list[Element]:
    """All of ``Aut(T_depth)`` as elements over one shared automaton."""
    partial = [from_portrait(P, p) for P in enumerate_portraits(p, depth)]
    autos = [g.automaton for g in partial]
    if base is not None:
        autos.insert(0, base)
    merged = merge_automata(*autos)
    return [lift(g, merged) for g in partial]


def action_on_levels(g, depth: int, p: int) -> tuple[Vertex, ...]:
    """Images of all vertices of length ``<= depth`` under an Element or Portrait."""
    return tuple(g(v) for v in iter_vertices(depth, p))


__all__ = [
    "Automaton", "AutomatonMismatch", "Element", "InvalidAutomaton", "MalformedPortrait",
    "NotAPermutation", "NotInLevelStabilizer", "Portrait", "ValidationReport", "Violation",
    "activity", "action_on_levels", "apply", "common", "compose", "enumerate_portraits",
    "equals", "finitary_elements", "first_moving_level", "fixes_level", "from_portrait",
    "invert", "is_identity", "level_vertices", "lift", "merge_automata", "phi", "phi_n",
    "portrait", "section", "validate_automaton",
]
