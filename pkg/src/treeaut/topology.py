"""Level stabilizers, rigid stabilizers and the congruence ultrametric.

The congruence topology has the level stabilizers ``stab(n)`` as a base of
neighbourhoods of the identity. It is metrized here by ``d(g, h) = 2**-k``
where ``k`` is the deepest level on which ``g`` and ``h`` agree; any base
gives the same topology. Every automorphism fixes the root, so ``stab(0)``
is the whole group and ``k >= 0`` always. For the full group ``Aut T`` the
profinite topology coincides with this one and is not computed separately.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .automorphism import (Element, apply, compose, equals, first_moving_level,
                           fixes_level, invert, is_identity, section, activity)
from .tree import Vertex, format_vertex, in_subtree, iter_vertices

EQUAL = math.inf
"""Agreement level reported for equal elements."""


class CapExceeded(ValueError):
    pass


def in_vertex_stab(g: Element, v: Vertex) -> bool:
    return apply(g, v) == tuple(v)


def in_stab(g: Element, n: int) -> bool:
    """Membership in the ``n``-th level stabilizer."""
    return fixes_level(g, n)


def agreement_level(g: Element, h: Element, cap: int) -> float:
    """Deepest level ``n <= cap`` on which ``g`` and ``h`` act identically.

    Returns :data:`EQUAL` when the elements are equal. Distinct elements that
    agree through ``cap`` get ``cap``.
    """
    if cap < 0:
        raise ValueError("cap must be >= 0")
    moving = first_moving_level(compose(invert(g), h), cap)
    if moving is not None:
        return moving - 1
    return EQUAL if equals(g, h) else cap


def congruence_distance(g: Element, h: Element, cap: int) -> float:
    level = agreement_level(g, h, cap)
    if level == EQUAL:
        return 0.0
    if level >= cap:
        raise CapExceeded(f"{g} and {h} agree through level {cap} but are not equal")
    return 2.0 ** -level


def same_coset_mod_stab(g: Element, h: Element, n: int) -> bool:
    """``g stab(n) == h stab(n)``, i.e. ``g`` and ``h`` agree on level ``n``."""
    return fixes_level(compose(invert(g), h), n)


@dataclass
class RistVerdict:
    holds: bool
    witness: Vertex | None = None

    def __bool__(self):
        return self.holds

    def __str__(self):
        if self.holds:
            return "true"
        if self.witness is None:
            return "false"
        return f"false (moves {format_vertex(self.witness)})"


def in_rist(g: Element, v: Vertex, depth: int) -> RistVerdict:
    """Is ``g`` in the rigid stabilizer of ``v`` (fixes everything outside ``T_v``)?

    Exact: along the path to ``v`` every activity must be trivial and every
    section hanging off the path must be the identity. ``depth`` only bounds
    the search for a witness vertex outside ``T_v`` when the answer is no.
    """
    v = tuple(v)
    if depth < len(v):
        raise ValueError("depth must be at least the length of v")
    aut = g.automaton
    holds = True
    current = g
    for i, a in enumerate(v):
        if not activity(current).is_identity():
            holds = False
            break
        if any(not is_identity(section(current, (b,))) for b in range(aut.p) if b != a):
            holds = False
            break
        current = section(current, (a,))
    if holds:
        return RistVerdict(True)
    for u in iter_vertices(depth, aut.p):
        if not in_subtree(u, v) and apply(g, u) != u:
            return RistVerdict(False, u)
    return RistVerdict(False)


@dataclass
class ConvergenceProfile:
    """Consecutive agreement levels and distances of a finite sequence.

    ``stabilization[n]`` is the first index from which every later element
    lies in the same coset of ``stab(n)``. The sequence is judged Cauchy when
    consecutive distances never increase and end either at 0 or strictly
    below where they started; with a ``limit`` the distances to it must
    behave the same way for ``converges``.
    """

    length: int
    levels: list[float]
    distances: list[float]
    stabilization: dict[int, int]
    cauchy: bool
    limit_distances: list[float] | None = None
    converges: bool | None = None
    cap: int = 0

    def lines(self) -> list[str]:
        out = [f"pair {i}-{i + 1}\tlevel={_fmt_level(k)}\tdistance={d:g}"
               for i, (k, d) in enumerate(zip(self.levels, self.distances))]
        if self.limit_distances is not None:
            out += [f"term {i}\tdistance_to_limit={d:g}" for i, d in enumerate(self.limit_distances)]
        out.append(f"cauchy={self.cauchy}" + ("" if self.converges is None else f"\tconverges={self.converges}"))
        return out


def _fmt_level(k: float) -> str:
    return "EQUAL" if k == EQUAL else str(int(k))


def _shrinking(ds: Sequence[float]) -> bool:
    if not ds:
        return True
    monotone = all(x >= y for x, y in zip(ds, ds[1:]))
    return monotone and (ds[-1] == 0 or ds[-1] < ds[0])


def _distance_from_level(level: float) -> float:
    return 0.0 if level == EQUAL else 2.0 ** -level


def converges_congruence(seq: Sequence[Element], cap: int, limit: Element | None = None) -> ConvergenceProfile:
    if len(seq) < 2:
        raise ValueError("need at least two terms")
    levels = [agreement_level(g, h, cap) for g, h in zip(seq, seq[1:])]
    distances = [_distance_from_level(k) for k in levels]
    stabilization = {}
    for n in range(cap + 1):
        start = len(seq) - 1
        while start > 0 and same_coset_mod_stab(seq[start - 1], seq[start], n):
            start -= 1
        stabilization[n] = start
    profile = ConvergenceProfile(len(seq), levels, distances, stabilization, _shrinking(distances), cap=cap)
    if limit is not None:
        limit_levels = [agreement_level(g, limit, cap) for g in seq]
        profile.limit_distances = [_distance_from_level(k) for k in limit_levels]
        profile.converges = _shrinking(profile.limit_distances)
    return profile
