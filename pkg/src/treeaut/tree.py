"""Vertices of the p-regular rooted tree as words over {0, ..., p-1}.

A vertex is a plain tuple of ints; the root is ``()``. Tuples are immutable
and hash structurally, so vertices can be used directly as dictionary keys.
"""
from __future__ import annotations

from itertools import product
from typing import Iterator, Sequence

Vertex = tuple[int, ...]

ROOT: Vertex = ()
ROOT_SYMBOL = "ε"


class RootHasNoParent(ValueError):
    pass


class NotInSubtree(ValueError):
    pass


def check_alphabet(p: int) -> int:
    if not isinstance(p, int) or p < 2:
        raise ValueError(f"alphabet size must be an integer >= 2, got {p!r}")
    return p


def vertex(text: str | Sequence[int], p: int | None = None) -> Vertex:
    """Build a vertex from ``"011"``, ``"ε"``, ``""`` or a sequence of ints."""
    if isinstance(text, str):
        text = text.strip()
        if text in ("", ROOT_SYMBOL, "e", "root"):
            return ROOT
        try:
            letters = tuple(int(ch) for ch in text)
        except ValueError:
            raise ValueError(f"not a vertex: {text!r}") from None
    else:
        letters = tuple(int(a) for a in text)
    if p is not None:
        for a in letters:
            if not 0 <= a < p:
                raise ValueError(f"letter {a} out of range for p={p}")
    return letters


def format_vertex(v: Vertex, machine: bool = False) -> str:
    if not v:
        return "" if machine else ROOT_SYMBOL
    return "".join(str(a) for a in v)


def vertex_length(v: Vertex) -> int:
    return len(v)


def children(v: Vertex, p: int) -> list[Vertex]:
    return [v + (a,) for a in range(p)]


def parent(v: Vertex) -> Vertex:
    if not v:
        raise RootHasNoParent("the root has no parent")
    return v[:-1]


def is_adjacent(u: Vertex, v: Vertex) -> bool:
    if len(u) > len(v):
        u, v = v, u
    return len(v) == len(u) + 1 and v[:-1] == u


def in_subtree(u: Vertex, root: Vertex) -> bool:
    """True iff ``u`` lies in the subtree hanging from ``root``."""
    return u[: len(root)] == root


def strip_prefix(u: Vertex, root: Vertex) -> Vertex:
    """Canonical identification of the subtree at ``root`` with the whole tree."""
    if not in_subtree(u, root):
        raise NotInSubtree(f"{format_vertex(u)} is not below {format_vertex(root)}")
    return u[len(root):]


def level_vertices(n: int, p: int) -> list[Vertex]:
    """All ``p**n`` words of length ``n`` in lexicographic order."""
    if n < 0:
        raise ValueError("level must be >= 0")
    return list(product(range(p), repeat=n))


def iter_vertices(depth: int, p: int) -> Iterator[Vertex]:
    """Vertices of length ``0..depth``, shortest first, lexicographic within a level."""
    for n in range(depth + 1):
        yield from product(range(p), repeat=n)
