"""Permutations of a finite alphabet {0, ..., p-1}."""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations


class NotAPermutation(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Perm:
    """A permutation stored by its image list: ``Perm((1, 0))`` swaps 0 and 1.

    Products compose as functions, ``(s * t)(x) == s(t(x))``.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise NotAPermutation(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, p: int) -> Perm:
        return cls(tuple(range(p)))

    @classmethod
    def from_cycles(cls, cycles, p: int) -> Perm:
        images = list(range(p))
        seen: set[int] = set()
        for cycle in cycles:
            for i, x in enumerate(cycle):
                if not 0 <= x < p or x in seen:
                    raise NotAPermutation(f"bad cycle {cycle} for p={p}")
                seen.add(x)
                images[x] = cycle[(i + 1) % len(cycle)]
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str, p: int) -> Perm:
        """Parse ``id`` or disjoint cycles such as ``(0 1)(2 3)``."""
        text = text.strip()
        if text in ("id", "()", ""):
            return cls.identity(p)
        if not re.fullmatch(r"(\(\s*\d+(\s+\d+)*\s*\)\s*)+", text):
            raise NotAPermutation(f"cannot parse permutation {text!r}")
        cycles = [tuple(int(x) for x in body.split())
                  for body in re.findall(r"\(([^)]*)\)", text)]
        return cls.from_cycles(cycles, p)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: Perm) -> Perm:
        return Perm(tuple(self.images[y] for y in other.images))

    def inverse(self) -> Perm:
        inv = [0] * len(self.images)
        for x, y in enumerate(self.images):
            inv[y] = x
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        out, seen = [], set()
        for start in range(len(self.images)):
            if start in seen or self.images[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cycle.append(x)
                seen.add(x)
                x = self.images[x]
            out.append(tuple(cycle))
        return out

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "id"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


def symmetric_group(p: int) -> list[Perm]:
    """All ``p!`` permutations in lexicographic order of their image lists."""
    return [Perm(images) for images in permutations(range(p))]
