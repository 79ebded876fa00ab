"""Text formats: automaton files, element expressions, fixtures.

Automaton file::

    alphabet: 2
    state e = id | e e
    state t = (0 1) | e t

Blank lines and ``#`` comments are ignored; the alphabet line must come
first. Element expressions are ``*``-separated factors ``name``,
``name^-1`` or ``name^k``; ``1`` denotes the identity.
"""
from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

from .automorphism import Automaton, Element, validate_automaton
from .perm import NotAPermutation, Perm

FIXTURES = ("rootswap", "odometer", "grigorchuk")

_ALPHABET = re.compile(r"alphabet\s*:\s*(\d+)")
_STATE = re.compile(r"state\s+([A-Za-z_][\w']*)\s*=\s*(.+?)\s*\|\s*(.*)")
_FACTOR = re.compile(r"([A-Za-z_][\w']*)(?:\^(-?\d+))?")


class AutomatonSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ValidationError(ValueError):
    def __init__(self, violations):
        super().__init__("; ".join(map(str, violations)))
        self.violations = list(violations)


def parse_automaton(text: str) -> Automaton:
    p = None
    table: dict[str, tuple] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if p is None:
            m = _ALPHABET.fullmatch(line)
            if not m:
                raise AutomatonSyntaxError("expected 'alphabet: <p>'", lineno)
            p = int(m.group(1))
            if p < 2:
                raise AutomatonSyntaxError("alphabet size must be >= 2", lineno)
            continue
        m = _STATE.fullmatch(line)
        if not m:
            raise AutomatonSyntaxError(f"cannot parse {line!r}", lineno)
        name, perm_text, targets_text = m.groups()
        if name in table:
            raise AutomatonSyntaxError(f"state {name!r} declared twice", lineno)
        try:
            perm = Perm.parse(perm_text, p)
        except NotAPermutation as exc:
            raise AutomatonSyntaxError(str(exc), lineno) from None
        targets = targets_text.split()
        if len(targets) != p:
            raise AutomatonSyntaxError(f"state {name!r} needs {p} sections, got {len(targets)}", lineno)
        table[name] = (perm, targets)
    if p is None:
        raise AutomatonSyntaxError("expected 'alphabet: <p>'", 1)
    if not table:
        raise AutomatonSyntaxError("no states declared", len(text.splitlines()) or 1)
    aut = Automaton.build(p, table)
    report = validate_automaton(aut)
    if not report.valid:
        raise ValidationError(report.violations)
    return aut


def format_automaton(aut: Automaton) -> str:
    lines = [f"alphabet: {aut.p}"]
    for name in aut.states:
        targets = " ".join(aut.section_names(name))
        lines.append(f"state {name} = {aut.output(name)} | {targets}")
    return "\n".join(lines) + "\n"


def load_fixture(name: str) -> Automaton:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    text = resources.files("treeaut.fixtures").joinpath(f"{name}.aut").read_text()
    return parse_automaton(text)


def fixture_text(name: str) -> str:
    return resources.files("treeaut.fixtures").joinpath(f"{name}.aut").read_text()


def load_automaton(source: str) -> Automaton:
    """A fixture name or a path to an automaton file."""
    if source in FIXTURES:
        return load_fixture(source)
    return parse_automaton(Path(source).read_text())


def parse_element(aut: Automaton, text: str) -> Element:
    text = text.replace(" ", "")
    if text in ("", "1", "id"):
        return aut.one()
    word = []
    for factor in text.split("*"):
        m = _FACTOR.fullmatch(factor)
        if not m:
            raise ValueError(f"cannot parse factor {factor!r}")
        name, exp = m.group(1), int(m.group(2) or 1)
        if name not in aut:
            raise ValueError(f"unknown state {name!r}")
        word.extend([(name, 1 if exp > 0 else -1)] * abs(exp))
    return Element.from_word(aut, word)
