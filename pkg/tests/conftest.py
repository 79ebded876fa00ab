import pytest
from hypothesis import strategies as st

from treeaut.automorphism import Element
from treeaut.io import load_fixture


@pytest.fixture(scope="session")
def grig():
    return load_fixture("grigorchuk")


@pytest.fixture(scope="session")
def odo():
    return load_fixture("odometer")


@pytest.fixture(scope="session")
def swap():
    return load_fixture("rootswap")


def words(aut, max_size=8):
    gens = aut.generators()
    return st.lists(st.tuples(st.sampled_from(gens), st.sampled_from((1, -1))), max_size=max_size).map(
        lambda w: Element.from_word(aut, w))


def naive_apply(aut, word, v):
    """Reference action straight from the defining recursion, one state at a time."""
    def act(name, exp, v):
        if not v:
            return ()
        a, rest = v[0], v[1:]
        perm = aut.output(name)
        if exp == 1:
            return (perm(a),) + act(aut.section_names(name)[a], 1, rest)
        b = perm.inverse()(a)
        return (b,) + act(aut.section_names(name)[b], -1, rest)

    for name, exp in reversed(word):
        v = act(name, exp, tuple(v))
    return tuple(v)


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
