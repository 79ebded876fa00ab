import pytest

from treeaut.io import (FIXTURES, AutomatonSyntaxError, ValidationError, format_automaton, load_fixture,
                        parse_automaton, parse_element)

ODOMETER = """alphabet: 2
state e = id | e e
state t = (0 1) | e t
"""


def test_parse_odometer():
    aut = parse_automaton(ODOMETER)
    assert aut.p == 2 and aut.states == ("e", "t") and aut.identity == "e"


def test_missing_alphabet_is_line_one():
    with pytest.raises(AutomatonSyntaxError) as info:
        parse_automaton("state e = id | e e\n")
    assert info.value.line == 1


def test_bad_line_number():
    with pytest.raises(AutomatonSyntaxError) as info:
        parse_automaton("alphabet: 2\nstate e = id | e e\nstate t = (0 1) e t\n")
    assert info.value.line == 3


def test_undeclared_state():
    with pytest.raises(ValidationError) as info:
        parse_automaton("alphabet: 2\nstate e = id | e e\nstate t = (0 1) | e u\n")
    assert info.value.violations[0].kind == "UnknownState"


def test_arity_and_permutation_errors():
    with pytest.raises(AutomatonSyntaxError):
        parse_automaton("alphabet: 3\nstate e = id | e e\n")
    with pytest.raises(AutomatonSyntaxError):
        parse_automaton("alphabet: 2\nstate e = (0 2) | e e\n")


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_round_trip(name):
    aut = load_fixture(name)
    assert parse_automaton(format_automaton(aut)) == aut


def test_element_expressions():
    aut = parse_automaton(ODOMETER)
    assert parse_element(aut, "t^3").word == (("t", 1),) * 3
    assert parse_element(aut, "t*t^-1*e").word == (("t", 1), ("t", -1), ("e", 1))
    assert parse_element(aut, "1").word == ()
    with pytest.raises(ValueError):
        parse_element(aut, "x")
    with pytest.raises(ValueError):
        parse_element(aut, "t**2")
