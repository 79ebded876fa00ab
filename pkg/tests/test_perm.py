import pytest

from treeaut.perm import NotAPermutation, Perm, symmetric_group


def test_parse_and_print():
    assert Perm.parse("id", 3) == Perm((0, 1, 2))
    assert Perm.parse("(0 1)", 2) == Perm((1, 0))
    assert Perm.parse("(0 1 2)", 3).images == (1, 2, 0)
    assert str(Perm.parse("(0 2)(1 3)", 4)) == "(0 2)(1 3)"
    assert str(Perm.identity(3)) == "id"
    with pytest.raises(NotAPermutation):
        Perm((0, 0))
    with pytest.raises(NotAPermutation):
        Perm.parse("(0 1)(1 2)", 3)


def test_composition_is_function_composition():
    for s in symmetric_group(3):
        for t in symmetric_group(3):
            assert all((s * t)(x) == s(t(x)) for x in range(3))
        assert (s * s.inverse()).is_identity()
    assert len(symmetric_group(4)) == 24
