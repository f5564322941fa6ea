import pytest

from fwdelta.errors import MalformedScriptError
from fwdelta.script import (
    EditScript,
    EditTriple,
    apply_script,
    canonicalize,
    script_cost,
    validate_script,
)

from _oracles import check_canonical


def t(nbd, nbc, lit=b""):
    return EditTriple(nbd, nbc, lit)


def test_contiguous_copies_merge():
    s = canonicalize([t(0, 2), t(0, 3)], old_len=5, new_len=5)
    assert s.triples == (t(0, 5),)


def test_trailing_skip_dropped():
    s = canonicalize([t(0, 2), t(3, 0)], old_len=5, new_len=2)
    assert s.triples == (t(0, 2),)


def test_adjacent_adds_merge():
    s = canonicalize([t(0, 0, b"X"), t(0, 0, b"Y")], old_len=0, new_len=2)
    assert s.triples == (t(0, 0, b"XY"),)


def test_zero_copy_literals_join_previous_add_run():
    s = canonicalize([t(0, 5, b"A"), t(2, 0, b"B"), t(1, 4)], old_len=12, new_len=11)
    assert s.triples == (t(0, 5, b"AB"), t(3, 4))
    check_canonical(s)


def test_mid_script_pure_skip_defers_to_next_copy():
    s = canonicalize([t(0, 1), t(4, 0), t(0, 2)], old_len=7, new_len=3)
    assert s.triples == (t(0, 1), t(4, 2))


def test_canonicalize_rejects_overrun():
    with pytest.raises(MalformedScriptError):
        canonicalize([t(0, 9)], old_len=5, new_len=9)


def test_canonicalize_rejects_wrong_new_len():
    with pytest.raises(MalformedScriptError):
        canonicalize([t(0, 2)], old_len=5, new_len=7)


def test_apply_examples():
    old = bytes([0xAA, 0xBB, 0xCC])
    s = EditScript((t(0, 1, bytes([0xDD])), t(1, 1)), 3, 3)
    assert apply_script(old, s) == bytes([0xAA, 0xDD, 0xCC])

    ident = EditScript((t(0, 3),), 3, 3)
    assert apply_script(old, ident) == old

    ins = EditScript((t(0, 0, b"AB"),), 0, 2)
    assert apply_script(b"", ins) == b"AB"

    empty = EditScript((), 4, 0)
    assert apply_script(b"abcd", empty) == b""


def test_apply_rejects_cursor_overrun():
    s = EditScript((t(2, 2),), 3, 2)
    with pytest.raises(MalformedScriptError):
        apply_script(b"abc", s)


def test_apply_rejects_length_mismatch():
    s = EditScript((t(0, 3),), 3, 3)
    with pytest.raises(MalformedScriptError):
        apply_script(b"abcd", s)


def test_script_cost():
    s = EditScript((t(0, 10),), 10, 10)
    assert script_cost(s) == (0, 0)
    s = EditScript((t(0, 1, bytes([0xDD])), t(1, 1)), 3, 3)
    assert script_cost(s) == (1, 1)
    s = EditScript((t(0, 0, b"hello"),), 0, 5)
    assert script_cost(s) == (0, 5)


def test_validate_rejects_dead_triple_and_unmerged_copies():
    with pytest.raises(MalformedScriptError):
        validate_script(EditScript((t(3, 0),), 5, 0))
    with pytest.raises(MalformedScriptError):
        validate_script(EditScript((t(0, 1), t(0, 1)), 5, 2))
    with pytest.raises(MalformedScriptError):
        validate_script(EditScript((t(0, 1, b"x"), EditTriple(-1, 2, b"")), 5, 4))
