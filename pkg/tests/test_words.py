import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dillmaps.words import EMPTY, Alphabet, factors, is_factor_closed, occurrences, window_hashes

binary = st.binary(max_size=40).map(lambda b: bytes(x % 3 for x in b))


def test_alphabet_rejects_duplicates_and_blank_tokens():
    with pytest.raises(ValueError):
        Alphabet(("a", "a"))
    with pytest.raises(ValueError):
        Alphabet(("a", "b c"))
    with pytest.raises(ValueError):
        Alphabet(())
    with pytest.raises(ValueError):
        Alphabet(("-",))


def test_parse_and_format_single_char():
    ab = Alphabet(("a", "b"))
    assert ab.parse("abba") == bytes([0, 1, 1, 0])
    assert ab.format(bytes([1, 0])) == "ba"
    assert ab.parse("-") == EMPTY
    assert ab.format(EMPTY) == "-"


def test_parse_and_format_tokens():
    a = Alphabet(("a0", "a1", "c"))
    assert a.parse("a1 c a0") == bytes([1, 2, 0])
    assert a.format(bytes([2, 2])) == "c c"
    assert a.parse("a1") == bytes([1])
    with pytest.raises(ValueError):
        a.parse("a2")


@given(st.lists(st.integers(0, 2), max_size=30))
def test_format_parse_roundtrip(letters):
    for alph in (Alphabet(("x", "y", "z")), Alphabet(("a0", "a1", "b"))):
        w = bytes(letters)
        assert alph.parse(alph.format(w)) == w


@given(binary, binary.filter(bool))
def test_occurrences_matches_regex_lookahead(w, v):
    text, pat = w.decode("latin1"), v.decode("latin1")
    expected = len(re.findall(f"(?=({re.escape(pat)}))", text))
    assert occurrences(w, v) == expected


def test_occurrences_overlapping():
    assert occurrences(b"\x00\x00\x00", b"\x00\x00") == 2
    with pytest.raises(ValueError):
        occurrences(b"ab", b"")


@given(binary, st.integers(0, 6))
def test_factors_brute(w, n):
    expected = {w[i:i + n] for i in range(len(w) - n + 1)} if n <= len(w) else set()
    assert factors(w, n) == expected


@given(binary, st.integers(1, 6))
def test_factor_sets_of_a_word_are_closed(w, n):
    assert is_factor_closed(factors(w, n), factors(w, n - 1)) or len(w) < n


@given(st.binary(max_size=80), st.integers(1, 5))
def test_window_hashes_respect_equality(text, n):
    text = bytes(x % 4 if x % 9 else 255 for x in text)
    h = window_hashes(text, n, separator=255)
    windows = [text[i:i + n] for i in range(len(text) - n + 1) if 255 not in text[i:i + n]]
    assert len(h) == len(windows)
    seen = {}
    for w, x in zip(windows, h):
        assert seen.setdefault(w, x) == x
    assert len(set(seen.values())) == len(seen)
