"""Alphabets and finite words.

Words are stored as ``bytes``: each byte is the index of a letter in its
alphabet. This keeps them immutable, hashable and cheap to slice, and lets
substring search run in C. Alphabets are therefore limited to 255 letters
(index 255 is reserved as a separator in witness strings).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

Word = bytes

EMPTY: Word = b""
EPSILON_TEXT = "-"
MAX_LETTERS = 255


@dataclass(frozen=True)
class Alphabet:
    letters: tuple[str, ...]

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        if not letters:
            raise ValueError("alphabet must be non-empty")
        if len(letters) > MAX_LETTERS:
            raise ValueError(f"at most {MAX_LETTERS} letters supported")
        if len(set(letters)) != len(letters):
            raise ValueError("alphabet letters must be distinct")
        for tok in letters:
            if not tok or any(ch.isspace() for ch in tok) or tok == EPSILON_TEXT:
                raise ValueError(f"invalid letter token {tok!r}")
        object.__setattr__(self, "_index", {tok: i for i, tok in enumerate(letters)})

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def index(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise ValueError(f"unknown letter {token!r}") from None

    @property
    def single_char(self) -> bool:
        return all(len(tok) == 1 for tok in self.letters)

    def word(self, tokens: Iterable[str]) -> Word:
        return bytes(self.index(t) for t in tokens)

    def parse(self, text: str) -> Word:
        """Parse a word in text form (contiguous characters or whitespace-separated tokens)."""
        text = text.strip()
        if text == EPSILON_TEXT or text == "":
            return EMPTY
        if any(ch.isspace() for ch in text):
            return self.word(text.split())
        if self.single_char:
            return self.word(text)
        return self.word([text])

    def format(self, word: Word) -> str:
        if not word:
            return EPSILON_TEXT
        if self.single_char:
            return "".join(self.letters[i] for i in word)
        return " ".join(self.letters[i] for i in word)


def occurrences(w: Word, v: Word) -> int:
    """Number of (possibly overlapping) occurrences of ``v`` in ``w``."""
    if not v:
        raise ValueError("pattern must be non-empty")
    count = 0
    i = w.find(v)
    while i >= 0:
        count += 1
        i = w.find(v, i + 1)
    return count


def factors(w: Word, n: int) -> set[Word]:
    if n < 0:
        raise ValueError("length must be non-negative")
    if n > len(w):
        return set()
    return {w[i:i + n] for i in range(len(w) - n + 1)}


def is_factor_closed(words: set[Word], shorter: set[Word]) -> bool:
    """True if both length-(n-1) factors of every word of ``words`` lie in ``shorter``."""
    return all(w[:-1] in shorter and w[1:] in shorter for w in words)


# --- window hashing -----------------------------------------------------------
# Two polynomial hashes modulo Mersenne-sized primes, packed into one int64.
# Equal windows always hash equal; distinct windows collide with probability
# about 2**-60 per pair.

_PRIMES = (2_147_483_647, 2_147_483_629)
_BASES = (1_000_003, 972_663_749)


_POWER_CACHE: dict[tuple[int, int], np.ndarray] = {}


def _powers(base: int, p: int, n: int) -> np.ndarray:
    """``base**i % p`` for ``i = 0..n``."""
    cached = _POWER_CACHE.get((base, p))
    if cached is not None and len(cached) > n:
        return cached[:n + 1]
    total = max(n + 1, 2 * len(cached) if cached is not None else 0)
    # doubling: out[s:2s] = out[:s] * base^s
    out = np.ones(total, dtype=np.int64)
    size = 1
    while size < total:
        m = min(size, total - size)
        out[size:size + m] = out[:m] * pow(base, size, p) % p
        size += m
    _POWER_CACHE[(base, p)] = out
    return out[:n + 1]


def window_hashes(text: bytes, n: int, separator: int | None = None) -> np.ndarray:
    """Hashes of all length-``n`` windows of ``text`` that avoid ``separator``."""
    if n <= 0:
        raise ValueError("window length must be positive")
    m = len(text) - n + 1
    if m <= 0:
        return np.empty(0, dtype=np.int64)
    a = np.frombuffer(text, dtype=np.uint8).astype(np.int64) + 1
    packed = np.zeros(m, dtype=np.int64)
    for p, b in zip(_PRIMES, _BASES):
        pw = _powers(b, p, len(text))
        inv = _powers(pow(b, p - 2, p), p, len(text))
        h = np.concatenate(([0], np.cumsum(a * pw[:-1] % p) % p))
        win = (h[n:] - h[:m]) % p * inv[:m] % p
        packed = (packed << 31) | win
    if separator is not None:
        bad = np.concatenate(([0], np.cumsum(a == separator + 1)))
        packed = packed[(bad[n:] - bad[:m]) == 0]
    return packed
