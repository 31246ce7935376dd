"""Substitutions, their associated matrices, fixed points and factor languages.

Matrix convention: entry ``(a, b)`` of ``matrix(s)`` is the number of
occurrences of ``b`` in ``s(a)``. With ``(s ∘ t)(a) = s(t(a))`` this gives
``matrix(s ∘ t) = matrix(t) @ matrix(s)``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import ParseError, PreconditionError, UnsupportedError
from .words import EMPTY, EPSILON_TEXT, Alphabet, Word, factors, window_hashes

SEPARATOR = 255


@dataclass(frozen=True)
class Substitution:
    alphabet: Alphabet
    images: tuple[Word, ...]

    def __post_init__(self):
        images = tuple(bytes(w) for w in self.images)
        object.__setattr__(self, "images", images)
        k = len(self.alphabet)
        if len(images) != k:
            raise ValueError("need exactly one image per letter")
        for a, w in enumerate(images):
            if not w:
                raise ValueError(f"image of {self.alphabet.letters[a]!r} is empty (erasing)")
            if max(w) >= k:
                raise ValueError("image uses a letter outside the alphabet")

    @classmethod
    def from_rules(cls, rules: Mapping[str, str]) -> "Substitution":
        """Build from ``{"a": "ab", "b": "ba"}``; letters keep the mapping's order."""
        alphabet = Alphabet(tuple(rules))
        return cls(alphabet, tuple(alphabet.parse(w) for w in rules.values()))

    def __len__(self):
        return len(self.alphabet)

    def __call__(self, w: Word) -> Word:
        return self.apply(w)

    def apply(self, w: Word) -> Word:
        images = self.images
        return b"".join(images[a] for a in w)

    def iterate(self, w: Word, k: int) -> Word:
        for _ in range(k):
            w = self.apply(w)
        return w

    def compose(self, inner: "Substitution") -> "Substitution":
        """The substitution ``self ∘ inner``."""
        if inner.alphabet != self.alphabet:
            raise ValueError("alphabets differ")
        return Substitution(self.alphabet, tuple(self.apply(w) for w in inner.images))

    def power(self, k: int) -> "Substitution":
        if k < 1:
            raise ValueError("power must be >= 1")
        result = self
        for _ in range(k - 1):
            result = self.compose(result)
        return result

    @cached_property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(w) for w in self.images)

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        k = len(self.alphabet)
        return tuple(tuple(w.count(b) for b in range(k)) for w in self.images)

    def dumps(self) -> str:
        fmt = self.alphabet.format
        return "".join(f"{tok} -> {fmt(w)}\n" for tok, w in zip(self.alphabet, self.images))

    def __str__(self):
        fmt = self.alphabet.format
        return ", ".join(f"{tok}->{fmt(w)}" for tok, w in zip(self.alphabet, self.images))


def parse_substitution(text: str) -> Substitution:
    rules: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, body = line.partition("->")
        head = head.strip()
        if not sep or not head or any(ch.isspace() for ch in head):
            raise ParseError(f"expected 'X -> w', got {raw!r}", lineno)
        rules.append((head, body.strip(), lineno))
    if not rules:
        raise ParseError("no rules found")
    seen: dict[str, int] = {}
    for head, _, lineno in rules:
        if head in seen:
            raise ParseError(f"second rule for letter {head!r} (first on line {seen[head]})", lineno)
        seen[head] = lineno
    try:
        alphabet = Alphabet(tuple(seen))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    images = []
    for head, body, lineno in rules:
        if body in ("", EPSILON_TEXT):
            raise ParseError(f"empty image for {head!r}; erasing substitutions are not supported", lineno)
        try:
            images.append(alphabet.parse(body))
        except ValueError as exc:
            raise ParseError(f"{exc} (every letter needs its own rule)", lineno) from None
    return Substitution(alphabet, tuple(images))


def load_substitution(path) -> Substitution:
    return parse_substitution(Path(path).read_text(encoding="utf-8"))


def thue_morse(letters: str = "ab") -> Substitution:
    a, b = letters
    return Substitution.from_rules({a: a + b, b: b + a})


def fibonacci() -> Substitution:
    return Substitution.from_rules({"a": "ab", "b": "a"})


def tribonacci() -> Substitution:
    return Substitution.from_rules({"a": "ab", "b": "ac", "c": "a"})


# --- structural predicates -------------------------------------------------

def associated_matrix(s: Substitution) -> tuple[tuple[int, ...], ...]:
    return s.matrix


def is_uniform(s: Substitution) -> bool:
    return len(set(s.lengths)) == 1


def is_injective(s: Substitution) -> bool:
    return len(set(s.images)) == len(s.images)


def is_primitive_matrix(matrix) -> bool:
    m = np.asarray(matrix, dtype=np.int64) > 0
    k = m.shape[0]
    power = m.copy()
    # Wielandt: a primitive k x k matrix has M^((k-1)^2+1) > 0.
    for _ in range((k - 1) ** 2):
        if power.all():
            return True
        power = (power.astype(np.int64) @ m.astype(np.int64)) > 0
    return bool(power.all())


def is_primitive(s: Substitution) -> bool:
    return is_primitive_matrix(s.matrix)


# --- fixed points -----------------------------------------------------------

def is_self_prolongable(s: Substitution, seed: int) -> bool:
    image = s.images[seed]
    return image[0] == seed and len(image) >= 2


def fixed_point_prefix(s: Substitution, seed: int, n: int) -> Word:
    """First ``n`` letters of the one-sided fixed point starting with ``seed``."""
    if not is_self_prolongable(s, seed):
        raise PreconditionError(
            f"letter {s.alphabet.letters[seed]!r} is not self-prolongable; use a power of the substitution")
    w = bytes([seed])
    while len(w) < n:
        w = s.apply(w)
    return w[:n]


def prolongable_power(s: Substitution) -> tuple[int, int]:
    """Smallest ``k`` such that ``s**k`` has a self-prolongable letter, and that letter."""
    k = len(s.alphabet)
    first = [w[0] for w in s.images]
    best = None
    for a in range(k):
        # cycle length of a under the first-letter map, if a lies on a cycle
        b, steps = first[a], 1
        while b != a and steps <= k:
            b, steps = first[b], steps + 1
        if b == a and (best is None or steps < best[0]):
            best = (steps, a)
    if best is None:  # pragma: no cover - the first-letter map always has a cycle
        raise PreconditionError("no periodic letter")
    period, seed = best
    power = period
    while len(s.power(power).images[seed]) < 2:
        power += period
        if power > 64 * k:
            raise PreconditionError("substitution does not grow from any periodic letter")
    return power, seed


def fixed_point(s: Substitution, n: int) -> Word:
    """Prefix of length ``n`` of a fixed point of the smallest prolongable power of ``s``."""
    power, seed = prolongable_power(s)
    return fixed_point_prefix(s.power(power) if power > 1 else s, seed, n)


# --- factor languages --------------------------------------------------------

class FactorLanguage:
    """Memoized factor sets ``B_n(X_s)`` of the subshift of a primitive substitution.

    ``depth[n]`` records how many substitution iterations were needed to
    stabilize length ``n``.
    """

    # membership of words up to this length goes through the cached sets
    SET_LIMIT = 64

    def __init__(self, subst: Substitution):
        if not is_primitive(subst):
            raise UnsupportedError("factor language is only computed for primitive substitutions")
        if max(subst.lengths) < 2:
            raise UnsupportedError("substitution does not grow")
        self.subst = subst
        self.depth: dict[int, int] = {}
        self._cache: dict[int, frozenset[Word]] = {}
        self._witness: tuple[int, bytes] = (0, b"")
        self._hashes: dict[int, np.ndarray] = {}
        self._lock = threading.RLock()

    def __repr__(self):
        return f"FactorLanguage({self.subst})"

    @property
    def alphabet(self) -> Alphabet:
        return self.subst.alphabet

    def words(self, n: int) -> frozenset[Word]:
        if n < 0:
            raise ValueError("length must be non-negative")
        cached = self._cache.get(n)
        if cached is not None:
            return cached
        with self._lock:
            if n not in self._cache:
                self._cache[n] = self._compute(n)
            return self._cache[n]

    def __contains__(self, w: Word) -> bool:
        n = len(w)
        cached = self._cache.get(n)
        if cached is not None:
            return w in cached
        if n <= self.SET_LIMIT:
            return w in self.words(n)
        return w in self.witness(n)

    def contains(self, w: Word) -> bool:
        return w in self

    def witness(self, n: int) -> bytes:
        """A separator-joined text whose separator-free factors are exactly ``B_m`` for ``m <= n``."""
        covered, text = self._witness
        if covered >= n:
            return text
        with self._lock:
            covered, text = self._witness
            if covered < n:
                n = max(n, 2 * covered)
                k, blocks = self._blocks(n)
                text = bytes([SEPARATOR]).join(blocks)
                self._witness = (n, text)
                self.depth.setdefault(n, k)
            return self._witness[1]

    def factor_hashes(self, n: int) -> np.ndarray:
        """Sorted hashes of ``B_n``, read off the witness text without listing the words."""
        cached = self._hashes.get(n)
        if cached is None:
            cached = np.unique(window_hashes(self.witness(n), n, SEPARATOR))
            self._hashes[n] = cached
        return cached

    def admits_all(self, text: bytes, n: int) -> bool:
        """Whether every separator-free length-``n`` window of ``text`` lies in ``B_n``.

        Uses hashing: a rejection is certain, an acceptance holds up to a
        hash collision (probability about ``2**-60`` per window).
        """
        if n <= 0:
            return True
        known = self.factor_hashes(n)
        probe = np.unique(window_hashes(text, n, SEPARATOR))
        if len(probe) == 0:
            return True
        return bool(np.isin(probe, known, assume_unique=True).all())

    def _blocks(self, n: int) -> tuple[int, list[bytes]]:
        # Once every s^k(a) has length >= n-1, each length-n factor of X lies
        # inside s^k(ab) for some two-letter factor ab.
        s = self.subst
        k = 0
        images = [bytes([a]) for a in range(len(s.alphabet))]
        while min(len(w) for w in images) < n - 1:
            images = [s.apply(w) for w in images]
            k += 1
        return k, [images[u[0]] + images[u[1]] for u in sorted(self.words(2))]

    def _compute(self, n: int) -> frozenset[Word]:
        if n == 0:
            return frozenset([EMPTY])
        if n <= 2:
            return self._closure(n)
        k, blocks = self._blocks(n)
        self.depth[n] = k
        out: set[Word] = set()
        for block in blocks:
            out.update(factors(block, n))
        return frozenset(out)

    def _closure(self, n: int) -> frozenset[Word]:
        # Exact fixpoint: length-n factors of s^(j+1)(a) are length-n factors of
        # s(v) for length-n factors v of s^j(a), once |s^j(a)| >= n.
        s = self.subst
        found: set[Word] = set()
        for a in range(len(s.alphabet)):
            w = bytes([a])
            while True:
                found |= factors(w, n)
                if len(w) >= n:
                    break
                w = s.apply(w)
        depth = 0
        while True:
            new = set()
            for v in found:
                new |= factors(s.apply(v), n)
            depth += 1
            if new <= found:
                break
            found |= new
        self.depth[n] = depth
        return frozenset(found)


@lru_cache(maxsize=None)
def factor_language(s: Substitution) -> FactorLanguage:
    """Shared, memoized language object per substitution."""
    return FactorLanguage(s)


def language(s: Substitution, n: int) -> frozenset[Word]:
    return factor_language(s).words(n)


# --- bounded heuristics ------------------------------------------------------

def is_aperiodic_heuristic(s: Substitution, depth: int = 64) -> bool:
    """False if the subshift is periodic with some period at most ``depth``.

    A minimal subshift is periodic iff some factor count ``p(n) <= n``
    (Morse-Hedlund), and a period ``P`` forces ``p(P) <= P``. So this is
    exact for periods up to ``depth`` and blind beyond. Prefix-periodicity
    tests are not used: substitutive fixed points contain long cubes such
    as ``s^k(a)^3`` that fool them.
    """
    if not is_primitive(s):
        raise UnsupportedError("aperiodicity is only checked for primitive substitutions")
    if max(s.lengths) < 2:
        return False
    lang = factor_language(s)
    return all(len(lang.words(n)) > n for n in range(1, depth + 1))


def bounded_power_exponent(s: Substitution, max_word_len: int, cap: int = 64) -> int | None:
    """Smallest ``N`` such that no ``w^N`` with ``0 < |w| <= max_word_len`` is a factor."""
    if not is_aperiodic_heuristic(s):
        return None
    lang = factor_language(s)
    candidates = [w for m in range(1, max_word_len + 1) for w in lang.words(m)]
    for n in range(2, cap + 1):
        candidates = [w for w in candidates if w * n in lang]
        if not candidates:
            return n
    return None


def recurrence_gap(s: Substitution, n: int) -> int:
    """Largest gap between consecutive occurrences of a length-``n`` factor.

    Measured on a fixed-point prefix; the position of the first occurrence
    (plus one) counts as a gap too, so every factor appears in the prefix of
    length ``recurrence_gap + n - 1``.
    """
    if n == 0:
        return 1
    words = language(s, n)
    length = 64 * (n + 1)
    while True:
        x = fixed_point(s, length)
        last: dict[Word, int] = {}
        gap = 0
        for i in range(len(x) - n + 1):
            w = x[i:i + n]
            prev = last.get(w, -1)
            if i - prev > gap:
                gap = i - prev
            last[w] = i
        if len(last) == len(words) and length >= 4 * gap + n:
            return gap
        length *= 2
