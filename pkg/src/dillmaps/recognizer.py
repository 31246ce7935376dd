"""Cutting points of substitution fixed points and window-based recognizers.

A fixed point ``x = s(y)`` is cut into the blocks ``s(y_0) s(y_1) ...``.
A recognizer reads a window of ``x`` around a position and tells whether a
block starts there and, if so, which letter of ``y`` it comes from.

The window around position ``i`` is ``x[i - left : i + right + 1]``. The
symmetric build uses ``left == right``; the one-sided build prefers the
smallest ``left`` (zero whenever a right context alone suffices), which is
what the almost inverse needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import NotRecognizableError, PreconditionError, UnseenWindowError
from .substitution import (
    Substitution,
    factor_language,
    fixed_point_prefix,
    is_aperiodic_heuristic,
    is_primitive,
    prolongable_power,
    recurrence_gap,
)
from .words import Alphabet, Word

BLANK = None
BLANK_TEXT = "#"


@dataclass(frozen=True)
class CutData:
    prefix: Word
    cuts: tuple[int, ...]
    sources: tuple[int, ...]

    def __post_init__(self):
        if self.cuts and self.cuts[0] != 0:
            raise ValueError("first cut must be at 0")
        if len(self.cuts) != len(self.sources):
            raise ValueError("one source letter per cut")

    def labels(self) -> list[int | None]:
        """Per-position source letter, ``None`` where no block starts."""
        out: list[int | None] = [BLANK] * len(self.prefix)
        for c, a in zip(self.cuts, self.sources):
            out[c] = a
        return out


def _cuts_from_preimage(s: Substitution, y: Word, n: int) -> CutData:
    cuts, sources, pos = [], [], 0
    pieces = []
    for a in y:
        if pos >= n:
            break
        cuts.append(pos)
        sources.append(a)
        pieces.append(s.images[a])
        pos += len(s.images[a])
    return CutData(b"".join(pieces)[:n], tuple(cuts), tuple(sources))


def cut_data(s: Substitution, seed: int, n: int) -> CutData:
    """Cuts of the fixed point of ``s`` starting with ``seed``, below ``n``."""
    x = fixed_point_prefix(s, seed, n)
    return _cuts_from_preimage(s, x, n)


def fixed_point_cuts(s: Substitution, n: int) -> CutData:
    """Cuts of ``x = s(y)`` where ``x`` is a fixed point of a prolongable power of ``s``."""
    power, seed = prolongable_power(s)
    x = fixed_point_prefix(s.power(power) if power > 1 else s, seed, n)
    y = x if power == 1 else s.power(power - 1)(x)
    return _cuts_from_preimage(s, y, n)


@dataclass(frozen=True)
class Recognizer:
    """Window table: ``table[x[i-left : i+right+1]]`` is the source letter at a cut, else ``None``."""

    subst: Substitution
    left: int
    right: int
    table: Mapping[Word, int | None]
    prefix_len: int = 0

    @property
    def radius(self) -> int:
        return max(self.left, self.right)

    @property
    def window(self) -> int:
        return self.left + self.right + 1

    @property
    def symmetric(self) -> bool:
        return self.left == self.right

    def lookup(self, w: Word) -> int | None:
        try:
            return self.table[w]
        except KeyError:
            fmt = self.subst.alphabet.format
            raise UnseenWindowError(f"window {fmt(w)!r} never seen while building the recognizer") from None

    def dumps(self) -> str:
        fmt = self.subst.alphabet.format
        letters = self.subst.alphabet.letters
        head = f"{self.left}" if self.symmetric else f"{self.left} {self.right}"
        lines = [f"radius: {head}"]
        for w in sorted(self.table):
            v = self.table[w]
            lines.append(f"{fmt(w)} -> {BLANK_TEXT if v is BLANK else letters[v]}")
        return "\n".join(lines) + "\n"


def _window_table(x: Word, labels, left: int, right: int) -> dict[Word, int | None] | None:
    table: dict[Word, int | None] = {}
    for i in range(left, len(x) - right):
        w = x[i - left:i + right + 1]
        v = labels[i]
        prev = table.setdefault(w, v)
        if prev != v:
            return None
    return table


def _check_input(s: Substitution):
    if not is_primitive(s):
        raise PreconditionError("recognizers are built for primitive substitutions")
    if not is_aperiodic_heuristic(s):
        raise NotRecognizableError("subshift looks periodic; periodic substitutions are not recognizable")


def _try(s: Substitution, left: int, right: int, coverage_factor: int) -> Recognizer | None:
    width = left + right + 1
    lang = factor_language(s).words(width)
    n = coverage_factor * recurrence_gap(s, width) + width
    for _ in range(4):
        data = fixed_point_cuts(s, n + left + right)
        table = _window_table(data.prefix, data.labels(), left, right)
        if table is None:
            return None
        if set(table) >= lang:
            return Recognizer(s, left, right, table, len(data.prefix))
        n *= 2
    raise NotRecognizableError(f"windows of length {width} not all observed on a prefix of length {n}")


def build_recognizer(s: Substitution, max_radius: int = 16, coverage_factor: int = 4,
                     one_sided: bool = False) -> Recognizer:
    """Smallest conflict-free window table.

    Symmetric mode searches the radius ``L`` with ``left = right = L``.
    One-sided mode searches the smallest ``left`` and, for it, the smallest
    ``right``, each bounded by ``max_radius``.
    """
    _check_input(s)
    if not one_sided:
        for radius in range(0, max_radius + 1):
            r = _try(s, radius, radius, coverage_factor)
            if r is not None:
                return r
    else:
        for left in range(0, max_radius + 1):
            for right in range(0, max_radius + 1):
                r = _try(s, left, right, coverage_factor)
                if r is not None:
                    return r
    raise NotRecognizableError(f"window conflicts persist at radius {max_radius}")


def decode(r: Recognizer, w: Word) -> Word:
    """Source letters at recognized cuts of ``w`` (positions with a full window)."""
    if len(w) < r.window:
        raise ValueError(f"need at least {r.window} letters, got {len(w)}")
    out = bytearray()
    for i in range(r.left, len(w) - r.right):
        v = r.lookup(w[i - r.left:i + r.right + 1])
        if v is not BLANK:
            out.append(v)
    return bytes(out)


def parse_recognizer(text: str, subst: Substitution) -> Recognizer:
    from .errors import ParseError

    alphabet: Alphabet = subst.alphabet
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0][1].startswith("radius:"):
        raise ParseError("expected 'radius:' header", lines[0][0] if lines else None)
    try:
        radii = [int(t) for t in lines[0][1].split(":", 1)[1].split()]
    except ValueError:
        raise ParseError("bad radius header", lines[0][0]) from None
    if len(radii) not in (1, 2):
        raise ParseError("bad radius header", lines[0][0])
    left, right = radii[0], radii[-1]
    table: dict[Word, int | None] = {}
    for lineno, line in lines[1:]:
        window, sep, value = (p.strip() for p in line.partition("->"))
        if not sep:
            raise ParseError(f"expected 'window -> value', got {line!r}", lineno)
        try:
            w = alphabet.parse(window)
            v = BLANK if value == BLANK_TEXT else alphabet.index(value)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if len(w) != left + right + 1:
            raise ParseError(f"window length {len(w)} does not match radius", lineno)
        table[w] = v
    return Recognizer(subst, left, right, table)
