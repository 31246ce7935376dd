"""Dill maps given by finite implementation tables.

A table with in-radius ``I`` maps every factor of length ``I + 1`` of the
domain to a (possibly empty) word over the target alphabet. The map on
points is ``x -> phi(x[0:I+1]) phi(x[1:I+2]) ...``. Block maps are the
tables whose outputs all have length one.
"""

from __future__ import annotations

import graphlib
import hashlib
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d

from .errors import CompositionError, DomainError, NotRecognizableError, ParseError
from .spectra import dominant_eigenvalue
from .recognizer import BLANK, Recognizer, build_recognizer
from .substitution import SEPARATOR, Substitution, factor_language, fixed_point, recurrence_gap
from .words import EMPTY, EPSILON_TEXT, Word


@dataclass(frozen=True, eq=False)
class DillTable:
    domain: Substitution
    target: Substitution
    in_radius: int
    table: Mapping[Word, Word]

    def __post_init__(self):
        object.__setattr__(self, "table", dict(self.table))
        if self.in_radius < 0:
            raise ValueError("in-radius must be non-negative")
        want = factor_language(self.domain).words(self.in_radius + 1)
        if set(self.table) != want:
            missing = len(want - set(self.table))
            extra = len(set(self.table) - want)
            raise DomainError(f"table is not total on the factors of length {self.in_radius + 1} "
                              f"({missing} missing, {extra} not admissible)")

    @property
    def out_radius(self) -> int:
        return max(len(v) for v in self.table.values())

    @property
    def is_block_map(self) -> bool:
        return all(len(v) == 1 for v in self.table.values())

    def __call__(self, w: Word) -> Word:
        return apply_prefix(self, w)

    def __eq__(self, other):
        if not isinstance(other, DillTable):
            return NotImplemented
        return (self.domain == other.domain and self.target == other.target
                and self.in_radius == other.in_radius and self.table == other.table)

    def __hash__(self):
        return hash((self.domain, self.target, self.in_radius, frozenset(self.table.items())))

    def dumps(self) -> str:
        src, dst = self.domain.alphabet, self.target.alphabet
        lines = [f"in_radius: {self.in_radius}"]
        lines += [f"{src.format(w)} -> {dst.format(self.table[w])}" for w in sorted(self.table)]
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()[:8]

    def as_block_rule(self) -> "BlockRule":
        if not self.is_block_map:
            raise ValueError("not a block map: some output does not have length 1")
        return BlockRule(self.domain, self.target, self.in_radius,
                         {w: v[0] for w, v in self.table.items()})


@dataclass(frozen=True, eq=False)
class BlockRule:
    """Sliding block code with one-sided neighbourhood ``[0, radius]``."""

    domain: Substitution
    target: Substitution
    radius: int
    table: Mapping[Word, int]

    def __post_init__(self):
        object.__setattr__(self, "table", dict(self.table))
        want = factor_language(self.domain).words(self.radius + 1)
        if set(self.table) != want:
            raise DomainError(f"rule is not total on the factors of length {self.radius + 1}")

    def __eq__(self, other):
        if not isinstance(other, BlockRule):
            return NotImplemented
        return (self.domain == other.domain and self.target == other.target
                and self.radius == other.radius and self.table == other.table)

    def __hash__(self):
        return hash((self.domain, self.radius, frozenset(self.table.items())))

    def as_dill(self) -> DillTable:
        return from_block_map(self)

    def __call__(self, w: Word) -> Word:
        r = self.radius
        return bytes(self.table[w[i:i + r + 1]] for i in range(len(w) - r))

    def sort_key(self):
        return (self.radius, tuple(self.table[w] for w in sorted(self.table)))

    def dumps(self) -> str:
        src, dst = self.domain.alphabet, self.target.alphabet
        lines = [f"radius: {self.radius}"]
        lines += [f"{src.format(w)} -> {dst.letters[self.table[w]]}" for w in sorted(self.table)]
        return "\n".join(lines) + "\n"


# --- constructors ------------------------------------------------------------

def from_block_map(b: BlockRule) -> DillTable:
    return DillTable(b.domain, b.target, b.radius, {w: bytes([v]) for w, v in b.table.items()})


def from_substitution(s: Substitution) -> DillTable:
    return DillTable(s, s, 0, {bytes([a]): s.images[a] for a in range(len(s.alphabet))})


def shift_rule(s: Substitution, k: int = 1) -> BlockRule:
    """The shift power ``sigma^k`` as a block rule of radius ``k``."""
    return BlockRule(s, s, k, {w: w[k] for w in factor_language(s).words(k + 1)})


def identity_rule(s: Substitution) -> BlockRule:
    return shift_rule(s, 0)


def symbol_rule(domain: Substitution, target: Substitution, mapping: Mapping[int, int]) -> BlockRule:
    """Radius-0 rule applying a letter-to-letter map."""
    return BlockRule(domain, target, 0, {bytes([a]): mapping[a] for a in range(len(domain.alphabet))})


def parse_table(text: str, domain: Substitution, target: Substitution | None = None) -> DillTable:
    """Read a table in ``in_radius:`` or ``radius:`` format."""
    target = target or domain
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty table")
    lineno, head = lines[0]
    key, sep, value = head.partition(":")
    if not sep or key.strip() not in ("in_radius", "radius"):
        raise ParseError("expected 'in_radius: I' or 'radius: r' header", lineno)
    try:
        radius = int(value)
    except ValueError:
        raise ParseError(f"bad radius {value.strip()!r}", lineno) from None
    block = key.strip() == "radius"
    table: dict[Word, Word] = {}
    for lineno, line in lines[1:]:
        window, sep, out = (p.strip() for p in line.partition("->"))
        if not sep:
            raise ParseError(f"expected 'window -> output', got {line!r}", lineno)
        try:
            w = domain.alphabet.parse(window)
            v = target.alphabet.parse(out)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if len(w) != radius + 1:
            raise ParseError(f"window {window!r} should have length {radius + 1}", lineno)
        if block and len(v) != 1:
            raise ParseError("block rule outputs must be single letters", lineno)
        if w in table:
            raise ParseError(f"duplicate window {window!r}", lineno)
        table[w] = v
    try:
        return DillTable(domain, target, radius, table)
    except DomainError as exc:
        raise ParseError(str(exc)) from None


# --- application, canonical form, composition -----------------------------------

def apply_prefix(d: DillTable, w: Word) -> Word:
    """Concatenated outputs over the ``|w| - I`` full windows of ``w``."""
    k = d.in_radius + 1
    if len(w) < k:
        raise ValueError(f"word shorter than the window length {k}")
    table = d.table
    try:
        return b"".join([table[w[i:i + k]] for i in range(len(w) - k + 1)])
    except KeyError:
        raise DomainError("word contains a window outside the domain language") from None


def canonicalize(d: DillTable) -> DillTable:
    """Re-key the table on the shortest window prefix that determines every output."""
    for r in range(d.in_radius + 1):
        keyed: dict[Word, Word] = {}
        ok = True
        for w, v in d.table.items():
            if keyed.setdefault(w[:r + 1], v) != v:
                ok = False
                break
        if ok:
            if r == d.in_radius:
                return d
            return DillTable(d.domain, d.target, r, keyed)
    return d  # pragma: no cover - r == in_radius always succeeds


def compose(d2: DillTable, d1: DillTable, max_radius: int = 256) -> DillTable:
    """Table of ``d2 ∘ d1`` (apply ``d1`` first), canonicalized."""
    if d1.target != d2.domain:
        raise CompositionError("target of the inner map is not the domain of the outer map")
    lang = factor_language(d1.domain)
    i1, i2 = d1.in_radius, d2.in_radius
    k = i1
    while True:
        words = lang.words(k + 1)
        if all(len(apply_prefix(d1, w)) >= len(d1.table[w[:i1 + 1]]) + i2 for w in words):
            break
        k += 1
        if k > max_radius:
            raise CompositionError(f"inner map does not produce {i2} letters of look-ahead "
                                   f"within radius {max_radius}")
    table: dict[Word, Word] = {}
    t2 = d2.table
    for w in words:
        u = apply_prefix(d1, w)
        head = len(d1.table[w[:i1 + 1]])
        try:
            table[w] = b"".join([t2[u[j:j + i2 + 1]] for j in range(head)])
        except KeyError:
            raise CompositionError("inner map produced a word outside the outer map's domain") from None
    return canonicalize(DillTable(d1.domain, d2.target, k, table))


# --- structural checks ----------------------------------------------------------

def is_nontrivial(d: DillTable) -> bool:
    """No admissible infinite word has all of its windows producing the empty word.

    The silent windows of length ``k`` (words whose every table window
    outputs the empty word) form a graph with an edge for each admissible
    word of length ``k + 1``. An acyclic graph proves nontriviality. A cycle
    may use a periodic walk the subshift forbids, so ``k`` grows until the
    graph is acyclic; on a minimal domain this stops once some output is
    non-empty, because every window then recurs in every long word.
    """
    if not any(d.table.values()):
        return False
    lang = factor_language(d.domain)
    i = d.in_radius
    k = i + 1
    silent = {w for w, v in d.table.items() if not v}
    while silent:
        graph: dict[Word, set[Word]] = {w: set() for w in silent}
        for w in lang.words(k + 1):
            a, b = w[:-1], w[1:]
            if a in silent and b in silent:
                graph[a].add(b)
        try:
            tuple(graphlib.TopologicalSorter(graph).static_order())
            return True
        except graphlib.CycleError:
            pass
        k += 1
        silent = {w for w in lang.words(k) if w[:-1] in silent and w[1:] in silent}
    return True


def default_verify_len(d: DillTable) -> int:
    return 4 * recurrence_gap(d.domain, d.in_radius + 1) + d.in_radius


def _block_map_images(d: DillTable, text: bytes) -> bytes | None:
    # Vectorized sliding application of a block map; windows that touch a
    # separator produce the separator.
    k = d.in_radius + 1
    base = len(d.domain.alphabet) + 1
    if base ** k >= 2 ** 62 or len(text) < k:
        return None
    a = np.frombuffer(text, dtype=np.uint8).astype(np.int64)
    a = np.where(a == SEPARATOR, base - 1, a)
    m = len(text) - k + 1
    codes = np.zeros(m, dtype=np.int64)
    for j in range(k):
        codes = codes * base + a[j:j + m]
    keys = sorted((sum(c * base ** (k - 1 - j) for j, c in enumerate(w)), v[0]) for w, v in d.table.items())
    known = np.array([c for c, _ in keys], dtype=np.int64)
    letters = np.array([v for _, v in keys], dtype=np.uint8)
    pos = np.clip(np.searchsorted(known, codes), 0, len(known) - 1)
    hit = known[pos] == codes
    return np.where(hit, letters[pos], SEPARATOR).astype(np.uint8).tobytes()


def is_image_admissible(d: DillTable, verify_len: int | None = None) -> bool:
    """Images of the domain factors of length ``verify_len`` are target factors.

    Every such factor lies in one of the witness blocks of the domain
    language, so the blocks are mapped and every window of their images
    that is as long as the longest image of a ``verify_len``-factor is
    checked against the target language. This implies the stated property,
    and a genuine morphism always passes it.
    """
    n = verify_len if verify_len is not None else default_verify_len(d)
    n = max(n, d.in_radius + 1)
    text = factor_language(d.domain).witness(n)
    target = factor_language(d.target)
    if d.is_block_map:
        images = _block_map_images(d, text)
        if images is not None:
            return target.admits_all(images, n - d.in_radius)
    pieces, longest = [], 0
    sizes = {w: len(v) for w, v in d.table.items()}
    k = d.in_radius + 1
    for block in text.split(bytes([SEPARATOR])):
        if len(block) < n:
            continue
        pieces.append(apply_prefix(d, block))
        p = np.concatenate(([0], np.cumsum([sizes[block[i:i + k]] for i in range(len(block) - k + 1)])))
        span = n - d.in_radius
        longest = max(longest, int((p[span:] - p[:-span]).max()))
    return target.admits_all(bytes([SEPARATOR]).join(pieces), longest)


# --- invariants -------------------------------------------------------------------

@dataclass(frozen=True)
class InvariantReport:
    Z_estimate: float
    Z_width: float
    D_observed: float
    D_bounded: str  # "yes" | "no" | "unknown"
    I: int
    O: int
    horizon: int
    checkpoints: tuple[tuple[int, float], ...] = field(default=())

    def __str__(self):
        return (f"I={self.I} O={self.O} Z={self.Z_estimate:.6g}±{self.Z_width:.2g} "
                f"D={self.D_observed:.4g} bounded={self.D_bounded} horizon={self.horizon}")


@dataclass(frozen=True)
class InvariantBounds:
    Z: float
    D: float
    I: float


def _output_lengths(d: DillTable, n: int) -> np.ndarray:
    x = fixed_point(d.domain, n + d.in_radius)
    k = d.in_radius + 1
    size = {w: len(v) for w, v in d.table.items()}
    return np.fromiter((size[x[i:i + k]] for i in range(n)), dtype=np.int64, count=n)


def _max_deviation(q: np.ndarray, starts: int, h: int) -> float:
    # max |q[t] - q[s]| over s < starts-bound and s < t <= s + h
    # a centred filter of size h+1 at index s + (h+1)//2 covers [s, s+h]
    c = (h + 1) // 2
    hi = maximum_filter1d(q, size=h + 1)[c:c + starts + 1]
    lo = minimum_filter1d(q, size=h + 1)[c:c + starts + 1]
    base = q[: starts + 1]
    return float(max(np.max(hi - base), np.max(base - lo)))


def invariants(d: DillTable, horizon: int = 10_000, threshold: float = 64.0,
               start_factor: int = 4, stable_tol: float = 0.5) -> InvariantReport:
    """Measure expansion rate ``Z`` and discrepancy ``D`` along the domain fixed point.

    Output lengths are summed over windows of the fixed point starting at
    every position in ``[0, start_factor * horizon]``. ``Z`` is the midpoint
    of the extreme sums of length ``start_factor * horizon``, divided by that
    length. ``D`` is the largest ``| sum - Z n |`` over windows of length
    ``n <= h``, recorded at checkpoints ``h`` up to the horizon.

    Discrepancies of substitutive sequences grow in steps, one per level of
    the hierarchy, i.e. per factor ``lambda`` of the domain substitution. A
    plateau over the last half of the horizon can therefore be a step, so
    ``D`` counts as bounded only if it grew by at most ``stable_tol`` over
    the last factor ``max(2, lambda**2)`` of the horizon.
    """
    I, O = d.in_radius, d.out_radius
    sizes = {len(v) for v in d.table.values()}
    if len(sizes) == 1:
        z = float(sizes.pop())
        return InvariantReport(z, 0.0, 0.0, "yes", I, O, horizon, ((horizon, 0.0),))
    n = max(horizon, 2)
    starts = start_factor * n
    p = np.concatenate(([0], np.cumsum(_output_lengths(d, starts + n))))

    def midrange(h):
        sums = p[h:h + n + 1] - p[: n + 1]
        return (sums.max() + sums.min()) / (2 * h), (sums.max() - sums.min()) / (2 * h)

    z, half_range = midrange(starts)
    z_half, _ = midrange(starts // 2)
    width = max(abs(z - z_half), half_range)
    q = p - z * np.arange(len(p))
    span = max(2.0, dominant_eigenvalue(d.domain.matrix, Fraction(1, 10**6)).midpoint ** 2)
    stable_from = max(1, int(n / span))
    marks = sorted({max(1, n // k) for k in (16, 8, 4, 2, 1)} | {stable_from})
    checkpoints = tuple((h, _max_deviation(q, starts, h)) for h in marks)
    d_full = checkpoints[-1][1]
    d_early = dict(checkpoints)[stable_from]
    if d_full > threshold:
        verdict = "no"
    elif d_full - d_early <= stable_tol:
        verdict = "yes"
    else:
        verdict = "unknown"
    return InvariantReport(float(z), float(width), d_full, verdict, I, O, horizon, checkpoints)


def compose_invariant_bounds(r1: InvariantReport, r2: InvariantReport) -> InvariantBounds:
    """Predicted ``Z`` and upper bounds on ``D`` and ``I`` for ``d2 ∘ d1``."""
    z = r1.Z_estimate * r2.Z_estimate
    dd = r2.Z_estimate * r1.D_observed + r2.D_observed
    ii = (2 * r1.D_observed + r2.I) / r1.Z_estimate + r1.I + 1
    return InvariantBounds(z, dd, ii)


# --- almost equivalence and inverses ------------------------------------------------

def almost_equivalent(d1: DillTable, d2: DillTable, prefix_len: int = 1024,
                      shift_bound: int = 32) -> tuple[int, int] | None:
    """Smallest ``(i, j)`` (by ``i + j``, then ``i``) with ``sigma^i d1(x) = sigma^j d2(x)``.

    ``x`` is a fixed-point prefix of length ``prefix_len``; the shifted
    outputs must agree on at least ``prefix_len // 2`` letters.
    """
    if d1.domain != d2.domain or d1.target != d2.target:
        raise ValueError("maps have different domains or targets")
    x = fixed_point(d1.domain, prefix_len)
    u, v = apply_prefix(d1, x), apply_prefix(d2, x)
    need = prefix_len // 2
    if min(len(u), len(v)) - shift_bound < need:
        raise ValueError(f"outputs of length {len(u)}/{len(v)} too short for an overlap of {need} "
                         f"after shifting by up to {shift_bound}; raise prefix_len")
    for total in range(2 * shift_bound + 1):
        for i in range(max(0, total - shift_bound), min(total, shift_bound) + 1):
            j = total - i
            m = min(len(u) - i, len(v) - j)
            if u[i:i + m] == v[j:j + m]:
                return i, j
    return None


def almost_inverse(s: Substitution, r: Recognizer | None = None, max_radius: int = 16,
                   coverage_factor: int = 4) -> DillTable:
    """Table sending a window to the source letter when a block of ``s`` starts at its cut offset.

    With no recognizer given, the one-sided recognizer is used, so the cut
    is tested as close to offset 0 as possible.
    """
    if r is None:
        r = build_recognizer(s, max_radius, coverage_factor, one_sided=True)
    if r.subst != s:
        raise ValueError("recognizer was built for a different substitution")
    width = r.window
    table = {}
    for w in factor_language(s).words(width):
        if w not in r.table:
            raise NotRecognizableError("recognizer does not cover every admissible window")
        v = r.table[w]
        table[w] = EMPTY if v is BLANK else bytes([v])
    return canonicalize(DillTable(s, s, width - 1, table))


__all__ = [
    "BlockRule", "DillTable", "InvariantBounds", "InvariantReport", "EPSILON_TEXT",
    "almost_equivalent", "almost_inverse", "apply_prefix", "canonicalize", "compose",
    "compose_invariant_bounds", "default_verify_len", "from_block_map", "from_substitution",
    "identity_rule", "invariants", "is_image_admissible", "is_nontrivial", "parse_table",
    "shift_rule", "symbol_rule",
]
