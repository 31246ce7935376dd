"""Exhaustive search for block maps between substitution subshifts.

A candidate rule assigns a target letter to every factor of length
``r + 1`` of the domain. It is kept if it maps every domain factor of
length ``verify_len`` to a factor of the target. The search assigns windows
depth-first, most frequent first, and prunes as soon as the image of a run
of already-assigned windows inside some constraint word is inadmissible.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .dill import BlockRule, almost_equivalent, canonicalize, compose, is_image_admissible, shift_rule
from .errors import BudgetExceeded, CompositionError, PreconditionError
from .recognizer import BLANK, Recognizer
from .substitution import (
    Substitution,
    factor_language,
    fixed_point,
    is_primitive,
    is_uniform,
    recurrence_gap,
)
from .words import Alphabet, Word


@dataclass
class MorphismClassSet:
    representatives: list[BlockRule]
    radius: int
    verify_len: int
    members: list[tuple[BlockRule, int, int]] = field(default_factory=list)  # (rule, class, k)

    def __len__(self):
        return len(self.representatives)

    def class_size(self, c: int) -> int:
        return sum(1 for _, cls, _ in self.members if cls == c)

    def min_radius(self, c: int) -> int:
        return min(canonical_radius(rule) for rule, cls, _ in self.members if cls == c)

    def report(self) -> str:
        lines = []
        for c, rep in enumerate(self.representatives):
            lines.append(f"class {c}: size={self.class_size(c)} min_radius={self.min_radius(c)} "
                         f"verified_to={self.verify_len}")
            lines.append(rep.dumps().rstrip("\n"))
            lines.append("")
        lines.append(f"classes={len(self)} radius={self.radius} verified_to={self.verify_len}")
        return "\n".join(lines) + "\n"


def canonical_radius(rule: BlockRule) -> int:
    return canonicalize(rule.as_dill()).in_radius


def default_verify_len(rho: Substitution, radius: int) -> int:
    return 4 * recurrence_gap(rho, radius + 1) + radius


def _window_order(tau: Substitution, windows, k: int) -> list[Word]:
    x = fixed_point(tau, 4096 + k)
    freq = Counter(x[i:i + k] for i in range(len(x) - k + 1))
    return sorted(windows, key=lambda w: (-freq[w], w))


def enumerate_block_maps(tau: Substitution, rho: Substitution, radius: int,
                         verify_len: int | None = None, node_budget: int = 2_000_000,
                         prefix_len: int = 512, prune_len: int = 32) -> MorphismClassSet:
    """All radius-``radius`` block rules from the subshift of ``tau`` into that of ``rho``.

    The search prunes with domain factors of length at most
    ``radius + 1 + prune_len``; every complete rule is then checked on all
    factors of length ``verify_len``.
    """
    for s in (tau, rho):
        if not is_primitive(s):
            raise PreconditionError(f"{s} is not primitive")
    k = radius + 1
    if verify_len is None:
        verify_len = default_verify_len(rho, radius)
    verify_len = max(verify_len, k)
    windows = _window_order(tau, factor_language(tau).words(k), k)
    index = {w: i for i, w in enumerate(windows)}
    words = sorted(factor_language(tau).words(min(verify_len, k + prune_len)))
    seqs = [[index[w[p:p + k]] for p in range(len(w) - k + 1)] for w in words]
    occ: list[list[tuple[int, int]]] = [[] for _ in windows]
    for wi, seq in enumerate(seqs):
        for p, v in enumerate(seq):
            occ[v].append((wi, p))

    target = factor_language(rho)
    letters = range(len(rho.alphabet))
    assign = [-1] * len(windows)
    verdict: dict[bytes, bool] = {}
    found: list[BlockRule] = []
    nodes = 0

    def admissible(v: int) -> bool:
        for wi, p in occ[v]:
            seq = seqs[wi]
            lo = p
            while lo > 0 and assign[seq[lo - 1]] >= 0:
                lo -= 1
            hi = p + 1
            while hi < len(seq) and assign[seq[hi]] >= 0:
                hi += 1
            image = bytes(assign[seq[q]] for q in range(lo, hi))
            ok = verdict.get(image)
            if ok is None:
                ok = verdict[image] = image in target
            if not ok:
                return False
        return True

    def search(depth: int):
        nonlocal nodes
        if depth == len(windows):
            rule = BlockRule(tau, rho, radius, {w: assign[i] for i, w in enumerate(windows)})
            if is_image_admissible(rule.as_dill(), verify_len):
                found.append(rule)
            return
        for a in letters:
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceeded(f"node budget {node_budget} exhausted", partial=list(found))
            assign[depth] = a
            if admissible(depth):
                search(depth + 1)
        assign[depth] = -1

    search(0)
    found.sort(key=BlockRule.sort_key)
    result = dedupe_up_to_shift(found, prefix_len)
    result.radius = radius
    result.verify_len = verify_len
    return result


def _shift_relation(f: BlockRule, rep: BlockRule, prefix_len: int, shift_bound: int) -> int | None:
    """``k`` with ``f = sigma^k ∘ rep`` (``k >= 0``) or ``rep = sigma^-k ∘ f`` (``k < 0``)."""
    df, dr = canonicalize(f.as_dill()), canonicalize(rep.as_dill())
    ij = almost_equivalent(df, dr, prefix_len, shift_bound)
    if ij is None:
        return None
    i, j = ij
    k = j - i
    shift = shift_rule(f.target, abs(k)).as_dill()
    lhs, rhs = (df, dr) if k >= 0 else (dr, df)
    try:
        moved = canonicalize(compose(shift, rhs)) if k else rhs
    except CompositionError:
        # rhs leaves the target language, so no shift of it is a table
        return None
    return k if moved == lhs else None


def dedupe_up_to_shift(rules: list[BlockRule], prefix_len: int = 512,
                       shift_bound: int | None = None) -> MorphismClassSet:
    """Group rules that differ by a power of the shift; one representative per class.

    The representative of a class is its rule of least canonical radius,
    ties broken by the lexicographically least table.
    """
    if not rules:
        return MorphismClassSet([], 0, 0)
    radius = max(r.radius for r in rules)
    if shift_bound is None:
        shift_bound = 2 * radius + 2
    canon = []
    for r in rules:
        c = canonicalize(r.as_dill()).as_block_rule()
        canon.append(c)
    order = sorted(range(len(rules)), key=lambda i: canon[i].sort_key())
    reps: list[BlockRule] = []
    members: list[tuple[BlockRule, int, int]] = []
    for i in order:
        for c, rep in enumerate(reps):
            k = _shift_relation(canon[i], rep, prefix_len, shift_bound)
            if k is not None:
                members.append((rules[i], c, k))
                break
        else:
            reps.append(canon[i])
            members.append((rules[i], len(reps) - 1, 0))
    return MorphismClassSet(reps, radius, 0, members)


def period_class(f: BlockRule, tau: Substitution, rec: Recognizer, length: int = 4096) -> int:
    """The ``p`` with ``f(tau(X)) ⊂ sigma^p(tau(X))`` for a uniform ``tau`` of length ``m``."""
    if not is_uniform(tau):
        raise PreconditionError("period classes are defined for uniform substitutions")
    m = tau.lengths[0]
    x = fixed_point(tau, length + f.radius)
    y = f(x)
    residues = set()
    for i in range(rec.left, len(y) - rec.right):
        if rec.lookup(y[i - rec.left:i + rec.right + 1]) is not BLANK:
            residues.add(i % m)
    if len(residues) != 1:
        raise PreconditionError(f"cut positions of the image fall in residues {sorted(residues)} mod {m}")
    return (-residues.pop()) % m


def build_example_family(m: int, n: int, variant: str = "uniform") -> Substitution:
    """Substitutions with ``m - 1`` endomorphisms that need windows of ``n`` letters.

    ``uniform``: the state-split substitution on ``a_i, b_i, c``.
    ``nonuniform``: ``a_i -> b_{i+1} a_i^(n-1)``, ``b_i -> b_i a_i^n``.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if n < 4:
        raise ValueError("n must be at least 4")
    a = [f"a{i}" for i in range(m)]
    b = [f"b{i}" for i in range(m)]
    if variant == "uniform":
        letters = a + b + ["c"]
        rules = {a[i]: [b[(i + 1) % m]] + [a[i]] * (n - 1) for i in range(m)}
        rules.update({b[i]: [b[i]] + [a[i]] * (n - 1) for i in range(1, m)})
        rules[b[0]] = [b[0]] + ["c"] * (n - 1)
        rules["c"] = rules[a[0]]
    elif variant == "nonuniform":
        letters = a + b
        rules = {a[i]: [b[(i + 1) % m]] + [a[i]] * (n - 1) for i in range(m)}
        rules.update({b[i]: [b[i]] + [a[i]] * n for i in range(m)})
    else:
        raise ValueError(f"unknown variant {variant!r}")
    alphabet = Alphabet(tuple(letters))
    return Substitution(alphabet, tuple(alphabet.word(rules[t]) for t in letters))
