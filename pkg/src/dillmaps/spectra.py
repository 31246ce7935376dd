"""Exact spectral data of associated matrices.

Everything here is decided with integer/rational arithmetic. Polynomials
are coefficient lists in descending order (leading coefficient first), as
in ``numpy.poly1d``.

Root location relative to the unit circle is counted exactly:

* ``p`` and its reciprocal ``p*`` share exactly the roots on the circle and
  the pairs ``{z, 1/conj(z)}``; ``g = gcd(p, p*)`` collects them.
* ``q = p / g`` has no such roots. After the Cayley map ``z = (1+w)/(1-w)``
  (unit disk -> left half-plane) its left-half-plane roots are counted via
  a Cauchy index computed with a Sturm chain.
* Roots of ``g`` on the circle become common real roots of the real and
  imaginary parts of the transformed polynomial along the imaginary axis;
  the rest of ``g`` splits evenly between inside and outside.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import UnsupportedError
from .substitution import is_primitive_matrix

Poly = list  # descending coefficients, ints or Fractions


# --- polynomial helpers ------------------------------------------------------

def _trim(p: Sequence) -> Poly:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return list(p[i:]) if p else [0]


def degree(p: Sequence) -> int:
    p = _trim(p)
    return -1 if p == [0] else len(p) - 1


def evaluate(p: Sequence, x):
    acc = 0
    for c in p:
        acc = acc * x + c
    return acc


def _add(a: Sequence, b: Sequence) -> Poly:
    n = max(len(a), len(b))
    a = [0] * (n - len(a)) + list(a)
    b = [0] * (n - len(b)) + list(b)
    return _trim([x + y for x, y in zip(a, b)])


def _scale(p: Sequence, c) -> Poly:
    return _trim([c * x for x in p])


def _mul(a: Sequence, b: Sequence) -> Poly:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _divmod(a: Sequence, b: Sequence) -> tuple[Poly, Poly]:
    a = [Fraction(x) for x in _trim(a)]
    b = [Fraction(x) for x in _trim(b)]
    if degree(b) < 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - db)
    r = list(a)
    for i in range(len(q)):
        c = r[i] / b[0]
        q[i] = c
        if c:
            for j in range(len(b)):
                r[i + j] -= c * b[j]
    rem = _trim(r[len(q):]) if db > 0 else [Fraction(0)]
    return _trim(q), rem


def _monic(p: Sequence) -> Poly:
    p = _trim(p)
    return [Fraction(x) / Fraction(p[0]) for x in p]


def poly_gcd(a: Sequence, b: Sequence) -> Poly:
    a, b = _trim(a), _trim(b)
    while degree(b) >= 0:
        a, b = b, _divmod(a, b)[1]
    if degree(a) < 0:
        return [Fraction(0)]
    return _monic(a)


def derivative(p: Sequence) -> Poly:
    p = _trim(p)
    n = len(p) - 1
    if n == 0:
        return [0]
    return _trim([c * (n - i) for i, c in enumerate(p[:-1])])


def squarefree(p: Sequence) -> Poly:
    g = poly_gcd(p, derivative(p))
    return _monic(_divmod(p, g)[0]) if degree(g) > 0 else _monic(p)


def _sign(x) -> int:
    return int(x > 0) - int(x < 0)


def _signed_remainder_chain(f0: Sequence, f1: Sequence) -> list[Poly]:
    chain = [_trim(f0), _trim(f1)]
    while degree(chain[-1]) > 0:
        r = _divmod(chain[-2], chain[-1])[1]
        if degree(r) < 0:
            break
        chain.append(_scale(r, -1))
    return chain


def _variations(signs) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for x, y in zip(signs, signs[1:]) if x != y)


def _signs_at(chain, x) -> list[int]:
    if x == "+inf":
        return [_sign(p[0]) for p in chain]
    if x == "-inf":
        return [_sign(p[0]) * (-1) ** (len(p) - 1) for p in chain]
    return [_sign(evaluate(p, x)) for p in chain]


def count_real_roots(p: Sequence, lo="-inf", hi="+inf") -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]``."""
    if degree(p) <= 0:
        return 0
    sf = squarefree(p)
    chain = _signed_remainder_chain(sf, derivative(sf))
    return _variations(_signs_at(chain, lo)) - _variations(_signs_at(chain, hi))


def cauchy_index(num: Sequence, den: Sequence) -> int:
    """Cauchy index of ``num/den`` over the whole real line."""
    chain = _signed_remainder_chain(den, num)
    return _variations(_signs_at(chain, "-inf")) - _variations(_signs_at(chain, "+inf"))


def _real_roots_with_multiplicity(p: Sequence) -> int:
    total = 0
    h = _trim(p)
    while degree(h) > 0:
        total += count_real_roots(h)
        h = poly_gcd(h, derivative(h))
    return total


# --- integer polynomials -----------------------------------------------------

@dataclass(frozen=True)
class IntegerPolynomial:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in _trim(list(self.coeffs)))
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return degree(self.coeffs)

    def __call__(self, x):
        return evaluate(self.coeffs, x)

    def __str__(self):
        terms = []
        n = len(self.coeffs) - 1
        for i, c in enumerate(self.coeffs):
            e = n - i
            if c == 0:
                continue
            mag = abs(c)
            body = {0: f"{mag}", 1: "x" if mag == 1 else f"{mag}x"}.get(
                e, f"x^{e}" if mag == 1 else f"{mag}x^{e}")
            terms.append(("- " if c < 0 else "+ ") + body)
        if not terms:
            return "0"
        text = " ".join(terms)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def char_poly(matrix) -> IntegerPolynomial:
    """``det(xI - M)`` by the Faddeev-LeVerrier recursion (exact integer division)."""
    a = [[int(x) for x in row] for row in matrix]
    n = len(a)
    coeffs = [1]
    mk = [[0] * n for _ in range(n)]
    c = 1
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        prod = [[sum(a[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            prod[i][i] += c
        mk = prod
        am = [[sum(a[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        trace = sum(am[i][i] for i in range(n))
        assert trace % k == 0
        c = -trace // k
        coeffs.append(c)
    return IntegerPolynomial(tuple(coeffs))


# --- dominant eigenvalue -----------------------------------------------------

@dataclass(frozen=True)
class EigenvalueEstimate:
    lower: Fraction
    upper: Fraction

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def midpoint(self) -> float:
        return float((self.lower + self.upper) / 2)

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper

    def overlaps(self, other: "EigenvalueEstimate") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def __str__(self):
        if self.exact:
            return f"{self.midpoint:.12g} (exact)"
        return f"{self.midpoint:.12g} ± {float(self.width) / 2:.2g}"


DEFAULT_TOL = Fraction(1, 10**12)


def dominant_eigenvalue(matrix, tol=DEFAULT_TOL) -> EigenvalueEstimate:
    """Bracket of width ``<= tol`` around the Perron root of a primitive matrix."""
    if not is_primitive_matrix(matrix):
        raise UnsupportedError("dominant eigenvalue bracket requires a primitive matrix")
    tol = Fraction(tol)
    p = list(char_poly(matrix).coeffs)
    rows = [sum(r) for r in matrix]
    lo, hi = Fraction(min(rows)), Fraction(max(rows))
    # The Perron root is the largest real root and lies in [min row, max row].
    if evaluate(p, hi) == 0:
        return EigenvalueEstimate(hi, hi)
    if evaluate(p, lo) == 0 and count_real_roots(p, lo, hi) == 0:
        return EigenvalueEstimate(lo, lo)
    while True:
        if hi - lo <= tol and count_real_roots(p, lo, hi) == 1 \
                and _sign(evaluate(p, lo)) * _sign(evaluate(p, hi)) < 0:
            return EigenvalueEstimate(lo, hi)
        mid = (lo + hi) / 2
        above = count_real_roots(p, mid, hi)
        if evaluate(p, mid) == 0 and above == 0:
            return EigenvalueEstimate(mid, mid)
        if above >= 1:
            lo = mid
        else:
            hi = mid


def eigenvalues_match(m1, m2, tol=Fraction(1, 10**9)) -> tuple[bool, str]:
    """Compare Perron roots: exactly via a common factor if possible, else by bracket overlap."""
    e1 = dominant_eigenvalue(m1, tol)
    e2 = dominant_eigenvalue(m2, tol)
    g = poly_gcd(char_poly(m1).coeffs, char_poly(m2).coeffs)
    if degree(g) > 0:
        for e in (e1, e2):
            if e.exact:
                hit = evaluate(g, e.lower) == 0
            else:
                hit = count_real_roots(g, e.lower, e.upper) >= 1
            if not hit:
                break
        else:
            if e1.overlaps(e2):
                return True, "exact"
    if e1.overlaps(e2):
        return True, "tolerance"
    return False, "mismatch"


# --- unit circle counting ----------------------------------------------------

def _ascending_binomial_power(sign: int, k: int) -> list[int]:
    # coefficients of (1 + sign*w)^k, ascending
    out = [1]
    for _ in range(k):
        out = [a + sign * b for a, b in zip(out + [0], [0] + out)]
    return out


def _cayley(p: Sequence) -> Poly:
    """``(1-w)^n p((1+w)/(1-w))`` in descending order."""
    asc = list(reversed(_trim(p)))
    n = len(asc) - 1
    out = [0] * (n + 1)
    for k, a in enumerate(asc):
        if not a:
            continue
        term = _ascending_binomial_power(1, k)
        other = _ascending_binomial_power(-1, n - k)
        prod = [0] * (n + 1)
        for i, x in enumerate(term):
            for j, y in enumerate(other):
                prod[i + j] += x * y
        out = [o + a * t for o, t in zip(out, prod)]
    return _trim(list(reversed(out)))


def _imaginary_axis_parts(f: Sequence) -> tuple[Poly, Poly]:
    """Real polynomials ``U, V`` with ``f(i t) = U(t) + i V(t)``."""
    asc = list(reversed(_trim(f)))
    u = [0] * len(asc)
    v = [0] * len(asc)
    for k, b in enumerate(asc):
        unit = (1, 1, -1, -1)[k % 4]
        if k % 2 == 0:
            u[k] = unit * b
        else:
            v[k] = unit * b
    return _trim(list(reversed(u))), _trim(list(reversed(v)))


def _left_half_plane_roots(f: Sequence) -> int:
    """Roots of ``f`` with negative real part; ``f`` must have none on the imaginary axis."""
    n = degree(f)
    if n <= 0:
        return 0
    u, v = _imaginary_axis_parts(f)
    # change of arg f(it) over the real line equals pi * (left - right)
    if degree(u) > degree(v):
        turns = -cauchy_index(v, u)
    else:
        turns = -cauchy_index(_scale(u, -1), v)
    return (n + turns) // 2


def unit_circle_counts(p: Sequence) -> tuple[int, int, int]:
    """Exact numbers of roots (with multiplicity) inside, on and outside the unit circle."""
    p = _trim([c if isinstance(c, Fraction) else Fraction(int(c)) for c in p])
    if degree(p) < 0:
        raise ValueError("zero polynomial")
    inside = on = outside = 0
    while degree(p) > 0 and p[-1] == 0:
        inside += 1
        p = p[:-1]
    if degree(p) <= 0:
        return inside, on, outside
    g = poly_gcd(p, list(reversed(p)))
    q = _divmod(p, g)[0]
    if degree(q) > 0:
        left = _left_half_plane_roots(_cayley(q))
        inside += left
        outside += degree(q) - left
    while degree(g) > 0 and evaluate(g, -1) == 0:
        on += 1
        g = _divmod(g, [1, 1])[0]
    if degree(g) > 0:
        u, v = _imaginary_axis_parts(_cayley(g))
        circle = _real_roots_with_multiplicity(poly_gcd(u, v))
        on += circle
        rest = degree(g) - circle
        inside += rest // 2
        outside += rest // 2
    return inside, on, outside


def _has_integer_root_outside(p: Sequence) -> bool:
    p = _trim(p)
    bound = 1 + max(abs(Fraction(c, p[0])) for c in p[1:]) if len(p) > 1 else 1
    for r in range(2, int(bound) + 1):
        if evaluate(p, r) == 0 or evaluate(p, -r) == 0:
            return True
    return False


def is_pisot(matrix, strict: bool = False) -> bool:
    """Literal reading: one root of modulus > 1, all others of modulus < 1.

    ``strict`` additionally requires the dominant root to be irrational,
    which excludes uniform substitutions.
    """
    p = char_poly(matrix).coeffs
    inside, on, outside = unit_circle_counts(p)
    literal = on == 0 and outside == 1
    if not literal or not strict:
        return literal
    return not _has_integer_root_outside(p)
