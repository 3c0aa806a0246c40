"""Exact rational and polynomial arithmetic foundation.

Everything here is computed over Q with fractions.Fraction: sparse
multivariate polynomials, univariate real root isolation, resultants, and
sign evaluation at real algebraic points.  All operations are pure and
exact; no floating point enters any decision.

Conventions
-----------
* The zero polynomial is an input error for the public operations, never a
  silent zero.
* Univariate coefficient lists are little-endian: ``cs[i]`` multiplies ``x**i``.
* ``resultant`` follows the Sylvester-determinant sign convention with the
  rows of the first argument on top (see ``sylvester_matrix``); the
  subresultant remainder sequence used internally tracks scale and sign so
  its value equals that determinant exactly.
* An ``AlgebraicNumber`` whose interval has width zero is an exact rational
  root; irrational roots always come with an open isolating interval whose
  endpoints are not roots of the defining polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd, lcm


class ArithError(ValueError):
    pass


class ZeroPolynomialError(ArithError):
    """Raised when the zero polynomial reaches an operation that rejects it."""


# ---------------------------------------------------------------------------
# rational helpers


def simplest_between(a: Fraction, b: Fraction) -> Fraction:
    """Rational with the smallest denominator in the closed interval [a, b]."""
    if a > b:
        raise ArithError("empty interval")
    if a == b:
        return a
    fa = Fraction(floor(a))
    if fa + 1 <= b:
        lo_int = ceil(a)
        hi_int = floor(b)
        if lo_int <= 0 <= hi_int:
            return Fraction(0)
        return Fraction(lo_int if lo_int > 0 else hi_int)
    if fa == a:
        return a
    # both endpoints lie strictly between fa and fa + 1
    inner = simplest_between(1 / (b - fa), 1 / (a - fa))
    return fa + 1 / inner


def _ival_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _ival_mul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(ps), max(ps))


def _ival_pow(a, k: int):
    out = (Fraction(1), Fraction(1))
    for _ in range(k):
        out = _ival_mul(out, a)
    return out


# ---------------------------------------------------------------------------
# multivariate polynomials


def _strip_terms(terms):
    return {e: c for e, c in terms.items() if c != 0}


@dataclass(frozen=True)
class Polynomial:
    """Sparse multivariate polynomial over Q.

    ``variables`` is an ordered tuple of symbol names and ``terms`` maps
    exponent tuples (length == len(variables)) to nonzero Fraction
    coefficients.  Instances are treated as immutable; prefer the
    classmethods over the raw constructor.
    """

    variables: tuple
    terms: dict

    # -- constructors ------------------------------------------------------

    @staticmethod
    def make(variables, terms) -> "Polynomial":
        variables = tuple(variables)
        clean = {}
        for e, c in terms.items():
            c = Fraction(c)
            if c == 0:
                continue
            e = tuple(int(k) for k in e)
            if len(e) != len(variables):
                raise ArithError("exponent length does not match variables")
            if any(k < 0 for k in e):
                raise ArithError("negative exponent")
            clean[e] = clean.get(e, Fraction(0)) + c
        return Polynomial(variables, _strip_terms(clean))

    @staticmethod
    def const(c, variables=()) -> "Polynomial":
        variables = tuple(variables)
        c = Fraction(c)
        if c == 0:
            return Polynomial(variables, {})
        return Polynomial(variables, {(0,) * len(variables): c})

    @staticmethod
    def var(name, variables=None) -> "Polynomial":
        if variables is None:
            variables = (name,)
        variables = tuple(variables)
        i = variables.index(name)
        e = tuple(1 if j == i else 0 for j in range(len(variables)))
        return Polynomial(variables, {e: Fraction(1)})

    @staticmethod
    def from_univariate(name, coeffs) -> "Polynomial":
        return Polynomial.make((name,), {(i,): c for i, c in enumerate(coeffs)})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(k == 0 for k in e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ArithError("not a constant polynomial")
        return next(iter(self.terms.values())) if self.terms else Fraction(0)

    def total_degree(self) -> int:
        if not self.terms:
            raise ZeroPolynomialError("degree of zero polynomial")
        return max(sum(e) for e in self.terms)

    def degree_in(self, name) -> int:
        if not self.terms:
            raise ZeroPolynomialError("degree of zero polynomial")
        i = self.variables.index(name)
        return max(e[i] for e in self.terms)

    def key(self):
        """Hashable canonical key; Polynomial itself is not hashable."""
        return (self.variables, tuple(sorted(self.terms.items())))

    # -- arithmetic --------------------------------------------------------

    def _aligned(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other, self.variables)
        if self.variables == other.variables:
            return self, other
        merged = list(self.variables)
        for v in other.variables:
            if v not in merged:
                merged.append(v)
        return self.embed(merged), other.embed(merged)

    def embed(self, variables) -> "Polynomial":
        variables = tuple(variables)
        pos = [variables.index(v) for v in self.variables]
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for p, k in zip(pos, e):
                ne[p] = k
            terms[tuple(ne)] = c
        return Polynomial(variables, terms)

    def __add__(self, other):
        a, b = self._aligned(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Polynomial(a.variables, _strip_terms(terms))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        a, b = self._aligned(other)
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._aligned(other)
        return b + (-a)

    def __mul__(self, other):
        a, b = self._aligned(other)
        terms = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Polynomial(a.variables, _strip_terms(terms))

    __rmul__ = __mul__

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            raise ArithError("negative power")
        out = Polynomial.const(1, self.variables)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other, self.variables)
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self._aligned(other)
        return a.terms == b.terms

    # -- evaluation and substitution --------------------------------------

    def eval_at(self, assignment) -> Fraction:
        out = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for name, k in zip(self.variables, e):
                if k:
                    v *= Fraction(assignment[name]) ** k
            out += v
        return out

    def substitute(self, assignment) -> "Polynomial":
        """Substitute Polynomials (or rationals) for a subset of the variables."""
        remaining = tuple(v for v in self.variables if v not in assignment)
        out = Polynomial.const(0, remaining)
        for e, c in self.terms.items():
            term = Polynomial.const(c, remaining)
            for name, k in zip(self.variables, e):
                if not k:
                    continue
                if name in assignment:
                    val = assignment[name]
                    if isinstance(val, (int, Fraction)):
                        val = Polynomial.const(val, remaining)
                    term = term * val ** k
                else:
                    term = term * Polynomial.var(name, remaining) ** k
            out = out + term
        return out

    def coeffs_in(self, name):
        """Little-endian coefficient list with respect to one variable.

        Entries are Polynomials in the remaining variables.
        """
        i = self.variables.index(name)
        rest = tuple(v for j, v in enumerate(self.variables) if j != i)
        if not self.terms:
            return [Polynomial.const(0, rest)]
        deg = max(e[i] for e in self.terms)
        out = [dict() for _ in range(deg + 1)]
        for e, c in self.terms.items():
            re = tuple(k for j, k in enumerate(e) if j != i)
            out[e[i]][re] = c
        return [Polynomial(rest, _strip_terms(d)) for d in out]

    def univariate_coeffs(self):
        """Fraction coefficient list; at most one variable may occur."""
        if not self.terms:
            return [Fraction(0)]
        live = [v for i, v in enumerate(self.variables)
                if any(e[i] for e in self.terms)]
        if len(live) > 1:
            raise ArithError("polynomial is not univariate")
        if not live:
            return [self.constant_value()]
        return [c.constant_value() for c in self.coeffs_in(live[0])]

    def derivative(self, name) -> "Polynomial":
        i = self.variables.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = tuple(k - 1 if j == i else k for j, k in enumerate(e))
            terms[ne] = terms.get(ne, Fraction(0)) + c * e[i]
        return Polynomial(self.variables, _strip_terms(terms))

    # -- text --------------------------------------------------------------

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)
        parts = []
        for e, c in items:
            factors = []
            for name, k in zip(self.variables, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            parts.append(("-" if c < 0 else "+", body))
        sign0, body0 = parts[0]
        text = ("-" if sign0 == "-" else "") + body0
        for s, body in parts[1:]:
            text += f" {s} {body}"
        return text

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"


# ---------------------------------------------------------------------------
# univariate coefficient-list machinery (little-endian, Fraction entries)


def _trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _udeg(cs):
    return len(cs) - 1


def _ueval(cs, x: Fraction) -> Fraction:
    out = Fraction(0)
    for c in reversed(cs):
        out = out * x + c
    return out


def _uderiv(cs):
    return _trim([c * i for i, c in enumerate(cs)][1:])


def _uscale(cs, k: Fraction):
    return [c * k for c in cs]


def _usub(a, b):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _udivmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while r and len(r) >= len(b):
        k = r[-1] / b[-1]
        d = len(r) - len(b)
        q[d] = k
        r = _usub(r, [Fraction(0)] * d + _uscale(b, k))
    return _trim(q), r


def _ugcd(a, b):
    """Monic gcd over Q."""
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _udivmod(a, b)[1]
    if not a:
        return []
    return _uscale(a, 1 / a[-1])


def _usquarefree(cs):
    cs = _trim(cs)
    if len(cs) <= 2:
        return cs
    g = _ugcd(cs, _uderiv(cs))
    if _udeg(g) == 0:
        return cs
    q, r = _udivmod(cs, g)
    assert not r
    return q


def _usturm(cs):
    chain = [_trim(cs), _uderiv(cs)]
    while chain[-1]:
        rem = _udivmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append([-c for c in rem])
    return [c for c in chain if c]


def _variations(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sturm_count(chain, a: Fraction, b: Fraction) -> int:
    """Distinct real roots in (a, b); a, b must not be roots of chain[0]."""
    va = _variations([_sign(_ueval(c, a)) for c in chain])
    vb = _variations([_sign(_ueval(c, b)) for c in chain])
    return va - vb


def _uint_primitive(cs):
    """Scale to integer coefficients, content 1, positive leading coefficient."""
    den = 1
    for c in cs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in cs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g:
        ints = [v // g for v in ints]
    if ints and ints[-1] < 0:
        ints = [-v for v in ints]
    return [Fraction(v) for v in ints]


def _root_bound(cs) -> Fraction:
    """Cauchy bound: every real root has absolute value strictly below this."""
    lead = abs(cs[-1])
    m = max((abs(c) for c in cs[:-1]), default=Fraction(0))
    return 1 + m / lead


# ---------------------------------------------------------------------------
# real algebraic numbers


@dataclass
class AlgebraicNumber:
    """A real root of a square-free univariate polynomial.

    ``lo == hi`` encodes an exact rational root.  Otherwise exactly one real
    root of ``defining`` lies in the open interval (lo, hi) and neither
    endpoint is a root.  ``refine`` halves the interval in place; everything
    else is read-only.
    """

    defining: Polynomial
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        self.lo = Fraction(self.lo)
        self.hi = Fraction(self.hi)
        if self.lo > self.hi:
            raise ArithError("inverted interval")

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> Fraction:
        if not self.is_rational:
            raise ArithError("not an exact rational")
        return self.lo

    def _coeffs(self):
        return _trim(self.defining.univariate_coeffs())

    def refine(self):
        if self.is_rational:
            return
        cs = self._coeffs()
        mid = (self.lo + self.hi) / 2
        v = _ueval(cs, mid)
        if v == 0:
            self.lo = self.hi = mid
            return
        if _sign(_ueval(cs, self.lo)) * _sign(v) < 0:
            self.hi = mid
        else:
            self.lo = mid

    def copy(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self.defining, self.lo, self.hi)

    def approx(self, width=Fraction(1, 1 << 20)) -> Fraction:
        while not self.is_rational and self.hi - self.lo > width:
            self.refine()
        return (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.approx())

    def __repr__(self):
        if self.is_rational:
            return f"AlgebraicNumber({self.lo})"
        return f"AlgebraicNumber({self.defining.to_text()} in ({self.lo},{self.hi}))"


def real_compare(u, v) -> int:
    """Exact three-way comparison; each argument is a Fraction or AlgebraicNumber."""
    if isinstance(u, AlgebraicNumber) and u.is_rational:
        u = u.value
    if isinstance(v, AlgebraicNumber) and v.is_rational:
        v = v.value
    if isinstance(u, (int, Fraction)) and isinstance(v, (int, Fraction)):
        return _sign(Fraction(u) - Fraction(v))
    if isinstance(u, (int, Fraction)):
        return -real_compare(v, u)
    if isinstance(v, (int, Fraction)):
        c = Fraction(v)
        cs = u._coeffs()
        while True:
            if c <= u.lo:
                return 1
            if c >= u.hi:
                return -1
            if _ueval(cs, c) == 0:
                return 0  # c is the unique root inside the isolating interval
            u.refine()
            if u.is_rational:
                return _sign(u.value - c)
    ca, cb = u._coeffs(), v._coeffs()
    g = _ugcd(ca, cb)
    gchain = _usturm(g) if _udeg(g) >= 1 else None
    while True:
        if u.is_rational or v.is_rational:
            return real_compare(u, v)
        if u.hi <= v.lo:
            return -1
        if v.hi <= u.lo:
            return 1
        olo, ohi = max(u.lo, v.lo), min(u.hi, v.hi)
        if gchain is not None and olo < ohi:
            # a root of g in the overlap is a common root, hence both numbers
            if _sturm_count(gchain, olo, ohi) >= 1:
                return 0
        u.refine()
        v.refine()


def real_sign(u) -> int:
    return real_compare(u, Fraction(0))


def isolate_real_roots(p: Polynomial):
    """Ordered list of AlgebraicNumber isolating every distinct real root of p.

    Rational roots are certified exactly (width-zero intervals) without any
    integer factorization: the interval is narrowed below the minimum spacing
    of rationals whose denominator can divide the leading coefficient, at
    which point the simplest rational inside is the only candidate left.
    """
    if p.is_zero():
        raise ZeroPolynomialError("cannot isolate roots of the zero polynomial")
    cs = _trim(p.univariate_coeffs())
    if len(cs) == 1:
        return []
    sq = _uint_primitive(_usquarefree(cs))
    live = [v for i, v in enumerate(p.variables) if any(e[i] for e in p.terms)]
    var = live[0]
    defining = Polynomial.from_univariate(var, sq)
    lead = abs(sq[-1])
    gap = Fraction(1, int(lead * lead) + 1)
    chain = _usturm(sq)

    hi = Fraction(ceil(_root_bound(sq)))
    lo = -hi
    roots = []

    def finalize(a, b):
        # exactly one root in (a, b); endpoints are not roots
        while b - a >= gap:
            m = (a + b) / 2
            v = _ueval(sq, m)
            if v == 0:
                roots.append(AlgebraicNumber(defining, m, m))
                return
            if _sign(_ueval(sq, a)) * _sign(v) < 0:
                b = m
            else:
                a = m
        cand = simplest_between(a, b)
        if _ueval(sq, cand) == 0:
            roots.append(AlgebraicNumber(defining, cand, cand))
        else:
            roots.append(AlgebraicNumber(defining, a, b))

    def split(a, b):
        n = _sturm_count(chain, a, b)
        if n == 0:
            return
        if n == 1:
            finalize(a, b)
            return
        m = (a + b) / 2
        if _ueval(sq, m) != 0:
            split(a, m)
            split(m, b)
            return
        # the midpoint itself is a (rational) root: fence it off
        step = (b - a) / 8
        while True:
            l2, r2 = m - step, m + step
            if (a < l2 and r2 < b and _ueval(sq, l2) != 0 and _ueval(sq, r2) != 0
                    and _sturm_count(chain, l2, r2) == 1):
                break
            step /= 2
        split(a, l2)
        roots.append(AlgebraicNumber(defining, m, m))
        split(r2, b)

    split(lo, hi)
    roots.sort(key=lambda r: (r.lo, r.hi))
    return roots


def sign_at(p: Polynomial, a) -> int:
    """Exact sign of a univariate polynomial at a real algebraic point.

    ``a`` may be an AlgebraicNumber or a plain rational.  A gcd with the
    defining polynomial decides the zero case; otherwise the isolating
    interval is refined until p is sign-definite on it.
    """
    if p.is_zero():
        raise ZeroPolynomialError("sign of zero polynomial")
    if isinstance(a, (int, Fraction)):
        return _sign(_ueval(_trim(p.univariate_coeffs()), Fraction(a)))
    if a.is_rational:
        return _sign(_ueval(_trim(p.univariate_coeffs()), a.value))
    pcs = _trim(p.univariate_coeffs())
    if len(pcs) == 1:
        return _sign(pcs[0])
    dcs = a._coeffs()
    psq = _usquarefree(pcs)
    g = _ugcd(psq, dcs)
    if _udeg(g) >= 1:
        # roots of g are also roots of the defining polynomial, so the
        # interval endpoints are never roots of g; a sign change certifies 0
        if _sign(_ueval(g, a.lo)) * _sign(_ueval(g, a.hi)) < 0:
            return 0
    chain = _usturm(psq)
    while _sturm_count(chain, a.lo, a.hi) > 0:
        a.refine()
        if a.is_rational:
            return _sign(_ueval(pcs, a.value))
    return _sign(_ueval(pcs, (a.lo + a.hi) / 2))


# ---------------------------------------------------------------------------
# resultants


def _ptrim(cs):
    cs = list(cs)
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def _poly_exact_div(a: Polynomial, b: Polynomial) -> Polynomial:
    """Exact division in Q[vars]; raises if b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError("exact division by zero polynomial")
    if a.is_zero():
        return Polynomial.const(0, a.variables)
    a2, b2 = a._aligned(b)
    if b2.is_constant():
        c = b2.constant_value()
        return Polynomial(a2.variables, {e: v / c for e, v in a2.terms.items()})
    name = next(v for v in b2.variables if b2.degree_in(v) > 0)
    ac = _ptrim(a2.coeffs_in(name))
    bc = _ptrim(b2.coeffs_in(name))
    q = {}
    rem = list(ac)
    while rem and len(rem) >= len(bc):
        k = _poly_exact_div(rem[-1], bc[-1])
        d = len(rem) - len(bc)
        q[d] = k
        for i, c in enumerate(bc):
            rem[d + i] = rem[d + i] - k * c
        rem = _ptrim(rem)
    if rem:
        raise ArithError("inexact polynomial division")
    out = Polynomial.const(0, a2.variables)
    xn = Polynomial.var(name, a2.variables)
    for i, c in q.items():
        if not c.is_zero():
            out = out + c.embed(a2.variables) * xn ** i
    return out


def sylvester_matrix(p: Polynomial, q: Polynomial, var):
    """Sylvester matrix with the rows built from p on top.

    Entries are Polynomials in the remaining variables.  This matrix fixes
    the sign convention: ``resultant(p, q, var)`` equals its determinant.
    """
    pa, qa = p._aligned(q)
    pc = _ptrim(pa.coeffs_in(var))
    qc = _ptrim(qa.coeffs_in(var))
    m = len(pc) - 1
    n = len(qc) - 1
    rest = pc[0].variables
    zero = Polynomial.const(0, rest)
    rows = []
    prow = list(reversed(pc))
    qrow = list(reversed(qc))
    for i in range(n):
        rows.append([zero] * i + prow + [zero] * (n - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qrow + [zero] * (m - 1 - i))
    return rows


def _bareiss_det(rows):
    """Fraction-free determinant over a polynomial ring (Bareiss elimination)."""
    n = len(rows)
    if n == 0:
        return Polynomial.const(1)
    a = [list(r) for r in rows]
    vars0 = a[0][0].variables
    sign = 1
    prev = Polynomial.const(1, vars0)
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Polynomial.const(0, vars0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = _poly_exact_div(num, prev)
            a[i][k] = Polynomial.const(0, vars0)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


def sylvester_resultant(p: Polynomial, q: Polynomial, var) -> Polynomial:
    """Resultant as the determinant of ``sylvester_matrix`` (reference route)."""
    if p.is_zero() or q.is_zero():
        raise ZeroPolynomialError("resultant of zero polynomial")
    return _bareiss_det(sylvester_matrix(p, q, var))


def _prem(a, b):
    """Pseudo-remainder of Polynomial coefficient lists: lc(b)^(da-db+1) a mod b."""
    a = list(a)
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return a
    lb = b[-1]
    steps = 0
    while a and len(a) - 1 >= db:
        la = a[-1]
        d = len(a) - 1 - db
        a = [c * lb for c in a]
        for i, c in enumerate(b):
            a[d + i] = a[d + i] - la * c
        steps += 1
        a = _ptrim(a)
    for _ in range(da - db + 1 - steps):
        a = [c * lb for c in a]
    return a


def _resultant_prs(p: Polynomial, q: Polynomial, var) -> Polynomial:
    """Subresultant remainder sequence with exact sign and scale bookkeeping.

    Each elimination step applies res(a, b) = (-1)^(m n) lc(b)^(m - r - (d+1) n)
    (g h^d)^n res(b, prem(a, b) / (g h^d)), with m, n, r the degrees of a, b
    and the remainder and d = m - n.  The collected factors are multiplied
    out at the end with a single exact division, so the returned value equals
    the Sylvester determinant of the inputs, sign included.
    """
    pa, qa = p._aligned(q)
    rest = tuple(v for v in pa.variables if v != var)
    one = Polynomial.const(1, rest)

    a = _ptrim(pa.coeffs_in(var))
    b = _ptrim(qa.coeffs_in(var))
    sign = 1
    num = []
    den = []

    if len(a) < len(b):
        if ((len(a) - 1) * (len(b) - 1)) % 2 == 1:
            sign = -sign
        a, b = b, a

    g = one
    h = one
    while True:
        m = len(a) - 1
        n = len(b) - 1
        if n == 0:
            if m > 0:
                num.append((b[0], m))
            break
        r = _prem(a, b)
        if not r:
            return Polynomial.const(0, rest)
        dr = len(r) - 1
        delta = m - n
        if (m * n) % 2 == 1:
            sign = -sign
        lb = b[-1]
        e = m - dr - (delta + 1) * n
        if e > 0:
            num.append((lb, e))
        elif e < 0:
            den.append((lb, -e))
        divisor = g * h ** delta
        if not (divisor.is_constant() and divisor.constant_value() == 1):
            num.append((divisor, n))
            r = [_poly_exact_div(c, divisor) for c in r]
        a, b = b, r
        g = lb
        if delta == 1:
            h = g
        elif delta > 1:
            h = _poly_exact_div(g ** delta, h ** (delta - 1))

    out = one
    for f, k in num:
        if k:
            out = out * f ** k
    for f, k in den:
        if k:
            out = _poly_exact_div(out, f ** k)
    return out if sign == 1 else -out


def resultant(p: Polynomial, q: Polynomial, var) -> Polynomial:
    """Resultant of p and q with respect to ``var``.

    Equals det(sylvester_matrix(p, q, var)) including sign.  Zero exactly
    when p and q share a common factor involving ``var``.  Both inputs must
    involve ``var``.
    """
    if p.is_zero() or q.is_zero():
        raise ZeroPolynomialError("resultant of zero polynomial")
    if p.degree_in(var) < 1 or q.degree_in(var) < 1:
        raise ArithError("resultant arguments must both involve the variable")
    return _resultant_prs(p, q, var)


def discriminant(p: Polynomial, var) -> Polynomial:
    """disc(p) = (-1)^(n(n-1)/2) resultant(p, dp/dvar) / lc(p)."""
    if p.is_zero():
        raise ZeroPolynomialError("discriminant of zero polynomial")
    n = p.degree_in(var)
    if n < 1:
        raise ArithError("discriminant needs positive degree in the variable")
    lc = _ptrim(p.coeffs_in(var))[-1]
    if n == 1:
        return Polynomial.const(1, lc.variables)
    res = _resultant_prs(p, p.derivative(var), var)
    out = _poly_exact_div(res, lc)
    if (n * (n - 1) // 2) % 2 == 1:
        out = -out
    return out


# ---------------------------------------------------------------------------
# gcd, square-free parts, coprime bases (univariate and bivariate)


def normalize_primitive(p: Polynomial) -> Polynomial:
    """Integer-primitive form with positive leading coefficient (canonical order)."""
    if p.is_zero():
        return p
    den = 1
    for c in p.terms.values():
        den = lcm(den, c.denominator)
    g = 0
    for c in p.terms.values():
        g = gcd(g, abs(int(c * den)))
    scale = Fraction(den, g if g else 1)
    lead = max(p.terms, key=lambda e: (sum(e), e))
    if p.terms[lead] < 0:
        scale = -scale
    return Polynomial(p.variables, {e: c * scale for e, c in p.terms.items()})


def poly_gcd(p: Polynomial, q: Polynomial, var=None) -> Polynomial:
    """Gcd over Q in at most two variables, normalized via normalize_primitive.

    Internal helper; a zero argument acts as the neutral element so contents
    can be folded starting from zero.
    """
    if p.is_zero():
        return normalize_primitive(q)
    if q.is_zero():
        return normalize_primitive(p)
    pa, qa = p._aligned(q)
    live = [v for v in pa.variables
            if pa.degree_in(v) > 0 or qa.degree_in(v) > 0]
    if not live:
        return Polynomial.const(1, pa.variables)
    if len(live) == 1:
        ua = [c.constant_value() for c in pa.coeffs_in(live[0])]
        ub = [c.constant_value() for c in qa.coeffs_in(live[0])]
        cs = _ugcd(ua, ub)
        return normalize_primitive(Polynomial.from_univariate(live[0], cs).embed(pa.variables))
    if var is None or var not in live:
        var = live[-1]

    def content_and_primitive(f):
        cs = _ptrim(f.coeffs_in(var))
        cont = Polynomial.const(0, cs[0].variables)
        for c in cs:
            cont = poly_gcd(cont, c)
        pp = _poly_exact_div(f, cont.embed(f.variables))
        return cont, pp

    ca, a = content_and_primitive(pa)
    cb, b = content_and_primitive(qa)
    cont = poly_gcd(ca, cb)
    if b.degree_in(var) > a.degree_in(var):
        a, b = b, a
    while True:
        if b.is_zero():
            g = a
            break
        if b.degree_in(var) == 0:
            g = Polynomial.const(1, a.variables)
            break
        r = _prem(_ptrim(a.coeffs_in(var)), _ptrim(b.coeffs_in(var)))
        if not r:
            g = b
            break
        rpoly = Polynomial.const(0, a.variables)
        xv = Polynomial.var(var, a.variables)
        for i, c in enumerate(r):
            rpoly = rpoly + c.embed(a.variables) * xv ** i
        _, rpp = content_and_primitive(rpoly)
        a, b = b, rpp
    if g.is_constant():
        out = cont.embed(pa.variables)
    else:
        _, gp = content_and_primitive(g)
        out = gp * cont.embed(gp.variables)
    return normalize_primitive(out)


def squarefree_part(p: Polynomial, var=None) -> Polynomial:
    """p / gcd(p, dp/dvar), normalized; var defaults to the last live variable."""
    if p.is_zero():
        raise ZeroPolynomialError("square-free part of zero polynomial")
    live = [v for v in p.variables if p.degree_in(v) > 0]
    if not live:
        return Polynomial.const(1, p.variables)
    if var is None or var not in live:
        var = live[-1]
    g = poly_gcd(p, p.derivative(var), var)
    if g.is_constant():
        return normalize_primitive(p)
    return normalize_primitive(_poly_exact_div(p, g.embed(p.variables)))


def coprime_squarefree_basis(polys):
    """Reduce a list of polynomials to a square-free pairwise-coprime basis.

    Constants drop out; output is deduplicated, normalized and sorted.  The
    union of the root sets is preserved.
    """
    work = []
    for p in polys:
        if p.is_zero():
            raise ZeroPolynomialError("zero polynomial in basis")
        if p.is_constant():
            continue
        work.append(normalize_primitive(squarefree_part(p)))
    changed = True
    while changed:
        changed = False
        out = []
        for p in work:
            if p.is_constant():
                continue
            merged = False
            for i, q in enumerate(out):
                if p.key() == q.key():
                    merged = True
                    break
                g = poly_gcd(p, q)
                if not g.is_constant():
                    rest_p = _poly_exact_div(p, g.embed(p.variables))
                    rest_q = _poly_exact_div(q, g.embed(q.variables))
                    out[i] = g
                    for extra in (rest_p, rest_q):
                        if not extra.is_constant():
                            out.append(normalize_primitive(extra))
                    changed = True
                    merged = True
                    break
            if not merged:
                out.append(p)
        work = out
    dedup = {}
    for p in work:
        dedup[p.key()] = p
    return sorted(dedup.values(), key=lambda f: f.key())
