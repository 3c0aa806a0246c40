"""Truncated Puiseux series and formal paths with exactness bookkeeping.

A series is stored as finitely many rational terms c*t^(n/e) together with
a truncation exponent T: the coefficients below T are exact, everything at
or above T is unknown.  A series flagged exact has no unknown tail at all.
Every operation propagates the sharpest truncation it can certify, so a
result is only ever as precise as its inputs allow, and zero tests on
truncated data are always reported as "zero so far", never as exact.

On top of the series sit formal paths (tuples of series generated by
polynomials, rational functions, explicit coefficient lists, or the
rapidly growing series sum n!*t^n, which is not algebraic over the
rational functions) and a small tree language of semialgebraic
expressions (polynomials, field operations, abs, sqrt).  Substituting a
path into an expression yields the series of values along the path; its
constant term is the limit at the basepoint.  The higher-level routines
certify strict positivity under perturbation, extract compact-carrier
data for a path sticking to its basepoint, build polynomial tube tests
around a path, and separate the n! path from polynomially generated ones
by a family of bounded quotients.
"""

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .arith import Polynomial
from ._expr import ExprError, _Parser, parse_polynomial, parse_polynomial_list


DEFAULT_TRUNCATION = Fraction(32)

IN_IDEAL_UP_TO_T = "IN_IDEAL_UP_TO_T"
NOT_IN_IDEAL = "NOT_IN_IDEAL"
EXACTLY_IN_IDEAL = "EXACTLY_IN_IDEAL"


class PathError(ValueError):
    pass


class TruncationInsufficient(PathError):
    """The requested answer is not determined by the known coefficients."""


class IndeterminateDenominator(TruncationInsufficient):
    pass


class IndeterminateOrder(TruncationInsufficient):
    pass


class NegativeLeadingSqrt(PathError):
    pass


class UnboundedAlongPath(PathError):
    pass


class NotPositiveOnPath(PathError):
    pass


class NormalizationRequired(PathError):
    pass


class _Indeterminate:
    __slots__ = ()

    def __repr__(self):
        return "INDETERMINATE"


#: Order of a series that vanishes up to its truncation without being
#: known to vanish exactly.
INDETERMINATE = _Indeterminate()


def _as_trunc(value):
    if value is None:
        return None
    return Fraction(value)


# -- truncated Puiseux series ----------------------------------------------


@dataclass(frozen=True)
class PuiseuxSeries:
    """Finitely many exact terms c*t^(n/ram) below a truncation exponent.

    ``trunc`` is the exponent up to which the coefficients are exact;
    ``trunc is None`` means the stored terms are the whole series.
    Exponents may be negative (the series lives in the fraction field).
    """

    ram: int
    coeffs: dict
    trunc: object = None

    def __post_init__(self):
        ram = int(self.ram)
        if ram < 1:
            raise PathError("ramification index must be a positive integer")
        trunc = _as_trunc(self.trunc)
        kept = {}
        for n, c in self.coeffs.items():
            c = Fraction(c)
            if c == 0:
                continue
            if trunc is not None and Fraction(n, ram) >= trunc:
                continue
            kept[int(n)] = c
        # minimal ramification makes equality structural
        if kept:
            g = ram
            for n in kept:
                g = math.gcd(g, abs(n))
                if g == 1:
                    break
            if g > 1:
                kept = {n // g: c for n, c in kept.items()}
                ram //= g
        else:
            ram = 1
        object.__setattr__(self, "ram", ram)
        object.__setattr__(self, "coeffs", kept)
        object.__setattr__(self, "trunc", trunc)

    @staticmethod
    def zero(trunc=None) -> "PuiseuxSeries":
        return PuiseuxSeries(1, {}, trunc)

    @staticmethod
    def constant(c, trunc=None) -> "PuiseuxSeries":
        return PuiseuxSeries(1, {0: Fraction(c)}, trunc)

    @staticmethod
    def monomial(exponent, coeff=1, trunc=None) -> "PuiseuxSeries":
        e = Fraction(exponent)
        return PuiseuxSeries(e.denominator, {e.numerator: Fraction(coeff)}, trunc)

    @staticmethod
    def from_terms(pairs, trunc=None) -> "PuiseuxSeries":
        """Build from (exponent, coefficient) pairs with rational exponents."""
        pairs = [(Fraction(e), Fraction(c)) for e, c in pairs]
        ram = 1
        for e, _ in pairs:
            ram = ram * e.denominator // math.gcd(ram, e.denominator)
        terms = {}
        for e, c in pairs:
            n = e.numerator * (ram // e.denominator)
            terms[n] = terms.get(n, Fraction(0)) + c
        return PuiseuxSeries(ram, terms, trunc)

    @staticmethod
    def from_polynomial(p: Polynomial) -> "PuiseuxSeries":
        if len(p.variables) > 1 and p.total_degree() > 0:
            live = [v for v in p.variables if p.degree_in(v) > 0]
            if len(live) > 1:
                raise PathError(f"{p.to_text()} is not univariate")
        coeffs = p.univariate_coeffs()
        return PuiseuxSeries(1, {i: c for i, c in enumerate(coeffs)}, None)

    # -- structure ---------------------------------------------------------

    @property
    def exact(self) -> bool:
        return self.trunc is None

    def items(self):
        """Sorted (exponent, coefficient) pairs with Fraction exponents."""
        return tuple(
            (Fraction(n, self.ram), c) for n, c in sorted(self.coeffs.items())
        )

    def is_zero(self) -> bool:
        return self.exact and not self.coeffs

    def vanishes_so_far(self) -> bool:
        return not self.coeffs

    def order(self):
        """Least exponent with a nonzero coefficient.

        Returns math.inf for the exact zero series and INDETERMINATE when
        every known coefficient vanishes but the tail is unknown.
        """
        if self.coeffs:
            return Fraction(min(self.coeffs), self.ram)
        return math.inf if self.exact else INDETERMINATE

    def order_lower_bound(self):
        if self.coeffs:
            return Fraction(min(self.coeffs), self.ram)
        return math.inf if self.exact else self.trunc

    def leading_coefficient(self):
        if not self.coeffs:
            return None
        return self.coeffs[min(self.coeffs)]

    def knows(self, exponent) -> bool:
        return self.exact or Fraction(exponent) < self.trunc

    def coefficient(self, exponent) -> Fraction:
        e = Fraction(exponent)
        if not self.knows(e):
            raise IndeterminateOrder(
                f"coefficient of t^{e} lies beyond truncation {self.trunc}"
            )
        if self.ram % e.denominator == 0:
            n = e.numerator * (self.ram // e.denominator)
            return self.coeffs.get(n, Fraction(0))
        return Fraction(0)

    # -- ring operations ---------------------------------------------------

    @staticmethod
    def _coerce(value):
        if isinstance(value, PuiseuxSeries):
            return value
        if isinstance(value, (int, Fraction)):
            return PuiseuxSeries.constant(value)
        return NotImplemented

    def __add__(self, other):
        other = PuiseuxSeries._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        trunc = _trunc_min(self.trunc, other.trunc)
        pairs = list(self.items()) + list(other.items())
        return PuiseuxSeries.from_terms(pairs, trunc)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(self.ram, {n: -c for n, c in self.coeffs.items()}, self.trunc)

    def __sub__(self, other):
        other = PuiseuxSeries._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = PuiseuxSeries._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        ta = math.inf if self.trunc is None else self.trunc
        tb = math.inf if other.trunc is None else other.trunc
        bound = min(self.order_lower_bound() + tb,
                    other.order_lower_bound() + ta,
                    ta + tb)
        trunc = None if bound == math.inf else bound
        pairs = []
        for ea, ca in self.items():
            for eb, cb in other.items():
                pairs.append((ea + eb, ca * cb))
        return PuiseuxSeries.from_terms(pairs, trunc)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise PathError("series powers take non-negative integer exponents")
        out = PuiseuxSeries.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def compose_power(self, p: int) -> "PuiseuxSeries":
        """Substitute t -> t^p for a positive integer p."""
        if not isinstance(p, int) or p < 1:
            raise PathError("reparametrization exponent must be a positive integer")
        trunc = None if self.trunc is None else self.trunc * p
        return PuiseuxSeries(self.ram, {n * p: c for n, c in self.coeffs.items()}, trunc)

    def truncated(self, T) -> "PuiseuxSeries":
        T = Fraction(T)
        trunc = T if self.trunc is None else min(self.trunc, T)
        return PuiseuxSeries(self.ram, dict(self.coeffs), trunc)

    # -- text --------------------------------------------------------------

    def to_text(self) -> str:
        parts = []
        for e, c in self.items():
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                power = "t" if e == 1 else (f"t^{e}" if e.denominator == 1 else f"t^({e})")
                body = power if mag == 1 else f"{mag}*{power}"
            parts.append(("-" if c < 0 else "+", body))
        if not parts:
            text = "0" if self.exact else ""
        else:
            sign0, body0 = parts[0]
            text = ("-" if sign0 == "-" else "") + body0
            for s, body in parts[1:]:
                text += f" {s} {body}"
        if self.trunc is not None:
            tail = f"O(t^{self.trunc})" if self.trunc.denominator == 1 else f"O(t^({self.trunc}))"
            text = tail if not text else f"{text} + {tail}"
        return text

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"PuiseuxSeries({self.to_text()!r})"


def _trunc_min(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def series_order(s: PuiseuxSeries):
    """Least exponent carrying a nonzero coefficient; math.inf for exact
    zero; INDETERMINATE when the series vanishes only up to truncation."""
    return s.order()


def series_div(num: PuiseuxSeries, den: PuiseuxSeries, cap=None) -> PuiseuxSeries:
    """Quotient by long division in increasing exponents.

    The denominator must have a known leading term.  When the division of
    two exact series terminates it is reported exact; otherwise the result
    carries the sharpest truncation implied by the inputs, clipped at
    ``cap`` (default DEFAULT_TRUNCATION) to keep non-terminating
    expansions finite.
    """
    if den.vanishes_so_far():
        if den.exact:
            raise ZeroDivisionError("division by the zero series")
        raise IndeterminateDenominator(
            f"denominator vanishes up to truncation {den.trunc}"
        )
    q = den.order()
    cap = DEFAULT_TRUNCATION if cap is None else Fraction(cap)
    tn = math.inf if num.trunc is None else num.trunc
    td = math.inf if den.trunc is None else den.trunc
    bound = min(num.order_lower_bound() + td - 2 * q, tn - q, cap)
    if num.vanishes_so_far():
        if num.exact:
            return PuiseuxSeries.zero()
        return PuiseuxSeries.zero(bound)
    den_items = den.items()
    lead = den_items[0][1]
    rest = den_items[1:]
    remainder = dict(num.items())
    out = []
    exact = num.exact and den.exact
    while remainder:
        e = min(remainder)
        shift = e - q
        if shift >= bound:
            exact = False
            break
        c = remainder.pop(e) / lead
        out.append((shift, c))
        for ed, cd in rest:
            key = shift + ed
            val = remainder.get(key, Fraction(0)) - c * cd
            if val == 0:
                remainder.pop(key, None)
            else:
                remainder[key] = val
    return PuiseuxSeries.from_terms(out, None if exact else bound)


def _fraction_sqrt(c: Fraction):
    rn = math.isqrt(c.numerator)
    rd = math.isqrt(c.denominator)
    if rn * rn != c.numerator or rd * rd != c.denominator:
        return None
    return Fraction(rn, rd)


def series_sqrt(s: PuiseuxSeries, cap=None) -> PuiseuxSeries:
    """Square root with rational coefficients.

    Requires a positive leading coefficient that is the square of a
    rational (the binomial expansion then stays rational throughout);
    odd orders double the ramification.
    """
    if s.vanishes_so_far():
        if s.exact:
            return PuiseuxSeries.zero()
        raise IndeterminateOrder(
            f"square root of a series that vanishes up to truncation {s.trunc}"
        )
    q = s.order()
    c = s.leading_coefficient()
    if c < 0:
        raise NegativeLeadingSqrt(f"leading term {c}*t^{q} is negative")
    root = _fraction_sqrt(c)
    if root is None:
        raise PathError(f"leading coefficient {c} is not the square of a rational")
    items = s.items()
    if len(items) == 1 and s.exact:
        return PuiseuxSeries.monomial(q / 2, root)
    cap = DEFAULT_TRUNCATION if cap is None else Fraction(cap)
    bound = cap if s.exact else min(s.trunc - q / 2, cap)
    # s = c t^q (1 + u), sqrt via the binomial series of (1 + u)^(1/2)
    u = PuiseuxSeries.from_terms(
        [(e - q, cc / c) for e, cc in items if e != q],
        None if s.exact else s.trunc - q,
    )
    inner_bound = bound - q / 2
    acc = PuiseuxSeries.constant(1)
    power = PuiseuxSeries.constant(1)
    coeff = Fraction(1)
    step = u.order_lower_bound()
    i = 0
    while step * (i + 1) < inner_bound:
        i += 1
        coeff *= (Fraction(1, 2) - (i - 1)) / i
        power = (power * u).truncated(inner_bound)
        acc = acc + coeff * power
    out = [(e + q / 2, root * cc) for e, cc in acc.items()]
    return PuiseuxSeries.from_terms(out, bound)


def series_abs(s: PuiseuxSeries) -> PuiseuxSeries:
    """Absolute value for series ordered by their leading sign (t > 0
    infinitesimal); a series vanishing up to truncation is its own bound."""
    if s.vanishes_so_far():
        return s
    return -s if s.leading_coefficient() < 0 else s


# -- formal paths ----------------------------------------------------------


def _factorial_terms(T: Fraction):
    terms = []
    n = 2
    while n < T:
        terms.append((n, Fraction(math.factorial(n))))
        n += 1
    return terms


@dataclass(frozen=True)
class PathComponent:
    """One coordinate series of a formal path.

    tag "polynomial" carries an exact series, "ratio" a pair of exact
    series dividing to a power-series quotient, "factorial" the series
    sum n!*t^n for n >= 2, and "coeffs" an explicitly truncated series.
    ``power`` composes the generator with t -> t^power.
    """

    tag: str
    data: tuple = ()
    power: int = 1

    def __post_init__(self):
        if self.tag not in ("polynomial", "ratio", "factorial", "coeffs"):
            raise PathError(f"unknown path component tag {self.tag!r}")
        if not isinstance(self.power, int) or self.power < 1:
            raise PathError("component power must be a positive integer")
        for s in self.data:
            if s.coeffs and min(s.coeffs) < 0:
                raise PathError("path components must not have negative exponents")
            if self.tag in ("polynomial", "ratio") and s.ram != 1:
                raise PathError(f"{self.tag} components need integer exponents")
        if self.tag == "ratio":
            num, den = self.data
            if den.vanishes_so_far():
                raise PathError("ratio component with zero denominator")
            if not num.vanishes_so_far() and num.order() < den.order():
                raise PathError(
                    "ratio component is unbounded at t=0 "
                    f"(orders {num.order()} < {den.order()})"
                )

    def expand(self, T) -> PuiseuxSeries:
        T = Fraction(T)
        inner = T / self.power
        if self.tag == "polynomial":
            s = self.data[0]
        elif self.tag == "ratio":
            s = series_div(self.data[0], self.data[1], inner)
        elif self.tag == "factorial":
            s = PuiseuxSeries.from_terms(_factorial_terms(inner), inner)
        else:
            s = self.data[0].truncated(inner)
        return s.compose_power(self.power) if self.power > 1 else s

    def scaled(self, p: int) -> "PathComponent":
        if self.tag == "factorial":
            return PathComponent(self.tag, self.data, self.power * p)
        data = tuple(s.compose_power(p) for s in self.data)
        return PathComponent(self.tag, data, 1)


def _component_text(part: PathComponent, T: Fraction) -> str:
    if part.tag == "factorial" and part.power == 1:
        return "factorial"
    if part.tag == "polynomial":
        return f"poly: {_poly_text_t(part.data[0])}"
    if part.tag == "ratio":
        num, den = part.data
        return f"ratio: ({_poly_text_t(num)})/({_poly_text_t(den)})"
    s = part.expand(T)
    body = " ".join(f"{n}:{c}" for n, c in sorted(s.coeffs.items()))
    return f"coeffs: {body} @e={s.ram}"


def _poly_text_t(s: PuiseuxSeries) -> str:
    coeffs = []
    for e, c in s.items():
        n = int(e)
        while len(coeffs) <= n:
            coeffs.append(Fraction(0))
        coeffs[n] = c
    return Polynomial.from_univariate("t", coeffs).to_text()


@dataclass(frozen=True)
class FormalPath:
    parts: tuple
    default_trunc: Fraction = DEFAULT_TRUNCATION

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        object.__setattr__(self, "default_trunc", Fraction(self.default_trunc))
        if not self.parts:
            raise PathError("a formal path needs at least one component")

    @property
    def dimension(self) -> int:
        return len(self.parts)

    @property
    def tags(self):
        return tuple(part.tag for part in self.parts)

    def series(self, T=None):
        T = self.default_trunc if T is None else Fraction(T)
        return tuple(part.expand(T) for part in self.parts)

    def value_at_zero(self):
        return tuple(s.coefficient(0) for s in self.series())

    def reparametrize(self, p: int) -> "FormalPath":
        """Substitute t -> t^p in every component."""
        if not isinstance(p, int) or p < 1:
            raise PathError("reparametrization exponent must be a positive integer")
        if p == 1:
            return self
        return FormalPath(tuple(part.scaled(p) for part in self.parts),
                          self.default_trunc * p)

    @staticmethod
    def from_polynomials(polys, trunc=DEFAULT_TRUNCATION) -> "FormalPath":
        """Path with polynomial components, given as Polynomial values in
        one variable or as text like "t, 2t^2+6t^3"."""
        if isinstance(polys, str):
            polys = parse_polynomial_list(polys, ("t",))
        parts = []
        for p in polys:
            if isinstance(p, str):
                p = parse_polynomial(p, ("t",))
            parts.append(PathComponent("polynomial", (PuiseuxSeries.from_polynomial(p),)))
        return FormalPath(tuple(parts), trunc)

    @staticmethod
    def factorial_path(trunc=DEFAULT_TRUNCATION) -> "FormalPath":
        """The plane path (t, sum n!*t^n)."""
        return FormalPath(
            (
                PathComponent("polynomial", (PuiseuxSeries.monomial(1),)),
                PathComponent("factorial"),
            ),
            trunc,
        )


# -- path text format ------------------------------------------------------


def parse_path(text: str) -> FormalPath:
    """Parse the line format: a ``path m=<m> T=<T>`` header, then one
    component line each: ``poly: ...``, ``ratio: (p)/(q)``, ``factorial``
    or ``coeffs: n:c ... @e=<ram>``."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("path "):
        raise PathError("path text must start with a 'path m=<m> T=<T>' header")
    header = lines[0].split()
    fields = {}
    for item in header[1:]:
        key, _, value = item.partition("=")
        fields[key] = value
    try:
        m = int(fields["m"])
        T = Fraction(fields.get("T", DEFAULT_TRUNCATION))
    except (KeyError, ValueError) as exc:
        raise PathError(f"bad path header {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != m:
        raise PathError(f"header promises m={m} components, found {len(body)}")
    parts = []
    for ln in body:
        parts.append(_parse_component(ln, T))
    return FormalPath(tuple(parts), T)


def _parse_component(line: str, T: Fraction) -> PathComponent:
    if line == "factorial":
        return PathComponent("factorial")
    kind, sep, rest = line.partition(":")
    kind = kind.strip()
    rest = rest.strip()
    if not sep or kind not in ("poly", "ratio", "coeffs"):
        raise PathError(f"unrecognized path component {line!r}")
    if kind == "poly":
        p = parse_polynomial(rest, ("t",))
        return PathComponent("polynomial", (PuiseuxSeries.from_polynomial(p),))
    if kind == "ratio":
        return _parse_ratio(rest)
    terms = {}
    ram = 1
    for item in rest.split():
        try:
            if item.startswith("@e="):
                ram = int(item[3:])
                continue
            n, _, c = item.partition(":")
            terms[int(n)] = Fraction(c)
        except (ValueError, ZeroDivisionError) as exc:
            raise PathError(f"bad coeffs item {item!r} in {line!r}") from exc
    series = PuiseuxSeries(ram, terms, T)
    return PathComponent("coeffs", (series,))


def _parse_ratio(rest: str) -> PathComponent:
    depth = 0
    slashes = []
    for i, ch in enumerate(rest):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            slashes.append(i)
    last_error = None
    for i in reversed(slashes):
        try:
            num = parse_polynomial(rest[:i], ("t",))
            den = parse_polynomial(rest[i + 1:], ("t",))
        except ExprError as exc:
            last_error = exc
            continue
        return PathComponent(
            "ratio",
            (PuiseuxSeries.from_polynomial(num), PuiseuxSeries.from_polynomial(den)),
        )
    if last_error is not None:
        raise PathError(f"cannot split ratio component {rest!r}: {last_error}")
    raise PathError(f"ratio component {rest!r} needs a top-level '/'")


def serialize_path(path: FormalPath) -> str:
    T = path.default_trunc
    lines = [f"path m={path.dimension} T={T}"]
    for part in path.parts:
        lines.append(_component_text(part, T))
    return "\n".join(lines) + "\n"


# -- semialgebraic expression trees ----------------------------------------


class SAFunction:
    """Expression tree over path coordinates; nodes are polynomials,
    field operations, abs and sqrt."""

    def variables(self):
        out = set()
        self._collect(out)
        return out

    def _collect(self, out):
        raise NotImplementedError

    def evaluate(self, env, cap):
        raise NotImplementedError

    def to_text(self):
        raise NotImplementedError

    def __add__(self, other):
        if isinstance(self, SAPoly) and isinstance(other, SAPoly):
            return SAPoly(self.poly + other.poly)
        return SAAdd(self, other)

    def __sub__(self, other):
        if isinstance(self, SAPoly) and isinstance(other, SAPoly):
            return SAPoly(self.poly - other.poly)
        return SASub(self, other)

    def __mul__(self, other):
        if isinstance(self, SAPoly) and isinstance(other, SAPoly):
            return SAPoly(self.poly * other.poly)
        return SAMul(self, other)

    def __neg__(self):
        if isinstance(self, SAPoly):
            return SAPoly(-self.poly)
        return SASub(SAPoly(Polynomial.const(0, ())), self)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise PathError("expression powers take non-negative integer exponents")
        if isinstance(self, SAPoly):
            return SAPoly(self.poly ** n)
        if n == 0:
            return SAPoly(Polynomial.const(1, ()))
        out = self
        for _ in range(n - 1):
            out = SAMul(out, self)
        return out

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True)
class SAPoly(SAFunction):
    poly: Polynomial

    def _collect(self, out):
        if not self.poly.terms:
            return
        for v in self.poly.variables:
            if self.poly.degree_in(v) > 0:
                out.add(v)

    def evaluate(self, env, cap):
        total = PuiseuxSeries.zero()
        for exps, c in self.poly.terms.items():
            term = PuiseuxSeries.constant(c)
            for name, e in zip(self.poly.variables, exps):
                if e:
                    term = term * env[name] ** e
            total = total + term
        return total

    def to_text(self):
        return self.poly.to_text()


@dataclass(frozen=True)
class _Binary(SAFunction):
    a: SAFunction
    b: SAFunction

    def _collect(self, out):
        self.a._collect(out)
        self.b._collect(out)


class SAAdd(_Binary):
    def evaluate(self, env, cap):
        return self.a.evaluate(env, cap) + self.b.evaluate(env, cap)

    def to_text(self):
        return f"({self.a.to_text()}) + ({self.b.to_text()})"


class SASub(_Binary):
    def evaluate(self, env, cap):
        return self.a.evaluate(env, cap) - self.b.evaluate(env, cap)

    def to_text(self):
        return f"({self.a.to_text()}) - ({self.b.to_text()})"


class SAMul(_Binary):
    def evaluate(self, env, cap):
        return self.a.evaluate(env, cap) * self.b.evaluate(env, cap)

    def to_text(self):
        return f"({self.a.to_text()})*({self.b.to_text()})"


class SADiv(_Binary):
    def evaluate(self, env, cap):
        return series_div(self.a.evaluate(env, cap), self.b.evaluate(env, cap), cap)

    def to_text(self):
        return f"({self.a.to_text()}) / ({self.b.to_text()})"


@dataclass(frozen=True)
class _Unary(SAFunction):
    arg: SAFunction

    def _collect(self, out):
        self.arg._collect(out)


class SAAbs(_Unary):
    def evaluate(self, env, cap):
        return series_abs(self.arg.evaluate(env, cap))

    def to_text(self):
        return f"abs({self.arg.to_text()})"


class SASqrt(_Unary):
    def evaluate(self, env, cap):
        return series_sqrt(self.arg.evaluate(env, cap), cap)

    def to_text(self):
        return f"sqrt({self.arg.to_text()})"


class _FnParser(_Parser):
    """Expression parser: the polynomial grammar plus general division
    and the abs(...)/sqrt(...) calls, folding polynomial subtrees."""

    _CALLS = {"abs": SAAbs, "sqrt": SASqrt}

    def _base(self):
        tok = self._next()
        if tok[0] == "num":
            return SAPoly(Polynomial.const(Fraction(int(tok[1])), ()))
        if tok[0] == "name":
            node = self._CALLS.get(tok[1])
            if node is not None:
                nxt = self._peek()
                if nxt[0] == "op" and nxt[1] == "(":
                    self._next()
                    inner = self._poly()
                    self._expect_op(")")
                    return node(inner)
                self._error(tok[2], f"{tok[1]} needs a parenthesized argument")
            return SAPoly(Polynomial.var(tok[1], (tok[1],)))
        if tok[0] == "op" and tok[1] == "(":
            p = self._poly()
            self._expect_op(")")
            return p
        self._error(tok[2], "expected a number, a variable or a parenthesis")

    def _term(self):
        out = self._factor()
        while True:
            tok = self._peek()
            if tok[0] == "op" and tok[1] in "*/":
                self._next()
                rhs = self._factor()
                if tok[1] == "/":
                    if isinstance(rhs, SAPoly) and rhs.poly.is_constant():
                        if rhs.poly.constant_value() == 0:
                            self._error(tok[2], "division by the constant zero")
                        out = out * SAPoly(
                            Polynomial.const(1 / rhs.poly.constant_value(), ())
                        )
                    else:
                        out = SADiv(out, rhs)
                else:
                    out = out * rhs
            elif tok[0] in ("num", "name") or (tok[0] == "op" and tok[1] == "("):
                out = out * self._factor()
            else:
                return out


def parse_function(text: str) -> SAFunction:
    parser = _FnParser(text)
    node = parser._poly()
    parser._expect_end()
    return node


# -- evaluation along a path -----------------------------------------------

_SLOT_ALIASES = {"x": 1, "y": 2, "z": 3}


def _variable_slot(name: str, m: int) -> int:
    """Map a coordinate name to a 0-based path component index; accepts
    x/y/z and the numbered forms x1, x2, ..."""
    if name == "t":
        raise PathError("t is the series parameter, not a path coordinate")
    slot = _SLOT_ALIASES.get(name)
    if slot is None and len(name) > 1 and name[0] == "x" and name[1:].isdigit():
        slot = int(name[1:])
        if slot < 1:
            slot = None
    if slot is None:
        raise PathError(f"unknown coordinate {name!r} (use x, y, z or x1..x{m})")
    if slot > m:
        raise PathError(
            f"coordinate {name!r} needs component {slot} but the path has {m}"
        )
    return slot - 1


def slot_names(m: int):
    """Canonical coordinate names for an m-component path."""
    if m <= 3:
        return ("x", "y", "z")[:m]
    return tuple(f"x{i}" for i in range(1, m + 1))


def eval_on_path(f, alpha: FormalPath, T=None) -> PuiseuxSeries:
    """Substitute the path components into the expression.

    When a denominator's order is not determined at the working
    truncation, the truncation is doubled once before the error
    surfaces.
    """
    if isinstance(f, Polynomial):
        f = SAPoly(f)
    T = alpha.default_trunc if T is None else Fraction(T)
    try:
        return _eval_once(f, alpha, T)
    except IndeterminateDenominator:
        return _eval_once(f, alpha, 2 * T)


def _eval_once(f: SAFunction, alpha: FormalPath, T: Fraction) -> PuiseuxSeries:
    comps = alpha.series(T)
    env = {}
    for name in f.variables():
        env[name] = comps[_variable_slot(name, alpha.dimension)]
    return f.evaluate(env, T)


def constant_term(f, alpha: FormalPath, T=None) -> Fraction:
    """Value of the expression at the basepoint: the t^0 coefficient of
    its series along the path."""
    s = eval_on_path(f, alpha, T)
    lb = s.order_lower_bound()
    if lb < 0:
        if s.coeffs and min(s.coeffs) < 0:
            raise UnboundedAlongPath(
                f"series along the path has negative order {s.order()}"
            )
        raise IndeterminateOrder(
            f"order undetermined below 0 at truncation {s.trunc}"
        )
    if not s.knows(0):
        raise IndeterminateOrder(
            f"constant term not determined at truncation {s.trunc}"
        )
    return s.coefficient(0)


# -- ideal membership ------------------------------------------------------


@dataclass(frozen=True)
class IdealVerdict:
    """Membership report for the vanishing ideals attached to a path:
    which="p_alpha" asks whether the whole series vanishes, which="m_star"
    only whether its value at the basepoint does."""

    status: str
    witness_order: object = None
    witness_coefficient: object = None
    truncation: object = None


def ideal_membership(f, alpha: FormalPath, which="m_star", T=None) -> IdealVerdict:
    if which not in ("m_star", "p_alpha"):
        raise PathError(f"unknown ideal selector {which!r}")
    s = eval_on_path(f, alpha, T)
    if which == "p_alpha":
        if s.coeffs:
            return IdealVerdict(NOT_IN_IDEAL, s.order(), s.leading_coefficient(), s.trunc)
        if s.exact:
            return IdealVerdict(EXACTLY_IN_IDEAL)
        return IdealVerdict(IN_IDEAL_UP_TO_T, truncation=s.trunc)
    if s.coeffs and min(s.coeffs) < 0:
        raise UnboundedAlongPath(
            f"series along the path has negative order {s.order()}"
        )
    if not s.knows(0):
        raise IndeterminateOrder(
            f"constant term not determined at truncation {s.trunc}"
        )
    value = s.coefficient(0)
    if value != 0:
        return IdealVerdict(NOT_IN_IDEAL, Fraction(0), value, s.trunc)
    if s.exact:
        return IdealVerdict(EXACTLY_IN_IDEAL)
    return IdealVerdict(IN_IDEAL_UP_TO_T, truncation=s.trunc)


# -- certified positivity under perturbation -------------------------------


def positivity_bound(polys, alpha: FormalPath, T=None) -> int:
    """Smallest certified k such that every path within t^k of this one
    keeps all the polynomials strictly positive: one more than the
    largest vanishing order along the path."""
    worst = Fraction(0)
    have = False
    for p in polys:
        s = eval_on_path(p, alpha, T)
        if s.vanishes_so_far():
            if s.exact:
                raise NotPositiveOnPath(
                    f"{_ptext(p)} vanishes identically along the path"
                )
            raise IndeterminateOrder(
                f"order of {_ptext(p)} not determined at truncation {s.trunc}"
            )
        if s.leading_coefficient() < 0:
            raise NotPositiveOnPath(
                f"{_ptext(p)} has negative leading coefficient "
                f"{s.leading_coefficient()} along the path"
            )
        q = s.order()
        have = True
        if q > worst:
            worst = q
    if not have:
        return 1
    return 1 + math.ceil(worst)


def _ptext(p):
    return p.to_text() if hasattr(p, "to_text") else str(p)


@dataclass(frozen=True)
class CarrierData:
    """Degree bound, polynomial truncation and unit-ball center whose
    swept tube stays inside the positivity region and pins the path to
    its basepoint."""

    k: int
    mu: tuple
    s0: tuple
    samples_checked: int


def compact_carrier(alpha: FormalPath, polys, g=None, T=None, seed=0,
                    sample_count=24) -> CarrierData:
    comps = alpha.series(T)
    for s in comps:
        if s.ram != 1:
            raise PathError("compact carrier data needs integer-exponent components")
    if g is not None:
        sg = eval_on_path(g, alpha, T)
        if sg.coeffs:
            raise PathError(
                f"equation {_ptext(g)} does not vanish along the path "
                f"(order {sg.order()})"
            )
    k = positivity_bound(polys, alpha, T)
    mu = []
    diffs = []
    for s in comps:
        coeffs = [Fraction(0)] * (k + 1)
        for n, c in s.coeffs.items():
            if n <= k:
                coeffs[n] = c
        mu.append(Polynomial.from_univariate("t", coeffs))
        tail = PuiseuxSeries(s.ram, {n: c for n, c in s.coeffs.items() if n > k},
                             s.trunc)
        diffs.append(tail)
    norm2 = PuiseuxSeries.zero()
    for d in diffs:
        lb = d.order_lower_bound()
        if lb < k + 1:
            raise PathError("truncation at degree k left a low-order tail")
        norm2 = norm2 + d * d
    if norm2.order_lower_bound() < 2 * (k + 1):
        raise PathError("squared distance to the truncation is not in (t)^(2k+2)")
    s0 = []
    for s in comps:
        if not s.knows(k + 1):
            raise IndeterminateOrder(
                f"coefficient at t^{k + 1} not determined at truncation {s.trunc}"
            )
        s0.append(s.coefficient(k + 1))
    checked = 0
    for offset in _ball_grid(alpha.dimension, seed, sample_count):
        sample = [v + d for v, d in zip(s0, offset)]
        gamma = []
        for base, sv in zip(mu, sample):
            shift = Polynomial.from_univariate("t", [Fraction(0)] * (k + 1) + [sv])
            gamma.append(base + shift)
        for p in polys:
            subs = {name: gamma[_variable_slot(name, alpha.dimension)]
                    for name in p.variables if p.degree_in(name) > 0}
            series = PuiseuxSeries.from_polynomial(p.substitute(subs))
            if series.vanishes_so_far() or series.leading_coefficient() <= 0:
                raise NotPositiveOnPath(
                    f"sampled tube path violates positivity of {_ptext(p)}"
                )
        checked += 1
    return CarrierData(k, tuple(mu), tuple(s0), checked)


def _ball_grid(m, seed, count):
    """Deterministic rational points of the closed unit ball: the center,
    the half-axes, and seeded random points with denominator 8."""
    yield tuple(Fraction(0) for _ in range(m))
    for i in range(m):
        for v in (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2)):
            yield tuple(v if j == i else Fraction(0) for j in range(m))
    rng = random.Random(seed)
    made = 0
    while made < count:
        point = tuple(Fraction(rng.randint(-8, 8), 8) for _ in range(m))
        if sum(v * v for v in point) <= 1:
            made += 1
            yield point


# -- polynomial tube tests -------------------------------------------------


@dataclass(frozen=True)
class Neighborhood:
    """Tube test around a path with first component t: ``inner`` is
    positive along a path iff it tracks the truncation gamma closer than
    x1^(ell+1), ``window`` iff the first coordinate stays below 1/k."""

    ell: int
    k: int
    gamma: tuple
    inner: SAFunction
    window: SAFunction

    def certificate(self, mu: FormalPath, T=None):
        """(member, inner leading coefficient, window leading coefficient)."""
        leads = []
        for fn in (self.inner, self.window):
            s = eval_on_path(fn, mu, T)
            if s.vanishes_so_far():
                if s.exact:
                    leads.append(Fraction(0))
                    continue
                raise IndeterminateOrder(
                    f"tube test sign not determined at truncation {s.trunc}"
                )
            leads.append(s.leading_coefficient())
        member = leads[0] > 0 and leads[1] > 0
        return member, leads[0], leads[1]

    def contains(self, mu: FormalPath, T=None) -> bool:
        return self.certificate(mu, T)[0]


def neighborhood_element(alpha: FormalPath, ell: int, k: int, T=None) -> Neighborhood:
    """Polynomial tube data around a path normalized to first component t."""
    if not (isinstance(ell, int) and ell >= 1 and isinstance(k, int) and k >= 1):
        raise PathError("tube indices must be integers >= 1")
    comps = alpha.series(T)
    first = comps[0]
    if not (first.exact and first.items() == ((Fraction(1), Fraction(1)),)):
        raise NormalizationRequired(
            "first component must be exactly t; reparametrize first"
        )
    names = slot_names(alpha.dimension)
    x1 = Polynomial.var(names[0], (names[0],))
    gamma = [Polynomial.var("t", ("t",))]
    spread = Polynomial.const(0, ())
    for j in range(1, alpha.dimension):
        s = comps[j]
        if s.ram != 1:
            raise PathError("tube data needs integer-exponent components")
        if not s.knows(ell + 2):
            raise IndeterminateOrder(
                f"component {j + 1} not determined below t^{ell + 2}"
            )
        coeffs = [Fraction(0)] * (ell + 2)
        for n, c in s.coeffs.items():
            if n < ell + 2:
                coeffs[n] = c
        gamma.append(Polynomial.from_univariate("t", coeffs))
        along = Polynomial.from_univariate(names[0], coeffs)
        xj = Polynomial.var(names[j], (names[j],))
        spread = spread + (xj - along) ** 2
    inner = SAPoly(x1 ** (2 * ell + 2) - spread)
    window = SAPoly(Polynomial.const(Fraction(1, k * k), ()) - x1 ** 2)
    return Neighborhood(ell, k, tuple(gamma), inner, window)


# -- separating quotients --------------------------------------------------


def truncated_factorial(k: int, var="x") -> Polynomial:
    """sum of n!*var^n for 2 <= n <= k."""
    coeffs = [Fraction(0)] * (max(k, 1) + 1)
    for n in range(2, k + 1):
        coeffs[n] = Fraction(math.factorial(n))
    return Polynomial.from_univariate(var, coeffs)


def appendix_separator(k: int) -> SAFunction:
    """The bounded quotient (y - p_k(x))^2 / ((y - p_k(x))^2 + x^(2k))
    with p_k the degree-k truncation of sum n!*x^n; takes values in [0,1)
    and vanishes along the graph of p_k."""
    if not isinstance(k, int) or k < 2:
        raise PathError("separating quotients are defined for integers k >= 2")
    x = Polynomial.var("x", ("x", "y"))
    y = Polynomial.var("y", ("x", "y"))
    num = (y - truncated_factorial(k).embed(("x", "y"))) ** 2
    return SADiv(SAPoly(num), SAPoly(num + x ** (2 * k)))


@dataclass(frozen=True)
class SeparationResult:
    k: int
    value: Fraction


def separate_from_algebraic(mu: FormalPath, k_max=12, T=None):
    """Least k whose separating quotient has a nonzero value at the
    basepoint along mu, or None when no k <= k_max resolves at this
    truncation.  The first component must be a pure power t^j.

    For plane paths (t, mu2) whose second component differs from
    sum n!*t^n at order w >= 2, the found k equals w; for j >= 2 a
    smaller k can already separate.
    """
    first = mu.series(T)[0]
    j = first.order()
    if not (first.exact and len(first.coeffs) == 1
            and first.leading_coefficient() == 1
            and isinstance(j, Fraction) and j.denominator == 1 and j >= 1):
        raise NormalizationRequired(
            "first component must be t^j for an integer j >= 1"
        )
    for k in range(2, k_max + 1):
        value = constant_term(appendix_separator(k), mu, T)
        if value != 0:
            return SeparationResult(k, value)
    return None
