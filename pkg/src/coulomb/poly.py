"""Sparse exact polynomials over the rationals.

A :class:`Poly` maps monomials to :class:`fractions.Fraction` coefficients.
A monomial is a tuple of ``(variable, exponent)`` pairs sorted in the global
variable order, with zero exponents omitted.  Variables are plain strings:

    mu, h, m, q       mass, loop-rotation and their multiplicative versions
    t1 .. tr          Lie-algebra coordinates (tau)
    x1 .. xr          torus coordinates (multiplicative flavor)
    z1 .. zr          winding monomials
    u, v              auxiliary coordinates of the rank-one Weyl cover

The Laurent variables ``m, q, x*, z*`` may carry negative exponents and are
treated as units by division and normalization.
"""

from __future__ import annotations

import heapq
import re
from math import gcd
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

Monomial = tuple
Scalar = Union[int, Fraction]

_INDEXED = re.compile(r"^([tzx])(\d+)$")
_BASE_ORDER = {"mu": 0, "h": 1, "m": 2, "q": 3, "t": 4, "x": 5, "z": 6, "u": 7, "v": 8}


@lru_cache(maxsize=None)
def var_key(name: str) -> tuple:
    """Sort key fixing the global variable order mu, h, m, q, t*, x*, z*, u, v."""
    match = _INDEXED.match(name)
    if match:
        return (_BASE_ORDER[match.group(1)], int(match.group(2)), "")
    if name in _BASE_ORDER:
        return (_BASE_ORDER[name], 0, "")
    return (9, 0, name)


@lru_cache(maxsize=None)
def is_laurent(name: str) -> bool:
    if name in ("m", "q"):
        return True
    match = _INDEXED.match(name)
    return bool(match) and match.group(1) in "xz"


def tau(i: int) -> str:
    return f"t{i + 1}"


def xvar(i: int) -> str:
    return f"x{i + 1}"


def zvar(i: int) -> str:
    return f"z{i + 1}"


def _mono_from_dict(d: Mapping[str, int]) -> Monomial:
    return tuple(sorted(((v, e) for v, e in d.items() if e), key=lambda ve: var_key(ve[0])))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return _mono_from_dict(d)


def mono_inv(a: Monomial) -> Monomial:
    return tuple((v, -e) for v, e in a)


def _mono_divides(a: Monomial, b: Monomial) -> Monomial | None:
    """Return b/a if a divides b among nonnegative-exponent monomials."""
    d = dict(b)
    for v, e in a:
        r = d.get(v, 0) - e
        if r < 0:
            return None
        d[v] = r
    return _mono_from_dict(d)


def _fmt_scalar(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_mono(mono: Monomial) -> str:
    parts = []
    for v, e in mono:
        if e == 1:
            parts.append(v)
        elif e < 0:
            parts.append(f"{v}^({e})")
        else:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


class Poly:
    """Immutable sparse polynomial (Laurent in the Laurent variables)."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[mono] = c
        self._terms = clean
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls({(): c})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Poly":
        return cls({_mono_from_dict({name: power}): 1})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: Scalar = 1) -> "Poly":
        return cls({_mono_from_dict(exps): coeff})

    @classmethod
    def coerce(cls, value) -> "Poly":
        if isinstance(value, Poly):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to Poly")

    # inspection -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def variables(self) -> list[str]:
        names = {v for mono in self._terms for v, _ in mono}
        return sorted(names, key=var_key)

    def degree(self, var: str | None = None) -> int:
        """Total degree, or the degree in ``var``; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e for _, e in mono) for mono in self._terms)
        return max(dict(mono).get(var, 0) for mono in self._terms)

    def min_degree(self, var: str) -> int:
        return min(dict(mono).get(var, 0) for mono in self._terms)

    def has_negative_exponents(self) -> bool:
        return any(e < 0 for mono in self._terms for _, e in mono)

    def coefficient(self, exps: Mapping[str, int]) -> Fraction:
        return self._terms.get(_mono_from_dict(exps), Fraction(0))

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for mono, c in other._terms.items():
            out[mono] = out.get(mono, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, Poly) and other.is_monomial():
            return self * other.inverse_monomial()
        return NotImplemented

    def inverse_monomial(self) -> "Poly":
        if not self.is_monomial():
            raise ValueError(f"{self} is not a monomial")
        ((mono, c),) = self._terms.items()
        return Poly({mono_inv(mono): 1 / c})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            return self.inverse_monomial() ** (-n)
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # substitution -----------------------------------------------------
    def subs(self, mapping: Mapping[str, object]) -> "Poly":
        """Substitute polynomials for variables.

        Negative powers are only allowed when the image is a monomial.
        """
        if not mapping:
            return self
        images = {v: Poly.coerce(p) for v, p in mapping.items()}
        cache: dict = {}

        def power(v, e):
            key = (v, e)
            if key not in cache:
                cache[key] = images[v] ** e
            return cache[key]

        out = Poly()
        acc: dict = {}
        for mono, c in self._terms.items():
            kept = []
            factor = None
            for v, e in mono:
                if v in images:
                    p = power(v, e)
                    factor = p if factor is None else factor * p
                else:
                    kept.append((v, e))
            kept = tuple(kept)
            if factor is None:
                acc[kept] = acc.get(kept, 0) + c
            else:
                for m2, c2 in factor._terms.items():
                    m = mono_mul(kept, m2)
                    acc[m] = acc.get(m, 0) + c * c2
        out = Poly(acc)
        return out

    def map_monomials(self, fn) -> "Poly":
        """Apply ``fn(mono, coeff) -> (mono, coeff)`` termwise and recollect."""
        acc: dict = {}
        for mono, c in self._terms.items():
            m2, c2 = fn(mono, c)
            acc[m2] = acc.get(m2, 0) + c2
        return Poly(acc)

    def evaluate(self, values: Mapping[str, object]):
        total = 0
        for mono, c in self._terms.items():
            term = c
            for v, e in mono:
                term = term * values[v] ** e
            total = total + term
        return total

    # ordering ---------------------------------------------------------
    def leading_monomial(self) -> Monomial:
        variables = self.variables()
        return max(self._terms, key=_order_key(variables))

    def leading_coefficient(self) -> Fraction:
        return self._terms[self.leading_monomial()]

    def sorted_terms(self) -> list:
        variables = self.variables()
        return sorted(self._terms.items(), key=lambda mc: _order_key(variables)(mc[0]), reverse=True)

    # printing ---------------------------------------------------------
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for i, (mono, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = _fmt_mono(mono)
            if not body:
                text = _fmt_scalar(a)
            elif a == 1:
                text = body
            else:
                text = f"{_fmt_scalar(a)}*{body}"
            if i == 0:
                pieces.append(("-" if sign == "-" else "") + text)
            else:
                pieces.append(f" {sign} {text}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


def _order_key(variables: list[str]):
    def key(mono: Monomial):
        d = dict(mono)
        vec = tuple(d.get(v, 0) for v in variables)
        return (sum(vec), vec)

    return key


def const(c: Scalar) -> Poly:
    return Poly.const(c)


def var(name: str) -> Poly:
    return Poly.var(name)


ZERO = Poly()
ONE = Poly.const(1)


# ----------------------------------------------------------------------
# normalization and exact division
# ----------------------------------------------------------------------


def laurent_normalize(p: Poly) -> tuple[Poly, Poly]:
    """Split ``p`` as ``unit * normalized``.

    ``unit`` is a coefficient-one monomial in the Laurent variables and the
    normalized factor has minimum exponent zero in each of them.
    """
    if p.is_zero():
        raise ValueError("cannot normalize the zero polynomial")
    lows: dict[str, int] = {}
    monos = list(p._terms)
    names = {v for mono in monos for v, _ in mono if is_laurent(v)}
    for v in names:
        lows[v] = min(dict(mono).get(v, 0) for mono in monos)
    for mono in monos:
        for v, e in mono:
            if e < 0 and not is_laurent(v):
                raise ValueError(f"negative exponent on non-Laurent variable {v!r}")
    unit = Poly.monomial(lows)
    return unit, p * unit.inverse_monomial()


def _divide_nonneg(divisor: Poly, dividend: Poly) -> Poly | None:
    variables = sorted(set(divisor.variables()) | set(dividend.variables()), key=var_key)
    key = _order_key(variables)

    def heap_key(mono):
        total, vec = key(mono)
        return (-total, tuple(-e for e in vec))

    lead = max(divisor._terms, key=key)
    lead_c = divisor._terms[lead]
    rest = dict(dividend._terms)
    # max-heap of remainder monomials; stale entries are skipped on pop
    heap = [(heap_key(m), m) for m in rest]
    heapq.heapify(heap)
    quotient: dict = {}
    dterms = [(m, cd) for m, cd in divisor._terms.items() if m != lead]
    while heap:
        _, top = heapq.heappop(heap)
        c = rest.pop(top, None)
        if c is None:
            continue
        qm = _mono_divides(lead, top)
        if qm is None:
            return None
        c = c / lead_c
        quotient[qm] = c
        for m, cd in dterms:
            mm = mono_mul(qm, m)
            old = rest.get(mm)
            val = (old or 0) - c * cd
            if val:
                rest[mm] = val
                if old is None:
                    heapq.heappush(heap, (heap_key(mm), mm))
            elif old is not None:
                del rest[mm]
    return Poly(quotient)


def poly_divide(divisor: Poly, dividend: Poly) -> Poly | None:
    """Exact quotient ``dividend / divisor`` or ``None`` when not divisible.

    Laurent variables are units: divisibility is decided after
    :func:`laurent_normalize` on both sides.
    """
    divisor = Poly.coerce(divisor)
    dividend = Poly.coerce(dividend)
    if divisor.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if dividend.is_zero():
        return Poly()
    if divisor.is_monomial() and all(is_laurent(v) for v, _ in divisor.leading_monomial()):
        return dividend * divisor.inverse_monomial()
    unit_a, norm_a = laurent_normalize(dividend)
    unit_d, norm_d = laurent_normalize(divisor)
    q = _divide_nonneg(norm_d, norm_a)
    if q is None:
        return None
    return q * unit_a * unit_d.inverse_monomial()


# ----------------------------------------------------------------------
# factored classes
# ----------------------------------------------------------------------


def normalize_form(form: Poly) -> tuple[Poly, Poly]:
    """Return ``(unit, monic)`` with ``form == unit * monic``.

    ``unit`` is a Laurent monomial times a rational; ``monic`` has coprime
    integer coefficients, a positive leading coefficient and no Laurent
    monomial content.
    """
    unit, norm = laurent_normalize(form)
    coeffs = [c for _, c in norm.items()]
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    num = 0
    for c in coeffs:
        num = gcd(num, (c * den).numerator)
    scale = Fraction(den, num)
    if norm.leading_coefficient() < 0:
        scale = -scale
    return unit * (1 / scale), norm * scale


class FactoredClass:
    """A product ``unit * prod(form_i ** e_i)`` of normalized forms.

    Forms are pairwise distinct after normalization; equal forms are merged.
    """

    __slots__ = ("factors", "unit")

    def __init__(self, factors: Iterable[tuple[Poly, int]] = (), unit: Poly | Scalar = 1):
        unit = Poly.coerce(unit)
        merged: dict[Poly, int] = {}
        for form, e in factors:
            if e < 0:
                raise ValueError("factor exponents must be positive")
            if e == 0:
                continue
            u, f = normalize_form(Poly.coerce(form))
            unit = unit * u**e
            if f == ONE:
                continue
            merged[f] = merged.get(f, 0) + e
        self.factors = tuple(sorted(merged.items(), key=lambda fe: str(fe[0])))
        self.unit = unit

    @classmethod
    def one(cls) -> "FactoredClass":
        return cls()

    def is_one(self) -> bool:
        return not self.factors and self.unit == ONE

    def is_trivial(self) -> bool:
        """True when the class is a unit (no non-unit factors)."""
        return not self.factors

    def degree(self) -> int:
        return sum(f.degree() * e for f, e in self.factors)

    def multiplicity(self) -> int:
        return sum(e for _, e in self.factors)

    def expand(self) -> Poly:
        out = self.unit
        for f, e in self.factors:
            out = out * f**e
        return out

    def __mul__(self, other: "FactoredClass") -> "FactoredClass":
        return FactoredClass(self.factors + other.factors, self.unit * other.unit)

    def subs(self, mapping: Mapping[str, object]) -> "FactoredClass":
        return FactoredClass(((f.subs(mapping), e) for f, e in self.factors), self.unit.subs(mapping))

    def forms(self) -> set:
        return {f for f, _ in self.factors}

    def __eq__(self, other) -> bool:
        if not isinstance(other, FactoredClass):
            return NotImplemented
        return self.factors == other.factors and self.unit == other.unit

    def __hash__(self) -> int:
        return hash((self.factors, self.unit))

    def __str__(self) -> str:
        parts = []
        if self.unit != ONE or not self.factors:
            parts.append(str(self.unit) if self.unit.is_monomial() else f"({self.unit})")
        for f, e in self.factors:
            text = f"({f})"
            parts.append(text if e == 1 else f"{text}^{e}")
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"FactoredClass({str(self)!r})"


def factored_divides(d: FactoredClass, p: Poly) -> Poly | None:
    """Divide ``p`` by each form of ``d`` to its multiplicity, then by the unit."""
    q = Poly.coerce(p)
    for form, e in d.factors:
        for _ in range(e):
            q = poly_divide(form, q)
            if q is None:
                return None
    return poly_divide(d.unit, q)


def failing_factor(d: FactoredClass, p: Poly) -> tuple[Poly, int] | None:
    """The first form of ``d`` that fails to divide ``p``, with its required power."""
    q = Poly.coerce(p)
    for form, e in d.factors:
        for k in range(e):
            nxt = poly_divide(form, q)
            if nxt is None:
                return form, e
            q = nxt
    return None


def cancel(num: Poly, den: FactoredClass) -> tuple[Poly, FactoredClass]:
    """Cancel the forms of ``den`` against ``num`` as far as exact division allows.

    The result is reduced when the forms of ``den`` are irreducible, which
    holds for the affine and binomial forms built in this package.
    """
    num = poly_divide(den.unit, num)
    left = []
    for form, e in den.factors:
        k = 0
        while k < e:
            nxt = poly_divide(form, num)
            if nxt is None:
                break
            num = nxt
            k += 1
        if k < e:
            left.append((form, e - k))
    return num, FactoredClass(left)


# ----------------------------------------------------------------------
# rational substitution
# ----------------------------------------------------------------------


def _clear_negative(polys: list[Poly]) -> Poly:
    """Monomial that clears every negative exponent across ``polys``."""
    lows: dict[str, int] = {}
    for p in polys:
        for mono in p._terms:
            for v, e in mono:
                if e < lows.get(v, 0):
                    lows[v] = e
    return Poly.monomial({v: -e for v, e in lows.items()})


def _to_sympy(polys: list[Poly]):
    import sympy

    names = sorted({v for p in polys for v in p.variables()}, key=var_key) or ["_c"]
    gens = sympy.symbols(names)
    out = []
    for p in polys:
        data = {}
        for mono, c in p._terms.items():
            d = dict(mono)
            data[tuple(d.get(n, 0) for n in names)] = sympy.Rational(c.numerator, c.denominator)
        out.append(sympy.Poly.from_dict(data or {tuple(0 for _ in names): 0}, *gens, domain="QQ"))
    return names, out


def _from_sympy(names: list[str], sp) -> Poly:
    terms = {}
    for exps, c in sp.terms():
        c = Fraction(int(c.p), int(c.q))
        terms[_mono_from_dict(dict(zip(names, exps)))] = c
    return Poly(terms)


def reduce_fraction(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Reduce ``num/den`` by their gcd; the denominator comes out monic.

    Laurent-monomial content of the denominator is moved to the numerator.
    """
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return Poly(), ONE
    clear = _clear_negative([num, den])
    num, den = num * clear, den * clear
    names, (sn, sd) = _to_sympy([num, den])
    g = sn.gcd(sd)
    sn, sd = sn.exquo(g), sd.exquo(g)
    num, den = _from_sympy(names, sn), _from_sympy(names, sd)
    unit, den = normalize_form(den)
    return num * unit.inverse_monomial(), den


def substitute(p: Poly, bindings: Mapping[str, object]) -> tuple[Poly, Poly]:
    """Substitute rational expressions for variables.

    Each binding is a :class:`Poly` or a ``(numerator, denominator)`` pair.
    Returns the reduced ``(numerator, denominator)`` of the result.
    """
    pairs = {}
    for v, b in bindings.items():
        if isinstance(b, tuple):
            n, d = Poly.coerce(b[0]), Poly.coerce(b[1])
        else:
            n, d = Poly.coerce(b), ONE
        if d.is_zero():
            raise ZeroDivisionError(f"binding for {v!r} has zero denominator")
        pairs[v] = (n, d)
    hi: dict[str, int] = {}
    lo: dict[str, int] = {}
    for mono in p._terms:
        for v, e in mono:
            if v in pairs:
                hi[v] = max(hi.get(v, 0), e)
                lo[v] = max(lo.get(v, 0), -e)
    cache: dict = {}

    def pw(poly: Poly, e: int, tag):
        key = (tag, e)
        if key not in cache:
            cache[key] = poly**e
        return cache[key]

    den = ONE
    for v, (n, d) in pairs.items():
        den = den * pw(d, hi.get(v, 0), (v, "d")) * pw(n, lo.get(v, 0), (v, "n"))
    num = Poly()
    for mono, c in p._terms.items():
        term = Poly({(): c})
        rest = []
        d_exp = dict(mono)
        for v, (n, d) in pairs.items():
            e = d_exp.get(v, 0)
            if e >= 0:
                term = term * pw(n, e + lo.get(v, 0), (v, "n")) * pw(d, hi.get(v, 0) - e, (v, "d"))
            else:
                term = term * pw(d, -e + hi.get(v, 0), (v, "d")) * pw(n, lo.get(v, 0) + e, (v, "n"))
        for v, e in mono:
            if v not in pairs:
                rest.append((v, e))
        num = num + term * Poly({tuple(rest): 1})
    return reduce_fraction(num, den)


# ----------------------------------------------------------------------
# parsing
# ----------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")
_ALIASES = {"t": "t1", "z": "z1", "x": "x1", "tau": "t1"}
_KNOWN = re.compile(r"^(mu|h|m|q|u|v|[tzx][1-9]\d*)$")


def parse_poly(text: str, allow_negative: Iterable[str] = ()) -> Poly:
    """Parse the textual polynomial syntax.

    ``^`` (or ``**``) accepts negative integers on Laurent variables and on
    the names listed in ``allow_negative``; ``/`` divides by monomials.
    """
    extra = set(allow_negative)
    tokens = []
    pos = 0
    text_len = len(text)
    while pos < text_len:
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", text, pos)
        start = match.start(match.lastindex)
        kind = ("num", "name", "op")[match.lastindex - 1]
        value = match.group(match.lastindex)
        if value == "**":
            value = "^"
        tokens.append((kind, value, start))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    index = 0

    def peek():
        return tokens[index]

    def take():
        nonlocal index
        tok = tokens[index]
        index += 1
        return tok

    def expect(value):
        tok = take()
        if tok[1] != value:
            raise ParseError(f"expected {value!r}", text, tok[2])

    def invert(p: Poly, where: int) -> Poly:
        if not p.is_monomial():
            raise ParseError("only monomials can be inverted", text, where)
        for v, _ in p.leading_monomial():
            if not (is_laurent(v) or v in extra):
                raise ParseError(f"negative power of non-Laurent variable {v!r}", text, where)
        if p.leading_coefficient() == 0:
            raise ParseError("division by zero", text, where)
        return p.inverse_monomial()

    def expr():
        out = term()
        while peek()[1] in ("+", "-") and peek()[0] == "op":
            op = take()[1]
            rhs = term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term():
        out = unary()
        while peek()[1] in ("*", "/") and peek()[0] == "op":
            op, _, where = take()[1], None, peek()[2]
            rhs = unary()
            if op == "*":
                out = out * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by zero", text, where)
                if rhs.is_constant():
                    out = out * (1 / rhs.constant_value())
                else:
                    out = out * invert(rhs, where)
        return out

    def unary():
        if peek()[0] == "op" and peek()[1] in ("-", "+"):
            op = take()[1]
            inner = unary()
            return -inner if op == "-" else inner
        return power()

    def exponent():
        tok = peek()
        if tok[1] == "(":
            take()
            n = exponent()
            expect(")")
            return n
        sign = 1
        if tok[1] in ("-", "+"):
            take()
            sign = -1 if tok[1] == "-" else 1
        tok = take()
        if tok[0] != "num":
            raise ParseError("expected integer exponent", text, tok[2])
        return sign * int(tok[1])

    def power():
        base = atom()
        if peek()[1] == "^":
            where = take()[2]
            n = exponent()
            if n < 0:
                if base.is_constant():
                    c = base.constant_value()
                    if c == 0:
                        raise ParseError("division by zero", text, where)
                    return Poly.const(c**n)
                return invert(base, where) ** (-n)
            return base**n
        return base

    def atom():
        kind, value, where = take()
        if kind == "num":
            return Poly.const(int(value))
        if kind == "name":
            name = _ALIASES.get(value, value)
            if not _KNOWN.match(name):
                raise ParseError(f"unknown variable {value!r}", text, where)
            return Poly.var(name)
        if value == "(":
            inner = expr()
            expect(")")
            return inner
        raise ParseError(f"unexpected {value or 'end of input'!r}", text, where)

    result = expr()
    if peek()[0] != "end":
        raise ParseError(f"unexpected {peek()[1]!r}", text, peek()[2])
    return result
