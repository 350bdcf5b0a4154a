"""Winding-graded elements ``sum_eta z^eta p_eta``."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .poly import ONE, FactoredClass, Poly, cancel, parse_poly, tau, zvar

ADDITIVE = "add"
MULTIPLICATIVE = "mult"


def _key(eta: Iterable[int]) -> tuple:
    return tuple(int(e) for e in eta)


class GradedElement:
    """A finite sum ``sum z^eta p_eta`` with commutative multiplication.

    ``den`` is an optional monomial denominator ``prod t_i^den_i`` shared by
    all coefficients; it is only used for rank-one Weyl-cover elements such
    as ``(z - 1)/t1``.
    """

    __slots__ = ("coeffs", "rank", "den", "flavor")

    def __init__(
        self,
        coeffs: Mapping[Iterable[int], object] | None = None,
        rank: int = 1,
        den: Iterable[int] | None = None,
        flavor: str = ADDITIVE,
    ):
        clean: dict[tuple, Poly] = {}
        for eta, p in (coeffs or {}).items():
            eta = _key(eta)
            if len(eta) != rank:
                raise ValueError(f"winding {eta} does not have rank {rank}")
            p = Poly.coerce(p)
            if any(v.startswith("z") for v in p.variables()):
                raise ValueError("coefficients must not contain winding variables")
            if eta in clean:
                p = clean[eta] + p
            if p.is_zero():
                clean.pop(eta, None)
            else:
                clean[eta] = p
        den = tuple(den) if den is not None else (0,) * rank
        if len(den) != rank or any(d < 0 for d in den):
            raise ValueError("den must be a nonnegative vector of length rank")
        self.coeffs = clean
        self.rank = rank
        self.den = den
        self.flavor = flavor
        self._reduce_den()

    def _reduce_den(self) -> None:
        if not any(self.den) or not self.coeffs:
            if not self.coeffs:
                self.den = (0,) * self.rank
            return
        den = list(self.den)
        coeffs = self.coeffs
        for i in range(self.rank):
            t = tau(i)
            common = min(p.min_degree(t) for p in coeffs.values())
            k = min(common, den[i])
            if k > 0:
                shift = Poly.monomial({t: -k})
                coeffs = {eta: p * shift for eta, p in coeffs.items()}
                den[i] -= k
        self.coeffs = coeffs
        self.den = tuple(den)

    # constructors -----------------------------------------------------
    @classmethod
    def monomial(cls, eta: Iterable[int], p: object = 1, flavor: str = ADDITIVE) -> "GradedElement":
        eta = _key(eta)
        return cls({eta: p}, rank=len(eta), flavor=flavor)

    @classmethod
    def scalar(cls, p: object, rank: int = 1, flavor: str = ADDITIVE) -> "GradedElement":
        return cls({(0,) * rank: p}, rank=rank, flavor=flavor)

    @classmethod
    def from_poly(cls, p: Poly, rank: int, flavor: str | None = None) -> "GradedElement":
        """Split a polynomial in ``z1..zr`` (and tau with negative powers) into graded form."""
        zs = {zvar(i): i for i in range(rank)}
        taus = {tau(i): i for i in range(rank)}
        for v in p.variables():
            if v.startswith("z") and v not in zs:
                raise ValueError(f"variable {v} exceeds rank {rank}")
        den = [0] * rank
        for mono, _ in p.items():
            for v, e in mono:
                if v in taus and e < 0:
                    den[taus[v]] = max(den[taus[v]], -e)
        den_mono = Poly.monomial({tau(i): d for i, d in enumerate(den)})
        coeffs: dict = {}
        for mono, c in p.items():
            eta = [0] * rank
            rest = []
            for v, e in mono:
                if v in zs:
                    eta[zs[v]] = e
                else:
                    rest.append((v, e))
            key = tuple(eta)
            coeffs[key] = coeffs.get(key, Poly()) + Poly({tuple(rest): c}) * den_mono
        if flavor is None:
            names = set(p.variables())
            flavor = MULTIPLICATIVE if any(n == "m" or n.startswith("x") for n in names) else ADDITIVE
        return cls(coeffs, rank=rank, den=den, flavor=flavor)

    @classmethod
    def parse(cls, text: str, rank: int, flavor: str | None = None) -> "GradedElement":
        return cls.from_poly(parse_poly(text, allow_negative=[tau(i) for i in range(rank)]), rank, flavor)

    def _new(self, coeffs, den=None) -> "GradedElement":
        return type(self)(coeffs, rank=self.rank, den=self.den if den is None else den, flavor=self.flavor)

    # inspection -------------------------------------------------------
    def support(self) -> list[tuple]:
        return sorted(self.coeffs)

    def coefficient(self, eta: Iterable[int]) -> Poly:
        return self.coeffs.get(_key(eta), Poly())

    def is_zero(self) -> bool:
        return not self.coeffs

    def has_den(self) -> bool:
        return any(self.den)

    def den_poly(self) -> Poly:
        return Poly.monomial({tau(i): d for i, d in enumerate(self.den)})

    def to_poly(self) -> Poly:
        """Return ``sum z^eta p_eta`` with the denominator as negative tau powers."""
        inv = self.den_poly().inverse_monomial()
        out = Poly()
        for eta, p in self.coeffs.items():
            out = out + Poly.monomial({zvar(i): e for i, e in enumerate(eta)}) * p
        return out * inv

    # arithmetic -------------------------------------------------------
    def _check(self, other: "GradedElement") -> None:
        if self.rank != other.rank:
            raise ValueError("rank mismatch")

    def _aligned(self, other: "GradedElement"):
        den = tuple(max(a, b) for a, b in zip(self.den, other.den))
        sa = Poly.monomial({tau(i): d - a for i, (d, a) in enumerate(zip(den, self.den))})
        sb = Poly.monomial({tau(i): d - b for i, (d, b) in enumerate(zip(den, other.den))})
        return den, sa, sb

    def _coerce(self, other) -> "GradedElement":
        if isinstance(other, GradedElement):
            self._check(other)
            return other
        return type(self).scalar(Poly.coerce(other), self.rank, self.flavor)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        den, sa, sb = self._aligned(other)
        out = {eta: p * sa for eta, p in self.coeffs.items()}
        for eta, p in other.coeffs.items():
            out[eta] = out.get(eta, Poly()) + p * sb
        return self._new(out, den)

    __radd__ = __add__

    def __neg__(self):
        return self._new({eta: -p for eta, p in self.coeffs.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = Poly.coerce(other)
            return self._new({eta: p * other for eta, p in self.coeffs.items()})
        if not isinstance(other, GradedElement):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for a, p in self.coeffs.items():
            for b, r in other.coeffs.items():
                eta = tuple(x + y for x, y in zip(a, b))
                out[eta] = out.get(eta, Poly()) + p * r
        den = tuple(x + y for x, y in zip(self.den, other.den))
        return self._new(out, den)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        result = type(self).scalar(ONE, self.rank, self.flavor)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Poly)):
            other = type(self).scalar(other, self.rank, self.flavor)
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.rank == other.rank and self.den == other.den and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.rank, self.den, frozenset(self.coeffs.items())))

    def map_coeffs(self, fn) -> "GradedElement":
        """Apply ``fn(eta, p) -> p'`` to each coefficient."""
        return self._new({eta: fn(eta, p) for eta, p in self.coeffs.items()})

    def subs(self, mapping) -> "GradedElement":
        return self.map_coeffs(lambda eta, p: p.subs(mapping))

    def __str__(self) -> str:
        return str(self.to_poly())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self)!r}, rank={self.rank})"


class RationalGraded:
    """Per-winding reduced fractions ``num / den`` with factored denominators."""

    __slots__ = ("parts", "rank")

    def __init__(self, parts: Mapping[tuple, tuple[Poly, FactoredClass]], rank: int):
        clean = {}
        for eta, (num, den) in parts.items():
            num, den = cancel(Poly.coerce(num), den)
            if not num.is_zero():
                clean[_key(eta)] = (num, den)
        self.parts = clean
        self.rank = rank

    def is_regular(self) -> bool:
        return all(den.is_trivial() for _, den in self.parts.values())

    def poles(self) -> dict:
        return {eta: den for eta, (_, den) in self.parts.items() if not den.is_trivial()}

    def to_graded(self, flavor: str = ADDITIVE) -> GradedElement:
        if not self.is_regular():
            raise ValueError("element has poles")
        return GradedElement(
            {eta: num * den.expand() for eta, (num, den) in self.parts.items()}, rank=self.rank, flavor=flavor
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalGraded):
            return NotImplemented
        if set(self.parts) != set(other.parts):
            return False
        for eta, (n1, d1) in self.parts.items():
            n2, d2 = other.parts[eta]
            if n1 * d2.expand() != n2 * d1.expand():
                return False
        return True

    def __str__(self) -> str:
        if not self.parts:
            return "0"
        chunks = []
        for eta in sorted(self.parts):
            num, den = self.parts[eta]
            z = "*".join(f"z{i + 1}^({e})" if e < 0 else (f"z{i + 1}" if e == 1 else f"z{i + 1}^{e}") for i, e in enumerate(eta) if e)
            body = f"({num})" if den.is_trivial() else f"({num})/({den})"
            chunks.append(f"{z}*{body}" if z else body)
        return " + ".join(chunks)

    def __repr__(self) -> str:
        return f"RationalGraded({str(self)!r})"
