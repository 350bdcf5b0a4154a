"""Complex-valued kernels: Euler sections, superpotential, Gamma functions.

Complex powers and logarithms use the principal branch; inputs on a branch
cut or at a pole are rejected.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import mpmath

from .groups import GroupData

DEFAULT_IDENTITY_TOL = 1e-10
DEFAULT_FD_TOL = 1e-6


class SingularInput(ValueError):
    pass


@dataclass(frozen=True)
class SectionPoint:
    value: tuple
    point: tuple
    mass: complex


def _dot(nu: Sequence[int], xi: Sequence[complex]) -> complex:
    if len(nu) != len(xi):
        raise ValueError(f"point has length {len(xi)}, expected {len(nu)}")
    return sum(a * b for a, b in zip(nu, xi))


def epsilon_section(G: GroupData, xi: Sequence[complex], mu: complex) -> SectionPoint:
    """Component c is ``prod_nu (mu + <nu|xi>)^nu_c``."""
    xi = tuple(complex(x) for x in xi)
    mu = complex(mu)
    out = [1 + 0j] * G.rank
    for nu in G.weights:
        w = mu + _dot(nu, xi)
        if w == 0:
            raise SingularInput(f"factor mu + <{nu}|xi> vanishes")
        logw = cmath.log(w)
        for c, e in enumerate(nu):
            if e:
                out[c] *= cmath.exp(e * logw)
    return SectionPoint(tuple(out), xi, mu)


def lambda_section(G: GroupData, x: Sequence[complex], m: complex) -> SectionPoint:
    """Component c is ``prod_nu (1 - (m x^nu)^-1)^nu_c``."""
    x = tuple(complex(v) for v in x)
    m = complex(m)
    if m == 0 or any(v == 0 for v in x):
        raise SingularInput("torus coordinates and mass must be nonzero")
    if len(x) != G.rank:
        raise ValueError(f"point has length {len(x)}, expected {G.rank}")
    out = [1 + 0j] * G.rank
    for nu in G.weights:
        char = m
        for v, e in zip(x, nu):
            char *= v**e
        w = 1 - 1 / char
        if w == 0:
            raise SingularInput(f"factor 1 - (m x^{nu})^-1 vanishes")
        for c, e in enumerate(nu):
            if e:
                out[c] *= w**e
    return SectionPoint(tuple(out), x, m)


def _check_log_arg(w: complex, label: str) -> None:
    if w == 0 or (w.imag == 0 and w.real < 0):
        raise SingularInput(f"{label} = {w} lies on the branch cut of log")


def superpotential_legendre(G: GroupData, xi: Sequence[complex], mu: complex) -> complex:
    """``sum_nu w (log w - 1)`` with ``w = mu + <nu|xi>``."""
    xi = tuple(complex(x) for x in xi)
    total = 0j
    for nu in G.weights:
        w = complex(mu) + _dot(nu, xi)
        _check_log_arg(w, f"mu + <{nu}|xi>")
        total += w * (cmath.log(w) - 1)
    return total


def superpotential_gradient(G: GroupData, xi: Sequence[complex], mu: complex, step: float = 1e-5) -> tuple:
    """Central finite-difference gradient of :func:`superpotential_legendre`."""
    xi = [complex(x) for x in xi]
    grad = []
    for c in range(len(xi)):
        up = list(xi)
        dn = list(xi)
        up[c] += step
        dn[c] -= step
        grad.append((superpotential_legendre(G, up, mu) - superpotential_legendre(G, dn, mu)) / (2 * step))
    return tuple(grad)


def log_gamma_h(w: complex, h: complex) -> complex:
    """Principal ``log Gamma(w; h) = (w/h - 1) log h + log Gamma(w/h)``."""
    w, h = complex(w), complex(h)
    if h == 0:
        raise SingularInput("h must be nonzero")
    s = w / h
    if s.imag == 0 and s.real <= 0 and s.real == int(s.real):
        raise SingularInput(f"w/h = {s.real:g} is a pole of Gamma")
    with mpmath.workdps(30):
        val = (mpmath.mpc(s) - 1) * mpmath.log(mpmath.mpc(h)) + mpmath.loggamma(mpmath.mpc(s))
    return complex(val)


def gamma_h(w: complex, h: complex) -> complex:
    return cmath.exp(log_gamma_h(w, h))


def stirling_remainder(t: complex, h: complex) -> complex:
    """``log Gamma(t; h)`` minus its leading Stirling approximation."""
    t, h = complex(t), complex(h)
    approx = (t / h) * (cmath.log(t) - 1) - 0.5 * cmath.log(h) + 0.5 * cmath.log(2 * cmath.pi / t)
    return log_gamma_h(t, h) - approx


class QGamma(NamedTuple):
    value: complex
    error: float


def q_pochhammer(x: complex, q: complex, n: int) -> complex:
    """Partial product ``prod_{k<n} (1 - x q^k)``."""
    out = 1 + 0j
    qk = 1 + 0j
    for _ in range(n):
        out *= 1 - x * qk
        qk *= q
    return out


def gamma_q(t: complex, q: complex, truncation: int = 200) -> QGamma:
    """Jackson-type ``(q;q)_inf / (t^-1;q)_inf`` truncated to ``truncation`` factors.

    The error estimate is the size of the first omitted factor's deviation from 1.
    """
    t, q = complex(t), complex(q)
    if abs(q) >= 1:
        raise ValueError("need |q| < 1")
    if truncation < 1:
        raise ValueError("truncation must be positive")
    if t == 0:
        raise SingularInput("t must be nonzero")
    tinv = 1 / t
    qk = 1 + 0j
    for _ in range(truncation):
        if abs(1 - tinv * qk) < 1e-300:
            raise SingularInput("t^-1 q^n = 1: pole of Gamma_0")
        qk *= q
    num = q_pochhammer(q, q, truncation)
    den = q_pochhammer(tinv, q, truncation)
    qn = abs(q) ** truncation
    error = abs(num / den) * (abs(q) * qn + abs(tinv) * qn)
    return QGamma(num / den, error)
