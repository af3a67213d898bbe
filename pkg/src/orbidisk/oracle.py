"""Closed-form reference values for the quotient-plane example.

The local model C^2/Z_3 has a closed-form disk potential built from three
root-of-unity deformations kappa_k; the compact quotient plane inherits it
chart by chart.  This module expands those closed forms in exact cyclotomic
arithmetic (Q[zeta] with zeta^2 = zeta - 1, a primitive sixth root of unity)
and recovers the rational invariant table from them.  It is deliberately
self-contained: the only thing it shares with the mirror pipeline is the
fractions module, so it can serve as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial


class NonRationalCoefficientError(ArithmeticError):
    """A coefficient kept a cyclotomic part that should have cancelled."""


@dataclass(frozen=True)
class Cyclotomic6:
    """a + b*zeta with zeta^2 = zeta - 1 (so zeta^3 = -1, zeta^6 = 1)."""

    a: Fraction
    b: Fraction

    @staticmethod
    def of(a, b=0) -> "Cyclotomic6":
        return Cyclotomic6(Fraction(a), Fraction(b))

    def __add__(self, other):
        return Cyclotomic6(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return Cyclotomic6(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return Cyclotomic6(-self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, Cyclotomic6):
            # (a + b z)(c + d z) = ac + (ad + bc) z + bd (z - 1)
            return Cyclotomic6(
                self.a * other.a - self.b * other.b,
                self.a * other.b + self.b * other.a + self.b * other.b,
            )
        return Cyclotomic6(self.a * Fraction(other), self.b * Fraction(other))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def rational(self) -> Fraction:
        if self.b != 0:
            raise NonRationalCoefficientError(f"zeta part {self.b} survived")
        return self.a


ZETA = Cyclotomic6.of(0, 1)


def zeta_power(k: int) -> Cyclotomic6:
    out = Cyclotomic6.of(1)
    for _ in range(k % 6):
        out = out * ZETA
    return out


class CycloSeries:
    """Dense series in two variables with Cyclotomic6 coefficients."""

    def __init__(self, order: int, terms=None):
        self.order = order
        self.terms: dict[tuple[int, int], Cyclotomic6] = dict(terms or {})

    @staticmethod
    def constant(order: int, c: Cyclotomic6) -> "CycloSeries":
        s = CycloSeries(order)
        if not c.is_zero():
            s.terms[(0, 0)] = c
        return s

    def coefficient(self, a: int, b: int) -> Cyclotomic6:
        return self.terms.get((a, b), Cyclotomic6.of(0))

    def __add__(self, other):
        out = CycloSeries(self.order, self.terms)
        for k, v in other.terms.items():
            w = out.terms.get(k, Cyclotomic6.of(0)) + v
            if w.is_zero():
                out.terms.pop(k, None)
            else:
                out.terms[k] = w
        return out

    def __neg__(self):
        return CycloSeries(self.order, {k: -v for k, v in self.terms.items()})

    def __mul__(self, other):
        out = CycloSeries(self.order)
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                if a1 + a2 + b1 + b2 > self.order:
                    continue
                k = (a1 + a2, b1 + b2)
                w = out.terms.get(k, Cyclotomic6.of(0)) + c1 * c2
                if w.is_zero():
                    out.terms.pop(k, None)
                else:
                    out.terms[k] = w
        return out


def _exp_linear(order: int, c1: Cyclotomic6, c2: Cyclotomic6) -> CycloSeries:
    """exp(c1 t1 + c2 t2) truncated at total order."""
    out = CycloSeries(order)
    pow1 = [Cyclotomic6.of(1)]
    pow2 = [Cyclotomic6.of(1)]
    for _ in range(order):
        pow1.append(pow1[-1] * c1)
        pow2.append(pow2[-1] * c2)
    for a in range(order + 1):
        for b in range(order + 1 - a):
            coeff = pow1[a] * pow2[b] * Fraction(1, factorial(a) * factorial(b))
            if not coeff.is_zero():
                out.terms[(a, b)] = coeff
    return out


def kappa(k: int, order: int) -> CycloSeries:
    """The k-th root deformation zeta^(2k+1) exp(zeta^(2k+1) t1 / 3) exp(zeta^(4k+2) t2 / 3)."""
    if k not in (0, 1, 2):
        raise ValueError("k must be 0, 1 or 2")
    pref = zeta_power(2 * k + 1)
    c1 = zeta_power(2 * k + 1) * Fraction(1, 3)
    c2 = zeta_power(2 * (2 * k + 1)) * Fraction(1, 3)
    e = _exp_linear(order, c1, c2)
    return CycloSeries(order, {key: pref * v for key, v in e.terms.items()})


def elementary_symmetric(order: int) -> tuple[CycloSeries, CycloSeries, CycloSeries]:
    """(sigma1, sigma2, sigma3) of kappa_0, kappa_1, kappa_2."""
    k0, k1, k2 = kappa(0, order), kappa(1, order), kappa(2, order)
    s1 = k0 + k1 + k2
    s2 = k0 * k1 + k0 * k2 + k1 * k2
    s3 = k0 * k1 * k2
    return s1, s2, s3


def oracle_generating_functions(order: int):
    """Rational generating functions of the two edge sectors.

    Expanding z^-1 w^-1 (z - kappa_0)(z - kappa_1)(z - kappa_2) and reading
    the w^-1 and z w^-1 coefficients gives sigma2 and -sigma1; both must be
    rational term by term (the cyclotomic parts cancel by the Galois
    symmetry), otherwise NonRationalCoefficientError is raised.
    """
    s1, s2, s3 = elementary_symmetric(order)
    for key, v in s3.terms.items():
        expect = Fraction(-1) if key == (0, 0) else Fraction(0)
        if v.a != expect or v.b != 0:
            raise NonRationalCoefficientError("product of the roots is not -1")
    g112 = {k: v.rational() for k, v in s2.terms.items() if not v.is_zero()}
    g122 = {k: (-v).rational() for k, v in s1.terms.items() if not v.is_zero()}
    return g112, g122


def oracle_table(amax: int, bmax: int) -> dict[tuple[int, int], Fraction]:
    """Invariant table n_(a,b): coefficients of t1^a t2^b in the 112 sector."""
    order = amax + bmax
    g112, _ = oracle_generating_functions(order)
    return {
        (a, b): g112.get((a, b), Fraction(0))
        for a in range(amax + 1)
        for b in range(bmax + 1)
    }
