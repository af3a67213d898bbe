"""Truncated multivariate power series over exact rationals.

Exponents live in (1/M) * Z^r_{>=0} for a fixed per-ring modulus M; a term is
kept when its weighted degree (sum of per-variable weight times exponent) is
at most the ring's truncation order T.  Internally every exponent vector is
stored as a tuple of integers scaled by M, so all exponent arithmetic is
integral.  Coefficients are ``fractions.Fraction``; no floats anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, Sequence


class RingMismatchError(ValueError):
    pass


class NonzeroConstantTermError(ValueError):
    pass


class DegreeDecreasingSubstitutionError(ValueError):
    pass


class NoConvergenceError(RuntimeError):
    """Fixed-point iteration exceeded its contraction bound."""


class SeriesRing:
    """Ambient ring data: variable count, modulus, weights, truncation."""

    def __init__(self, nvars: int, modulus: int, truncation, weights=None, names=None):
        if modulus < 1:
            raise ValueError("modulus must be a positive integer")
        self.nvars = nvars
        self.modulus = modulus
        self.truncation = Fraction(truncation)
        if self.truncation < 0:
            raise ValueError("truncation must be >= 0")
        if weights is None:
            weights = (Fraction(1),) * nvars
        self.weights = tuple(Fraction(w) for w in weights)
        if len(self.weights) != nvars or any(w <= 0 for w in self.weights):
            raise ValueError("need one strictly positive weight per variable")
        self.names = tuple(names) if names is not None else tuple(
            f"x{i}" for i in range(nvars)
        )
        if len(self.names) != nvars:
            raise ValueError("need one name per variable")
        wden = lcm(*(w.denominator for w in self.weights)) if nvars else 1
        self._wnum = tuple(int(w * wden) for w in self.weights)
        # scaled weighted degree of a stored key k is sum(wnum * k); keep the
        # term iff that is <= T * M * wden
        bound = self.truncation * modulus * wden
        self._bound = bound.numerator // bound.denominator

    def __eq__(self, other):
        return (
            isinstance(other, SeriesRing)
            and self.nvars == other.nvars
            and self.modulus == other.modulus
            and self.truncation == other.truncation
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.nvars, self.modulus, self.truncation, self.weights))

    def __repr__(self):
        return (
            f"SeriesRing({', '.join(self.names)}; M={self.modulus}, "
            f"T={self.truncation})"
        )

    def scaled_degree(self, key) -> int:
        return sum(w * k for w, k in zip(self._wnum, key))

    def in_bounds(self, key) -> bool:
        return self.scaled_degree(key) <= self._bound

    def scale_exponents(self, exponents) -> tuple[int, ...]:
        """Convert public exponents (rationals) to the internal integer key."""
        key = []
        for e in exponents:
            v = Fraction(e) * self.modulus
            if v.denominator != 1:
                raise ValueError(
                    f"exponent {e} not in (1/{self.modulus})Z"
                )
            if v < 0:
                raise ValueError(f"negative exponent {e}")
            key.append(int(v))
        if len(key) != self.nvars:
            raise ValueError("wrong number of exponents")
        return tuple(key)

    def zero(self) -> "TruncatedSeries":
        return TruncatedSeries(self, {})

    def one(self) -> "TruncatedSeries":
        return self.scalar(1)

    def scalar(self, c) -> "TruncatedSeries":
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return TruncatedSeries(self, {(0,) * self.nvars: c})

    def monomial(self, exponents, coeff=1) -> "TruncatedSeries":
        c = Fraction(coeff)
        key = self.scale_exponents(exponents)
        if c == 0 or not self.in_bounds(key):
            return self.zero()
        return TruncatedSeries(self, {key: c})

    def variable(self, i: int) -> "TruncatedSeries":
        return self.monomial(tuple(1 if j == i else 0 for j in range(self.nvars)))

    def from_scaled_terms(self, terms: dict) -> "TruncatedSeries":
        clean = {
            k: v for k, v in terms.items() if v != 0 and self.in_bounds(k)
        }
        return TruncatedSeries(self, clean)


class TruncatedSeries:
    """Immutable truncated series; build through SeriesRing constructors."""

    __slots__ = ("ring", "_terms", "_sorted")

    def __init__(self, ring: SeriesRing, terms: dict):
        self.ring = ring
        self._terms = terms
        self._sorted = None

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.ring.nvars, Fraction(0))

    def coefficient(self, exponents) -> Fraction:
        key = self.ring.scale_exponents(exponents)
        return self._terms.get(key, Fraction(0))

    def terms(self):
        """Sorted (exponents, coefficient) pairs; exponents as Fractions."""
        m = self.ring.modulus
        for key in sorted(self._terms, key=lambda k: (self.ring.scaled_degree(k), k)):
            yield tuple(Fraction(x, m) for x in key), self._terms[key]

    def scaled_items_sorted(self):
        if self._sorted is None:
            deg = self.ring.scaled_degree
            self._sorted = sorted(
                ((deg(k), k, v) for k, v in self._terms.items()),
                key=lambda t: (t[0], t[1]),
            )
        return self._sorted

    def min_scaled_degree(self):
        return self.scaled_items_sorted()[0][0] if self._terms else None

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSeries)
            and self.ring == other.ring
            and self._terms == other._terms
        )

    def __repr__(self):
        parts = []
        for exps, c in self.terms():
            mono = "*".join(
                f"{n}^{e}" for n, e in zip(self.ring.names, exps) if e != 0
            )
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
            if len(parts) > 8:
                parts.append("...")
                break
        return "(" + (" + ".join(parts) if parts else "0") + ")"

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatchError("series live in different rings")

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self + self.ring.scalar(other)
        self._check(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            w = out.get(k, Fraction(0)) + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return TruncatedSeries(self.ring, out)

    def __neg__(self):
        return TruncatedSeries(self.ring, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self - self.ring.scalar(other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = Fraction(other)
            if c == 0:
                return self.ring.zero()
            return TruncatedSeries(
                self.ring, {k: v * c for k, v in self._terms.items()}
            )
        self._check(other)
        bound = self.ring._bound
        fa, fb = self.scaled_items_sorted(), other.scaled_items_sorted()
        if not fa or not fb:
            return self.ring.zero()
        if len(fa) > len(fb):
            fa, fb = fb, fa
        out: dict = {}
        b_min = fb[0][0]
        for wa, ka, ca in fa:
            if wa + b_min > bound:
                break
            for wb, kb, cb in fb:
                if wa + wb > bound:
                    break
                key = tuple(x + y for x, y in zip(ka, kb))
                w = out.get(key, Fraction(0)) + ca * cb
                if w:
                    out[key] = w
                else:
                    del out[key]
        return TruncatedSeries(self.ring, out)

    __rmul__ = __mul__
    __radd__ = __add__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined here")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def shift(self, scaled_key) -> "TruncatedSeries":
        """Multiply by the monomial with the given internal scaled exponent."""
        out = {}
        for k, v in self._terms.items():
            nk = tuple(x + y for x, y in zip(k, scaled_key))
            if self.ring.in_bounds(nk):
                out[nk] = v
        return TruncatedSeries(self.ring, out)

    def drop_variables(self, keep: Callable[[int], bool]) -> dict:
        """Terms with all dropped-variable exponents zero; internal keys."""
        out = {}
        for k, v in self._terms.items():
            if all(x == 0 for i, x in enumerate(k) if not keep(i)):
                out[k] = v
        return out


def exp_series(f: TruncatedSeries) -> TruncatedSeries:
    """exp(f) = sum f^k / k!, requires zero constant term."""
    if f.constant_term != 0:
        raise NonzeroConstantTermError("exp needs a zero constant term")
    ring = f.ring
    if f.is_zero():
        return ring.one()
    delta = f.min_scaled_degree()
    kmax = ring._bound // delta
    acc = ring.one()
    for k in range(kmax, 0, -1):
        acc = ring.one() + (f * acc) * Fraction(1, k)
    return acc


def log1p(f: TruncatedSeries) -> TruncatedSeries:
    """log(1 + f) = sum_{k>=1} (-1)^{k+1} f^k / k, zero constant term required."""
    if f.constant_term != 0:
        raise NonzeroConstantTermError("log1p needs a zero constant term")
    ring = f.ring
    if f.is_zero():
        return ring.zero()
    delta = f.min_scaled_degree()
    kmax = ring._bound // delta
    if kmax == 0:
        return ring.zero()
    acc = ring.scalar(Fraction((-1) ** (kmax + 1), kmax))
    for k in range(kmax - 1, 0, -1):
        acc = ring.scalar(Fraction((-1) ** (k + 1), k)) + f * acc
    return f * acc


def unit_power(u: TruncatedSeries, e) -> TruncatedSeries:
    """u^e for a unit series (constant term 1) and rational exponent e."""
    if u.constant_term != 1:
        raise ValueError("unit_power needs constant term exactly 1")
    e = Fraction(e)
    if e == 0:
        return u.ring.one()
    if e.denominator == 1 and e > 0:
        return u ** int(e)
    return exp_series(log1p(u - 1) * e)


@dataclass(frozen=True)
class SubstitutionImage:
    """Image of one variable: scalar * monomial * unit series.

    The monomial is given by target-ring exponents; the unit series must have
    constant term 1 and live in the target ring.
    """

    scalar: Fraction
    monomial: tuple
    unit: TruncatedSeries

    @staticmethod
    def of(unit: TruncatedSeries, monomial=None, scalar=1) -> "SubstitutionImage":
        mono = tuple(
            Fraction(x) for x in (monomial if monomial is not None else ())
        ) or (Fraction(0),) * unit.ring.nvars
        return SubstitutionImage(Fraction(scalar), mono, unit)


def substitute(
    f: TruncatedSeries,
    images: Sequence[SubstitutionImage],
    target: SeriesRing | None = None,
) -> TruncatedSeries:
    """Substitute one image per variable of f and re-expand in the target ring.

    Substitution must be filtration-non-decreasing: the weighted degree of
    each image has to be at least the weight of the variable it replaces,
    otherwise the truncated result would be wrong and the call raises.
    """
    src = f.ring
    if len(images) != src.nvars:
        raise ValueError("need exactly one image per variable")
    if target is None:
        if not images:
            raise ValueError("target ring required when f has no variables")
        target = images[0].unit.ring
    mono_keys = []
    for a, img in enumerate(images):
        if img.unit.ring != target:
            raise RingMismatchError("image units must live in the target ring")
        if img.unit.constant_term != 1:
            raise ValueError("image unit series must have constant term 1")
        if img.scalar == 0:
            raise ValueError("image scalar must be nonzero")
        key = target.scale_exponents(img.monomial)
        mono_keys.append(key)
        # weighted degree of the image (the unit part only adds to it)
        img_w = sum(
            w * Fraction(k, target.modulus) for w, k in zip(target.weights, key)
        )
        if img_w < src.weights[a]:
            raise DegreeDecreasingSubstitutionError(
                f"image of variable {src.names[a]} has weighted degree "
                f"{img_w} < its weight {src.weights[a]}"
            )
    m = src.modulus
    roots = [unit_power(img.unit, Fraction(1, m)) for img in images]
    powers: list[list[TruncatedSeries]] = [[target.one()] for _ in images]

    def root_power(a: int, k: int) -> TruncatedSeries:
        cache = powers[a]
        while len(cache) <= k:
            cache.append(cache[-1] * roots[a])
        return cache[k]

    out = target.zero()
    for key, coeff in f._terms.items():
        c = Fraction(coeff)
        shift = [0] * target.nvars
        for a, ka in enumerate(key):
            if ka == 0:
                continue
            if images[a].scalar != 1:
                if ka % m != 0:
                    raise ValueError(
                        "fractional power of a non-unit scalar prefactor"
                    )
                c *= images[a].scalar ** (ka // m)
            for cidx, mk in enumerate(mono_keys[a]):
                v = ka * mk
                if v % m != 0:
                    raise ValueError(
                        "substituted exponent leaves the target lattice"
                    )
                shift[cidx] += v // m
        if not target.in_bounds(tuple(shift)):
            continue
        term = target.scalar(c)
        for a, ka in enumerate(key):
            if ka:
                term = term * root_power(a, ka)
        term = term.shift(tuple(shift))
        out = out + term
    return out


def solve_fixed_point(
    initial: Sequence[TruncatedSeries],
    step: Callable[[list[TruncatedSeries]], Iterable[TruncatedSeries]],
    gain,
) -> list[TruncatedSeries]:
    """Iterate a filtration-contracting self-map to its exact fixed point.

    The step map must be a contraction of gain delta: inputs agreeing up to
    weighted order w give outputs agreeing up to w + delta.  The fixed point
    is then reached after at most ceil(T / delta) + 1 iterations; exceeding
    that raises NoConvergenceError.
    """
    if not initial:
        raise ValueError("need at least one series")
    gain = Fraction(gain)
    if gain <= 0:
        raise ValueError("gain must be positive")
    t = initial[0].ring.truncation
    limit = -int(-t / gain) + 1  # ceil(T/gain) + 1
    current = list(initial)
    for _ in range(limit + 1):
        nxt = list(step(current))
        if nxt == current:
            return current
        current = nxt
    raise NoConvergenceError(
        "fixed point not reached within the contraction bound; "
        "the step map is not a contraction"
    )
