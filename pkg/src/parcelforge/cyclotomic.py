"""Exact arithmetic in the cyclotomic ring Z[w], w a primitive sigma-th root of unity.

Elements are stored in the power basis 1, w, ..., w^(phi(sigma)-1) of
Z[x]/Phi_sigma(x), reduced eagerly after every multiplication, so equality is a
plain comparison of coefficient tuples.  Coefficients may also be Fractions;
that is only needed when a formula is evaluated literally with denominators
(``CycElem.inverse``), never in the division-free verification path.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Tuple

from .polynomials import UniPoly


@lru_cache(maxsize=None)
def cyclotomic_poly(sigma: int) -> UniPoly:
    """Phi_sigma(x), by exact division of x^sigma - 1 by the smaller Phi_d."""
    if sigma < 1:
        raise ValueError("sigma must be >= 1")
    num = UniPoly({sigma: 1, 0: -1})
    for d in range(1, sigma):
        if sigma % d == 0:
            num, rem = num.divmod_monic(cyclotomic_poly(d))
            if not rem.is_zero():
                raise ArithmeticError(f"Phi_{d} does not divide x^{sigma}-1")
    return num


@lru_cache(maxsize=None)
def _modulus(sigma: int) -> Tuple[int, ...]:
    # coefficients of Phi_sigma, low degree first
    return tuple(cyclotomic_poly(sigma).coeff_list())


def phi(sigma: int) -> int:
    return len(_modulus(sigma)) - 1


def _reduce(coeffs: list, sigma: int) -> Tuple:
    mod = _modulus(sigma)
    d = len(mod) - 1
    c = list(coeffs)
    for top in range(len(c) - 1, d - 1, -1):
        lead = c[top]
        if lead == 0:
            continue
        shift = top - d
        for i in range(d):
            c[shift + i] -= lead * mod[i]
        c[top] = 0
    c = c[:d] + [0] * (d - len(c))
    return tuple(_normalize(x) for x in c)


def _normalize(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


@lru_cache(maxsize=None)
def _omega_powers(sigma: int) -> Tuple[Tuple, ...]:
    d = phi(sigma)
    out = []
    for k in range(sigma):
        vec = [0] * (k + 1)
        vec[k] = 1
        out.append(_reduce(vec, sigma))
    if d == 0:  # pragma: no cover - phi(sigma) >= 1 always
        raise ArithmeticError
    return tuple(out)


class CycElem:
    """An element of Z[w_sigma] (or Q(w_sigma) when Fractions appear)."""

    __slots__ = ("sigma", "coeffs")

    def __init__(self, sigma: int, coeffs: Sequence):
        if sigma < 1:
            raise ValueError("sigma must be >= 1")
        self.sigma = sigma
        if len(coeffs) != phi(sigma):
            self.coeffs = _reduce(list(coeffs), sigma)
        else:
            self.coeffs = tuple(_normalize(x) for x in coeffs)

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_int(cls, sigma: int, n) -> "CycElem":
        return cls(sigma, [n] + [0] * (phi(sigma) - 1))

    @classmethod
    def zero(cls, sigma: int) -> "CycElem":
        return cls.from_int(sigma, 0)

    @classmethod
    def one(cls, sigma: int) -> "CycElem":
        return cls.from_int(sigma, 1)

    @classmethod
    def omega(cls, sigma: int, k: int = 1) -> "CycElem":
        """w^k for the canonical generator w."""
        return cls(sigma, _omega_powers(sigma)[k % sigma])

    @classmethod
    def from_exponent_counts(cls, sigma: int, counts) -> "CycElem":
        """Sum of c * w^k over (k, c) pairs (a dict or iterable of pairs)."""
        items = counts.items() if hasattr(counts, "items") else counts
        acc = [0] * phi(sigma)
        powers = _omega_powers(sigma)
        for k, c in items:
            if c == 0:
                continue
            vec = powers[k % sigma]
            for i, v in enumerate(vec):
                if v:
                    acc[i] += c * v
        return cls(sigma, acc)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "CycElem":
        if isinstance(other, CycElem):
            if other.sigma != self.sigma:
                raise ValueError(f"sigma mismatch: {self.sigma} vs {other.sigma}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycElem.from_int(self.sigma, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycElem(self.sigma, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycElem(self.sigma, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycElem(self.sigma, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycElem(self.sigma, [a * other for a in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
        return CycElem(self.sigma, _reduce(prod, self.sigma))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycElem.one(self.sigma)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycElem(self.sigma, [Fraction(a) / other for a in self.coeffs])
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycElem.from_int(self.sigma, other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycElem.from_int(self.sigma, other)
        if not isinstance(other, CycElem):
            return NotImplemented
        return self.sigma == other.sigma and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.sigma, self.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(str(c) if i == 0 else f"{c}*w^{i}")
        body = " + ".join(terms) if terms else "0"
        return f"CycElem[{self.sigma}]({body})"

    # -- structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_rational(self):
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def galois(self, rho: int) -> "CycElem":
        """Image under the automorphism w -> w^rho (rho coprime to sigma)."""
        if gcd(rho, self.sigma) != 1:
            raise ValueError(f"rho={rho} is not coprime to sigma={self.sigma}")
        return CycElem.from_exponent_counts(
            self.sigma, ((i * rho, c) for i, c in enumerate(self.coeffs))
        )

    def conj(self) -> "CycElem":
        """Complex conjugation, w -> w^(sigma-1)."""
        return self.galois(self.sigma - 1)

    def inverse(self) -> "CycElem":
        """Inverse in Q(w) via the norm: 1/a = (product of other conjugates) / N(a)."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(w)")
        others = CycElem.one(self.sigma)
        for rho in coprime_residues(self.sigma):
            if rho != 1:
                others = others * self.galois(rho)
        norm = (self * others).to_rational()
        return CycElem(self.sigma, [Fraction(c) / norm for c in others.coeffs])

    def embed_complex(self, rho: int = 1) -> complex:
        """Numeric value at w = exp(2 pi i rho / sigma).  Diagnostics only."""
        z = cmath.exp(2j * cmath.pi * rho / self.sigma)
        return complex(sum(float(c) * z ** i for i, c in enumerate(self.coeffs)))

    def to_json(self) -> dict:
        return {
            "sigma": self.sigma,
            "coeffs": [c if isinstance(c, int) else str(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CycElem":
        return cls(int(data["sigma"]), [Fraction(c) for c in data["coeffs"]])


def coprime_residues(sigma: int) -> list:
    return [r for r in range(1, sigma + 1) if gcd(r, sigma) == 1] if sigma > 1 else [1]


def galois_conjugates(a: CycElem) -> list:
    return [a.galois(r) for r in coprime_residues(a.sigma)]


def cyc_sum(sigma: int, values: Iterable) -> CycElem:
    total = CycElem.zero(sigma)
    for v in values:
        total = total + v
    return total
