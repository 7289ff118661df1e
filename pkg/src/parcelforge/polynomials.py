"""Sparse exact integer polynomials.

``LaurentPoly`` is a univariate polynomial in X and X^-1, ``UniPoly`` the
ordinary (nonnegative exponent) special case, ``BiPoly`` a polynomial in the
two variables (lambda, x) used for rank generating polynomials.  Coefficients
are Python ints, so there is no overflow contract to worry about.
"""

from __future__ import annotations

from math import comb
from typing import Any, Dict, Iterable, Mapping, Tuple


def _clean(terms: Mapping) -> dict:
    return {k: v for k, v in terms.items() if v != 0}


class LaurentPoly:
    """Univariate Laurent polynomial with integer coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, int] | None = None):
        self.terms: Dict[int, int] = _clean(dict(terms or {}))

    # construction helpers
    @classmethod
    def const(cls, c: int):
        return cls({0: c})

    @classmethod
    def monomial(cls, exp: int, c: int = 1):
        return cls({exp: c})

    @classmethod
    def X(cls):
        return cls({1: 1})

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return type(self).const(other)
        return NotImplemented

    def _result_type(self, other):
        # UniPoly op UniPoly stays UniPoly; anything involving a Laurent is Laurent
        if type(self) is type(other):
            return type(self)
        return LaurentPoly

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return self._result_type(other)(out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: Dict[int, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return self._result_type(other)(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) == 1:
                (e, c), = self.terms.items()
                if c in (1, -1):
                    return LaurentPoly({e * k: c ** (-k)})
            raise ValueError("only unit monomials have Laurent inverses")
        result = type(self).const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            parts.append(f"{c}*X^{e}" if e else str(c))
        return " + ".join(parts)

    def coeff(self, e: int) -> int:
        return self.terms.get(e, 0)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max(self.terms) if self.terms else -1

    @property
    def low_degree(self) -> int:
        return min(self.terms) if self.terms else 0

    def evaluate(self, value: Any):
        """Evaluate at ``value`` (anything supporting +, * and integer powers)."""
        total: Any = 0
        for e, c in self.terms.items():
            total = total + c * (value ** e)
        return total

    def coefficient_sum(self) -> int:
        return sum(self.terms.values())

    def reversed(self):
        """p(X^-1)."""
        return LaurentPoly({-e: c for e, c in self.terms.items()})

    def to_json(self) -> dict:
        return {"terms": [{"x": e, "c": str(self.terms[e])} for e in sorted(self.terms)]}

    @classmethod
    def from_json(cls, data: dict):
        return cls({int(t["x"]): int(t["c"]) for t in data["terms"]})


class UniPoly(LaurentPoly):
    """Ordinary polynomial: all exponents nonnegative."""

    __slots__ = ()

    def __init__(self, terms: Mapping[int, int] | None = None):
        super().__init__(terms)
        if any(e < 0 for e in self.terms):
            raise ValueError("UniPoly exponents must be nonnegative")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int]):
        return cls({i: c for i, c in enumerate(coeffs)})

    def coeff_list(self) -> list:
        return [self.terms.get(i, 0) for i in range(self.degree + 1)]

    def divmod_monic(self, divisor: "UniPoly"):
        """Quotient and remainder by a monic divisor, exact over the integers."""
        if divisor.is_zero() or divisor.terms[divisor.degree] != 1:
            raise ValueError("divisor must be monic")
        rem = dict(self.terms)
        quot: Dict[int, int] = {}
        d = divisor.degree
        while rem and max(rem) >= d:
            top = max(rem)
            c = rem.pop(top)
            if c == 0:
                continue
            shift = top - d
            quot[shift] = c
            for e, dc in divisor.terms.items():
                if e == d:
                    continue
                rem[e + shift] = rem.get(e + shift, 0) - c * dc
            rem = {e: v for e, v in rem.items() if v != 0}
        return UniPoly(quot), UniPoly(rem)

    def shift_var(self, a: int) -> "UniPoly":
        """p(x + a)."""
        out: Dict[int, int] = {}
        for e, c in self.terms.items():
            for k in range(e + 1):
                out[k] = out.get(k, 0) + c * comb(e, k) * a ** (e - k)
        return UniPoly(out)


class BiPoly:
    """Polynomial in (lambda, x); keys are (lambda-exponent, x-exponent)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Tuple[int, int], int] | None = None):
        self.terms: Dict[Tuple[int, int], int] = _clean(dict(terms or {}))
        if any(i < 0 or j < 0 for i, j in self.terms):
            raise ValueError("BiPoly exponents must be nonnegative")

    @classmethod
    def const(cls, c: int):
        return cls({(0, 0): c})

    def __add__(self, other):
        if isinstance(other, int):
            other = BiPoly.const(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return BiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            other = BiPoly.const(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        out: Dict[Tuple[int, int], int] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return BiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers of a BiPoly are not polynomials")
        result = BiPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, reverse=True):
            parts.append(f"{self.terms[(i, j)]}*l^{i}*x^{j}")
        return " + ".join(parts)

    def coeff(self, i: int, j: int) -> int:
        return self.terms.get((i, j), 0)

    def swap(self) -> "BiPoly":
        """Exchange the roles of the two variables."""
        return BiPoly({(j, i): c for (i, j), c in self.terms.items()})

    def evaluate(self, lam: Any, x: Any):
        total: Any = 0
        lam_pows: Dict[int, Any] = {}
        x_pows: Dict[int, Any] = {}
        for (i, j), c in self.terms.items():
            if i not in lam_pows:
                lam_pows[i] = lam ** i
            if j not in x_pows:
                x_pows[j] = x ** j
            total = total + c * lam_pows[i] * x_pows[j]
        return total

    def shift(self, a: int, b: int) -> "BiPoly":
        """The polynomial P(lambda + a, x + b), expanded exactly."""
        out: Dict[Tuple[int, int], int] = {}
        for (i, j), c in self.terms.items():
            for s in range(i + 1):
                ci = c * comb(i, s) * a ** (i - s)
                if ci == 0:
                    continue
                for t in range(j + 1):
                    ct = ci * comb(j, t) * b ** (j - t)
                    if ct:
                        out[(s, t)] = out.get((s, t), 0) + ct
        return BiPoly(out)

    def to_json(self) -> dict:
        return {
            "terms": [
                {"l": i, "x": j, "c": str(self.terms[(i, j)])}
                for (i, j) in sorted(self.terms)
            ]
        }

    @classmethod
    def from_json(cls, data: dict):
        return cls({(int(t["l"]), int(t["x"])): int(t["c"]) for t in data["terms"]})
