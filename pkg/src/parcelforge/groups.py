"""Finite abelian coefficient groups: Z_q, GF(p)^d, and m-fold products.

Every group is a product of cyclic components, and an element is stored as a
single integer code in mixed radix with the first component most significant.
Code order is therefore the lexicographic order on component tuples, which
makes flow lists and censuses deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np

from .ground import Instance, is_prime


class GroupError(ValueError):
    """Bad group syntax or a group/instance mismatch."""


@dataclass(frozen=True)
class GroupSpec:
    kind: str  # "cyclic", "gfp" or "product"
    q: int = 0  # cyclic order
    p: int = 0  # gfp characteristic
    d: int = 0  # gfp dimension
    base: Optional["GroupSpec"] = None
    m: int = 0  # product multiplicity

    @cached_property
    def components(self) -> Tuple[int, ...]:
        if self.kind == "cyclic":
            return (self.q,)
        if self.kind == "gfp":
            return (self.p,) * self.d
        return self.base.components * self.m

    @property
    def order(self) -> int:
        out = 1
        for c in self.components:
            out *= c
        return out

    @property
    def characteristic(self) -> Optional[int]:
        """The prime p when the group is an GF(p)-vector space (or a product of one)."""
        if self.kind == "gfp":
            return self.p
        if self.kind == "product":
            return self.base.characteristic
        return None

    @property
    def is_prime_field(self) -> bool:
        """True when the group is GF(p) itself (cyclic of prime order or gfp:p:1)."""
        if self.kind == "cyclic":
            return is_prime(self.q)
        return self.kind == "gfp" and self.d == 1

    @property
    def factor(self) -> "GroupSpec":
        """The group A of which this is A^m (itself when not a product)."""
        return self.base if self.kind == "product" else self

    @property
    def multiplicity(self) -> int:
        return self.m if self.kind == "product" else 1

    def __str__(self) -> str:
        if self.kind == "cyclic":
            return f"cyclic:{self.q}"
        if self.kind == "gfp":
            return f"gfp:{self.p}:{self.d}"
        return f"product:{self.base}:{self.m}"

    # -- element codes ----------------------------------------------------
    @cached_property
    def _weights(self) -> Tuple[int, ...]:
        w = []
        acc = 1
        for c in reversed(self.components):
            w.append(acc)
            acc *= c
        return tuple(reversed(w))

    @cached_property
    def digits(self) -> np.ndarray:
        """(order, ncomponents) table of component residues for each code."""
        codes = np.arange(self.order, dtype=np.int64)
        return np.stack(
            [(codes // w) % c for c, w in zip(self.components, self._weights)], axis=1
        ) if self.components else np.zeros((1, 0), dtype=np.int64)

    def encode(self, comps: Sequence[int]) -> int:
        return int(sum((x % c) * w for x, c, w in zip(comps, self.components, self._weights)))

    def decode(self, code: int) -> Tuple[int, ...]:
        return tuple(int(x) for x in self.digits[code])

    def encode_array(self, comps: np.ndarray) -> np.ndarray:
        """Inverse of ``digits`` along the last axis."""
        w = np.asarray(self._weights, dtype=np.int64)
        return (comps * w).sum(axis=-1)

    def add(self, a: int, b: int) -> int:
        return self.encode([x + y for x, y in zip(self.decode(a), self.decode(b))])

    def neg(self, a: int) -> int:
        return self.encode([-x for x in self.decode(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def scale(self, a: int, n: int) -> int:
        return self.encode([x * n for x in self.decode(a)])

    @cached_property
    def add_table(self) -> np.ndarray:
        d = self.digits
        mods = np.asarray(self.components, dtype=np.int64)
        s = (d[:, None, :] + d[None, :, :]) % mods
        return self.encode_array(s)

    @cached_property
    def neg_table(self) -> np.ndarray:
        mods = np.asarray(self.components, dtype=np.int64)
        return self.encode_array((-self.digits) % mods)

    def split(self, code: int) -> Tuple[int, ...]:
        """Coordinates (in the factor group) of an element of A^m."""
        fq = self.factor.order
        out = []
        for _ in range(self.multiplicity):
            out.append(code % fq)
            code //= fq
        return tuple(reversed(out))

    @cached_property
    def split_table(self) -> np.ndarray:
        """(order, m) array: factor-group coordinates of every code."""
        fq = self.factor.order
        m = self.multiplicity
        codes = np.arange(self.order, dtype=np.int64)
        return np.stack([(codes // fq ** (m - 1 - j)) % fq for j in range(m)], axis=1)

    def power(self, m: int) -> "GroupSpec":
        return product_group(self, m)


def cyclic(q: int) -> GroupSpec:
    if q < 1:
        raise GroupError(f"cyclic order must be >= 1, got {q}")
    return GroupSpec("cyclic", q=q)


def gfp(p: int, d: int = 1) -> GroupSpec:
    if not is_prime(p):
        raise GroupError(f"gfp: {p} is not prime")
    if d < 1:
        raise GroupError(f"gfp dimension must be >= 1, got {d}")
    return GroupSpec("gfp", p=p, d=d)


def product_group(base: GroupSpec, m: int) -> GroupSpec:
    if m < 1:
        raise GroupError(f"product multiplicity must be >= 1, got {m}")
    return GroupSpec("product", base=base, m=m)


def parse_group(text: str) -> GroupSpec:
    """Parse ``cyclic:q``, ``gfp:p:d`` or ``product:<base>:m``."""
    parts = text.strip().split(":")
    try:
        if parts[0] == "cyclic" and len(parts) == 2:
            return cyclic(int(parts[1]))
        if parts[0] == "gfp" and len(parts) in (2, 3):
            return gfp(int(parts[1]), int(parts[2]) if len(parts) == 3 else 1)
        if parts[0] == "product" and len(parts) >= 3:
            return product_group(parse_group(":".join(parts[1:-1])), int(parts[-1]))
    except ValueError as exc:
        if isinstance(exc, GroupError):
            raise
        raise GroupError(f"bad group {text!r}: {exc}") from exc
    raise GroupError(f"bad group {text!r}: expected cyclic:q, gfp:p:d or product:<base>:m")


def check_compatible(inst: Instance, group: GroupSpec) -> None:
    """Raise GroupError unless flows of ``inst`` over ``group`` are defined."""
    factor = group
    while factor.kind == "product":
        factor = factor.base
    if inst.is_integral:
        return
    if factor.kind == "cyclic":
        raise GroupError(
            f"cyclic groups pair only with graph or TU instances; use gfp:{inst.p}:d for this GF({inst.p}) matrix"
        )
    if factor.p != inst.p:
        raise GroupError(f"group characteristic {factor.p} does not match the GF({inst.p}) matrix")
