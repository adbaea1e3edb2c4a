"""Exact arithmetic in rings of cyclotomic integers Z[zeta_m].

A value is a coordinate vector over the power basis 1, zeta, ..., zeta^(phi(m)-1),
always fully reduced modulo the m-th cyclotomic polynomial.  Coefficients are
Python integers, so nothing ever rounds or overflows.  The quadratic character
sums used for unbiasedness checks live here: their values are sums of p-th
roots of unity and their squared magnitudes are plain integers whenever the
product a * conj(a) reduces to a rational.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import FieldMismatch
from .galois import Field, FieldElement


@functools.lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    out = m
    d = 2
    mm = m
    while d * d <= mm:
        if mm % d == 0:
            out -= out // d
            while mm % d == 0:
                mm //= d
        d += 1
    if mm > 1:
        out -= out // mm
    return out


def _poly_divide_exact(num: list[int], den: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials (low-degree-first), den monic-led."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + dd] // den[dd]
        out[k] = c
        if c:
            for i, di in enumerate(den):
                num[k + i] -= c * di
    assert all(x == 0 for x in num), "non-exact polynomial division (bug)"
    return out


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, low-degree first, computed by exact division of
    x^m - 1 by the product of all lower-order cyclotomic factors."""
    if m == 1:
        return (-1, 1)
    num = [0] * (m + 1)
    num[0], num[m] = -1, 1
    for d in range(1, m):
        if m % d == 0:
            num = _poly_divide_exact(num, cyclotomic_polynomial(d))
    return tuple(num)


def _reduce_mod_cyclotomic(raw: Sequence[int], m: int) -> tuple[int, ...]:
    """Reduce a raw power-basis vector (any length) mod Phi_m; fixed width phi(m)."""
    phi = euler_phi(m)
    mod = cyclotomic_polynomial(m)
    c = list(raw)
    # fold exponents >= m first (zeta^m = 1), cheaper than long division
    if len(c) > m:
        folded = [0] * m
        for e, x in enumerate(c):
            folded[e % m] += x
        c = folded
    for k in range(len(c) - 1, phi - 1, -1):
        lead = c[k]
        if lead:
            shift = k - phi
            for i in range(phi + 1):
                c[shift + i] -= lead * mod[i]
        c.pop()
    c.extend([0] * (phi - len(c)))
    return tuple(c)


class CycInt:
    """A cyclotomic integer: order m and a reduced power-basis coefficient vector."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, raw_coeffs: Sequence[int]):
        if order < 1:
            raise ValueError("root-of-unity order must be >= 1")
        self.order = order
        self.coeffs = _reduce_mod_cyclotomic([int(x) for x in raw_coeffs], order)

    @classmethod
    def from_int(cls, k: int, order: int = 1) -> CycInt:
        return cls(order, [k])

    @classmethod
    def zero(cls, order: int = 1) -> CycInt:
        return cls(order, [])

    def lift(self, order: int) -> CycInt:
        """Embed into Z[zeta_order]; requires self.order | order."""
        if order == self.order:
            return self
        if order % self.order != 0:
            raise ValueError(f"cannot lift order {self.order} into order {order}")
        step = order // self.order
        raw = [0] * order
        for e, x in enumerate(self.coeffs):
            raw[e * step] += x
        return CycInt(order, raw)

    def _pair(self, other: CycInt | int) -> tuple[CycInt, CycInt]:
        if isinstance(other, int):
            other = CycInt.from_int(other, 1)
        if not isinstance(other, CycInt):
            raise TypeError(f"cannot combine CycInt with {type(other).__name__}")
        if self.order == other.order:
            return self, other
        m = self.order * other.order // math.gcd(self.order, other.order)
        return self.lift(m), other.lift(m)

    def __add__(self, other: CycInt | int) -> CycInt:
        a, b = self._pair(other)
        return CycInt(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __sub__(self, other: CycInt | int) -> CycInt:
        a, b = self._pair(other)
        return CycInt(a.order, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other: CycInt | int) -> CycInt:
        a, b = self._pair(other)
        return CycInt(a.order, [y - x for x, y in zip(a.coeffs, b.coeffs)])

    def __neg__(self) -> CycInt:
        return CycInt(self.order, [-x for x in self.coeffs])

    def __mul__(self, other: CycInt | int) -> CycInt:
        if isinstance(other, int):
            return CycInt(self.order, [x * other for x in self.coeffs])
        a, b = self._pair(other)
        prod = [0] * (2 * len(a.coeffs))
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycInt(a.order, prod)

    __rmul__ = __mul__

    def conj(self) -> CycInt:
        """Complex conjugation: zeta -> zeta^(-1)."""
        m = self.order
        raw = [0] * m
        for e, x in enumerate(self.coeffs):
            raw[(m - e) % m] += x
        return CycInt(m, raw)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coeffs)

    def is_rational(self) -> bool:
        return all(x == 0 for x in self.coeffs[1:])

    def magnitude_sq(self) -> int | None:
        """a * conj(a) when it reduces to a rational integer, else None.

        None is a defined outcome (surveys flag it as an internal alarm); it
        never raises.
        """
        z = self * self.conj()
        if not z.is_rational():
            return None
        val = z.coeffs[0] if z.coeffs else 0
        assert val >= 0, "negative squared magnitude (bug)"
        return val

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.is_rational() and (self.coeffs[0] if self.coeffs else 0) == other
        if not isinstance(other, CycInt):
            return NotImplemented
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def serialize(self) -> str:
        return "zeta %d : %s" % (self.order, " ".join(str(c) for c in self.coeffs))

    @classmethod
    def parse(cls, text: str) -> CycInt:
        head, _, tail = text.partition(":")
        parts = head.split()
        if len(parts) != 2 or parts[0] != "zeta":
            raise ValueError(f"not a cyclotomic integer: {text!r}")
        return cls(int(parts[1]), [int(c) for c in tail.split()])

    def approx(self) -> complex:
        """Debug-only decimal approximation; never feeds any check."""
        z = np.exp(2j * np.pi / self.order)
        return complex(sum(c * z**e for e, c in enumerate(self.coeffs)))

    def __repr__(self) -> str:
        if self.is_rational():
            return f"CycInt({self.coeffs[0] if self.coeffs else 0})"
        return f"CycInt(zeta{self.order}; {list(self.coeffs)})"


def root_of_unity(m: int, e: int) -> CycInt:
    """zeta_m^e as a reduced cyclotomic integer."""
    raw = [0] * m
    raw[e % m] = 1
    return CycInt(m, raw)


# -- quadratic character sums over a field -------------------------------------


def _as_index(F: Field, x: FieldElement | int) -> int:
    if isinstance(x, FieldElement):
        if x.field != F:
            raise FieldMismatch("element from a different field")
        return x.index
    x = int(x)
    if not 0 <= x < F.order:
        raise FieldMismatch(f"index {x} outside GF({F.order})")
    return x


def weil_sum(F: Field, m: FieldElement | int, n: FieldElement | int) -> CycInt:
    """Sum over all field elements k of zeta_p^Tr(m k^2 + n k), exact in Z[zeta_p]."""
    mi, ni = _as_index(F, m), _as_index(F, n)
    counts = [0] * F.p
    for k in range(F.order):
        arg = F.add(F.mul(mi, F.mul(k, k)), F.mul(ni, k))
        counts[F.trace(arg)] += 1
    return CycInt(F.p, counts)


@dataclass
class WeilSurvey:
    """Full table of squared magnitudes of the quadratic sums of one field."""

    field_desc: str
    p: int
    order: int
    table: np.ndarray  # (q, q) int64; entry -1 flags a non-rational magnitude
    alarms: int  # number of -1 entries (expected 0)

    @property
    def odd_rows_uniform(self) -> bool:
        """For odd p: every entry with m != 0 equals the field order."""
        return bool((self.table[1:, :] == self.order).all())

    def char2_row_pattern(self) -> list[int]:
        """For p = 2: count of nonzero entries in each row m != 0."""
        return [int((self.table[m, :] != 0).sum()) for m in range(1, self.order)]

    def row_nonzero_value(self, m: int) -> int | None:
        vals = {int(v) for v in self.table[m, :] if v != 0}
        return vals.pop() if len(vals) == 1 else None


def weil_survey(F: Field) -> WeilSurvey:
    """Exact (q x q) table of |sum_k zeta_p^Tr(m k^2 + n k)|^2 over all (m, n)."""
    q, p = F.order, F.p
    tr = np.array([F.trace(a) for a in range(q)], dtype=np.int64)
    table = np.zeros((q, q), dtype=np.int64)
    alarms = 0
    if F._mul is not None and F._add is not None:
        mul, add = F._mul, F._add
        sq = mul[np.arange(q), np.arange(q)]
        for m in range(q):
            mk2 = mul[m, sq]
            for n in range(q):
                e = tr[add[mk2, mul[n, np.arange(q)]]]
                counts = np.bincount(e, minlength=p)
                val = CycInt(p, counts.tolist()).magnitude_sq()
                if val is None:
                    table[m, n] = -1
                    alarms += 1
                else:
                    table[m, n] = val
    else:
        for m in range(q):
            for n in range(q):
                val = weil_sum(F, m, n).magnitude_sq()
                if val is None:
                    table[m, n] = -1
                    alarms += 1
                else:
                    table[m, n] = val
    return WeilSurvey(F.describe(), p, q, table, alarms)
