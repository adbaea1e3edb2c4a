"""Exact arithmetic in small Galois fields GF(p^n).

An element with polynomial coefficients (c0, c1, ..., c_{n-1}) over GF(p)
(c0 = constant term, residues modulo the field modulus) is encoded as the
integer c0 + c1*p + ... + c_{n-1}*p^{n-1}.  Enumeration by integer value is
the canonical, platform-independent element order; the prime subfield always
occupies indices 0..p-1 and coincides with ordinary residues mod p.

Multiplication runs on precomputed log/antilog tables over a generator of
the multiplicative group.  Addition is digitwise mod p (a full q x q table
is kept for small fields so hot loops are pure lookups).  All arithmetic is
integer-exact; there is no floating point in this module.
"""

from __future__ import annotations

import functools
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DegreeMismatch,
    DivisionByZero,
    FieldMismatch,
    NotIrreducible,
    NotPrime,
    WrongCharacteristic,
)

MAX_FIELD_SIZE = 1 << 16
_ADD_TABLE_CAP = 1024  # full q x q add/mul tables only below this order


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# -- polynomial helpers over GF(p), coefficient lists low-degree first --------

def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo monic m, coefficients reduced mod p."""
    a = [x % p for x in a]
    _poly_trim(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i in range(dm + 1):
            a[shift + i] = (a[shift + i] - lead * m[i]) % p
        _poly_trim(a)
    return a


def _poly_mul_mod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_mod(prod, m, p)


def _monic_polys(degree: int, p: int) -> Iterator[list[int]]:
    """All monic polynomials of the given degree, in canonical integer order."""
    for k in range(p**degree):
        coeffs = []
        t = k
        for _ in range(degree):
            coeffs.append(t % p)
            t //= p
        coeffs.append(1)
        yield coeffs


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= n/2."""
    n = len(coeffs) - 1
    if n < 1 or coeffs[-1] % p != 1:
        return False
    for d in range(1, n // 2 + 1):
        for g in _monic_polys(d, p):
            if not _poly_mod(list(coeffs), g, p):
                return False
    return True


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """Least monic irreducible of degree n, ordered by integer encoding of
    the non-leading coefficients (c0 + c1*p + ...)."""
    for f in _monic_polys(n, p):
        if is_irreducible(f, p):
            return tuple(f)
    raise NotIrreducible(f"no irreducible polynomial of degree {n} over GF({p})")


class Field:
    """Immutable handle for GF(p^n) with table-driven arithmetic on element indices."""

    def __init__(self, p: int, n: int, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if n < 1:
            raise DegreeMismatch(f"extension degree must be >= 1, got {n}")
        q = p**n
        if q > MAX_FIELD_SIZE:
            raise DegreeMismatch(f"field order {q} exceeds supported cap {MAX_FIELD_SIZE}")
        if modulus is None:
            modulus = default_modulus(p, n)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise DegreeMismatch(
                    f"modulus must be monic of degree {n}, got coefficients {modulus}"
                )
            if not is_irreducible(modulus, p):
                raise NotIrreducible(f"{list(modulus)} is reducible over GF({p})")
        self.p = p
        self.n = n
        self.order = q
        self.modulus = tuple(modulus)
        self._powers_of_p = tuple(p**i for i in range(n))
        self._build_tables()

    # -- encoding -------------------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Polynomial coefficients of element a, constant term first."""
        out = []
        for _ in range(self.n):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        c = [x % self.p for x in coeffs]
        if len(c) > self.n:
            c = _poly_mod(c, self.modulus, self.p)
        return sum(ci * self._powers_of_p[i] for i, ci in enumerate(c))

    def _build_tables(self) -> None:
        p, n, q = self.p, self.n, self.order
        self._add = self._mul = None
        self._add_rows = self._mul_rows = self._inv_row = self._neg_row = None
        # exp/log over a multiplicative generator
        exp = np.zeros(max(q - 1, 1), dtype=np.int32)
        log = np.full(q, -1, dtype=np.int32)
        gen = 0
        for g in range(1, q):
            x = 1
            exp_try = np.zeros(max(q - 1, 1), dtype=np.int32)
            gc = list(self.coeffs(g))
            ok = True
            for k in range(q - 1):
                exp_try[k] = x
                xc = _poly_mul_mod(self.coeffs(x), gc, self.modulus, p)
                x = sum(ci * self._powers_of_p[i] for i, ci in enumerate(xc))
                if x == 1 and k != q - 2:
                    ok = False
                    break
            if ok and x == 1:
                gen = g
                exp = exp_try
                break
        if gen == 0:
            raise AssertionError("no multiplicative generator found (bug)")
        for k in range(q - 1):
            log[exp[k]] = k
        self.generator = gen
        self._exp = exp
        self._log = log
        # small-field add/mul tables for vectorized consumers
        if q <= _ADD_TABLE_CAP:
            idx = np.arange(q)
            digits_a = np.zeros((q, n), dtype=np.int64)
            t = idx.copy()
            for i in range(n):
                digits_a[:, i] = t % p
                t //= p
            s = (digits_a[:, None, :] + digits_a[None, :, :]) % p
            add = np.zeros((q, q), dtype=np.int32)
            for i in range(n):
                add += (s[:, :, i] * self._powers_of_p[i]).astype(np.int32)
            self._add = add
            la, lb = np.meshgrid(log[idx], log[idx], indexing="ij")
            mul = exp[(la + lb) % max(q - 1, 1)].astype(np.int32)
            mul[0, :] = 0
            mul[:, 0] = 0
            self._mul = mul
            # plain-list mirrors: Python list indexing beats numpy scalar lookup
            self._add_rows = [tuple(r) for r in add.tolist()]
            self._mul_rows = [tuple(r) for r in mul.tolist()]
            self._inv_row = (
                tuple(0 if a == 0 else int(exp[(q - 1 - log[a]) % (q - 1)]) for a in range(q))
                if q > 2
                else (0, 1)
            )
            self._neg_row = tuple(self.neg(a) for a in range(q))

    # -- scalar arithmetic on element indices ----------------------------------

    def add(self, a: int, b: int) -> int:
        if self._add_rows is not None:
            return self._add_rows[a][b]
        ca, cb = self.coeffs(a), self.coeffs(b)
        return sum(((x + y) % self.p) * self._powers_of_p[i] for i, (x, y) in enumerate(zip(ca, cb)))

    def neg(self, a: int) -> int:
        if self._neg_row is not None:
            return self._neg_row[a]
        return sum(((-x) % self.p) * self._powers_of_p[i] for i, x in enumerate(self.coeffs(a)))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._mul_rows is not None:
            return self._mul_rows[a][b]
        if a == 0 or b == 0:
            return 0
        k = (int(self._log[a]) + int(self._log[b])) % (self.order - 1)
        return int(self._exp[k])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self._inv_row is not None:
            return self._inv_row[a]
        k = (-int(self._log[a])) % (self.order - 1)
        return int(self._exp[k])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero("negative power of zero")
            return 0
        k = (int(self._log[a]) * e) % max(self.order - 1, 1)
        return int(self._exp[k])

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def trace(self, a: int) -> int:
        """Absolute trace down to GF(p): a + a^p + ... + a^(p^(n-1)).

        The result is a prime-subfield element, i.e. an integer in 0..p-1.
        """
        acc = 0
        x = a
        for _ in range(self.n):
            acc = self.add(acc, x)
            x = self.frobenius(x)
        assert acc < self.p, "trace left the prime subfield (bug)"
        return acc

    def is_square(self, a: int) -> bool:
        """True iff a is a square in the field; zero counts as a square."""
        if a == 0 or self.p == 2:
            return True
        return int(self._log[a]) % 2 == 0

    def sqrt_char2(self, a: int) -> int:
        """The unique square root in characteristic 2 (squaring is a bijection)."""
        if self.p != 2:
            raise WrongCharacteristic("square-root-by-Frobenius requires characteristic 2")
        return self.pow(a, self.order // 2)

    # -- element views ----------------------------------------------------------

    def element(self, a: int) -> FieldElement:
        a = int(a)
        if not 0 <= a < self.order:
            raise FieldMismatch(f"index {a} outside GF({self.order})")
        return FieldElement(self, a)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, a) for a in range(self.order)]

    def __iter__(self) -> Iterator[FieldElement]:
        return iter(self.elements())

    def __len__(self) -> int:
        return self.order

    # -- text form used in certificates -----------------------------------------

    def describe(self) -> str:
        return "GF %d %d %s" % (self.p, self.n, " ".join(str(c) for c in self.modulus))

    def __repr__(self) -> str:
        return f"Field(GF({self.order}), modulus={list(self.modulus)})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.n == other.n
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.modulus))

    def poly_str(self, a: int) -> str:
        terms = []
        for i, c in enumerate(self.coeffs(a)):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                co = "" if c == 1 else str(c)
                terms.append(f"{co}x" if i == 1 else f"{co}x^{i}")
        return "+".join(reversed(terms)) if terms else "0"


class FieldElement:
    """A field element bound to its field; operators do the canonical arithmetic."""

    __slots__ = ("field", "index")

    def __init__(self, field: Field, index: int):
        self.field = field
        self.index = index

    def _other(self, other: FieldElement | int) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch("elements belong to different fields")
            return other.index
        if isinstance(other, int):
            return other % self.field.p  # prime-subfield embedding
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.add(self.index, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(self.index, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(b, self.index))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.index))

    def __mul__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.mul(self.index, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.div(self.index, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.div(b, self.index))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.index, e))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.index == other.index
        if isinstance(other, int):
            return self.index == other % self.field.p and self.index < self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.order, self.index))

    def __int__(self) -> int:
        return self.index

    def __index__(self) -> int:
        return self.index

    def __bool__(self) -> bool:
        return self.index != 0

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.index)

    def trace(self) -> int:
        return self.field.trace(self.index)

    def frobenius(self) -> FieldElement:
        return FieldElement(self.field, self.field.frobenius(self.index))

    def is_square(self) -> bool:
        return self.field.is_square(self.index)

    def sqrt(self) -> FieldElement:
        return FieldElement(self.field, self.field.sqrt_char2(self.index))

    def __repr__(self) -> str:
        return f"GF({self.field.order}):{self.field.poly_str(self.index)}"


@functools.lru_cache(maxsize=None)
def _field_cached(p: int, n: int, modulus: tuple[int, ...]) -> Field:
    return Field(p, n, modulus)


@functools.lru_cache(maxsize=None)
def _default_modulus_checked(p: int, n: int) -> tuple[int, ...]:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if n < 1:
        raise DegreeMismatch(f"extension degree must be >= 1, got {n}")
    return default_modulus(p, n)


def field_new(p: int, n: int = 1, modulus: Sequence[int] | None = None) -> Field:
    """Construct (or fetch the cached) GF(p^n) with a deterministic default modulus."""
    if p < 2:
        raise NotPrime(f"{p} is not prime")
    if modulus is None:
        key = _default_modulus_checked(p, n)
    else:
        key = tuple(int(c) % p for c in modulus)
    return _field_cached(p, n, key)


def parse_field_desc(text: str) -> Field:
    """Inverse of Field.describe: 'GF p n c0 c1 ... cn'."""
    parts = text.split()
    if len(parts) < 4 or parts[0] != "GF":
        raise ValueError(f"not a field description: {text!r}")
    p, n = int(parts[1]), int(parts[2])
    coeffs = [int(c) for c in parts[3:]]
    if len(coeffs) != n + 1:
        raise ValueError(f"modulus length mismatch in {text!r}")
    return field_new(p, n, coeffs)
