"""Arithmetic in F_{p^d} for odd p, with the quadratic and additive characters.

Elements are stored internally as integer codes ``sum(c_i * p**i)`` where
``c_i`` are the coefficients in the polynomial basis ``1, x, ..., x^(d-1)``.
:class:`FieldElem` wraps a code together with its field so that the usual
operators work; the hot enumeration kernels use the lookup tables from
:meth:`FieldParams.tables` directly.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    CompositeP,
    DegreeTooLarge,
    DivisionByZero,
    EvenP,
    FieldTooLarge,
)

MAX_ORDER = 2**31
#: largest q for which full q*q addition/multiplication tables are built
TABLE_MAX = 2048
#: largest q for which the eta lookup table is built
ETA_TABLE_MAX = 2**16
GAUSS_DIRECT_MAX = 10**4


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, d)`` with ``q == p**d``, or None if q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, math.isqrt(q) + 1):
        if q % p == 0:
            d = 0
            while q % p == 0:
                q //= p
                d += 1
            return (p, d) if q == 1 else None
    return (q, 1)


# -- polynomials over F_p, coefficient lists with the constant term first --

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    a = _ptrim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _ptrim(a)
    return a


def _pmulmod(a: list[int], b: list[int], m: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _pmod(out, m, p)


def _ppowmod(a: list[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(list(a), m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _ptrim([c % p for c in a])
    b = _ptrim([c % p for c in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Ben-Or test for a monic polynomial (constant term first) over F_p."""
    d = len(poly) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if poly[0] % p == 0:
        return False
    if d <= 3:
        # a reducible polynomial of degree <= 3 has a linear factor
        return all(
            sum(c * pow(x, i, p) for i, c in enumerate(poly)) % p != 0
            for x in range(p)
        )
    xp = [0, 1]
    for _ in range(d // 2):
        xp = _ppowmod(xp, p, poly, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(list(poly), _ptrim(diff), p)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree d.

    Candidates are ordered by their coefficient sequence ``(c_0, ..., c_{d-1})``
    with the constant term most significant. The returned tuple includes the
    leading 1.
    """
    for low in itertools.product(range(p), repeat=d):
        poly = (*low, 1)
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("an irreducible polynomial exists for every degree")


@dataclass(frozen=True)
class FieldTables:
    """Dense lookup tables over element codes, used by numba kernels."""

    q: int
    add: np.ndarray
    sub: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray  # inv[0] is 0 and must never be used
    eta: np.ndarray
    trace: np.ndarray
    eta_minus_one: int


@dataclass(frozen=True)
class FieldParams:
    p: int
    d: int
    modulus: tuple[int, ...] | None
    q: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise CompositeP(f"p={self.p} is not prime")
        if self.p == 2:
            raise EvenP("characteristic 2 is not supported")
        if self.d < 1:
            raise ValueError(f"degree must be positive, got {self.d}")
        if self.q != self.p**self.d:
            raise ValueError("q must equal p**d")
        if self.d > 1:
            if self.modulus is None or len(self.modulus) != self.d + 1 or self.modulus[-1] != 1:
                raise ValueError("extension fields need a monic modulus of degree d")
            if not is_irreducible(self.modulus, self.p):
                raise ValueError(f"modulus {self.modulus} is reducible over F_{self.p}")

    def __repr__(self) -> str:
        return f"FieldParams(q={self.q})" if self.d == 1 else (
            f"FieldParams(q={self.q}={self.p}^{self.d}, modulus={self.modulus})")

    # -- codes <-> coefficients --

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.d):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def code(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.d:
            raise ValueError(f"expected at most {self.d} coefficients")
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def __call__(self, value: int | Sequence[int]) -> FieldElem:
        """Build an element from an integer (mapped through Z -> F_p) or coefficients."""
        if isinstance(value, (int, np.integer)):
            return FieldElem(self, int(value) % self.p)
        return FieldElem(self, self.code(value))

    def from_code(self, code: int) -> FieldElem:
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for q={self.q}")
        return FieldElem(self, code)

    @property
    def zero(self) -> FieldElem:
        return FieldElem(self, 0)

    @property
    def one(self) -> FieldElem:
        return FieldElem(self, 1)

    def elements(self) -> Iterator[FieldElem]:
        return (FieldElem(self, c) for c in range(self.q))

    def nonzero(self) -> Iterator[FieldElem]:
        return (FieldElem(self, c) for c in range(1, self.q))

    # -- arithmetic on integer codes --

    def add(self, a: int, b: int) -> int:
        if self.d == 1:
            return (a + b) % self.p
        return self.code([x + y for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def sub(self, a: int, b: int) -> int:
        if self.d == 1:
            return (a - b) % self.p
        return self.code([x - y for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def neg(self, a: int) -> int:
        if self.d == 1:
            return -a % self.p
        return self.code([-x for x in self.coeffs(a)])

    def mul(self, a: int, b: int) -> int:
        if self.d == 1:
            return a * b % self.p
        prod = _pmulmod(_ptrim(list(self.coeffs(a))), _ptrim(list(self.coeffs(b))),
                        self.modulus, self.p)
        return self.code(prod)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if self.d == 1:
            return pow(a, e, self.p)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.d == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.q - 2)

    def eta(self, a: int) -> int:
        if a == 0:
            return 0
        if self.q <= ETA_TABLE_MAX:
            return int(self._eta_table[a])
        return 1 if self.pow(a, (self.q - 1) // 2) == 1 else -1

    def trace(self, a: int) -> int:
        """Absolute trace to F_p, returned as an integer in [0, p)."""
        total, x = 0, a
        for _ in range(self.d):
            total = self.add(total, x)
            x = self.pow(x, self.p)
        assert total < self.p, "trace must land in the prime subfield"
        return total

    @cached_property
    def _eta_table(self) -> np.ndarray:
        table = np.zeros(self.q, dtype=np.int8)
        for x in range(1, self.q):
            table[self.mul(x, x)] = 1
        table[1:][table[1:] == 0] = -1
        return table

    @cached_property
    def eta_minus_one(self) -> int:
        """eta(-1): +1 iff q = 1 (mod 4)."""
        return 1 if self.q % 4 == 1 else -1

    def tables(self) -> FieldTables:
        if self.q > TABLE_MAX:
            raise FieldTooLarge(f"q={self.q} exceeds the table limit {TABLE_MAX}")
        return self._tables

    @cached_property
    def _tables(self) -> FieldTables:
        q, p, d = self.q, self.p, self.d
        digits = np.array([self.coeffs(a) for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(d, dtype=np.int64)
        add = (((digits[:, None, :] + digits[None, :, :]) % p) @ weights)
        sub = (((digits[:, None, :] - digits[None, :, :]) % p) @ weights)
        neg = ((-digits) % p) @ weights
        if d == 1:
            r = np.arange(q, dtype=np.int64)
            mul = np.outer(r, r) % p
        else:
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(a, q):
                    mul[a, b] = mul[b, a] = self.mul(a, b)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        eta = self._eta_table.astype(np.int64)
        trace = np.array([self.trace(a) for a in range(q)], dtype=np.int64)
        return FieldTables(
            q=q, add=add.astype(np.int32), sub=sub.astype(np.int32),
            mul=mul.astype(np.int32), neg=neg.astype(np.int32),
            inv=inv.astype(np.int32), eta=eta.astype(np.int32),
            trace=trace.astype(np.int32), eta_minus_one=self.eta_minus_one,
        )


def field_make(p: int, d: int = 1) -> FieldParams:
    """Construct F_{p^d}; for d > 1 the modulus is chosen deterministically."""
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    if not is_prime(p):
        raise CompositeP(f"p={p} is not prime")
    if p == 2:
        raise EvenP("characteristic 2 is not supported")
    if p**d > MAX_ORDER:
        raise DegreeTooLarge(f"{p}^{d} exceeds 2^31")
    modulus = smallest_irreducible(p, d) if d > 1 else None
    return FieldParams(p=p, d=d, modulus=modulus, q=p**d)


def field_of_order(q: int) -> FieldParams:
    pd = prime_power(q)
    if pd is None:
        raise CompositeP(f"q={q} is not a prime power")
    return field_make(*pd)


@dataclass(frozen=True, eq=False)
class FieldElem:
    field: FieldParams
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.code)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("elements belong to different fields")
            return other.code
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def _wrap(self, code: int) -> FieldElem:
        return FieldElem(self.field, code)

    def __add__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.code))

    def __mul__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return self._wrap(self.field.mul(self.code, self.field.inv(b)))

    def __neg__(self) -> FieldElem:
        return self._wrap(self.field.neg(self.code))

    def __pow__(self, e: int) -> FieldElem:
        return self._wrap(self.field.pow(self.code, e))

    def inv(self) -> FieldElem:
        return self._wrap(self.field.inv(self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.field == other.field and self.code == other.code
        if isinstance(other, (int, np.integer)):
            return self.code == int(other) % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.q, self.code))

    def __repr__(self) -> str:
        if self.field.d == 1:
            return f"F{self.field.q}({self.code})"
        return f"F{self.field.q}{self.coeffs}"


# -- free functions mirroring the operation list --

def add(a: FieldElem, b: FieldElem) -> FieldElem:
    return a + b


def sub(a: FieldElem, b: FieldElem) -> FieldElem:
    return a - b


def mul(a: FieldElem, b: FieldElem) -> FieldElem:
    return a * b


def neg(a: FieldElem) -> FieldElem:
    return -a


def inv(a: FieldElem) -> FieldElem:
    return a.inv()


def eta(a: FieldElem) -> int:
    """Quadratic character: 0 at zero, +1 on nonzero squares, -1 otherwise."""
    return a.field.eta(a.code)


def trace(a: FieldElem) -> FieldElem:
    return FieldElem(a.field, a.field.trace(a.code))


def chi1(a: FieldElem) -> complex:
    """Canonical additive character exp(2*pi*i*Tr(a)/p)."""
    return cmath.exp(2j * math.pi * a.field.trace(a.code) / a.field.p)


def norm(a: FieldElem) -> int:
    return 0 if a.code == 0 else 1


def delta(a: FieldElem) -> int:
    return 1 - norm(a)


def gauss_formula(fp: FieldParams) -> complex:
    """Closed form of the quadratic Gauss sum of F_q."""
    sign = (-1) ** (fp.d - 1)
    root = math.sqrt(fp.q)
    if fp.p % 4 == 1:
        return complex(sign * root, 0.0)
    return sign * (1j**fp.d) * root


def gauss_direct(fp: FieldParams) -> complex:
    """Brute-force sum of eta(x) * chi1(x) over nonzero x."""
    if fp.q > GAUSS_DIRECT_MAX:
        raise FieldTooLarge(f"q={fp.q} is too large for the direct Gauss sum")
    total = 0j
    for c in range(1, fp.q):
        total += fp.eta(c) * cmath.exp(2j * math.pi * fp.trace(c) / fp.p)
    return total
