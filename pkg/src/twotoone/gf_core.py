"""Exact arithmetic in GF(p^n).

Elements are exchanged as integer indices: the coefficient vector
``(c_0, ..., c_{n-1})`` in the polynomial basis read as the base-``p`` number
``sum(c_i * p**i)``.  The elements of the prime field are therefore the
indices ``0..p-1`` and every subfield element carried by a larger field is an
ordinary index of that larger field.

All arithmetic methods on :class:`GF` accept either Python ints or numpy
integer arrays and broadcast; a scalar input gives a Python ``int`` back.
Multiplication goes through discrete log / antilog tables built once per
field, so evaluating a polynomial over the whole field is a handful of numpy
operations.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DivisionByZero,
    DomainTooLarge,
    EvenCharacteristic,
    FieldError,
    FieldMismatch,
    NotASubfield,
    NotPrime,
    ReduciblePolynomial,
    ZeroConstantTerm,
)

DEFAULT_MAX_ORDER = 1 << 20


# ---------------------------------------------------------------------------
# integer helpers

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


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def multiplicative_order(a: int, n: int) -> int:
    """Smallest k >= 1 with a**k == 1 (mod n)."""
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not invertible mod {n}")
    k, x = 1, a % n
    while x != 1 % n:
        x = (x * a) % n
        k += 1
    return k


# ---------------------------------------------------------------------------
# polynomials over the prime field GF(p), coefficient lists low-to-high

def _pl_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pl_mod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    a = _pl_trim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _pl_trim(a)
    return a


def _pl_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pl_trim(out)


def _pl_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    m = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(m)]
    return _pl_trim(out)


def _pl_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _pl_trim(list(a)), _pl_trim(list(b))
    while b:
        a, b = b, _pl_mod(a, b, p)
    return a


def _pl_powmod(base: Sequence[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pl_mod(base, f, p)
    while e:
        if e & 1:
            result = _pl_mod(_pl_mul(result, base, p), f, p)
        base = _pl_mod(_pl_mul(base, base, p), f, p)
        e >>= 1
    return result


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test for a polynomial over GF(p)."""
    f = _pl_trim([c % p for c in f])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True

    def frob_power(k):
        # x^(p^k) mod f
        h = [0, 1]
        for _ in range(k):
            h = _pl_powmod(h, p, f, p)
        return h

    if _pl_sub(frob_power(n), [0, 1], p):
        return False
    for r in prime_factors(n):
        g = _pl_gcd(f, _pl_sub(frob_power(n // r), [0, 1], p), p)
        if len(g) > 1:
            return False
    return True


def _digits(i: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        i, r = divmod(i, p)
        out.append(r)
    return out


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``n`` over GF(p).

    Coefficients are compared from the top down, which is the same as
    scanning the lower coefficients as a base-``p`` integer.
    """
    if n == 1:
        return (0, 1)
    for low in range(p ** n):
        coeffs = _digits(low, p, n)
        if coeffs[0] == 0:
            continue
        cand = tuple(coeffs) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


# ---------------------------------------------------------------------------
# the field

class GF:
    """The finite field GF(p^n) with a fixed polynomial-basis representation.

    Instances are immutable; lookup tables are built lazily on first use.
    Prefer :func:`field_create` (cached) over calling the class directly.
    """

    def __init__(self, p: int, n: int = 1, modulus: Sequence[int] | None = None,
                 max_order: int = DEFAULT_MAX_ORDER):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if n < 1:
            raise FieldError(f"extension degree must be >= 1, got {n}")
        q = p ** n
        if q > max_order:
            raise DomainTooLarge(f"field order {q} exceeds limit {max_order}")
        if modulus is None:
            modulus = default_modulus(p, n)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise FieldError(f"modulus must be monic of degree {n}: {modulus}")
            if not is_irreducible(modulus, p):
                raise ReduciblePolynomial(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.n = n
        self.q = q
        self.modulus = tuple(modulus)
        self._pw = np.array([p ** i for i in range(n)], dtype=np.int64)

    # identity ---------------------------------------------------------------

    def _key(self):
        return (self.p, self.n, self.modulus)

    def __eq__(self, other):
        return isinstance(other, GF) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"GF({self.p}^{self.n})"

    def spec(self) -> str:
        """Field spec string ``gf:p=..,n=..[,mod=..]`` (mod only when non-default)."""
        s = f"gf:p={self.p},n={self.n}"
        if self.modulus != default_modulus(self.p, self.n):
            s += ",mod=" + ",".join(str(c) for c in self.modulus)
        return s

    __str__ = spec

    @property
    def order(self) -> int:
        return self.q

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def degree(self) -> int:
        return self.n

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def nonzero(self) -> np.ndarray:
        return np.arange(1, self.q, dtype=np.int64)

    # element encoding -------------------------------------------------------

    def coeffs(self, x: int) -> tuple[int, ...]:
        return tuple(_digits(int(x), self.p, self.n))

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.n:
            raise FieldError(f"too many coordinates for {self!r}: {coeffs}")
        return sum((int(c) % self.p) * self.p ** i for i, c in enumerate(coeffs))

    def __call__(self, x) -> "Elem":
        return Elem(self, self._check(int(x)))

    def _check(self, x: int) -> int:
        if not 0 <= x < self.q:
            raise FieldError(f"{x} is not an element index of {self!r}")
        return x

    @property
    def generator(self) -> int:
        """Index of the primitive element behind the log tables."""
        return self._tables[2]

    # tables -------------------------------------------------------------------

    def _mul_const(self, arr: np.ndarray, c: int) -> np.ndarray:
        """Schoolbook multiply every entry of ``arr`` by the element ``c``."""
        arr = np.asarray(arr, dtype=np.int64)
        p, n = self.p, self.n
        if p == 2:
            acc = np.zeros_like(arr)
            j = 0
            while c >> j:
                if (c >> j) & 1:
                    acc ^= arr << j
                j += 1
            full = sum(b << i for i, b in enumerate(self.modulus))
            for bit in range(2 * n - 2, n - 1, -1):
                acc ^= ((acc >> bit) & 1) * (full << (bit - n))
            return acc
        digs = (arr[:, None] // self._pw[None, :]) % p
        cd = _digits(c, p, n)
        prod = np.zeros((arr.shape[0], 2 * n - 1), dtype=np.int64)
        for j, cj in enumerate(cd):
            if cj:
                prod[:, j:j + n] += cj * digs
        prod %= p
        mod = np.array(self.modulus, dtype=np.int64)
        for k in range(2 * n - 2, n - 1, -1):
            top = prod[:, k].copy()
            prod[:, k - n:k + 1] = (prod[:, k - n:k + 1] - top[:, None] * mod[None, :]) % p
        return prod[:, :n] @ self._pw

    def _slow_pow(self, g: int, e: int) -> int:
        result, base = 1, g
        while e:
            if e & 1:
                result = int(self._mul_const(np.array([result]), base)[0])
            base = int(self._mul_const(np.array([base]), base)[0])
            e >>= 1
        return result

    @functools.cached_property
    def _tables(self):
        q, p = self.q, self.p
        if q == 2:
            g = 1
        else:
            factors = prime_factors(q - 1)
            for g in range(2, q):
                if all(self._slow_pow(g, (q - 1) // r) != 1 for r in factors):
                    break
        exp = np.ones(1, dtype=np.int64)
        while exp.shape[0] < q - 1:
            step = self._slow_pow(g, exp.shape[0])
            exp = np.concatenate([exp, self._mul_const(exp, step)])
        exp = exp[:q - 1]
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)
        exp2 = np.concatenate([exp, exp])
        if p == 2:
            neg = np.arange(q, dtype=np.int64)
            digits = None
        else:
            digits = ((np.arange(q, dtype=np.int64)[:, None] // self._pw[None, :]) % p)
            neg = ((-digits) % p) @ self._pw
        return exp2, log, g, neg, digits

    @functools.cached_property
    def digits(self) -> np.ndarray:
        """``digits[x, i]``: coordinate i of element x in the polynomial basis."""
        if self._tables[4] is not None:
            return self._tables[4]
        return (np.arange(self.q, dtype=np.int64)[:, None] >> np.arange(self.n)[None, :]) & 1

    # arithmetic ---------------------------------------------------------------

    @staticmethod
    def _out(res, *inputs):
        if all(np.ndim(x) == 0 for x in inputs):
            return int(res)
        return res

    def add(self, a, b):
        if self.p == 2:
            return self._out(np.bitwise_xor(a, b), a, b)
        digits = self._tables[4]
        s = ((digits[np.asarray(a)] + digits[np.asarray(b)]) % self.p) @ self._pw
        return self._out(s, a, b)

    def neg(self, a):
        return self._out(self._tables[3][np.asarray(a)], a)

    def sub(self, a, b):
        if self.p == 2:
            return self.add(a, b)
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        exp, log = self._tables[0], self._tables[1]
        a_, b_ = np.asarray(a), np.asarray(b)
        res = np.where((a_ == 0) | (b_ == 0), 0, exp[log[a_] + log[b_]])
        return self._out(res, a, b)

    def inv(self, a):
        a_ = np.asarray(a)
        if np.any(a_ == 0):
            raise DivisionByZero("inverse of zero")
        exp, log = self._tables[0], self._tables[1]
        return self._out(exp[(self.q - 1 - log[a_]) % (self.q - 1)], a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        """``a**e``; the exponent is reduced mod q-1 for nonzero bases."""
        e = int(e)
        a_ = np.asarray(a)
        if e < 0 and np.any(a_ == 0):
            raise DivisionByZero("negative power of zero")
        exp, log = self._tables[0], self._tables[1]
        er = e % (self.q - 1)
        res = exp[(log[a_] * er) % (self.q - 1)]
        res = np.where(a_ == 0, 1 if e == 0 else 0, res)
        return self._out(res, a)

    def scalar(self, c: int) -> int:
        """The prime-field element ``c mod p``."""
        return int(c) % self.p

    def sum(self, values: Iterable) -> int:
        acc = 0
        for v in values:
            acc = self.add(acc, v)
        return acc

    def frobenius(self, x, k: int = 1):
        return self.pow(x, self.p ** k)

    # subfields, trace, characters -------------------------------------------

    def _need_divisor(self, m: int):
        if m < 1 or self.n % m:
            raise NotASubfield(f"GF({self.p}^{m}) is not a subfield of {self!r}")

    def trace(self, x, m: int = 1):
        """Relative trace onto the subfield GF(p^m), returned as an element of self."""
        self._need_divisor(m)
        acc = np.zeros(np.shape(x), dtype=np.int64) if np.ndim(x) else 0
        y = x
        step = self.p ** m
        for _ in range(self.n // m):
            acc = self.add(acc, y)
            y = self.pow(y, step)
        return self._out(acc, x)

    @functools.cached_property
    def _abs_trace(self) -> np.ndarray:
        return np.asarray(self.trace(self.elements(), 1), dtype=np.int64)

    def abs_trace(self, x):
        """Absolute trace, as an integer in ``[0, p)`` (table lookup)."""
        return self._out(self._abs_trace[np.asarray(x)], x)

    def norm(self, x, m: int = 1):
        self._need_divisor(m)
        return self.pow(x, (self.q - 1) // (self.p ** m - 1))

    def in_subfield(self, x, m: int):
        self._need_divisor(m)
        res = np.asarray(self.pow(x, self.p ** m)) == np.asarray(x)
        return bool(res) if np.ndim(x) == 0 else res

    def subfield_elements(self, m: int) -> np.ndarray:
        els = self.elements()
        return els[self.in_subfield(els, m)]

    def quadratic_character(self, x):
        """+1 on nonzero squares, -1 on non-squares, 0 at zero (odd p only)."""
        if self.p == 2:
            raise EvenCharacteristic("quadratic character needs odd characteristic")
        t = np.asarray(self.pow(x, (self.q - 1) // 2))
        res = np.where(np.asarray(x) == 0, 0, np.where(t == 1, 1, -1))
        return self._out(res, x)

    def is_square(self, x):
        if self.p == 2:
            return True if np.ndim(x) == 0 else np.ones(np.shape(x), dtype=bool)
        chi = self.quadratic_character(x)
        return chi >= 0

    def sqrt(self, x) -> int | None:
        """Some square root of ``x`` (smallest index), or None."""
        x = int(x)
        roots = np.nonzero(self.mul(self.elements(), self.elements()) == x)[0]
        return int(roots[0]) if roots.size else None

    @functools.cached_property
    def dual_basis_map(self) -> np.ndarray:
        """``u -> bits of (Tr(u t^i))_i``: turns Tr(u x) into a dot product (p = 2).

        With ``d = dual_basis_map``, ``Tr(u*x) == popcount(d[u] & x) % 2``.
        """
        if self.p != 2:
            raise FieldError("dual basis map is only used in characteristic 2")
        els = self.elements()
        out = np.zeros(self.q, dtype=np.int64)
        for i in range(self.n):
            out |= self.abs_trace(self.mul(els, 1 << i)) << i
        return out


@functools.lru_cache(maxsize=None)
def _cached_field(p, n, modulus, max_order):
    return GF(p, n, modulus, max_order)


def field_create(p: int, n: int = 1, modulus: Sequence[int] | None = None,
                 max_order: int = DEFAULT_MAX_ORDER) -> GF:
    """Cached field constructor; equal arguments give the same instance."""
    if modulus is not None:
        modulus = tuple(int(c) for c in modulus)
    return _cached_field(int(p), int(n), modulus, int(max_order))


_SPEC_RE = re.compile(r"^\s*gf\s*:\s*(.*)$", re.IGNORECASE)


def parse_field(spec: str, max_order: int = DEFAULT_MAX_ORDER) -> GF:
    """Parse ``gf:p=<p>,n=<n>[,mod=<c0>,<c1>,...]``."""
    m = _SPEC_RE.match(spec)
    if not m:
        raise FieldError(f"bad field spec {spec!r}")
    body = m.group(1)
    mod = None
    if "mod=" in body:
        body, mod_part = body.split("mod=", 1)
        mod = [int(c, 0) for c in mod_part.replace(" ", "").split(",") if c]
    kv = {}
    for part in body.split(","):
        part = part.strip()
        if not part:
            continue
        k, _, v = part.partition("=")
        kv[k.strip()] = int(v, 0)
    if "p" not in kv:
        raise FieldError(f"field spec {spec!r} lacks p")
    return field_create(kv["p"], kv.get("n", 1), mod, max_order)


def parse_element(text: str | int, field: GF) -> int:
    """Element literal: decimal or 0x-hex index."""
    x = int(text, 0) if isinstance(text, str) else int(text)
    return field._check(x)


# ---------------------------------------------------------------------------
# element wrapper

@dataclass(frozen=True)
class Elem:
    """A field element bundled with its field; mostly a convenience for tests
    and interactive use.  Bulk code works on raw indices."""

    field: GF
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def _other(self, o) -> int:
        if isinstance(o, Elem):
            if o.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {o.field!r}")
            return o.value
        return self.field.scalar(o)

    def __add__(self, o):
        return Elem(self.field, self.field.add(self.value, self._other(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return Elem(self.field, self.field.sub(self.value, self._other(o)))

    def __rsub__(self, o):
        return Elem(self.field, self.field.sub(self._other(o), self.value))

    def __neg__(self):
        return Elem(self.field, self.field.neg(self.value))

    def __mul__(self, o):
        return Elem(self.field, self.field.mul(self.value, self._other(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return Elem(self.field, self.field.div(self.value, self._other(o)))

    def __pow__(self, e: int):
        return Elem(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return Elem(self.field, self.field.inv(self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Elem({self.value} in {self.field!r})"


def arith(kind: str, a: Elem, b=None) -> Elem:
    """Dispatch ``add|sub|mul|inv|pow`` on :class:`Elem` operands."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "inv":
        return a.inverse()
    if kind == "pow":
        return a ** int(b)
    raise ValueError(f"unknown operation {kind!r}")


# ---------------------------------------------------------------------------
# univariate polynomials over GF(p^n)

ZERO_DEGREE = -1


class Poly:
    """Sparse univariate polynomial with coefficients given as element indices."""

    def __init__(self, field: GF, coeffs: Mapping[int, int] | Sequence[int] = ()):
        self.field = field
        if isinstance(coeffs, Mapping):
            items = coeffs.items()
        else:
            items = enumerate(coeffs)
        terms = {}
        for d, c in items:
            d, c = int(d), int(c)
            if d < 0:
                raise ValueError("negative exponent")
            field._check(c)
            if c:
                terms[d] = field.add(terms.get(d, 0), c)
                if terms[d] == 0:
                    del terms[d]
        self.coeffs = dict(sorted(terms.items()))

    # construction helpers
    @classmethod
    def monomial(cls, field: GF, d: int, c: int = 1) -> "Poly":
        return cls(field, {d: c})

    @classmethod
    def x(cls, field: GF) -> "Poly":
        return cls(field, {1: 1})

    @classmethod
    def constant(cls, field: GF, c: int) -> "Poly":
        return cls(field, {0: c})

    @property
    def degree(self) -> int:
        return max(self.coeffs) if self.coeffs else ZERO_DEGREE

    def __getitem__(self, d: int) -> int:
        return self.coeffs.get(d, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, tuple(self.coeffs.items())))

    def __repr__(self):
        return f"Poly({self}, {self.field!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d in sorted(self.coeffs, reverse=True):
            c = self.coeffs[d]
            if d == 0:
                parts.append(str(c))
            else:
                mono = "x" if d == 1 else f"x^{d}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(parts)

    # evaluation
    def __call__(self, x):
        F = self.field
        xs = np.asarray(x, dtype=np.int64)
        if not self.coeffs:
            res = np.zeros(xs.shape, dtype=np.int64)
            return F._out(res, x)
        d = self.degree
        if d <= 4 * len(self.coeffs) + 16:
            res = np.full(xs.shape, self.coeffs[d], dtype=np.int64)
            for k in range(d - 1, -1, -1):
                res = F.mul(res, xs)
                if k in self.coeffs:
                    res = F.add(res, self.coeffs[k])
        else:
            res = np.zeros(xs.shape, dtype=np.int64)
            for k, c in self.coeffs.items():
                res = F.add(res, F.mul(c, F.pow(xs, k)))
        return F._out(np.asarray(res, dtype=np.int64), x)

    # ring operations
    def _coerce(self, o) -> "Poly":
        if isinstance(o, Poly):
            if o.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {o.field!r}")
            return o
        return Poly.constant(self.field, int(o))

    def __add__(self, o):
        o = self._coerce(o)
        F = self.field
        out = dict(self.coeffs)
        for d, c in o.coeffs.items():
            out[d] = F.add(out.get(d, 0), c)
        return Poly(F, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, {d: self.field.neg(c) for d, c in self.coeffs.items()})

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        F = self.field
        out: dict[int, int] = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in o.coeffs.items():
                out[d1 + d2] = F.add(out.get(d1 + d2, 0), F.mul(c1, c2))
        return Poly(F, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = Poly.constant(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def compose(self, inner: "Poly") -> "Poly":
        """``self(inner(x))`` as a polynomial."""
        result = Poly(self.field)
        for k in range(self.degree, -1, -1):
            result = result * inner + self[k]
        return result

    def shift(self, c: int) -> "Poly":
        """``self(x + c)``."""
        return self.compose(Poly(self.field, {1: 1, 0: c}))

    def scale(self, c: int) -> "Poly":
        return Poly(self.field, {d: self.field.mul(v, c) for d, v in self.coeffs.items()})

    @classmethod
    def parse(cls, text: str, field: GF) -> "Poly":
        """Parse ``c*x^e + ...``; coefficients are element indices (decimal or 0x).

        ``*`` may be omitted (``2x^3``) and a leading ``-`` negates a term.
        """
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial literal")
        terms = re.findall(r"[+-]?[^+-]+", s)
        out: dict[int, int] = {}
        for t in terms:
            neg = t.startswith("-")
            t = t.lstrip("+-")
            m = re.fullmatch(r"(0x[0-9a-fA-F]+|\d+)?\*?(x(?:\^(\d+))?)?", t)
            if not m or (m.group(1) is None and m.group(2) is None):
                raise ValueError(f"bad term {t!r} in {text!r}")
            c = parse_element(m.group(1), field) if m.group(1) is not None else 1
            if m.group(2) is None:
                d = 0
            else:
                d = int(m.group(3)) if m.group(3) is not None else 1
            if neg:
                c = field.neg(c)
            out[d] = field.add(out.get(d, 0), c)
        return cls(field, out)


def poly_eval(f: Poly, x):
    """Evaluate ``f`` at an element index, an :class:`Elem`, or an index array."""
    if isinstance(x, Elem):
        if x.field != f.field:
            raise FieldMismatch(f"{f.field!r} vs {x.field!r}")
        return Elem(f.field, f(x.value))
    return f(x)


# ---------------------------------------------------------------------------
# linearized polynomials and kernels

class LinearizedPoly:
    """``L(x) = sum_i a_i x^(p^i)`` with ``addcoeffs = (a_0, a_1, ...)``."""

    def __init__(self, field: GF, addcoeffs: Sequence[int]):
        self.field = field
        self.addcoeffs = tuple(field._check(int(c)) for c in addcoeffs)

    def __call__(self, x):
        F = self.field
        acc = np.zeros(np.shape(x), dtype=np.int64)
        for i, a in enumerate(self.addcoeffs):
            if a:
                acc = F.add(acc, F.mul(a, F.pow(x, F.p ** i)))
        return F._out(acc, x)

    def to_poly(self) -> Poly:
        F = self.field
        out: dict[int, int] = {}
        for i, a in enumerate(self.addcoeffs):
            d = F.p ** i
            out[d] = F.add(out.get(d, 0), a)
        return Poly(F, out)

    def __repr__(self):
        return f"LinearizedPoly({self.to_poly()}, {self.field!r})"

    def matrix(self) -> np.ndarray:
        """n x n matrix over GF(p); column j holds the coordinates of L(p^j)."""
        F = self.field
        cols = [F.coeffs(self(F.p ** j)) for j in range(F.n)]
        return np.array(cols, dtype=np.int64).T.reshape(F.n, F.n)


def _nullspace_mod_p(M: np.ndarray, p: int) -> list[np.ndarray]:
    M = M.copy() % p
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i, c]), None)
        if piv is None:
            continue
        M[[r, piv]] = M[[piv, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, p)) % p
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-M[i, f]) % p
        basis.append(v)
    return basis


@dataclass(frozen=True)
class Kernel:
    elements: tuple[int, ...]
    dim: int

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return int(x) in self.elements


def linearized_kernel(L: LinearizedPoly) -> Kernel:
    """All roots of ``L`` in its field, via a GF(p) nullspace computation."""
    F = L.field
    basis = _nullspace_mod_p(L.matrix(), F.p)
    dim = len(basis)
    if dim == 0:
        return Kernel((0,), 0)
    B = np.array(basis, dtype=np.int64)
    combos = (np.arange(F.p ** dim, dtype=np.int64)[:, None]
              // np.array([F.p ** i for i in range(dim)], dtype=np.int64)[None, :]) % F.p
    vecs = (combos @ B) % F.p
    els = np.sort(vecs @ F._pw)
    return Kernel(tuple(int(e) for e in els), dim)


def kernel_by_scan(L: LinearizedPoly) -> tuple[int, ...]:
    """Roots of ``L`` by evaluating at every field element."""
    els = L.field.elements()
    return tuple(int(e) for e in els[np.asarray(L(els)) == 0])


# ---------------------------------------------------------------------------
# cubic root count criterion

def cubic_unique_root(a, b, field: GF):
    """Whether ``x^3 + a x + b`` has exactly one root in ``field`` (b != 0).

    ``a`` and ``b`` may be index arrays; the result then has their broadcast shape.
    """
    F = field
    if np.any(np.asarray(b) == 0):
        raise ZeroConstantTerm("cubic criterion requires b != 0")
    if F.p == 2:
        t = F.abs_trace(F.div(F.pow(a, 3), F.pow(b, 2)))
        res = np.asarray(t) != F.abs_trace(1)
    elif F.p == 3:
        aa, _ = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        res = (aa == 0) | (np.asarray(F.quadratic_character(F.neg(aa))) == -1)
    else:
        # -4a^3 - 27b^2
        disc = F.sub(F.neg(F.mul(F.scalar(4), F.pow(a, 3))), F.mul(F.scalar(27), F.pow(b, 2)))
        res = np.asarray(F.quadratic_character(disc)) == -1
    return bool(res) if res.ndim == 0 else res


def count_roots(f: Poly) -> int:
    els = f.field.elements()
    return int(np.count_nonzero(np.asarray(f(els)) == 0))


# ---------------------------------------------------------------------------
# subfield embedding

@functools.lru_cache(maxsize=None)
def embedding_table(source: GF, target: GF) -> np.ndarray:
    """Index table of the embedding GF(p^m) -> GF(p^(km)).

    The source generator is sent to the smallest-index root of the source
    modulus in the target, which pins the embedding down.
    """
    if source.p != target.p or target.n % source.n:
        raise NotASubfield(f"{source!r} does not embed in {target!r}")
    min_poly = Poly(target, {i: c for i, c in enumerate(source.modulus)})
    vals = np.asarray(min_poly(target.elements()))
    roots = np.nonzero(vals == 0)[0]
    if roots.size == 0:
        raise AssertionError("irreducible modulus must split in the extension")
    r = int(roots[0])
    powers = [target.pow(r, i) for i in range(source.n)]
    table = np.zeros(source.q, dtype=np.int64)
    for idx in range(source.q):
        acc = 0
        for c, pw in zip(source.coeffs(idx), powers):
            if c:
                acc = target.add(acc, target.mul(c, pw))
        table[idx] = acc
    table.setflags(write=False)
    return table


def subfield_embed(x, source: GF, target: GF):
    """Map an element (or array) of ``source`` into ``target``."""
    if isinstance(x, Elem):
        return Elem(target, int(embedding_table(source, target)[x.value]))
    return target._out(embedding_table(source, target)[np.asarray(x)], x)


def subfield_project(y, source: GF, target: GF):
    """Inverse of :func:`subfield_embed` on its image; -1 marks non-members."""
    table = embedding_table(source, target)
    inv = np.full(target.q, -1, dtype=np.int64)
    inv[table] = np.arange(source.q)
    return target._out(inv[np.asarray(y)], y)


def all_fields_up_to(max_q: int, primes: Iterable[int] | None = None):
    """Yield default-modulus fields with order <= max_q."""
    for p in (primes or (p for p in range(2, max_q + 1) if is_prime(p))):
        for n in itertools.count(1):
            if p ** n > max_q:
                break
            yield field_create(p, n)
