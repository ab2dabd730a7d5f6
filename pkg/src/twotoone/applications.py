"""Bent, semi-bent, planar and permutation constructions from 2-to-1 maps.

Bivariate tables over GF(2^m) x GF(2^m) use the index ``x * 2^m + y``.  Walsh
values of Boolean tables are taken with the bit dot product on that index;
bent and semi-bent verdicts are the same for any nondegenerate inner product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .census import MapTable, image_size, is_two_to_one, tabulate
from .errors import (BadPhi, BadSplit, EvenCharacteristic, HypothesisFailed, NotTwoToOne,
                     OddDimension)
from .gf_core import GF, Poly, field_create
from .walsh import boolean_walsh


@dataclass(frozen=True)
class BooleanTable:
    n: int
    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.int64)
        if v.shape != (1 << self.n,):
            raise ValueError(f"need {1 << self.n} bits, got shape {v.shape}")
        if v.size and (v.min() < 0 or v.max() > 1):
            raise ValueError("Boolean table entries must be 0 or 1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __eq__(self, other):
        return isinstance(other, BooleanTable) and self.n == other.n and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.n, self.values.tobytes()))

    def to_hex(self) -> str:
        """Bits in index order, most significant first, right-padded to whole hex digits."""
        bits = "".join(str(int(b)) for b in self.values)
        bits += "0" * (-len(bits) % 4)
        return "".join(f"{int(bits[i:i + 4], 2):x}" for i in range(0, len(bits), 4))

    @classmethod
    def from_hex(cls, n: int, s: str) -> "BooleanTable":
        size = 1 << n
        if len(s) != -(-size // 4):
            raise ValueError(f"need {-(-size // 4)} hex digits for n={n}")
        bits = "".join(f"{int(c, 16):04b}" for c in s)[:size]
        return cls(n, np.array([int(b) for b in bits], dtype=np.int64))

    def walsh(self) -> np.ndarray:
        return boolean_walsh(self.values)


@dataclass(frozen=True)
class BivariateMap:
    """Table over GF(2^m) x GF(2^m); ``codomain`` is GF(2^m) or GF(2)."""

    m: int
    values: np.ndarray
    codomain: GF

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.int64)
        if v.shape != (1 << (2 * self.m),):
            raise ValueError(f"need {1 << (2 * self.m)} entries, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def at(self, x, y):
        return self.values[np.asarray(x) * (1 << self.m) + np.asarray(y)]

    def as_boolean(self) -> BooleanTable:
        if self.codomain.q != 2:
            raise ValueError("codomain is not GF(2)")
        return BooleanTable(2 * self.m, self.values)

    def to_json(self) -> dict:
        return {"bivariate_m": self.m, "domain": field_create(2, self.m).spec(),
                "codomain": self.codomain.spec(), "values": [int(v) for v in self.values]}


def _grid(m: int) -> tuple[GF, np.ndarray, np.ndarray]:
    K = field_create(2, m)
    xs, ys = np.divmod(np.arange(K.q * K.q, dtype=np.int64), K.q)
    return K, xs, ys


# ---------------------------------------------------------------------------
# spectral verdicts

def _as_bits(f) -> BooleanTable:
    if isinstance(f, BooleanTable):
        return f
    if isinstance(f, BivariateMap):
        return f.as_boolean()
    v = np.asarray(f, dtype=np.int64)
    return BooleanTable(int(v.shape[0]).bit_length() - 1, v)


def is_bent(f) -> bool:
    f = _as_bits(f)
    if f.n % 2:
        raise OddDimension(f"n={f.n} is odd")
    return bool(np.all(np.abs(f.walsh()) == 1 << (f.n // 2)))


def is_semibent(f) -> bool:
    f = _as_bits(f)
    if f.n % 2:
        raise OddDimension(f"n={f.n} is odd")
    w = np.abs(f.walsh())
    return bool(np.all((w == 0) | (w == 1 << ((f.n + 2) // 2))))


# ---------------------------------------------------------------------------
# class H

def class_h_build(psi: MapTable, mu: int) -> BivariateMap:
    """``g(x, y) = Tr(x psi(y/x))`` for x != 0 and ``Tr(mu y)`` for x = 0."""
    K, xs, ys = _grid(psi.domain.n)
    out = np.empty(xs.shape, dtype=np.int64)
    nz = xs != 0
    ratio = K.mul(ys[nz], K.pow(xs[nz], K.q - 2))
    out[nz] = K.abs_trace(K.mul(xs[nz], psi.values[ratio]))
    out[~nz] = K.abs_trace(K.mul(int(mu), ys[~nz]))
    return BivariateMap(K.n, out, field_create(2))


def class_h_conditions(psi: MapTable, mu: int) -> tuple[bool, bool]:
    """(G = psi + mu z permutes, G + beta z is 2-to-1 for every beta != 0)."""
    K = psi.domain
    zs = K.elements()
    G = K.add(psi.values, K.mul(int(mu), zs))
    cond1 = np.unique(G).size == K.q
    cond2 = all(is_two_to_one(K.add(G, K.mul(int(b), zs)))
                for b in K.nonzero())
    return bool(cond1), bool(cond2)


def class_h_check(psi: MapTable, mu: int) -> tuple[bool, bool]:
    """(is_bent(g), cond1 and cond2); the two must agree."""
    c1, c2 = class_h_conditions(psi, mu)
    return is_bent(class_h_build(psi, mu)), c1 and c2


# ---------------------------------------------------------------------------
# vectorial bent

@dataclass(frozen=True)
class VectorialBent:
    map: BivariateMap
    k: int
    hypothesis_ok: bool
    good_b: tuple[int, ...]
    bent: bool

    @property
    def single_b_would_suffice(self) -> bool:
        """Some but not all b != 0 make z^k + bz 2-to-1, yet F is vectorial bent."""
        return self.bent and bool(self.good_b) and not self.hypothesis_ok


def is_vectorial_bent(F: BivariateMap) -> bool:
    """Every nonzero component Tr(v F) is bent."""
    K = F.codomain
    for v in K.nonzero():
        comp = K.abs_trace(K.mul(int(v), F.values))
        if not is_bent(BooleanTable(2 * F.m, comp)):
            return False
    return True


def vectorial_bent_build(k: int, m: int, strict: bool = True) -> VectorialBent:
    """``F(x, y) = y^k x^(k(2^m - 2) + 1)`` over GF(2^m)^2.

    The hypothesis is that z^k + bz is 2-to-1 for every b != 0 (checked
    along with gcd(k, 2^m - 1) = 1).  ``good_b`` lists the b that work.
    """
    K, xs, ys = _grid(m)
    if math.gcd(k, K.q - 1) != 1:
        raise HypothesisFailed("gcd", detail=f"gcd({k}, {K.q - 1}) != 1")
    zs = K.elements()
    zk = K.pow(zs, k)
    good = tuple(int(b) for b in K.nonzero() if is_two_to_one(K.add(zk, K.mul(int(b), zs))))
    ok = len(good) == K.q - 1
    vals = K.mul(K.pow(ys, k), K.pow(xs, k * (K.q - 2) + 1))
    F = BivariateMap(m, vals, K)
    result = VectorialBent(F, k, ok, good, is_vectorial_bent(F))
    if strict and not ok:
        raise HypothesisFailed("z^k+bz", result=result,
                               detail=f"2-to-1 for {len(good)} of {K.q - 1} values of b")
    if ok and not result.bent:
        raise AssertionError(f"k={k}, m={m}: hypothesis holds but F is not vectorial bent")
    return result


# ---------------------------------------------------------------------------
# Maiorana-McFarland

def mm_build(pi: MapTable, g=None) -> BooleanTable:
    """``f(x, y) = Tr(x pi(y)) + g(y)``; ``g`` is a bit array over GF(2^m) or None."""
    K, xs, ys = _grid(pi.domain.n)
    bits = K.abs_trace(K.mul(xs, pi.values[ys]))
    if g is not None:
        gv = g.values if isinstance(g, BooleanTable) else np.asarray(g, dtype=np.int64)
        bits = bits ^ gv[ys]
    return BooleanTable(2 * K.n, bits)


# ---------------------------------------------------------------------------
# planar and Dembowski-Ostrom

def _require_odd(field: GF):
    if field.p == 2:
        raise EvenCharacteristic("planarity needs odd characteristic")


def is_planar(F: MapTable) -> bool:
    """Every difference map c -> F(c + a) - F(c), a != 0, is a bijection."""
    K = F.domain
    _require_odd(K)
    xs = K.elements()
    for a in K.nonzero():
        d = K.sub(F.values[K.add(xs, int(a))], F.values)
        if np.unique(d).size != K.q:
            return False
    return True


def planar_image_check(F: MapTable) -> bool:
    """For planar F: (2-to-1) == (image size is (q + 1) / 2)."""
    if not is_planar(F):
        raise ValueError("map is not planar")
    q = F.domain.q
    return bool(is_two_to_one(F)) == (image_size(F) == (q + 1) // 2)


def _p_powers_up_to(p: int, limit: int) -> list[int]:
    out, v = [], 1
    while v <= limit:
        out.append(v)
        v *= p
    return out


def is_dembowski_ostrom(P: Poly) -> bool:
    """Every exponent with a nonzero coefficient is p^i + p^j (i = j allowed)."""
    if P.is_zero():
        return False
    p = P.field.p
    pw = _p_powers_up_to(p, P.degree)
    sums = {a + b for a in pw for b in pw}
    return all(e in sums for e in P.coeffs)


def do_planar_equiv(P: Poly) -> tuple[bool, bool]:
    """(is_planar, is_two_to_one) of a Dembowski-Ostrom polynomial."""
    _require_odd(P.field)
    if not is_dembowski_ostrom(P):
        raise ValueError("not a Dembowski-Ostrom polynomial")
    T = tabulate(P, P.field)
    return is_planar(T), bool(is_two_to_one(T))


# ---------------------------------------------------------------------------
# permutation from a 2-to-1 map

@dataclass(frozen=True)
class LiftData:
    S1: tuple[int, ...]
    S2: tuple[int, ...]
    phi: dict[int, int]


def canonical_lift_data(F: MapTable) -> LiftData:
    """S1 takes the smaller-index preimage of each image point; phi matches the
    image and its complement in increasing index order."""
    if F.domain.q % 2 or not is_two_to_one(F):
        raise NotTwoToOne("need a 2-to-1 map on an even-order field")
    order = np.argsort(F.values, kind="stable")
    S1 = tuple(sorted(int(x) for x in order[0::2]))
    S2 = tuple(sorted(int(x) for x in order[1::2]))
    im = np.unique(F.values)
    comp = np.setdiff1d(np.arange(F.codomain.q), im)
    return LiftData(S1, S2, {int(a): int(b) for a, b in zip(im, comp)})


def permutation_from_two_to_one(F: MapTable, data: LiftData | None = None) -> MapTable:
    """``G = F`` on S1 and ``phi o F`` on S2; a permutation of the field."""
    if F.domain.q % 2 or not is_two_to_one(F):
        raise NotTwoToOne("need a 2-to-1 map on an even-order field")
    data = canonical_lift_data(F) if data is None else data
    q = F.domain.q
    S1, S2 = np.asarray(data.S1, dtype=np.int64), np.asarray(data.S2, dtype=np.int64)
    if (len(S1) + len(S2) != q or np.unique(np.concatenate([S1, S2])).size != q
            or np.unique(F.values[S1]).size != q // 2 or np.unique(F.values[S2]).size != q // 2):
        raise BadSplit("S1, S2 must partition the field and each map onto Im(F)")
    im = set(int(v) for v in np.unique(F.values))
    if (set(data.phi) != im or len(set(data.phi.values())) != len(im)
            or set(data.phi.values()) & im or max(data.phi.values(), default=0) >= F.codomain.q):
        raise BadPhi("phi must be a bijection from Im(F) onto its complement")
    lut = np.zeros(F.codomain.q, dtype=np.int64)
    for a, b in data.phi.items():
        lut[a] = b
    vals = F.values.copy()
    vals[S2] = lut[F.values[S2]]
    G = MapTable(F.domain, F.codomain, vals)
    if not G.is_permutation():
        raise AssertionError("lifted map is not a permutation")
    return G
