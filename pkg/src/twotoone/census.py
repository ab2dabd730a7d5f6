"""Value tables, fiber censuses and the k-to-1 predicates.

A :class:`MapTable` is the exchange format between all modules: the full
value table of a map between two finite fields in canonical index order.
Everything that claims a map is 2-to-1 is checked against
:func:`fiber_census`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from typing import Callable

import numpy as np

from . import kernels
from .errors import ImageOutsideCodomain, InvalidK, OutOfRange
from .gf_core import GF, parse_field


@dataclass(frozen=True, eq=False)
class MapTable:
    domain: GF
    codomain: GF
    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.int64)
        if v.ndim != 1 or v.shape[0] != self.domain.q:
            raise ValueError(f"table length {v.shape} does not match domain order {self.domain.q}")
        if v.size and (v.min() < 0 or v.max() >= self.codomain.q):
            raise ImageOutsideCodomain("table entry outside the codomain")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.shape[0]

    def __getitem__(self, x):
        return self.values[x]

    def __call__(self, x):
        return self.codomain._out(self.values[np.asarray(x)], x)

    def __eq__(self, other):
        return (isinstance(other, MapTable) and self.domain == other.domain
                and self.codomain == other.codomain
                and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((self.domain, self.codomain, self.values.tobytes()))

    def is_permutation(self) -> bool:
        return self.domain.q == self.codomain.q and np.unique(self.values).size == self.domain.q

    def then(self, other: "MapTable") -> "MapTable":
        """``other(self(x))``."""
        return MapTable(self.domain, other.codomain, other.values[self.values])

    def to_json(self) -> dict:
        return {"domain": self.domain.spec(), "codomain": self.codomain.spec(),
                "values": [int(v) for v in self.values]}

    @classmethod
    def from_json(cls, obj: dict | str) -> "MapTable":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(parse_field(obj["domain"]), parse_field(obj["codomain"]),
                   np.asarray(obj["values"], dtype=np.int64))


def evaluate(f, field: GF, xs) -> np.ndarray:
    """Values of ``f`` at the index array ``xs`` (vectorized when possible)."""
    xs = np.asarray(xs, dtype=np.int64)
    if isinstance(f, MapTable):
        return f.values[xs]
    if isinstance(f, np.ndarray):
        return np.asarray(f, dtype=np.int64)[xs]
    try:
        vals = np.asarray(f(xs), dtype=np.int64)
        if vals.shape != xs.shape:
            raise ValueError
        return vals
    except (TypeError, ValueError, IndexError):
        return np.array([int(f(int(x))) for x in xs.ravel()], dtype=np.int64).reshape(xs.shape)


def tabulate(f: Callable, domain: GF, codomain: GF | None = None) -> MapTable:
    """Evaluate ``f`` at every domain element.

    ``f`` may be a :class:`~twotoone.gf_core.Poly`, a
    :class:`~twotoone.gf_core.LinearizedPoly`, a :class:`MapTable`, or any
    callable.  Callables are first tried on the whole index array and
    evaluated point by point if that fails.
    """
    codomain = domain if codomain is None else codomain
    vals = evaluate(f, domain, domain.elements())
    if vals.size and (vals.min() < 0 or vals.max() >= codomain.q):
        raise ImageOutsideCodomain(f"image outside {codomain!r}")
    return MapTable(domain, codomain, vals)


def identity_table(field: GF) -> MapTable:
    return MapTable(field, field, field.elements())


def constant_table(field: GF, c: int = 0, codomain: GF | None = None) -> MapTable:
    return MapTable(field, codomain or field, np.full(field.q, c, dtype=np.int64))


# ---------------------------------------------------------------------------
# fiber census

@dataclass(frozen=True)
class FiberCensus:
    """Histogram ``fiber size -> number of codomain points with that size``.

    ``exceptional`` is the codomain point owning the only size-1 fiber, when
    there is exactly one such point.
    """

    histogram: dict[int, int]
    exceptional: int | None = None
    exceptional_fiber: tuple[int, ...] = field(default=())

    def to_json(self) -> dict:
        return {"histogram": {str(k): v for k, v in sorted(self.histogram.items())},
                "exceptional": self.exceptional}

    @property
    def domain_order(self) -> int:
        return sum(k * v for k, v in self.histogram.items())


def _values_and_codomain(F) -> tuple[np.ndarray, int]:
    if isinstance(F, MapTable):
        return F.values, F.codomain.q
    v = np.asarray(F, dtype=np.int64)
    return v, int(v.max()) + 1 if v.size else 0


def fiber_sizes(F) -> np.ndarray:
    """Fiber size of every codomain point (array indexed by codomain element)."""
    v, c = _values_and_codomain(F)
    return np.bincount(v, minlength=c)


def fiber_census(F) -> FiberCensus:
    """Census of a :class:`MapTable` (or a bare value array over an explicit point set)."""
    v, _ = _values_and_codomain(F)
    sizes = fiber_sizes(F)
    ks, cnt = np.unique(sizes, return_counts=True)
    hist = {int(k): int(c) for k, c in zip(ks, cnt)}
    ones = np.nonzero(sizes == 1)[0]
    exc, fib = None, ()
    if ones.size == 1:
        exc = int(ones[0])
        fib = tuple(int(i) for i in np.nonzero(v == exc)[0])
    return FiberCensus(hist, exc, fib)


@dataclass(frozen=True)
class Verdict:
    """Boolean result carrying a counterexample when false.

    ``witness`` is ``(codomain point, its fiber)``.
    """

    ok: bool
    witness: tuple[int, tuple[int, ...]] | None = None

    def __bool__(self):
        return bool(self.ok)


def _fiber_of(v: np.ndarray, b: int) -> tuple[int, ...]:
    return tuple(int(i) for i in np.nonzero(v == b)[0])


def is_two_to_one(F) -> Verdict:
    """Definitional 2-to-1 test.

    Even-size domain: every fiber has 0 or 2 points.  Odd-size domain:
    exactly one fiber has 1 point and all others have 0 or 2.
    """
    v, _ = _values_and_codomain(F)
    sizes = fiber_sizes(F)
    big = np.nonzero(sizes > 2)[0]
    if big.size:
        b = int(big[0])
        return Verdict(False, (b, _fiber_of(v, b)))
    ones = np.nonzero(sizes == 1)[0]
    allowed = 0 if v.shape[0] % 2 == 0 else 1
    if ones.size != allowed:
        b = int(ones[allowed]) if ones.size > allowed else None
        return Verdict(False, (b, _fiber_of(v, b)) if b is not None else None)
    return Verdict(True)


def is_k_to_1(F, k: int) -> Verdict:
    """Every nonempty fiber has ``k`` points, except one fiber of
    ``|domain| mod k`` points when ``k`` does not divide the domain size."""
    if k < 1:
        raise InvalidK(f"k must be >= 1, got {k}")
    v, _ = _values_and_codomain(F)
    sizes = fiber_sizes(F)
    rem = v.shape[0] % k
    odd = np.nonzero((sizes != 0) & (sizes != k))[0]
    if rem == 0:
        if odd.size:
            b = int(odd[0])
            return Verdict(False, (b, _fiber_of(v, b)))
        return Verdict(True)
    bad = [int(b) for b in odd if sizes[b] != rem]
    if bad:
        return Verdict(False, (bad[0], _fiber_of(v, bad[0])))
    if odd.size != 1:
        b = int(odd[1]) if odd.size > 1 else None
        return Verdict(False, (b, _fiber_of(v, b)) if b is not None else None)
    return Verdict(True)


def image_size(F) -> int:
    v, _ = _values_and_codomain(F)
    return int(np.unique(v).size)


def image(F) -> np.ndarray:
    v, _ = _values_and_codomain(F)
    return np.unique(v)


def census_moment(F, j: int) -> int:
    """Sum over codomain points of (fiber size)^j."""
    sizes = fiber_sizes(F).astype(object)
    return int(sum(int(s) ** j for s in sizes))


def batch_two_to_one(values: np.ndarray, codomain_size: int) -> np.ndarray:
    """Row-wise :func:`is_two_to_one` over a 2-D array of value tables."""
    return kernels.two_to_one_rows(values, codomain_size)


# ---------------------------------------------------------------------------
# counting 2-to-1 maps of GF(2^n)

def _sig3(x: Fraction) -> Decimal:
    ctx = Context(prec=3, rounding=ROUND_HALF_EVEN)
    return ctx.divide(Decimal(x.numerator), Decimal(x.denominator))


def format_sig3(d: Decimal) -> str:
    """``1.00``, ``50.3``, ``9.17e3``: fixed notation below 1000."""
    if d.adjusted() < 3:
        return f"{d:.{max(0, 2 - d.adjusted())}f}"
    mant = d.scaleb(-d.adjusted())
    return f"{mant:.2f}e{d.adjusted()}"


@dataclass(frozen=True)
class TwoToOneCount:
    n: int
    count: int
    bijections: int
    ratio: Fraction
    ratio_sig3: Decimal

    @property
    def ratio_text(self) -> str:
        return format_sig3(self.ratio_sig3)


def count_two_to_one_exact(n: int) -> TwoToOneCount:
    """Number of 2-to-1 self-maps of GF(2^n) and its ratio to (2^n)!."""
    if not 1 <= n <= 12:
        raise OutOfRange(f"n must be in [1, 12], got {n}")
    q, h = 1 << n, 1 << (n - 1)
    fq, fh = math.factorial(q), math.factorial(h)
    count = fq * fq // (2 ** h * fh * fh)
    ratio = Fraction(count, fq)
    return TwoToOneCount(n, count, fq, ratio, _sig3(ratio))


@dataclass(frozen=True)
class TwoToOneApprox:
    n: int
    log2_count: float
    log2_ratio: float
    count: float | None
    ratio: float | None


def count_two_to_one_approx(n: int) -> TwoToOneApprox:
    """Stirling estimates of the count and the ratio.

    ``count``/``ratio`` are None when the value does not fit in a float; the
    base-2 logarithms are always reported.
    """
    if n < 1:
        raise OutOfRange(f"n must be >= 1, got {n}")
    q, h = 2 ** n, 2 ** (n - 1)
    log2_count = n * q + h + 1 - q / math.log(2)
    log2_ratio = h - 0.5 * math.log2(math.pi * h)
    max_log = math.log2(np.finfo(float).max)

    def val(lg):
        return 2.0 ** lg if lg < max_log else None

    return TwoToOneApprox(n, log2_count, log2_ratio, val(log2_count), val(log2_ratio))


def brute_force_count(n: int) -> int:
    """Count 2-to-1 self-maps of GF(2^n) by enumerating all (2^n)^(2^n) maps."""
    if not 1 <= n <= 3:
        raise OutOfRange("brute force enumeration is limited to n <= 3")
    q = 1 << n
    return kernels.count_two_to_one_maps(q, q)


# ---------------------------------------------------------------------------
# seeded random tables for test corpora

RANDOM_KINDS = ("map", "permutation", "two_to_one")


def random_table(field: GF, rng: np.random.Generator, kind: str = "map") -> MapTable:
    """A uniformly random self-map of ``field`` of the given kind.

    ``two_to_one`` picks floor(q/2) image points, uses each twice (plus one
    singleton fiber when q is odd) and shuffles the assignment.
    """
    q = field.q
    if kind == "map":
        vals = rng.integers(0, q, size=q)
    elif kind == "permutation":
        vals = rng.permutation(q)
    elif kind == "two_to_one":
        pts = rng.choice(q, size=(q + 1) // 2, replace=False)
        vals = np.repeat(pts, 2)[:q]
        rng.shuffle(vals)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return MapTable(field, field, vals)
