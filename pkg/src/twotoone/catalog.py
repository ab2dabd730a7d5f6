"""Known families of 2-to-1 maps and decision procedures for them.

Each generator returns a :class:`~twotoone.constructions.Construction`
whose certificate records the family's applicability conditions and the
census verdict.  :data:`FAMILIES` collects them with a parameter grid for
sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

import numpy as np

from .census import MapTable, is_k_to_1, is_two_to_one, tabulate
from .constructions import Construction, _Checks, _finish
from .errors import (BadIndexSet, EvenM, GcdFailed, HypothesisFailed,
                     NoPiExists, NotNormalized, OddCharacteristic, OddK,
                     OrderConditionFailed, UnsupportedDegree, ZeroParameter)
from .gf_core import (GF, LinearizedPoly, Poly, field_create, is_prime, linearized_kernel,
                      multiplicative_order, subfield_embed)


# ---------------------------------------------------------------------------
# linearized maps and monomials

def linearized_two_to_one(L: LinearizedPoly) -> bool:
    """A linearized map is 2-to-1 iff its kernel has exactly two elements."""
    return len(linearized_kernel(L)) == 2


def l_i_build(I: Iterable[int], n: int, strict: bool = True) -> tuple[LinearizedPoly, Construction]:
    """``L_I(x) = sum_{i in I} (x^(2^i) + x^(2^(n-i)))`` over GF(2^n), n an odd prime."""
    I = sorted(set(int(i) for i in I))
    if not is_prime(n) or n == 2:
        raise OrderConditionFailed(f"n={n} must be an odd prime")
    if not I or I[0] < 1 or I[-1] > (n - 1) // 2:
        raise BadIndexSet(f"I must be a nonempty subset of [1, {(n - 1) // 2}]")
    o = multiplicative_order(2, n)
    r = (n - 1) // 2
    if not (o == n - 1 or (r % 2 == 1 and o == r)):
        raise OrderConditionFailed(f"ord_{n}(2) = {o} satisfies neither condition")
    F = field_create(2, n)
    coeffs = [0] * n
    for i in I:
        coeffs[i] ^= 1
        coeffs[n - i] ^= 1
    L = LinearizedPoly(F, coeffs)
    c = _Checks()
    ker = linearized_kernel(L)
    c.add("kernel {0,1}", ker.elements == (0, 1), f"kernel is {ker.elements}")
    cons = _finish("l_i", {"n": n, "I": I}, c, tabulate(L, F), strict)
    return L, cons


def gold_derivative_build(k: int, m: int, a: int, strict: bool = True) -> Construction:
    """``G_{k,a}(x) = F_k(x+a) + F_k(x)``, F_k = x^(2^k+1) + x^(2^k+2^m), over GF(2^(2m))."""
    F = field_create(2, 2 * m)
    if not 0 < k < m:
        raise ValueError("need 0 < k < m")
    c = _Checks()
    c.add("gcd", math.gcd(k, m) == 1, f"gcd({k}, {m}) != 1")
    c.add("a in subfield", not F.in_subfield(int(a), m), "a lies in GF(2^m)")
    Fk = Poly(F, {2 ** k + 1: 1, 2 ** k + 2 ** m: 1})
    xs = F.elements()
    vals = F.add(Fk(xs ^ int(a)), Fk(xs))
    return _finish("gold_derivative", {"k": k, "m": m, "a": int(a)}, c, MapTable(F, F, vals), strict)


def monomial_two_to_one(d: int, field: GF) -> bool:
    """``a x^d`` (a != 0) is 2-to-1 iff gcd(d, q-1) = 2."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return math.gcd(d, field.q - 1) == 2


def monomial_build(d: int, field: GF, a: int = 1, strict: bool = True) -> Construction:
    if a == 0:
        raise ZeroParameter("a must be nonzero")
    c = _Checks()
    c.add("gcd=2", monomial_two_to_one(d, field), f"gcd({d}, {field.q - 1}) != 2")
    table = tabulate(Poly.monomial(field, d, a), field)
    return _finish("monomial", {"field": field, "d": d, "a": a}, c, table, strict)


MASCHIETTI_CASES = ("singer", "segre", "glynn1", "glynn2")


def maschietti_exponent(case: str, m: int) -> int:
    if m % 2 == 0:
        raise EvenM(f"m={m} must be odd")
    sigma = (m + 1) // 2
    if case == "singer":
        return 2
    if case == "segre":
        return 6
    if case == "glynn1":
        # 4 is invertible mod odd m, so pi always exists
        pi = next((p for p in range(1, max(m, 2)) if (4 * p) % m == 1 % m), None)
        if pi is None:
            raise NoPiExists(f"no pi with 4 pi = 1 mod {m}")
        return 2 ** sigma + 2 ** pi
    if case == "glynn2":
        return 3 * 2 ** sigma + 4
    raise ValueError(f"unknown case {case!r}")


def maschietti_build(case: str, m: int, strict: bool = True) -> tuple[int, Construction]:
    """``x^k + x`` over GF(2^m) for the four hyperoval exponents (m odd)."""
    k = maschietti_exponent(case, m)
    F = field_create(2, m)
    c = _Checks()
    c.add("m odd", m % 2 == 1)
    table = tabulate(Poly(F, {k: 1, 1: 1}), F)
    return k, _finish("maschietti", {"case": case, "m": m, "k": k}, c, table, strict)


# ---------------------------------------------------------------------------
# degree <= 4

@dataclass(frozen=True)
class Classification:
    two_to_one: bool
    rule: str

    def __bool__(self):
        return self.two_to_one


def normalize(f: Poly) -> Poly:
    """Normal form of f under f -> b f(x + c) + d (b != 0).

    Monic, zero constant term, and the x^(n-1) coefficient removed by a shift
    when gcd(p, n) = 1.
    """
    F = f.field
    n = f.degree
    if n < 1:
        raise UnsupportedDegree("constant polynomials have no normal form")
    g = f
    if math.gcd(F.p, n) == 1 and g[n - 1]:
        c = F.neg(F.div(g[n - 1], F.mul(F.scalar(n), g[n])))
        g = g.shift(c)
    g = g.scale(F.inv(g[n]))
    return g - g[0]


def is_normalized(f: Poly) -> bool:
    return f.degree >= 1 and f == normalize(f)


def _require_form(f: Poly):
    F, n = f.field, f.degree
    if n < 1 or f[n] != 1 or f[0] != 0:
        raise NotNormalized("need a monic polynomial with zero constant term")
    # the quartic theorems assume the x^3 term removed when the shift exists
    if n == 4 and math.gcd(F.p, 4) == 1 and f[3] != 0:
        raise NotNormalized("quartic in odd characteristic must have no x^3 term")


_F5_CUBICS = {(0, 2), (0, 3), (1, 4), (4, 4), (2, 1), (3, 1), (1, 0), (2, 0), (3, 0), (4, 0)}
_F5_QUARTICS = {(1, 2), (1, 3), (4, 1), (4, 4), (2, 0), (3, 0)}
_F7_QUARTICS = {(0, 2), (0, 5)}


def classify_low_degree(f: Poly, field: GF | None = None) -> Classification:
    """Decide 2-to-1-ness of a monic, zero-constant polynomial of degree <= 4.

    Quartics in odd characteristic must also have no x^3 term.  Cases that no
    classification covers (cubics over q < 5, quartics over GF(3)) fall back
    to the census and say so in ``rule``.
    """
    F = f.field if field is None else field
    n = f.degree
    if n > 4:
        raise UnsupportedDegree(f"degree {n} > 4")
    _require_form(f)
    p, m, q = F.p, F.n, F.q
    if n == 1:
        return Classification(False, "deg1: x is a permutation")
    if n == 2:
        if p == 2:
            return Classification(f[1] != 0, "deg2 char2: 2-to-1 iff a1 != 0")
        return Classification(True, "deg2 odd char: always")
    if n == 3:
        if q >= 7:
            return Classification(False, "deg3 q>=7: never")
        if q == 5:
            return Classification((f[2], f[1]) in _F5_CUBICS, "deg3 q=5: list of ten")
        return Classification(bool(is_two_to_one(tabulate(f, F))), "deg3 q<5: census (no theorem)")
    a3, a2, a1 = f[3], f[2], f[1]
    if p == 2:
        if a3 == 0 and a1 == 0:
            return Classification(a2 != 0, "deg4 char2 case1: a3=a1=0, a2!=0")
        if a3 == 0:
            t = F.abs_trace(F.div(F.pow(a2, 3), F.pow(a1, 2)))
            return Classification(t != F.abs_trace(1), "deg4 char2 case2: Tr(a2^3/a1^2) != Tr(1)")
        return Classification(m % 2 == 1 and F.mul(a2, a2) == F.mul(a1, a3),
                              "deg4 char2 case3: m odd, a2^2 = a1 a3")
    if p == 3:
        if m == 1:
            return Classification(bool(is_two_to_one(tabulate(f, F))), "deg4 q=3: census (no theorem)")
        return Classification(a2 == 0 and a1 == 0 and m % 2 == 1, "deg4 char3: a2=a1=0, m odd")
    if a2 == 0 and a1 == 0:
        return Classification(q % 4 == 3, "deg4 p>=5 case1: x^4, q = 3 mod 4")
    if q == 5:
        return Classification((a2, a1) in _F5_QUARTICS, "deg4 q=5 list")
    if q == 7:
        return Classification((a2, a1) in _F7_QUARTICS, "deg4 q=7 list")
    return Classification(False, "deg4 p>=5: only x^4 outside q in {5, 7}")


def normalized_polys(field: GF, degree: int) -> Iterator[Poly]:
    """All polynomials of the given degree in the form accepted by
    :func:`classify_low_degree` (monic, zero constant, and no x^3 term for
    odd-characteristic quartics)."""
    q = field.q
    free = list(range(1, degree))
    if degree == 4 and field.p != 2:
        free.remove(3)
    for coeffs in np.ndindex(*([q] * len(free))):
        terms = {degree: 1}
        terms.update({d: int(c) for d, c in zip(free, coeffs)})
        yield Poly(field, terms)


def f5_cubics() -> list[Poly]:
    """Two-to-one monic cubics x^3 + a2 x^2 + a1 x over GF(5), by exhaustive census."""
    F = field_create(5)
    return [f for f in normalized_polys(F, 3) if is_two_to_one(tabulate(f, F))]


# ---------------------------------------------------------------------------
# Dickson polynomials

def dickson_eval(n: int, a, x, field: GF):
    """``D_n(x, a)`` by D_0 = 2, D_1 = x, D_k = x D_(k-1) - a D_(k-2).

    ``a`` and ``x`` may be index arrays (broadcast together).
    """
    F = field
    if n < 0:
        raise ValueError("n must be >= 0")
    xa, aa = np.broadcast_arrays(np.asarray(x, dtype=np.int64), np.asarray(a, dtype=np.int64))
    d0 = np.full(xa.shape, F.scalar(2), dtype=np.int64)
    if n == 0:
        return F._out(d0, x, a)
    d1 = xa.copy()
    for _ in range(n - 1):
        d0, d1 = d1, F.sub(F.mul(xa, d1), F.mul(aa, d0))
    return F._out(d1, x, a)


def dickson_waring(n: int, a: int, field: GF) -> Poly:
    """``D_n(x, a)`` as a polynomial from the closed-form coefficient sum.

    The coefficient of x^(n-2i) is n/(n-i) * C(n-i, i) * (-a)^i.
    """
    F = field
    if n < 1:
        raise ValueError("n must be >= 1")
    terms = {}
    for i in range(n // 2 + 1):
        coef = n * math.comb(n - i, i) // (n - i)
        c = F.mul(F.scalar(coef), F.pow(F.neg(a), i))
        if c:
            terms[n - 2 * i] = c
    return Poly(F, terms)


def dickson_e(n: int, field: GF) -> int:
    return math.gcd(n, field.q ** 2 - 1)


def dickson_build(n: int, a: int, field: GF, strict: bool = True) -> Construction:
    """``D_n(x, a)`` over GF(q), certified only when e = gcd(n, q^2 - 1) is 1 or 2.

    For e = 1 the certificate is for a permutation, not a 2-to-1 map; the
    certificate's census field always holds the raw fiber histogram.
    """
    F = field
    if a == 0:
        raise ZeroParameter("a must be nonzero")
    e = dickson_e(n, F)
    table = MapTable(F, F, dickson_eval(n, a, F.elements(), F))
    c = _Checks()
    c.add("e=2", e == 2, f"e = {e}")
    return _finish("dickson", {"field": F, "n": n, "a": a, "e": e}, c, table, strict)


def dickson_verdict(n: int, a: int, field: GF) -> tuple[int, bool | None]:
    """``(e, census agrees with e-to-1)``; the second entry is None for e > 2."""
    e = dickson_e(n, field)
    vals = dickson_eval(n, a, field.elements(), field)
    if e > 2:
        return e, None
    return e, bool(is_k_to_1(vals, e))


def reversed_dickson_equivalence(n: int, m: int) -> tuple[bool, bool]:
    """``(D_n(1, x) permutes GF(2^m), y -> y^n + (1+y)^n is 2-to-1 on GF(2^m) u V)``.

    V = {x in GF(2^(2m)) : x^(2^m) = 1 + x}; GF(2^m) sits in GF(2^(2m)) via the
    pinned subfield embedding.
    """
    Fm = field_create(2, m)
    F2 = field_create(2, 2 * m)
    is_pp = np.unique(dickson_eval(n, Fm.elements(), 1, Fm)).size == Fm.q
    xs = F2.elements()
    V = xs[F2.pow(xs, 2 ** m) == F2.add(xs, 1)]
    U = np.concatenate([subfield_embed(Fm.elements(), Fm, F2), V])
    vals = F2.add(F2.pow(U, n), F2.pow(F2.add(U, 1), n))
    return bool(is_pp), bool(is_two_to_one(vals))


# ---------------------------------------------------------------------------
# MCM and trace families

def mcm_build(k: int, m: int, strict: bool = True) -> Construction:
    """``f(x) = T_k(x)^(2^k+1) / x^(2^k)`` over GF(2^m), f(0) = 0."""
    if k % 2:
        raise OddK(f"k={k} must be even")
    if math.gcd(k, m) != 1:
        raise GcdFailed(f"gcd({k}, {m}) != 1")
    F = field_create(2, m)
    xs = F.elements()
    T = np.zeros(F.q, dtype=np.int64)
    for i in range(k):
        T = F.add(T, F.pow(xs, 2 ** i))
    num = F.pow(T, 2 ** k + 1)
    nz = xs != 0
    vals = np.zeros(F.q, dtype=np.int64)
    vals[nz] = F.div(num[nz], F.pow(xs[nz], 2 ** k))
    c = _Checks()
    c.add("k even, gcd(k,m)=1", True)
    return _finish("mcm", {"k": k, "m": m}, c, MapTable(F, F, vals), strict)


def gamma_delta_conditions(F: GF, i: int, gamma: int, delta: int) -> tuple[bool, bool]:
    """(delta^(2^i-1) = gamma^(1-2^(2i)),  Tr(delta gamma^(2^i+1)) = 1)."""
    if gamma == 0:
        return False, False
    rel = F.pow(delta, 2 ** i - 1) == F.pow(gamma, 1 - 2 ** (2 * i))
    tr = F.abs_trace(F.mul(delta, F.pow(gamma, 2 ** i + 1))) == 1
    return bool(rel), bool(tr)


def trace_family_build(variant: str, field: GF, strict: bool = True, **params) -> Construction:
    """Trace-based maps.

    ``gamma-delta`` (i, gamma, delta): F(y) = y + gamma Tr(delta y^(2^i+1)).
    ``power-sum`` (s, t, gamma): F(x) = x^s + gamma Tr(x^t), needing
    Tr(gamma) = 1.  The power-sum claim is not enforced: its certificate
    carries the hypothesis results and the census verdict, and
    ``params['claim_holds']`` records whether the census agrees with the
    unconditional 2-to-1 claim.
    """
    F = field
    if F.p != 2:
        raise OddCharacteristic("trace families live in characteristic 2")
    xs = F.elements()
    c = _Checks()
    if variant == "gamma-delta":
        i, gamma, delta = int(params["i"]), int(params["gamma"]), int(params["delta"])
        c.add("i range", 0 <= i < F.n and i != 0 and 2 * i != F.n, f"i={i} not allowed")
        rel, tr = gamma_delta_conditions(F, i, gamma, delta)
        c.add("delta-gamma relation", rel, "delta^(2^i-1) != gamma^(1-2^(2i))")
        c.add("trace condition", tr, "Tr(delta gamma^(2^i+1)) != 1")
        vals = F.add(xs, F.mul(gamma, F.abs_trace(F.mul(delta, F.pow(xs, 2 ** i + 1)))))
        return _finish("trace_gamma_delta", {"field": F, "i": i, "gamma": gamma, "delta": delta},
                       c, MapTable(F, F, vals), strict)
    if variant == "power-sum":
        s, t, gamma = int(params["s"]), int(params["t"]), int(params["gamma"])
        if s < 1 or t < 1:
            raise ValueError("s and t must be positive")
        c.add("Tr(gamma)=1", gamma != 0 and F.abs_trace(gamma) == 1, "Tr(gamma) != 1")
        vals = F.add(F.pow(xs, s), F.mul(gamma, F.abs_trace(F.pow(xs, t))))
        table = MapTable(F, F, vals)
        verdict = bool(is_two_to_one(table))
        info = {"field": F, "s": s, "t": t, "gamma": gamma,
                "claim_holds": verdict if c.ok else None}
        # reported, not enforced: the census is the verdict for this family
        from .census import fiber_census
        from .constructions import ConstructionCertificate
        cert = ConstructionCertificate("trace_power_sum", info, list(c.items), verdict,
                                       fiber_census(table))
        result = Construction(table, cert)
        if strict and not c.ok:
            raise HypothesisFailed(cert.failed, result=result)
        return result
    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# registry

@dataclass
class FamilyEntry:
    name: str
    schema: dict[str, str]
    build: Callable[..., Construction]
    predicate: Callable[..., bool]
    grid: Callable[[int], Iterator[dict]]
    description: str = ""
    # False when the predicate is a literal statement the census is known to contradict
    enforced: bool = True

    def run(self, params: dict) -> dict:
        """Predicate and census verdict for one parameter tuple."""
        pred = bool(self.predicate(**params))
        cons = self.build(strict=False, **params)
        return {"params": params, "predicate": pred,
                "census": bool(cons.certificate.census_two_to_one)}


def _maschietti_grid(max_q):
    for m in (3, 5, 7, 9, 11):
        if 2 ** m > max_q:
            break
        for case in MASCHIETTI_CASES:
            yield {"case": case, "m": m}


def _l_i_grid(max_q):
    from itertools import combinations
    for n in (3, 5, 7, 11, 13):
        if 2 ** n > max_q:
            break
        r = (n - 1) // 2
        o = multiplicative_order(2, n)
        if not (o == n - 1 or (r % 2 == 1 and o == r)):
            continue
        for size in range(1, r + 1):
            for I in combinations(range(1, r + 1), size):
                yield {"I": list(I), "n": n}


def _gold_grid(max_q):
    for m in range(2, 6):
        if 4 ** m > max_q:
            break
        F = field_create(2, 2 * m)
        for k in range(1, m):
            for a in F.elements():
                yield {"k": k, "m": m, "a": int(a)}


def _monomial_grid(max_q):
    from .gf_core import all_fields_up_to
    for F in all_fields_up_to(max_q):
        for d in range(1, F.q):
            yield {"d": d, "p": F.p, "n": F.n}


def _mcm_grid(max_q):
    for m in range(2, 20):
        if 2 ** m > max_q:
            break
        for k in range(2, 2 * m, 2):
            if math.gcd(k, m) == 1:
                yield {"k": k, "m": m}


def _dickson_grid(max_q):
    from .gf_core import all_fields_up_to
    for F in all_fields_up_to(max_q):
        if F.p == 2:
            continue
        # all a for small q; a in {1, generator} beyond that
        avals = range(1, F.q) if F.q <= 27 else (1, F.generator)
        for n in range(1, 13):
            for a in avals:
                yield {"n": n, "a": a, "p": F.p, "fn": F.n}


def _gamma_delta_grid(max_q):
    for n in range(3, 9):
        if 2 ** n > max_q:
            break
        F = field_create(2, n)
        for i in range(1, n):
            if 2 * i == n:
                continue
            for gamma in range(1, F.q):
                for delta in range(1, F.q):
                    if all(gamma_delta_conditions(F, i, gamma, delta)):
                        yield {"n": n, "i": i, "gamma": gamma, "delta": delta}


def _power_sum_grid(max_q):
    for n in range(2, 9):
        if 2 ** n > max_q:
            break
        F = field_create(2, n)
        gamma = next(int(g) for g in F.nonzero() if F.abs_trace(int(g)) == 1)
        for s in range(1, F.q):
            for t in range(1, F.q):
                yield {"n": n, "s": s, "t": t, "gamma": gamma}


def _gd_build(n, i, gamma, delta, strict=True):
    return trace_family_build("gamma-delta", field_create(2, n), strict, i=i, gamma=gamma, delta=delta)


def _ps_build(n, s, t, gamma, strict=True):
    return trace_family_build("power-sum", field_create(2, n), strict, s=s, t=t, gamma=gamma)


FAMILIES: dict[str, FamilyEntry] = {
    "maschietti": FamilyEntry(
        "maschietti", {"case": "singer|segre|glynn1|glynn2", "m": "odd int"},
        lambda case, m, strict=True: maschietti_build(case, m, strict)[1],
        lambda case, m: m % 2 == 1, _maschietti_grid, "x^k + x over GF(2^m)"),
    "l_i": FamilyEntry(
        "l_i", {"I": "list of ints in [1,(n-1)/2]", "n": "odd prime"},
        lambda I, n, strict=True: l_i_build(I, n, strict)[1],
        lambda I, n: True, _l_i_grid, "sum of x^(2^i) + x^(2^(n-i))"),
    "gold_derivative": FamilyEntry(
        "gold_derivative", {"k": "int", "m": "int", "a": "element of GF(2^(2m))"},
        lambda k, m, a, strict=True: gold_derivative_build(k, m, a, strict),
        lambda k, m, a: math.gcd(k, m) == 1 and not field_create(2, 2 * m).in_subfield(a, m),
        _gold_grid, "derivatives of x^(2^k+1) + x^(2^k+2^m)"),
    "monomial": FamilyEntry(
        "monomial", {"d": "int", "p": "prime", "n": "int"},
        lambda d, p, n, strict=True: monomial_build(d, field_create(p, n), strict=strict),
        lambda d, p, n: monomial_two_to_one(d, field_create(p, n)),
        _monomial_grid, "x^d"),
    "mcm": FamilyEntry(
        "mcm", {"k": "even int", "m": "int coprime to k"},
        lambda k, m, strict=True: mcm_build(k, m, strict),
        lambda k, m: k % 2 == 0 and math.gcd(k, m) == 1, _mcm_grid,
        "T_k(x)^(2^k+1) / x^(2^k)"),
    "dickson": FamilyEntry(
        "dickson", {"n": "int", "a": "nonzero element", "p": "odd prime", "fn": "degree"},
        lambda n, a, p, fn, strict=True: dickson_build(n, a, field_create(p, fn), strict),
        lambda n, a, p, fn: dickson_e(n, field_create(p, fn)) == 2, _dickson_grid,
        "D_n(x, a)"),
    "trace_gamma_delta": FamilyEntry(
        "trace_gamma_delta", {"n": "int", "i": "int", "gamma": "element", "delta": "element"},
        _gd_build, lambda n, i, gamma, delta: all(gamma_delta_conditions(field_create(2, n), i, gamma, delta)),
        _gamma_delta_grid, "y + gamma Tr(delta y^(2^i+1))"),
    "trace_power_sum": FamilyEntry(
        "trace_power_sum", {"n": "int", "s": "int", "t": "int", "gamma": "element"},
        _ps_build, lambda n, s, t, gamma: field_create(2, n).abs_trace(gamma) == 1,
        _power_sum_grid, "x^s + gamma Tr(x^t); census is the verdict", enforced=False),
}


def sweep(family: str, max_q: int = 128) -> Iterator[dict]:
    """Rows of (params, predicate, census verdict) over the family's grid."""
    entry = FAMILIES[family]
    for params in entry.grid(max_q):
        yield entry.run(params)
