"""Certified builders for 2-to-1 maps.

Every builder checks the hypotheses of its construction exhaustively, builds
the value table, and runs the fiber census on it.  The result is a
:class:`Construction` carrying the table and a
:class:`ConstructionCertificate`.

With ``strict=True`` (the default) a failed hypothesis raises
:class:`~twotoone.errors.HypothesisFailed` naming the first failed check; the
built map is still available as ``err.result``.  If every hypothesis passes
but the census says the map is not 2-to-1, :class:`SoundnessViolation` is
raised regardless of ``strict``.

Builders check the conditions that the underlying commutative-diagram
argument actually consumes (additivity, commutation with the projection,
kernel sizes, bijectivity of the induced map) rather than syntactic
properties of coefficients.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Any

import numpy as np

from .census import (FiberCensus, MapTable, evaluate, fiber_census, is_two_to_one)
from .errors import (BadSplit, DimensionMismatch, EqualGammaDelta, FieldError,
                     HypothesisFailed, NoSuchExponent, NotASubfield, NotComposable,
                     NotPermutation, OddCharacteristic, SoundnessViolation, TraceZero,
                     ZeroDirection)
from .gf_core import GF, Poly, field_create, subfield_embed


@dataclass(frozen=True)
class HypothesisCheck:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "ok": bool(self.ok), "detail": self.detail}


@dataclass
class ConstructionCertificate:
    construction: str
    params: dict
    hypotheses: list[HypothesisCheck]
    census_two_to_one: bool
    census: FiberCensus | None = None

    @property
    def hypotheses_ok(self) -> bool:
        return all(h.ok for h in self.hypotheses)

    @property
    def certified(self) -> bool:
        return self.hypotheses_ok and self.census_two_to_one

    @property
    def failed(self) -> str | None:
        return next((h.name for h in self.hypotheses if not h.ok), None)

    def to_json(self) -> dict:
        return {
            "construction": self.construction,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "hypotheses": [h.to_json() for h in self.hypotheses],
            "census_two_to_one": bool(self.census_two_to_one),
            "census": self.census.to_json() if self.census else None,
            "certified": self.certified,
        }


@dataclass
class Construction:
    table: MapTable | np.ndarray
    certificate: ConstructionCertificate

    @property
    def values(self) -> np.ndarray:
        return self.table.values if isinstance(self.table, MapTable) else self.table

    def to_json(self) -> dict:
        t = self.table.to_json() if isinstance(self.table, MapTable) else [int(v) for v in self.table]
        return {"map": t, "certificate": self.certificate.to_json()}


def _jsonable(v):
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, GF):
        return v.spec()
    if isinstance(v, MapTable):
        return [int(x) for x in v.values]
    return str(v)


class _Checks:
    """Ordered list of named hypothesis results."""

    def __init__(self):
        self.items: list[HypothesisCheck] = []

    def add(self, name: str, ok, detail: str = "") -> bool:
        ok = bool(ok)
        self.items.append(HypothesisCheck(name, ok, "" if ok else detail))
        return ok

    @property
    def ok(self) -> bool:
        return all(h.ok for h in self.items)


def _finish(name: str, params: dict, checks: _Checks, table, strict: bool) -> Construction:
    verdict = is_two_to_one(table)
    census = fiber_census(table)
    cert = ConstructionCertificate(name, params, list(checks.items), bool(verdict), census)
    result = Construction(table, cert)
    if cert.hypotheses_ok and not verdict:
        raise SoundnessViolation(f"{name}: all hypotheses hold but the map is not 2-to-1 "
                                 f"(witness {verdict.witness})")
    if strict and not cert.hypotheses_ok:
        bad = next(h for h in cert.hypotheses if not h.ok)
        raise HypothesisFailed(bad.name, result=result, detail=bad.detail)
    return result


# ---------------------------------------------------------------------------
# small exhaustive predicates

def _vals(f, F: GF, xs=None) -> np.ndarray:
    return evaluate(f, F, F.elements() if xs is None else xs)


def is_additive(values: np.ndarray, F: GF) -> bool:
    """Whether a full value table over ``F`` is additive (GF(p)-linear)."""
    values = np.asarray(values, dtype=np.int64)
    if values[0] != 0:
        return False
    digits = F.digits
    expected = np.zeros(F.q, dtype=np.int64)
    for i in range(F.n):
        expected = F.add(expected, F.mul(digits[:, i], int(values[F.p ** i])))
    return bool(np.array_equal(expected, values))


def subfield_generator(F: GF, m: int) -> int:
    """A multiplicative generator of the subfield of order p^m."""
    F._need_divisor(m)
    return int(F.pow(F.generator, (F.q - 1) // (F.p ** m - 1)))


def is_subfield_linear(values: np.ndarray, F: GF, m: int) -> bool:
    """Additive and commuting with multiplication by GF(p^m)."""
    if not is_additive(values, F):
        return False
    c = subfield_generator(F, m)
    xs = F.elements()
    return bool(np.array_equal(values[F.mul(c, xs)], F.mul(c, values)))


def _restricted_two_to_one(values: np.ndarray, groups: np.ndarray) -> tuple[bool, int | None]:
    """Is ``values`` 2-to-1 on every class of the labelling ``groups``?"""
    for s in np.unique(groups):
        if not is_two_to_one(values[groups == s]):
            return False, int(s)
    return True, None


def _odd_classes(groups: np.ndarray) -> int:
    _, counts = np.unique(groups, return_counts=True)
    return int(np.count_nonzero(counts % 2))


def _bijective_onto(vals: np.ndarray, target: np.ndarray) -> bool:
    u = np.unique(vals)
    return u.size == vals.size and u.size == np.unique(target).size and np.array_equal(u, np.unique(target))


def _permutes(vals_on_S: np.ndarray, S: np.ndarray) -> bool:
    return _bijective_onto(np.asarray(vals_on_S), np.asarray(S))


def _subfield_order_degree(F: GF, q: int) -> int:
    m = round(math.log(q, F.p))
    if F.p ** m != q:
        raise NotASubfield(f"{q} is not a power of {F.p}")
    F._need_divisor(m)
    return m


def _poly_str(f) -> str:
    return str(f) if isinstance(f, Poly) else repr(f)


# ---------------------------------------------------------------------------
# commutative-diagram criterion over finite sets

def agw_build(f, lam, lam_bar, g, s_size: int | None = None, sbar_size: int | None = None,
              strict: bool = True) -> Construction:
    """Two-to-one certificate from a commutative square over finite index sets.

    ``f: A -> A``, ``lam: A -> S``, ``lam_bar: A -> S_bar`` and
    ``g: S -> S_bar`` are value arrays (or :class:`MapTable`).  Checks
    commutation ``lam_bar o f == g o lam``, bijectivity of ``g``, that ``f``
    is 2-to-1 on every fiber of ``lam``, and that at most one fiber of
    ``lam`` has odd size.
    """
    table = f if isinstance(f, MapTable) else None
    fv = np.asarray(f.values if table else f, dtype=np.int64)
    lv = np.asarray(lam.values if isinstance(lam, MapTable) else lam, dtype=np.int64)
    lbv = np.asarray(lam_bar.values if isinstance(lam_bar, MapTable) else lam_bar, dtype=np.int64)
    gv = np.asarray(g.values if isinstance(g, MapTable) else g, dtype=np.int64)
    A = fv.shape[0]
    s_size = gv.shape[0] if s_size is None else s_size
    if sbar_size is None:
        sbar_size = int(max(gv.max(initial=-1), lbv.max(initial=-1))) + 1
    if lv.shape[0] != A or lbv.shape[0] != A:
        raise DimensionMismatch("f, lambda and lambda_bar must share the domain A")
    if gv.shape[0] != s_size or (lv.size and lv.max() >= s_size):
        raise DimensionMismatch("g must be defined on all of S")
    if fv.size and (fv.min() < 0 or fv.max() >= A):
        raise DimensionMismatch("f must map A into A")

    c = _Checks()
    c.add("commutation", np.array_equal(lbv[fv], gv[lv]), "lambda_bar(f(x)) != g(lambda(x))")
    c.add("g bijective", s_size == sbar_size and np.unique(gv).size == s_size,
          "g is not a bijection S -> S_bar")
    ok, bad = _restricted_two_to_one(fv, lv)
    c.add("fiber 2-to-1", ok, f"f is not 2-to-1 on the fiber over s={bad}")
    c.add("odd-fiber count", _odd_classes(lv) <= 1, f"{_odd_classes(lv)} fibers of odd size")
    params = {"A": A, "S": s_size, "S_bar": sbar_size}
    return _finish("agw", params, c, table if table is not None else fv, strict)


# ---------------------------------------------------------------------------
# field-level generalizations

def _h_checks(c: _Checks, hv: np.ndarray, F: GF, m: int, where: str):
    c.add("h nonzero", np.all(hv != 0), f"h vanishes on {where}")
    c.add("h range", np.all(F.in_subfield(hv, m)), f"h leaves the subfield on {where}")


def field_gen_build(h, phi, psi, psi_bar, g, field: GF, q: int, strict: bool = True) -> Construction:
    """``f(x) = h(psi(x)) phi(x) + g(psi(x))`` over ``field`` = GF(q^n).

    Hypotheses: phi, psi additive; psi_bar GF(q)-linear; phi o psi = psi_bar o phi;
    h maps psi(field) into GF(q)*; f_bar(x) = h(x) phi(x) + psi_bar(g(x)) is a
    bijection psi(field) -> psi_bar(field); f is 2-to-1 on every psi-fiber; at most
    one psi-fiber has odd size.
    """
    F = field
    m = _subfield_order_degree(F, q)
    phv, psv, pbv = _vals(phi, F), _vals(psi, F), _vals(psi_bar, F)
    S = np.unique(psv)
    Sbar = np.unique(pbv)
    hS = _vals(h, F, S)
    fvals = F.add(F.mul(_vals(h, F, psv), phv), _vals(g, F, psv))
    fbar = F.add(F.mul(hS, phv[S]), pbv[_vals(g, F, S)])

    c = _Checks()
    c.add("phi additive", is_additive(phv, F), "phi is not additive")
    c.add("psi additive", is_additive(psv, F), "psi is not additive")
    c.add("psibar Fq-linear", is_subfield_linear(pbv, F, m), "psi_bar is not GF(q)-linear")
    c.add("commutation", np.array_equal(phv[psv], pbv[phv]), "phi(psi(x)) != psi_bar(phi(x))")
    _h_checks(c, hS, F, m, "psi(field)")
    c.add("fbar bijective", _bijective_onto(fbar, Sbar), "f_bar is not a bijection psi(F) -> psi_bar(F)")
    ok, bad = _restricted_two_to_one(fvals, psv)
    c.add("fiber 2-to-1", ok, f"f is not 2-to-1 on the psi-fiber over {bad}")
    c.add("odd-fiber count", _odd_classes(psv) <= 1, "more than one odd psi-fiber")
    table = MapTable(F, F, fvals)
    params = {"field": F, "q": q, "h": _poly_str(h), "g": _poly_str(g)}
    return _finish("field_gen", params, c, table, strict)


def agw_3l_build(L1, L2, L3, g, field: GF, q: int, strict: bool = True) -> Construction:
    """``f(x) = L1(x) + L2(x) g(L3(x))`` for q even.

    Hypotheses: L1, L2, L3 GF(q)-linear; g(L3(field)) inside GF(q); the square
    with L3 on both sides commutes; for every y in L3(field) the map
    F_y = L1 + g(y) L2 has exactly two zeros in ker L3; f_bar = L1 + L2 g
    permutes L3(field).  Kernels are checked separately for each y.
    """
    F = field
    if F.p != 2:
        raise OddCharacteristic("this construction needs q even")
    m = _subfield_order_degree(F, q)
    l1, l2, l3 = _vals(L1, F), _vals(L2, F), _vals(L3, F)
    Y = np.unique(l3)
    gY = _vals(g, F, Y)
    gl3 = _vals(g, F, l3)
    fvals = F.add(l1, F.mul(l2, gl3))
    ker3 = l3 == 0

    c = _Checks()
    c.add("Fq-linear", all(is_subfield_linear(v, F, m) for v in (l1, l2, l3)),
          "some L_i is not GF(q)-linear")
    c.add("g range", np.all(F.in_subfield(gY, m)), "g(L3(F)) is not inside GF(q)")
    fbar_full = F.add(l1, F.mul(l2, _vals(g, F)))
    c.add("commutation", np.array_equal(l3[fvals], fbar_full[l3]), "L3(f(x)) != f_bar(L3(x))")
    bad = None
    for y, gy in zip(Y, gY):
        Fy = F.add(l1, F.mul(l2, int(gy)))
        if np.count_nonzero((Fy == 0) & ker3) != 2:
            bad = int(y)
            break
    c.add("kernel dim", bad is None, f"|ker F_y cap ker L3| != 2 at y={bad}")
    c.add("fbar permutes", _permutes(fbar_full[Y], Y), "f_bar does not permute L3(F)")
    table = MapTable(F, F, fvals)
    params = {"field": F, "q": q, "g": _poly_str(g)}
    return _finish("agw_3l", params, c, table, strict)


def _trace_map(F: GF, m: int) -> np.ndarray:
    return np.asarray(F.trace(F.elements(), m), dtype=np.int64)


def case1_trace_build(h, phi, g, field: GF, q: int, variant: str = "plain",
                      strict: bool = True) -> Construction:
    """psi = Tr to GF(q), q even.

    ``plain``:      f = h(Tr x) phi(x) + g(Tr x),       f_bar = h phi + Tr(g) permutes GF(q).
    ``frobenius``:  f = h(Tr x) phi(x) + g(Tr x)^q - g(Tr x),   h phi permutes GF(q).
    Both need phi additive and commuting with Tr, h(GF(q)) inside GF(q)*, and
    |ker phi cap ker Tr| = 2.
    """
    F = field
    if F.p != 2:
        raise OddCharacteristic("this construction needs q even")
    m = _subfield_order_degree(F, q)
    if variant not in ("plain", "frobenius"):
        raise ValueError(f"unknown variant {variant!r}")
    tr = _trace_map(F, m)
    Fq = F.subfield_elements(m)
    phv = _vals(phi, F)
    htr = _vals(h, F, tr)
    gtr = _vals(g, F, tr)
    if variant == "plain":
        extra = gtr
    else:
        extra = F.sub(F.pow(gtr, q), gtr)
    fvals = F.add(F.mul(htr, phv), extra)

    c = _Checks()
    c.add("phi additive", is_additive(phv, F), "phi is not additive")
    c.add("commutation", np.array_equal(phv[tr], tr[phv]), "phi does not commute with the trace")
    _h_checks(c, _vals(h, F, Fq), F, m, "GF(q)")
    inter = np.count_nonzero((phv == 0) & (tr == 0))
    c.add("kernel dim", inter == 2, f"|ker phi cap ker Tr| = {inter}")
    hphi = F.mul(_vals(h, F, Fq), phv[Fq])
    if variant == "plain":
        fbar = F.add(hphi, tr[_vals(g, F, Fq)])
    else:
        gq = _vals(g, F, Fq)
        c.add("trace term vanishes", np.all(tr[F.sub(F.pow(gq, q), gq)] == 0),
              "Tr(g^q - g) is not identically zero")
        fbar = hphi
    c.add("fbar permutes", _permutes(fbar, Fq), "f_bar does not permute GF(q)")
    table = MapTable(F, F, fvals)
    params = {"field": F, "q": q, "variant": variant, "h": _poly_str(h), "g": _poly_str(g)}
    return _finish("case1_trace", params, c, table, strict)


def case2_artin_schreier_build(h, phi, u, field: GF, q: int, variant: str = "plain-g",
                               strict: bool = True) -> Construction:
    """psi = x^q - x, q even.

    ``plain-g``:  f = h(x^q-x) phi(x) + u(x^q-x);  f_bar = h phi + u^q - u permutes S.
    ``trace-u``:  f = h(x^q-x) phi(x) + Tr(u(x^q-x));  h phi permutes S.
    ``exp-u``:    f = h(x^q-x) phi(x) + u(x^q-x)^((q^n-1)/(q-1));  h phi permutes S.
    S = {a^q - a}.  Also needs phi additive, commuting with x^q - x, and
    2-to-1 on GF(q); h(S) inside GF(q)*.
    """
    F = field
    if F.p != 2:
        raise OddCharacteristic("this construction needs q even")
    m = _subfield_order_degree(F, q)
    xs = F.elements()
    psv = F.sub(F.pow(xs, q), xs)
    S = np.unique(psv)
    Fq = F.subfield_elements(m)
    phv = _vals(phi, F)
    uS = _vals(u, F, psv)
    if variant == "plain-g":
        extra = uS
    elif variant == "trace-u":
        extra = F.trace(uS, m)
    elif variant == "exp-u":
        extra = F.pow(uS, (F.q - 1) // (q - 1))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    fvals = F.add(F.mul(_vals(h, F, psv), phv), extra)

    c = _Checks()
    c.add("phi additive", is_additive(phv, F), "phi is not additive")
    c.add("commutation", np.array_equal(phv[psv], psv[phv]), "phi does not commute with x^q - x")
    _h_checks(c, _vals(h, F, S), F, m, "S")
    c.add("phi 2-to-1 over Fq", is_two_to_one(phv[Fq]), "phi is not 2-to-1 on GF(q)")
    hphi = F.mul(_vals(h, F, S), phv[S])
    uS_only = _vals(u, F, S)
    if variant == "plain-g":
        fbar = F.add(hphi, F.sub(F.pow(uS_only, q), uS_only))
    else:
        gS = F.trace(uS_only, m) if variant == "trace-u" else F.pow(uS_only, (F.q - 1) // (q - 1))
        c.add("trace term vanishes", np.all(F.sub(F.pow(gS, q), gS) == 0),
              "psi(g) is not identically zero")
        fbar = hphi
    c.add("fbar permutes", _permutes(fbar, S), "f_bar does not permute S")
    table = MapTable(F, F, fvals)
    params = {"field": F, "q": q, "variant": variant, "h": _poly_str(h), "u": _poly_str(u)}
    return _finish("case2_artin_schreier", params, c, table, strict)


# ---------------------------------------------------------------------------
# x^r h(x^((q-1)/d)) over odd q

def roots_of_unity(F: GF, d: int) -> np.ndarray:
    if (F.q - 1) % d:
        raise ValueError(f"{d} does not divide q-1")
    els = F.nonzero()
    return np.sort(els[F.pow(els, d) == 1])


def find_exponent(h, F: GF, d: int) -> int:
    """The n in [0, d) with h(x)^((q-1)/d) = x^n on mu_d (NoSuchExponent if none)."""
    mu = roots_of_unity(F, d)
    lhs = F.pow(_vals(h, F, mu), (F.q - 1) // d)
    for n in range(d):
        if np.array_equal(lhs, F.pow(mu, n)):
            return n
    raise NoSuchExponent("h^((q-1)/d) is not a monomial on mu_d")


def _poly_coeffs_in_subfield(h, F: GF, k: int) -> bool:
    if not isinstance(h, Poly):
        return False
    return all(F.in_subfield(c, k) for c in h.coeffs.values())


def cyclotomic_build(r: int, d: int, h, field: GF, mode: str = "direct",
                     strict: bool = True) -> Construction:
    """``f(x) = x^r h(x^((q-1)/d))`` over odd q, with f(0) = 0.

    Modes: ``direct`` (g = x^r h^((q-1)/d) injective on mu_d, gcd(r,(q-1)/d)=2),
    ``corollary`` (h^((q-1)/d) = x^n on mu_d, gcd(r+n, d)=1, gcd(r,(q-1)/d)=2),
    ``subfield`` (q = q0^m, q0 = 1 mod d, d | m, h over GF(q0), gcd(r,d)=1,
    gcd(r,(q-1)/d)=2).
    """
    F = field
    if F.p == 2:
        raise FieldError("this construction needs q odd")
    if r < 1 or d < 1:
        raise ValueError("r and d must be positive")
    q = F.q
    c = _Checks()
    if not c.add("d divides q-1", (q - 1) % d == 0, f"{d} does not divide {q - 1}"):
        raise HypothesisFailed("d divides q-1", detail=f"{d} does not divide {q - 1}")
    e = (q - 1) // d
    mu = roots_of_unity(F, d)
    hmu = _vals(h, F, mu)
    c.add("h no roots in mu_d", np.all(hmu != 0), "h vanishes on mu_d")
    params: dict[str, Any] = {"field": F, "r": r, "d": d, "h": _poly_str(h), "mode": mode}
    if mode == "direct":
        gmu = F.mul(F.pow(mu, r), F.pow(hmu, e))
        c.add("g injective on mu_d", np.unique(gmu).size == mu.size and np.all(F.pow(gmu, d) == 1),
              "g is not a bijection of mu_d")
    elif mode == "corollary":
        n = find_exponent(h, F, d)
        params["n"] = n
        c.add("gcd(r+n,d)=1", math.gcd(r + n, d) == 1, f"gcd({r + n}, {d}) != 1")
    elif mode == "subfield":
        found = None
        for k in range(1, F.n + 1):
            if F.n % k:
                continue
            q0, mm = F.p ** k, F.n // k
            if (q0 - 1) % d == 0 and mm % d == 0 and _poly_coeffs_in_subfield(h, F, k):
                found = (q0, mm)
                break
        c.add("subfield tower", found is not None,
              "no q0 with q = q0^m, q0 = 1 mod d, d | m and h over GF(q0)")
        if found:
            params["q0"], params["m"] = found
        c.add("gcd(r,d)=1", math.gcd(r, d) == 1, f"gcd({r}, {d}) != 1")
    else:
        raise ValueError(f"unknown mode {mode!r}")
    c.add("gcd=2", math.gcd(r, e) == 2, f"gcd({r}, {e}) = {math.gcd(r, e)}")

    xs = F.elements()
    fvals = F.mul(F.pow(xs, r), _vals(h, F, F.pow(xs, e)))
    fvals = np.where(xs == 0, 0, fvals)
    table = MapTable(F, F, fvals)
    return _finish("cyclotomic", params, c, table, strict)


# ---------------------------------------------------------------------------
# from permutations

def _require_permutation(G: MapTable, what: str = "G"):
    if not G.is_permutation():
        raise NotPermutation(f"{what} is not a permutation")


def _is_subspace(S: np.ndarray, n: int) -> bool:
    s = set(int(x) for x in S)
    if 0 not in s:
        return False
    return all((a ^ b) in s for a in s for b in s)


def piecewise_from_permutation(G: MapTable, mode: str = "trace", gamma: int | None = None,
                               S=None, S1=None, S2=None, phi=None,
                               variant: str = "F1") -> Construction:
    """2-to-1 map from a permutation by folding one half of the field onto the other.

    ``explicit``: F = G on S1 and G(phi(x)) on S2, phi: S2 -> S1 a bijection
    (dict or pair of aligned sequences).  ``hyperplane``: S an F_2-subspace of
    codimension 1, gamma outside S; F1 = G(x) on S and G(x+gamma) off S, F2
    swaps the branches.  ``trace``: the hyperplane Tr = 0 with Tr(gamma) = 1.
    """
    F = G.domain
    if F.p != 2:
        raise OddCharacteristic("piecewise folding needs characteristic 2")
    _require_permutation(G)
    xs = F.elements()
    half = F.q // 2
    c = _Checks()
    params: dict[str, Any] = {"field": F, "mode": mode, "variant": variant}
    if mode == "explicit":
        S1 = np.asarray(sorted(int(x) for x in S1), dtype=np.int64)
        S2 = np.asarray(sorted(int(x) for x in S2), dtype=np.int64)
        if (S1.size != half or S2.size != half
                or np.unique(np.concatenate([S1, S2])).size != F.q):
            raise BadSplit("S1, S2 must partition the field into equal halves")
        phimap = dict(phi) if isinstance(phi, dict) else dict(zip(*phi))
        img = np.array([phimap.get(int(x), -1) for x in S2], dtype=np.int64)
        if set(phimap) != set(int(x) for x in S2) or np.unique(img).size != half \
                or not np.isin(img, S1).all():
            raise BadSplit("phi must be a bijection S2 -> S1")
        pre = xs.copy()
        pre[S2] = img
        fvals = G.values[pre]
        c.add("split", True)
    else:
        if gamma is None:
            raise BadSplit("gamma is required")
        gamma = int(gamma)
        if mode == "trace":
            if F.abs_trace(gamma) != 1:
                raise TraceZero("Tr(gamma) must be 1")
            inS = F.abs_trace(xs) == 0
        elif mode == "hyperplane":
            Sarr = np.asarray(sorted(int(x) for x in S), dtype=np.int64)
            if Sarr.size != half or not _is_subspace(Sarr, F.n):
                raise BadSplit("S must be a subspace of codimension 1")
            if gamma in set(Sarr.tolist()):
                raise BadSplit("gamma must lie outside S")
            inS = np.isin(xs, Sarr)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        params["gamma"] = gamma
        shifted = G.values[xs ^ gamma]
        if variant == "F1":
            fvals = np.where(inS, G.values, shifted)
        elif variant == "F2":
            fvals = np.where(inS, shifted, G.values)
        else:
            raise ValueError(f"unknown variant {variant!r}")
        c.add("split", True)
    return _finish("piecewise", params, c, MapTable(F, F, fvals), strict=True)


def compose(G: MapTable, H: MapTable, order: str = "GH") -> Construction:
    """``GH``: x -> G(H(x));  ``HG``: x -> H(G(x)).

    The result is 2-to-1 when one factor is a permutation and the other is
    2-to-1; a warning is issued when that is not the case.
    """
    if order == "GH":
        outer, inner = G, H
    elif order == "HG":
        outer, inner = H, G
    else:
        raise ValueError("order must be 'GH' or 'HG'")
    if inner.codomain != outer.domain:
        raise NotComposable(f"{inner.codomain!r} is not {outer.domain!r}")
    table = inner.then(outer)
    gp, hp = G.is_permutation(), H.is_permutation()
    g2, h2 = bool(is_two_to_one(G)), bool(is_two_to_one(H))
    c = _Checks()
    c.add("one permutation, one 2-to-1", (gp and h2) or (hp and g2),
          "need one permutation factor and one 2-to-1 factor")
    if not c.ok:
        warnings.warn("compose: factors are not (permutation, 2-to-1); result is not certified",
                      stacklevel=2)
    return _finish("compose", {"order": order}, c, table, strict=False)


# ---------------------------------------------------------------------------
# linear structures

def is_linear_structure(f: MapTable, gamma: int, b: int, k: int = 1) -> bool:
    """Whether f(x + u gamma) - f(x) = u b for all x and all u in GF(p^k).

    ``f`` maps GF(p^n) to GF(p^k) (codomain of degree k), or to GF(p^n) itself
    with u running over its degree-k subfield.
    """
    D, K = f.domain, f.codomain
    if D.n % k:
        raise NotASubfield(f"{k} does not divide {D.n}")
    if int(gamma) == 0:
        raise ValueError("gamma must be nonzero")
    if K.n == k and K.p == D.p:
        us = K.elements()
        u_big = subfield_embed(us, K, D)
    elif K == D:
        us = D.subfield_elements(k)
        u_big = us
    else:
        raise NotASubfield(f"codomain {K!r} is not of degree {k}")
    xs = D.elements()
    for u, ub in zip(us, u_big):
        shift = D.add(xs, D.mul(int(ub), int(gamma)))
        lhs = K.sub(f.values[shift], f.values)
        if np.any(lhs != K.mul(int(u), int(b))):
            return False
    return True


def boolean_table(field: GF, bits) -> MapTable:
    """A Boolean function on ``field`` as a MapTable into GF(2)."""
    return MapTable(field, field_create(2, 1), np.asarray(bits, dtype=np.int64) & 1)


def trace_boolean(field: GF, f=None) -> MapTable:
    """``x -> Tr(f(x))`` (absolute trace) as a Boolean table; f defaults to x."""
    vals = field.elements() if f is None else _vals(f, field)
    return boolean_table(field, field.abs_trace(vals))


def translator_build_single(F: MapTable, G, gamma: int, strict: bool = True) -> Construction:
    """``F(x) + gamma Tr(G(F(x)))`` with F a permutation and gamma a 1-linear
    structure of Tr(G(x))."""
    K = F.domain
    if K.p != 2:
        raise OddCharacteristic("needs characteristic 2")
    _require_permutation(F, "F")
    gamma = int(gamma)
    c = _Checks()
    trg = trace_boolean(K, G)
    c.add("linear structure", gamma != 0 and is_linear_structure(trg, gamma, 1),
          "gamma is not a 1-linear structure of Tr(G(x))")
    fvals = K.add(F.values, K.mul(gamma, trg.values[F.values]))
    params = {"field": K, "gamma": gamma, "G": _poly_str(G)}
    return _finish("translator_single", params, c, MapTable(K, K, fvals), strict)


# (element, function 'f' or 'g', b) triples, with 'gd' for gamma + delta
_PAIR_CASES = {
    1: [("g", "f", 1), ("d", "f", 1), ("g", "g", 0)],
    2: [("g", "f", 1), ("g", "g", 0), ("d", "g", 0)],
    3: [("g", "f", 0), ("d", "f", 0), ("d", "g", 1)],
    4: [("d", "f", 0), ("g", "g", 1), ("d", "g", 1)],
    5: [("g", "f", 0), ("d", "f", 1), ("gd", "g", 1)],
    6: [("g", "g", 1), ("d", "g", 0), ("gd", "f", 1)],
}


def pair_case_conditions(f: MapTable, g: MapTable, gamma: int, delta: int, case: int) -> list[bool]:
    K = f.domain
    elems = {"g": int(gamma), "d": int(delta), "gd": K.add(int(gamma), int(delta))}
    funcs = {"f": f, "g": g}
    return [is_linear_structure(funcs[fn], elems[e], b) for e, fn, b in _PAIR_CASES[case]]


def translator_build_pair(f: MapTable, g: MapTable, gamma: int, delta: int,
                          case: int | None = None, strict: bool = True) -> Construction:
    """``y -> y + gamma f(y) + delta g(y)`` for Boolean f, g under one of the
    six linear-structure cases (``case=None`` picks the first one that holds)."""
    K = f.domain
    if K.p != 2:
        raise OddCharacteristic("needs characteristic 2")
    gamma, delta = int(gamma), int(delta)
    if gamma == delta:
        raise EqualGammaDelta("gamma and delta must differ")
    if gamma == 0 or delta == 0:
        raise ValueError("gamma and delta must be nonzero")
    if case is None:
        case = next((k for k in _PAIR_CASES if all(pair_case_conditions(f, g, gamma, delta, k))), 1)
    c = _Checks()
    for i, ok in enumerate(pair_case_conditions(f, g, gamma, delta, case), start=1):
        c.add(f"case {case} condition {i}", ok, "linear structure condition fails")
    ys = K.elements()
    vals = K.add(K.add(ys, K.mul(gamma, f.values)), K.mul(delta, g.values))
    params = {"field": K, "gamma": gamma, "delta": delta, "case": case}
    return _finish("translator_pair", params, c, MapTable(K, K, vals), strict)


def linear_perm_build(L, alpha: int, f: MapTable, strict: bool = True) -> Construction:
    """``F(y) = L(y) + L(alpha) f(y)``: L an additive permutation, alpha a
    nonzero 1-linear structure of the Boolean function f."""
    K = f.domain
    if K.p != 2:
        raise OddCharacteristic("needs characteristic 2")
    lv = _vals(L, K)
    if np.unique(lv).size != K.q:
        raise NotPermutation("L is not a permutation")
    alpha = int(alpha)
    c = _Checks()
    c.add("L additive", is_additive(lv, K), "L is not additive")
    c.add("1-structure", alpha != 0 and is_linear_structure(f, alpha, 1),
          "alpha is not a nonzero 1-linear structure of f")
    vals = K.add(lv, K.mul(int(lv[alpha]), f.values))
    params = {"field": K, "alpha": alpha}
    return _finish("linear_perm", params, c, MapTable(K, K, vals), strict)


# ---------------------------------------------------------------------------
# derivatives and APN

def derivative_map(F: MapTable, a: int) -> MapTable:
    """``x -> F(x + a) + F(x)``."""
    K = F.domain
    if K.p != 2:
        raise OddCharacteristic("derivatives are taken in characteristic 2")
    a = int(a)
    if a == 0:
        raise ZeroDirection("direction must be nonzero")
    xs = K.elements()
    return MapTable(K, F.codomain, F.codomain.add(F.values[xs ^ a], F.values))


@dataclass(frozen=True)
class APNVerdict:
    ok: bool
    direction: int | None = None

    def __bool__(self):
        return self.ok


def is_apn(F: MapTable) -> APNVerdict:
    """APN iff every nonzero-direction derivative is 2-to-1."""
    K = F.domain
    if K.p != 2:
        raise OddCharacteristic("APN is a characteristic-2 notion")
    xs = K.elements()
    for a in range(1, K.q):
        if not is_two_to_one(F.codomain.add(F.values[xs ^ a], F.values)):
            return APNVerdict(False, a)
    return APNVerdict(True)


def apn_derived_family(F: MapTable) -> list[Construction]:
    """The 2^n - 1 derivatives of an APN map, each certified 2-to-1."""
    out = []
    apn = is_apn(F)
    for a in range(1, F.domain.q):
        c = _Checks()
        c.add("APN", apn.ok, f"not APN (direction {apn.direction})")
        out.append(_finish("apn_derivative", {"a": a}, c, derivative_map(F, a), strict=True))
    return out
