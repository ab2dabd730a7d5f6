"""Acceptance suite: one marked group per criterion.

Each test carries ``@pytest.mark.criterion(n)``; the conftest prints one
PASS/FAIL line per criterion at the end of the run.
"""

import functools
import itertools
import math
import time
import warnings

import numpy as np
import pytest

from grids import BUILDER_GRIDS, construction_outputs
from twotoone import applications as A
from twotoone import catalog as K
from twotoone import constructions as C
from twotoone.census import (MapTable, batch_two_to_one, brute_force_count, census_moment,
                             count_two_to_one_exact, fiber_census, is_two_to_one, random_table,
                             tabulate)
from twotoone.errors import HypothesisFailed, TwoToOneError
from twotoone.gf_core import LinearizedPoly, Poly, field_create, is_irreducible
from twotoone.walsh import moment_sum, two_to_one_statistic, walsh_spectrum

crit = pytest.mark.criterion


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


# 1 ---------------------------------------------------------------------------------------

TABLE = ["1.00", "1.50", "4.38", "50.3", "9.17e3", "4.27e8", "1.30e18", "1.70e37"]


@crit(1)
def test_ratio_table():
    with Timer() as t:
        got = [count_two_to_one_exact(n).ratio_text for n in range(1, 9)]
    assert got == TABLE
    assert t.elapsed < 1.0


@crit(1)
def test_ratio_table_exact_arithmetic():
    for n in range(1, 9):
        r = count_two_to_one_exact(n)
        q = 2 ** n
        assert r.bijections == math.factorial(q)
        # independent count: pairings of the domain times injective images
        h = q // 2
        assert r.count == math.factorial(q) // 2 ** h * math.comb(q, h)


# 2 ---------------------------------------------------------------------------------------

def _all_maps(q):
    idx = np.arange(q ** q, dtype=np.int64)
    bits = q.bit_length() - 1
    return np.stack([(idx >> (bits * i)) & (q - 1) for i in range(q)], axis=1)


@crit(2)
@pytest.mark.parametrize("n,expected", [(1, 2), (2, 36), (3, 176400)])
def test_brute_force_count(n, expected):
    q = 2 ** n
    with Timer() as t:
        maps = _all_maps(q)
        total = 0
        for s in range(0, maps.shape[0], 1 << 21):
            total += int(batch_two_to_one(maps[s:s + (1 << 21)], q).sum())
    assert total == expected == count_two_to_one_exact(n).count
    assert brute_force_count(n) == expected
    assert t.elapsed < 120


@crit(2)
def test_brute_force_single_predicate_small():
    for n in (1, 2):
        q = 2 ** n
        assert sum(bool(is_two_to_one(np.array(v))) for v in itertools.product(range(q), repeat=q)) \
            == count_two_to_one_exact(n).count


# 3 ---------------------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _outputs(limit, min_n, max_n):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return tuple(T for _, T in construction_outputs(limit, min_n, max_n))


def walsh_corpus(seed=3):
    corpus = list(_outputs(60, 3, 8))
    rng = np.random.default_rng(seed)
    for kind in ("map", "permutation", "two_to_one"):
        for i in range(200):
            corpus.append(random_table(field_create(2, 3 + i % 6), rng, kind))
    return corpus


@crit(3)
def test_walsh_characterization():
    with Timer() as t:
        corpus = walsh_corpus()
        bad = [T for T in corpus if (two_to_one_statistic(T) == 0) != bool(is_two_to_one(T))]
    assert len(corpus) >= 1000
    assert {T.domain.n for T in corpus} == set(range(3, 9))
    assert sum(bool(is_two_to_one(T)) for T in corpus) >= 400
    assert bad == []
    assert t.elapsed < 300


# 4 ---------------------------------------------------------------------------------------

@crit(4)
def test_f5_cubics():
    F5 = field_create(5)
    with Timer() as t:
        found = {str(f) for f in K.f5_cubics()}
    # x^3 +- 2x, x^3 +- x^2 + 4x, x^3 +- 2x^2 + x, x^3 + c x^2 (c != 0)
    listed = ["x^3+2x", "x^3+3x", "x^3+x^2+4x", "x^3+4x^2+4x", "x^3+2x^2+x", "x^3+3x^2+x",
              "x^3+x^2", "x^3+2x^2", "x^3+3x^2", "x^3+4x^2"]
    assert found == {str(Poly.parse(s, F5)) for s in listed}
    assert len(found) == 10
    assert t.elapsed < 1.0


# 5 ---------------------------------------------------------------------------------------

QUARTIC_FIELDS = [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 1), (7, 1), (5, 2)]


@crit(5)
@pytest.mark.parametrize("p,m", QUARTIC_FIELDS)
def test_quartic_classification(p, m):
    F = field_create(p, m)
    xs = F.elements()
    polys = list(K.normalized_polys(F, 4))
    with Timer() as t:
        vals = np.stack([f(xs) for f in polys])
        census = batch_two_to_one(vals, F.q)
        bad = [str(f) for f, c in zip(polys, census) if bool(K.classify_low_degree(f)) != bool(c)]
    assert bad == []
    assert len(polys) == F.q ** (3 if p == 2 else 2)
    assert t.elapsed < 600


# 6 ---------------------------------------------------------------------------------------

@crit(6)
@pytest.mark.parametrize("builder", sorted(BUILDER_GRIDS))
def test_soundness(builder):
    seen = passing = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for label, thunk in BUILDER_GRIDS[builder]():
            cons = thunk()
            if cons is None:
                continue
            F = cons.table.domain
            assert F.q <= 2 ** 7 or F.q <= 343
            seen += 1
            if cons.certificate.hypotheses_ok:
                passing += 1
                assert bool(is_two_to_one(cons.table)), label
    assert seen and passing


def _name_of_failure(thunk):
    """The hypothesis (or precondition error) a negative instance trips."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            res = thunk()
        except HypothesisFailed as e:
            return e.hypothesis
        except TwoToOneError as e:
            return type(e).__name__
    cert = res.certificate if hasattr(res, "certificate") else res
    return cert.failed


def _negatives():
    F8, F9, F16 = field_create(2, 3), field_create(3, 2), field_create(2, 4)
    tr8 = lambda x: F8.trace(x, 1)
    trz = next(g for g in range(1, 8) if F8.abs_trace(g) == 0)
    I8 = MapTable(F8, F8, F8.elements())
    c16 = next(int(x) for x in F16.nonzero() if not F16.in_subfield(int(x), 2))
    return {
        "agw": ("g bijective", lambda: C.agw_build(np.array([1, 0, 3, 2]), np.array([0, 0, 1, 1]),
                                                   np.zeros(4, dtype=int), np.array([0, 0]), sbar_size=2)),
        "field_gen": ("commutation", lambda: C.field_gen_build(
            Poly.constant(F16, 1), LinearizedPoly(F16, [0, 1]), LinearizedPoly(F16, [c16]),
            LinearizedPoly(F16, [c16]), Poly(F16, {}), F16, 4)),
        "agw_3l": ("kernel dim", lambda: C.agw_3l_build(LinearizedPoly(F8, []), LinearizedPoly(F8, []),
                                                        tr8, Poly.constant(F8, 1), F8, 2)),
        "case1_trace": ("h nonzero", lambda: C.case1_trace_build(Poly(F8, {}), LinearizedPoly(F8, [1, 1]),
                                                                 Poly(F8, {}), F8, 2)),
        "case2_artin_schreier": ("h range", lambda: C.case2_artin_schreier_build(
            Poly.parse("x+2", F16), LinearizedPoly(F16, [1, 1]), Poly(F16, {}), F16, 4)),
        "cyclotomic": ("gcd=2", lambda: C.cyclotomic_build(3, 1, Poly.constant(F9, 1), F9)),
        "piecewise": ("TraceZero", lambda: C.piecewise_from_permutation(I8, "trace", trz)),
        "compose": ("one permutation, one 2-to-1", lambda: C.compose(I8, I8)),
        "translator_single": ("linear structure", lambda: C.translator_build_single(I8, Poly.x(F8), trz)),
        "translator_pair": ("case 2 condition 1", lambda: C.translator_build_pair(
            C.boolean_table(F8, np.zeros(8)), C.boolean_table(F8, np.zeros(8)), 1, 3, case=2)),
        "linear_perm": ("1-structure", lambda: C.linear_perm_build(LinearizedPoly(F8, [1]), trz,
                                                                   C.trace_boolean(F8))),
        "apn_derived": ("APN", lambda: C.apn_derived_family(I8)),
        "catalog maschietti": ("EvenM", lambda: K.maschietti_build("segre", 4)),
        "catalog l_i": ("OrderConditionFailed", lambda: K.l_i_build({1}, 17)),
        "catalog gold_derivative": ("a in subfield", lambda: K.gold_derivative_build(1, 3, 1)),
        "catalog monomial": ("gcd=2", lambda: K.monomial_build(3, field_create(11))),
        "catalog mcm": ("OddK", lambda: K.mcm_build(3, 5)),
        "catalog dickson": ("e=2", lambda: K.dickson_build(5, 1, field_create(7))),
        "catalog trace_gamma_delta": ("delta-gamma relation", lambda: K.trace_family_build(
            "gamma-delta", field_create(2, 5), i=1, gamma=1, delta=2)),
        "catalog trace_power_sum": ("Tr(gamma)=1", lambda: K.trace_family_build(
            "power-sum", F8, s=1, t=1, gamma=trz)),
        "vectorial_bent": ("z^k+bz", lambda: A.vectorial_bent_build(1, 2)),
    }


@crit(6)
def test_every_builder_has_a_named_negative():
    neg = _negatives()
    builders = [b for b in BUILDER_GRIDS if b != "catalog"] + [f"catalog {f}" for f in K.FAMILIES]
    assert set(builders) <= set(neg)
    for name, (expected, thunk) in neg.items():
        assert _name_of_failure(thunk) == expected, name


# 7 ---------------------------------------------------------------------------------------

@crit(7)
@pytest.mark.parametrize("m", [3, 5, 7])
def test_maschietti_all_cases(m):
    F = field_create(2, m)
    for case in K.MASCHIETTI_CASES:
        k, cons = K.maschietti_build(case, m)
        assert bool(is_two_to_one(tabulate(Poly(F, {k: 1, 1: 1}), F)))
        assert cons.certificate.certified


@crit(7)
@pytest.mark.parametrize("n", [3, 5, 7])
def test_l_i_all_index_sets(n):
    r = (n - 1) // 2
    for size in range(1, r + 1):
        for I in itertools.combinations(range(1, r + 1), size):
            L, cons = K.l_i_build(I, n)
            assert cons.certificate.certified and K.linearized_two_to_one(L)


@crit(7)
@pytest.mark.parametrize("k", [1, 2])
def test_gold_all_a(k):
    F = field_create(2, 6)
    for a in range(64):
        if F.in_subfield(a, 3):
            continue
        assert bool(is_two_to_one(K.gold_derivative_build(k, 3, a).table))


@crit(7)
@pytest.mark.parametrize("m", [3, 5])
def test_mcm(m):
    assert K.mcm_build(2, m).certificate.certified


@crit(7)
@pytest.mark.parametrize("p,n", [(5, 1), (7, 1), (3, 2), (11, 1)])
def test_dickson_verdicts(p, n):
    F = field_create(p, n)
    checked = 0
    for deg in range(1, 25):
        e = K.dickson_e(deg, F)
        if e > 2:
            continue
        for a in F.nonzero():
            vals = K.dickson_eval(deg, int(a), F.elements(), F)
            if e == 1:
                assert np.unique(vals).size == F.q
            else:
                assert bool(is_two_to_one(vals))
            checked += 1
    assert checked > 0


@crit(7)
@pytest.mark.parametrize("m", [2, 3])
def test_reversed_dickson(m):
    for n in range(1, 2 ** (2 * m)):
        pp, two = K.reversed_dickson_equivalence(n, m)
        assert pp == two, n


# 8 ---------------------------------------------------------------------------------------

@crit(8)
def test_class_h_m2_exhaustive():
    K4 = field_create(2, 2)
    for vals in itertools.product(range(4), repeat=4):
        psi = MapTable(K4, K4, np.array(vals))
        for mu in range(4):
            bent, cond = A.class_h_check(psi, mu)
            assert bent == cond, (vals, mu)


@crit(8)
def test_class_h_m3_corpus():
    K8 = field_create(2, 3)
    rng = np.random.default_rng(8)
    psis = [tabulate(Poly.monomial(K8, d, c), K8) for d in range(0, 8) for c in range(1, 8)]
    psis += [random_table(K8, rng) for _ in range(500)]
    for psi in psis:
        for mu in range(8):
            bent, cond = A.class_h_check(psi, mu)
            assert bent == cond


@crit(8)
@pytest.mark.parametrize("m", [2, 3, 4])
def test_mm_semibent_on_corpus(m):
    Km = field_create(2, m)
    pis = [T for T in _outputs(120, 2, 4) if T.domain.n == m]
    rng = np.random.default_rng(m)
    pis += [random_table(Km, rng, "two_to_one") for _ in range(50)]
    pis = [T for T in pis if is_two_to_one(T)]
    assert len(pis) >= 50
    for pi in pis:
        assert A.is_semibent(A.mm_build(pi))
        assert A.is_semibent(A.mm_build(pi, rng.integers(0, 2, Km.q)))


@crit(8)
@pytest.mark.parametrize("m", [2, 3, 4])
def test_vectorial_bent(m):
    for k in range(1, 2 ** m - 1):
        if math.gcd(k, 2 ** m - 1) != 1:
            continue
        r = A.vectorial_bent_build(k, m, strict=False)
        if r.hypothesis_ok:
            assert r.bent


@crit(8)
def test_planar_square_gf9():
    F9 = field_create(3, 2)
    T = tabulate(Poly.monomial(F9, 2), F9)
    assert A.is_planar(T) and bool(is_two_to_one(T)) and len(np.unique(T.values)) == 5


@crit(8)
def test_perm_lift_50():
    F16 = field_create(2, 4)
    rng = np.random.default_rng(50)
    for _ in range(50):
        G = A.permutation_from_two_to_one(random_table(F16, rng, "two_to_one"))
        assert np.unique(G.values).size == 16


# 9 ---------------------------------------------------------------------------------------

@crit(9)
def test_parseval_all_spectra():
    rng = np.random.default_rng(9)
    tables = [T for T in walsh_corpus(seed=9) if T.domain.n <= 6]
    for n in (1, 2):
        F = field_create(2, n)
        tables += [random_table(F, rng, kind) for kind in ("map", "permutation", "two_to_one")]
    for T in tables:
        s = walsh_spectrum(T)
        assert s.parseval_ok()
        q = T.domain.q
        # rows are indexed by u, columns by v: sum over u for each v
        assert np.all((s.values.astype(object) ** 2).sum(axis=0) == q * q)


@crit(9)
def test_moments_match_census():
    rng = np.random.default_rng(10)
    for n in range(1, 9):
        F = field_create(2, n)
        for kind in ("map", "permutation", "two_to_one"):
            T = random_table(F, rng, kind)
            for j in (1, 2, 3):
                assert moment_sum(T, j) == census_moment(T, j)
                assert census_moment(T, j) == sum(int(s) ** j for s in np.bincount(T.values, minlength=F.q))


@crit(9)
def test_affine_invariance():
    rng = np.random.default_rng(11)
    for F in (field_create(2, 3), field_create(2, 4), field_create(3, 2), field_create(7)):
        xs = F.elements()
        for _ in range(100):
            f = random_table(F, rng, "two_to_one" if rng.random() < 0.5 else "map")
            a, d = (int(v) for v in rng.integers(1, F.q, 2))
            b, c = (int(v) for v in rng.integers(0, F.q, 2))
            g = MapTable(F, F, F.add(F.mul(d, f.values[F.add(F.mul(a, xs), b)]), c))
            assert bool(is_two_to_one(f)) == bool(is_two_to_one(g))
            if F.p == 2:
                assert (two_to_one_statistic(f) == 0) == (two_to_one_statistic(g) == 0)


def _isomorphism(src, dst):
    """Index map src -> dst sending the class of x to a root of src's modulus."""
    mod = Poly(dst, {i: c for i, c in enumerate(src.modulus) if c})
    root = next(int(r) for r in dst.elements() if mod(int(r)) == 0)
    basis = [dst.pow(root, i) for i in range(src.n)]
    out = np.zeros(src.q, dtype=np.int64)
    for x in range(src.q):
        acc = 0
        for i, b in enumerate(basis):
            if (x >> i) & 1:
                acc = dst.add(acc, int(b))
        out[x] = acc
    return out


@crit(9)
def test_modulus_change_gf16():
    moduli = [m for m in ((1, 1, 0, 0, 1), (1, 0, 0, 1, 1), (1, 1, 1, 1, 1)) if is_irreducible(m, 2)]
    assert len(moduli) == 3
    fields = [field_create(2, 4, m) for m in moduli]
    base = fields[0]
    rng = np.random.default_rng(16)
    polys = [dict(enumerate(int(c) for c in rng.integers(0, 16, int(rng.integers(2, 8))))) for _ in range(150)]
    polys += [{2: 1, 1: 1}, {3: 1}, {4: 1, 1: 1}, {6: 1, 1: 1}, {5: 1}]
    for other in fields[1:]:
        iso = _isomorphism(base, other)
        assert np.array_equal(iso[base.mul(*np.meshgrid(np.arange(16), np.arange(16)))],
                              other.mul(*np.meshgrid(iso, iso)))
        inv = np.argsort(iso)
        for terms in polys:
            f = Poly(base, terms)
            g = Poly(other, {e: int(iso[c]) for e, c in terms.items()})
            T1, T2 = tabulate(f, base), tabulate(g, other)
            # the same abstract map, read through the isomorphism
            assert np.array_equal(iso[T1.values], T2.values[iso])
            assert bool(is_two_to_one(T1)) == bool(is_two_to_one(T2))
            assert fiber_census(T1).histogram == fiber_census(T2).histogram
            assert two_to_one_statistic(T1) == two_to_one_statistic(T2)
            assert bool(C.is_apn(T1)) == bool(C.is_apn(T2))
            for j in (1, 2, 3):
                assert moment_sum(T1, j) == moment_sum(T2, j)
            # the spectrum is a relabelling of rows and columns
            W1 = np.sort(np.abs(walsh_spectrum(T1).values).ravel())
            W2 = np.sort(np.abs(walsh_spectrum(T2).values).ravel())
            assert np.array_equal(W1, W2)
        assert inv[iso[5]] == 5
