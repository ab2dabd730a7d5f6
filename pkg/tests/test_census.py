import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from twotoone.census import (FiberCensus, MapTable, batch_two_to_one, brute_force_count,
                             census_moment, constant_table, count_two_to_one_approx,
                             count_two_to_one_exact, fiber_census, format_sig3, identity_table,
                             image, image_size, is_k_to_1, is_two_to_one, random_table, tabulate)
from twotoone.errors import ImageOutsideCodomain, InvalidK, OutOfRange
from twotoone.gf_core import Poly, field_create


def _naive_two_to_one(values):
    sizes = {}
    for v in values:
        sizes[v] = sizes.get(v, 0) + 1
    ones = sum(1 for s in sizes.values() if s == 1)
    big = any(s > 2 for s in sizes.values())
    return not big and ones == len(values) % 2


def test_tabulate_examples(F8, F5):
    assert tabulate(Poly.parse("x^2", F8), F8).is_permutation()
    assert list(tabulate(Poly.parse("x^2", F5), F5).values) == [0, 1, 4, 4, 1]
    K = field_create(2, 2)
    assert list(tabulate(Poly(K, {}), K).values) == [0, 0, 0, 0]
    with pytest.raises(ImageOutsideCodomain):
        tabulate(lambda x: x, F8, field_create(2, 1))


def test_tabulate_scalar_fallback(F8):
    t = tabulate(lambda x: int(F8.mul(x, x)), F8)
    assert np.array_equal(t.values, F8.mul(F8.elements(), F8.elements()))


def test_census_examples(F8, F5):
    fc = fiber_census(tabulate(Poly.parse("x^2+x", F8), F8))
    assert fc.histogram == {0: 4, 2: 4}
    fc = fiber_census(tabulate(Poly.parse("x^2", F5), F5))
    assert fc.histogram == {0: 2, 1: 1, 2: 2}
    assert fc.exceptional == 0 and fc.exceptional_fiber == (0,)
    assert fiber_census(identity_table(F8)).histogram == {1: 8}


def test_two_to_one_examples(F8, F5):
    assert is_two_to_one(tabulate(Poly.parse("x^2+x", F8), F8))
    assert is_two_to_one(tabulate(Poly.parse("x^2", F5), F5))
    K = field_create(2, 2)
    v = is_two_to_one(tabulate(Poly.parse("x^3", K), K))
    assert not v
    point, fiber = v.witness
    assert len(fiber) == 3 and point == 1


def test_k_to_1_examples(F8):
    K = field_create(2, 4)
    tr = MapTable(K, K, K.trace(K.elements(), 2))
    assert is_k_to_1(tr, 4)
    assert is_k_to_1(identity_table(F8), 1)
    t = tabulate(Poly.parse("x^2+x", F8), F8)
    assert is_k_to_1(t, 2) and is_two_to_one(t)
    with pytest.raises(InvalidK):
        is_k_to_1(t, 0)


def test_image_size_examples(F8, F9):
    assert image_size(tabulate(Poly.parse("x^2", F9), F9)) == 5
    assert image_size(identity_table(F8)) == 8
    assert image_size(constant_table(F8, 3)) == 1
    assert list(image(constant_table(F8, 3))) == [3]


def test_predicates_against_naive(rng):
    for q in (4, 5, 7, 8, 9):
        for _ in range(300):
            vals = rng.integers(0, q, q)
            # bias toward 2-to-1 tables so both outcomes are exercised
            if rng.random() < 0.5:
                pts = rng.choice(q, (q + 1) // 2, replace=False)
                vals = np.repeat(pts, 2)[:q]
                rng.shuffle(vals)
            assert bool(is_two_to_one(vals)) == _naive_two_to_one(list(vals))
            assert bool(is_two_to_one(vals)) == bool(is_k_to_1(vals, 2))


def test_census_invariants(rng, F16):
    for kind in ("map", "permutation", "two_to_one"):
        for _ in range(20):
            t = random_table(F16, rng, kind)
            fc = fiber_census(t)
            assert fc.domain_order == 16
            assert sum(fc.histogram.values()) == 16
            assert image_size(t) == 16 - fc.histogram.get(0, 0)
            assert census_moment(t, 1) == 16


def test_random_table_kinds(rng, F9):
    assert random_table(F9, rng, "permutation").is_permutation()
    assert is_two_to_one(random_table(F9, rng, "two_to_one"))
    with pytest.raises(ValueError):
        random_table(F9, rng, "bogus")


def test_batch_matches_single(rng):
    vals = rng.integers(0, 8, (500, 8))
    vals[::3] = np.repeat(np.arange(4), 2)
    got = batch_two_to_one(vals, 8)
    assert list(got) == [bool(is_two_to_one(v)) for v in vals]


def test_maptable_json_roundtrip(F8):
    t = tabulate(Poly.parse("x^3+x", F8), F8)
    assert MapTable.from_json(t.to_json()) == t
    with pytest.raises(ValueError):
        MapTable(F8, F8, np.zeros(7))
    assert t.then(identity_table(F8)) == t


def test_affine_invariance(rng):
    """f 2-to-1 iff d f(a x + b) + c 2-to-1 (a, d nonzero)."""
    for F in (field_create(2, 3), field_create(5)):
        xs = F.elements()
        for _ in range(60):
            kind = "two_to_one" if rng.random() < 0.5 else "map"
            f = random_table(F, rng, kind)
            a, d = (int(v) for v in rng.integers(1, F.q, 2))
            b, c = (int(v) for v in rng.integers(0, F.q, 2))
            g = F.add(F.mul(d, f.values[F.add(F.mul(a, xs), b)]), c)
            assert bool(is_two_to_one(f)) == bool(is_two_to_one(g))


# counting ---------------------------------------------------------------------

def test_exact_count_examples():
    r = count_two_to_one_exact(1)
    assert r.count == 2 and r.ratio_text == "1.00"
    r = count_two_to_one_exact(3)
    assert r.count == 176400 and r.ratio_text == "4.38"
    assert r.ratio == Fraction(176400, math.factorial(8))
    assert count_two_to_one_exact(4).ratio_text == "50.3"
    with pytest.raises(OutOfRange):
        count_two_to_one_exact(13)


def test_exact_count_by_pairing():
    """Independent formula: choose the image, then pair up the domain."""
    for n in range(1, 8):
        q, h = 2 ** n, 2 ** (n - 1)
        pairings = math.factorial(q) // (2 ** h * math.factorial(h))
        images = math.perm(q, h)  # ordered assignment of distinct images to pairs
        assert count_two_to_one_exact(n).count == pairings * images


def test_format_sig3():
    from decimal import Decimal
    assert format_sig3(Decimal("4.38")) == "4.38"
    assert format_sig3(Decimal("50.3")) == "50.3"
    assert format_sig3(Decimal("9.17E+3")) == "9.17e3"
    assert format_sig3(Decimal("1.00")) == "1.00"


def test_approx_counts():
    a = count_two_to_one_approx(3)
    assert a.ratio == pytest.approx(16 / math.sqrt(4 * math.pi), rel=1e-12)
    a1 = count_two_to_one_approx(1)
    assert a1.ratio == pytest.approx(2 / math.sqrt(math.pi))
    ex = count_two_to_one_exact(8).ratio
    a8 = count_two_to_one_approx(8)
    rel = abs(a8.log2_ratio - math.log2(ex.numerator) + math.log2(ex.denominator))
    assert 2 ** rel - 1 < 0.05
    big = count_two_to_one_approx(30)
    assert big.count is None and big.log2_count > 1e9


def test_brute_force_small():
    assert brute_force_count(1) == 2
    assert brute_force_count(2) == 36
    with pytest.raises(OutOfRange):
        brute_force_count(4)


def test_brute_force_n2_python_enumeration():
    """Independent enumeration with itertools for n = 2."""
    n = sum(_naive_two_to_one(vals) for vals in itertools.product(range(4), repeat=4))
    assert n == 36


def test_fiber_census_json():
    fc = FiberCensus({0: 2, 1: 1, 2: 2}, 0, (0,))
    assert fc.to_json() == {"histogram": {"0": 2, "1": 1, "2": 2}, "exceptional": 0}
