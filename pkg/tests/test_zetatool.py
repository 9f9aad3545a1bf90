import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from repzeta.chartab import DimensionMultiset
from repzeta.zetatool import (SemiPolynomial, certified_sign, check_equivalence,
                              descartes_bound, difference_semipoly, evaluation_points,
                              probe_positive_roots, restriction_compatible, sigma_bound,
                              sigma_set, zeta_eval)

HEIS = DimensionMultiset.from_mapping({1: 9, 3: 2})


def test_zeta_eval_examples():
    assert zeta_eval(HEIS, 0) == 11
    assert zeta_eval(HEIS, 2) == Fraction(83, 9)
    assert zeta_eval(HEIS, -2) == 27
    abelian = DimensionMultiset.from_mapping({1: 12})
    for s in (-2, 0, 3, Fraction(1, 3)):
        assert zeta_eval(abelian, s) == 12
    v = zeta_eval(HEIS, Fraction(1, 2), dps=50)
    with mpmath.workdps(50):
        assert abs(v - (9 + 2 / mpmath.sqrt(3))) < mpmath.mpf(10) ** -40


def test_difference_examples():
    assert not difference_semipoly(HEIS, HEIS)
    a = DimensionMultiset.from_mapping({2: 2})
    b = DimensionMultiset.from_mapping({1: 1, 4: 1})
    sp = difference_semipoly(a, b)
    assert sp.terms == ((1, Fraction(-1)), (2, Fraction(2)), (4, Fraction(-1)))
    assert descartes_bound(sp) == 4
    roots = probe_positive_roots(sp)
    assert len(roots) == 1
    lo, hi = roots[0]
    assert lo <= 1 <= hi


def test_descartes_examples():
    assert descartes_bound(SemiPolynomial.from_mapping({1: 3, 2: 1, 5: 7})) == 0
    # u - 1 in the u-variable: u = u^(-log d) needs d = 1/e, so use u^(-log 2) - 1 instead
    sp = SemiPolynomial.from_mapping({1: -1, 2: 1})
    assert descartes_bound(sp) == 2
    assert len(probe_positive_roots(sp)) == 1


def test_certified_sign():
    sp = SemiPolynomial.from_mapping({1: -1, 2: 1})  # 2^(-s) - 1 with u = e^s
    assert certified_sign(sp, Fraction(1, 2)) == 1
    assert certified_sign(sp, 2) == -1
    assert certified_sign(sp, 1) == 0
    close = Fraction(10 ** 30 + 1, 10 ** 30)
    assert certified_sign(sp, close) == -1


def _random_multiset(rng, max_distinct=3, max_degree=64):
    k = rng.randint(1, max_distinct)
    degrees = rng.sample(range(1, max_degree + 1), k)
    return DimensionMultiset.from_mapping({d: rng.randint(1, 6) for d in degrees})


def test_root_count_soundness():
    rng = random.Random(7)
    for _ in range(40):
        a, b = _random_multiset(rng), _random_multiset(rng)
        sp = difference_semipoly(a, b)
        if not sp:
            continue
        assert len(probe_positive_roots(sp, points_per_unit=4)) <= descartes_bound(sp)


def test_equivalence_examples():
    v = check_equivalence(HEIS, HEIS)
    assert v.equal and v.direct_equal and v.prop21_equal
    assert v.points == [-2] + list(range(0, 17, 2))
    small = DimensionMultiset.from_mapping({1: 4})
    other = DimensionMultiset.from_mapping({1: 2, 2: 1})
    v = check_equivalence(small, other)
    assert not v.equal and v.witness_s == -2
    js = v.to_json()
    assert set(js) >= {"n1", "n2", "mode", "points", "equal", "witness_s"}


def test_equivalence_same_order_different_degrees():
    # Q8 and D4 share degrees; these two order-24 multisets do not
    a = DimensionMultiset.from_mapping({1: 4, 2: 5})
    b = DimensionMultiset.from_mapping({1: 8, 2: 4})
    assert a.order == b.order == 24
    v = check_equivalence(a, b, "prop21")
    assert not v.equal
    assert v.witness_s == 0


def test_evaluation_points_count():
    z = DimensionMultiset.from_mapping({1: 1, 2: 2, 3: 1})
    pts = evaluation_points(z)
    assert len(pts) == 1 + 4 * z.N + 1
    with pytest.raises(ValueError):
        check_equivalence(z, z, mode="sideways")


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_prop21_agrees_with_direct(data):
    degrees = st.integers(1, 64)
    a = data.draw(st.dictionaries(degrees, st.integers(1, 5), min_size=1, max_size=3))
    if data.draw(st.booleans()):
        b = dict(a)
        if data.draw(st.booleans()):
            d = data.draw(degrees)
            b[d] = b.get(d, 0) + data.draw(st.integers(-1, 1))
    else:
        b = data.draw(st.dictionaries(degrees, st.integers(1, 5), min_size=1, max_size=3))
    z1 = DimensionMultiset.from_mapping(a)
    z2 = DimensionMultiset.from_mapping({d: m for d, m in b.items() if m > 0} or {1: 1})
    v = check_equivalence(z1, z2, "both")
    assert v.direct_equal == v.prop21_equal == (z1 == z2)


def test_sigma_examples():
    assert sigma_set({1}, 3) == {1, 2, 3}
    assert sigma_set({1, 2}, 2) == {1, 2, 3, 4}
    s = sigma_set({2, 3, 5}, 3)
    assert len(s) <= sigma_bound({2, 3, 5}, 3) == 81
    with pytest.raises(ValueError):
        sigma_set(set(), 2)
    with pytest.raises(OverflowError):
        sigma_set(set(range(1, 2000, 7)), 3, budget=1000)


@settings(max_examples=100, deadline=None)
@given(st.sets(st.integers(1, 30), min_size=1, max_size=4), st.integers(1, 3))
def test_sigma_bound_property(A, M):
    s = sigma_set(A, M)
    assert len(s) <= sigma_bound(A, M)
    assert set(A) <= s
    assert max(s) == M * max(A)


def test_restriction_compatible():
    assert restriction_compatible({1, 2, 3}, {1, 2, 3, 4}, 2)
    assert not restriction_compatible({1}, {3}, 2)
