import itertools
import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from repzeta.rings import (GF, GaloisRing, RingMismatchError, TruncatedPolyRing,
                           build_galois_ring, build_truncpoly_ring, build_witt_ring,
                           derive_witt_polynomials, ghost_polynomial, ring_from_json,
                           teichmuller, witt_to_padic)
from repzeta.rings.polyfp import is_irreducible, smallest_irreducible


def test_prime_field_examples():
    F5 = GF(5)
    assert F5(2) + F5(4) == F5(1)
    F7 = GF(7)
    assert F7(3).inverse() == F7(5)
    assert F7(3) * F7(5) == F7.one


def test_f4_generator_squares():
    F4 = GF(2, 2)
    x = F4.from_coords([0, 1])
    assert x * x == x + F4.one
    assert x ** 3 == F4.one


def test_truncated_poly_examples():
    R = build_truncpoly_ring(5, 2)
    t = R.from_coeffs([0, 1])
    one = R.one
    assert (one + t) * (one - t) == one
    R3 = build_truncpoly_ring(3, 2)
    t3 = R3.from_coeffs([0, 1])
    assert (R3.one + t3).inverse() == R3.from_coeffs([1, 2])
    R2 = build_truncpoly_ring(2, 4)
    u = R2.one + R2.from_coeffs([0, 1])
    assert u ** 4 == R2.one
    assert u ** 2 != R2.one


def test_galois_ring_examples():
    R = build_galois_ring(2, 2, 2)
    x = R.from_coords([0, 1])
    assert x * x == R.from_coords([3, 3])
    Z9 = build_galois_ring(3, 2)
    assert Z9(4) + Z9(7) == Z9(2)
    assert Z9(2).inverse() == Z9(5)
    assert not Z9(3).is_unit()


def test_smallest_irreducible_examples():
    assert smallest_irreducible(2, 2) == [1, 1, 1]
    assert smallest_irreducible(2, 3) == [1, 1, 0, 1]
    assert smallest_irreducible(3, 2) == [1, 0, 1]
    assert not is_irreducible([1, 0, 1], 2)


@pytest.mark.parametrize("p,f", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_irreducible_matches_sympy(p, f):
    x = sympy.symbols("x")
    m = smallest_irreducible(p, f)
    poly = sympy.Poly(list(reversed(m)), x, modulus=p)
    assert poly.is_irreducible
    # no irreducible with a smaller code exists
    for code in range(p ** f):
        coeffs = [(code // p ** i) % p for i in range(f)] + [1]
        if coeffs == m:
            break
        if coeffs[0] == 0:
            continue
        assert not sympy.Poly(list(reversed(coeffs)), x, modulus=p).is_irreducible


SMALL_RINGS = [
    GF(2), GF(5), GF(2, 2), GF(3, 2), GF(2, 3),
    build_galois_ring(2, 2), build_galois_ring(2, 3), build_galois_ring(3, 2),
    build_galois_ring(2, 2, 2), build_galois_ring(5, 2),
    build_truncpoly_ring(2, 2), build_truncpoly_ring(2, 3), build_truncpoly_ring(3, 2),
    build_truncpoly_ring(2, 2, 2), build_truncpoly_ring(5, 2),
    build_witt_ring(2, 2), build_witt_ring(3, 2), build_witt_ring(2, 3),
]


@pytest.mark.parametrize("R", SMALL_RINGS, ids=repr)
def test_ring_axioms_exhaustive(R):
    T = R.tables()
    n = R.order
    a = np.arange(n)[:, None, None]
    b = np.arange(n)[None, :, None]
    c = np.arange(n)[None, None, :]
    add, mul = T.add, T.mul
    assert np.array_equal(add, add.T)
    assert np.array_equal(mul, mul.T)
    assert np.array_equal(add[add[a, b], c], add[a, add[b, c]])
    assert np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]])
    assert np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]])
    assert np.all(add[0] == np.arange(n))
    assert np.all(mul[R.one.code] == np.arange(n))
    assert np.all(add[np.arange(n), T.neg] == 0)


@pytest.mark.parametrize("R", SMALL_RINGS, ids=repr)
def test_tables_match_scalar_ops(R):
    T = R.tables()
    for x, y in itertools.product(range(R.order), repeat=2):
        assert T.add[x, y] == R.add_codes(x, y)
        assert T.mul[x, y] == R.mul_codes(x, y)


@pytest.mark.parametrize("R", SMALL_RINGS, ids=repr)
def test_units(R):
    T = R.tables()
    q, k = R.q, R.k
    assert R.unit_count == (q - 1) * q ** (k - 1)
    assert int(T.unit_mask.sum()) == R.unit_count
    for x in range(R.order):
        if T.unit_mask[x]:
            assert T.mul[x, T.inv[x]] == R.one.code
        else:
            assert T.inv[x] == -1
            assert not R.element(x).is_unit()


@pytest.mark.parametrize("p,k,f", [(2, 2, 1), (3, 3, 1), (2, 2, 3), (3, 2, 2), (5, 3, 1)])
def test_galois_ring_counts(p, k, f):
    R = build_galois_ring(p, k, f)
    assert R.order == p ** (k * f)
    assert R.characteristic == p ** k
    assert R.unit_count == p ** (f * (k - 1)) * (p ** f - 1)
    # the residue field of GR(p^k, f) is F_{p^f}
    assert len({c % R.q for c in range(R.order)}) == p ** f


def test_mixing_rings_rejected():
    with pytest.raises(RingMismatchError):
        GF(5)(1) + GF(7)(1)
    with pytest.raises(RingMismatchError):
        build_galois_ring(5, 2)(1) * build_truncpoly_ring(5, 2).one


def test_non_unit_inverse_raises():
    R = build_truncpoly_ring(3, 2)
    t = R.from_coeffs([0, 1])
    with pytest.raises(ZeroDivisionError):
        t.inverse()


@pytest.mark.parametrize("R", [GF(3, 2), build_galois_ring(2, 3, 2), build_truncpoly_ring(5, 3),
                               build_witt_ring(3, 2)], ids=repr)
def test_ring_json_roundtrip(R):
    obj = R.to_json()
    assert set(obj) == {"kind", "p", "k", "f", "modulus_coeffs"}
    assert ring_from_json(obj) == R


@settings(max_examples=200, deadline=None)
@given(p=st.sampled_from([2, 3, 5, 7]), k=st.integers(1, 5), data=st.data())
def test_truncated_inverse_property(p, k, data):
    R = build_truncpoly_ring(p, k)
    coeffs = data.draw(st.lists(st.integers(0, p - 1), min_size=k, max_size=k))
    coeffs[0] = data.draw(st.integers(1, p - 1))
    u = R.from_coeffs(coeffs)
    assert u * u.inverse() == R.one
    assert u ** (R.unit_count) == R.one


@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_galois_ring_modulus_is_integer_arithmetic(data):
    p = data.draw(st.sampled_from([2, 3, 5, 7]))
    k = data.draw(st.integers(1, 4))
    R = build_galois_ring(p, k)
    x, y = data.draw(st.integers(0, p ** k - 1)), data.draw(st.integers(0, p ** k - 1))
    assert int(R(x) * R(y)) == x * y % p ** k
    assert int(R(x) - R(y)) == (x - y) % p ** k


def _eval(poly, point):
    total = 0
    for exps, c in poly.items():
        term = c
        for v, e in zip(point, exps):
            if e:
                term *= v ** e
        total += term
    return total


def _sympy_ghost(p, n, V):
    return sum(p ** i * V[i] ** (p ** (n - i)) for i in range(n + 1))


def test_witt_first_polynomials_closed_form():
    for p in (2, 3, 5):
        W = derive_witt_polynomials(p, 2)
        X, Y = W.symbols()
        S1 = sympy.expand(W.to_sympy(W.sums[1]))
        expect = X[1] + Y[1] + sympy.expand((X[0] ** p + Y[0] ** p - (X[0] + Y[0]) ** p) / p)
        assert sympy.expand(S1 - expect) == 0
        P1 = sympy.expand(W.to_sympy(W.products[1]))
        assert sympy.expand(P1 - (X[0] ** p * Y[1] + X[1] * Y[0] ** p + p * X[1] * Y[1])) == 0


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_witt_ghost_identity_symbolic(p, k):
    W = derive_witt_polynomials(p, k)
    X, Y = W.symbols()
    S = [W.to_sympy(s) for s in W.sums]
    P = [W.to_sympy(q) for q in W.products]
    for n in range(k):
        wx, wy = _sympy_ghost(p, n, X), _sympy_ghost(p, n, Y)
        assert sympy.expand(_sympy_ghost(p, n, S) - wx - wy) == 0
        assert sympy.expand(_sympy_ghost(p, n, P) - wx * wy) == 0


@pytest.mark.parametrize("p,k", [(2, 4), (3, 4), (5, 2), (5, 3), (5, 4)])
def test_witt_ghost_identity_at_integer_points(p, k):
    W = derive_witt_polynomials(p, k)
    rng = random.Random(p * 100 + k)
    for _ in range(3):
        x = [rng.randint(-20, 20) for _ in range(k)]
        y = [rng.randint(-20, 20) for _ in range(k)]
        point = x + y
        s = [_eval(poly, point) for poly in W.sums]
        m = [_eval(poly, point) for poly in W.products]
        for n in range(k):
            g = lambda v: sum(p ** i * v[i] ** (p ** (n - i)) for i in range(n + 1))
            assert g(s) == g(x) + g(y)
            assert g(m) == g(x) * g(y)


def test_ghost_polynomial_shape():
    w = ghost_polynomial(3, 2, 0, 3)
    assert w == {(9, 0, 0): 1, (0, 3, 0): 3, (0, 0, 1): 9}


def test_witt_examples():
    W = build_witt_ring(2, 2)
    one = W.from_components([1, 0])
    assert one + one == W.from_components([0, 1])
    W3 = build_witt_ring(3, 2)
    assert int(witt_to_padic(W3.from_components([2, 0]))) == 8
    assert teichmuller(2, 3, 2) == 8
    assert teichmuller(1, 5, 3) == 1


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2)])
def test_witt_to_padic_is_bijective_ring_map(p, k):
    W = build_witt_ring(p, k)
    images = {int(witt_to_padic(W.element(c))) for c in range(W.order)}
    assert images == set(range(p ** k))
    phi = [witt_to_padic(W.element(c)) for c in range(W.order)]
    for a, b in itertools.product(range(W.order), repeat=2):
        assert witt_to_padic(W.element(a) + W.element(b)) == phi[a] + phi[b]
        assert witt_to_padic(W.element(a) * W.element(b)) == phi[a] * phi[b]


def test_teichmuller_is_multiplicative():
    for p, k in [(3, 3), (5, 2), (7, 2)]:
        for a in range(p):
            t = teichmuller(a, p, k)
            assert t % p == a
            assert pow(t, p, p ** k) == t
            for b in range(p):
                assert teichmuller(a * b, p, k) == t * teichmuller(b, p, k) % p ** k


def test_galois_ring_rejects_reducible_modulus():
    with pytest.raises(ValueError):
        GaloisRing(2, 2, 2, modulus=[1, 0, 1])


def test_truncpoly_over_extension_field():
    F = GF(2, 2)
    R = TruncatedPolyRing(F, 3)
    assert R.order == 64
    assert R.unit_count == 3 * 16
