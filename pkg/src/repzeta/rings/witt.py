"""Truncated Witt vectors W_k(F_q) built from the universal Witt polynomials.

This is the slow, independent model of the Witt ring.  Group computations use
:class:`~repzeta.rings.galois.GaloisRing` instead; :func:`witt_to_padic`
connects the two for prime base fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy

from .base import FiniteRing, RingElement
from .galois import FiniteField, build_galois_ring

# A polynomial is a dict {exponent tuple: coefficient}.  Variables are
# X_0..X_{k-1}, Y_0..Y_{k-1} in that order.


def _poly_add(a, b, scale=1):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _poly_mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _poly_pow(a, n, nvars):
    result = {(0,) * nvars: 1}
    while n:
        if n & 1:
            result = _poly_mul(result, a)
        n >>= 1
        if n:
            a = _poly_mul(a, a)
    return result


def _var(i, nvars, power=1):
    e = [0] * nvars
    e[i] = power
    return {tuple(e): 1}


def ghost_polynomial(p, n, offset, nvars):
    """w_n(V) = sum_{i<=n} p^i V_i^(p^(n-i)) for variables starting at ``offset``."""
    out = {}
    for i in range(n + 1):
        out = _poly_add(out, _var(offset + i, nvars, p ** (n - i)), p ** i)
    return out


@dataclass(frozen=True)
class WittPolynomialSet:
    p: int
    k: int
    sums: tuple
    products: tuple

    def to_sympy(self, poly):
        X = sympy.symbols(f"X0:{self.k}")
        Y = sympy.symbols(f"Y0:{self.k}")
        gens = X + Y
        return sympy.Add(*[c * sympy.Mul(*[g ** e for g, e in zip(gens, exps)])
                           for exps, c in poly.items()])

    def symbols(self):
        return sympy.symbols(f"X0:{self.k}"), sympy.symbols(f"Y0:{self.k}")


class IntegralityError(ArithmeticError):
    """A derived Witt polynomial has a non-integral coefficient."""


def _divide_exact(poly, d):
    out = {}
    for e, c in poly.items():
        v = Fraction(c, d)
        if v.denominator != 1:
            raise IntegralityError(f"coefficient {v} of monomial {e} is not integral")
        out[e] = int(v)
    return out


@lru_cache(maxsize=None)
def derive_witt_polynomials(p, k):
    """Witt addition and multiplication polynomials S_0..S_{k-1}, P_0..P_{k-1}.

    Solved from the ghost-component identities over exact rationals; every
    coefficient is checked to be an integer.
    """
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("k must be positive")
    nv = 2 * k
    sums, prods = [], []
    # running powers S_i^(p^(n-i)), P_i^(p^(n-i))
    s_pows, p_pows = [], []
    for n in range(k):
        wx = ghost_polynomial(p, n, 0, nv)
        wy = ghost_polynomial(p, n, k, nv)
        s_num = _poly_add(wx, wy)
        p_num = _poly_mul(wx, wy)
        for i in range(n):
            s_pows[i] = _poly_pow(s_pows[i], p, nv)
            p_pows[i] = _poly_pow(p_pows[i], p, nv)
            s_num = _poly_add(s_num, s_pows[i], -p ** i)
            p_num = _poly_add(p_num, p_pows[i], -p ** i)
        s_n = _divide_exact(s_num, p ** n)
        p_n = _divide_exact(p_num, p ** n)
        sums.append(s_n)
        prods.append(p_n)
        s_pows.append(s_n)
        p_pows.append(p_n)
    return WittPolynomialSet(p, k, tuple(sums), tuple(prods))


class WittVector(RingElement):
    __slots__ = ()

    @property
    def components(self):
        F = self.ring.field
        return tuple(F.element(c) for c in self.ring.decode(self.code))

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


class WittRing(FiniteRing):
    kind = "witt"
    element_class = WittVector

    def __init__(self, field, k):
        if not isinstance(field, FiniteField):
            raise TypeError("base must be a FiniteField")
        super().__init__(field.p, k, field.f, field.modulus_coeffs)
        self.field = field
        self.polynomials = derive_witt_polynomials(field.p, k)
        self._minus_one = None

    def __repr__(self):
        return f"WittRing(F_{self.q}, k={self.k})"

    def decode(self, code):
        q = self.q
        out = []
        for _ in range(self.k):
            code, c = divmod(code, q)
            out.append(c)
        return tuple(out)

    def encode(self, comps):
        if len(comps) != self.k:
            raise ValueError(f"expected exactly {self.k} components")
        code = 0
        for c in reversed(comps):
            c = c.code if isinstance(c, RingElement) else self.field.from_int_code(int(c))
            code = code * self.q + c
        return code

    def from_components(self, comps):
        return self.element(self.encode(list(comps)))

    def _evaluate(self, polys, values):
        # integer coefficients only matter mod p in characteristic p
        F = self.field
        p = self.p
        out = []
        if F.f == 1:
            for poly in polys:
                acc = 0
                for exps, c in poly.items():
                    c %= p
                    if c:
                        term = c
                        for v, e in zip(values, exps):
                            if e:
                                term = term * pow(v, e, p) % p
                                if not term:
                                    break
                        acc += term
                out.append(acc % p)
            return out
        for poly in polys:
            acc = 0
            for exps, c in poly.items():
                c %= p
                if c:
                    term = F.from_int_code(c)
                    for v, e in zip(values, exps):
                        if e:
                            term = F.mul_codes(term, F.pow_codes(v, e))
                    acc = F.add_codes(acc, term)
            out.append(acc)
        return out

    def add_codes(self, a, b):
        vals = self.decode(a) + self.decode(b)
        return self.encode([self.field.element(c) for c in self._evaluate(self.polynomials.sums, vals)])

    def mul_codes(self, a, b):
        vals = self.decode(a) + self.decode(b)
        return self.encode([self.field.element(c) for c in self._evaluate(self.polynomials.products, vals)])

    def neg_codes(self, a):
        if self._minus_one is None:
            self._minus_one = next(y for y in range(self.order) if self.add_codes(1, y) == 0)
        return self.mul_codes(self._minus_one, a)

    @property
    def characteristic(self):
        return self.p ** self.k


def teichmuller(c, p, k):
    """Multiplicative lift of c in F_p to Z/p^k."""
    return pow(c % p, p ** (k - 1), p ** k)


def witt_to_padic(w):
    """Ring isomorphism W_k(F_p) -> Z/p^k, sum_i p^i * teichmuller(w_i)."""
    R = w.ring
    if not isinstance(R, WittRing) or R.field.f != 1:
        raise ValueError("witt_to_padic needs a Witt vector over a prime field")
    p, k = R.p, R.k
    N = p ** k
    value = sum(p ** i * teichmuller(c, p, k) for i, c in enumerate(R.decode(w.code))) % N
    return build_galois_ring(p, k, 1).from_coords([value])


@lru_cache(maxsize=None)
def build_witt_ring(p, k, f=1):
    from .galois import GF

    return WittRing(GF(p, f), k)
