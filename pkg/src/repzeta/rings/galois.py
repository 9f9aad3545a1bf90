"""Finite fields F_{p^f} and Galois rings GR(p^k, f).

``GR(p^k, f) = (Z/p^k)[x] / (m)`` where ``m`` is the monic integer lift
(coefficients in ``[0, p)``) of the chosen irreducible over F_p.  A finite
field is the case ``k = 1``; ``GR(p^k, 1)`` is ``Z/p^k``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import sympy

from . import polyfp
from .base import FiniteRing, RingElement


class GaloisRingElement(RingElement):
    __slots__ = ()

    @property
    def coords(self):
        """Coefficients of ``1, x, ..., x^(f-1)`` as integers mod p^k."""
        return self.ring.decode(self.code)

    def __str__(self):
        c = self.coords
        if self.ring.f == 1:
            return str(c[0])
        terms = [f"{a}*x^{i}" if i > 1 else (f"{a}*x" if i == 1 else str(a))
                 for i, a in enumerate(c) if a]
        return " + ".join(terms) or "0"


class FieldElement(GaloisRingElement):
    __slots__ = ()


class GaloisRing(FiniteRing):
    kind = "galois"
    element_class = GaloisRingElement

    def __init__(self, p, k, f=1, modulus=None):
        if not sympy.isprime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1 or f < 1:
            raise ValueError("k and f must be positive")
        if modulus is None:
            modulus = polyfp.smallest_irreducible(p, f)
        modulus = [int(c) for c in modulus]
        if len(modulus) != f + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree f")
        if not polyfp.is_irreducible(modulus, p):
            raise ValueError("modulus is not irreducible mod p")
        super().__init__(p, k, f, modulus)
        self.N = p ** k
        self._mod = tuple(c % self.N for c in modulus)

    # coordinates <-> code: base-p digit l*f + j of the code is digit l of coordinate j
    def decode(self, code):
        p, f = self.p, self.f
        coords = [0] * f
        scale = 1
        for _ in range(self.k):
            for j in range(f):
                code, d = divmod(code, p)
                coords[j] += d * scale
            scale *= p
        return tuple(coords)

    def encode(self, coords):
        if len(coords) != self.f:
            raise ValueError(f"expected {self.f} coordinates")
        p, f = self.p, self.f
        coords = [c % self.N for c in coords]
        code, weight = 0, 1
        for _ in range(self.k):
            for j in range(f):
                coords[j], d = divmod(coords[j], p)
                code += d * weight
                weight *= p
        return code

    def from_coords(self, coords):
        return self.element(self.encode(coords))

    def from_int_code(self, n):
        return self.encode([n] + [0] * (self.f - 1))

    def add_codes(self, a, b):
        x, y = self.decode(a), self.decode(b)
        return self.encode([u + v for u, v in zip(x, y)])

    def neg_codes(self, a):
        return self.encode([-u for u in self.decode(a)])

    def _reduce(self, prod):
        f, N, m = self.f, self.N, self._mod
        for i in range(len(prod) - 1, f - 1, -1):
            c = prod[i] % N
            if c:
                for j in range(f):
                    prod[i - f + j] -= c * m[j]
            prod[i] = 0
        return prod[:f]

    def mul_codes(self, a, b):
        x, y = self.decode(a), self.decode(b)
        f = self.f
        prod = [0] * (2 * f - 1)
        for i, u in enumerate(x):
            if u:
                for j, v in enumerate(y):
                    prod[i + j] += u * v
        return self.encode(self._reduce(prod))

    def inv_codes(self, a):
        if not self.is_unit_code(a):
            raise ZeroDivisionError(f"{self.element(a)} is not a unit in {self!r}")
        if self.f == 1:
            return self.encode([pow(self.decode(a)[0], -1, self.N)])
        return super().inv_codes(a)

    @property
    def characteristic(self):
        return self.N

    def _decode_all(self):
        codes = np.arange(self.order, dtype=np.int64)
        coords = np.zeros((self.order, self.f), dtype=np.int64)
        scale = 1
        for _ in range(self.k):
            for j in range(self.f):
                coords[:, j] += (codes % self.p) * scale
                codes //= self.p
            scale *= self.p
        return coords

    def _encode_all(self, coords):
        coords = coords % self.N
        code = np.zeros(coords.shape[:-1], dtype=np.int64)
        weight = 1
        for _ in range(self.k):
            for j in range(self.f):
                code += (coords[..., j] % self.p) * weight
                coords[..., j] //= self.p
                weight *= self.p
        return code

    def _build_tables(self):
        C = self._decode_all()
        X = C[:, None, :]
        Y = C[None, :, :]
        add = self._encode_all(X + Y)
        f, N = self.f, self.N
        prod = np.zeros((self.order, self.order, 2 * f - 1), dtype=np.int64)
        for i in range(f):
            for j in range(f):
                prod[..., i + j] = (prod[..., i + j] + X[..., i] * Y[..., j]) % N
        for i in range(2 * f - 2, f - 1, -1):
            c = prod[..., i] % N
            for j in range(f):
                prod[..., i - f + j] = (prod[..., i - f + j] - c * self._mod[j]) % N
        mul = self._encode_all(prod[..., :f])
        return add, mul


class FiniteField(GaloisRing):
    kind = "field"
    element_class = FieldElement

    def __init__(self, p, f=1, modulus=None):
        super().__init__(p, 1, f, modulus)

    def __repr__(self):
        return f"FiniteField({self.q})" if self.f == 1 else f"FiniteField({self.p}^{self.f})"

    def trace_codes(self, a):
        """Absolute trace F_q -> F_p as an integer in range(p)."""
        t, x = 0, a
        for _ in range(self.f):
            t = self.add_codes(t, x)
            x = self.pow_codes(x, self.p)
        return self.decode(t)[0]


@lru_cache(maxsize=None)
def GF(p, f=1):
    return FiniteField(p, f)


@lru_cache(maxsize=None)
def build_galois_ring(p, k, f=1):
    """GR(p^k, f) with the deterministic monic lift of the smallest irreducible."""
    return GaloisRing(p, k, f)
