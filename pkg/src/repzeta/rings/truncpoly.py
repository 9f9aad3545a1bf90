"""Truncated polynomial rings F_q[t]/(t^k)."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .base import FiniteRing, RingElement
from .galois import GF, FiniteField


class TruncPolyElement(RingElement):
    __slots__ = ()

    @property
    def coeffs(self):
        """Coefficients of ``t^0 .. t^(k-1)`` as field elements."""
        F = self.ring.field
        return tuple(F.element(c) for c in self.ring.decode(self.code))

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                s = str(c) if self.ring.field.f == 1 else f"({c})"
                parts.append(s if i == 0 else f"{s}*t" if i == 1 else f"{s}*t^{i}")
        return " + ".join(parts) or "0"


class TruncatedPolyRing(FiniteRing):
    kind = "truncpoly"
    element_class = TruncPolyElement

    def __init__(self, field, k):
        if not isinstance(field, FiniteField):
            raise TypeError("base must be a FiniteField")
        if k < 1:
            raise ValueError("k must be positive")
        super().__init__(field.p, k, field.f, field.modulus_coeffs)
        self.field = field

    def __repr__(self):
        return f"TruncatedPolyRing(F_{self.q}, k={self.k})"

    def decode(self, code):
        q = self.q
        out = []
        for _ in range(self.k):
            code, c = divmod(code, q)
            out.append(c)
        return tuple(out)

    def encode(self, coeffs):
        if len(coeffs) != self.k:
            raise ValueError(f"expected exactly {self.k} coefficients")
        code = 0
        for c in reversed(coeffs):
            c = c.code if isinstance(c, RingElement) else self.field.from_int_code(int(c))
            code = code * self.q + c
        return code

    def from_coeffs(self, coeffs):
        coeffs = list(coeffs) + [0] * (self.k - len(coeffs))
        return self.element(self.encode(coeffs))

    def from_int_code(self, n):
        return self.field.from_int_code(n)

    def add_codes(self, a, b):
        F = self.field
        return self.encode([F.element(F.add_codes(x, y)) for x, y in zip(self.decode(a), self.decode(b))])

    def neg_codes(self, a):
        F = self.field
        return self.encode([F.element(F.neg_codes(x)) for x in self.decode(a)])

    def mul_codes(self, a, b):
        F, k = self.field, self.k
        x, y = self.decode(a), self.decode(b)
        out = [0] * k
        for i in range(k):
            if x[i]:
                for j in range(k - i):
                    if y[j]:
                        out[i + j] = F.add_codes(out[i + j], F.mul_codes(x[i], y[j]))
        return self.encode([F.element(c) for c in out])

    def inv_codes(self, a):
        if not self.is_unit_code(a):
            raise ZeroDivisionError(f"{self.element(a)} is not a unit (constant term is zero)")
        # u = c0 (1 - n), u^-1 = c0^-1 (1 + n + ... + n^(k-1))
        F = self.field
        c0 = a % self.q
        c0_inv = F.inv_codes(c0)
        scaled = self.mul_codes(a, c0_inv)
        n = self.neg_codes(self.add_codes(scaled, self.neg_codes(1)))
        acc, term = 1, 1
        for _ in range(self.k - 1):
            term = self.mul_codes(term, n)
            acc = self.add_codes(acc, term)
        return self.mul_codes(acc, c0_inv)

    @property
    def characteristic(self):
        return self.p

    def _build_tables(self):
        ft = self.field.tables()
        q, k, n = self.q, self.k, self.order
        codes = np.arange(n, dtype=np.int64)
        C = np.stack([(codes // q ** i) % q for i in range(k)], axis=1)
        X = C[:, None, :]
        Y = C[None, :, :]
        add_c = ft.vadd(X, Y)
        prod = np.zeros((n, n, k), dtype=np.int64)
        for i in range(k):
            for j in range(k - i):
                prod[..., i + j] = ft.vadd(prod[..., i + j], ft.vmul(X[..., i], Y[..., j]))
        weights = q ** np.arange(k, dtype=np.int64)
        return add_c @ weights, prod @ weights


@lru_cache(maxsize=None)
def build_truncpoly_ring(p, k, f=1):
    return TruncatedPolyRing(GF(p, f), k)
