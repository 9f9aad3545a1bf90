"""Exact elements of Q(zeta_p) in the power basis 1, zeta, ..., zeta^(p-2)."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction


class CyclotomicValue:
    """``scale * sum_t coeffs[t] * zeta_p^t`` with integer coeffs, t < p - 1.

    The representation is canonical: coefficients are reduced by
    ``1 + zeta + ... + zeta^(p-1) = 0``, their gcd is moved into ``scale``,
    and the first nonzero coefficient is positive.
    """

    __slots__ = ("p", "coeffs", "scale")

    def __init__(self, p, coeffs, scale=1):
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) == p:
            top = coeffs[-1]
            coeffs = [c - top for c in coeffs[:-1]]
        if len(coeffs) != p - 1:
            raise ValueError(f"expected {p - 1} or {p} coefficients")
        scale = Fraction(scale)
        g = math.gcd(*coeffs) if any(coeffs) else 0
        if g == 0 or scale == 0:
            coeffs, scale = [0] * (p - 1), Fraction(1)
        else:
            lead = next(c for c in coeffs if c)
            if lead < 0:
                g = -g
            coeffs = [c // g for c in coeffs]
            scale *= g
        self.p = p
        self.coeffs = tuple(coeffs)
        self.scale = scale

    @classmethod
    def from_exponent_counts(cls, p, counts, scale=1):
        """sum_a counts[a] * zeta^a for a in range(p)."""
        return cls(p, list(counts), scale)

    @classmethod
    def rational(cls, p, value):
        return cls(p, [1] + [0] * (p - 2), value)

    def _full(self):
        # coefficient vector of length p over exponents 0..p-1, as Fractions
        return [self.scale * c for c in self.coeffs] + [Fraction(0)]

    @classmethod
    def _from_full(cls, p, full):
        den = math.lcm(*[Fraction(x).denominator for x in full])
        ints = [int(Fraction(x) * den) for x in full]
        return cls(p, ints, Fraction(1, den))

    def __add__(self, other):
        if not isinstance(other, CyclotomicValue):
            other = CyclotomicValue.rational(self.p, other)
        a, b = self._full(), other._full()
        return CyclotomicValue._from_full(self.p, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicValue(self.p, self.coeffs, -self.scale)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        p = self.p
        if not isinstance(other, CyclotomicValue):
            return CyclotomicValue(p, self.coeffs, self.scale * Fraction(other))
        out = [0] * p
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[(i + j) % p] += x * y
        return CyclotomicValue(p, out, self.scale * other.scale)

    __rmul__ = __mul__

    def conjugate(self):
        p = self.p
        out = [0] * p
        for i, x in enumerate(self.coeffs):
            out[(-i) % p] += x
        return CyclotomicValue(p, out, self.scale)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.scale * self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, CyclotomicValue):
            return (self.p, self.coeffs, self.scale) == (other.p, other.coeffs, other.scale)
        if isinstance(other, (int, Fraction)):
            return self == CyclotomicValue.rational(self.p, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.coeffs, self.scale))

    def __complex__(self):
        z = cmath.exp(2j * cmath.pi / self.p)
        return complex(sum(c * z ** t for t, c in enumerate(self.coeffs)) * float(self.scale))

    def __repr__(self):
        terms = [f"{c}*z^{t}" if t else str(c) for t, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms) or "0"
        return f"CyclotomicValue(p={self.p}, {self.scale} * ({body}))"
