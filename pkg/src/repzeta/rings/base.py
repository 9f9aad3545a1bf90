"""Common machinery for finite commutative rings with integer-coded elements.

Every ring element is stored as a single canonical integer code in
``range(ring.order)``.  For the local rings used here the code is laid out so
that ``code % ring.q`` is the code of the image in the residue field, and the
codes of all lifts of a residue ``r`` are ``r + ring.q * j``.  This makes
level-by-level enumeration and reduction cheap in vectorized kernels.
"""

from __future__ import annotations

import json

import numpy as np

MAX_TABLE_ORDER = 2048


class RingMismatchError(ValueError):
    """Raised when elements of different rings are combined."""


class FiniteRing:
    kind = "ring"
    element_class = None

    def __init__(self, p, k, f, modulus_coeffs):
        self.p = p
        self.k = k
        self.f = f
        self.q = p ** f
        self.order = self.q ** k
        self.modulus_coeffs = tuple(modulus_coeffs)
        self._key = (self.kind, p, k, f, self.modulus_coeffs)
        self._tables = None

    # -- identity -------------------------------------------------------
    def to_json(self):
        return {"kind": self.kind, "p": self.p, "k": self.k, "f": self.f,
                "modulus_coeffs": list(self.modulus_coeffs)}

    def key(self):
        return json.dumps(self.to_json(), sort_keys=True)

    def __eq__(self, other):
        return isinstance(other, FiniteRing) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"{type(self).__name__}(p={self.p}, k={self.k}, f={self.f})"

    def __len__(self):
        return self.order

    def __iter__(self):
        return (self.element(c) for c in range(self.order))

    # -- code level arithmetic (overridden by subclasses) ----------------
    def add_codes(self, a, b):
        raise NotImplementedError

    def mul_codes(self, a, b):
        raise NotImplementedError

    def neg_codes(self, a):
        raise NotImplementedError

    def is_unit_code(self, a):
        return a % self.q != 0

    @property
    def unit_count(self):
        return self.q ** (self.k - 1) * (self.q - 1)

    def inv_codes(self, a):
        if not self.is_unit_code(a):
            raise ZeroDivisionError(f"{self.element(a)!r} is not a unit")
        return self.pow_codes(a, self.unit_count - 1)

    def pow_codes(self, a, e):
        if e < 0:
            a, e = self.inv_codes(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul_codes(result, a)
            e >>= 1
            if e:
                a = self.mul_codes(a, a)
        return result

    def from_int_code(self, n):
        # double-and-add on the image of 1
        neg = n < 0
        n = abs(n)
        result, base = 0, 1
        while n:
            if n & 1:
                result = self.add_codes(result, base)
            n >>= 1
            if n:
                base = self.add_codes(base, base)
        return self.neg_codes(result) if neg else result

    # -- elements ---------------------------------------------------------
    def element(self, code):
        code = int(code)
        if not 0 <= code < self.order:
            raise ValueError(f"code {code} out of range for {self!r}")
        return self.element_class(self, code)

    def __call__(self, value):
        if isinstance(value, RingElement):
            if value.ring != self:
                raise RingMismatchError(f"{value!r} does not belong to {self!r}")
            return value
        return self.element(self.from_int_code(int(value)))

    @property
    def zero(self):
        return self.element(0)

    @property
    def one(self):
        return self.element(1)

    def units(self):
        return [self.element(c) for c in range(self.order) if self.is_unit_code(c)]

    @property
    def characteristic(self):
        n, acc = 1, 1
        while acc != 0:
            acc = self.add_codes(acc, 1)
            n += 1
        return n

    # -- lookup tables for vectorized kernels ----------------------------
    def tables(self):
        """Return a :class:`RingTables` bundle, building it on first use."""
        if self._tables is None:
            if self.order > MAX_TABLE_ORDER:
                raise ValueError(f"{self!r} too large for lookup tables")
            add, mul = self._build_tables()
            self._tables = RingTables(self, add, mul)
        return self._tables

    def _build_tables(self):
        n = self.order
        add = np.empty((n, n), dtype=np.int64)
        mul = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(a, n):
                add[a, b] = add[b, a] = self.add_codes(a, b)
                mul[a, b] = mul[b, a] = self.mul_codes(a, b)
        return add, mul


class RingTables:
    """Flat addition/multiplication tables plus negation and inverse maps."""

    def __init__(self, ring, add, mul):
        n = ring.order
        self.order = n
        self.add = add
        self.mul = mul
        self.add_flat = np.ascontiguousarray(add).ravel()
        self.mul_flat = np.ascontiguousarray(mul).ravel()
        zero_pos = np.argmax(add == 0, axis=1)
        self.neg = zero_pos.astype(np.int64)
        inv = np.full(n, -1, dtype=np.int64)
        rows, cols = np.nonzero(mul == 1)
        inv[rows] = cols
        self.inv = inv
        self.unit_mask = inv >= 0
        for t in (self.add, self.mul, self.add_flat, self.mul_flat, self.neg, self.inv, self.unit_mask):
            t.flags.writeable = False

    def vadd(self, a, b):
        return self.add_flat[a * self.order + b]

    def vmul(self, a, b):
        return self.mul_flat[a * self.order + b]

    def vsub(self, a, b):
        return self.add_flat[a * self.order + self.neg[b]]


class RingElement:
    """An element of a :class:`FiniteRing`, immutable and hashable."""

    __slots__ = ("ring", "code")

    def __init__(self, ring, code):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "code", code)

    def __setattr__(self, name, value):
        raise AttributeError("ring elements are immutable")

    def _other(self, other):
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingMismatchError(f"cannot combine {self.ring!r} with {other.ring!r}")
            return other.code
        if isinstance(other, int):
            return self.ring.from_int_code(other)
        return None

    def __add__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return self.ring.element(self.ring.add_codes(self.code, b))

    __radd__ = __add__

    def __neg__(self):
        return self.ring.element(self.ring.neg_codes(self.code))

    def __sub__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return self.ring.element(self.ring.add_codes(self.code, self.ring.neg_codes(b)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return self.ring.element(self.ring.mul_codes(self.code, b))

    __rmul__ = __mul__

    def __pow__(self, e):
        return self.ring.element(self.ring.pow_codes(self.code, int(e)))

    def inverse(self):
        return self.ring.element(self.ring.inv_codes(self.code))

    def __truediv__(self, other):
        b = self._other(other)
        if b is None:
            return NotImplemented
        return self * self.ring.element(self.ring.inv_codes(b))

    def is_unit(self):
        return self.ring.is_unit_code(self.code)

    def is_zero(self):
        return self.code == 0

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.ring == other.ring and self.code == other.code
        if isinstance(other, int):
            return self.code == self.ring.from_int_code(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.code))

    def __int__(self):
        return self.code

    def __repr__(self):
        return f"{type(self).__name__}({self}, ring={self.ring!r})"
