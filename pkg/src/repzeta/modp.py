"""Dense linear algebra and polynomials over a prime field F_l with int64 numpy arrays.

All inputs are assumed reduced into ``range(l)``.  Products are chunked so
intermediate sums stay below 2**63; moduli up to ~3e9 are supported.
"""

from __future__ import annotations

import numpy as np
import sympy

_LIMIT = 1 << 62


def _check_modulus(l):
    if (l - 1) ** 2 >= _LIMIT:
        raise ValueError(f"modulus {l} too large for int64 kernels")


def next_prime_congruent_one(lower, modulus):
    """Smallest prime l > lower with l = 1 (mod modulus)."""
    l = (lower // modulus + 1) * modulus + 1
    while not sympy.isprime(l):
        l += modulus
    return l


def matmul(A, B, l):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    inner = A.shape[-1]
    step = max(1, _LIMIT // max(1, (l - 1) ** 2))
    if inner <= step:
        return (A @ B) % l
    out = np.zeros(A.shape[:-1] + B.shape[-1:], dtype=np.int64)
    for s in range(0, inner, step):
        out = (out + A[..., s:s + step] @ B[s:s + step]) % l
    return out


class Echelon:
    """Incrementally built, fully reduced row echelon basis over F_l.

    With ``track=True`` each basis row also records its expression in terms
    of the vectors passed to :meth:`add`, in insertion order.
    """

    def __init__(self, dim, l, track=False):
        self.l = l
        self.dim = dim
        self.rows = np.zeros((0, dim), dtype=np.int64)
        self.pivots = []
        self.track = track
        self.coef = np.zeros((0, 0), dtype=np.int64)
        self.count = 0

    def reduce(self, u):
        u = np.asarray(u, dtype=np.int64) % self.l
        if not self.pivots:
            return u, np.zeros(0, dtype=np.int64)
        w = u[self.pivots]
        return (u - matmul(w[None, :], self.rows, self.l)[0]) % self.l, w

    def add(self, u):
        """Insert u; return None if independent, else its coefficients on the inputs."""
        l = self.l
        res, w = self.reduce(u)
        t = self.count
        self.count += 1
        nz = np.nonzero(res)[0]
        if self.track:
            coef_u = np.zeros(self.count, dtype=np.int64)
            coef_u[t] = 1
            if len(w):
                coef_u[:t] = (coef_u[:t] - matmul(w[None, :], self.coef, l)[0]) % l
            self.coef = np.pad(self.coef, ((0, 0), (0, 1)))
        if len(nz) == 0:
            if self.track:
                return matmul(w[None, :], self.coef, l)[0][:t] if len(w) else np.zeros(t, dtype=np.int64)
            return w
        c = int(nz[0])
        scale = pow(int(res[c]), -1, l)
        res = res * scale % l
        if self.track:
            coef_u = coef_u * scale % l
        col = self.rows[:, c].copy()
        if len(col):
            self.rows = (self.rows - np.outer(col, res) % l) % l
            if self.track:
                self.coef = (self.coef - np.outer(col, coef_u) % l) % l
        self.rows = np.vstack([self.rows, res])
        if self.track:
            self.coef = np.vstack([self.coef, coef_u])
        self.pivots.append(c)
        return None

    @property
    def rank(self):
        return len(self.pivots)

    def sorted_basis(self):
        order = np.argsort(self.pivots)
        return self.rows[order], [self.pivots[i] for i in order]


def rref(M, l):
    """Reduced row echelon form of M over F_l; returns (rows, pivot columns)."""
    M = np.asarray(M, dtype=np.int64)
    ech = Echelon(M.shape[1], l)
    for row in M:
        ech.add(row)
        if ech.rank == M.shape[1]:
            break
    return ech.sorted_basis()


def rank(M, l):
    return len(rref(M, l)[1])


# -- polynomials: coefficient arrays, lowest degree first ------------------

def ptrim(a):
    a = np.asarray(a, dtype=np.int64)
    nz = np.nonzero(a)[0]
    return a[: nz[-1] + 1] if len(nz) else a[:0]


def pmul(a, b, l):
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    if (l - 1) ** 2 * min(len(a), len(b)) < _LIMIT:
        return ptrim(np.convolve(a, b) % l)
    out = np.zeros(len(a) + len(b) - 1, dtype=object)
    for i, x in enumerate(a.tolist()):
        if x:
            out[i:i + len(b)] += x * b.astype(object)
    return ptrim((out % l).astype(np.int64))


def pdivmod(a, b, l):
    a = ptrim(a).copy()
    b = ptrim(b)
    db = len(b) - 1
    if db < 0:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) - 1 < db:
        return np.zeros(0, dtype=np.int64), a
    inv = pow(int(b[-1]), -1, l)
    q = np.zeros(len(a) - db, dtype=np.int64)
    for i in range(len(a) - 1, db - 1, -1):
        c = int(a[i]) * inv % l
        if c:
            q[i - db] = c
            a[i - db:i + 1] = (a[i - db:i + 1] - c * b) % l
    return ptrim(q), ptrim(a[:db])


def pmonic(a, l):
    a = ptrim(a)
    if len(a) == 0:
        return a
    return a * pow(int(a[-1]), -1, l) % l


def pgcd(a, b, l):
    a, b = ptrim(a), ptrim(b)
    while len(b):
        a, b = b, pdivmod(a, b, l)[1]
    return pmonic(a, l)


class _Reducer:
    """Reduction modulo a fixed monic polynomial via a precomputed x^i table."""

    def __init__(self, m, l):
        self.l = l
        self.d = d = len(m) - 1
        low = (-m[:d]) % l  # x^d = -m_low
        table = np.zeros((max(d - 1, 0), d), dtype=np.int64)
        cur = low.copy()
        for i in range(d - 1):
            table[i] = cur
            # multiply by x: shift and fold the top coefficient
            top = int(cur[-1])
            cur = np.concatenate(([0], cur[:-1]))
            cur = (cur + top * low) % l
        self.table = table  # row i is x^(d+i) mod m

    def reduce(self, a):
        d = self.d
        if len(a) <= d:
            out = np.zeros(d, dtype=np.int64)
            out[: len(a)] = a
            return out
        hi = a[d:]
        return (a[:d] + matmul(hi[None, :], self.table[: len(hi)], self.l)[0]) % self.l


def ppowmod(base, e, m, l):
    red = _Reducer(m, l)
    d = red.d
    result = np.zeros(d, dtype=np.int64)
    result[0] = 1
    b = red.reduce(ptrim(base))
    while e:
        if e & 1:
            result = red.reduce(pmul(ptrim(result), ptrim(b), l))
        e >>= 1
        if e:
            b = red.reduce(pmul(ptrim(b), ptrim(b), l))
    return ptrim(result)


def roots_split(m, l, rng):
    """Roots of a monic squarefree m splitting into linear factors over F_l.

    Equal-degree splitting with gcd((x + a)^((l-1)/2) - 1, m) for random a.
    """
    m = pmonic(m, l)
    deg = len(m) - 1
    if deg <= 0:
        return []
    if deg == 1:
        return [int(-m[0] % l)]
    if l == 2:
        return [r for r in (0, 1) if _peval(m, r, l) == 0]
    for _ in range(200):
        a = int(rng.integers(0, l))
        h = ppowmod(np.array([a, 1], dtype=np.int64), (l - 1) // 2, m, l)
        h = h.copy() if len(h) else np.zeros(1, dtype=np.int64)
        h[0] = (h[0] - 1) % l
        g = pgcd(m, h, l)
        dg = len(g) - 1
        if 0 < dg < deg:
            other = pdivmod(m, g, l)[0]
            return sorted(roots_split(g, l, rng) + roots_split(other, l, rng))
    raise ArithmeticError("polynomial does not split into distinct linear factors")


def _peval(a, x, l):
    acc = 0
    for c in reversed(a.tolist()):
        acc = (acc * x + c) % l
    return acc


def quotient_by_root(m, r, l):
    """Coefficients of m(x) / (x - r) by synthetic division (m monic, m(r) = 0)."""
    m = m.tolist()
    d = len(m) - 1
    out = [0] * d
    carry = 0
    for i in range(d, 0, -1):
        carry = (m[i] + carry * r) % l
        out[i - 1] = carry
    return np.array(out, dtype=np.int64)


def minimal_polynomial_of_vector(O, v, l):
    """Monic minimal polynomial of v under O, plus the Krylov vectors v, Ov, ..."""
    d = O.shape[0]
    ech = Echelon(d, l, track=True)
    K = []
    u = np.asarray(v, dtype=np.int64) % l
    while True:
        rel = ech.add(u)
        if rel is not None:
            break
        K.append(u)
        u = matmul(O, u[:, None], l)[:, 0]
    return np.concatenate([(-rel) % l, [1]]).astype(np.int64), np.array(K)
