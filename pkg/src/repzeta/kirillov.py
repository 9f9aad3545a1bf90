"""Orbit method for unitriangular groups over finite fields.

For p > n, log maps U_n(F) bijectively onto the strictly upper triangular
matrices, and irreducible characters of U_n(F) correspond to coadjoint
orbits; the orbit Omega gives a character of degree sqrt(|Omega|).

exp and log only need 1/k! for k < n (the k = n terms vanish on nilpotent
n x n matrices), so they are available for p >= n.  The coadjoint action is
plain matrix conjugation and is computed in any characteristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .chartab import DimensionMultiset
from .cyclotomic import CyclotomicValue
from .groups import DEFAULT_SWEEP_BUDGET, BudgetExceeded, GroupSpec, matmul
from .rings import FiniteField, RingElement


class CharacteristicTooSmall(ValueError):
    pass


def _check_char(ring, n):
    if ring.p < n:
        raise CharacteristicTooSmall(f"need residue characteristic >= {n}, got {ring.p}")


def _as_codes(M):
    if isinstance(M, np.ndarray):
        return M.astype(np.int64)
    return np.array([[c.code if isinstance(c, RingElement) else int(c) for c in row] for row in M],
                    dtype=np.int64)


def _nilpotent(T, A, n):
    P = A
    for _ in range(n - 1):
        P = matmul(T, P, A)
    return np.all(P == 0, axis=(-2, -1))


def matrix_log(ring, u):
    """log(u) = -sum_{k=1..n} (I - u)^k / k for unipotent u (batched over leading axes)."""
    u = _as_codes(u)
    n = u.shape[-1]
    _check_char(ring, n)
    T = ring.tables()
    I = np.broadcast_to(np.eye(n, dtype=np.int64), u.shape)
    X = T.vsub(I, u)
    if not np.all(_nilpotent(T, X, n)):
        raise ValueError("matrix is not unipotent")
    out = np.zeros_like(u)
    term = X
    for k in range(1, n):
        out = T.vsub(out, T.vmul(term, ring.inv_codes(ring.from_int_code(k))))
        term = matmul(T, term, X)
    return out


def matrix_exp(ring, A):
    """exp(A) = sum_{k=0..n} A^k / k! for nilpotent A (batched)."""
    A = _as_codes(A)
    n = A.shape[-1]
    _check_char(ring, n)
    T = ring.tables()
    if not np.all(_nilpotent(T, A, n)):
        raise ValueError("matrix is not nilpotent")
    I = np.broadcast_to(np.eye(n, dtype=np.int64), A.shape)
    out = I.copy()
    term = I
    for k in range(1, n):
        term = matmul(T, term, A)
        out = T.vadd(out, T.vmul(term, ring.inv_codes(ring.from_int_code(math.factorial(k)))))
    return out


@dataclass
class NilpotentLieAlgebra:
    """Span of elementary matrices E_ij (i < j) with its bracket.

    ``structure[s, t]`` is ``(u, sign)`` meaning [b_s, b_t] = sign * b_u, or
    None when the bracket vanishes.
    """

    field: FiniteField
    n: int
    positions: list
    structure: dict

    @property
    def dimension(self):
        return len(self.positions)

    def bracket(self, x, y):
        """Bracket of coordinate vectors (ring codes)."""
        F = self.field
        out = [0] * self.dimension
        for (s, t), (u, sign) in self.structure.items():
            if x[s] and y[t]:
                c = F.mul_codes(x[s], y[t])
                out[u] = F.add_codes(out[u], c if sign > 0 else F.neg_codes(c))
        return out

    def to_matrix(self, x):
        M = np.zeros((self.n, self.n), dtype=np.int64)
        for (i, j), c in zip(self.positions, x):
            M[i, j] = c
        return M

    def from_matrix(self, M):
        return [int(M[i, j]) for i, j in self.positions]


def lie_algebra_of(spec, check_characteristic=True):
    """Lie algebra of U_n (or the Heisenberg group U_3) over a prime-power field.

    With ``check_characteristic`` the field must satisfy p >= n so that it is
    the log image of the group.  Orbit sweeps alone work without it.
    """
    if spec.scheme not in ("U", "Heisenberg"):
        raise ValueError("orbit method is implemented for unitriangular groups only")
    F = spec.ring
    if not isinstance(F, FiniteField):
        raise ValueError("Lie algebra needs a field")
    n = spec.n
    if check_characteristic:
        _check_char(F, n)
    positions = [(i, j) for i in range(n) for j in range(i + 1, n)]
    index = {pos: s for s, pos in enumerate(positions)}
    structure = {}
    for s, (a, b) in enumerate(positions):
        for t, (c, d) in enumerate(positions):
            # [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb
            if b == c:
                structure[(s, t)] = (index[(a, d)], 1)
            elif d == a:
                structure[(s, t)] = (index[(c, b)], -1)
    return NilpotentLieAlgebra(F, n, positions, structure)


@dataclass(frozen=True)
class CoadjointOrbit:
    """An orbit of functionals, stored as sorted integer keys."""

    keys: tuple

    @property
    def size(self):
        return len(self.keys)


def _functional_key(F, coords):
    key = np.zeros(coords.shape[:-1], dtype=np.int64)
    for t in range(coords.shape[-1]):
        key = key * F.order + coords[..., t]
    return key


def decode_functionals(algebra, keys):
    q, D = algebra.field.order, algebra.dimension
    keys = np.asarray(keys, dtype=np.int64)
    out = np.zeros(keys.shape + (D,), dtype=np.int64)
    for t in range(D - 1, -1, -1):
        out[..., t] = keys % q
        keys = keys // q
    return out


def coadjoint_action(algebra, group, functional):
    """Coordinates of Ad*(g) f for every g in the group, with (Ad*(g) f)(X) = f(g^-1 X g).

    (g.f)_ab = sum_{i <= a, j >= b} (g^-1)_ia f_ij g_bj, using that g and
    g^-1 are upper unitriangular and f lives on strictly upper positions.
    """
    T = algebra.field.tables()
    G = group.elements
    Ginv = group.inverses
    support = [(i, j, int(c)) for (i, j), c in zip(algebra.positions, functional) if c]
    out = np.zeros((group.order, algebra.dimension), dtype=np.int64)
    for t, (a, b) in enumerate(algebra.positions):
        acc = np.zeros(group.order, dtype=np.int64)
        for i, j, c in support:
            if i > a or j < b:
                continue
            left = Ginv[:, i, a] if i < a else None
            right = G[:, b, j] if j > b else None
            term = np.full(group.order, c, dtype=np.int64)
            if left is not None:
                term = T.vmul(term, left)
            if right is not None:
                term = T.vmul(term, right)
            acc = T.vadd(acc, term)
        out[:, t] = acc
    return out


def coadjoint_orbits(algebra, group, budget=DEFAULT_SWEEP_BUDGET):
    """Partition all q^D functionals into coadjoint orbits of ``group``."""
    F = algebra.field
    D = algebra.dimension
    total = F.order ** D
    visited = np.zeros(total, dtype=bool)
    orbits = []
    spent = 0
    cursor = 0
    while cursor < total:
        spent += group.order
        if spent > budget:
            raise BudgetExceeded(f"coadjoint sweep exceeded {budget} operations")
        f = decode_functionals(algebra, cursor)
        keys = np.unique(_functional_key(F, coadjoint_action(algebra, group, f)))
        if np.any(visited[keys]):
            raise ArithmeticError("coadjoint orbits overlap")
        visited[keys] = True
        orbits.append(CoadjointOrbit(tuple(int(k) for k in keys)))
        while cursor < total and visited[cursor]:
            cursor += 1
    return orbits


def orbit_method_degrees(orbits):
    degrees = []
    for orb in orbits:
        d = math.isqrt(orb.size)
        if d * d != orb.size:
            raise ArithmeticError(f"orbit of size {orb.size} is not a perfect square")
        degrees.append(d)
    return DimensionMultiset.from_degrees(degrees)


@dataclass(frozen=True)
class AdditiveCharacter:
    """x -> zeta_p^Tr(a * x) on a finite field; nontrivial for a != 0."""

    field: FiniteField
    multiplier: int = 1

    def __post_init__(self):
        F = self.field
        a = F.from_int_code(self.multiplier) if isinstance(self.multiplier, int) else self.multiplier
        if a % F.order == 0:
            raise ValueError("multiplier must be nonzero")
        if not any(F.trace_codes(x) for x in range(F.order)):
            raise ValueError("trace is not surjective")

    def exponent_table(self):
        """Tr(a * x) mod p for every field code x."""
        F = self.field
        a = F.from_int_code(self.multiplier)
        return np.array([F.trace_codes(F.mul_codes(a, x)) for x in range(F.order)], dtype=np.int64)


def _pairing_exponents(algebra, phi, functionals, X):
    """Exponents Tr(a * f(X)) for each functional row and nilpotent coordinate vector X."""
    T = algebra.field.tables()
    acc = np.zeros(functionals.shape[:-1], dtype=np.int64)
    for t in range(algebra.dimension):
        acc = T.vadd(acc, T.vmul(functionals[..., t], int(X[t])))
    return phi.exponent_table()[acc]


def kirillov_character(algebra, orbit, g, phi):
    """chi_Omega(g) = |Omega|^(-1/2) sum_{w in Omega} phi(w(log g)), exactly."""
    F = algebra.field
    X = algebra.from_matrix(matrix_log(F, _as_codes(g)))
    funcs = decode_functionals(algebra, orbit.keys)
    exps = _pairing_exponents(algebra, phi, funcs, X)
    counts = np.bincount(exps, minlength=F.p)
    root = math.isqrt(orbit.size)
    return CyclotomicValue.from_exponent_counts(F.p, counts, Fraction(1, root))


def character_histograms(algebra, orbit, group, phi):
    """Exponent histograms (|G| x p) of the unnormalized Kirillov sums on all of G."""
    F = algebra.field
    logs = matrix_log(F, group.elements)
    X = np.stack([logs[:, i, j] for i, j in algebra.positions], axis=-1)  # |G| x D
    funcs = decode_functionals(algebra, orbit.keys)  # |Omega| x D
    T = F.tables()
    acc = np.zeros((group.order, len(funcs)), dtype=np.int64)
    for t in range(algebra.dimension):
        acc = T.vadd(acc, T.vmul(X[:, None, t], funcs[None, :, t]))
    exps = phi.exponent_table()[acc]
    p = F.p
    hist = np.zeros((group.order, p), dtype=np.int64)
    for a in range(p):
        hist[:, a] = np.sum(exps == a, axis=1)
    return hist


def inner_product_numerator(hist1, hist2, p):
    """sum_g (sum zeta^a h1) * conj(sum zeta^b h2), as an exponent-count vector."""
    out = np.zeros(p, dtype=object)
    for s in range(p):
        # pairs with a - b = s (mod p)
        out[s] = int(np.sum(hist1 * np.roll(hist2, s, axis=1)))
    return out


def orthogonality_value(algebra, orb1, orb2, group, phi, hists=None):
    """<chi_1, chi_2> * |G| as an exact CyclotomicValue."""
    p = algebra.field.p
    h1 = hists[orb1] if hists else character_histograms(algebra, orb1, group, phi)
    h2 = hists[orb2] if hists else character_histograms(algebra, orb2, group, phi)
    num = inner_product_numerator(h1, h2, p)
    scale = Fraction(1, math.isqrt(orb1.size) * math.isqrt(orb2.size))
    return CyclotomicValue.from_exponent_counts(p, num, scale)
