"""Irreducible character degrees from conjugacy data.

Two independent routes are provided:

* :func:`dixon_degrees` -- central characters as common eigenvectors of the
  class-sum multiplication matrices over a prime field F_l (Burnside-Dixon).
* :func:`degrees_from_zeta` -- exact values of the representation zeta function
  at even integers, obtained by counting solutions of commutator words through
  repeated convolution, then inverted through a Vandermonde system.

Everything is exact: big integers, rationals, or arithmetic mod l.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from . import modp
from .groups import DEFAULT_SWEEP_BUDGET, BudgetExceeded

_BLOCK = 1 << 20


@dataclass(frozen=True)
class DimensionMultiset:
    """Multiset of irreducible degrees as sorted ``(degree, multiplicity)`` pairs."""

    items: tuple

    @classmethod
    def from_mapping(cls, mapping):
        items = tuple(sorted((int(d), int(m)) for d, m in dict(mapping).items() if m))
        for d, m in items:
            if d < 1 or m < 0:
                raise ValueError(f"invalid degree/multiplicity pair {(d, m)}")
        return cls(items)

    @classmethod
    def from_degrees(cls, degrees):
        counts = {}
        for d in degrees:
            counts[d] = counts.get(d, 0) + 1
        return cls.from_mapping(counts)

    def as_dict(self):
        return dict(self.items)

    @property
    def order(self):
        """Sum of m_d * d^2, the group order."""
        return sum(m * d * d for d, m in self.items)

    @property
    def num_irreducibles(self):
        return sum(m for _, m in self.items)

    @property
    def degree_set(self):
        return frozenset(d for d, _ in self.items)

    @property
    def N(self):
        return len(self.items)

    def zeta(self, s):
        """Exact value of sum m_d d^(-s) for integer s."""
        return sum((Fraction(m) / Fraction(d) ** s for d, m in self.items), Fraction(0))

    def check(self, order=None, num_classes=None):
        """Structural identities; raise AssertionError on failure."""
        order = self.order if order is None else order
        assert self.order == order, f"sum m d^2 = {self.order} != |G| = {order}"
        if num_classes is not None:
            assert self.num_irreducibles == num_classes, \
                f"sum m = {self.num_irreducibles} != #classes = {num_classes}"
        for d, _ in self.items:
            assert order % d == 0, f"degree {d} does not divide {order}"
        return True

    def to_json(self):
        return {"order": self.order, "classes": self.num_irreducibles,
                "degrees": [[d, m] for d, m in self.items]}

    @classmethod
    def from_json(cls, obj):
        ms = cls.from_mapping({d: m for d, m in obj["degrees"]})
        if "order" in obj and ms.order != obj["order"]:
            raise ValueError("order field disagrees with degrees")
        if "classes" in obj and ms.num_irreducibles != obj["classes"]:
            raise ValueError("classes field disagrees with degrees")
        return ms

    def __str__(self):
        return "{" + ", ".join(f"{d}: {m}" for d, m in self.items) + "}"


class ClassAlgebra:
    """Structure constants a_ijk of the class-sum basis, computed on demand.

    ``C_i C_j = sum_k a_ijk C_k`` with ``a_ijk = #{x in C_i : x^-1 g_k in C_j}``
    for a fixed representative ``g_k``.  :meth:`matrix` returns ``M_i`` with
    ``M_i[k, j] = a_ijk``.
    """

    def __init__(self, data, budget=DEFAULT_SWEEP_BUDGET):
        self.data = data
        self.group = data.group
        self.r = data.num_classes
        self.budget = budget
        self.spent = 0
        self._mats = {}
        self._reps = self.group.elements[data.representatives]
        # elements grouped by class, for exact segment sums
        self._by_class = np.argsort(data.class_of_element, kind="stable")
        self._starts = np.concatenate([[0], np.cumsum(data.sizes)[:-1]])
        self._conv = None

    def _charge(self, ops):
        self.spent += ops
        if self.spent > self.budget:
            raise BudgetExceeded(f"class algebra exceeded {self.budget} group operations")

    def matrix(self, i):
        if i not in self._mats:
            self._mats[i] = self._compute_matrix(i)
        return self._mats[i]

    def _compute_matrix(self, i):
        data, group, r = self.data, self.group, self.r
        members = data.class_members(i)
        self._charge(len(members) * r)
        xinv = group.inverses[members]
        M = np.zeros((r, r), dtype=np.int64)
        step = max(1, _BLOCK // max(1, len(members)))
        for s in range(0, r, step):
            reps = self._reps[s:s + step]
            prod = group.matmul(xinv[:, None], reps[None])
            cls = data.class_of_element[group.index_of(prod, check=False)].astype(np.int64)
            kk = np.broadcast_to(np.arange(len(reps)), cls.shape)
            counts = np.bincount((kk * r + cls).ravel(), minlength=len(reps) * r)
            M[s:s + len(reps)] = counts.reshape(len(reps), r)
        return M

    def tensor(self):
        """Full a[i, j, k]; only sensible for small class numbers."""
        r = self.r
        a = np.zeros((r, r, r), dtype=np.int64)
        for i in range(r):
            a[i] = self.matrix(i).T
        return a

    def preimage_classes(self, k):
        """class(x^-1 g_k) for every element x in enumeration order."""
        group = self.group
        self._charge(group.order)
        out = np.empty(group.order, dtype=np.int64)
        inv = group.inverses
        g = self._reps[k]
        for s in range(0, group.order, _BLOCK):
            prod = group.matmul(inv[s:s + _BLOCK], g)
            out[s:s + _BLOCK] = self.data.class_of_element[group.index_of(prod, check=False)]
        return out

    def class_sums(self, values):
        """Exact per-class sums of an int64 vector indexed by element."""
        return np.add.reduceat(values[self._by_class], self._starts)

    def convolution_operator(self, f):
        """Integer matrix T with (v * f)(C_k) = sum_i T[k, i] v_i, as Python ints."""
        f = np.asarray([int(x) for x in f], dtype=object)
        r = self.r
        T = np.empty((r, r), dtype=object)
        small = all(abs(int(x)) < 2 ** 62 // max(1, self.group.order) for x in f)
        f64 = f.astype(np.int64) if small else None
        for k in range(r):
            J = self.preimage_classes(k)
            if small:
                T[k] = [int(x) for x in self.class_sums(f64[J])]
            else:
                vals = f[J]
                T[k] = [sum(vals[self._by_class[s:s + n]]) for s, n in zip(self._starts, self.data.sizes)]
        return T


def class_algebra(data, budget=DEFAULT_SWEEP_BUDGET):
    return ClassAlgebra(data, budget)


@dataclass(frozen=True)
class CommutatorDistribution:
    """f(C) = #{(x, y) in G^2 : [x, y] = g} for g in C, as exact integers."""

    values: tuple

    def total(self, sizes):
        return sum(int(s) * v for s, v in zip(sizes, self.values))


def commutator_distribution(data, algebra=None):
    """Count commutator preimages class by class.

    f(g) = sum over x with xg conjugate to x of |C_G(x)|.
    """
    group = data.group
    algebra = algebra or ClassAlgebra(data)
    cent = data.centralizer_orders[data.class_of_element]
    cls = data.class_of_element
    reps = group.elements[data.representatives]
    out = []
    for k in range(data.num_classes):
        algebra._charge(group.order)
        total = 0
        for s in range(0, group.order, _BLOCK):
            prod = group.matmul(group.elements[s:s + _BLOCK], reps[k])
            same = data.class_of_element[group.index_of(prod, check=False)] == cls[s:s + _BLOCK]
            total += int(np.sum(cent[s:s + _BLOCK][same]))
        out.append(total)
    return CommutatorDistribution(tuple(out))


def _word_counts(data, algebra, dist, n):
    """N_1..N_n where N_j = #{solutions of [x1,y1]...[xj,yj] = 1}."""
    cache = algebra._conv
    if cache is None or cache[0] != dist.values:
        T = algebra.convolution_operator(dist.values)
        cache = algebra._conv = (dist.values, T, [np.array(dist.values, dtype=object)])
    _, T, iterates = cache
    while len(iterates) < n:
        iterates.append(T.dot(iterates[-1]))
    return [int(v[0]) for v in iterates[:n]]


def frobenius_zeta(data, algebra, dist, m):
    """Exact zeta_G(2m) for m >= -1 via solution counts of commutator words."""
    if m < -1:
        raise ValueError("m must be at least -1")
    G = data.order
    if m == -1:
        return Fraction(G)
    if m == 0:
        return Fraction(data.num_classes)
    count = _word_counts(data, algebra, dist, m + 1)[m]
    return Fraction(count, G ** (2 * m + 1))


def candidate_degrees(order):
    return [d for d in sympy.divisors(order) if d * d <= order]


def degrees_from_zeta(data, algebra, dist, max_candidates=512):
    """Recover the degree multiset from zeta_G(0), zeta_G(2), ..., zeta_G(2(|D|-1))."""
    G = data.order
    D = candidate_degrees(G)
    if len(D) > max_candidates:
        raise BudgetExceeded(f"{len(D)} candidate degrees exceeds cap {max_candidates}")
    values = [frobenius_zeta(data, algebra, dist, m) for m in range(len(D))]
    mults = solve_power_sums(D, values)
    return DimensionMultiset.from_mapping(dict(zip(D, mults)))


def solve_power_sums(D, values):
    """Solve sum_d m_d d^(-2m) = values[m], m = 0..len(D)-1, for integers m_d >= 0."""
    P = 1
    for d in D:
        P = math.lcm(P, d * d)
    nodes = [P // (d * d) for d in D]
    rhs = [v * P ** m for m, v in enumerate(values)]
    mults = []
    for a, u in enumerate(nodes):
        # Lagrange basis polynomial L_a(x) = prod_{b != a} (x - u_b) / (u_a - u_b)
        coeffs = [Fraction(1)]
        denom = 1
        for b, w in enumerate(nodes):
            if b == a:
                continue
            coeffs = [Fraction(0)] + coeffs
            for t in range(len(coeffs) - 1):
                coeffs[t] -= w * coeffs[t + 1]
            denom *= u - w
        value = sum((c * r for c, r in zip(coeffs, rhs)), Fraction(0)) / denom
        if value.denominator != 1 or value < 0:
            raise ArithmeticError(f"degree {D[a]} gets multiplicity {value}")
        mults.append(int(value))
    return mults


def dixon_degrees(data, algebra, seed=0):
    """Degrees via common eigenvectors of the class-sum matrices over F_l."""
    G, r = data.order, data.num_classes
    l = modp.next_prime_congruent_one(G, data.exponent)
    if l == 2:
        l = modp.next_prime_congruent_one(max(G, 2), 2 * data.exponent)
    rng = np.random.default_rng(seed)
    vectors = []
    stack = [(np.eye(r, dtype=np.int64), list(range(r)), 1)]
    while stack:
        basis, pivots, start = stack.pop()
        if len(basis) == 1:
            vectors.append(basis[0])
            continue
        found = _splitting_matrix(algebra, basis, pivots, range(start, r), l, rng)
        if found is None:
            # the random probe may have skipped a splitting matrix; check all of them
            found = _splitting_matrix(algebra, basis, pivots, range(r), l, None)
        if found is None:
            raise ArithmeticError("class sums failed to split a common eigenspace")
        i, op = found
        for coords in _eigenspaces(op, l, rng):
            sub, piv = modp.rref(modp.matmul(coords, basis, l), l)
            stack.append((sub, piv, i + 1))
    sizes = [int(s) for s in data.sizes]
    inv_sizes = [pow(s, -1, l) for s in sizes]
    degrees = []
    for w in vectors:
        w = w * pow(int(w[0]), -1, l) % l
        S = sum(int(w[i]) * int(w[data.inverse_class[i]]) % l * inv_sizes[i] for i in range(r)) % l
        d2 = G * pow(S, -1, l) % l
        d = math.isqrt(d2)
        if d * d != d2 or G % d:
            raise ArithmeticError(f"recovered d^2 = {d2} is not a valid degree square")
        degrees.append(d)
    return DimensionMultiset.from_degrees(degrees)


def _splitting_matrix(algebra, basis, pivots, indices, l, rng):
    """First class matrix in ``indices`` that is not scalar on span(basis).

    With ``rng`` a random vector of the subspace is tested first: it stays
    parallel under M for every scalar M and, with high probability, for no
    other.
    """
    probe = None
    if rng is not None:
        probe = modp.matmul(rng.integers(0, l, (1, len(basis))), basis, l)
    for i in indices:
        M = algebra.matrix(i) % l
        if probe is not None and _parallel(modp.matmul(probe, M, l)[0], probe[0], l):
            continue
        X = modp.matmul(basis, M, l)
        op = X[:, pivots].T  # op[s, t]: coefficient of b_s in A_i b_t
        if not _is_scalar(op):
            return i, op
    return None


def _parallel(u, v, l):
    j = int(np.nonzero(v)[0][0])
    lam = int(u[j]) * pow(int(v[j]), -1, l) % l
    return np.array_equal(u, v * lam % l)


def _is_scalar(op):
    d = op.shape[0]
    return np.all(op == np.diag(np.full(d, op[0, 0]))) if d else True


def _eigenspaces(op, l, rng):
    """Bases (rows, in the coordinates op acts on) of the eigenspaces of op.

    op is diagonalizable with eigenvalues in F_l.  If m annihilates op, then
    (m / (x - lam))(op) v lies in the lam-eigenspace, and a batch of such
    vectors spans every eigenspace.  m starts as the minimal polynomial of
    one random vector; when a projection fails the eigenvector test, m missed
    an eigenvalue and is replaced by its lcm with another vector's.
    """
    d = op.shape[0]
    m, _ = modp.minimal_polynomial_of_vector(op, rng.integers(0, l, d), l)
    for _ in range(8 + d):
        spaces = _project_eigenspaces(op, m, l, rng)
        if spaces is not None:
            return spaces
        other, _ = modp.minimal_polynomial_of_vector(op, rng.integers(0, l, d), l)
        m = modp.pmonic(modp.pdivmod(modp.pmul(m, other, l), modp.pgcd(m, other, l), l)[0], l)
    raise ArithmeticError("eigenspaces do not span; operator not diagonalizable over F_l")


def _project_eigenspaces(op, m, l, rng):
    d = op.shape[0]
    roots = modp.roots_split(m, l, rng)
    s = len(roots)
    Q = np.array([modp.quotient_by_root(m, lam, l) for lam in roots])  # s x s
    spaces = [modp.Echelon(d, l) for _ in roots]
    batch = max(1, -(-d // s))
    found = 0
    tries = 0
    while found < d:
        tries += 1
        if tries > 8 + d:
            raise ArithmeticError("eigenspaces do not span; operator not diagonalizable over F_l")
        V = rng.integers(0, l, (d, batch))
        K = [V]
        for _ in range(s - 1):
            K.append(modp.matmul(op, K[-1], l))
        K = np.stack(K)  # s x d x batch
        E = modp.matmul(Q, K.reshape(s, -1), l).reshape(s, d, batch)
        image = modp.matmul(op, E.transpose(1, 0, 2).reshape(d, -1), l).reshape(d, s, batch)
        scaled = E * np.array(roots, dtype=np.int64)[:, None, None] % l
        if not np.array_equal(image.transpose(1, 0, 2), scaled):
            return None
        for a in range(s):
            for col in E[a].T:
                if spaces[a].rank < d and np.any(col):
                    spaces[a].add(col)
        found = sum(sp.rank for sp in spaces)
        if found > d:
            raise ArithmeticError("eigenspace dimensions exceed the space")
    return [sp.sorted_basis()[0] for sp in spaces]
