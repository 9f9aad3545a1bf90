"""Matrix group schemes, their points over finite rings, and conjugacy data.

Group elements are ``n x n`` integer arrays of ring codes.  A whole group is a
``(N, n, n)`` array sorted by the canonical key, so element ``i`` of the
enumeration has key ``keys[i]`` and lookups are array operations.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .rings import FiniteRing, RingElement

SCHEMES = ("GL", "SL", "U", "Heisenberg", "Diagonal")
DEFAULT_ENUM_BUDGET = 5_000_000
DEFAULT_SWEEP_BUDGET = 5_000_000_000
DENSE_LOOKUP_LIMIT = 1 << 25
_CHUNK = 1 << 21


class BudgetExceeded(RuntimeError):
    """The requested computation is larger than the configured budget."""


class ClosureError(ValueError):
    """An element list is not closed under products or inverses."""


@dataclass(frozen=True)
class GroupSpec:
    scheme: str
    n: int
    ring: FiniteRing

    def __post_init__(self):
        scheme = _normalize_scheme(self.scheme)
        object.__setattr__(self, "scheme", scheme)
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if scheme == "Heisenberg" and self.n != 3:
            raise ValueError("Heisenberg group is U_3; use n=3")

    @property
    def dimension(self):
        """Dimension of the group scheme over the residue field."""
        n = self.n
        return {"GL": n * n, "SL": n * n - 1, "U": n * (n - 1) // 2,
                "Heisenberg": 3, "Diagonal": n}[self.scheme]

    def predicted_order(self):
        R, n = self.ring, self.n
        q, k = R.q, R.k
        gl_field = math.prod(q ** n - q ** i for i in range(n))
        if self.scheme == "GL":
            return gl_field * q ** (n * n * (k - 1))
        if self.scheme == "SL":
            return gl_field // (q - 1) * q ** ((n * n - 1) * (k - 1))
        if self.scheme in ("U", "Heisenberg"):
            return R.order ** (n * (n - 1) // 2)
        return R.unit_count ** n

    def to_json(self):
        return {"scheme": self.scheme, "n": self.n, "ring": self.ring.to_json()}

    def digest(self):
        return hashlib.sha256(json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()[:16]

    def label(self):
        R = self.ring
        base = {"field": f"F_{R.q}", "truncpoly": f"F_{R.q}[t]/t^{R.k}",
                "galois": f"Z/{R.p}^{R.k}" if R.f == 1 else f"GR({R.p}^{R.k},{R.f})",
                "witt": f"W_{R.k}(F_{R.q})"}[R.kind]
        name = "Heisenberg" if self.scheme == "Heisenberg" else f"{self.scheme}_{self.n}"
        return f"{name}({base})"


def _normalize_scheme(s):
    table = {"gl": "GL", "sl": "SL", "u": "U", "heisenberg": "Heisenberg",
             "diagonal": "Diagonal", "diag": "Diagonal"}
    try:
        return table[s.lower()]
    except KeyError:
        raise ValueError(f"unsupported scheme {s!r}; choose from {SCHEMES}") from None


class MatrixGroup:
    """The finite group of points of a :class:`GroupSpec`."""

    def __init__(self, spec, elements):
        self.spec = spec
        self.ring = spec.ring
        self.n = spec.n
        self.T = spec.ring.tables()
        self.positions = _free_positions(spec)
        self.elements = elements
        self.keys = self.encode(elements)
        if len(self.keys) > 1 and not np.all(self.keys[1:] > self.keys[:-1]):
            raise ValueError("elements must be sorted and duplicate-free")
        self.order = len(elements)
        self._dense = None
        radix_space = self.ring.order ** len(self.positions)
        if radix_space <= DENSE_LOOKUP_LIMIT:
            dense = np.full(radix_space, -1, dtype=np.int32)
            dense[self.keys] = np.arange(self.order, dtype=np.int32)
            self._dense = dense
        self._inverses = None

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"MatrixGroup({self.spec.label()}, order={self.order})"

    # -- encoding --------------------------------------------------------
    def encode(self, mats):
        mats = np.asarray(mats)
        key = np.zeros(mats.shape[:-2], dtype=np.int64)
        R = self.ring.order
        for i, j in self.positions:
            key = key * R + mats[..., i, j]
        return key

    def index_of(self, mats, check=True):
        """Enumeration indices of the given matrices (any leading shape)."""
        keys = self.encode(mats)
        if self._dense is not None:
            idx = self._dense[keys]
            if check and np.any(idx < 0):
                raise KeyError("matrix is not an element of the group")
            return idx
        idx = np.searchsorted(self.keys, keys)
        if check:
            bad = (idx >= self.order) | (self.keys[np.minimum(idx, self.order - 1)] != keys)
            if np.any(bad):
                raise KeyError("matrix is not an element of the group")
        return idx

    def canonical_key(self, g):
        """Row-major concatenation of ring codes, as a tuple."""
        return tuple(int(c) for c in np.asarray(self.as_codes(g)).ravel())

    def as_codes(self, g):
        """Accept a matrix of ring elements or codes and return an int array."""
        rows = [[c.code if isinstance(c, RingElement) else int(c) for c in row] for row in g]
        return np.array(rows, dtype=np.int64)

    def as_ring_matrix(self, idx):
        m = self.elements[idx]
        return [[self.ring.element(c) for c in row] for row in m]

    # -- arithmetic ------------------------------------------------------
    def matmul(self, A, B):
        if self.spec.scheme in ("U", "Heisenberg"):
            return unitriangular_matmul(self.T, A, B)
        return matmul(self.T, A, B)

    def identity(self):
        return np.eye(self.n, dtype=np.int64)

    @property
    def inverses(self):
        """Inverse matrices of all elements, in enumeration order."""
        if self._inverses is None:
            inv = np.empty_like(self.elements)
            for s in range(0, self.order, _CHUNK):
                inv[s:s + _CHUNK] = invert(self.spec, self.T, self.elements[s:s + _CHUNK])
            self._inverses = inv
        return self._inverses

    def inverse_index(self):
        return self.index_of(self.inverses)

    def power(self, A, e):
        result = np.broadcast_to(self.identity(), A.shape).copy()
        base = A
        while e:
            if e & 1:
                result = self.matmul(result, base)
            e >>= 1
            if e:
                base = self.matmul(base, base)
        return result


def matmul(T, A, B):
    A = np.asarray(A)
    B = np.asarray(B)
    n = A.shape[-1]
    shape = np.broadcast_shapes(A.shape, B.shape)
    C = np.empty(shape, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            acc = T.vmul(A[..., i, 0], B[..., 0, j])
            for l in range(1, n):
                acc = T.vadd(acc, T.vmul(A[..., i, l], B[..., l, j]))
            C[..., i, j] = acc
    return C


def unitriangular_matmul(T, A, B):
    """Product of unitriangular matrices; only the strict upper part is computed."""
    A = np.asarray(A)
    B = np.asarray(B)
    n = A.shape[-1]
    shape = np.broadcast_shapes(A.shape, B.shape)
    C = np.broadcast_to(np.eye(n, dtype=np.int64), shape).copy()
    for i in range(n):
        for j in range(i + 1, n):
            acc = T.vadd(A[..., i, j], B[..., i, j])
            for l in range(i + 1, j):
                acc = T.vadd(acc, T.vmul(A[..., i, l], B[..., l, j]))
            C[..., i, j] = acc
    return C


def determinant(T, A):
    """Leibniz determinant over the ring, vectorized over leading axes."""
    n = A.shape[-1]
    total = np.zeros(A.shape[:-2], dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        term = A[..., 0, perm[0]]
        for i in range(1, n):
            term = T.vmul(term, A[..., i, perm[i]])
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        total = T.vsub(total, term) if inversions % 2 else T.vadd(total, term)
    return total


def _adjugate(T, A):
    n = A.shape[-1]
    adj = np.empty_like(A)
    if n == 1:
        adj[..., 0, 0] = 1
        return adj
    rows = list(range(n))
    for i in range(n):
        for j in range(n):
            minor = A[..., [r for r in rows if r != j], :][..., [c for c in rows if c != i]]
            d = determinant(T, minor)
            adj[..., i, j] = T.neg[d] if (i + j) % 2 else d
    return adj


def invert(spec, T, A):
    n = spec.n
    if spec.scheme == "Diagonal":
        out = np.zeros_like(A)
        for i in range(n):
            out[..., i, i] = T.inv[A[..., i, i]]
        return out
    if spec.scheme in ("U", "Heisenberg"):
        # (I + N)^-1 = sum (-N)^k, N nilpotent of index <= n
        I = np.broadcast_to(np.eye(n, dtype=np.int64), A.shape)
        negN = T.vsub(np.zeros_like(A), T.vsub(A, I))
        out, term = I.copy(), I
        for _ in range(n - 1):
            term = matmul(T, term, negN)  # negN is strictly upper, not unitriangular
            out = T.vadd(out, term)
        return out
    if n > 4:
        raise ValueError("GL/SL inversion supports n <= 4")
    det_inv = T.inv[determinant(T, A)]
    if np.any(det_inv < 0):
        raise ValueError("singular matrix")
    adj = _adjugate(T, A)
    return T.vmul(adj, det_inv[..., None, None])


def _free_positions(spec):
    n = spec.n
    if spec.scheme in ("U", "Heisenberg"):
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    if spec.scheme == "Diagonal":
        return [(i, i) for i in range(n)]
    return [(i, j) for i in range(n) for j in range(n)]


def enumerate_group(spec, budget=DEFAULT_ENUM_BUDGET):
    """All elements of ``spec`` as a sorted ``(N, n, n)`` array of ring codes."""
    predicted = spec.predicted_order()
    if predicted > budget:
        raise BudgetExceeded(f"{spec.label()} has {predicted} elements, budget is {budget}")
    R = spec.ring
    if R.order ** len(_free_positions(spec)) >= 2 ** 62:
        raise BudgetExceeded(f"{spec.label()}: canonical keys do not fit in 64 bits")
    T = R.tables()
    n = spec.n
    if spec.scheme in ("U", "Heisenberg"):
        pos = _free_positions(spec)
        grids = np.indices((R.order,) * len(pos)).reshape(len(pos), -1).T
        out = np.broadcast_to(np.eye(n, dtype=np.int64), (len(grids), n, n)).copy()
        for t, (i, j) in enumerate(pos):
            out[:, i, j] = grids[:, t]
    elif spec.scheme == "Diagonal":
        units = np.nonzero(T.unit_mask)[0]
        grids = np.indices((len(units),) * n).reshape(n, -1).T
        out = np.zeros((len(grids), n, n), dtype=np.int64)
        for i in range(n):
            out[:, i, i] = units[grids[:, i]]
    else:
        out = _enumerate_gl_sl(spec, T)
    if len(out) != predicted:
        raise AssertionError(f"enumerated {len(out)} elements, expected {predicted}")
    keys = np.zeros(len(out), dtype=np.int64)
    for i, j in _free_positions(spec):
        keys = keys * R.order + out[:, i, j]
    return out[np.argsort(keys, kind="stable")]


def _enumerate_gl_sl(spec, T):
    R, n = spec.ring, spec.n
    q = R.q
    m = n * n
    # residue level: codes below q reduce to the residue field element of that code
    res = np.indices((q,) * m).reshape(m, -1).T.reshape(-1, n, n)
    det = determinant(T, res) % q
    if spec.scheme == "GL":
        res = res[det != 0]
    else:
        res = res[det == 1]
    if R.k == 1:
        return res
    fiber = q ** (R.k - 1)
    lifts = (np.indices((fiber,) * m).reshape(m, -1).T * q).reshape(-1, n, n)
    chunks = []
    step = max(1, _CHUNK // len(lifts))
    for s in range(0, len(res), step):
        cand = (res[s:s + step, None] + lifts[None]).reshape(-1, n, n)
        if spec.scheme == "SL":
            cand = cand[determinant(T, cand) == 1]
        chunks.append(cand)
    return np.concatenate(chunks)


def build_group(spec, budget=DEFAULT_ENUM_BUDGET):
    return MatrixGroup(spec, enumerate_group(spec, budget))


@dataclass
class ConjugacyData:
    """Class partition of a :class:`MatrixGroup`.

    ``class_of_element[i]`` is the class id of element ``i``; class 0 is the
    identity.  ``representatives[c]`` is the enumeration index of the first
    element of class ``c``.
    """

    group: MatrixGroup
    class_of_element: np.ndarray
    representatives: np.ndarray
    sizes: np.ndarray
    inverse_class: np.ndarray
    class_orders: np.ndarray
    identity_index: int
    exponent: int = field(default=1)

    @property
    def order(self):
        return self.group.order

    @property
    def num_classes(self):
        return len(self.sizes)

    @property
    def centralizer_orders(self):
        return self.order // self.sizes

    def class_members(self, c):
        return np.nonzero(self.class_of_element == c)[0]

    def summary(self):
        return {"order": int(self.order), "classes": int(self.num_classes), "exponent": int(self.exponent)}


def generating_set(group, seed=0, budget=DEFAULT_SWEEP_BUDGET):
    """Indices of a few elements that generate ``group``.

    Random elements are added until the subgroup they generate, found by a
    breadth-first closure, is the whole group.  Each new element at least
    doubles the subgroup, so few rounds are needed.
    """
    N = group.order
    if N == 1:
        return []
    rng = np.random.default_rng(seed)
    gens = [int(i) for i in rng.integers(0, N, 2)]
    ident = int(group.index_of(group.identity()))
    spent = 0
    while True:
        inside = np.zeros(N, dtype=bool)
        inside[ident] = True
        frontier = np.array([ident])
        while frontier.size:
            spent += frontier.size * len(gens)
            if spent > budget:
                raise BudgetExceeded(f"generator closure exceeded {budget} group operations")
            found = []
            for g in gens:
                for s in range(0, frontier.size, _CHUNK):
                    prod = group.matmul(group.elements[frontier[s:s + _CHUNK]], group.elements[g])
                    found.append(group.index_of(prod))
            found = np.unique(np.concatenate(found))
            frontier = found[~inside[found]]
            inside[frontier] = True
        if inside.all():
            return sorted(set(gens))
        outside = np.nonzero(~inside)[0]
        gens.append(int(outside[rng.integers(0, outside.size)]))


def conjugacy_classes(group, budget=DEFAULT_SWEEP_BUDGET, closure_samples=256, seed=0):
    """Partition ``group`` into conjugacy classes.

    Each class is the orbit of its first unclassified element (in enumeration
    order) under conjugation by a generating set, grown breadth first.
    """
    N = group.order
    _check_closure(group, closure_samples, seed)
    G = group.elements
    gens = generating_set(group, seed, budget)
    conjugators = [(G[g], group.inverses[g]) for g in gens]
    ident = int(group.index_of(group.identity()))
    cls = np.full(N, -1, dtype=np.int32)
    reps, sizes = [], []
    cursor = 0
    spent = 0
    current = ident
    while current is not None:
        c = len(reps)
        cls[current] = c
        frontier = np.array([current])
        size = 1
        while frontier.size and conjugators:
            spent += frontier.size * len(conjugators)
            if spent > budget:
                raise BudgetExceeded(f"conjugacy sweep exceeded {budget} group operations")
            found = []
            for g, ginv in conjugators:
                for s in range(0, frontier.size, _CHUNK):
                    conj = group.matmul(group.matmul(g, G[frontier[s:s + _CHUNK]]), ginv)
                    found.append(group.index_of(conj))
            found = np.unique(np.concatenate(found))
            seen = cls[found]
            if np.any((seen >= 0) & (seen != c)):
                raise ClosureError("conjugation merged two classes")
            frontier = found[seen < 0]
            cls[frontier] = c
            size += frontier.size
        reps.append(current)
        sizes.append(size)
        while cursor < N and cls[cursor] >= 0:
            cursor += 1
        current = cursor if cursor < N else None
    reps = np.array(reps, dtype=np.int64)
    sizes = np.array(sizes, dtype=np.int64)
    if np.any(N % sizes):
        raise ClosureError("a class size does not divide the group order")
    inv_idx = group.index_of(group.inverses[reps])
    inverse_class = cls[inv_idx].astype(np.int64)
    orders = _element_orders(group, G[reps])
    exponent = 1
    for o in set(int(o) for o in orders):
        exponent = math.lcm(exponent, o)
    return ConjugacyData(group, cls, reps, sizes, inverse_class, orders, ident, exponent)


def _check_closure(group, samples, seed):
    if group.order == 0:
        raise ClosureError("empty group")
    rng = np.random.default_rng(seed)
    a = rng.integers(0, group.order, samples)
    b = rng.integers(0, group.order, samples)
    try:
        group.index_of(group.matmul(group.elements[a], group.elements[b]))
        group.index_of(group.inverses[a])
        group.index_of(group.identity())
    except KeyError as exc:
        raise ClosureError("element list is not closed under the group law") from exc


def _element_orders(group, mats):
    import sympy

    N = group.order
    I = group.identity()
    orders = np.full(len(mats), N, dtype=np.int64)
    for prime in sympy.factorint(N):
        while True:
            trial = np.where(orders % prime == 0, orders // prime, orders)
            ok = (orders % prime == 0) & _is_identity_power(group, mats, trial, I)
            if not np.any(ok):
                break
            orders = np.where(ok, trial, orders)
    return orders


def _is_identity_power(group, mats, exps, I):
    out = np.zeros(len(mats), dtype=bool)
    for e in np.unique(exps):
        sel = exps == e
        out[sel] = np.all(group.power(mats[sel], int(e)) == I, axis=(-2, -1))
    return out


def class_of(data, g):
    """Class id of a matrix given as ring elements or codes."""
    group = data.group
    idx = group.index_of(group.as_codes(g))
    return int(data.class_of_element[int(idx)])


def commuting_pair_count(data):
    """#{(x, y) in G^2 : xy = yx}, summed as centralizer orders over classes."""
    return int(np.sum(data.sizes * data.centralizer_orders))
