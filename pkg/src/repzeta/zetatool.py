"""Zeta values, semi-polynomials and the finite-evaluation equivalence test.

In the variable u = e^s the zeta function of a finite group is
``sum m_d u^(-log d)``: a generalized polynomial whose exponents are
``-log d``.  Terms are keyed by the integer d, which orders exponents exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .chartab import DimensionMultiset

DEFAULT_SIGMA_BUDGET = 1_000_000


def zeta_eval(z, s, dps=50):
    """sum_d m_d d^(-s): exact Fraction for integer s, mpmath real otherwise."""
    if isinstance(s, int) or (isinstance(s, Fraction) and s.denominator == 1):
        return z.zeta(int(s))
    with mpmath.workdps(dps):
        s = mpmath.mpf(s.numerator) / s.denominator if isinstance(s, Fraction) else mpmath.mpf(s)
        return mpmath.fsum(m * mpmath.power(d, -s) for d, m in z.items)


@dataclass(frozen=True)
class SemiPolynomial:
    """Finite sum of c_d * u^(-log d); terms sorted by d, no zero coefficients."""

    terms: tuple = ()

    @classmethod
    def from_mapping(cls, mapping):
        return cls(tuple((int(d), Fraction(c)) for d, c in sorted(mapping.items()) if c))

    def __bool__(self):
        return bool(self.terms)

    def coefficients_by_exponent(self):
        """Coefficients sorted by increasing exponent -log d, i.e. decreasing d."""
        return [c for _, c in reversed(self.terms)]

    def value_at_one(self):
        return sum((c for _, c in self.terms), Fraction(0))

    def evaluate(self, u, dps=50):
        with mpmath.workdps(dps):
            u = mpmath.mpf(u.numerator) / u.denominator if isinstance(u, Fraction) else mpmath.mpf(u)
            lu = mpmath.log(u)
            return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * mpmath.exp(-lu * mpmath.log(d))
                               for d, c in self.terms)

    def __str__(self):
        parts = []
        for d, c in self.terms:
            parts.append(f"{c}" if d == 1 else f"{c}*u^(-log {d})")
        return " + ".join(parts) or "0"


def difference_semipoly(z1, z2):
    diff = {}
    for d, m in z1.items:
        diff[d] = diff.get(d, 0) + m
    for d, m in z2.items:
        diff[d] = diff.get(d, 0) - m
    return SemiPolynomial.from_mapping(diff)


def sign_changes(values):
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def descartes_bound(sp):
    """Twice the number of sign switches of the coefficients in exponent order."""
    return 2 * sign_changes(sp.coefficients_by_exponent())


def certified_sign(sp, u, max_dps=800):
    """Sign of sp(u) at a positive rational u, certified with interval arithmetic.

    Returns 0 only when the value is exactly zero (u = 1 with vanishing
    coefficient sum) or cannot be separated from zero at ``max_dps`` digits.
    """
    u = Fraction(u)
    if u == 1:
        v = sp.value_at_one()
        return (v > 0) - (v < 0)
    iv = mpmath.iv
    saved = iv.dps
    dps = 30
    try:
        while dps <= max_dps:
            iv.dps = dps
            lu = iv.log(iv.mpf(u.numerator) / u.denominator)
            total = iv.mpf(0)
            for d, c in sp.terms:
                total += (iv.mpf(c.numerator) / c.denominator) * iv.exp(-lu * iv.log(d))
            if total.a > 0:
                return 1
            if total.b < 0:
                return -1
            dps *= 2
    finally:
        iv.dps = saved
    return 0


def root_bracket(sp):
    """s-interval [-S, S] outside which sp(e^s) cannot vanish."""
    if len(sp.terms) < 2:
        return 1
    S = 1
    (d1, c1), (d2, _) = sp.terms[0], sp.terms[1]
    (dn, cn), (dm, _) = sp.terms[-1], sp.terms[-2]
    rest_low = sum(abs(c) for _, c in sp.terms[1:])
    rest_high = sum(abs(c) for _, c in sp.terms[:-1])
    # s >= S: |c1| d1^-s dominates; s <= -S: |cn| dn^-s dominates
    while (float(rest_low) * (d1 / d2) ** S >= float(abs(c1))
           or float(rest_high) * (dm / dn) ** S >= float(abs(cn))):
        S *= 2
    return S


def probe_positive_roots(sp, points_per_unit=16, bisections=30):
    """Distinct positive roots located by sign changes on a rational grid.

    Returns a list of (lo, hi) rational brackets, plus exact zeros at grid
    points as degenerate brackets.  Multiple roots without a sign change are
    only found when they sit on a grid point (u = 1 is always on the grid).
    """
    if not sp:
        raise ValueError("the zero semi-polynomial has infinitely many roots")
    S = root_bracket(sp)
    steps = 2 * S * points_per_unit
    # grid in s, mapped to rational u close to e^s; u = 1 included exactly
    grid = sorted({Fraction(1)} | {_rational_exp(Fraction(-S) + Fraction(2 * S * i, steps))
                                  for i in range(steps + 1)})
    signs = [certified_sign(sp, u) for u in grid]
    roots = []
    for u, s in zip(grid, signs):
        if s == 0:
            roots.append((u, u))
    prev = None
    for u, s in zip(grid, signs):
        if s == 0:
            # the sign change around an exact zero belongs to that zero
            prev = None
            continue
        if prev is not None and prev[1] != s:
            lo, hi = prev[0], u
            for _ in range(bisections):
                mid = (lo + hi) / 2
                sm = certified_sign(sp, mid)
                if sm == 0:
                    lo = hi = mid
                    break
                if sm == prev[1]:
                    lo = mid
                else:
                    hi = mid
            roots.append((lo, hi))
        prev = (u, s)
    return sorted(set(roots))


def _rational_exp(s):
    v = mpmath.exp(mpmath.mpf(s.numerator) / s.denominator)
    return Fraction(str(mpmath.nstr(v, 12))).limit_denominator(10 ** 9)


@dataclass
class Verdict:
    n1: int
    n2: int
    mode: str
    points: list = field(default_factory=list)
    equal: bool = False
    witness_s: int | None = None
    direct_equal: bool | None = None
    prop21_equal: bool | None = None

    def to_json(self):
        out = {"n1": self.n1, "n2": self.n2, "mode": self.mode, "points": list(self.points),
               "equal": self.equal, "witness_s": self.witness_s}
        if self.mode == "both":
            out["direct_equal"] = self.direct_equal
            out["prop21_equal"] = self.prop21_equal
        return out


class VerdictMismatch(AssertionError):
    """The finite-evaluation verdict disagrees with direct comparison."""


def evaluation_points(z1):
    """-2 (the group order), then 0, 2, ..., 8k for k = N(z1): 4k+1 points past -2."""
    k = z1.N
    return [-2] + list(range(0, 8 * k + 1, 2))


def prop21_verdict(z1, z2):
    points = evaluation_points(z1)
    for s in points:
        if z1.zeta(s) != z2.zeta(s):
            return False, points, s
    return True, points, None


def check_equivalence(z1, z2, mode="both"):
    """Compare two degree multisets directly, by finitely many zeta values, or both."""
    if mode not in ("direct", "prop21", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    v = Verdict(z1.N, z2.N, mode)
    if mode in ("direct", "both"):
        v.direct_equal = z1 == z2
    if mode in ("prop21", "both"):
        v.prop21_equal, v.points, v.witness_s = prop21_verdict(z1, z2)
    if mode == "both" and v.direct_equal != v.prop21_equal:
        raise VerdictMismatch(f"direct={v.direct_equal} prop21={v.prop21_equal} for {z1} vs {z2}")
    v.equal = v.direct_equal if mode == "direct" else v.prop21_equal
    return v


def sigma_set(A, M, budget=DEFAULT_SIGMA_BUDGET):
    """All sums of between 1 and M elements of A, with repetition."""
    A = sorted(set(int(a) for a in A))
    if not A:
        raise ValueError("A must be nonempty")
    if M < 1:
        raise ValueError("M must be positive")
    out = set()
    layer = {0}
    for _ in range(M):
        layer = {x + a for x in layer for a in A}
        out |= layer
        if len(out) > budget:
            raise OverflowError(f"sigma set exceeds {budget} elements")
    return out


def sigma_bound(A, M):
    return M * len(set(A)) ** M


def restriction_compatible(degrees_sub, degrees_big, index):
    """Degrees of H inside sums of at most [H:G] degrees of a subgroup G."""
    return set(degrees_big) <= sigma_set(degrees_sub, index)


__all__ = [
    "DimensionMultiset", "SemiPolynomial", "Verdict", "VerdictMismatch", "zeta_eval",
    "difference_semipoly", "descartes_bound", "certified_sign", "probe_positive_roots",
    "check_equivalence", "evaluation_points", "sigma_set", "sigma_bound",
    "restriction_compatible",
]
