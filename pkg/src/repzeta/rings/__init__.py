"""Exact arithmetic in the finite rings used to build matrix groups."""

from .base import FiniteRing, RingElement, RingMismatchError, RingTables
from .galois import (GF, FieldElement, FiniteField, GaloisRing, GaloisRingElement,
                     build_galois_ring)
from .truncpoly import TruncatedPolyRing, TruncPolyElement, build_truncpoly_ring
from .witt import (IntegralityError, WittPolynomialSet, WittRing, WittVector,
                   build_witt_ring, derive_witt_polynomials, ghost_polynomial,
                   teichmuller, witt_to_padic)


def ring_from_json(obj):
    """Rebuild a ring descriptor from :meth:`FiniteRing.to_json` output."""
    kind, p, k, f = obj["kind"], obj["p"], obj["k"], obj["f"]
    modulus = obj.get("modulus_coeffs")
    if kind == "field":
        return FiniteField(p, f, modulus)
    if kind == "galois":
        return GaloisRing(p, k, f, modulus)
    if kind == "truncpoly":
        return TruncatedPolyRing(FiniteField(p, f, modulus), k)
    if kind == "witt":
        return WittRing(FiniteField(p, f, modulus), k)
    raise ValueError(f"unknown ring kind {kind!r}")


__all__ = [
    "FiniteRing", "RingElement", "RingMismatchError", "RingTables",
    "GF", "FieldElement", "FiniteField", "GaloisRing", "GaloisRingElement", "build_galois_ring",
    "TruncatedPolyRing", "TruncPolyElement", "build_truncpoly_ring",
    "IntegralityError", "WittPolynomialSet", "WittRing", "WittVector", "build_witt_ring",
    "derive_witt_polynomials", "ghost_polynomial", "teichmuller", "witt_to_padic",
    "ring_from_json",
]
