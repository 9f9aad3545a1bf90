"""Acceptance criteria, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line; the lines are
repeated in the terminal summary by ``conftest.py``.  Groups are computed once
and shared between criteria.
"""

import itertools
import random
import time
from functools import lru_cache

import numpy as np

from repzeta.chartab import (DimensionMultiset, class_algebra, commutator_distribution,
                             degrees_from_zeta, dixon_degrees, frobenius_zeta)
from repzeta.groups import GroupSpec, build_group, commuting_pair_count, conjugacy_classes
from repzeta.kirillov import (AdditiveCharacter, character_histograms, coadjoint_orbits,
                              lie_algebra_of, orbit_method_degrees, orthogonality_value)
from repzeta.rings import GF, build_galois_ring, build_truncpoly_ring, build_witt_ring, witt_to_padic
from repzeta.zetatool import check_equivalence

RESULTS = []


def record(number, title, ok, detail=""):
    line = f"ACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}: {title}"
    if detail:
        line += f" [{detail}]"
    RESULTS.append(line)
    print(line, flush=True)
    assert ok, line


def _ring(kind, p, k=1):
    if kind == "field":
        return GF(p)
    if kind == "truncpoly":
        return build_truncpoly_ring(p, k)
    return build_galois_ring(p, k)


@lru_cache(maxsize=None)
def analysis(scheme, n, kind, p, k=1):
    """Classes, class algebra, commutator distribution and both degree multisets."""
    spec = GroupSpec(scheme, n, _ring(kind, p, k))
    t0 = time.perf_counter()
    data = conjugacy_classes(build_group(spec))
    algebra = class_algebra(data)
    dist = commutator_distribution(data, algebra)
    dixon = dixon_degrees(data, algebra)
    zeta = degrees_from_zeta(data, algebra, dist)
    return {"spec": spec, "data": data, "algebra": algebra, "dist": dist,
            "dixon": dixon, "zeta": zeta, "seconds": time.perf_counter() - t0}


@lru_cache(maxsize=None)
def orbit_degrees(n, p):
    spec = GroupSpec("u", n, GF(p))
    lie = lie_algebra_of(spec, check_characteristic=False)
    orbits = coadjoint_orbits(lie, build_group(spec))
    return orbits, orbit_method_degrees(orbits)


EQUIVALENCE_CASES = [("sl", 3), ("sl", 5), ("sl", 7), ("gl", 3), ("gl", 5)]
UNIPOTENT = [(n, p) for n in (3, 4) for p in (3, 5, 7)]
SUITE = (
    [(s, 2, kind, p, 2) for s, p in EQUIVALENCE_CASES for kind in ("truncpoly", "galois")]
    + [("sl", 2, "field", p, 1) for p in (3, 5, 7, 11)]
    + [("gl", 2, "field", 3, 1), ("heisenberg", 3, "field", 3, 1),
       ("sl", 2, "galois", 2, 2), ("u", 3, "field", 11, 1)]
    + [("u", n, "field", p, 1) for n, p in UNIPOTENT]
    + [("sl", 2, kind, 2, 4) for kind in ("truncpoly", "galois")]
)


def test_criterion_01_equivalence_k2():
    bad, slow = [], []
    for scheme, p in EQUIVALENCE_CASES:
        t0 = time.perf_counter()
        a = analysis(scheme, 2, "truncpoly", p, 2)
        b = analysis(scheme, 2, "galois", p, 2)
        v = check_equivalence(a["dixon"], b["dixon"], "both")
        if not (v.direct_equal and v.prop21_equal):
            bad.append(f"{scheme}{p}")
        if time.perf_counter() - t0 > 600:
            slow.append(f"{scheme}{p}")
    record(1, "k=2 equivalence SL_2 p=3,5,7 and GL_2 p=3,5, direct and prop21",
           not bad and not slow, f"unequal={bad} over-time={slow}")


def test_criterion_02_point_counts():
    t0 = time.perf_counter()
    mismatches = []
    for p, k in itertools.product((3, 5), (2, 3)):
        counts = []
        for ring in (build_truncpoly_ring(p, k), build_galois_ring(p, k)):
            spec = GroupSpec("sl", 2, ring)
            data = conjugacy_classes(build_group(spec))
            counts.append((data.order, commuting_pair_count(data)))
        if counts[0] != counts[1]:
            mismatches.append((p, k, counts))
    elapsed = time.perf_counter() - t0
    record(2, "SL_2 orders and commuting pairs agree, p=3,5 k=2,3",
           not mismatches and elapsed <= 300, f"{elapsed:.0f}s mismatches={mismatches}")


def _commutator_histogram(data):
    G = data.group
    A, Ainv = G.elements, G.inverses
    hist = np.zeros(G.order, dtype=np.int64)
    for x in range(G.order):
        comm = G.matmul(G.matmul(G.matmul(A[x][None], A), Ainv[x][None]), Ainv)
        hist += np.bincount(G.index_of(comm), minlength=G.order)
    return hist


def test_criterion_03_frobenius_brute_force():
    checked, bad = [], []
    for key in SUITE:
        if GroupSpec(key[0], key[1], _ring(*key[2:])).predicted_order() > 200:
            continue
        a = analysis(*key)
        data = a["data"]
        # h(g) = #{(x, y) : [x, y] = g} by enumerating every pair; solutions of
        # [x1,y1][x2,y2] = 1 pair g with g^-1
        h = _commutator_histogram(data)
        solutions = int(np.sum(h * h[data.group.inverse_index()]))
        expected = frobenius_zeta(data, a["algebra"], a["dist"], 1) * data.order ** 3
        checked.append(a["spec"].label())
        if solutions != expected:
            bad.append(a["spec"].label())
    record(3, "Frobenius two-commutator count = |G|^3 zeta(2) for |G| <= 200",
           checked and not bad, f"groups={checked} bad={bad}")


def test_criterion_04_method_triangle():
    bad = []
    for key in SUITE:
        a = analysis(*key)
        if a["dixon"] != a["zeta"]:
            bad.append(a["spec"].label())
    for n, p in UNIPOTENT:
        _, orbit = orbit_degrees(n, p)
        if orbit != analysis("u", n, "field", p, 1)["dixon"]:
            bad.append(f"orbit U_{n}(F_{p})")
    record(4, f"dixon = zeta on {len(SUITE)} groups, = orbit method on U_3, U_4 over F_3, F_5, F_7",
           not bad, f"bad={bad}")


def test_criterion_05_structural_identities():
    bad = []
    multisets = []
    for key in SUITE:
        a = analysis(*key)
        multisets += [(a["spec"].label(), a["data"], a["dixon"]), (a["spec"].label(), a["data"], a["zeta"])]
    for n, p in UNIPOTENT:
        multisets.append((f"orbit U_{n}(F_{p})", analysis("u", n, "field", p, 1)["data"],
                          orbit_degrees(n, p)[1]))
    for label, data, ms in multisets:
        ok = (ms.order == data.order and ms.num_irreducibles == data.num_classes
              and all(data.order % d == 0 for d in ms.degree_set))
        if not ok:
            bad.append(label)
    record(5, f"sum m d^2 = |G|, sum m = #classes, d | |G| on {len(multisets)} multisets",
           not bad, f"bad={bad}")


def test_criterion_06_kirillov_exactness():
    t0 = time.perf_counter()
    bad = []
    pairs = 0
    for p in (3, 5):
        spec = GroupSpec("u", 3, GF(p))
        G = build_group(spec)
        lie = lie_algebra_of(spec)
        orbits = coadjoint_orbits(lie, G)
        if len(orbits) != conjugacy_classes(G).num_classes:
            bad.append(f"count p={p}")
        phi = AdditiveCharacter(spec.ring)
        hists = {o: character_histograms(lie, o, G, phi) for o in orbits}
        for o1, o2 in itertools.combinations_with_replacement(orbits, 2):
            pairs += 1
            if orthogonality_value(lie, o1, o2, G, phi, hists) != (G.order if o1 == o2 else 0):
                bad.append(f"pair p={p}")
    elapsed = time.perf_counter() - t0
    record(6, "U_3(F_3), U_3(F_5): #orbits = #classes, exact row orthogonality",
           not bad and elapsed <= 60, f"{pairs} pairs in {elapsed:.1f}s bad={bad}")


def _is_power(x, base):
    while x > 1 and x % base == 0:
        x //= base
    return x == 1


def test_criterion_07_unipotent_shape():
    degrees = analysis("u", 4, "field", 3, 1)["dixon"]
    orbits, _ = orbit_degrees(4, 3)
    ok = (all(_is_power(d, 3) for d in degrees.degree_set)
          and all(_is_power(o.size, 9) for o in orbits))
    record(7, "U_4(F_3) degrees are powers of 3, orbit sizes even powers of 3", ok,
           f"degrees={degrees} orbit sizes={sorted({o.size for o in orbits})}")


def test_criterion_08_prop21_property():
    rng = random.Random(20240518)
    t0 = time.perf_counter()
    disagreements = 0
    equal_pairs = 0
    for trial in range(10_000):
        def draw():
            ds = rng.sample(range(1, 65), rng.randint(1, 3))
            return {d: rng.randint(1, 9) for d in ds}
        a = draw()
        mode = trial % 3
        if mode == 0:
            b = dict(a)
        elif mode == 1:
            b = dict(a)
            d = rng.choice(list(b))
            b[d] += rng.choice((-1, 1))
            b = {x: m for x, m in b.items() if m} or {1: 1}
        else:
            b = draw()
        z1, z2 = DimensionMultiset.from_mapping(a), DimensionMultiset.from_mapping(b)
        v = check_equivalence(z1, z2, "both")
        equal_pairs += v.direct_equal
        if v.prop21_equal != v.direct_equal:
            disagreements += 1
    elapsed = time.perf_counter() - t0
    record(8, "prop21 verdict = direct verdict on 10^4 random pairs",
           disagreements == 0 and elapsed <= 60,
           f"{elapsed:.1f}s, {equal_pairs} equal pairs, {disagreements} disagreements")


def test_criterion_09_witt_galois():
    bad = []
    for p, k in [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2)]:
        W = build_witt_ring(p, k)
        elems = [W.element(c) for c in range(W.order)]
        image = [witt_to_padic(w) for w in elems]
        if len({int(x) for x in image}) != p ** k:
            bad.append((p, k, "not bijective"))
        for (a, x), (b, y) in itertools.product(zip(elems, image), repeat=2):
            if witt_to_padic(a + b) != x + y or witt_to_padic(a * b) != x * y:
                bad.append((p, k))
                break
    record(9, "witt_to_padic preserves + and x exhaustively", not bad, f"bad={bad}")


def test_criterion_10_n_boundedness():
    n_sl = {p: analysis("sl", 2, "field", p, 1)["dixon"].N for p in (5, 7, 11)}
    n_u = {p: analysis("u", 3, "field", p, 1)["dixon"].N for p in (3, 5, 7, 11)}
    ok = len(set(n_sl.values())) == 1 and set(n_u.values()) == {2}
    record(10, "N(SL_2(F_p)) constant for p=5,7,11; N(U_3(F_p)) = 2 for p=3,5,7,11", ok,
           f"SL_2: {n_sl} U_3: {n_u}")


def test_criterion_11_q2_probe():
    a = analysis("sl", 2, "truncpoly", 2, 4)
    b = analysis("sl", 2, "galois", 2, 4)
    ok = a["data"].order == b["data"].order == 3072
    for side in (a, b):
        ms, data = side["dixon"], side["data"]
        ok &= ms.order == 3072 and ms.num_irreducibles == data.num_classes
        ok &= all(3072 % d == 0 for d in ms.degree_set)
    v = check_equivalence(a["dixon"], b["dixon"], "both")
    record(11, "SL_2 q=2 k=4 probe completes with valid multisets (verdict recorded)", ok,
           f"verdict={'equal' if v.equal else 'different'}")
