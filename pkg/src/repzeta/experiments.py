"""Experiment runners: build group pairs, compute degrees, assemble reports."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .cache import ConjugacyCache
from .chartab import (class_algebra, commutator_distribution, degrees_from_zeta,
                      dixon_degrees)
from .groups import (DEFAULT_ENUM_BUDGET, DEFAULT_SWEEP_BUDGET, GroupSpec, build_group,
                     commuting_pair_count)
from .kirillov import coadjoint_orbits, lie_algebra_of, orbit_method_degrees
from .rings import GF, build_galois_ring, build_truncpoly_ring
from .zetatool import check_equivalence

SCHEMA = 1
KINDS = ("verify-equivalence", "n-table", "point-count", "unipotent-cross-check",
         "counterexample-probe")


@dataclass
class ExperimentSpec:
    kind: str
    scheme: str = "sl"
    n: int = 2
    p: int = 5
    f: int = 1
    k: int = 2
    primes: tuple = ()
    mode: str = "both"
    enum_budget: int = DEFAULT_ENUM_BUDGET
    sweep_budget: int = DEFAULT_SWEEP_BUDGET
    out: str | None = None
    text_out: str | None = None
    csv_out: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        self.primes = tuple(int(p) for p in self.primes)
        if self.mode not in ("direct", "prop21", "both"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def echo(self):
        """Parameters that determine the report; output paths are left out."""
        d = asdict(self)
        for key in ("out", "text_out", "csv_out"):
            d.pop(key)
        d["primes"] = list(self.primes)
        return d


@dataclass
class Report:
    spec: ExperimentSpec
    groups: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    table: list = field(default_factory=list)
    orbits: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    cache: dict = field(default_factory=dict)

    def check(self, name, ok, detail=""):
        self.checks.append({"name": name, "passed": bool(ok), "detail": str(detail)})
        return bool(ok)

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks)

    def body(self):
        """Everything except timings and cache statistics."""
        return {"schema": SCHEMA, "version": __version__, "spec": self.spec.echo(),
                "groups": self.groups, "verdicts": self.verdicts, "checks": self.checks,
                "table": self.table, "orbits": self.orbits, "notes": self.notes, "passed": self.passed}

    def to_json(self):
        out = self.body()
        out["timings"] = {k: round(v, 3) for k, v in self.timings.items()}
        out["cache"] = dict(self.cache)
        return out

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def render_text(self):
        lines = [f"{self.spec.kind}  (repzeta {__version__})"]
        if self.groups:
            rows = [[g["label"], g["order"], g["classes"], g.get("N", ""), _fmt_degrees(g)]
                    for g in self.groups]
            lines += [""] + _columns(["group", "order", "classes", "N", "degrees"], rows)
        if self.table:
            heads = list(self.table[0])
            lines += [""] + _columns(heads, [[row[h] for h in heads] for row in self.table])
        for v in self.verdicts:
            lines.append("")
            lines.append(f"verdict {v['left']} vs {v['right']}: "
                         + ("equal" if v["equal"] else "different")
                         + f" (mode {v['mode']}, N = {v['n1']}/{v['n2']})")
        for note in self.notes:
            lines.append(f"note: {note}")
        lines.append("")
        lines += _columns(["check", "result", "detail"],
                          [[c["name"], "pass" if c["passed"] else "FAIL", c["detail"]]
                           for c in self.checks])
        if self.timings:
            lines.append("")
            lines += _columns(["stage", "seconds"],
                              [[k, f"{v:.2f}"] for k, v in self.timings.items()])
        return "\n".join(lines) + "\n"

    def to_csv(self):
        if not self.table:
            return ""
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(self.table[0]), lineterminator="\n")
        w.writeheader()
        for row in self.table:
            w.writerow(row)
        return buf.getvalue()

    def write(self):
        if self.spec.out:
            with open(self.spec.out, "w") as fh:
                fh.write(self.dumps() + "\n")
        if self.spec.text_out:
            with open(self.spec.text_out, "w") as fh:
                fh.write(self.render_text())
        if self.spec.csv_out:
            with open(self.spec.csv_out, "w") as fh:
                fh.write(self.to_csv())


def _fmt_degrees(g):
    ms = g.get("degrees")
    if not ms:
        return ""
    return " ".join(f"{d}^{m}" if m > 1 else str(d) for d, m in ms)


def _columns(headers, rows):
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    out = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    out.insert(1, "  ".join("-" * w for w in widths))
    return out


class _Timer:
    def __init__(self, report, key):
        self.report, self.key = report, key

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        self.report.timings[self.key] = self.report.timings.get(self.key, 0.0) \
            + time.perf_counter() - self.t0


def ring_pair(p, k, f=1):
    """F_q[t]/t^k and the Galois ring GR(p^k, f), which models W_k(F_q)."""
    return build_truncpoly_ring(p, k, f), build_galois_ring(p, k, f)


def analyze_group(gspec, exp, report, cache, methods=("dixon", "zeta")):
    """Classes and degree multisets of one group; adds checks to ``report``.

    Returns the per-group dict appended to ``report.groups`` and the agreed
    multiset.
    """
    label = gspec.label()
    with _Timer(report, f"{label}: enumerate"):
        group = build_group(gspec, exp.enum_budget)
    report.check(f"{label}: order formula", group.order == gspec.predicted_order(),
                 f"{group.order} vs {gspec.predicted_order()}")
    with _Timer(report, f"{label}: classes"):
        data = cache.conjugacy(group, exp.sweep_budget)
    algebra = class_algebra(data, exp.sweep_budget)
    found = {}
    if "dixon" in methods:
        with _Timer(report, f"{label}: dixon"):
            found["dixon"] = dixon_degrees(data, algebra)
    if "zeta" in methods:
        with _Timer(report, f"{label}: zeta"):
            dist = commutator_distribution(data, algebra)
            found["zeta"] = degrees_from_zeta(data, algebra, dist)
    if "orbit" in methods:
        with _Timer(report, f"{label}: orbits"):
            lie = lie_algebra_of(gspec, check_characteristic=False)
            orbits = coadjoint_orbits(lie, group, exp.sweep_budget)
            found["orbit"] = orbit_method_degrees(orbits)
        sizes = sorted(o.size for o in orbits)
        report.check(f"{label}: #orbits = #classes", len(orbits) == data.num_classes,
                     f"{len(orbits)} vs {data.num_classes}")
        q = gspec.ring.order
        report.check(f"{label}: orbit sizes are even powers of q",
                     all(_is_power(s, q * q) for s in sizes))
        report.orbits.append({
            "algebra_dim": lie.dimension, "field": gspec.ring.to_json(),
            "orbit_sizes": sizes, "degrees": [[d, m] for d, m in found["orbit"].items]})

    for name, ms in found.items():
        ok, why = _structural(ms, data)
        report.check(f"{label}: {name} structural identities", ok, why)
    names = list(found)
    for other in names[1:]:
        report.check(f"{label}: {names[0]} = {other}", found[names[0]] == found[other],
                     f"{found[names[0]]} vs {found[other]}")
    ms = found[names[0]]
    entry = {"label": label, "spec": gspec.to_json(), "order": int(data.order),
             "classes": int(data.num_classes), "exponent": int(data.exponent),
             "commuting_pairs": commuting_pair_count(data), "N": ms.N,
             "degrees": [[d, m] for d, m in ms.items], "methods": names}
    report.groups.append(entry)
    return entry, ms


def _structural(ms, data):
    try:
        ms.check(data.order, data.num_classes)
    except AssertionError as exc:
        return False, str(exc)
    return True, ""


def _is_power(x, base):
    while x % base == 0 and x > 1:
        x //= base
    return x == 1


def _finish(report, cache):
    report.cache = {"hits": cache.hits, "misses": cache.misses, "enabled": cache.enabled}
    return report


def run_verify_equivalence(exp, cache=None, assert_verdict=True):
    """Degree multisets of G(F_q[t]/t^k) and G(W_k(F_q)), compared both ways."""
    cache = cache or ConjugacyCache()
    report = Report(exp)
    sides = []
    for ring in ring_pair(exp.p, exp.k, exp.f):
        gspec = GroupSpec(exp.scheme, exp.n, ring)
        sides.append(analyze_group(gspec, exp, report, cache))
    (g1, m1), (g2, m2) = sides
    v = check_equivalence(m1, m2, "both")
    verdict = v.to_json()
    verdict.update(left=g1["label"], right=g2["label"], mode=exp.mode)
    if exp.mode != "both":
        verdict["equal"] = v.direct_equal if exp.mode == "direct" else v.prop21_equal
    report.verdicts.append(verdict)
    report.check("prop21 verdict = direct verdict", v.direct_equal == v.prop21_equal)
    report.check("group orders agree", g1["order"] == g2["order"])
    if assert_verdict:
        report.check("degree multisets equal", verdict["equal"])
    return _finish(report, cache)


def run_counterexample_probe(exp=None, cache=None):
    """SL_2 over F_2[t]/t^4 and Z/16; the equality verdict is recorded only."""
    exp = exp or ExperimentSpec("counterexample-probe", scheme="sl", n=2, p=2, k=4)
    report = run_verify_equivalence(exp, cache, assert_verdict=False)
    for g in report.groups:
        report.check(f"{g['label']}: order 3072", g["order"] == 3072, g["order"])
    v = report.verdicts[0]
    report.notes.append("probe verdict: " + ("equal" if v["equal"] else "different")
                        + " (recorded, not asserted)")
    return report


def run_n_table(exp, cache=None):
    """N(G(F_p)) for each listed prime; flags the largest value."""
    cache = cache or ConjugacyCache()
    report = Report(exp)
    methods = ("dixon", "zeta")
    if exp.scheme.lower() in ("u", "heisenberg"):
        methods += ("orbit",)
    for p in exp.primes:
        gspec = GroupSpec(exp.scheme, exp.n, GF(p, exp.f))
        g, ms = analyze_group(gspec, exp, report, cache, methods)
        report.table.append({"p": p, "order": g["order"], "classes": g["classes"], "N": ms.N,
                             "degree_set": " ".join(str(d) for d in sorted(ms.degree_set)),
                             "max": False})
    if report.table:
        top = max(row["N"] for row in report.table)
        for row in report.table:
            row["max"] = row["N"] == top
        report.notes.append(f"empirical max N = {top}")
    return _finish(report, cache)


def run_point_count(exp, cache=None):
    """|G| and commuting-pair counts over F_p[t]/t^k and Z/p^k."""
    cache = cache or ConjugacyCache()
    report = Report(exp)
    counts = []
    for ring in ring_pair(exp.p, exp.k, exp.f):
        gspec = GroupSpec(exp.scheme, exp.n, ring)
        label = gspec.label()
        with _Timer(report, f"{label}: enumerate"):
            group = build_group(gspec, exp.enum_budget)
        with _Timer(report, f"{label}: classes"):
            data = cache.conjugacy(group, exp.sweep_budget)
        pairs = commuting_pair_count(data)
        report.check(f"{label}: order formula", group.order == gspec.predicted_order())
        report.groups.append({"label": label, "spec": gspec.to_json(), "order": int(group.order),
                              "classes": int(data.num_classes), "commuting_pairs": pairs})
        counts.append((group.order, pairs))
    report.check("orders equal", counts[0][0] == counts[1][0],
                 f"{counts[0][0]} vs {counts[1][0]}")
    report.check("commuting pairs equal", counts[0][1] == counts[1][1],
                 f"{counts[0][1]} vs {counts[1][1]}")
    return _finish(report, cache)


def run_unipotent_cross_check(exp, cache=None):
    """Orbit method, class algebra and zeta recovery on U_n(F_q)."""
    cache = cache or ConjugacyCache()
    report = Report(exp)
    gspec = GroupSpec(exp.scheme if exp.scheme.lower() in ("u", "heisenberg") else "u",
                      exp.n, GF(exp.p, exp.f))
    _, ms = analyze_group(gspec, exp, report, cache, ("dixon", "zeta", "orbit"))
    q = gspec.ring.order
    report.check(f"{gspec.label()}: degrees are powers of q",
                 all(_is_power(d, q) for d in ms.degree_set))
    return _finish(report, cache)


RUNNERS = {
    "verify-equivalence": run_verify_equivalence,
    "n-table": run_n_table,
    "point-count": run_point_count,
    "unipotent-cross-check": run_unipotent_cross_check,
    "counterexample-probe": run_counterexample_probe,
}


def run(exp, cache=None):
    return RUNNERS[exp.kind](exp, cache)


SELFTEST = (
    ExperimentSpec("verify-equivalence", scheme="sl", n=2, p=3, k=2),
    ExperimentSpec("verify-equivalence", scheme="gl", n=1, p=5, k=2),
    ExperimentSpec("n-table", scheme="u", n=3, primes=(3, 5)),
    ExperimentSpec("point-count", scheme="sl", n=2, p=3, k=2),
    ExperimentSpec("unipotent-cross-check", scheme="u", n=3, p=3),
)


def selftest(cache=None):
    """Run a handful of small experiments; returns the reports."""
    return [run(exp, cache) for exp in SELFTEST]


__all__ = ["ExperimentSpec", "Report", "KINDS", "SCHEMA", "analyze_group", "ring_pair",
           "run", "run_verify_equivalence", "run_n_table", "run_point_count",
           "run_unipotent_cross_check", "run_counterexample_probe", "selftest"]
