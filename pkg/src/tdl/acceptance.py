"""The acceptance suite: one function per criterion, shared by ``tdl verify`` and the tests."""

from __future__ import annotations

import json
import os
import tempfile
import time
from fractions import Fraction
from itertools import permutations
from math import comb

import numpy as np

from . import batch
from .census import (count_k_partite, css_check, css_sampled, exhaustive_census, is_monotone, sandwich_check,
                     trend_report)
from .containers import build_pattern_hypergraph, lemma_deltabound_check, m_density
from .digraph import Family
from .extremal import cycle_extremal_pair, extremal_number, unbalanced_partite_sweep, verify_turan_formula
from .order import beta
from .patterns import Pattern
from .switching import forward_degree_identity_check, ratio_check
from .weights import LOG3, TWO, Weight

# regression constants, computed by the exhaustive census and cross-checked in the tests
K_PARTITE_ORIENTED = {1: 1, 2: 3, 3: 19, 4: 249, 5: 5881, 6: 246603}
K_PARTITE_DIGRAPH = {1: 1, 2: 4, 3: 37, 4: 829, 5: 36616, 6: 3327499}
T3_FREE_ORIENTED = {3: 21, 4: 317, 5: 9735, 6: 583907}
C3_FREE_ACYCLIC = {4: (543, 549), 5: (29281, 30535), 6: (3781503, 4168935)}


def _result(ok: bool, detail: str, **data) -> dict:
    return {"pass": bool(ok), "detail": detail, **data}


def criterion_1() -> dict:
    """Transitive-tournament Turán numbers and uniqueness of DT_k(n)."""
    start = time.perf_counter()
    rep = verify_turan_formula(range(2, 7), range(3, 8), TWO, kinds=("T",))
    rows = [r for r in rep["rows"] if r["k"] < r["n"]]
    bad = [r for r in rows if not r["pass"]]
    secs = time.perf_counter() - start
    ok = not bad and secs < 300
    return _result(ok, f"{len(rows)} (k,n) cells, {len(bad)} failing, {secs:.1f}s", seconds=secs)


def criterion_2() -> dict:
    """Directed-cycle Turán numbers: closed form at a=2, census maxima at a=3/2 and log3."""
    bad = []
    for k in range(2, 5):
        for n in range(2, 8):
            res = extremal_number(n, Pattern.cycle(k + 1), Family.DIGRAPH, TWO, witness_cap=0)
            q, r = divmod(n, k)
            formula = comb(n, 2) + q * comb(k, 2) + comb(r, 2)
            if res.value != formula:
                bad.append(("a=2", k, n, res.value, formula))
    for a in (Weight.rational(3, 2), LOG3):
        for k in range(2, 5):
            for n in range(2, 6):
                pat = Pattern.cycle(k + 1)
                census_best = exhaustive_census(n, Family.DIGRAPH, (pat,)).max_weighted(a)
                res = extremal_number(n, pat, Family.DIGRAPH, a, witness_cap=0).optimum.as_pair()
                closed = cycle_extremal_pair(n, k) if k <= n else (0, comb(n, 2))
                if a.compare(res, census_best) != 0 or a.compare(res, closed) != 0:
                    bad.append((str(a), k, n, res, census_best, closed))
    return _result(not bad, f"{len(bad)} mismatches", mismatches=bad)


def criterion_3() -> dict:
    """Branch and bound agrees with filter-and-maximize over the full census."""
    bad, cells = [], 0
    weights = (TWO, Weight.rational(5, 3), LOG3)
    for family in Family:
        for pat in (Pattern.trans(3), Pattern.trans(4), Pattern.cycle(3), Pattern.cycle(4)):
            for n in range(1, 6):
                rec = exhaustive_census(n, family, (pat,))
                for a in weights:
                    cells += 1
                    want = rec.max_weighted(a)
                    got = extremal_number(n, pat, family, a, witness_cap=0).optimum.as_pair()
                    if a.compare(got, want) != 0:
                        bad.append((family.value, str(pat), n, str(a), got, want))
    return _result(not bad, f"{cells} cells, {len(bad)} mismatches", mismatches=bad)


def criterion_4(samples: int = 10 ** 6, seed: int = 20240601) -> dict:
    """beta <= gamma for {C_2, C_3}-free digraphs: exhaustive to n=4 (and 5), sampled at n=5."""
    exact = css_check(5)
    sampled = css_sampled(5, samples, seed)
    ok = exact["pass"] and sampled["pass"]
    return _result(ok, f"exhaustive violations {exact['violations']}, sampled violations {sampled['violations']}"
                       f" ({samples} samples), max beta/gamma {exact['max_ratio']}"
                       f" (beta <= gamma/2 {'holds' if exact['half_conjecture_holds'] else 'fails'})",
                   exhaustive=exact, sampled=sampled)


def brute_force_beta(n: int, arcs: np.ndarray) -> np.ndarray:
    """Minimum backwards-edge count over all n! orderings."""
    best = None
    for perm in permutations(range(n)):
        back = np.zeros(arcs.shape[2], dtype=np.int64)
        for i in range(n):
            for j in range(i + 1, n):
                back += arcs[perm[j], perm[i]]
        best = back if best is None else np.minimum(best, back)
    return best


def criterion_5(samples: int = 10 ** 5, seed: int = 7) -> dict:
    """Subset-DP beta equals the minimum over all orderings."""
    bad = 0
    checked = 0
    for n in range(1, 5):
        codes = np.arange(batch.space_size(n, Family.DIGRAPH), dtype=np.int64)
        arcs = batch.arcs_from_digits(n, batch.decode(n, Family.DIGRAPH, codes))
        bf = brute_force_beta(n, arcs)
        bad += int((batch.beta(n, arcs) != bf).sum())
        graphs = [batch.graph_from_arcs(arcs, b) for b in range(arcs.shape[2])]
        bad += sum(beta(g)[0] != int(x) for g, x in zip(graphs, bf))
        checked += arcs.shape[2]
    rng = np.random.default_rng(seed)
    digits = rng.integers(0, 4, size=(10, samples), dtype=np.int8)
    arcs = batch.arcs_from_digits(5, digits)
    bf = brute_force_beta(5, arcs)
    bad += int((batch.beta(5, arcs) != bf).sum())
    bad += sum(beta(batch.graph_from_arcs(arcs, b))[0] != int(bf[b]) for b in range(samples))
    checked += samples
    return _result(bad == 0, f"{checked} graphs, {bad} disagreements")


def criterion_6() -> dict:
    """Unbalanced k-partite bound over every composition."""
    bad = []
    for k in (2, 3, 4):
        for n in range(k, 41):
            rep = unbalanced_partite_sweep(k, n)
            if not rep["pass"]:
                bad.append((k, n, rep["violations"][:1]))
    return _result(not bad, f"k in 2..4, n <= 40, {len(bad)} failing cells", failing=bad)


def criterion_7() -> dict:
    """Exact T(n,2), T*(n,2) for n <= 6 with the sandwich margins (reported, not asserted)."""
    rows, mismatch = [], []
    for n in range(1, 7):
        T = count_k_partite(n, 2, Family.ORIENTED)
        Ts = count_k_partite(n, 2, Family.DIGRAPH)
        if T != K_PARTITE_ORIENTED[n] or Ts != K_PARTITE_DIGRAPH[n]:
            mismatch.append((n, T, Ts))
        if n >= 2:
            rep = sandwich_check(n, 2)
            rows.append({"n": n, "T": T, "Tstar": Ts, "holds": rep["holds"], "asserted": rep["asserted"],
                         "log2_margins": rep["log2_margins"]})
    asserted_fail = [r for r in rows if r["asserted"] and not all(r["holds"].values())]
    ok = not mismatch and not asserted_fail
    asserted = sum(r["asserted"] for r in rows)
    informational = sum(all(r["holds"].values()) for r in rows if not r["asserted"])
    return _result(ok, f"T(3,2)={K_PARTITE_ORIENTED[3]}, pinned counts {'match' if not mismatch else 'differ'}; "
                       f"sandwich asserted at {asserted} sizes, holds informationally at {informational} of "
                       f"{len(rows) - asserted}", rows=rows, mismatches=mismatch)


def criterion_8() -> dict:
    bad = []
    for N in range(1, 13):
        if len(build_pattern_hypergraph(N, Pattern.cycle(3)).edges) != 2 * comb(N, 3):
            bad.append(("C3", N))
        if len(build_pattern_hypergraph(N, Pattern.trans(3)).edges) != 6 * comb(N, 3):
            bad.append(("T3", N))
    dens = (m_density(Pattern.cycle(3)), m_density(Pattern.trans(3)), m_density(Pattern.cycle(5)))
    if dens != (2, 2, Fraction(4, 3)):
        bad.append(("m", dens))
    margins = []
    for H in (Pattern.cycle(3), Pattern.trans(3)):
        rep = lemma_deltabound_check(H, 1, range(8, 13))
        for row in rep["rows"]:
            margins.append((str(H), row["N"], row["margin"]))
            if not row["holds"] or float(row["margin"]) <= 0:
                bad.append(("bound", str(H), row["N"]))
    return _result(not bad, f"{len(bad)} failures; smallest margin {min(float(m[2]) for m in margins):.1f}",
                   margins=margins, failures=bad)


def criterion_9() -> dict:
    start = time.perf_counter()
    reports = [forward_degree_identity_check(n, 1) for n in range(4, 7)]
    ratios = [ratio_check(n, 0, 1) for n in range(4, 7)]
    secs = time.perf_counter() - start
    ok = all(r["pass"] for r in reports) and all(r["pass"] for r in ratios) and secs < 600
    worst = max(r["max_preimages"] for r in reports)
    return _result(ok, f"n=4..6: images per source exact, max preimages {worst} <= 256, "
                       f"ratios {[r['ratio'] for r in ratios]}, {secs:.1f}s", reports=reports, ratios=ratios)


def criterion_10() -> dict:
    """Desk-scale trends; the 2-partite fraction is expected to rise only for large n."""
    t_rows = trend_report((Pattern.trans(3),), Family.ORIENTED, range(3, 7), "k-partite:2")
    c_rows = trend_report((Pattern.cycle(3),), Family.ORIENTED, range(4, 7), "acyclic")
    t_frac = [Fraction(r["fraction"]) for r in t_rows]
    c_frac = [Fraction(r["fraction"]) for r in c_rows]
    t_ok = is_monotone(t_frac, True) and t_frac[-1] > Fraction(9, 10)
    c_ok = is_monotone(c_frac, False)
    detail = ("T3-free 2-partite fractions " + ", ".join(f"{float(f):.4f}" for f in t_frac)
              + f" ({'ok' if t_ok else 'NOT non-decreasing / not > 0.9'}); "
              + "C3-free acyclic fractions " + ", ".join(f"{float(f):.4f}" for f in c_frac)
              + f" ({'ok' if c_ok else 'NOT non-increasing'})")
    return _result(t_ok and c_ok, detail, trans=t_rows, cycle=c_rows, trans_ok=t_ok, cycle_ok=c_ok)


DETERMINISM_COMMANDS = [
    ["census", "--n", "5", "--family", "oriented", "--pattern", "T:3", "--predicates", "k-partite:2,acyclic,beta"],
    ["census", "--n", "6", "--family", "oriented", "--pattern", "C:3", "--predicates", "beta"],
    ["census", "--n", "7", "--family", "oriented", "--pattern", "C:3", "--predicates", "acyclic",
     "--samples", "20000", "--seed", "42"],
    ["extremal", "--n", "6", "--pattern", "C:3", "--family", "digraph", "--weight", "2"],
    ["extremal", "--n", "6", "--pattern", "T:4", "--family", "oriented", "--weight", "log3"],
    ["fas", "--graph", "3;0->1,1->2,2->0"],
    ["partition", "--graph", "4;0->1,1->2,2->3,3->0", "--k", "2"],
    ["containers", "--n", "8", "--pattern", "C:3", "--gamma", "1"],
    ["switch", "--n", "5", "--m2", "1", "--m1", "1"],
]


def criterion_11(commands=None) -> dict:
    """Identical manifests give byte-identical bodies at --jobs 1 and --jobs 8."""
    from .cli import main

    commands = DETERMINISM_COMMANDS if commands is None else commands
    differing = []
    with tempfile.TemporaryDirectory() as tmp:
        for i, cmd in enumerate(commands):
            bodies = []
            for jobs in ("1", "8"):
                for fmt in ("json", "csv"):
                    path = os.path.join(tmp, f"{i}-{jobs}.{fmt}")
                    code = main(cmd + ["--jobs", jobs, "--format", fmt, "--out", path])
                    with open(path, "rb") as fh:
                        bodies.append((code, fh.read()))
            if bodies[0] != bodies[2] or bodies[1] != bodies[3]:
                differing.append(" ".join(cmd))
    return _result(not differing, f"{len(commands)} commands, {len(differing)} differ", differing=differing)


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 12)}


def run(selection=None) -> dict[int, dict]:
    out = {}
    for i in selection or sorted(CRITERIA):
        start = time.perf_counter()
        try:
            res = CRITERIA[i]()
        except Exception as exc:  # a crash is a failure of that criterion, not of the suite
            res = _result(False, f"error: {type(exc).__name__}: {exc}")
        res["seconds"] = round(time.perf_counter() - start, 2)
        out[i] = res
    return out


def summary_line(i: int, res: dict) -> str:
    return f"criterion {i:2d}: {'PASS' if res['pass'] else 'FAIL'}  {res['detail']}"


def dumps(results: dict[int, dict]) -> str:
    return json.dumps({str(k): v for k, v in results.items()}, indent=2, sort_keys=True, default=str)
