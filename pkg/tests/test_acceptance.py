"""Acceptance suite: one test and one printed PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import json
import os
import random
import subprocess
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from oracles import hausdorff_by_threshold, pl_evaluate  # noqa: E402
from stratsheaf.adjunction import RIGHT, proper_base_change_check, verify_adjunction  # noqa: E402
from stratsheaf.alexandrov import roundtrip_report  # noqa: E402
from stratsheaf.complex import SimplicialComplex, StratifiedComplex, build_exhaustion, face_poset  # noqa: E402
from stratsheaf.devissage import verify_devissage  # noqa: E402
from stratsheaf.exit import chain_simplex, path_map, validate_exit_simplex  # noqa: E402
from stratsheaf.expmetric import (INF, Configuration, FiniteMetricSpace,  # noqa: E402
                                  colimit_convergence_check, cone_triangle_scan, exp_distance,
                                  metric_axiom_suite, random_metric_space)
from stratsheaf.generate import (random_downset, random_filtration, random_functor,  # noqa: E402
                                 random_poset)
from stratsheaf.poset import MonotoneMap, all_posets, omega_filtration  # noqa: E402
from stratsheaf.quasicat import idempotent_check, inner_horn_check, nerve, union_colimit  # noqa: E402
from stratsheaf.report import FINDING, PASS  # noqa: E402
from stratsheaf.sheaf import SET, VECT, pullback, pushforward_closed  # noqa: E402

RESULTS = {}


def record(n, title, ok, note=""):
    RESULTS[n] = (title, ok, note)
    return ok


# -- 1 ---------------------------------------------------------------------------------


def criterion_1():
    rng = random.Random("acceptance/1")
    fails = 0
    for _ in range(200):
        P = random_poset(rng, rng.randint(0, 6), rng.choice([0.2, 0.4, 0.6]))
        F = random_functor(rng, P, SET, 4)
        fails += roundtrip_report(F).verdict != PASS
    return record(1, "functor/sheaf round trips on 200 random posets", fails == 0,
                  f"{fails} failures")


# -- 2 ---------------------------------------------------------------------------------


def criterion_2():
    bad = []
    for n in range(5):
        rep = verify_devissage(omega_filtration(n), 100, seed=n)
        if rep.verdict != PASS:
            bad.append((n, rep.witness))
    return record(2, "devissage on omega truncations, 1 to 5 levels, 100 samples each",
                  not bad, f"failures: {bad}" if bad else "0 failures")


# -- 3 ---------------------------------------------------------------------------------


def criterion_3():
    rng = random.Random("acceptance/3")
    fails = 0
    for k in range(100):
        Q = random_poset(rng, rng.randint(1, 4), 0.4)
        P = Q.subposet(random_downset(rng, Q))
        kind = SET if k % 2 == 0 else VECT
        F, G = random_functor(rng, P, kind, 2), random_functor(rng, Q, kind, 2)
        rep = verify_adjunction(RIGHT, F, G)
        counit_ok = pullback(pushforward_closed(F, Q), MonotoneMap.inclusion(P, Q)) == F
        fails += rep.verdict != PASS or not rep.details.get("counit_iso") or not counit_ok
    return record(3, "pullback/pushforward adjunction on 100 downward-closed inclusions",
                  fails == 0, f"{fails} failures")


# -- 4 ---------------------------------------------------------------------------------


def criterion_4():
    rng = random.Random("acceptance/4")
    wrong, findings, checked = 0, 0, 0
    for k in range(60):
        Q = random_poset(rng, rng.randint(1, 5), 0.4)
        P = Q.subposet(random_downset(rng, Q))
        kind = SET if k % 2 == 0 else VECT
        F = random_functor(rng, P, kind, 3)
        for a in Q:
            rep = proper_base_change_check(F, Q, a)
            checked += 1
            inside = a in P
            if inside:
                wrong += rep.verdict != PASS
            elif kind == SET:
                findings += rep.verdict == FINDING
                wrong += rep.verdict != FINDING or rep.witness["stalk_size"] != 1
            else:
                wrong += rep.verdict != PASS
    return record(4, "stalks of closed pushforwards", wrong == 0 and findings > 0,
                  f"{checked} stalks, {wrong} wrong, {findings} terminal-vs-initial findings logged")


# -- 5 ---------------------------------------------------------------------------------


def criterion_5():
    unfilled, bad_idem, total = 0, 0, 0
    for n in range(6):
        for P in all_posets(n):
            S = nerve(P, 3)
            total += 1
            for h in (2, 3):
                unfilled += inner_horn_check(S, h).details["unfillable"]
            bad_idem += idempotent_check(S).verdict != PASS
    return record(5, "inner horns and idempotents on nerves of all posets up to 5 points",
                  unfilled == 0 and bad_idem == 0,
                  f"{total} posets, {unfilled} unfillable horns, {bad_idem} nondegenerate idempotents")


# -- 6 ---------------------------------------------------------------------------------


def criterion_6():
    rng = random.Random("acceptance/6")
    unassigned = 0
    for _ in range(50):
        filt = random_filtration(rng, rng.randint(0, 6), rng.randint(1, 5))
        rep = union_colimit(filt, 2)
        unassigned += len(rep.witness["unassigned"]) if rep.witness else 0
    return record(6, "union colimit on 50 random filtrations", unassigned == 0,
                  f"{unassigned} unassigned simplices")


# -- 7 ---------------------------------------------------------------------------------


def random_complex(rng, n_vertices, n_max):
    verts = [f"v{i}" for i in range(n_vertices)]
    maxi = [rng.sample(verts, rng.randint(1, min(4, n_vertices))) for _ in range(n_max)]
    return SimplicialComplex.from_maximal_faces(verts, maxi)


def criterion_7():
    rng = random.Random("acceptance/7")
    fails = 0
    for _ in range(50):
        K = random_complex(rng, rng.randint(1, 8), rng.randint(0, 6))
        enum = {}
        for v in K.vertices:
            es = [e for e in K.edges() if v in e]
            rng.shuffle(es)
            enum[v] = es
        fails += build_exhaustion(K, enum).certify().verdict != PASS
    return record(7, "edge exhaustions of 50 random complexes", fails == 0, f"{fails} failures")


# -- 8 ---------------------------------------------------------------------------------


def _stratum_at(m, t):
    raw = {v: (pt.source, pt.image) for v, pt in m.points.items()}
    return m.target.strat(frozenset(pl_evaluate(raw, m.pieces, t)))


def criterion_8():
    rng = random.Random("acceptance/8")
    chains = rejected = witnessed = 0
    ok = True
    for _ in range(10):
        K = random_complex(rng, rng.randint(2, 5), rng.randint(1, 4))
        S = StratifiedComplex.by_faces(K)
        N = nerve(face_poset(K), 2)
        for n in range(3):
            for ch in N.simplices[n]:
                v = validate_exit_simplex(chain_simplex(S, list(ch)))
                chains += 1
                ok &= v.accepted and v.chain == list(ch)
    paths = 0
    while paths < 50:
        K = random_complex(rng, rng.randint(2, 5), rng.randint(1, 4))
        if not K.edges():
            continue
        S = StratifiedComplex.by_faces(K)
        u, w = sorted(rng.choice(K.edges()))
        t1 = Fraction(rng.randint(1, 5), 6)
        mid = Fraction(rng.randint(1, 3), 4)
        stops = [(0, {u: 1}), (t1, {u: 1 - mid, w: mid}), (1, {u: 1})]
        m = path_map(S, stops)
        v = validate_exit_simplex(m)
        paths += 1
        rejected += not v.accepted
        if not v.accepted:
            wit = v.witness
            pt = tuple(Fraction(x) for x in wit["point"])
            good = (wit["region"] == 1 and pt[1] != 0
                    and _stratum_at(m, pt) == wit["stratum"] != wit["expected"]
                    and _stratum_at(m, (1 - t1, t1)) == wit["expected"])
            witnessed += good
    ok &= rejected == 50 and witnessed == 50
    return record(8, "exit simplices: nerve chains accepted, re-entering paths rejected", ok,
                  f"{chains} chains, {rejected}/50 paths rejected, {witnessed}/50 witnesses confirmed")


# -- 9 ---------------------------------------------------------------------------------


def criterion_9():
    rng = random.Random("acceptance/9")
    mismatches = 0
    for _ in range(1000):
        X = random_metric_space(rng, 8)
        pts = list(X.points)
        S = Configuration(X, rng.sample(pts, rng.randint(1, 8)))
        T = Configuration(X, rng.sample(pts, rng.randint(1, 8)))
        mismatches += exp_distance(S, T) != hausdorff_by_threshold(X.d, list(S.members), list(T.members))
    axioms = metric_axiom_suite(random_metric_space(rng, 8), 1000, seed=9).verdict == PASS
    X = random_metric_space(rng, 3)
    empty = exp_distance(Configuration(X, []), Configuration(X, list(X.points)[:1])) == INF
    return record(9, "exponential metric vs Hausdorff oracle, axioms, empty set at infinity",
                  mismatches == 0 and axioms and empty,
                  f"{mismatches} mismatches in 1000 pairs, axioms {'ok' if axioms else 'FAIL'}, "
                  f"D(empty, S) = {'+inf' if empty else 'wrong'}")


# -- 10 --------------------------------------------------------------------------------


def criterion_10():
    X = FiniteMetricSpace.from_matrix(["x", "y"], [[0, 10], [10, 0]])
    rep = cone_triangle_scan(X, [Fraction(1, 10)])
    found = rep.verdict == FINDING and any(v["through_apex"] for v in rep.witness["violations"])
    rng = random.Random("acceptance/10")
    quiet = True
    for _ in range(20):
        Y = random_metric_space(rng, rng.randint(2, 5), span=4)
        r = Y.diameter() / 2 + Fraction(rng.randint(0, 4), 4)
        quiet &= cone_triangle_scan(Y, [r, r + 1, 2 * r]).verdict == PASS
    return record(10, "cone metric: violation through the apex, none for small diameter",
                  found and quiet, f"finding {'reproduced' if found else 'missing'}, "
                  f"small-diameter scans {'clean' if quiet else 'NOT clean'}")


# -- 11 --------------------------------------------------------------------------------


def criterion_11():
    pts = {"o": (Fraction(0),)}
    pts |= {f"x{k}": (Fraction(1, 2 ** k),) for k in range(1, 30)}
    X = FiniteMetricSpace.from_coordinates(pts)
    cand = Configuration(X, ["o"])
    wrong = 0
    for L in range(3, 13):
        # cardinality grows, points crowd onto o
        seq = [Configuration(X, ["o"] + [f"x{j}" for j in range(L, L + k)]) for k in range(L)]
        schedule = [(Fraction(1, 2 ** (L - 1)), 0)]
        wrong += colimit_convergence_check(seq, cand, schedule).verdict != FINDING
        # bounded: one extra point sliding onto o
        seq = [Configuration(X, ["o", f"x{j}"]) for j in range(L, L + 4)]
        wrong += colimit_convergence_check(seq, cand, schedule).verdict != PASS
    return record(11, "convergent unbounded sequences flagged, bounded ones not (20 sequences)",
                  wrong == 0, f"{wrong} misclassifications")


# -- 12 --------------------------------------------------------------------------------

DRIVER = """
import io, json, sys, contextlib
from pathlib import Path
sys.path.insert(0, sys.argv[1])
from cli_cases import CASES, prepare, resolve
from stratsheaf.cli import run
tmp = Path(sys.argv[2]); prepare(tmp)
out = []
for i, (argv, code) in enumerate(CASES):
    art = tmp / f"artifact{i}"
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        got = run(resolve(argv, tmp) + ([] if "--out" in argv else ["--out", str(art)]))
    artifact = art.read_text() if art.exists() else ""
    out.append([" ".join(argv), got, buf.getvalue(), artifact])
print(json.dumps(out))
"""


def criterion_12():
    tests_dir = str(Path(__file__).resolve().parent)
    runs = []
    for hashseed in ("1", "2"):
        with tempfile.TemporaryDirectory() as d:
            env = {**os.environ, "PYTHONHASHSEED": hashseed}
            res = subprocess.run([sys.executable, "-c", DRIVER, tests_dir, d], env=env,
                                 capture_output=True, text=True, check=True)
            runs.append(json.loads(res.stdout.replace(d, "<tmp>")))
    diffs = [a[0] for a, b in zip(*runs) if a != b]
    return record(12, "every CLI case run twice gives byte-identical reports and artifacts",
                  not diffs and len(runs[0]) > 0,
                  f"{len(runs[0])} commands, differing: {diffs or 'none'}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


def line(n):
    title, ok, note = RESULTS[n]
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title} ({note})"


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    tr = request.config.pluginmanager.getplugin("terminalreporter")
    lines = [line(n) for n in sorted(RESULTS)]
    if tr is not None:
        tr.write_sep("=", "acceptance criteria")
        for s in lines:
            tr.write_line(s)
    else:
        print("\n".join(lines))


@pytest.mark.parametrize("crit", CRITERIA, ids=[f"criterion_{i + 1}" for i in range(len(CRITERIA))])
def test_criterion(crit):
    t = time.perf_counter()
    ok = crit()
    n = CRITERIA.index(crit) + 1
    print(line(n), f"[{time.perf_counter() - t:.1f}s]")
    assert ok, line(n)


if __name__ == "__main__":
    for c in CRITERIA:
        c()
    for n in sorted(RESULTS):
        print(line(n))
    sys.exit(0 if all(ok for _, ok, _ in RESULTS.values()) else 1)
