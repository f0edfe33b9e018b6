"""Acceptance suite: one timed check per criterion, each printing a single
PASS/FAIL line.  Run directly (``python3 tests/test_acceptance.py``) or via
pytest; sub-check names are printed for any failing criterion."""
from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from _gen import builder_utility, ground, market, pi_correspondence  # noqa: E402
from pichoice import axioms as ax  # noqa: E402
from pichoice import matching as mt  # noqa: E402
from pichoice.applications import corr  # noqa: E402
from pichoice.choice import ChoiceFunction, UtilityFunction  # noqa: E402
from pichoice.errors import NotPI  # noqa: E402
from pichoice.core import NEG_INF, UMWeight, popcount, random_um_weight, submasks  # noqa: E402
from pichoice.instances import (  # noqa: E402
    admission, appd, ex41, ex42, ex43, instance_matching, restricted_rows, table1, table2_rows,
)
from pichoice.rationalize import CycleWitness, RevealedOrder, rationalize_pi, rationalizes, sarp_check, utility_from_order  # noqa: E402
from pichoice.tiebreak import CallStats, brute_tiebroken, choose_pi_lad, choose_tiebroken  # noqa: E402

SECTION5 = ("responsive", "controlled", "edcr", "overlapping")


def _weight(v):
    return v.witness["weight"].as_dict()


def c1_table1():
    out = []
    v = {k: (ax.check_pi_corr(table1(k)), ax.check_lad_corr(table1(k))) for k in ("C0", "C1", "C2", "C3", "C4")}
    for k in ("C0", "C1"):
        out.append((f"{k} PI holds", not v[k][0].violated))
        out.append((f"{k} LAD holds", not v[k][1].violated))
    out.append(("C2 PI holds", not v["C2"][0].violated))
    lad = v["C2"][1]
    out.append(("C2 LAD violated, w(a) > w(b)+w(c)", lad.violated and "weight" in lad.witness
                and _weight(lad)["a"] > _weight(lad)["b"] + _weight(lad)["c"] and ax.replay(lad, table1("C2"))))
    pi = v["C3"][0]
    out.append(("C3 PI violated, w(a) > w(b) > w(c)", pi.violated and "weight" in pi.witness
                and _weight(pi)["a"] > _weight(pi)["b"] > _weight(pi)["c"] and ax.replay(pi, table1("C3"))))
    out.append(("C3 LAD holds", not v["C3"][1].violated))
    c4 = table1("C4")
    gs = c4.ground
    out.append(("C4 PI violated (replayable)", v["C4"][0].violated and ax.replay(v["C4"][0], c4)))
    out.append(("C4 LAD violated", v["C4"][1].violated))
    w = UMWeight.of(gs, {"a": -1, "b": 2, "c": -4})
    m = gs.mask
    got = [brute_tiebroken(c4, w, m(x)) for x in ("a", "ab", "abc")]
    # C^w(C^w({a,b}) + c) = C^w({a,b,c}) = {} but C^w({a,b}) = {a,b}: PI fails under (-1,2,-4)
    out.append(("C4 under (-1,2,-4) breaks PI", got == [0, m("ab"), 0]))
    return out


def c2_gmatroid():
    out = []
    for k in ("C0", "C1", "C2"):
        c = table1(k)
        out.append((f"{k} families are g-matroids",
                    all(ax.check_gmatroid(c.enumerate(x)).status == ax.HOLDS for x in c.ground.subsets())))
    rng = random.Random(2)
    bad = 0
    for t in range(60):
        gs = ground(rng.randint(1, 5))
        c = corr(builder_utility(gs, rng, SECTION5[t % 4]))
        bad += any(ax.check_gmatroid(c.enumerate(x)).violated for x in gs.subsets())
    out.append(("60 builder instances (n <= 5) all g-matroids", bad == 0))
    c4 = table1("C4")
    out.append(("C4 at {a,b} violated", ax.check_gmatroid(c4.enumerate(c4.ground.mask("ab"))).violated))
    h = admission()
    out.append(("C^H at I violated", ax.check_gmatroid(h.enumerate(h.ground.full)).violated))
    return out


def c3_rationalize():
    out = []
    rng = random.Random(3)
    insts = [table1(k) for k in ("C0", "C1", "C2")]
    for t in range(30):
        gs = ground(rng.randint(1, 5))
        insts.append(corr(builder_utility(gs, rng, SECTION5[t % 4])))
    ok_tau = ok_order = True
    for c in insts:
        try:
            ok_tau &= rationalizes(rationalize_pi(c), c)
        except NotPI:
            ok_tau = False
        r = sarp_check(c)
        ok_order &= isinstance(r, RevealedOrder) and rationalizes(utility_from_order(r), c)
    out.append((f"closure utility round-trips on {len(insts)} instances", ok_tau))
    out.append((f"revealed-order utility round-trips on {len(insts)} instances", ok_order))
    out.append(("C4 has a revealed cycle", isinstance(sarp_check(table1("C4")), CycleWitness)))
    out.append(("C^H has a revealed cycle", isinstance(sarp_check(admission()), CycleWitness)))
    return out


def c4_algorithm1():
    rng = random.Random(4)
    mismatch = over_calls = over_evals = 0
    for t in range(50):
        c = pi_correspondence(4 + t % 2, rng)
        gs = c.ground
        for _ in range(100):
            w = random_um_weight(gs, rng)
            for x in gs.subsets():
                want = brute_tiebroken(c, w, x)
                s1, s2 = CallStats(), CallStats()
                mismatch += choose_tiebroken(c, w, x, s1, trust_pi=True) != want
                mismatch += choose_pi_lad(c, w, x, s2) != want
                k = popcount(x)
                over_calls += s1.membership_calls > 4 * k ** 3
                over_evals += s2.candidate_evals > 2 * k ** 2
    return [("Algorithm 1 and PI+LAD routine equal argmax", mismatch == 0),
            ("membership calls <= 4|X|^3", over_calls == 0),
            ("candidate evaluations <= 2|X|^2", over_evals == 0)]


def c5_ex41():
    mk = ex41()
    mu, mp = instance_matching(mk, "ex4.1"), instance_matching(mk, "ex4.1", "mu_prime")
    return [("mu stable", not mt.is_stable(mk, mu).violated),
            ("mu not constrained efficient", not mt.oracle_constrained_efficient(mk, mu)),
            ("mu' stable", not mt.is_stable(mk, mp).violated),
            ("mu' dominates mu", mt.pareto_dominates(mk, mp, mu)),
            ("pipeline returns mu'", mt.constrained_efficient(mk, mu)[0] == mp)]


def c6_ex43():
    mk = ex43()
    gs = mk.students
    mu = instance_matching(mk, "ex4.3")
    nu = mt.apply_psic(mk, mu, (0, 1, 2, 3))
    v = mt.is_stable(mk, nu)
    pool = gs.mask(["i1", "i3", "i5"])
    return [("find_psic = (i1,i2)", mt.find_psic(mk, mu) == (0, 1)),
            ("(i1,i2) applied is stable", not mt.is_stable(mk, mt.apply_psic(mk, mu, (0, 1))).violated),
            ("(i1,i2,i3,i4) applied is blocked at s1 from {i1,i3,i5}",
             v.violated and v.witness.get("school") == "s1" and v.witness.get("pool") == pool),
            ("C_s1({i1,i3,i5}) = {{i1,i5},{i3,i5}}",
             mk.corr[0].enumerate(pool) == sorted([gs.mask(["i1", "i5"]), gs.mask(["i3", "i5"])]))]


def c7_ex42():
    mk = ex42()
    mu = instance_matching(mk, "ex4.2")
    return [("mu constrained efficient", mt.oracle_constrained_efficient(mk, mu)),
            ("(i1,i2,i3,i4) is a PSIC", mt.is_psic(mk, mu, (0, 1, 2, 3))),
            ("s1 PI violated", ax.check_pi_corr(mk.corr[0]).violated)]


def c8_appd():
    mk = appd()
    gs = mk.students
    s1 = mk.corr[0]
    want = sorted(gs.mask(p) for p in (["i1", "i2"], ["i1", "i3"], ["i2", "i4"]))
    b = ax.check_bridging(s1, 2)
    ours = {(int(r["X"]), int(r["Y"]), int(r["A"]), int(r["B"]), int(r["i"])): [int(j) for j in r["js"]]
            for r in restricted_rows(b.rows)}
    reference = table2_rows(gs)
    spot = True
    for r in random.Random(8).sample(reference, 5):
        key = (r["X"], r["Y"], r["A"], r["B"], r["i"])
        pool = r["X"] & ~(1 << r["i"])
        spot &= key in ours and r["j"] in ours[key] and s1.member(pool, (r["A"] & ~(1 << r["i"])) | (1 << r["j"]))
    mu = instance_matching(mk, "appD")
    return [("C(full) = {{i1,i2},{i1,i3},{i2,i4}}", s1.enumerate(gs.full) == want),
            ("bridging holds", b.status == ax.HOLDS),
            (f"exactly 80 restricted rows (found {len(ours)})", len(ours) == 80),
            ("5 sampled reference rows match field by field", spot),
            ("mu oracle-efficient", mt.oracle_constrained_efficient(mk, mu)),
            ("find_psic = (i1,i3,i2,i4)", mt.find_psic(mk, mu) == (0, 2, 1, 3))]


def c9_efficiency():
    rng = random.Random(9)
    n_stable = bad_equiv = bad_pipe = 0
    for _ in range(200):
        mk = market(rng)
        stable = mt.stable_matchings(mk)
        for mu in stable:
            n_stable += 1
            eff = mt.oracle_constrained_efficient(mk, mu, stable)
            bad_equiv += eff != (mt.is_maximal(mk, mu) and mt.find_psic(mk, mu) is None)
            out, _ = mt.constrained_efficient(mk, mu)
            bad_pipe += not mt.oracle_constrained_efficient(mk, out, stable)
    return [(f"efficient <=> maximal and no PSIC ({n_stable} stable matchings)", bad_equiv == 0),
            ("pipeline output passes the oracle", bad_pipe == 0)]


def _random_table(gs, rng):
    vals = [0] + [NEG_INF if rng.random() < 0.2 else rng.randint(-1, 3) for _ in range(1, 1 << gs.n)]
    return UtilityFunction(gs, lambda x: vals[x])


def _perturbed_choice(u, w):
    def key(y):
        return u(y), w(y)

    def choose(x):
        feasible = [y for y in submasks(x) if u(y) is not NEG_INF]
        return max(feasible, key=key)

    return ChoiceFunction(u.ground, choose)


def c10_concavity():
    rng = random.Random(10)
    ok_builders = True
    for t in range(40):
        u = builder_utility(ground(rng.randint(1, 5)), rng, SECTION5[t % 4])
        ok_builders &= ax.check_ordinal_concavity(u).status == ax.HOLDS
        ok_builders &= ax.check_size_restricted(u).status == ax.HOLDS
    tested = pi_ok = 0
    for t in range(400):
        gs = ground(rng.randint(1, 4))
        u = builder_utility(gs, rng) if t % 2 else _random_table(gs, rng)
        if ax.check_ordinal_concavity(u).violated:
            continue
        tested += 1
        pi_ok += ax.check_pi_fn(_perturbed_choice(u, random_um_weight(gs, rng))).ok
    return [("section 5 utilities pass ordinal and size-restricted concavity", ok_builders),
            (f"{tested} ordinally concave utilities give PI perturbed choice", tested >= 50 and pi_ok == tested)]


CRITERIA = [
    (1, "table1 axiom classification", c1_table1, 5),
    (2, "choice families are g-matroids", c2_gmatroid, 10),
    (3, "rationalization round trips", c3_rationalize, 5),
    (4, "Algorithm 1 and PI+LAD choice", c4_algorithm1, 60),
    (5, "dominated stable matching", c5_ex41, 1),
    (6, "shortest PSIC preserves stability", c6_ex43, 1),
    (7, "efficiency needs PI", c7_ex42, 1),
    (8, "committee admissions and bridging", c8_appd, 5),
    (9, "efficiency characterization", c9_efficiency, 120),
    (10, "ordinal concavity gives PI", c10_concavity, 30),
]


def evaluate(fn, limit):
    t0 = time.perf_counter()
    checks = fn()
    dt = time.perf_counter() - t0
    checks.append((f"runtime {dt:.2f}s < {limit}s", dt < limit))
    return all(ok for _, ok in checks), checks, dt


def _line(num, title, ok, checks, dt):
    head = f"criterion {num:2d} {'PASS' if ok else 'FAIL'} ({dt:.2f}s) {title}"
    failed = [name for name, good in checks if not good]
    return head + (f" -- failed: {'; '.join(failed)}" if failed else "")


@pytest.mark.parametrize("num,title,fn,limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn, limit, capsys):
    ok, checks, dt = evaluate(fn, limit)
    with capsys.disabled():
        print("\n" + _line(num, title, ok, checks, dt))
    assert ok, [name for name, good in checks if not good]


if __name__ == "__main__":
    results = []
    for num, title, fn, limit in CRITERIA:
        ok, checks, dt = evaluate(fn, limit)
        results.append(ok)
        print(_line(num, title, ok, checks, dt))
    print(f"{sum(results)}/{len(results)} criteria pass")
