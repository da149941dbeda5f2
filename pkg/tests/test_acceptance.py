"""Acceptance gate: one test per criterion, each with its time budget."""

import time

import pytest

from dkcat import chains as ch
from dkcat import enriched as en
from dkcat import finite_cats as fc
from dkcat import intervals as iv_mod
from dkcat import path_objects as po
from dkcat.chains import ChainComplex
from dkcat.hopf import group_algebra
from dkcat.intervals import FAIL, PASS
from dkcat.linalg import Field
from dkcat.suites import characterization_suite, dold_kan_suite

import conftest

Q = Field.rationals()
F2, F3, F5, F7 = (Field.prime(p) for p in (2, 3, 5, 7))
AXIOMS = ("C0", "C1", "C2", "C3", "C4", "C5", "C6")


def record(n: int, title: str, ok: bool, elapsed: float, budget=None) -> bool:
    within = budget is None or elapsed < budget
    verdict = "PASS" if ok and within else "FAIL"
    limit = f" (budget {budget:g} s)" if budget is not None else ""
    line = f"criterion {n}: {verdict}  {title}  [{elapsed:.2f} s{limit}]"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    return ok and within


def path_categories(k):
    return {
        "unit": en.unit_category(k),
        "disk-arrow": en.two_object(ChainComplex.disk(k, 1)),
        "groupoid": en.linearize(fc.codiscrete([0, 1]), k),
        "square-zero": en.square_zero_category(k),
    }


@pytest.fixture(scope="module")
def path_bundles():
    t = time.perf_counter()
    out = {(name, str(k)): po.build_bundle(A) for k in (F2, F3) for name, A in path_categories(k).items()}
    return out, time.perf_counter() - t


def test_criterion_1_chain_interval_soundness():
    t = time.perf_counter()
    ok = True
    for k in (Q, F2, F3, F5):
        iv = iv_mod.chain_interval(k)
        rep = iv_mod.verify_cocategory(iv, "strict")
        cyl = iv_mod.verify_cylinder(iv)
        ok &= all(rep.verdict(a) == PASS for a in AXIOMS) and rep.passed
        ok &= set(cyl.verdicts().values()) == {PASS}
    assert record(1, "chain interval passes C0-C6 and the cylinder axioms over Q, F2, F3, F5", ok, time.perf_counter() - t, 1.0)


def test_criterion_2_mutation_coverage():
    t = time.perf_counter()
    iv = iv_mod.chain_interval(F5)

    def verdicts(x):
        return iv_mod.verify_cocategory(x).verdicts(), iv_mod.verify_cylinder(x).verdicts()

    base = verdicts(iv)
    flipped = total = 0
    for name in ("c", "i0", "i1", "p"):
        for n, m in enumerate(getattr(iv, name).components):
            for r in range(m.rows):
                for c in range(m.cols):
                    total += 1
                    flipped += verdicts(iv_mod.report_mutation(iv, name, n, r, c)) != base
    ok = total >= 10 and flipped == total
    assert record(2, f"{flipped}/{total} single-entry mutations flip a verdict", ok, time.perf_counter() - t, 5.0)


def test_criterion_3_cylinder_homology():
    t = time.perf_counter()
    ok = True
    for k in (Q, F2, F3, F5):
        iv = iv_mod.chain_interval(k)
        ok &= ch.homology(iv.I1) == (1, 0) and ch.is_quasi_iso(iv.p)
    assert record(3, "dim H(I[1]) = (1, 0) and p is a quasi-isomorphism", ok, time.perf_counter() - t)


def test_criterion_4_dold_kan_suite():
    t = time.perf_counter()
    res = dold_kan_suite(100, 0, 4, F7, 3)
    title = f"Dold-Kan suite, 100 trials over F7, degree 4, ranks <= 3, failures {len(res.failures)}"
    assert record(4, title, res.passed and res.trials == 100, time.perf_counter() - t, 30.0), res.failures[:3]


def test_criterion_5_path_object_suite(path_bundles):
    bundles, build_time = path_bundles
    t = time.perf_counter()
    bad = []
    for key, b in bundles.items():
        rep = po.verify_path_object(b)
        checks = (
            rep["passed"],
            en.validate_category(b.P0).valid,
            po._functors_equal(b.st_P.compose(b.i), en.diagonal(b.base)) is None,
            en.is_locally(b.i, "weq"),
            en.is_locally(b.st_P, "fib"),
            en.is_homotopy_isofibration(b.st_P),
            en.is_homotopy_essentially_surjective(b.i),
            en.is_dk_equivalence(b.i),
            en.is_dk_fibration(b.st_P),
        )
        if not all(checks):
            bad.append((key, checks))
    ok = not bad and len(bundles) == 8
    elapsed = build_time + time.perf_counter() - t
    assert record(5, "path objects over 4 categories x F2, F3: i DK-equivalence, (s,t) DK-fibration", ok, elapsed, 60.0), bad


def test_criterion_6_characterization_property():
    t = time.perf_counter()
    res = characterization_suite(50, 0, F2, max_objects=3, max_rank=2)
    title = f"characterization pair equal in 50 random functors over F2 {res.stats['outcomes']}"
    assert record(6, title, res.passed, time.perf_counter() - t, 60.0), res.failures


def test_criterion_7_hopf_report_stability():
    t = time.perf_counter()
    ok = True
    for k, h in ((F3, 2), (F2, 3)):
        first = iv_mod.verify_cocategory(iv_mod.hopf_interval(group_algebra(k, h)), "strict")
        again = iv_mod.verify_cocategory(iv_mod.hopf_interval(group_algebra(k, h)), "strict")
        ok &= first.to_dict() == again.to_dict()
        ok &= all(first.verdict(a) == PASS for a in ("C1", "C2", "C5"))
        ok &= first.verdict("C3") == FAIL and first.result("C3").witness["kernel-dim"] == h - 1
    assert record(7, "k[C2]/F3 and k[C3]/F2: C1, C2, C5 pass and C3 fails with kernel h-1", ok, time.perf_counter() - t)


def test_criterion_8_change_of_base_coherence(path_bundles):
    bundles, _ = path_bundles
    t = time.perf_counter()
    keys = ("locally-weq", "locally-fib", "ess-surj", "isofib", "dk-equiv", "dk-fib")
    bad = []
    for name, b in bundles.items():
        for label, F in (("i", b.i), ("(s,t)", b.st_P)):
            before = en.dk_report(F)
            after = en.dk_report(en.gamma_change_base_functor(F))
            if any(before[x] != after[x] for x in keys):
                bad.append((name, label))
    assert record(8, "DK verdicts unchanged by change of base on the path-object suite", not bad, time.perf_counter() - t, 60.0), bad
