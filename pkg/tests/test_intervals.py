import pytest

from dkcat import chains as ch
from dkcat import intervals as iv_mod
from dkcat import serialize as ser
from dkcat import simplicial as sm
from dkcat.chains import ChainComplex, ChainMap
from dkcat.hopf import group_algebra, hopf_from_dict, hopf_to_dict
from dkcat.intervals import FAIL, NA, PASS
from dkcat.linalg import Field, Matrix

Q = Field.rationals()
F2, F3, F5 = Field.prime(2), Field.prime(3), Field.prime(5)
AXIOMS = ("C0", "C1", "C2", "C3", "C4", "C5", "C6")


def all_verdicts(iv, mode="strict"):
    return iv_mod.verify_cocategory(iv, mode).verdicts(), iv_mod.verify_cylinder(iv).verdicts()


def mutations(iv):
    for name in ("c", "i0", "i1", "p"):
        f = getattr(iv, name)
        for n, m in enumerate(f.components):
            for r in range(m.rows):
                for c in range(m.cols):
                    yield name, n, r, c


# ------------------------------------------------------------- chain interval


def test_chain_interval_data(field):
    iv = iv_mod.chain_interval(field)
    assert iv.I1.ranks == (2, 1) and iv.I1.d(1) == Matrix(field, [[-1], [1]])
    assert iv.I2.ranks == (3, 2) and iv.I2.d(1) == Matrix(field, [[-1, 0], [1, -1], [0, 1]])
    assert iv.p @ iv.d0 == ch.identity(iv.I)
    for name in ("d0", "d1", "p", "i0", "i1", "c"):
        assert getattr(iv, name).is_chain_map()


def test_chain_interval_passes_strict(field):
    rep = iv_mod.verify_cocategory(iv_mod.chain_interval(field))
    assert all(rep.verdict(a) == PASS for a in AXIOMS), rep.to_dict()
    cyl = iv_mod.verify_cylinder(iv_mod.chain_interval(field))
    assert cyl.passed and set(cyl.verdicts().values()) == {PASS}


def test_chain_comparison_is_an_isomorphism(field):
    iv = iv_mod.chain_interval(field)
    P, kappa = iv_mod.comparison(iv)
    assert P.obj.ranks == (3, 2) and kappa.target.ranks == (3, 2)
    assert kappa.is_iso()


def test_truncated_cocomposition_fails_counit_law():
    iv = iv_mod.chain_interval(F5)
    c = iv.c
    bad = ChainMap(c.source, c.target, [c[0], Matrix(F5, [[1], [0]])])
    rep = iv_mod.verify_cocategory(iv.replace(c=bad))
    assert rep.verdict("C4") == FAIL
    eqs = [f["equation"] for f in rep.result("C4").witness["failures"]]
    assert "q1 c = id" in eqs
    wit = [f for f in rep.result("C4").witness["failures"] if f["equation"] == "q1 c = id"][0]
    assert wit["degree"] == 1


@pytest.mark.parametrize("k", [F2, F5, Q], ids=str)
def test_every_single_entry_mutation_flips_a_verdict(k):
    iv = iv_mod.chain_interval(k)
    base = all_verdicts(iv)
    muts = list(mutations(iv))
    assert len(muts) >= 10
    for name, n, r, c in muts:
        assert all_verdicts(iv_mod.report_mutation(iv, name, n, r, c)) != base, (name, n, r, c)


@pytest.mark.parametrize("k", [F3, Q], ids=str)
def test_strict_implies_lax(k):
    iv = iv_mod.chain_interval(k)
    for args in [None] + list(mutations(iv)):
        cand = iv if args is None else iv_mod.report_mutation(iv, *args)
        strict = iv_mod.verify_cocategory(cand, "strict")
        lax = iv_mod.verify_cocategory(cand, "lax")
        if strict.passed:
            assert lax.passed
        for a in AXIOMS:
            if strict.verdict(a) == PASS:
                assert lax.verdict(a) == PASS


def test_sum_boundary_breaks_the_cylinder():
    iv = iv_mod.chain_interval(Q)
    I1 = ChainComplex(Q, [2, 1], [Matrix(Q, [[1], [1]])])
    p = ChainMap(I1, iv.I, [iv.p[0], Matrix.zeros(Q, 0, 1)])
    d0 = ChainMap(iv.I, I1, [iv.d0[0]])
    d1 = ChainMap(iv.I, I1, [iv.d1[0]])
    bad = iv.replace(I1=I1, p=p, d0=d0, d1=d1)
    cyl = iv_mod.verify_cylinder(bad)
    assert cyl.verdict("Y3 weak equivalence") == FAIL
    assert ch.homology(I1) == (1, 0)


def test_reports_are_stable():
    a = ser.dumps(iv_mod.verify_cocategory(iv_mod.chain_interval(F3)).to_dict())
    b = ser.dumps(iv_mod.verify_cocategory(iv_mod.chain_interval(F3)).to_dict())
    assert a == b


def test_unknown_mode_is_rejected():
    with pytest.raises(ValueError):
        iv_mod.verify_cocategory(iv_mod.chain_interval(F2), "loose")


# ------------------------------------------------------------- simplicial interval


@pytest.mark.parametrize("k", [F2, F3, Q], ids=str)
def test_gamma_transport_keeps_verdicts(k):
    ci = iv_mod.chain_interval(k)
    si = iv_mod.smod_interval(k, 2)
    assert si.I1.ranks == (2, 3, 4)
    assert si.I == sm.SimplicialModule.constant(k, 2)
    assert all_verdicts(ci) == all_verdicts(si)
    assert sm.is_weak_equivalence_smod(si.p)


def test_gamma_transport_keeps_mutated_verdicts():
    ci = iv_mod.chain_interval(F3)
    for args in list(mutations(ci))[:8]:
        bad = iv_mod.report_mutation(ci, *args)
        maps = {n: sm.gamma_map(getattr(bad, n), 2) for n in ("d0", "d1", "p", "i0", "i1", "c")}
        transported = iv_mod.smod_interval(F3, 2).replace(**maps)
        assert iv_mod.verify_cocategory(transported).verdicts() == iv_mod.verify_cocategory(bad).verdicts()


def test_smod_truncation_must_be_positive():
    with pytest.raises(ValueError):
        iv_mod.smod_interval(F2, 0)


# ------------------------------------------------------------- Hopf interval


@pytest.mark.parametrize("k,n", [(F3, 2), (F2, 3), (F5, 2), (Q, 2)], ids=str)
def test_group_algebra_interval(k, n):
    H = group_algebra(k, n)
    assert H.is_valid()
    iv = iv_mod.hopf_interval(H)
    rep = iv_mod.verify_cocategory(iv, "strict")
    for a in ("C0", "C1", "C2", "C5"):
        assert rep.verdict(a) == PASS
    assert rep.verdict("C3") == FAIL
    wit = rep.result("C3").witness
    assert wit["kernel-dim"] == n - 1
    # dimension count: 2(1 + h) - 1 on the glued side against 2 + h
    _, kappa = iv_mod.comparison(iv)
    assert kappa.source == 2 * (1 + n) - 1 and kappa.target == 2 + n
    assert rep.verdict("C4") == NA and rep.verdict("C6") == NA
    lax = iv_mod.verify_cocategory(iv, "lax")
    assert lax.verdict("C3") == NA


def test_hopf_endpoints():
    H = group_algebra(F3, 2)
    iv = iv_mod.hopf_interval(H)
    assert (iv.p @ iv.d0).m == Matrix.identity(F3, 1)
    assert (iv.p @ iv.d1).m == Matrix.identity(F3, 1)
    shared = (iv.i0 @ iv.d1).m
    assert shared == (iv.i1 @ iv.d0).m
    assert shared == Matrix(F3, [[0], [1], [0], [0]])
    assert (iv.c @ iv.d0).m == (iv.i0 @ iv.d0).m
    assert (iv.c @ iv.d1).m == (iv.i1 @ iv.d1).m


def test_hopf_cylinder_and_linearity():
    iv = iv_mod.hopf_interval(group_algebra(F3, 2))
    cyl = iv_mod.verify_cylinder(iv)
    assert cyl.verdict("Y1 factors the fold map") == PASS
    assert cyl.verdict("Y2 cofibration") == PASS
    assert cyl.verdict("Y3 weak equivalence") == NA
    lin = iv_mod.hopf_linearity_report(iv)
    assert lin["p"] == "H-linear" and lin["c"] == "H-linear"
    assert lin["d1"].startswith("not H-linear")
    triv = iv_mod.hopf_linearity_report(iv_mod.hopf_interval(group_algebra(F3, 2), "trivial"))
    assert triv["module I1"] == "ok"


def test_hopf_dict_round_trip():
    H = group_algebra(F5, 3)
    assert hopf_from_dict(hopf_to_dict(H)) == H


def test_invalid_hopf_data_is_rejected():
    H = group_algebra(F3, 2)
    bad = hopf_to_dict(H)
    bad["counit"] = [[1, 2]]
    with pytest.raises(ValueError):
        iv_mod.hopf_interval(hopf_from_dict(bad))


# ------------------------------------------------------------- category interval


def test_cat_interval_passes():
    iv = iv_mod.cat_interval()
    rep = iv_mod.verify_cocategory(iv)
    assert all(rep.verdict(a) == PASS for a in AXIOMS), rep.to_dict()
    cyl = iv_mod.verify_cylinder(iv)
    assert set(cyl.verdicts().values()) == {PASS}


def test_cat_interval_with_wrong_cocomposition():
    iv = iv_mod.cat_interval()
    rep = iv_mod.verify_cocategory(iv.replace(c=iv.i0))
    assert not rep.passed


# ------------------------------------------------------------- comultiplication


def test_unit_comultiplication_passes(field):
    iv = iv_mod.chain_interval(field)
    I = iv.I
    v = ChainMap(I, ch.tensor(I, I), [Matrix.identity(field, 1)])
    rep = iv_mod.check_interval_comultiplication(iv, v, obj=I, counit=ch.identity(I))
    assert rep.passed


def test_front_back_diagonal_on_the_interval(field):
    iv = iv_mod.chain_interval(field)
    X = iv.I1
    XX = ch.tensor(X, X)
    # a -> a(x)a, b -> b(x)b, e -> a(x)e + e(x)b
    v0 = Matrix(field, [[1, 0], [0, 0], [0, 0], [0, 1]])
    v1 = Matrix(field, [[1], [0], [0], [1]])
    v = ChainMap(X, XX, [v0, v1, Matrix.zeros(field, 1, 0)])
    assert v.is_chain_map()
    rep = iv_mod.check_interval_comultiplication(iv, v)
    assert rep.verdict("coassociativity") == PASS
    assert rep.verdict("left counit") == PASS and rep.verdict("right counit") == PASS
    # the Koszul swap sends a(x)e + e(x)b to e(x)a + b(x)e
    assert rep.verdict("cocommutativity") == FAIL
    assert rep.result("cocommutativity").witness["degree"] == 1


def test_comultiplication_shape_is_checked():
    iv = iv_mod.chain_interval(F2)
    with pytest.raises(ValueError):
        iv_mod.check_interval_comultiplication(iv, ch.identity(iv.I1))
