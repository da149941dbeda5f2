import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from dkcat import chains as ch
from dkcat import serialize as ser
from dkcat import simplicial as sm
from dkcat.chains import ChainComplex, StructuralError
from dkcat.intervals import chain_interval
from dkcat.linalg import Field, Matrix
from dkcat.suites import conjugate, random_chain_map, random_complex, random_invertible, random_smodule

from conftest import fields, prime_fields, rng_for, seeds

Q = Field.rationals()
F2, F3 = Field.prime(2), Field.prime(3)


def brute_pi0(M: sm.SimplicialModule) -> int:
    """Connected components of the graph on ``M_0`` with an edge ``d1 y -- d0 y`` for every ``y`` in ``M_1``."""
    p = M.field.order
    r0, r1 = M.rank(0), M.rank(1)
    verts = list(itertools.product(range(p), repeat=r0))
    index = {v: i for i, v in enumerate(verts)}
    if M.level == 0:
        return len(verts)
    d0 = M.face(1, 0).a.astype(np.int64)
    d1 = M.face(1, 1).a.astype(np.int64)
    src, dst = [], []
    for y in itertools.product(range(p), repeat=r1):
        y = np.array(y, dtype=np.int64)
        src.append(index[tuple(int(t) for t in (d0 @ y) % p)] if r0 else 0)
        dst.append(index[tuple(int(t) for t in (d1 @ y) % p)] if r0 else 0)
    graph = coo_matrix((np.ones(len(src)), (src, dst)), shape=(len(verts), len(verts)))
    return connected_components(graph, directed=False)[0]


# ------------------------------------------------------------- Dold-Kan


def test_unit_module(field):
    ck = sm.SimplicialModule.constant(field, 3)
    assert ck.is_valid()
    assert sm.normalize(ck) == ChainComplex.unit(field)
    assert sm.gamma(ChainComplex.unit(field), 3) == ck


def test_gamma_of_interval(field):
    G = sm.gamma(chain_interval(field).I1, 4)
    assert G.ranks == (2, 3, 4, 5, 6)
    assert G.is_valid()


@given(fields, seeds)
def test_gamma_ranks_count_surjections(k, seed):
    C = random_complex(rng_for(seed), k, 3, 3)
    L = max(C.top, 1) + 1
    G = sm.gamma(C, L)
    assert G.ranks == tuple(sum(comb(n, m) * C.rank(m) for m in range(n + 1)) for n in range(L + 1))
    assert G.is_valid()


def test_gamma_of_disk_at_level_four(field):
    G = sm.gamma(ChainComplex.disk(field, 2), 4)
    assert G.ranks == (0, 1, 3, 6, 10)


def test_gamma_refuses_low_truncation():
    with pytest.raises(StructuralError):
        sm.gamma(ChainComplex.disk(F2, 3), 2)


def test_normalize_gamma_interval_f3():
    C = chain_interval(F3).I1
    assert sm.normalize(sm.gamma(C, 1)) == C


@given(fields, seeds)
def test_normalize_gamma_round_trip(k, seed):
    C = random_complex(rng_for(seed), k, 3, 2)
    assert sm.normalize(sm.gamma(C)) == C


@given(prime_fields, seeds)
def test_counit_is_a_simplicial_isomorphism(k, seed):
    rng = rng_for(seed)
    M = random_smodule(rng, k, 3, 3, 2)
    assert M.is_valid()
    psi = sm.dold_kan_counit(M)
    assert psi.is_simplicial() and psi.is_iso()


@given(prime_fields, seeds)
def test_gamma_and_normalize_are_functorial(k, seed):
    rng = rng_for(seed)
    C, D = random_complex(rng, k, 2, 2), random_complex(rng, k, 2, 2)
    f, g = random_chain_map(rng, C, D), random_chain_map(rng, D, D)
    L = 2
    Gf, Gg = sm.gamma_map(f, L), sm.gamma_map(g, L)
    assert Gf.is_simplicial()
    assert sm.gamma_map(g @ f, L) == Gg @ Gf
    assert sm.normalize_map(Gf) == ch.ChainMap(sm.normalize(Gf.source), sm.normalize(Gf.target), [f[n] for n in range(L + 1)])


# ------------------------------------------------------------- simplicial sets


def test_free_modules_on_simplices(field):
    pt = sm.FiniteSimplicialSet.point(3)
    assert sm.free_module(pt, field) == sm.SimplicialModule.constant(field, 3)
    d1 = sm.free_module(sm.FiniteSimplicialSet.standard_simplex(1, 2), field)
    assert d1.ranks == (2, 3, 4)
    d2 = sm.free_module(sm.FiniteSimplicialSet.standard_simplex(2, 3), field)
    assert d2.ranks == (3, 6, 10, 15)
    assert d2.is_valid()
    N = sm.normalize(d2)
    assert N.ranks == (3, 3, 1)
    assert ch.homology(N) == (1, 0, 0)


def test_interval_simplex_is_contractible(field):
    N = sm.normalize(sm.free_module(sm.FiniteSimplicialSet.standard_simplex(1, 3), field))
    assert ch.homology(N) == (1, 0)


def test_free_functor_is_monoidal_on_products(field):
    X = sm.FiniteSimplicialSet.standard_simplex(1, 2)
    Y = sm.FiniteSimplicialSet.point(2)
    lhs = sm.free_module(X.product(Y), field)
    rhs = sm.smod_tensor(sm.free_module(X, field), sm.free_module(Y, field))
    assert lhs == rhs
    X2 = sm.FiniteSimplicialSet.standard_simplex(1, 2)
    assert sm.free_module(X.product(X2), field) == sm.smod_tensor(sm.free_module(X, field), sm.free_module(X2, field))


def test_simplex_tables_satisfy_identities():
    assert sm.FiniteSimplicialSet.standard_simplex(2, 3).identity_failures() == []


# ------------------------------------------------------------- pi_0 and eta


def test_pi0_of_unit_over_f3():
    assert len(sm.pi0_underlying(sm.SimplicialModule.constant(F3, 2))) == 3


def test_pi0_of_interval_simplex_over_f3():
    M = sm.free_module(sm.FiniteSimplicialSet.standard_simplex(1, 2), F3)
    assert len(sm.pi0_underlying(M)) == 3


def test_pi0_is_a_point_when_faces_differ_surjectively():
    M = sm.gamma(ChainComplex.disk(F3, 1), 2)
    assert len(sm.pi0_underlying(M)) == 1


def test_pi0_refuses_rationals():
    with pytest.raises(StructuralError):
        sm.pi0_underlying(sm.SimplicialModule.constant(Q, 1))


@given(prime_fields, seeds)
def test_pi0_matches_graph_components(k, seed):
    M = random_smodule(rng_for(seed), k, 1, 1, 2)
    assert len(sm.pi0_underlying(M)) == brute_pi0(M)


@given(prime_fields, seeds)
def test_eta_is_a_bijection(k, seed):
    M = random_smodule(rng_for(seed), k, 2, 2, 2)
    eta = sm.eta_bijection(M)
    H0 = ch.homology(sm.normalize(M))[0]
    assert len(eta) == k.order ** H0 == len(sm.pi0_underlying(M))


# ------------------------------------------------------------- Eilenberg-Zilber


def _restrict(f: ch.ChainMap, L: int) -> list:
    return [f[n] for n in range(L + 1)]


def test_unit_shuffle_and_aw_are_identities(field):
    ck = sm.SimplicialModule.constant(field, 2)
    A = sm.gamma(chain_interval(field).I1, 2)
    sh = sm.shuffle(ck, A)
    aw = sm.alexander_whitney(ck, A)
    for n in range(3):
        assert sh[n].is_invertible() and aw[n] @ sh[n] == Matrix.identity(field, sh.source.rank(n))
    assert sm.smod_tensor(ck, A).ranks == A.ranks


@given(prime_fields, seeds)
def test_aw_after_shuffle_is_identity(k, seed):
    rng = rng_for(seed)
    L = 3
    p = rng.randint(0, L)
    A = random_smodule(rng, k, L, p, 2)
    B = random_smodule(rng, k, L, L - p, 2)
    sh, aw = sm.shuffle(A, B), sm.alexander_whitney(A, B)
    assert sh.is_chain_map() and aw.is_chain_map()
    comp = aw @ sh
    assert _restrict(comp, L) == _restrict(ch.identity(sh.source), L)


@given(prime_fields, seeds)
def test_shuffle_is_a_quasi_iso(k, seed):
    rng = rng_for(seed)
    L = 3
    A = random_smodule(rng, k, L, 1, 2)
    B = random_smodule(rng, k, L, 1, 2)
    sh = sm.shuffle(A, B)
    hs = ch.homology(sh.source)
    ht = ch.homology(sh.target)
    for n in range(L):
        assert ch.induced_on_homology(sh, n).is_invertible()
        assert (hs + (0,) * 8)[n] == (ht + (0,) * 8)[n]


def test_unsigned_shuffle_is_not_a_chain_map():
    I1 = chain_interval(F3).I1
    A = sm.gamma(I1, 2)
    assert sm.shuffle(A, A).is_chain_map()
    assert not sm.shuffle(A, A, sign_fault=True).is_chain_map()


@given(prime_fields, seeds)
def test_shuffle_and_aw_are_natural(k, seed):
    rng = rng_for(seed)
    L = 2
    C, C2 = random_complex(rng, k, 1, 2), random_complex(rng, k, 1, 2)
    D, D2 = random_complex(rng, k, 1, 2), random_complex(rng, k, 1, 2)
    f = sm.gamma_map(random_chain_map(rng, C, C2), L)
    g = sm.gamma_map(random_chain_map(rng, D, D2), L)
    A, A2, B, B2 = f.source, f.target, g.source, g.target
    Nfg = sm.normalize_map(sm.smod_tensor_maps(f, g))
    NfNg = ch.tensor_maps(sm.normalize_map(f), sm.normalize_map(g))
    assert _restrict(Nfg @ sm.shuffle(A, B), L) == _restrict(sm.shuffle(A2, B2) @ NfNg, L)
    assert _restrict(sm.alexander_whitney(A2, B2) @ Nfg, L) == _restrict(NfNg @ sm.alexander_whitney(A, B), L)


# ------------------------------------------------------------- model structure


def test_identity_is_weq_and_fibration(field):
    M = sm.gamma(chain_interval(field).I1, 2)
    idm = sm.smod_identity(M)
    assert sm.is_weak_equivalence_smod(idm) and sm.is_fibration_smod(idm)


def test_gamma_of_cylinder_projection_is_weq(field):
    iv = chain_interval(field)
    assert sm.is_weak_equivalence_smod(sm.gamma_map(iv.p, 2))


def test_zero_into_disk_is_not_a_fibration(field):
    D = sm.gamma(ChainComplex.disk(field, 1), 2)
    Z = sm.gamma(ChainComplex.zero(field), 2)
    assert not sm.is_fibration_smod(sm.smod_zero_map(Z, D))


def test_levelwise_injective_is_cofibration(field):
    iv = chain_interval(field)
    assert sm.is_cofibration_smod(sm.gamma_map(iv.d0, 2))
    assert not sm.is_cofibration_smod(sm.gamma_map(iv.p, 2))


# ------------------------------------------------------------- serialization


@given(fields, seeds)
def test_smodule_round_trip(k, seed):
    rng = rng_for(seed)
    M = random_smodule(rng, k, 2, 2, 2)
    assert ser.smodule_from_json(k, ser.smodule_to_json(M)) == M


def test_conjugation_keeps_identities():
    rng = rng_for(5)
    G = sm.gamma(chain_interval(F3).I1, 3)
    M = conjugate(G, [random_invertible(rng, F3, G.rank(n)) for n in range(4)])
    assert M.is_valid() and sm.normalize(M).ranks == (2, 1)
