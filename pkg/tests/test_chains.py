import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given

from dkcat import chains as ch
from dkcat import serialize as ser
from dkcat.chains import ChainComplex, ChainMap, StructuralError
from dkcat.intervals import chain_interval
from dkcat.linalg import Field, Matrix
from dkcat.suites import random_chain_map, random_complex

from conftest import PRIMES, fields, prime_fields, rng_for, seeds

Q = Field.rationals()
F2 = Field.prime(2)


def I1(k):
    return chain_interval(k).I1


def small_complex(seed, k, max_degree=2, max_rank=2):
    return random_complex(rng_for(seed), k, max_degree, max_rank)


# ------------------------------------------------------------- oracles


def _span_size(M: Matrix, p: int) -> int:
    """Number of distinct vectors ``M x`` over ``F_p`` by enumeration."""
    vals = {tuple(int(t) % p for t in M.a.astype(np.int64) @ np.array(x, dtype=np.int64)) for x in itertools.product(range(p), repeat=M.cols)}
    return len(vals)


def _kernel_size(M: Matrix, p: int) -> int:
    return sum(1 for x in itertools.product(range(p), repeat=M.cols) if not np.any((M.a.astype(np.int64) @ np.array(x, dtype=np.int64)) % p))


def brute_homology(C: ChainComplex) -> tuple:
    """Homology dimensions over ``F_p`` from counting cycles and boundaries."""
    p = C.field.order
    out = []
    for n in range(C.top + 1):
        if C.rank(n) == 0:
            out.append(0)
            continue
        Z = _kernel_size(C.d(n), p) if n > 0 else p ** C.rank(0)
        B = _span_size(C.d(n + 1), p) if C.rank(n + 1) else 1
        out.append(round(math.log(Z // B, p)))
    return tuple(out)


def float_homology(C: ChainComplex) -> tuple:
    """Homology dimensions over Q from floating-point ranks (exact for tiny integer entries)."""
    def rk(M):
        if not M.rows or not M.cols:
            return 0
        return int(np.linalg.matrix_rank(np.array(M.a, dtype=float)))

    return tuple(C.rank(n) - rk(C.d(n)) - rk(C.d(n + 1)) for n in range(C.top + 1))


def brute_chain_map_count(C: ChainComplex, D: ChainComplex) -> int:
    """Number of chain maps over ``F_p`` by enumerating every graded map."""
    p = C.field.order
    top = max(C.top, D.top)
    shapes = [(D.rank(n), C.rank(n)) for n in range(top + 1)]
    count = 0
    for entries in itertools.product(range(p), repeat=sum(r * c for r, c in shapes)):
        comps, pos = [], 0
        for r, c in shapes:
            comps.append(Matrix(C.field, np.array(entries[pos : pos + r * c], dtype=np.int64).reshape(r, c), shape=(r, c)))
            pos += r * c
        if ChainMap(C, D, comps).is_chain_map():
            count += 1
    return count


# ------------------------------------------------------------- validation


def test_unit_and_interval_are_valid(field):
    assert ChainComplex.unit(field).is_valid()
    assert I1(field).is_valid()
    assert I1(field).d(1) == Matrix(field, [[-1], [1]])


def test_sum_boundary_in_longer_chain_is_still_valid():
    # e -> a + b followed by a boundary that kills it: only d^2 is checked
    C = ChainComplex(Q, [2, 1, 1], [Matrix(Q, [[1], [1]]), Matrix(Q, [[0]])])
    assert C.is_valid()


def test_validation_reports_failing_degree():
    C = ChainComplex(Q, [1, 1, 1], [Matrix(Q, [[1]]), Matrix(Q, [[1]])])
    rep = C.validate()
    assert not rep.valid and rep.failing_degrees == [1]


def test_shape_mismatch_is_rejected():
    with pytest.raises(ValueError):
        ChainComplex(Q, [2, 1], [Matrix(Q, [[1, 1]])])


# ------------------------------------------------------------- tensor


def test_unit_tensor_is_identity_on_ranks(field):
    C = I1(field)
    assert ch.left_unitor(C).is_iso()
    assert ch.tensor(ChainComplex.unit(field), C).ranks == C.ranks


def test_interval_tensor_square(field):
    T = ch.tensor(I1(field), I1(field))
    assert T.ranks == (4, 4, 1)
    assert T.is_valid()


@given(fields, seeds, seeds)
def test_tensor_ranks_are_the_convolution(k, s1, s2):
    C, D = small_complex(s1, k), small_complex(s2, k)
    T = ch.tensor(C, D)
    conv = [sum(C.rank(i) * D.rank(n - i) for i in range(n + 1)) for n in range(C.top + D.top + 1)]
    while len(conv) > 1 and conv[-1] == 0:
        conv.pop()
    assert list(T.ranks) == conv
    assert T.is_valid()


@given(prime_fields, seeds, seeds)
def test_kunneth(k, s1, s2):
    C, D = small_complex(s1, k), small_complex(s2, k)
    hc, hd = ch.homology(C), ch.homology(D)
    ht = ch.homology(ch.tensor(C, D))
    for n in range(len(ht)):
        expect = sum(hc[i] * hd[n - i] for i in range(n + 1) if i < len(hc) and n - i < len(hd))
        assert ht[n] == expect


@given(fields, seeds)
def test_symmetry_is_an_involutive_chain_iso(k, seed):
    C, D = small_complex(seed, k), small_complex(seed + 1, k)
    s = ch.symmetry(C, D)
    assert s.is_chain_map() and s.is_iso()
    assert ch.symmetry(D, C) @ s == ch.identity(ch.tensor(C, D))


@given(prime_fields, seeds)
def test_associator_is_natural_chain_iso(k, seed):
    rng = rng_for(seed)
    A, B, C = (random_complex(rng, k, 1, 2) for _ in range(3))
    a = ch.associator(A, B, C)
    assert a.is_chain_map() and a.is_iso()
    f = random_chain_map(rng, A, A)
    lhs = a @ ch.tensor_maps(ch.tensor_maps(f, ch.identity(B)), ch.identity(C))
    rhs = ch.tensor_maps(f, ch.tensor_maps(ch.identity(B), ch.identity(C))) @ a
    assert lhs == rhs


# ------------------------------------------------------------- internal hom


def test_hom_from_unit_is_identity(field):
    C = I1(field)
    assert ch.internal_hom(ChainComplex.unit(field), C) == C


def test_hom_from_interval_into_unit(field):
    H = ch.internal_hom(I1(field), ChainComplex.unit(field))
    assert H.ranks == (1,)


def test_hom_interval_interval(field):
    H = ch.internal_hom(I1(field), I1(field))
    assert H.ranks == (3, 2)
    assert H.is_valid()


@pytest.mark.parametrize("k", PRIMES[:2], ids=str)
def test_hom_degree_zero_counts_chain_maps(k):
    for C, D in [(I1(k), I1(k)), (I1(k), ChainComplex.unit(k)), (ChainComplex.disk(k, 1), I1(k))]:
        H = ch.internal_hom(C, D)
        assert k.order ** H.rank(0) == brute_chain_map_count(C, D)


@given(fields, seeds)
def test_internal_hom_is_a_complex(k, seed):
    C, D = small_complex(seed, k), small_complex(seed + 7, k)
    assert ch.internal_hom(C, D).is_valid()


@given(prime_fields, seeds)
def test_adjunction_round_trip(k, seed):
    rng = rng_for(seed)
    A, B, X = (random_complex(rng, k, 1, 2) for _ in range(3))
    g = random_chain_map(rng, ch.tensor(A, B), X)
    h = ch.adjoint_transpose(g, A, B)
    assert h.is_chain_map()
    assert ch.adjoint_untranspose(h, B, X) == g
    h2 = random_chain_map(rng, A, ch.internal_hom(B, X))
    assert ch.adjoint_transpose(ch.adjoint_untranspose(h2, B, X), A, B) == h2


def test_adjunction_round_trip_over_q():
    for seed in range(10):
        rng = rng_for(seed)
        A, B, X = (random_complex(rng, Q, 1, 2) for _ in range(3))
        g = random_chain_map(rng, ch.tensor(A, B), X)
        assert ch.adjoint_untranspose(ch.adjoint_transpose(g, A, B), B, X) == g


def test_evaluation_transposes_to_identity(field):
    B, X = I1(field), I1(field)
    ev = ch.evaluation(B, X)
    H = ch.internal_hom(B, X)
    assert ch.adjoint_transpose(ev, H, B) == ch.identity(H)


def test_transpose_of_non_chain_degree_zero_is_rejected():
    k = F2
    A = ChainComplex.unit(k)
    B = I1(k)
    X = ChainComplex.unit(k)
    # g: B -> X with g(a)=1, g(b)=0 is not a chain map after transposition
    # since it does not kill the boundary e -> b - a
    g = ChainMap(ch.tensor(A, B), X, [Matrix(k, [[1, 0]])])
    with pytest.raises(StructuralError):
        ch.adjoint_transpose(g, A, B)


def test_constant_path_transpose(field):
    # the transpose of I1 -p-> I -v-> C is the constant path on v
    C = I1(field)
    iv = chain_interval(field)
    v = ch.element_map(C, [1, 0])
    g = v @ iv.p @ ch.left_unitor(iv.I1)
    h = ch.adjoint_transpose(g, ChainComplex.unit(field), iv.I1)
    assert h.source == ChainComplex.unit(field)
    assert ch.adjoint_untranspose(h, iv.I1, C) == g


@given(prime_fields, seeds)
def test_hom_map_is_functorial(k, seed):
    rng = rng_for(seed)
    C, D = random_complex(rng, k, 1, 2), random_complex(rng, k, 1, 2)
    u1, u2 = random_chain_map(rng, C, C), random_chain_map(rng, C, C)
    v1, v2 = random_chain_map(rng, D, D), random_chain_map(rng, D, D)
    assert ch.hom_map(u1, v1).is_chain_map()
    assert ch.hom_map(u1 @ u2, v2 @ v1) == ch.hom_map(u2, v2) @ ch.hom_map(u1, v1)
    assert ch.hom_map(ch.identity(C), ch.identity(D)) == ch.identity(ch.internal_hom(C, D))


# ------------------------------------------------------------- homology


def test_homology_of_standard_complexes(field):
    assert ch.homology(ChainComplex.unit(field)) == (1,)
    assert ch.homology(I1(field)) == (1, 0)
    for n in range(1, 4):
        assert set(ch.homology(ChainComplex.disk(field, n))) == {0}
        assert ch.homology(ChainComplex.sphere(field, n))[n] == 1


@given(prime_fields, seeds)
def test_homology_matches_counting_oracle(k, seed):
    C = small_complex(seed, k, 3, 2)
    assert ch.homology(C) == brute_homology(C)


@given(seeds)
def test_homology_over_q_matches_float_rank(seed):
    C = small_complex(seed, Q, 3, 3)
    assert ch.homology(C) == float_homology(C)


# ------------------------------------------------------------- model structure


def test_quasi_iso_examples(field):
    iv = chain_interval(field)
    I = ChainComplex.unit(field)
    assert ch.is_quasi_iso(ch.identity(I1(field)))
    assert ch.is_quasi_iso(iv.p)
    assert not ch.is_quasi_iso(ch.zero_map(ChainComplex.zero(field), I))


def test_fibration_examples(field):
    C = I1(field)
    assert ch.is_fibration(ch.zero_map(C, ChainComplex.zero(field)))
    assert ch.is_fibration(ch.identity(C))
    assert not ch.is_fibration(ch.zero_map(ChainComplex.zero(field), ChainComplex.disk(field, 1)))


def test_cofibration_examples(field):
    iv = chain_interval(field)
    ends = ch.copairing([iv.d0, iv.d1])
    assert ch.is_cofibration(ends)
    assert not ch.is_cofibration(ch.zero_map(iv.I1, iv.I))
    assert ch.is_cofibration(ch.generating_cofibration(field, 1))


def test_cylinder_conditions(field):
    iv = chain_interval(field)
    ends = ch.copairing([iv.d0, iv.d1])
    fold = ch.copairing([ch.identity(iv.I), ch.identity(iv.I)])
    assert ch.is_quasi_iso(iv.p) and ch.is_cofibration(ends)
    assert iv.p @ ends == fold


def test_generating_cofibrations(field):
    g0 = ch.generating_cofibration(field, 0)
    assert g0.source.is_zero and g0.target == ChainComplex.unit(field)
    g1 = ch.generating_cofibration(field, 1)
    assert g1.source.ranks == (1,) and g1.target.ranks == (1, 1)
    assert g1.is_chain_map() and g1.is_injective()
    for n in range(4):
        assert ch.is_cofibration(ch.generating_cofibration(field, n))
    with pytest.raises(ValueError):
        ch.generating_cofibration(field, -1)


# ------------------------------------------------------------- (co)limits


def test_pullback_along_identities(field):
    C = I1(field)
    P = ch.pullback(ch.identity(C), ch.identity(C))
    assert P.obj.ranks == C.ranks
    assert P.projections[0].is_iso()


def test_pullback_against_zero(field):
    I = ChainComplex.unit(field)
    P = ch.pullback(ch.identity(I), ch.zero_map(ChainComplex.zero(field), I))
    assert P.obj.is_zero


@given(prime_fields, seeds)
def test_pullback_universal_property(k, seed):
    rng = rng_for(seed)
    A, B, C = (random_complex(rng, k, 2, 2) for _ in range(3))
    f, g = random_chain_map(rng, A, C), random_chain_map(rng, B, C)
    P = ch.pullback(f, g)
    assert P.obj.is_valid()
    p1, p2 = P.projections
    assert f @ p1 == g @ p2
    W = random_complex(rng, k, 2, 2)
    h = random_chain_map(rng, W, P.obj)
    assert P.lift([p1 @ h, p2 @ h]) == h


def test_pullback_rejects_non_cone():
    k = F2
    I = ChainComplex.unit(k)
    P = ch.pullback(ch.identity(I), ch.zero_map(ChainComplex.zero(k), I))
    with pytest.raises(StructuralError):
        P.lift([ch.identity(I), ch.zero_map(I, ChainComplex.zero(k))])
    with pytest.raises(ValueError):
        ch.pullback(ch.identity(I), ch.identity(I1(k)))


def test_interval_pushout_is_the_two_step_interval(field):
    iv = chain_interval(field)
    po = ch.pushout(iv.d1, iv.d0)
    assert po.obj.ranks == (3, 2)
    assert po.obj.is_valid()
    kappa = po.desc([iv.i0, iv.i1])
    assert kappa.is_chain_map() and kappa.is_iso()


def test_pushout_along_identities(field):
    C = I1(field)
    po = ch.pushout(ch.identity(C), ch.identity(C))
    assert po.obj.ranks == C.ranks


def test_pushout_with_zero_leg(field):
    I = ChainComplex.unit(field)
    C = I1(field)
    po = ch.pushout(ch.zero_map(I, C), ch.zero_map(I, I))
    assert po.obj.ranks == ch.direct_sum(C, I).ranks
    # along an identity leg the glued copy of I is killed
    po = ch.pushout(ch.identity(I), ch.zero_map(I, C))
    assert po.obj.ranks == C.ranks
    assert po.injections[1].is_iso()


@given(prime_fields, seeds)
def test_pushout_universal_property(k, seed):
    rng = rng_for(seed)
    A, B, C = (random_complex(rng, k, 2, 2) for _ in range(3))
    f, g = random_chain_map(rng, C, A), random_chain_map(rng, C, B)
    po = ch.pushout(f, g)
    assert po.obj.is_valid()
    j1, j2 = po.injections
    assert j1 @ f == j2 @ g
    T = random_complex(rng, k, 2, 2)
    h = random_chain_map(rng, po.obj, T)
    assert po.desc([h @ j1, h @ j2]) == h


# ------------------------------------------------------------- serialization


@given(fields, seeds)
def test_complex_and_map_round_trip(k, seed):
    rng = rng_for(seed)
    C, D = random_complex(rng, k, 2, 2), random_complex(rng, k, 2, 2)
    f = random_chain_map(rng, C, D)
    w = ser.Writer(k)
    name = w.map(f)
    r = ser.Reader(json.loads(ser.dumps(w.doc)), k)
    assert r.map(name) == f
    assert ser.complex_from_json(k, ser.complex_to_json(C)) == C
