import pytest

from novikov import parse_scenario
from novikov.chain import BasedComplex
from novikov.errors import DomainError, HomotopyError, UnsupportedOperationError, ValidationError
from novikov.fundamental import FundamentalDomain, exchange
from novikov.generate import GeneratorParams, gen_pieces, gen_random
from novikov.matrix import Matrix
from novikov.novikov import (WittVector, apply_homotopy, cokernel_theorem_data, deformed_differential,
                             exchange_check, invariance_iso, is_simple_unit, sigma_invertible, torsion_witt,
                             tower_check)
from novikov.oracles import geometric_fraction_series, rewrite_coefficient, torsion_trace_series
from novikov.rings import QZ, ZZ, GroundRing, SeriesRing, TwistedRing, ratfun_to_series

S3 = SeriesRing(ZZ, 3)


def fixture(name):
    return parse_scenario(name)


def one_by_one(M):
    assert M.shape == (1, 1)
    return M[0, 0]


# deformed differential

def test_undeformed():
    fd = fixture("e1").fd.with_h(None, None)
    res = deformed_differential(fd, 5)
    assert one_by_one(res.exact.d(1)) == QZ.coerce(2)
    assert res.torsion == WittVector.one(ZZ, 5)


def test_e1_deformed():
    res = deformed_differential(fixture("e1").fd, 3)
    assert one_by_one(res.exact.d(1)) == QZ.parse("(2 - z)/(1 - 3*z)")
    assert one_by_one(res.series.d(1)) == S3.parse("2 + 5*z + 15*z^2 + 45*z^3")
    assert res.exact_as_series() == res.series
    assert res.series.ranks == (1, 1)


def test_circle_is_zero():
    res = deformed_differential(fixture("circle").fd, 4)
    assert all(r == 0 for r in res.series.ranks)


def test_series_coefficients_are_words():
    fd = fixture("e1").fd
    res = deformed_differential(fd, 6)
    for j in range(1, 7):
        assert res.coefficient(1, j) == Matrix(ZZ, [[5 * 3 ** (j - 1)]])


def test_invalid_input_rejected():
    fd = fixture("e1").fd
    F = BasedComplex(ZZ, [1, 1, 1], {1: [[2]], 2: [[1]]}, check=False)
    with pytest.raises(ValidationError):
        deformed_differential(FundamentalDomain(ZZ, fd.D, F, {1: [[1]]}, {0: [[3]]}, {0: [[5]]}), 3)


def test_labels_inherited():
    fd = gen_random(GeneratorParams(seed=3)).fd
    res = deformed_differential(fd, 2)
    assert [res.series.label(i) for i in res.series.degrees()] == [fd.F.label(i) for i in fd.F.degrees()]


# cokernel data

def test_circle_cokernel_data():
    data = cokernel_theorem_data(fixture("circle").fd, 4, exact=True)
    assert data.cone.ranks == (1, 1)
    assert one_by_one(data.cone.d(1)) == QZ.parse("1 - z")
    assert all(r == 0 for r in data.coker.ranks)
    assert data.torsion_of_p == QZ.parse("1/(1 - z)")


def test_e1_cokernel_matches():
    fd = fixture("e1").fd
    assert cokernel_theorem_data(fd, 4, exact=True).coker == deformed_differential(fd, 4).exact
    assert cokernel_theorem_data(fd, 4, exact=False).coker == deformed_differential(fd, 4).series


def test_undeformed_projection_has_trivial_torsion():
    fd = fixture("e1").fd.with_h(None, None)
    assert cokernel_theorem_data(fd, 4, exact=True).torsion_of_p == QZ.one


# torsion

def test_torsion_examples():
    K = 4
    assert torsion_witt(fixture("circle").fd, K).coefficients() == [1] * 5
    assert torsion_witt(fixture("circle").fd.with_h(None, None), K) == WittVector.one(ZZ, K)
    D = BasedComplex(ZZ, [1, 1], {1: [[0]]})
    fd = FundamentalDomain(ZZ, D, BasedComplex(ZZ, [0, 0]), None, {0: [[2]], 1: [[3]]}, None)
    assert torsion_witt(fd, 2).coefficients() == [1, -1, -2]


def test_torsion_rejects_twisted():
    with pytest.raises(UnsupportedOperationError):
        torsion_witt(fixture("klein").fd, 3)


def test_witt_vectors_need_unit_constant():
    with pytest.raises(DomainError):
        WittVector(S3.parse("2 + z"))
    w = WittVector(S3.parse("1 + z"))
    assert (w * w.inverse()) == WittVector.one(ZZ, 3)


@pytest.mark.parametrize("seed", range(60))
def test_torsion_of_p_expands_to_witt_vector(seed):
    fd = gen_random(GeneratorParams(seed=seed, max_degree=3, max_rank=3)).fd
    data = cokernel_theorem_data(fd, 6, exact=True)
    assert ratfun_to_series(data.torsion_of_p, 6).coefficients() == torsion_witt(fd, 6).coefficients()


# sigma invertibility

def test_sigma_invertible_examples():
    T = TwistedRing(ZZ)
    assert sigma_invertible(Matrix(T, [["1 - 3*z"]]))
    assert not sigma_invertible(Matrix(T, [["2 + z"]]))
    Tu = TwistedRing(GroundRing.laurent(1))
    assert sigma_invertible(Matrix(Tu, [["1 - z*u1"]]))
    assert sigma_invertible(Matrix(Tu, [["u1 + z"]]))
    assert not sigma_invertible(Matrix(Tu, [["1 + u1 + z"]]))


def test_sigma_invertible_rejects_negative_powers():
    T = TwistedRing(ZZ)
    with pytest.raises(DomainError):
        sigma_invertible(Matrix(T, [["1 + z^-1"]]))


def test_simple_units():
    assert is_simple_unit(QZ.parse("-z^3"))
    assert not is_simple_unit(QZ.parse("2*z"))


# invariance

def test_invariance_zero_homotopy():
    fd = fixture("e1").fd
    res = invariance_iso(fd, fd, {}, 4, exact=True)
    assert all(m.is_identity() for m in res.r.values())
    assert res.det_product == QZ.one


def test_invariance_e1():
    sc = fixture("e1")
    fd2 = apply_homotopy(sc.fd, sc.homotopy)
    assert fd2.hD(0) == Matrix(ZZ, [[4]]) and fd2.hF(0) == Matrix(ZZ, [[7]])
    res = invariance_iso(sc.fd, fd2, sc.homotopy, 6, exact=True)
    assert one_by_one(res.fhat_prime.d(1)) == QZ.parse("(2 - z)/(1 - 4*z)")
    assert one_by_one(res.r[0]) == QZ.one
    assert one_by_one(res.r[1]) == QZ.parse("(1 - 4*z)/(1 - 3*z)")
    assert res.intertwines and res.sigma_ok and res.det_product == QZ.one
    series = invariance_iso(sc.fd, fd2, sc.homotopy, 6, exact=False)
    assert series.intertwines and series.sigma_ok


def test_invariance_rejects_non_homotopy():
    sc = fixture("e1")
    fd2 = sc.fd.with_h({0: [[4]]}, {0: [[5]]})
    with pytest.raises(HomotopyError):
        invariance_iso(sc.fd, fd2, sc.homotopy, 4)


@pytest.mark.parametrize("seed", range(100))
def test_random_invariance(seed):
    sc = gen_random(GeneratorParams(seed=seed, max_degree=3, max_rank=3, homotopy=True))
    res = invariance_iso(sc.fd, apply_homotopy(sc.fd, sc.homotopy), sc.homotopy, 6)
    assert res.ok and res.det_product == QZ.one


@pytest.mark.parametrize("seed", range(30))
def test_random_invariance_twisted(seed):
    sc = gen_random(GeneratorParams(seed=seed, max_degree=2, max_rank=3, ring="Zu-twist", homotopy=True))
    res = invariance_iso(sc.fd, apply_homotopy(sc.fd, sc.homotopy), sc.homotopy, 5)
    assert res.intertwines and res.sigma_ok


# truncation tower

def test_tower_examples():
    fd = fixture("e1").fd
    assert tower_check(fd, 2).ok
    quiet = fd.with_h({0: [[3]]}, None)
    assert tower_check(quiet, 4).ok
    assert one_by_one(deformed_differential(quiet, 4).exact.d(1)) == QZ.coerce(2)


@pytest.mark.parametrize("seed", range(100))
def test_random_tower(seed):
    ring = ("Z", "Zu", "Zu-twist")[seed % 3]
    assert tower_check(gen_random(GeneratorParams(seed=seed, max_degree=3, max_rank=3, ring=ring)).fd, 5).ok


# consistency

@pytest.mark.parametrize("seed", range(100))
def test_random_exact_and_series_agree(seed):
    fd = gen_random(GeneratorParams(seed=seed)).fd
    res = deformed_differential(fd, 6)
    assert res.exact.is_valid() and res.series.is_valid()
    assert res.exact_as_series() == res.series


@pytest.mark.parametrize("seed", range(40))
def test_random_exchange(seed):
    ring = ("Z", "Zu-twist")[seed % 2]
    ex = exchange(*gen_pieces(GeneratorParams(seed=seed, max_degree=3, max_rank=3, ring=ring), "exchange").pieces)
    assert exchange_check(ex, 6) == []


def test_exchange_fixture_intertwines():
    ex = exchange(*fixture("exchange-e1").pieces)
    assert exchange_check(ex, 8) == []
    assert one_by_one(deformed_differential(ex.fd, 3).exact.d(1)) == QZ.parse("5*z/(1 - 3*z)")
    assert one_by_one(deformed_differential(ex.fd_prime, 3).exact.d(1)) == QZ.parse("5/(1 - 3*z)")


# the independent oracles themselves

def test_oracles_on_e1():
    fd = fixture("e1").fd
    assert [rewrite_coefficient(fd, 1, j)[0][0] for j in range(4)] == [2, 5, 15, 45]
    assert geometric_fraction_series([2, -1], [1, -3], 3) == [2, 5, 15, 45]
    assert torsion_trace_series(fd, 4) == [1, 3, 9, 27, 81]


def test_rewrite_oracle_twisted():
    fd = fixture("klein").fd
    res = deformed_differential(fd, 4)
    for i in range(1, fd.top + 1):
        for j in range(5):
            want = Matrix(fd.ring, rewrite_coefficient(fd, i, j), fd.F.rank(i - 1), fd.F.rank(i))
            assert res.coefficient(i, j) == want
