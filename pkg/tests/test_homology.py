import pytest
from hypothesis import given, settings, strategies as st

from novikov import parse_scenario
from novikov.chain import BasedComplex, ChainMap
from novikov.errors import DomainError, UnsupportedOperationError
from novikov.fundamental import FundamentalDomain
from novikov.homology import betti, compare_cone_coker, novikov_betti, smith_normal_form
from novikov.linalg import determinant
from novikov.matrix import Matrix
from novikov.novikov import cokernel_theorem_data
from novikov.rings import QQ, QZ, ZZ

from randcx import random_embedding, seeded


def test_snf_examples():
    assert smith_normal_form(Matrix(ZZ, [[2]])).divisors == (2,)
    assert smith_normal_form(Matrix(ZZ, [[2, 0], [0, 3]])).divisors == (1, 6)
    assert smith_normal_form(Matrix.identity(ZZ, 4)).divisors == (1, 1, 1, 1)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_snf_properties(r, c, data):
    M = Matrix(ZZ, [[data.draw(st.integers(-9, 9)) for _ in range(c)] for _ in range(r)])
    snf = smith_normal_form(M, transforms=True)
    ds = snf.divisors
    assert all(b % a == 0 for a, b in zip(ds, ds[1:]))
    assert all(x > 0 for x in ds)
    assert snf.U @ M @ snf.V == snf.diagonal()
    assert abs(determinant(snf.U)) == 1 and abs(determinant(snf.V)) == 1
    if r == c and determinant(M) != 0:
        prod = 1
        for x in ds:
            prod *= x
        assert prod == abs(determinant(M))


def test_betti_examples():
    assert betti(BasedComplex(QQ, [2, 3])) == (2, 3)
    C = BasedComplex(QZ, [1, 1], {1: [[QZ.parse("1 - z")]]})
    assert betti(C) == (0, 0)


def test_betti_needs_a_field():
    with pytest.raises(DomainError):
        betti(BasedComplex(ZZ, [1]))


def test_cone_of_e1_is_acyclic():
    data = cokernel_theorem_data(parse_scenario("e1").fd, 4, exact=True)
    assert betti(data.cone) == (0, 0)
    assert compare_cone_coker(data.phi)


def test_coordinate_embedding():
    phi = ChainMap(BasedComplex(QQ, [1]), BasedComplex(QQ, [2]), {0: Matrix(QQ, [[1], [0]])})
    assert compare_cone_coker(phi)


def test_novikov_betti_examples():
    assert novikov_betti(parse_scenario("circle").fd) == ()
    assert novikov_betti(parse_scenario("e1").fd) == (0, 0)
    lone = FundamentalDomain(ZZ, BasedComplex(ZZ, [0]), BasedComplex(ZZ, [1]))
    assert novikov_betti(lone) == (1,)


def test_novikov_betti_rejects_laurent():
    with pytest.raises(UnsupportedOperationError):
        novikov_betti(parse_scenario("torus-projection").fd)


@pytest.mark.parametrize("seed", range(100))
def test_random_embeddings(seed):
    phi = random_embedding(seeded(1000 + seed), QZ if seed % 3 == 0 else QQ, top=2, max_rank=3)
    assert compare_cone_coker(phi)


@pytest.mark.parametrize("seed", range(50))
def test_euler_characteristic(seed):
    phi = random_embedding(seeded(2000 + seed))
    C = phi.target
    assert betti(C).euler() == sum((-1) ** i * r for i, r in enumerate(C.ranks))
