import pytest

from novikov.chain import (BasedComplex, ChainHomotopy, ChainIsotopy, ChainMap, cokernel, cokernel_block,
                           cone_coker_equivalence, cone_projection, iso_from_homotopy, iso_from_isotopy,
                           isotopy_compose, isotopy_inverse, mapping_cone)
from novikov.errors import EmbeddingError, IsotopyError, ShapeError
from novikov.homology import betti, smith_normal_form
from novikov.linalg import is_invertible
from novikov.matrix import Matrix
from novikov.rings import QQ, QZ, ZZ

from randcx import random_embedding, random_matrix, random_null_operator, seeded


def point(ring=ZZ):
    return BasedComplex(ring, [1])


def interval(ring=ZZ, d=1):
    return BasedComplex(ring, [1, 1], {1: [[d]]})


def scalar_map(D, E, x):
    return ChainMap(D, E, {i: Matrix.scalar(D.ring, D.rank(i), x) for i in D.degrees()})


def check_map(f):
    assert f.is_valid(), f.defects()


# constructors reject bad data

def test_d_squared_rejected():
    with pytest.raises(ShapeError):
        BasedComplex(ZZ, [1, 1, 1], {1: [[1]], 2: [[1]]})


def test_non_chain_map_rejected():
    with pytest.raises(ShapeError):
        ChainMap(interval(), interval(), {0: Matrix(ZZ, [[1]]), 1: Matrix(ZZ, [[2]])})


# mapping cones

def test_cone_of_identity():
    C = mapping_cone(scalar_map(point(), point(), 1))
    assert C.ranks == (1, 1)
    # sign (-1)^(i-1) on phi, so +phi from degree 1 to 0
    assert C.d(1) == Matrix(ZZ, [[1]])
    assert betti(C.change_ring(QQ)) == (0, 0)


def test_cone_of_zero():
    C = mapping_cone(scalar_map(point(), point(), 0))
    assert C.ranks == (1, 1) and C.d(1).is_zero()


def test_cone_of_two():
    C = mapping_cone(scalar_map(point(), point(), 2))
    assert C.d(1) == Matrix(ZZ, [[2]])
    assert mapping_cone(scalar_map(interval(), interval(), 2)).d(2) == Matrix(ZZ, [[-2], [1]])
    assert smith_normal_form(C.d(1)).divisors == (2,)


def test_cone_projection_coordinate():
    E = BasedComplex(ZZ, [2])
    phi = ChainMap(point(), E, {0: Matrix(ZZ, [[1], [0]])})
    p = cone_projection(phi)
    assert p(0) == Matrix(ZZ, [[0, 1]])
    check_map(p)


def test_cone_projection_needs_split_injection():
    with pytest.raises(EmbeddingError, match="degree 0"):
        cone_projection(scalar_map(point(), point(), 2))


def test_block_embedding_over_fraction_field():
    # phi = (1 - 3z; 5z) : D -> D + F, with d_E = [[0, c], [0, 0]]
    D = BasedComplex(QZ, [1])
    E = BasedComplex(QZ, [2])
    phi = ChainMap(D, E, {0: Matrix(QZ, [[QZ.parse("1 - 3*z")], [QZ.parse("5*z")]])})
    p = cone_projection(phi)
    check_map(p)
    assert cokernel(phi).complex.ranks == (1,)
    assert cokernel_block(phi).complex.ranks == (1,)


def test_cokernel_block_trivial_cases():
    F = interval(QQ, 2)
    D = BasedComplex(QQ, [1, 0])
    E = BasedComplex(QQ, [2, 1], {1: [[0], [2]]})
    phi = ChainMap(D, E, {0: Matrix(QQ, [[1], [0]]), 1: Matrix.zeros(QQ, 1, 0)})
    assert cokernel_block(phi).complex == F
    empty = BasedComplex(QQ, [0, 0])
    phi0 = ChainMap(empty, F, {0: Matrix.zeros(QQ, 1, 0), 1: Matrix.zeros(QQ, 1, 0)})
    assert cokernel_block(phi0).complex == F


def test_cokernel_block_names_degree():
    D = BasedComplex(ZZ, [1])
    phi = ChainMap(D, D, {0: Matrix(ZZ, [[2]])})
    with pytest.raises(EmbeddingError, match="degree 0"):
        cokernel_block(phi)


# homotopies and isotopies

def test_iso_from_zero_homotopy_is_identity():
    E = interval()
    phi = ChainMap.identity(E)
    I = iso_from_homotopy(ChainHomotopy(phi, phi, {0: Matrix(ZZ, [[0]])}))
    assert all(I(i).is_identity() for i in I.source.degrees())


def test_iso_from_homotopy_example():
    E = interval()
    phi = ChainMap.identity(E)
    phi2 = scalar_map(E, E, 2)
    theta = ChainHomotopy(phi, phi2, {0: Matrix(ZZ, [[1]])})
    I = iso_from_homotopy(theta)
    check_map(I)
    assert not I(1).is_identity()
    for i in I.source.degrees():
        assert I(i) @ I.inverse(i) == Matrix.identity(ZZ, I.source.rank(i))


def test_isotopy_zero():
    E = interval()
    phi = ChainMap.identity(E)
    zero = ChainIsotopy(E, {0: Matrix(ZZ, [[0]])}, phi, phi)
    inv = isotopy_inverse(zero)
    assert inv(0).is_zero()
    phi2 = scalar_map(E, E, -1)
    psi = ChainIsotopy(E, {0: Matrix(ZZ, [[-2]])}, phi, phi2)
    assert isotopy_compose(zero, psi)(0) == psi(0)


def test_isotopy_compose_scalars():
    a, b = 1, -3
    # 1 + a = 2 is not a unit over Z, so work over Q
    E = interval(QQ)
    phi = ChainMap.identity(E)
    phi1 = scalar_map(E, E, 1 + a)
    phi2 = scalar_map(E, E, (1 + a) * (1 + b))
    psi = ChainIsotopy(E, {0: Matrix(QQ, [[a]])}, phi, phi1)
    psi2 = ChainIsotopy(E, {0: Matrix(QQ, [[b]])}, phi1, phi2)
    both = isotopy_compose(psi, psi2)
    assert both(0) == Matrix(QQ, [[a + b * (1 + a)]])
    for i in (0, 1):
        assert both.operator(i) == Matrix(QQ, [[(1 + b) * (1 + a)]])


def test_isotopy_inverse_example():
    E = interval(QQ)
    phi = ChainMap.identity(E)
    psi = ChainIsotopy(E, {0: Matrix(QQ, [[-2]])}, phi, scalar_map(E, E, -1))
    assert psi.operator(0) == Matrix(QQ, [[-1]])
    assert isotopy_inverse(psi)(0) == Matrix(QQ, [[-2]])


def test_isotopy_must_be_invertible():
    E = interval()
    phi = ChainMap.identity(E)
    with pytest.raises(IsotopyError):
        ChainIsotopy(E, {0: Matrix(ZZ, [[1]])}, phi, scalar_map(E, E, 2))


def test_iso_from_zero_isotopy():
    E = BasedComplex(QQ, [2, 1], {1: [[1], [0]]})
    D = BasedComplex(QQ, [1])
    phi = ChainMap(D, E, {0: Matrix(QQ, [[0], [1]]), 1: Matrix.zeros(QQ, 1, 0)})
    out = iso_from_isotopy(ChainIsotopy(E, {}, phi, phi))
    for i in out.q.source.degrees():
        assert out.q(i).is_identity()
    for i in out.r.source.degrees():
        assert out.r(i).is_identity()
    assert all(out.s(i).is_zero() for i in range(-1, 3))


def test_cone_coker_equivalence_coordinate():
    E = BasedComplex(ZZ, [2])
    phi = ChainMap(point(), E, {0: Matrix(ZZ, [[1], [0]])})
    eq = cone_coker_equivalence(phi, [(Matrix(ZZ, [[1, 0]]), Matrix(ZZ, [[0, 1]]), Matrix(ZZ, [[0], [1]]))])
    _check_equivalence(eq)


def test_cone_coker_equivalence_bad_splitting():
    E = BasedComplex(ZZ, [2])
    phi = ChainMap(point(), E, {0: Matrix(ZZ, [[1], [0]])})
    with pytest.raises(EmbeddingError):
        cone_coker_equivalence(phi, [(Matrix(ZZ, [[2, 0]]), Matrix(ZZ, [[0, 1]]), Matrix(ZZ, [[0], [1]]))])


def test_cone_coker_equivalence_empty_source():
    E = interval(QQ, 3)
    D = BasedComplex(QQ, [0, 0])
    phi = ChainMap(D, E, {0: Matrix.zeros(QQ, 1, 0), 1: Matrix.zeros(QQ, 1, 0)})
    eq = cone_coker_equivalence(phi)
    _check_equivalence(eq)
    assert all(eq.h[i].is_zero() for i in eq.h)


def _check_equivalence(eq):
    C = eq.p.source
    K = eq.p.target
    R = C.ring
    check_map(eq.p)
    check_map(eq.g)
    for i in K.degrees():
        assert eq.p(i) @ eq.g(i) == Matrix.identity(R, K.rank(i))
    for i in C.degrees():
        lhs = eq.g(i) @ eq.p(i) - Matrix.identity(R, C.rank(i))
        hi = eq.h[i]
        hlow = eq.h[i - 1]
        assert lhs == C.d(i + 1) @ hi + hlow @ C.d(i)


# randomized properties

SEEDS = range(100)


@pytest.mark.parametrize("seed", SEEDS)
def test_random_cone_and_cokernel(seed):
    phi = random_embedding(seeded(seed))
    assert mapping_cone(phi).is_valid()
    eq = cone_coker_equivalence(phi)
    _check_equivalence(eq)
    assert betti(mapping_cone(phi)) == betti(eq.coker.complex)
    assert betti(mapping_cone(phi)).euler() == sum((-1) ** i * r for i, r in enumerate(mapping_cone(phi).ranks))


@pytest.mark.parametrize("seed", SEEDS)
def test_random_iso_from_homotopy(seed):
    rnd = seeded(seed)
    phi = random_embedding(rnd)
    D, E = phi.source, phi.target
    theta = {i: random_matrix(rnd, QQ, E.rank(i + 1), D.rank(i), 0.5) for i in D.degrees()}
    zero = lambda i: Matrix.zeros(QQ, E.rank(i), D.rank(i - 1))
    phi2 = ChainMap(D, E, {i: phi(i) + E.d(i + 1) @ theta[i] + (theta[i - 1] if i else zero(i)) @ D.d(i)
                           for i in D.degrees()})
    I = iso_from_homotopy(ChainHomotopy(phi, phi2, theta))
    check_map(I)
    check_map(I.inverse)
    for i in I.source.degrees():
        assert I(i) @ I.inverse(i) == Matrix.identity(QQ, I.source.rank(i))


def _random_isotopy(rnd, ring):
    phi = random_embedding(rnd, ring, top=2, max_rank=2)
    E = phi.target
    psi, ops = random_null_operator(rnd, E)
    phi2 = ChainMap(phi.source, E, {i: ops[i] @ phi(i) for i in phi.source.degrees()})
    return ChainIsotopy(E, psi, phi, phi2)


@pytest.mark.parametrize("seed", SEEDS)
def test_random_iso_from_isotopy(seed):
    psi = _random_isotopy(seeded(seed), QZ if seed % 2 else QQ)
    out = iso_from_isotopy(psi)
    check_map(out.q)
    check_map(out.r)
    assert all(is_invertible(out.r(i)) for i in out.r.source.degrees())
    assert not out.s.defects()


@pytest.mark.parametrize("seed", range(40))
def test_isotopy_group_laws(seed):
    psi = _random_isotopy(seeded(seed), QQ)
    back = isotopy_compose(psi, isotopy_inverse(psi))
    for i in psi.carrier.degrees():
        assert back.operator(i).is_identity()
