import pytest

from novikov import parse_scenario
from novikov.chain import BasedComplex, ChainMap
from novikov.errors import GlueMismatchError
from novikov.fundamental import (CobordismPiece, FundamentalDomain, exchange, glue, glue_assoc_check,
                                 truncated_union, validate, verify_glue_homotopy)
from novikov.generate import GeneratorParams, gen_pieces, gen_random
from novikov.matrix import Matrix
from novikov.rings import ZZ

POINT = BasedComplex(ZZ, [1])


def e1():
    return parse_scenario("e1").fd


def product(x):
    """Handle-free piece over a point with h_D = (x)."""
    return CobordismPiece(ZZ, POINT, POINT, BasedComplex(ZZ, [0]), None, {0: [[x]]}, {0: Matrix.zeros(ZZ, 0, 1)})


def m(*rows):
    return Matrix(ZZ, [list(r) for r in rows])


# validation

def test_disjoint_data_is_valid():
    D = BasedComplex(ZZ, [1, 1], {1: [[2]]})
    F = BasedComplex(ZZ, [2, 1], {1: [[1], [-1]]})
    assert validate(FundamentalDomain(ZZ, D, F)).ok


def test_e1_is_valid():
    assert validate(e1()).ok


def test_corruption_is_reported_with_degree_and_entry():
    fd = e1()
    F = BasedComplex(ZZ, [1, 1, 1], {1: [[2]], 2: [[1]]}, check=False)
    bad = FundamentalDomain(ZZ, fd.D, F, {1: [[1]]}, {0: [[3]]}, {0: [[5]]})
    rep = validate(bad)
    assert not rep.ok
    text = str(rep)
    assert "d_F^2 = 0" in text and "degree 2" in text and "(0, 0)" in text
    assert "d_D c + c d_F = 0" in text


def test_wrong_survival_map_is_reported():
    D = BasedComplex(ZZ, [1, 1], {1: [[1]]})
    fd = FundamentalDomain(ZZ, D, BasedComplex(ZZ, [0, 0]), None, {0: [[1]], 1: [[2]]}, None)
    rep = validate(fd)
    assert [v.degree for v in rep.violations] == [1]


# glue

def test_glue_scalars():
    g = glue(product(2), product(3))
    assert g.hD(0) == m([6]) and g.F.ranks == (0,)


def test_glue_unit_law():
    fd = e1().to_piece()
    g = glue(fd, product(1))
    assert g.F == fd.F and g.hD(0) == fd.hD(0) and g.hF(0) == fd.hF(0) and g.cmat(1) == fd.cmat(1)


def test_glue_two_copies():
    a = e1().to_piece()
    g = glue(a, a)
    assert g.F.d(1) == m([2, 5], [0, 2])
    assert g.cmat(1) == m([1, 3])
    assert g.hD(0) == m([9])
    assert g.hF(0) == m([15], [5])
    assert validate(g).ok


def test_double_glue_fixture():
    a, b = parse_scenario("double-glue").pieces
    assert glue(a, b) == glue(e1().to_piece(), e1().to_piece())


def test_glue_boundary_mismatch():
    wide = CobordismPiece(ZZ, BasedComplex(ZZ, [2]), BasedComplex(ZZ, [2]), BasedComplex(ZZ, [0]))
    with pytest.raises(GlueMismatchError):
        glue(product(2), wide)


def test_associativity_examples():
    a, b, c = product(2), product(3), product(5)
    assert glue_assoc_check(a, b, c)
    assert glue(glue(a, b), c).hD(0) == m([30])
    x = e1().to_piece()
    assert glue_assoc_check(x, x, x)
    g = glue(x, glue(x, x))
    assert g.F.d(1) == m([2, 5, 15], [0, 2, 5], [0, 0, 2])
    assert g.hD(0) == m([27])


def test_glue_homotopy():
    x = e1().to_piece()
    # a = h'_F c'' - (b d_F'' - d_F' b) with b = 1: 5 - (2 - 2) = 5
    ok = verify_glue_homotopy(x, x, {1: m([5])}, {0: m([1]), 1: m([1])})
    assert ok.ok
    assert ok.h_F[0] == m([15 + 5], [5])
    bad = verify_glue_homotopy(x, x, {1: m([4])}, {0: m([1]), 1: m([1])})
    assert not bad.ok


# exchange

def test_exchange_scalars():
    ex = exchange(product(2), product(3))
    assert ex.fd.hD(0) == m([6]) and ex.fd_prime.hD(0) == m([6])
    assert ex.fd.F.ranks == (0,) and all(M.shape == (0, 0) for M in ex.iso.values())


def test_exchange_fixture():
    plus, minus = parse_scenario("exchange-e1").pieces
    ex = exchange(plus, minus)
    assert validate(ex.fd).ok and validate(ex.fd_prime).ok
    assert ex.fd_prime.hF(0) == Matrix.vstack(ZZ, [plus.hF(0), minus.hF(0) @ plus.hD(0)])
    # F+ sits in degree 1, F- in degree 0: d_F' = [[d+, 0], [h-_F c+, d-]]
    assert ex.fd_prime.F.d(1) == Matrix.vstack(ZZ, [Matrix.zeros(ZZ, 0, 1), minus.hF(0) @ plus.cmat(1)])


def _swap_blocks(fd, a, b):
    """Reorder F_i = X + Y as Y + X, where rank X = a[i], rank Y = b[i]."""
    R = fd.ring
    P = {i: Matrix.block(R, [[Matrix.zeros(R, b[i], a[i]), Matrix.identity(R, b[i])],
                             [Matrix.identity(R, a[i]), Matrix.zeros(R, a[i], b[i])]]) for i in fd.F.degrees()}
    Q = {i: P[i].transpose() for i in P}
    F = BasedComplex(R, fd.F.ranks, {i: P[i - 1] @ fd.F.d(i) @ Q[i] for i in range(1, fd.F.top + 1)})
    return FundamentalDomain(R, fd.D, F, {i: fd.cmat(i) @ Q[i] for i in range(1, fd.top + 1)},
                             {i: fd.hD(i) for i in fd.D.degrees()}, {i: P[i] @ fd.hF(i) for i in fd.D.degrees()})


@pytest.mark.parametrize("seed", range(30))
def test_exchange_twice(seed):
    plus, minus = gen_pieces(GeneratorParams(seed=seed, max_degree=3, max_rank=3, ring="Z"), "exchange").pieces
    ex = exchange(plus, minus)
    back = exchange(CobordismPiece(ZZ, minus.left, minus.right, minus.F, minus.c, minus.h_D, minus.h_F, twist=0),
                    CobordismPiece(ZZ, plus.left, plus.right, plus.F, plus.c, plus.h_D, plus.h_F, twist=1))
    top = ex.fd.top
    a = [plus.F.rank(i) for i in range(top + 1)]
    b = [minus.F.rank(i) for i in range(top + 1)]
    again = _swap_blocks(back.fd_prime, b, a)
    assert again.F == ex.fd.F
    assert all(again.cmat(i) == ex.fd.cmat(i) for i in range(1, top + 1))
    assert all(again.hD(i) == ex.fd.hD(i) and again.hF(i) == ex.fd.hF(i) for i in range(top + 1))


@pytest.mark.parametrize("seed", range(100))
def test_random_pieces(seed):
    ring = ("Z", "Zu-twist")[seed % 2]
    p = GeneratorParams(seed=seed, max_degree=3, max_rank=3, ring=ring)
    a, b, c = gen_pieces(p, "glue").pieces
    assert glue_assoc_check(a, b, c)
    assert validate(glue(glue(a, b), c)).ok
    ex = exchange(*gen_pieces(p, "exchange").pieces)
    assert validate(ex.fd).ok and validate(ex.fd_prime).ok


# truncated unions

def test_truncated_union_examples():
    fd = e1()
    assert truncated_union(fd, 0) == fd.F
    U = truncated_union(fd, 2)
    assert U.d(1) == m([2, 5, 15], [0, 2, 5], [0, 0, 2])
    no_death = fd.with_h({0: [[3]]}, None)
    assert truncated_union(no_death, 2).d(1) == m([2, 0, 0], [0, 2, 0], [0, 0, 2])


@pytest.mark.parametrize("seed", range(40))
def test_truncated_union_tower(seed):
    fd = gen_random(GeneratorParams(seed=seed, max_degree=3, max_rank=3, ring=("Z", "Zu-twist")[seed % 2])).fd
    k = 3
    U = truncated_union(fd, k)
    assert U.is_valid()
    for j in range(k):
        V = truncated_union(fd, j)
        for i in range(1, fd.top + 1):
            rows = range(V.rank(i - 1))
            cols = range(V.rank(i))
            assert U.d(i).submatrix(rows, cols) == V.d(i)


@pytest.mark.parametrize("seed", range(40))
def test_truncated_union_drop_first_copy(seed):
    fd = gen_random(GeneratorParams(seed=seed, max_degree=3, max_rank=3)).fd
    k = 3
    U, V = truncated_union(fd, k), truncated_union(fd, k - 1)
    maps = {}
    for i in U.degrees():
        n = fd.F.rank(i)
        maps[i] = Matrix.identity(ZZ, U.rank(i)).submatrix(range(n, U.rank(i)), range(U.rank(i)))
    ChainMap(U, V, maps)  # raises unless the projection is a chain map
