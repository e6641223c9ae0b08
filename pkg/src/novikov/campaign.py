"""Randomized property suites over generated scenarios.

Each suite maps a seed to a list of failure messages (empty means pass).
Seeds fan out over a process pool; results come back in seed order, so a
campaign prints the same thing regardless of the worker count.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .chain import ChainMap
from .errors import NovikovError
from .fundamental import exchange, glue, glue_assoc_check, validate
from .generate import GeneratorParams, gen_pieces, gen_random
from .homology import betti, compare_cone_coker, novikov_betti
from .linalg import is_invertible
from .matrix import Matrix
from .novikov import (apply_homotopy, cokernel_theorem_data, deformed_differential, exchange_check,
                      invariance_iso, tower_check, torsion_witt)
from .oracles import rewrite_coefficient, torsion_trace_series
from .rings import QQ, ratfun_to_series
from .scenario import parse_scenario_data, serialize_scenario

ORDER = 8


def _fd(seed, **kw):
    kw.setdefault("max_degree", 4)
    kw.setdefault("max_rank", 4)
    return gen_random(GeneratorParams(seed=seed, **kw))


def suite_validate(seed):
    sc = _fd(seed, ring=("Z", "Q", "Zu", "Zu-twist")[seed % 4])
    rep = validate(sc.fd)
    return [] if rep.ok else [str(rep)]


def suite_roundtrip(seed):
    sc = _fd(seed, ring=("Z", "Zu", "Zu-twist")[seed % 3], homotopy=True)
    text = serialize_scenario(sc)
    again = serialize_scenario(parse_scenario_data(json.loads(text)))
    return [] if again == text else ["serialize(parse(x)) != x"]


def suite_d2(seed, K=ORDER):
    fd = _fd(seed).fd
    res = deformed_differential(fd, K)
    out = []
    if not res.exact.is_valid():
        out.append("exact d^2 != 0")
    if not res.series.is_valid():
        out.append(f"series d^2 != 0 mod z^{K + 1}")
    for i in range(1, fd.top + 1):
        conv = res.exact.d(i).map(lambda r: ratfun_to_series(r, K), res.series.ring)
        if conv != res.series.d(i):
            out.append(f"exact and series forms differ in degree {i}")
    return out


def suite_cokernel(seed, K=ORDER):
    fd = _fd(seed).fd
    res = deformed_differential(fd, K)
    data = cokernel_theorem_data(fd, K)
    out = []
    if data.coker != res.exact:
        out.append("cokernel of g - zh differs from the deformed complex")
    if not compare_cone_coker(data.phi):
        out.append("cone and cokernel Betti numbers differ")
    if novikov_betti(fd) != betti(data.cone):
        out.append("Novikov Betti numbers differ from the cone's")
    if not data.p.is_valid():
        out.append("the cone projection is not a chain map")
    return out


def suite_embedding(seed):
    fd = _fd(seed, ring="Q").fd
    E = fd.E()
    phi = ChainMap(fd.D, E, {i: fd.g(i) for i in fd.D.degrees()}, check=False)
    if not phi.is_valid():
        return ["g is not a chain map"]
    return [] if compare_cone_coker(phi) else ["cone and cokernel Betti numbers differ"]


def suite_invariance(seed, K=ORDER):
    sc = _fd(seed, max_degree=3, max_rank=3, homotopy=True)
    fd2 = apply_homotopy(sc.fd, sc.homotopy)
    res = invariance_iso(sc.fd, fd2, sc.homotopy, K)
    out = []
    if not res.intertwines:
        out.append("r d^ != d^' r")
    if res.det_product != 1:
        out.append(f"alternating determinant product is {res.det_product}, not 1")
    if not res.sigma_ok:
        out.append("1 + d psi + psi d is not Sigma-invertible")
    if not all(is_invertible(m) for m in res.r.values()):
        out.append("r is not invertible")
    return out


def suite_torsion(seed, K=ORDER):
    fd = _fd(seed).fd
    got = torsion_witt(fd, K).coefficients()
    want = torsion_trace_series(fd, K)
    return [] if [QQ.coerce(x) for x in got] == want else [f"torsion {got} != trace oracle {want}"]


def suite_tower(seed, kmax=6):
    fd = _fd(seed, max_degree=3, max_rank=3, ring=("Z", "Zu-twist")[seed % 2]).fd
    rep = tower_check(fd, kmax)
    return rep.discrepancies


def suite_glue(seed):
    sc = gen_pieces(GeneratorParams(seed=seed, max_degree=3, max_rank=3, ring=("Z", "Zu-twist")[seed % 2]), "glue")
    a, b, c = sc.pieces
    out = []
    if not glue_assoc_check(a, b, c):
        out.append("glue is not associative")
    if not validate(glue(glue(a, b), c)).ok:
        out.append("glued piece fails validation")
    return out


def suite_exchange(seed, K=ORDER):
    sc = gen_pieces(GeneratorParams(seed=seed, max_degree=3, max_rank=3, ring=("Z", "Zu-twist")[seed % 2]),
                    "exchange")
    ex = exchange(*sc.pieces)
    out = [f"{name} fails validation" for name, f in (("fd", ex.fd), ("fd'", ex.fd_prime)) if not validate(f).ok]
    return out or exchange_check(ex, K)


def suite_twisted(seed, K=5):
    fd = _fd(seed, max_degree=2, max_rank=3, ring="Zu-twist").fd
    res = deformed_differential(fd, K)
    out = []
    for i in range(1, fd.top + 1):
        for j in range(K + 1):
            want = Matrix(fd.ring, rewrite_coefficient(fd, i, j), fd.F.rank(i - 1), fd.F.rank(i))
            if res.coefficient(i, j) != want:
                out.append(f"z^{j} coefficient in degree {i} differs from the rewrite oracle")
    return out


SUITES = {
    "validate": suite_validate,
    "roundtrip": suite_roundtrip,
    "d2": suite_d2,
    "cokernel": suite_cokernel,
    "embedding": suite_embedding,
    "invariance": suite_invariance,
    "torsion": suite_torsion,
    "tower": suite_tower,
    "glue": suite_glue,
    "exchange": suite_exchange,
    "twisted": suite_twisted,
}


def run_one(name, seed):
    try:
        return seed, SUITES[name](seed)
    except NovikovError as e:
        return seed, [f"{type(e).__name__}: {e}"]


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failures: list = field(default_factory=list)

    @property
    def failed(self) -> int:
        return len(self.failures)

    @property
    def ok(self) -> bool:
        return not self.failures


def run_suite(name, seeds, start=0, workers=1) -> SuiteResult:
    res = SuiteResult(name)
    seed_list = list(range(start, start + seeds))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(run_one, [name] * len(seed_list), seed_list, chunksize=8))
    else:
        results = [run_one(name, s) for s in seed_list]
    for seed, msgs in results:
        if msgs:
            res.failures.append((seed, msgs))
        else:
            res.passed += 1
    return res


def run_campaign(names=None, seeds=100, start=0, workers=1):
    return [run_suite(n, seeds, start, workers) for n in (names or SUITES)]


__all__ = ["SUITES", "SuiteResult", "run_suite", "run_campaign", "run_one"]
