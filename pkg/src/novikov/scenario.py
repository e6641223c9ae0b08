"""JSON scenario files (schema 1).

A file holds a ring descriptor, optionally a fundamental domain (D, F, c,
h_D, h_F), optionally a homotopy k for the invariance command and
optionally a list of cobordism pieces for glue/exchange.  Matrices are
row-major arrays of ring-element strings; per-degree lists run from degree
0 upwards and differentials are indexed by source degree, so entry 0 of a
differential list is always [].
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .chain import BasedComplex
from .errors import NovikovError, ParseError, ShapeError
from .fundamental import CobordismPiece, FundamentalDomain
from .matrix import Matrix
from .rings import GroundRing

SCHEMA = 1


@dataclass
class Scenario:
    ring: GroundRing
    fd: FundamentalDomain | None = None
    homotopy: dict | None = None
    pieces: list = field(default_factory=list)
    pieces_kind: str | None = None
    name: str = ""
    description: str = ""
    gradient_like: bool = False


# reading

class _Reader:
    def __init__(self, ring: GroundRing):
        self.ring = ring

    @staticmethod
    def fail(path, msg):
        raise ParseError(f"{path}: {msg}")

    def get(self, obj, key, path, kind=None, required=True):
        if not isinstance(obj, dict):
            self.fail(path, "expected an object")
        if key not in obj:
            if required:
                self.fail(path, f"missing key {key!r}")
            return None
        v = obj[key]
        if kind is not None and not isinstance(v, kind):
            self.fail(f"{path}.{key}", f"expected {kind.__name__ if isinstance(kind, type) else 'value'}")
        return v

    def matrix(self, data, nrows, ncols, path) -> Matrix:
        if not isinstance(data, list):
            self.fail(path, "expected a list of rows")
        if nrows == 0:
            if data:
                self.fail(path, f"expected 0 rows, got {len(data)}")
            return Matrix.zeros(self.ring, 0, ncols)
        if len(data) != nrows:
            self.fail(path, f"expected {nrows} rows, got {len(data)}")
        rows = []
        for r, row in enumerate(data):
            if not isinstance(row, list) or len(row) != ncols:
                self.fail(f"{path}[{r}]", f"expected a row of {ncols} entries")
            out = []
            for c, x in enumerate(row):
                if isinstance(x, bool) or not isinstance(x, (str, int)):
                    self.fail(f"{path}[{r}][{c}]", "entries are strings (or integers)")
                try:
                    out.append(self.ring.coerce(x))
                except NovikovError as e:
                    self.fail(f"{path}[{r}][{c}]", str(e))
            rows.append(out)
        return Matrix(self.ring, rows, nrows, ncols)

    def complex(self, data, path) -> BasedComplex:
        ranks = self.get(data, "ranks", path, list)
        if any(isinstance(r, bool) or not isinstance(r, int) or r < 0 for r in ranks):
            self.fail(f"{path}.ranks", "ranks are non-negative integers")
        diffs = self.get(data, "differentials", path, list, required=False) or []
        if len(diffs) > len(ranks):
            self.fail(f"{path}.differentials", f"more differentials than degrees ({len(ranks)})")
        if diffs and diffs[0] != []:
            self.fail(f"{path}.differentials[0]", "degree 0 has no differential; use []")
        rk = lambda i: ranks[i] if 0 <= i < len(ranks) else 0
        d = {i: self.matrix(m, rk(i - 1), rk(i), f"{path}.differentials[{i}]")
             for i, m in enumerate(diffs) if i >= 1}
        labels = data.get("labels")
        return BasedComplex(self.ring, ranks, d, labels, check=False)

    def family(self, data, shape, count, path):
        if data is None:
            return {}
        if not isinstance(data, list):
            self.fail(path, "expected a per-degree list")
        if len(data) > count:
            self.fail(path, f"expected at most {count} degrees, got {len(data)}")
        return {i: self.matrix(m, *shape(i), f"{path}[{i}]") for i, m in enumerate(data)}

    def piece_data(self, data, path, left, right, F):
        top = max(left.top, right.top, F.top) + 1
        c = self.family(data.get("c"), lambda i: (left.rank(i - 1), F.rank(i)), top, f"{path}.c")
        hD = self.family(data.get("h_D"), lambda i: (left.rank(i), right.rank(i)), top, f"{path}.h_D")
        hF = self.family(data.get("h_F"), lambda i: (F.rank(i), right.rank(i)), top, f"{path}.h_F")
        return c, hD, hF


def parse_scenario_data(data) -> Scenario:
    if not isinstance(data, dict):
        raise ParseError("$: expected a JSON object")
    if data.get("schema") != SCHEMA:
        raise ParseError(f"$.schema: expected {SCHEMA}, got {data.get('schema')!r}")
    rd = data.get("ring")
    if not isinstance(rd, dict):
        raise ParseError("$.ring: expected a ring descriptor object")
    try:
        ring = GroundRing.from_descriptor(rd)
    except NovikovError as e:
        raise ParseError(f"$.ring: {e}") from None
    rdr = _Reader(ring)
    flags = data.get("flags") or {}
    sc = Scenario(ring, name=data.get("name", ""), description=data.get("description", ""),
                  gradient_like=bool(flags.get("gradient_like", False)))
    try:
        if "D" in data or "F" in data:
            D = rdr.complex(rdr.get(data, "D", "$"), "$.D")
            F = rdr.complex(rdr.get(data, "F", "$"), "$.F")
            c, hD, hF = rdr.piece_data(data, "$", D, D, F)
            sc.fd = FundamentalDomain(ring, D, F, c, hD, hF, sc.gradient_like, sc.name, sc.description)
            if "homotopy" in data:
                top = sc.fd.top + 1
                sc.homotopy = rdr.family(data["homotopy"], lambda i: (D.rank(i + 1) + F.rank(i + 1), D.rank(i)),
                                         top, "$.homotopy")
        if "pieces" in data:
            pc = data["pieces"]
            sc.pieces_kind = rdr.get(pc, "kind", "$.pieces", str)
            if sc.pieces_kind not in ("glue", "exchange"):
                rdr.fail("$.pieces.kind", "expected 'glue' or 'exchange'")
            for n, p in enumerate(rdr.get(pc, "list", "$.pieces", list)):
                path = f"$.pieces.list[{n}]"
                left = rdr.complex(rdr.get(p, "left", path), f"{path}.left")
                right = rdr.complex(rdr.get(p, "right", path), f"{path}.right")
                F = rdr.complex(rdr.get(p, "F", path), f"{path}.F")
                c, hD, hF = rdr.piece_data(p, path, left, right, F)
                twist = p.get("twist", 0)
                if twist not in (0, 1):
                    rdr.fail(f"{path}.twist", "twist is 0 or 1")
                sc.pieces.append(CobordismPiece(ring, left, right, F, c, hD, hF, twist, p.get("name", "")))
    except ShapeError as e:
        raise ParseError(str(e)) from None
    if sc.fd is None and not sc.pieces:
        raise ParseError("$: needs a fundamental domain (D, F) or a pieces list")
    return sc


def _fixture_path(name: str):
    base = resources.files("novikov") / "data"
    for cand in (name, f"{name}.json"):
        p = base / cand
        if p.is_file():
            return p
    return None


def load_text(path) -> str:
    """Read a scenario file; bare names fall back to the bundled fixtures."""
    p = Path(path)
    if p.is_file():
        return p.read_text(encoding="utf-8")
    fx = _fixture_path(str(path))
    if fx is None:
        raise FileNotFoundError(f"no such scenario file or bundled fixture: {path}")
    return fx.read_text(encoding="utf-8")


def parse_scenario(path) -> Scenario:
    text = load_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    return parse_scenario_data(data)


def bundled_fixtures():
    base = resources.files("novikov") / "data"
    return sorted(p.name[:-5] for p in base.iterdir() if p.name.endswith(".json"))


# writing

def _mat(m: Matrix, ring):
    if m.nrows == 0:
        return []
    return [[ring.render(x) for x in row] for row in m.rows]


def _complex(C: BasedComplex, ring):
    diffs = [[]] + [_mat(C.d(i), ring) for i in range(1, C.top + 1)] if C.top >= 0 else []
    out = {"ranks": list(C.ranks), "differentials": diffs}
    if C.labels is not None:
        out["labels"] = [list(l) for l in C.labels]
    return out


def _piece_body(p: CobordismPiece, ring):
    return {
        "c": [_mat(p.cmat(i), ring) for i in range(p.F.top + 1)],
        "h_D": [_mat(p.hD(i), ring) for i in range(p.right.top + 1)],
        "h_F": [_mat(p.hF(i), ring) for i in range(p.right.top + 1)],
    }


def serialize_scenario_data(sc: Scenario) -> dict:
    ring = sc.ring
    out = {"schema": SCHEMA, "name": sc.name, "description": sc.description, "ring": ring.descriptor()}
    if sc.fd is not None:
        fd = sc.fd
        out["D"] = _complex(fd.D, ring)
        out["F"] = _complex(fd.F, ring)
        out.update(_piece_body(fd, ring))
        if sc.homotopy is not None:
            out["homotopy"] = [_mat(sc.homotopy.get(i) or Matrix.zeros(ring, fd.D.rank(i + 1) + fd.F.rank(i + 1),
                                                                       fd.D.rank(i)), ring)
                               for i in range(fd.D.top + 1)]
    if sc.pieces:
        lst = []
        for p in sc.pieces:
            body = {"name": p.name, "twist": p.twist, "left": _complex(p.left, ring),
                    "right": _complex(p.right, ring), "F": _complex(p.F, ring)}
            body.update(_piece_body(p, ring))
            lst.append(body)
        out["pieces"] = {"kind": sc.pieces_kind or "glue", "list": lst}
    out["flags"] = {"gradient_like": sc.gradient_like}
    return out


def _flat(x) -> bool:
    return not isinstance(x, (dict, list)) or (isinstance(x, list) and all(_flat(y) for y in x) and _depth(x) <= 3)


def _depth(x) -> int:
    return 1 + max((_depth(y) for y in x), default=0) if isinstance(x, list) else 0


def _dump(x, indent=0) -> str:
    """JSON with matrices and short lists kept on one line."""
    pad = "  " * (indent + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        body = ",\n".join(f"{pad}{json.dumps(k)}: {_dump(v, indent + 1)}" for k, v in x.items())
        return "{\n" + body + "\n" + "  " * indent + "}"
    if isinstance(x, list) and not _flat(x):
        body = ",\n".join(pad + _dump(v, indent + 1) for v in x)
        return "[\n" + body + "\n" + "  " * indent + "]"
    return json.dumps(x)


def serialize_scenario(sc: Scenario) -> str:
    return _dump(serialize_scenario_data(sc)) + "\n"


def scenario_from_fd(fd: FundamentalDomain, homotopy=None, name=None, description=None) -> Scenario:
    if homotopy is not None:
        from .novikov import _k_family
        homotopy = _k_family(fd, homotopy)
    return Scenario(fd.ring, fd, homotopy, name=fd.name if name is None else name,
                    description=fd.description if description is None else description,
                    gradient_like=fd.gradient_like)


__all__ = ["SCHEMA", "Scenario", "parse_scenario", "parse_scenario_data", "serialize_scenario",
           "serialize_scenario_data", "scenario_from_fd", "bundled_fixtures", "load_text"]
