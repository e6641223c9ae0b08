"""Command line: ``novikov <command> [options] [scenario]``.

Scenario arguments are JSON paths or names of bundled fixtures (``e1``,
``circle.json``, ...).  Exit codes: 0 success, 1 invalid input data,
2 usage or parse error, 3 a checked identity failed (always a bug).
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (ExpansionError, HomotopyError, InvariantBreach, NovikovError, ParseError,
                     UnsupportedOperationError, ValidationError)
from .fundamental import exchange, glue, require_valid, validate
from .generate import RINGS, GeneratorParams, gen_pieces, gen_random
from .homology import betti
from .novikov import (cokernel_theorem_data, deformed_differential, exchange_check, invariance_iso,
                      tower_check, torsion_witt)
from .scenario import bundled_fixtures, parse_scenario, serialize_scenario

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_BREACH = 0, 1, 2, 3

COMMANDS = ("validate", "novikov", "cone", "cokernel", "torsion", "betti", "glue", "exchange",
            "tower", "invariance", "gen", "campaign")


class _Out:
    """Collects text lines and a JSON document; prints one of them."""

    def __init__(self, fmt):
        self.fmt = fmt
        self.lines = []
        self.doc = {}

    def line(self, s=""):
        self.lines.append(s)

    def emit(self, stream=None):
        stream = stream or sys.stdout
        if self.fmt == "json":
            stream.write(json.dumps(self.doc, indent=2) + "\n")
        elif self.lines:
            stream.write("\n".join(self.lines) + "\n")


def _render(ring, x):
    return x.render() if hasattr(x, "render") else ring.render(x)


def _matrix_doc(M):
    return [[_render(M.ring, x) for x in row] for row in M.rows]


def _matrix_str(M):
    return "[" + "; ".join(", ".join(_render(M.ring, x) for x in row) for row in M.rows) + "]"


def _matrix_lines(out, name, M):
    if M.shape == (1, 1):
        out.line(f"{name}: {_render(M.ring, M[0, 0])}")
        return
    for r, c, x in M.entries():
        out.line(f"{name}[{r},{c}]: {_render(M.ring, x)}")


def _complex(out, C, name="d", key=None, skip_empty=True):
    doc = []
    for i in range(1, C.top + 1):
        M = C.d(i)
        doc.append({"degree": i, "shape": list(M.shape), "matrix": _matrix_doc(M)})
        if skip_empty and (M.nrows == 0 or M.ncols == 0):
            continue
        out.line(f"degree {i} ({M.nrows} x {M.ncols})")
        _matrix_lines(out, name, M)
    if key:
        out.doc[key] = {"ranks": list(C.ranks), "differentials": doc}


def _fd(args):
    sc = parse_scenario(args.scenario)
    if sc.fd is None:
        raise ParseError(f"{args.scenario} holds no fundamental domain")
    return sc


def cmd_validate(args, out):
    sc = parse_scenario(args.scenario)
    reports = [("fundamental domain", validate(sc.fd))] if sc.fd is not None else []
    reports += [(p.name or f"piece {n}", validate(p)) for n, p in enumerate(sc.pieces)]
    ok = all(r.ok for _, r in reports)
    out.doc = {"valid": ok, "violations": {name: r.lines() for name, r in reports if not r.ok}}
    for name, r in reports:
        for ln in r.lines():
            out.line(f"{name}: {ln}")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_novikov(args, out):
    fd = _fd(args).fd
    res = deformed_differential(fd, args.order)
    out.doc = {"order": args.order, "ranks": list(fd.F.ranks)}
    for i in range(1, fd.top + 1):
        S = res.series.d(i)
        if S.nrows == 0 or S.ncols == 0:
            continue
        out.line(f"degree {i} ({S.nrows} x {S.ncols})")
        _matrix_lines(out, "d", S)
        if res.exact is not None:
            _matrix_lines(out, "exact", res.exact.d(i))
    if not out.lines:
        out.line("deformed complex is zero")
    out.doc["series"] = [{"degree": i, "matrix": _matrix_doc(res.series.d(i))} for i in range(1, fd.top + 1)]
    if res.exact is not None:
        out.doc["exact"] = [{"degree": i, "matrix": _matrix_doc(res.exact.d(i))} for i in range(1, fd.top + 1)]
    if res.torsion is not None:
        out.line(f"torsion: {res.torsion}")
        out.doc["torsion"] = str(res.torsion)
    if res.betti is not None:
        out.line(("betti: " + " ".join(str(b) for b in res.betti.ranks)).rstrip())
        out.doc["betti"] = list(res.betti.ranks)
    out.doc["gradient_like"] = fd.gradient_like
    if fd.gradient_like:
        out.line("z^j coefficients count gradient flow lines crossing the cut j times")
    return EXIT_OK


def cmd_cone(args, out):
    fd = _fd(args).fd
    data = cokernel_theorem_data(fd, args.order)
    out.line("ranks: " + " ".join(map(str, data.cone.ranks)))
    _complex(out, data.cone, key="cone")
    return EXIT_OK


def cmd_cokernel(args, out):
    fd = _fd(args).fd
    data = cokernel_theorem_data(fd, args.order)
    res = deformed_differential(fd, args.order, with_betti=False)
    _complex(out, data.coker, key="cokernel")
    same = data.coker == (res.exact if res.exact is not None else res.series)
    out.line(f"matches deformed differential: {'yes' if same else 'no'}")
    out.doc["matches_deformed"] = same
    if data.torsion_of_p is not None:
        out.line(f"torsion of p: {data.torsion_of_p}")
        out.doc["torsion_of_p"] = str(data.torsion_of_p)
    if data.torsion_series is not None:
        out.line(f"torsion of p (series): {data.torsion_series}")
        out.doc["torsion_series"] = str(data.torsion_series)
    return EXIT_OK if same else EXIT_BREACH


def cmd_torsion(args, out):
    fd = _fd(args).fd
    require_valid(fd)
    t = torsion_witt(fd, args.order)
    out.line(str(t))
    out.doc = {"order": args.order, "torsion": str(t)}
    return EXIT_OK


def cmd_betti(args, out):
    fd = _fd(args).fd
    res = deformed_differential(fd, args.order)
    if res.betti is None:
        raise UnsupportedOperationError("Betti numbers need Z or Q with alpha = id")
    data = cokernel_theorem_data(fd, args.order)
    cone = betti(data.cone)
    out.line(("betti: " + " ".join(str(b) for b in res.betti.ranks)).rstrip())
    out.line("cone betti: " + " ".join(str(b) for b in cone.ranks))
    out.doc = {"betti": list(res.betti.ranks), "cone_betti": list(cone.ranks)}
    return EXIT_OK if res.betti == cone else EXIT_BREACH


def _pieces(args, kind):
    sc = parse_scenario(args.scenario)
    if not sc.pieces:
        raise ParseError(f"{args.scenario} holds no pieces")
    if sc.pieces_kind != kind:
        raise ParseError(f"{args.scenario} holds {sc.pieces_kind} pieces, not {kind} pieces")
    for n, p in enumerate(sc.pieces):
        rep = validate(p)
        if not rep.ok:
            raise ValidationError(rep)
    return sc.pieces


def _piece_lines(out, p, key):
    doc = {"F": [], "c": [], "h_D": [], "h_F": []}
    for i in range(p.top + 1):
        if i >= 1:
            for name, M in (("d_F", p.F.d(i)), ("c", p.cmat(i))):
                if M.nrows and M.ncols:
                    out.line(f"degree {i} {name}: {_matrix_str(M)}")
            doc["F"].append(_matrix_doc(p.F.d(i)))
            doc["c"].append(_matrix_doc(p.cmat(i)))
        for name, M in (("h_D", p.hD(i)), ("h_F", p.hF(i))):
            if M.nrows and M.ncols:
                out.line(f"degree {i} {name}: {_matrix_str(M)}")
        doc["h_D"].append(_matrix_doc(p.hD(i)))
        doc["h_F"].append(_matrix_doc(p.hF(i)))
    out.doc[key] = doc


def cmd_glue(args, out):
    pieces = _pieces(args, "glue")
    acc = pieces[0]
    for p in pieces[1:]:
        acc = glue(acc, p)
    rep = validate(acc)
    _piece_lines(out, acc, "glued")
    out.line(f"F ranks: {' '.join(map(str, acc.F.ranks))}")
    if len(pieces) == 3:
        from .fundamental import glue_assoc_check
        assoc = glue_assoc_check(*pieces)
        out.line(f"associative: {'yes' if assoc else 'no'}")
        out.doc["associative"] = assoc
        if not assoc:
            return EXIT_BREACH
    out.doc["valid"] = rep.ok
    return EXIT_OK if rep.ok else EXIT_BREACH


def cmd_exchange(args, out):
    plus, minus = _pieces(args, "exchange")[:2]
    ex = exchange(plus, minus)
    out.line("cut at N:")
    _complex(out, deformed_differential(ex.fd, args.order, with_betti=False).series, key="fd")
    out.line("cut at N':")
    _complex(out, deformed_differential(ex.fd_prime, args.order, with_betti=False).series, key="fd_prime")
    bad = [f"{n} fails validation" for n, f in (("fd", ex.fd), ("fd'", ex.fd_prime)) if not validate(f).ok]
    bad += exchange_check(ex, args.order)
    out.line(f"I intertwines: {'yes' if not bad else 'no'}")
    for b in bad:
        out.line(b)
    out.doc["intertwines"] = not bad
    return EXIT_OK if not bad else EXIT_BREACH


def cmd_tower(args, out):
    fd = _fd(args).fd
    rep = tower_check(fd, args.order)
    out.line(str(rep))
    out.doc = {"kmax": args.order, "ok": rep.ok, "discrepancies": rep.discrepancies}
    return EXIT_OK if rep.ok else EXIT_BREACH


def cmd_invariance(args, out):
    from .novikov import apply_homotopy
    sc = _fd(args)
    if sc.homotopy is None:
        raise ParseError(f"{args.scenario} holds no homotopy")
    fd2 = apply_homotopy(sc.fd, sc.homotopy)
    res = invariance_iso(sc.fd, fd2, sc.homotopy, args.order)
    out.line("deformed differential after the homotopy:")
    _complex(out, res.fhat_prime, key="fhat_prime")
    out.line("r:")
    for i, m in sorted(res.r.items()):
        if m.nrows and m.ncols:
            _matrix_lines(out, f"r_{i}", m)
    out.doc["r"] = {str(i): _matrix_doc(m) for i, m in res.r.items()}
    out.line(f"intertwines: {'yes' if res.intertwines else 'no'}")
    out.line(f"sigma-invertible: {'yes' if res.sigma_ok else 'no'}")
    if res.det_product is not None:
        out.line(f"determinant product: {res.det_product}")
        out.doc["det_product"] = str(res.det_product)
    out.doc.update(intertwines=res.intertwines, sigma_ok=res.sigma_ok)
    return EXIT_OK if res.ok else EXIT_BREACH


def cmd_gen(args, out):
    params = GeneratorParams(seed=args.seed, max_degree=args.max_degree, max_rank=args.max_rank,
                             entry_bound=args.entry_bound, ring=args.ring, homotopy=args.homotopy)
    sc = gen_pieces(params, args.pieces) if args.pieces else gen_random(params)
    text = serialize_scenario(sc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_campaign(args, out):
    from .campaign import SUITES, run_campaign
    names = args.suite or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ParseError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    results = run_campaign(names, args.seeds, args.start, args.workers)
    out.doc = {"seeds": args.seeds, "suites": {}}
    for r in results:
        out.line(f"{r.name}: {r.passed} passed, {r.failed} failed")
        for seed, msgs in r.failures[:5]:
            out.line(f"  seed {seed}: {'; '.join(msgs)}")
        out.doc["suites"][r.name] = {"passed": r.passed, "failed": r.failed,
                                     "failures": [{"seed": s, "messages": m} for s, m in r.failures]}
    return EXIT_OK if all(r.ok for r in results) else EXIT_BREACH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=8, help="truncation order K (default 8)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    p = argparse.ArgumentParser(prog="novikov", description="Novikov complexes from fundamental-domain chain data.",
                                epilog="bundled fixtures: " + ", ".join(bundled_fixtures()))
    sub = p.add_subparsers(dest="command", required=True, metavar="command")
    helps = {
        "validate": "check the chain conditions of a scenario",
        "novikov": "deformed differential in series and exact form",
        "cone": "mapping cone of g - z h",
        "cokernel": "cokernel of g - z h and the torsion of the projection",
        "torsion": "torsion Witt vector prod det(1 - z h_D)^(-1)^(i+1)",
        "betti": "Betti numbers of the deformed complex over Q(z)",
        "glue": "glue the pieces of a scenario",
        "exchange": "exchange the two cuts of a plus/minus pair",
        "tower": "compare truncated unions with the z-expansion up to --order",
        "invariance": "isomorphism induced by the scenario's homotopy",
        "gen": "write a random scenario",
        "campaign": "run the randomized property suites",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common], help=helps[name], description=helps[name])
        if name not in ("gen", "campaign"):
            sp.add_argument("scenario", help="scenario file or bundled fixture name")
    g = sub.choices["gen"]
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--ring", choices=sorted(RINGS), default="Z")
    g.add_argument("--max-degree", type=int, default=3)
    g.add_argument("--max-rank", type=int, default=3)
    g.add_argument("--entry-bound", type=int, default=3)
    g.add_argument("--homotopy", action="store_true", help="include a random homotopy k")
    g.add_argument("--pieces", choices=("glue", "exchange"), help="write pieces instead of a domain")
    g.add_argument("-o", "--output")
    c = sub.choices["campaign"]
    c.add_argument("--seeds", type=int, default=100)
    c.add_argument("--start", type=int, default=0, help="first seed")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--suite", action="append", help="run only this suite (repeatable)")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(args.format)
    handler = globals()[f"cmd_{args.command}"]
    err = sys.stderr
    try:
        if getattr(args, "order", 0) < 0:
            raise ParseError("--order must be >= 0")
        code = handler(args, out)
    except ValidationError as e:
        out.emit()
        err.write("validation failed:\n" + "\n".join(e.report.lines()) + "\n")
        return EXIT_INVALID
    except HomotopyError as e:
        err.write(f"invalid homotopy: {e}\n")
        return EXIT_INVALID
    except InvariantBreach as e:
        err.write(f"internal invariant breach: {e}\n")
        return EXIT_BREACH
    except (ParseError, FileNotFoundError, ValueError) as e:
        err.write(f"error: {e}\n")
        return EXIT_USAGE
    except (UnsupportedOperationError, ExpansionError) as e:
        err.write(f"unsupported: {e}\n")
        return EXIT_USAGE
    except NovikovError as e:
        err.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_INVALID
    out.emit()
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
