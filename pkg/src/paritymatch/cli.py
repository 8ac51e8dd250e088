"""Command-line front end.

Exit codes: 0 success (found / feasible), 1 certified negative, 2 usage or
input error, 3 an enumeration or retry cap was hit.  Every report carries
the configuration that produced it; nothing time-dependent is written unless
``--timings`` is given, so rerunning a report's config reproduces it byte for
byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

from .core import Parity, build_complete_double
from .formats import FormatError, matching_to_json, parse_labeling, read_graph
from .oracle import CapExceeded, MATCHING_CAP, enumerate_exact_k, iter_perfect_matchings
from .polytope import SCHEMA_VERSION, build_relaxation, build_slack_matrix, lp_feasible, \
    read_matrix_csv, verify_witness
from .solver import ResultKind, check_hall_violator, solve_parity, verify_result

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def default_threads() -> int:
    env = os.environ.get("PARITYMATCH_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"PARITYMATCH_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _config(args: argparse.Namespace) -> dict:
    skip = {"func", "output", "threads"}
    out = {}
    for key, val in sorted(vars(args).items()):
        if key in skip:
            continue
        out[key] = str(val) if isinstance(val, Path) else val
    return out


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj: dict) -> None:
    _emit(args, json.dumps(obj, indent=1) + "\n")


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


# -- solve / exact / enumerate ----------------------------------------------

def cmd_solve(args) -> int:
    g = read_graph(args.graph)
    res = solve_parity(g, Parity(args.parity))
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": _config(args),
        "kind": res.kind.value,
        "matching": matching_to_json(res.matching) if res.matching else None,
        "certificate": res.certificate.bitstring() if res.certificate else None,
        "hall_violator": None if res.hall_set is None else
        {"side": res.hall_set[0], "vertices": [v + 1 for v in res.hall_set[1]]},
        "stats": {"components": res.components, "rotations": res.rotations},
    }
    if args.timings:
        report["stats"]["pm_time"] = res.pm_time
    if not verify_result(g, res):
        raise RuntimeError("solver answer failed its own verification")
    _emit_json(args, report)
    return EXIT_OK if res.found else EXIT_NEGATIVE


def cmd_exact(args) -> int:
    g = read_graph(args.graph)
    found = enumerate_exact_k(g, args.red, cap=args.cap)
    examined = sum(1 for _ in iter_perfect_matchings(g, args.cap))
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": _config(args),
        "found": bool(found),
        "count": len(found),
        "matching": matching_to_json(found[0]) if found else None,
        "certificate": None if found else {"type": "exhaustion", "perfect_matchings_examined": examined},
    }
    _emit_json(args, report)
    return EXIT_OK if found else EXIT_NEGATIVE


def cmd_enumerate(args) -> int:
    g = read_graph(args.graph)
    lines = []
    by_red: dict[int, int] = {}
    total = 0
    for m in iter_perfect_matchings(g, args.cap):
        total += 1
        by_red[m.red_count] = by_red.get(m.red_count, 0) + 1
        if args.list:
            lines.append(json.dumps({"schema_version": SCHEMA_VERSION, "index": total,
                                     "red": m.red_count, "matching": matching_to_json(m)}))
    summary = {
        "schema_version": SCHEMA_VERSION,
        "config": _config(args),
        "total": total,
        "odd": sum(c for r, c in by_red.items() if r % 2),
        "even": sum(c for r, c in by_red.items() if r % 2 == 0),
        "by_red": {str(r): by_red[r] for r in sorted(by_red)},
    }
    lines.append(json.dumps(summary))
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


# -- relaxation and slack ---------------------------------------------------

def cmd_relax(args) -> int:
    g = read_graph(args.graph)
    target = Parity(args.parity)
    lp = build_relaxation(g, target, cap=args.cap)
    res = lp_feasible(lp, method=args.method)
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": _config(args),
        "feasible": res.feasible,
        "reason": res.reason,
        "rows_used": res.rows_used,
        "rounds": res.rounds,
    }
    if res.feasible:
        if not verify_witness(lp, res.witness):
            raise RuntimeError("LP witness failed exact verification")
        report["witness"] = [[e.u + 1, e.v + 1, e.color.letter, _frac(x)]
                             for e, x in zip(lp.variables, res.witness) if x]
    else:
        sol = solve_parity(g, target)
        if sol.found:
            raise RuntimeError("LP infeasible although a matching of the target parity exists")
        report["certificate"] = sol.certificate.bitstring() if sol.certificate else None
        report["hall_violator"] = None if sol.hall_set is None else \
            {"side": sol.hall_set[0], "vertices": [v + 1 for v in sol.hall_set[1]]}
    _emit_json(args, report)
    return EXIT_OK if res.feasible else EXIT_NEGATIVE


def _slack_from_args(args):
    if args.graph:
        g = read_graph(args.graph)
    else:
        if args.n is None or args.n < 1:
            raise UsageError("give --n N (a positive integer) or --graph FILE")
        g = build_complete_double(args.n)
    return build_slack_matrix(g, Parity(args.parity), include_degree=args.include_degree,
                              matching_cap=args.cap)


def cmd_slack(args) -> int:
    s = _slack_from_args(args)
    _emit(args, s.to_csv())
    if args.output:
        side = dict(s.sidecar())
        side["config"] = _config(args)
        Path(str(args.output) + ".json").write_text(json.dumps(side, indent=1) + "\n")
    return EXIT_OK


# -- bounds -----------------------------------------------------------------

def read_weight_csv(path: Path) -> list[list[str]]:
    rows = [r for r in csv.reader(ln for ln in Path(path).read_text().splitlines()
                                  if ln.strip() and not ln.startswith("#"))]
    if not rows:
        raise FormatError("empty weight file")

    def numeric(cell: str) -> bool:
        if cell.strip().lower() in ("-inf", "forbidden", "x"):
            return True
        try:
            Fraction(cell)
            return True
        except ValueError:
            return False

    if not all(numeric(c) for c in rows[0][1:]) or rows[0][0] == "row":
        rows = rows[1:]
    return [r[1:] if r and not numeric(r[0]) else r for r in rows]


def cmd_bounds(args) -> int:
    from . import bounds as xb

    if args.matrix:
        try:
            mat = read_matrix_csv(Path(args.matrix).read_text())
        except ValueError as exc:
            raise FormatError(str(exc)) from None
    else:
        mat = _slack_from_args(args).entries
    reports = []
    if args.weights:
        try:
            w = xb.WeightMatrix(read_weight_csv(args.weights))
            w.check_against(mat)
            hb = xb.hyperplane_bound(mat, w, mode=args.mode, cap=args.rect_cap, seed=args.seed)
            reports.append(hb.report())
        except xb.BoundUndefined as exc:
            reports.append(xb.bound_report("hyperplane", None, {"undefined": str(exc)}))
    lower = 0
    if args.cover:
        try:
            cover = xb.rectangle_cover_bound(mat)
            reports.append(cover.report())
            lower = math.ceil(cover.value)
        except xb.BoundUndefined as exc:
            reports.append(xb.bound_report("rectangle_cover", None, {"undefined": str(exc)}))
    if args.nnmf is not None:
        res = xb.nnmf_upper_bound(mat, args.nnmf, restarts=args.restarts, seed=args.seed,
                                  tolerance=args.tolerance)
        reports.append(res.report())
    if args.upper:
        r, (U, V) = xb.certified_upper_bound(mat, restarts=args.restarts, seed=args.seed,
                                         lower=lower)
        reports.append(xb.bound_report("certified_nonnegative_factorization", Fraction(r), {
            "U": [[_frac(x) for x in row] for row in U],
            "V": [[_frac(x) for x in row] for row in V],
        }))
    if not reports:
        raise UsageError("choose at least one of --weights, --cover, --nnmf, --upper")
    _emit_json(args, {"schema_version": SCHEMA_VERSION, "config": _config(args),
                      "rank": xb.exact_rank(mat), "shape": list(mat.shape), "bounds": reports})
    return EXIT_OK


# -- partition lab ----------------------------------------------------------

_MU = {"3": "mu3", "4k3": "mu4k3", "3alt": "mu3_alt"}


def cmd_sample(args) -> int:
    from .family import PermutationFamily
    from .samplers import iter_batches

    kind = _MU[args.mu]
    family = None
    if kind == "mu3_alt":
        if not args.family:
            raise UsageError("--mu 3alt needs --family FILE")
        family = PermutationFamily.load(args.family)
        if family.k != args.k:
            raise UsageError(f"family file is for k={family.k}, not k={args.k}")
    if args.count < 0:
        raise UsageError("--count must be nonnegative")
    threads = args.threads if args.threads is not None else default_threads()
    out = []
    for batch in iter_batches(kind, args.k, args.m, args.count, args.seed, family, threads):
        out.extend(json.dumps(batch.record(i)) for i in range(len(batch)))
    _emit(args, "".join(line + "\n" for line in out))
    return EXIT_OK


def cmd_family(args) -> int:
    from .family import find_family, largest_unseparated_collection

    try:
        fam, attempts = find_family(args.k, args.seed, retries=args.retries)
    except RuntimeError as exc:
        raise CapExceeded(str(exc)) from None
    obj = fam.to_json()
    obj["config"] = _config(args)
    obj["attempts"] = attempts
    obj["largest_unseparated"] = [list(t) for t in largest_unseparated_collection(fam)]
    _emit_json(args, obj)
    return EXIT_OK


def cmd_verify(args) -> int:
    """Check a saved report (solve/relax) against its graph, or a family file."""
    report = json.loads(Path(args.report).read_text())
    if args.family:
        from .family import PermutationFamily, family_is_good
        ok = family_is_good(PermutationFamily.from_json(report))
    else:
        if not args.graph:
            raise UsageError("verify needs --graph for solver/relaxation reports")
        g = read_graph(args.graph)
        target = Parity(report.get("config", {}).get("parity", args.parity))
        ok = _verify_graph_report(g, target, report)
    _emit_json(args, {"schema_version": SCHEMA_VERSION, "config": _config(args), "valid": ok})
    return EXIT_OK if ok else EXIT_NEGATIVE


def _verify_graph_report(g, target: Parity, report: dict) -> bool:
    from .formats import matching_from_json
    from .solver import ParityResult

    if report.get("matching"):
        m = matching_from_json(report["matching"])
        return m.is_perfect(g) and m.parity is target
    if report.get("witness"):
        lp = build_relaxation(g, target)
        x = {(int(u) - 1, int(v) - 1, c): Fraction(val) for u, v, c, val in report["witness"]}
        vec = [x.get((e.u, e.v, e.color.letter), Fraction(0)) for e in lp.variables]
        return verify_witness(lp, vec)
    if report.get("certificate"):
        cert = parse_labeling(report["certificate"], g.n_left)
        if not cert.is_valid_for(target):
            return False
        return verify_result(g, ParityResult(ResultKind.CERTIFICATE, target, certificate=cert))
    if report.get("hall_violator"):
        hv = report["hall_violator"]
        return check_hall_violator(g, hv["side"], [v - 1 for v in hv["vertices"]])
    return False


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="paritymatch",
                                description="Parity perfect matchings: solver, LP, slack matrices, bounds, samplers.")
    p.add_argument("--threads", type=int, default=None,
                   help="worker bound (default: $PARITYMATCH_THREADS or CPU count)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=True, parity=True):
        if graph:
            sp.add_argument("graph", type=Path, help="graph file ('p cbg' format)")
        if parity:
            sp.add_argument("--parity", choices=["odd", "even"], default="odd")
        sp.add_argument("-o", "--output", type=Path, default=None)

    sp = sub.add_parser("solve", help="find a perfect matching of given red parity or a certificate")
    common(sp)
    sp.add_argument("--timings", action="store_true", help="include wall-clock timings (not reproducible)")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("exact", help="perfect matching with exactly --red red edges (enumeration)")
    common(sp, parity=False)
    sp.add_argument("--red", type=int, required=True)
    sp.add_argument("--cap", type=int, default=MATCHING_CAP)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("enumerate", help="count (or list) perfect matchings by red count")
    common(sp, parity=False)
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--cap", type=int, default=MATCHING_CAP)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("relax", help="exact feasibility of the labeling LP relaxation")
    common(sp)
    sp.add_argument("--method", choices=["rowgen", "full"], default="rowgen")
    sp.add_argument("--cap", type=int, default=24, help="labeling enumeration cap (vertices)")
    sp.set_defaults(func=cmd_relax)

    def slack_source(sp):
        sp.add_argument("--n", type=int, default=None, help="use the complete double graph G_n")
        sp.add_argument("--graph", type=Path, default=None)
        sp.add_argument("--include-degree", action="store_true")
        sp.add_argument("--cap", type=int, default=MATCHING_CAP)

    sp = sub.add_parser("slack", help="slack matrix as CSV (plus OUTPUT.json sidecar)")
    common(sp, graph=False)
    slack_source(sp)
    sp.set_defaults(func=cmd_slack)

    sp = sub.add_parser("bounds", help="nonnegative-rank bounds for a matrix")
    common(sp, graph=False)
    slack_source(sp)
    sp.add_argument("--matrix", type=Path, default=None, help="matrix CSV (default: slack matrix)")
    sp.add_argument("--weights", type=Path, default=None, help="weight CSV; '-inf' marks forbidden cells")
    sp.add_argument("--mode", choices=["exhaustive", "local_search"], default="exhaustive")
    sp.add_argument("--rect-cap", type=int, default=22)
    sp.add_argument("--cover", action="store_true")
    sp.add_argument("--nnmf", type=int, default=None, metavar="R")
    sp.add_argument("--upper", action="store_true", help="smallest exactly certified factorization")
    sp.add_argument("--restarts", type=int, default=8)
    sp.add_argument("--tolerance", type=float, default=1e-4)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("sample", help="3-violation / (4k+3)-violation samples as JSON lines")
    sp.add_argument("--mu", choices=sorted(_MU), required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--family", type=Path, default=None)
    sp.add_argument("-o", "--output", type=Path, default=None)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("family", help="build and exactly check a permutation family")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--retries", type=int, default=10_000)
    sp.add_argument("-o", "--output", type=Path, default=None)
    sp.set_defaults(func=cmd_family)

    sp = sub.add_parser("verify", help="re-check a saved report")
    sp.add_argument("report", type=Path)
    sp.add_argument("--graph", type=Path, default=None)
    sp.add_argument("--family", action="store_true", help="the report is a family file")
    sp.add_argument("--parity", choices=["odd", "even"], default="odd")
    sp.add_argument("-o", "--output", type=Path, default=None)
    sp.set_defaults(func=cmd_verify)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"paritymatch: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, FormatError, FileNotFoundError, IsADirectoryError,
            json.JSONDecodeError, KeyError) as exc:
        print(f"paritymatch: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"paritymatch: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
