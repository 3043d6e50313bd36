"""Command-line interface: JSON in, certificates and verdicts out.

Exit codes form a triage, because the underlying checks are genuinely
one-sided: 0 for a definitive positive (certificate emitted, identities
verified, curve planar), 1 for a definitive negative (refutation in hand),
2 for inconclusive outcomes (search exhausted, hypotheses inapplicable),
64 for usage errors, 65 for malformed or invalid input files, 70 for
internal inconsistencies that should never happen.

Reports embed full witnesses and bases, so ``verify-report`` can audit a
certificate with no access to the original inputs, through a re-derivation
that shares no code with the search that produced it (plain fraction
Gaussian elimination instead of fraction-free elimination).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from . import algebra as _algebra
from . import clifford as _clifford
from . import distributions as _distributions
from . import frobenius as _frobenius
from . import hullrank as _hullrank
from . import jsonio
from . import planarity as _planarity
from .errors import (
    AffinorRankError,
    InputFormatError,
    MissingCertificate,
)

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_INTERNAL = 70

TOOL_NAME = "affinor-rank"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 by default, which collides with the
    # "inconclusive" outcome; route usage problems to 64 instead.
    def error(self, message):
        raise _UsageError(message)


def _env_seed() -> int:
    raw = os.environ.get("AFFINOR_RANK_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"AFFINOR_RANK_SEED must be an integer, got {raw!r}")


def build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="search seed (default: AFFINOR_RANK_SEED or 0)")
    common.add_argument("--trials", type=int, default=_hullrank.DEFAULT_TRIALS,
                        help="random search trials")
    common.add_argument("--format", choices=("json", "text"), default="json",
                        dest="fmt", help="report format")
    common.add_argument("--out", type=str, default=None,
                        help="write the report to this path instead of stdout")

    parser = _Parser(prog=TOOL_NAME, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_algebra = sub.add_parser("algebra", help="structure constant checks",
                               parents=[common])
    algebra_sub = p_algebra.add_subparsers(dest="subcommand", required=True)
    p_verify = algebra_sub.add_parser("verify", parents=[common],
                                      help="verify unity and associativity")
    p_verify.add_argument("constants", type=str)

    p_rank = sub.add_parser("rank", help="weak/generic rank certification",
                            parents=[common])
    p_rank.add_argument("basis", type=str)
    p_rank.add_argument("--generic", action="store_true",
                        help="run the full generic-rank pipeline")
    p_rank.add_argument("--probe-inversion", action="store_true",
                        help="also sample span elements for invertibility")

    p_frob = sub.add_parser("frobenius", help="Frobenius form detection",
                            parents=[common])
    p_frob.add_argument("constants", type=str)
    p_frob.add_argument("--symbolic-threshold", type=int,
                        default=_frobenius.DEFAULT_SYMBOLIC_THRESHOLD)

    p_cliff = sub.add_parser("clifford", help="Clifford representation builder",
                             parents=[common])
    p_cliff.add_argument("--s", type=int, required=True,
                         help="generators squaring to +E")
    p_cliff.add_argument("--t", type=int, required=True,
                         help="generators squaring to -E")
    p_cliff.add_argument("--emit", type=str, default=None,
                         help="write the basis JSON here")
    p_cliff.add_argument("--check-rank", action="store_true",
                         help="certify the full-span hull witness")

    p_dist = sub.add_parser("distributions", help="projector systems from splittings",
                            parents=[common])
    p_dist.add_argument("--dims", type=str, required=True,
                        help="comma-separated block dimensions, e.g. 2,2")
    p_dist.add_argument("--conjugate", type=str, default=None,
                        help="matrix JSON file with an exact change of basis")
    p_dist.add_argument("--emit", type=str, default=None,
                        help="write the hull basis JSON here")

    p_planar = sub.add_parser("planar", help="curve planarity under a connection",
                              parents=[common])
    p_planar.add_argument("--basis", type=str, required=True)
    p_planar.add_argument("--connection", type=str, required=True)
    p_planar.add_argument("--curve", type=str, required=True)
    p_planar.add_argument("--samples", type=int, default=_planarity.DEFAULT_SAMPLES)
    p_planar.add_argument("--tol", type=float, default=_planarity.DEFAULT_PLANARITY_TOL)

    p_verify_report = sub.add_parser("verify-report", parents=[common],
                                     help="re-verify certificates inside a report")
    p_verify_report.add_argument("report", type=str)

    return parser


# ---------------------------------------------------------------------------
# Command handlers: each returns (exit_code, result_payload)
# ---------------------------------------------------------------------------


def _cmd_algebra_verify(args) -> tuple[int, dict]:
    sc = jsonio.constants_from_json(jsonio.load_json(args.constants), args.constants)
    unity = _algebra.verify_unity(sc)
    assoc = _algebra.verify_associativity(sc)
    ok = unity.ok and assoc.ok
    result = {
        "n": sc.n,
        "unity": unity.to_json(),
        "associativity": assoc.to_json(),
        "valid": ok,
    }
    return (EXIT_POSITIVE if ok else EXIT_NEGATIVE), result


def _cmd_rank(args) -> tuple[int, dict]:
    basis = jsonio.basis_from_json(jsonio.load_json(args.basis), args.basis)
    seed = args.seed if args.seed is not None else _env_seed()
    multiples = _hullrank.scalar_multiple_check(basis)
    result: dict = {
        "m": basis.m,
        "n": basis.n,
        "scalar_multiples_of_identity": [
            {"index": i + 1, "is_multiple": flag, "q": None if q is None else str(q)}
            for i, (flag, q) in enumerate(multiples)
        ],
        "evidence": {"trials": args.trials, "seed": seed},
    }
    if args.probe_inversion:
        probe = _hullrank.inversion_probe(basis, args.trials, seed)
        result["inversion_probe"] = probe.to_json()
    if args.generic:
        outcome = _hullrank.certify_generic_rank(basis, args.trials, seed)
        theorems = [
            "algebra_closure",
            "dimension_inequality",
            "witness_existence_implies_weak_generic_rank",
            "pair_span_witness",
        ]
    else:
        outcome = _hullrank.weak_rank_witness(basis, args.trials, seed)
        theorems = ["witness_existence_implies_weak_generic_rank"]
    if isinstance(outcome, _hullrank.RankCertificate):
        result["outcome"] = "certified"
        result["kind"] = outcome.kind
        result["claimed_rank"] = outcome.claimed_rank
        result["certificate"] = outcome.to_json()
        result["applicable_theorems"] = theorems
        return EXIT_POSITIVE, result
    result.update(outcome.to_json())
    if isinstance(outcome, _hullrank.NoWitnessFound) and outcome.definitive:
        return EXIT_NEGATIVE, result
    return EXIT_INCONCLUSIVE, result


def _cmd_frobenius(args) -> tuple[int, dict]:
    sc = jsonio.constants_from_json(jsonio.load_json(args.constants), args.constants)
    seed = args.seed if args.seed is not None else _env_seed()
    report = _frobenius.frobenius_iff_generic_rank(
        sc, trials=args.trials, seed=seed, symbolic_threshold=args.symbolic_threshold
    )
    result = report.to_json()
    if report.agree is False:
        return EXIT_INTERNAL, result
    status = report.frobenius.status
    if status == "frobenius":
        return EXIT_POSITIVE, result
    if status == "not_frobenius":
        return EXIT_NEGATIVE, result
    return EXIT_INCONCLUSIVE, result


def _cmd_clifford(args) -> tuple[int, dict]:
    sig = _clifford.CliffordSignature(args.s, args.t)
    cb = _clifford.build_clifford(sig)
    relations = _clifford.verify_clifford_relations(cb)
    seed = args.seed if args.seed is not None else _env_seed()
    result: dict = {
        "signature": {"s": sig.s, "t": sig.t},
        "dimension": sig.dim,
        "labels": list(cb.labels),
        "relations": relations.to_json(),
        # basis position 1..k+1 holds what is often indexed 0..k elsewhere:
        # the unity occupies position 1.
        "index_note": "basis indices are 1-based with the unity first",
    }
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            json.dump(cb.to_json(), fh, indent=2, sort_keys=True)
        result["emitted"] = args.emit
    if args.check_rank:
        cert = _clifford.clifford_rank_theorem_check(sig, args.trials, seed)
        result["rank_certificate"] = cert.to_json()
        result["claimed_rank"] = cert.claimed_rank
    return (EXIT_POSITIVE if relations.ok else EXIT_NEGATIVE), result


def _cmd_distributions(args) -> tuple[int, dict]:
    try:
        dims = tuple(int(part) for part in args.dims.split(","))
    except ValueError:
        raise _UsageError(f"--dims must be comma-separated integers, got {args.dims!r}")
    conjugate = None
    if args.conjugate:
        conjugate = jsonio.matrix_from_json(
            jsonio.load_json(args.conjugate), args.conjugate
        )
    sp = _distributions.Splitting(sum(dims), dims, conjugate)
    system = _distributions.projectors_from_splitting(sp)
    verification = _distributions.verify_complete_system(system)
    seed = args.seed if args.seed is not None else _env_seed()
    rank_report = _distributions.distribution_rank_check(system, args.trials, seed)
    result = {
        "m": sp.m,
        "block_dims": list(dims),
        "n": sp.n,
        "verification": verification.to_json(),
        "rank": rank_report.to_json(),
    }
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            json.dump(system.affinor_basis().to_json(), fh, indent=2, sort_keys=True)
        result["emitted"] = args.emit
    if not verification.ok:
        return EXIT_NEGATIVE, result
    generic = rank_report.generic
    if isinstance(generic, _hullrank.NoWitnessFound) and not generic.definitive:
        return EXIT_INCONCLUSIVE, result
    return EXIT_POSITIVE, result


def _cmd_planar(args) -> tuple[int, dict]:
    basis = jsonio.basis_from_json(jsonio.load_json(args.basis), args.basis)
    conn = jsonio.connection_from_json(jsonio.load_json(args.connection), args.connection)
    curve = jsonio.curve_from_json(jsonio.load_json(args.curve), args.curve)
    report = _planarity.planarity_check(basis, conn, curve, args.samples, args.tol)
    result = report.to_json()
    if report.verdict == "planar":
        return EXIT_POSITIVE, result
    if report.verdict == "not_planar":
        return EXIT_NEGATIVE, result
    return EXIT_INCONCLUSIVE, result


def _cmd_verify_report(args) -> tuple[int, dict]:
    ok, details = verify_certificate_detailed(args.report)
    return (EXIT_POSITIVE if ok else EXIT_NEGATIVE), {
        "verified": ok,
        "certificates_checked": len(details),
        "details": details,
    }


# ---------------------------------------------------------------------------
# Independent certificate verification
# ---------------------------------------------------------------------------


def _fresh_rank(rows: list[list[Fraction]]) -> int:
    """Plain fraction Gaussian elimination, separate from the search path."""
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    rank = 0
    for c in range(ncols):
        pivot = None
        for i in range(rank, nrows):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = Fraction(1) / rows[rank][c]
        rows[rank] = [v * inv for v in rows[rank]]
        for i in range(rank + 1, nrows):
            f = rows[i][c]
            if f != 0:
                rows[i] = [u - f * v for u, v in zip(rows[i], rows[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def _fresh_det_nonzero(rows: list[list[Fraction]]) -> bool:
    return _fresh_rank(rows) == len(rows)


def _mats_from_basis_json(basis_json: dict, where: str) -> list[list[list[Fraction]]]:
    mats = []
    for mj in basis_json["mats"]:
        mats.append(
            [
                [jsonio.exact_scalar_from_json(v, where, "entries") for v in row]
                for row in mj["entries"]
            ]
        )
    return mats


def _apply(mat: list[list[Fraction]], vec: list[Fraction]) -> list[Fraction]:
    return [sum(a * x for a, x in zip(row, vec)) for row in mat]


def _matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _verify_certificate_dict(cert: dict, where: str = "<report>") -> tuple[bool, str]:
    """Audit one embedded certificate from scratch.

    Recomputes the hull of the stored witness with fresh matrix-vector
    loops, ranks it by plain Gaussian elimination, rechecks the pivot
    minor, and for generic certificates also rechecks the closure
    equations, the dimension inequality and the pair witness.
    """
    try:
        kind = cert["kind"]
        claimed = cert["claimed_rank"]
        basis_json = cert["basis"]
        mats = _mats_from_basis_json(basis_json, where)
        witness = [jsonio.exact_scalar_from_json(v, where, "witness") for v in cert["witness"]]
        m = basis_json["m"]
        n = basis_json["n"]
    except (KeyError, TypeError) as exc:
        return False, f"malformed certificate: {exc!r}"
    if len(mats) != n or len(witness) != m:
        return False, "certificate dimensions are inconsistent"
    if kind not in ("weak", "generic"):
        return False, f"unknown certificate kind {kind!r}"
    if claimed != n:
        return False, f"claimed rank {claimed} differs from span rank {n}"
    hull_rows = [_apply(mat, witness) for mat in mats]
    recomputed = _fresh_rank(hull_rows)
    if recomputed != claimed:
        return False, f"hull rank of the witness is {recomputed}, claim was {claimed}"
    pivot_rows = cert.get("pivot_rows", [])
    pivot_cols = cert.get("pivot_cols", [])
    if len(pivot_rows) != claimed or len(pivot_cols) != claimed:
        return False, "pivot sets do not match the claimed rank"
    minor = [[hull_rows[i][j] for j in pivot_cols] for i in pivot_rows]
    if claimed and not _fresh_det_nonzero(minor):
        return False, "certified pivot minor is singular"
    if kind == "generic":
        closure = cert.get("closure")
        pair = cert.get("pair")
        inequality = cert.get("inequality")
        if closure is None or pair is None or inequality is None:
            return False, "generic certificate is missing closure, pair or inequality"
        if inequality["two_ell"] != 2 * n or inequality["two_ell"] > inequality["m"]:
            return False, "dimension inequality record is wrong"
        if inequality["m"] != m:
            return False, "dimension inequality module size is wrong"
        c = closure["C"]
        for i in range(n):
            for j in range(n):
                prod = _matmul(mats[i], mats[j])
                combo = [[Fraction(0)] * m for _ in range(m)]
                for k in range(n):
                    coeff = jsonio.exact_scalar_from_json(c[i][j][k], where, "closure")
                    if coeff == 0:
                        continue
                    for r in range(m):
                        for s in range(m):
                            combo[r][s] += coeff * mats[k][r][s]
                if prod != combo:
                    return False, f"closure equation fails at pair ({i}, {j})"
        x = [jsonio.exact_scalar_from_json(v, where, "pair.x") for v in pair["x"]]
        y = [jsonio.exact_scalar_from_json(v, where, "pair.y") for v in pair["y"]]
        stacked = [_apply(mat, x) for mat in mats] + [_apply(mat, y) for mat in mats]
        pair_rank = _fresh_rank(stacked)
        if pair_rank != 2 * n or pair["dim"] != 2 * n:
            return False, f"pair span rank is {pair_rank}, expected {2 * n}"
    return True, "ok"


def _collect_certificates(node) -> list[dict]:
    found = []
    if isinstance(node, dict):
        keys = {"kind", "claimed_rank", "witness", "basis"}
        if keys.issubset(node.keys()):
            found.append(node)
        else:
            for v in node.values():
                found.extend(_collect_certificates(v))
    elif isinstance(node, list):
        for v in node:
            found.extend(_collect_certificates(v))
    return found


def verify_certificate_detailed(report_path) -> tuple[bool, list[dict]]:
    report = jsonio.load_json(report_path)
    certs = _collect_certificates(report)
    if not certs:
        raise MissingCertificate(f"{report_path}: no rank certificate found in report")
    details = []
    all_ok = True
    for idx, cert in enumerate(certs):
        ok, message = _verify_certificate_dict(cert, str(report_path))
        details.append({"index": idx, "kind": cert.get("kind"), "ok": ok, "message": message})
        all_ok = all_ok and ok
    return all_ok, details


def verify_certificate(report_path) -> bool:
    """Re-verify every certificate embedded in a report file."""
    ok, _ = verify_certificate_detailed(report_path)
    return ok


# ---------------------------------------------------------------------------
# Report assembly and entry point
# ---------------------------------------------------------------------------


_HANDLERS = {
    "algebra": _cmd_algebra_verify,
    "rank": _cmd_rank,
    "frobenius": _cmd_frobenius,
    "clifford": _cmd_clifford,
    "distributions": _cmd_distributions,
    "planar": _cmd_planar,
    "verify-report": _cmd_verify_report,
}


def _config_echo(args) -> dict:
    skip = {"fmt", "out", "command", "subcommand"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or value is None:
            continue
        out[key] = value
    return out


def _summary_lines(command: str, code: int, result: dict) -> list[str]:
    lines = [f"{TOOL_NAME} {command}: exit {code}"]
    for key in ("outcome", "verdict", "valid", "status", "verified", "claimed_rank",
                "kind", "max_residual", "agree"):
        if key in result:
            lines.append(f"  {key}: {result[key]}")
    if "frobenius" in result and isinstance(result["frobenius"], dict):
        lines.append(f"  frobenius: {result['frobenius'].get('status')}")
    if "rank" in result and isinstance(result["rank"], dict):
        weak = result["rank"].get("weak", {})
        lines.append(f"  weak rank: {weak.get('claimed_rank')}")
        generic = result["rank"].get("generic", {})
        lines.append(
            f"  generic: {generic.get('outcome', 'certified (rank ' + str(generic.get('claimed_rank')) + ')')}"
        )
    if "counterexample" in result and result["counterexample"]:
        ce = result["counterexample"]
        lines.append(f"  counterexample at t = {ce['t']} (residual {ce['residual']:.3g})")
    if "relations" in result:
        lines.append(f"  relations ok: {result['relations']['ok']}")
    return lines


def _validate_knobs(args):
    if getattr(args, "trials", 1) < 1:
        raise _UsageError("--trials must be at least 1")
    if getattr(args, "tol", 1.0) <= 0:
        raise _UsageError("--tol must be positive")
    if getattr(args, "samples", 5) < 5:
        raise _UsageError("--samples must be at least 5")
    if getattr(args, "symbolic_threshold", 0) < 0:
        raise _UsageError("--symbolic-threshold must be nonnegative")


def dispatch(args) -> tuple[int, dict]:
    """Run one parsed command and wrap its payload in the report envelope."""
    _validate_knobs(args)
    handler = _HANDLERS[args.command]
    start = time.monotonic()
    code, result = handler(args)
    elapsed = time.monotonic() - start
    report = {
        "tool": TOOL_NAME,
        "version": __version__,
        "command": args.command,
        "config": _config_echo(args),
        "result": result,
        "exit_code": code,
        "wall_time_s": elapsed,
    }
    return code, report


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"{TOOL_NAME}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        code, report = dispatch(args)
    except _UsageError as exc:
        print(f"{TOOL_NAME}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputFormatError as exc:
        print(f"{TOOL_NAME}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except MissingCertificate as exc:
        print(f"{TOOL_NAME}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except AffinorRankError as exc:
        print(f"{TOOL_NAME}: {exc}", file=sys.stderr)
        return EXIT_DATA
    if args.fmt == "json":
        rendered = json.dumps(report, indent=2, sort_keys=True)
    else:
        rendered = "\n".join(_summary_lines(args.command, code, report["result"]))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered + "\n")
    else:
        print(rendered)
    return code


if __name__ == "__main__":
    sys.exit(main())
