"""Command-line front end.

Every subcommand prints a report (JSON with ``--json``). Exit codes: 0 ED /
success, 1 NotED (or a failed check), 2 Unknown, 64 usage error, 65 bad
input, 75 budget exceeded, 70 internal failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .decision import (
    NOT_ED,
    center_refutation,
    decide_ed,
    homogroup_refutation,
    ideal_refutation,
    recheck,
    size_bound_check,
)
from .equations import DEFAULT_SOLVE_BUDGET, enumerate_terms, is_gamma_valued, solve
from .errors import (
    BudgetExceeded,
    InputError,
    NotAnEquationalDomain,
    ReesDomainError,
    SingularMatrix,
    ZeroDivisorObstruction,
)
from .groups import FiniteGroup, zero_divisors
from .io import (
    dump_points,
    dump_system,
    file_digest,
    load_group,
    load_points,
    load_structure,
    load_system,
)
from .points import FullSpace, MsemSpace
from .semigroups import (
    FiniteSemigroup,
    ReesSemigroup,
    StarSemigroup,
    adjoin_identity,
    center,
    is_group_case,
    is_homogroup,
    is_nonsingular,
    kernel,
    kernel_group,
)
from .synthesis import (
    DEFAULT_SYNTH_BUDGET,
    DEFAULT_VERIFY_BUDGET,
    msem_system,
    point_killer,
    separate,
    synthesize_system,
    verify_singular_obstruction,
)
from .terms import Evaluator, node_count, render_shared, render_term

EXIT_OK, EXIT_NOT_ED, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_DATA, EXIT_SOFTWARE, EXIT_BUDGET = 64, 65, 70, 75
VERDICT_EXIT = {"ED": EXIT_OK, "NotED": EXIT_NOT_ED, "Unknown": EXIT_UNKNOWN}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class Run:
    """Collects inputs and results for one invocation."""

    def __init__(self, args: argparse.Namespace, argv: Sequence[str]):
        self.args = args
        self.argv = list(argv)
        self.inputs: dict[str, Any] = {}

    def note_input(self, label: str, ref: str) -> None:
        self.inputs[label] = {"ref": ref, "sha256": file_digest(ref)}

    def structure(self, star: bool = False):
        if not self.args.semigroup:
            raise UsageError("--semigroup is required")
        self.note_input("semigroup", self.args.semigroup)
        S = load_structure(self.args.semigroup)
        if star or getattr(self.args, "star", False):
            if not isinstance(S, ReesSemigroup):
                raise InputError("--star needs a Rees semigroup")
            S = adjoin_identity(S)
        return S

    def report(self, result: dict, exit_code: int, extra: dict | None = None) -> tuple[dict, int]:
        rep = {
            "tool": "reesdomain",
            "version": __version__,
            "command": self.argv,
            "inputs": self.inputs,
            "seed": self.args.seed,
            "result": result,
        }
        if extra:
            rep.update(extra)
        return rep, exit_code


def _element(S, text: str) -> int:
    if isinstance(S, FiniteSemigroup):
        return S.index(text.strip())
    return S.parse_element(text)


def _point(S, text: str) -> tuple[int, ...]:
    text = text.strip()
    if text.startswith("["):
        try:
            items = json.loads(text)
        except json.JSONDecodeError:
            items = None
        if isinstance(items, list):
            return tuple(_element(S, str(v)) for v in items)
    return (_element(S, text),)


def _kind(S) -> str:
    if isinstance(S, StarSemigroup):
        return "star"
    if isinstance(S, ReesSemigroup):
        return "rees"
    if isinstance(S, FiniteGroup):
        return "group"
    return "table"


def cmd_validate(run: Run) -> tuple[dict, int]:
    a = run.args
    if a.group:
        run.note_input("group", a.group)
        G = load_group(a.group)
        return run.report({"kind": "group", "order": G.order, "abelian": G.is_abelian(), "names": list(G.names)}, 0)
    S = run.structure()
    res: dict[str, Any] = {"kind": _kind(S), "order": S.order}
    if isinstance(S, (ReesSemigroup, StarSemigroup)):
        R = S.base if isinstance(S, StarSemigroup) else S
        ok, pair = is_nonsingular(R.matrix)
        res.update({
            "group_order": R.group.order,
            "lambda": R.n_lambda,
            "i": R.n_i,
            "normalized": True,
            "nonsingular": ok,
            "equal_pair": list(pair) if pair else None,
            "group_case": is_group_case(R),
        })
    return run.report(res, 0)


def cmd_mul(run: Run) -> tuple[dict, int]:
    S = run.structure()
    a, b = _element(S, run.args.a), _element(S, run.args.b)
    return run.report({"a": S.name(a), "b": S.name(b), "product": S.name(S.mul(a, b))}, 0)


def _decision_result(S, cert) -> dict:
    res = {"certificate": cert.to_dict(), "recheck": recheck(cert, S) if cert.evidence is not None else None}
    if isinstance(S, ReesSemigroup):
        bound = size_bound_check(S)
        res["size_bound"] = None if bound is None else {"clause": bound.clause, "satisfied": list(bound.satisfied)}
        res["zero_divisor_pairs"] = len(zero_divisors(S.group))
    return res


def cmd_check_ed(run: Run) -> tuple[dict, int]:
    S = run.structure()
    cert = decide_ed(S)
    return run.report(_decision_result(S, cert), VERDICT_EXIT[cert.verdict])


def cmd_check_ed_star(run: Run) -> tuple[dict, int]:
    S = run.structure(star=True)
    cert = decide_ed(S)
    return run.report(_decision_result(S, cert), VERDICT_EXIT[cert.verdict])


def cmd_separate(run: Run) -> tuple[dict, int]:
    S = run.structure()
    if isinstance(S, FiniteSemigroup):
        raise InputError("separate needs a Rees semigroup")
    a, b = _element(S, run.args.a), _element(S, run.args.b)
    t = separate(S, a, b)
    values = Evaluator(S, np.arange(S.order).reshape(-1, 1)).values(t)
    check = is_gamma_valued(t, S, "all", 1)
    return run.report({
        "term": render_term(t, S),
        "values": {S.name(a): S.name(int(values[a])), S.name(b): S.name(int(values[b]))},
        "table": {S.name(k): S.name(int(values[k])) for k in range(S.order)} if run.args.full_table else None,
        "gamma_valued": check.valued,
        "separates": bool(values[a] != values[b]),
    }, 0)


def _domain(run: Run, S, P: tuple[int, ...]):
    a = run.args
    if a.msem:
        return MsemSpace(S.order, [P])
    if a.points:
        run.note_input("points", a.points)
        return load_points(a.points, S, len(P))
    return FullSpace(S.order, len(P))


def _system_payload(system, S) -> dict:
    return dump_system(system, S)


def cmd_killer(run: Run) -> tuple[dict, int]:
    S = run.structure()
    if not run.args.point:
        raise UsageError("--point is required")
    P = _point(S, run.args.point)
    M = _domain(run, S, P)
    k = point_killer(S, P, M, run.args.verify_budget, run.args.seed)
    shared, (text,) = render_shared([k.term], S)
    return run.report({
        "target": [S.name(p) for p in P],
        "shared": shared,
        "term": text,
        "dag_nodes": node_count(k.term),
        "flattened_length": str(k.term.flat_len),
        "verification": k.report,
    }, 0 if k.report["passed"] else EXIT_NOT_ED)


def _summarize(reports: list[dict]) -> dict:
    return {
        "killers": len(reports),
        "all_passed": all(r["passed"] for r in reports),
        "modes": sorted({r["mode"] for r in reports}),
        "points_checked": sum(r["checked"] for r in reports),
    }


def cmd_synthesize(run: Run) -> tuple[dict, int]:
    S = run.structure()
    if not run.args.points:
        raise UsageError("--points is required")
    run.note_input("points", run.args.points)
    M = load_points(run.args.points, S, run.args.num_vars)
    reports: list[dict] = []
    system = synthesize_system(S, M, M.arity, run.args.budget or DEFAULT_SYNTH_BUDGET,
                               run.args.verify_budget, run.args.seed, reports)
    payload = _system_payload(system, S)
    if run.args.out:
        Path(run.args.out).write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    return run.report({"system": payload, "equations": len(system), "verification": _summarize(reports)}, 0)


def cmd_solve(run: Run) -> tuple[dict, int]:
    S = run.structure()
    if not run.args.system:
        raise UsageError("--system is required")
    run.note_input("system", run.args.system)
    system = load_system(run.args.system, S)
    sol = solve(system, S, run.args.budget or DEFAULT_SOLVE_BUDGET)
    points = dump_points(sol, S)
    if run.args.out:
        Path(run.args.out).write_text(json.dumps(points, indent=1) + "\n")
    return run.report({"points": points, "count": sol.size, "num_vars": system.num_vars}, 0)


def cmd_msem(run: Run) -> tuple[dict, int]:
    S = run.structure()
    a = run.args
    budget = a.budget or DEFAULT_SYNTH_BUDGET
    targets = None
    if a.points:
        run.note_input("points", a.points)
        targets = list(load_points(a.points, S, 4))
    elif a.count:
        rng = np.random.default_rng(a.seed)
        targets = []
        while len(targets) < a.count:
            p = tuple(int(v) for v in rng.integers(0, S.order, size=4))
            if not MsemSpace.in_msem(p) and p not in targets:
                targets.append(p)
    reports: list[dict] = []
    system = msem_system(S, targets, budget, a.verify_budget, a.seed, reports)
    return run.report({
        "system": _system_payload(system, S),
        "equations": len(system),
        "targets": None if targets is None else [[S.name(v) for v in p] for p in targets],
        "verification": reports,
    }, 0 if all(r["passed"] for r in reports) else EXIT_NOT_ED)


def cmd_obstruction(run: Run) -> tuple[dict, int]:
    S = run.structure()
    if not isinstance(S, ReesSemigroup):
        raise InputError("obstruction needs a Rees semigroup")
    if None in (run.args.kind, run.args.idx1, run.args.idx2):
        raise UsageError("--kind, --idx1 and --idx2 are required")
    rep = verify_singular_obstruction(S, run.args.idx1, run.args.idx2, run.args.kind, run.args.max_len,
                                      run.args.budget or 10_000_000)
    if rep["counterexample"] is not None:
        rep["counterexample"]["term"] = render_term(rep["counterexample"]["term"], S)
    return run.report(rep, 0 if rep["passed"] else EXIT_NOT_ED)


def _witness(S, w) -> dict | None:
    if w is None:
        return None
    from dataclasses import asdict

    from .decision import EdCertificate

    out = {"kind": w.kind, **asdict(w)}
    for key in ("e", "a", "generator"):
        if out.get(key) is not None:
            out[key] = S.name(out[key])
    out["recheck"] = recheck(EdCertificate(NOT_ED, w), S)
    return out


def cmd_center_refute(run: Run) -> tuple[dict, int]:
    S = run.structure()
    res: dict[str, Any] = {
        "center": sorted(S.name(z) for z in sorted(center(S))),
        "center_witness": _witness(S, center_refutation(S)),
        "ideal_witness": _witness(S, ideal_refutation(S)),
    }
    homo = is_homogroup(S)
    res["homogroup"] = homo
    res["homogroup_witness"] = _witness(S, homogroup_refutation(S)) if homo else None
    refuted = any(res[k] is not None for k in ("center_witness", "ideal_witness", "homogroup_witness"))
    return run.report(res, EXIT_NOT_ED if refuted else EXIT_UNKNOWN)


def cmd_kernel(run: Run) -> tuple[dict, int]:
    S = run.structure()
    K = kernel(S)
    found = kernel_group(S)
    return run.report({
        "kernel": [S.name(k) for k in sorted(K)],
        "size": len(K),
        "simple": len(K) == S.order,
        "homogroup": found is not None,
        "kernel_identity": S.name(found[1][0]) if found else None,
    }, 0)


def cmd_enumerate_terms(run: Run) -> tuple[dict, int]:
    S = run.structure()
    a = run.args
    terms = []
    count = 0
    for t in enumerate_terms(S, a.num_vars or 1, a.max_len, a.budget or 10_000_000):
        if count < a.limit:
            terms.append(render_term(t, S))
        count += 1
    return run.report({"count": count, "terms": terms, "truncated": count > a.limit}, 0)


COMMANDS = {
    "validate": cmd_validate,
    "mul": cmd_mul,
    "check-ed": cmd_check_ed,
    "check-ed-star": cmd_check_ed_star,
    "separate": cmd_separate,
    "killer": cmd_killer,
    "synthesize": cmd_synthesize,
    "solve": cmd_solve,
    "msem": cmd_msem,
    "obstruction": cmd_obstruction,
    "center-refute": cmd_center_refute,
    "kernel": cmd_kernel,
    "enumerate-terms": cmd_enumerate_terms,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--semigroup", help="Rees or Cayley-table JSON file, or a bundled fixture name")
    common.add_argument("--group", help="group JSON file (validate only)")
    common.add_argument("--points", help="point-set JSON file")
    common.add_argument("--system", help="equation-system JSON file")
    common.add_argument("--out", help="also write the produced artifact to this file")
    common.add_argument("--a", help="first element")
    common.add_argument("--b", help="second element")
    common.add_argument("--point", help="target point: element name or JSON array of names")
    common.add_argument("--star", action="store_true", help="work in the identity-adjoined monoid")
    common.add_argument("--msem", action="store_true", help="killer domain is M_sem plus the target")
    common.add_argument("--kind", choices=["row", "column"])
    common.add_argument("--idx1", type=int)
    common.add_argument("--idx2", type=int)
    common.add_argument("--max-len", type=int, default=4)
    common.add_argument("--num-vars", type=int)
    common.add_argument("--count", type=int, help="number of random targets (msem)")
    common.add_argument("--limit", type=int, default=1000, help="terms to list (enumerate-terms)")
    common.add_argument("--full-table", action="store_true", help="list the separating term's values")
    common.add_argument("--budget", type=int)
    common.add_argument("--verify-budget", type=int, default=DEFAULT_VERIFY_BUDGET)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1, help="worker cap (evaluation is vectorised in-process)")
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--timing", action="store_true", help="add wall time (makes reports non-reproducible)")

    parser = _Parser(prog="reesdomain", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"reesdomain {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _print(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=1, sort_keys=True))
        return
    res = report.get("result", {})
    for key in sorted(res):
        value = res[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
            if len(value) > 2000:
                value = value[:2000] + " ..."
        print(f"{key}: {value}")
    if "error" in report:
        print(f"error: {report['error']}")


def run(argv: Sequence[str] | None = None) -> tuple[dict, int]:
    """Execute a command and return (report, exit code) without printing."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required")
        r = Run(args, argv)
        start = time.perf_counter()
        report, code = COMMANDS[args.command](r)
        if args.timing:
            report["wall_time"] = round(time.perf_counter() - start, 6)
        return report, code
    except UsageError as exc:
        return {"tool": "reesdomain", "command": argv, "error": str(exc)}, EXIT_USAGE
    except BudgetExceeded as exc:
        return {"tool": "reesdomain", "command": argv, "error": str(exc)}, EXIT_BUDGET
    except (NotAnEquationalDomain, ZeroDivisorObstruction) as exc:
        out = {"tool": "reesdomain", "command": argv, "error": str(exc)}
        if isinstance(exc, NotAnEquationalDomain):
            out["certificate"] = exc.certificate.to_dict()
        return out, EXIT_NOT_ED
    except (InputError, SingularMatrix) as exc:
        return {"tool": "reesdomain", "command": argv, "error": str(exc)}, EXIT_DATA
    except ReesDomainError as exc:
        return {"tool": "reesdomain", "command": argv, "error": str(exc)}, EXIT_SOFTWARE


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    report, code = run(argv)
    _print(report, "--json" in argv)
    if "error" in report:
        print(report["error"], file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
