"""Command-line front end.

Every subcommand wraps one library call and prints either ``key: value``
lines or, with ``--json``, one JSON object with sorted keys.  Elapsed time
goes to stderr so stdout is byte-identical across runs.

Exit codes: 0 for a value or a passing check, 1 for a failing check, 2 for
usage and input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import exact_linalg as xl
from .errors import (ExactnessFailed, IdentityFailed, NotInImage, NotTorelli, NotTorelliModN,
                     ParseError, SurfaceLieError, TooLarge)
from .free_lie import DEFAULT_MAX_DEGREE

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class CommandResult:
    command: str
    status: str
    payload: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0

    @property
    def exit_code(self) -> int:
        return EXIT_FAIL if self.status == "fail" else EXIT_OK

    def to_json(self) -> str:
        return json.dumps({"command": self.command, "status": self.status, "payload": self.payload},
                          sort_keys=True)

    def to_text(self) -> str:
        lines = [f"command: {self.command}", f"status: {self.status}"]
        for k in sorted(self.payload):
            v = self.payload[k]
            if isinstance(v, (list, tuple)):
                v = " ".join(str(x) for x in v) if all(not isinstance(x, (list, tuple, dict)) for x in v) \
                    else json.dumps(v, sort_keys=True)
            elif isinstance(v, dict):
                v = json.dumps(v, sort_keys=True)
            elif isinstance(v, bool) or v is None:
                v = json.dumps(v)
            lines.append(f"{k}: {v}")
        return "\n".join(lines)


class UsageError(Exception):
    pass


def _ints(v) -> list[int]:
    return [int(x) for x in v]


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# ---- subcommands ------------------------------------------------------------

def cmd_grdim(args) -> CommandResult:
    from .magnus import surface_gr
    from .free_lie import witt_dimension
    gr = surface_gr(args.g, args.n, args.max_degree)
    return CommandResult("grdim", "value", {
        "genus": args.g, "degree": args.n, "rank": gr.rank, "free_rank": witt_dimension(2 * args.g, args.n),
        "torsion_free": all(d == 1 for d in gr.divisors)})


def cmd_tau(args) -> CommandResult:
    from .johnson import johnson_tau, tau_tilde, validate_endo
    from .sp_modules import module_lambda3
    from .words import parse_endo
    phi = parse_endo(_read(args.file))
    mode = "strict" if args.relaxed is None else args.relaxed
    label = "strict" if args.relaxed is None else f"relaxed {args.relaxed}"
    try:
        T = validate_endo(phi, mode, args.max_degree)
    except NotTorelli as exc:
        return CommandResult("tau", "fail", {"mode": label, "error": "NotTorelli",
                                             "condition": exc.condition, "message": str(exc)})
    payload = {"genus": phi.genus, "mode": label, "labels": list(module_lambda3(phi.genus).labels)}
    try:
        payload["tau"] = _ints(johnson_tau(T))
    except NotInImage as exc:
        payload.update(error="NotInImage", message=str(exc), tau_tilde=_ints(tau_tilde(T)))
        return CommandResult("tau", "fail", payload)
    return CommandResult("tau", "value", payload)


def cmd_check(args) -> CommandResult:
    from . import sp_modules as sp
    fn = {"jacobi": sp.jacobi_exactness, "ci": sp.check_ci_identity, "decomp": sp.check_decomposition,
          "lmodh": sp.check_lmodh_roundtrip, "mod2": sp.check_mod2_injection}[args.which]
    if args.which in ("decomp", "mod2") and args.g < 2:
        raise UsageError(f"check {args.which} needs g >= 2")
    try:
        rep = fn(args.g)
    except (IdentityFailed, ExactnessFailed) as exc:
        return CommandResult(f"check {args.which}", "fail",
                             {"genus": args.g, "message": str(exc), "stage": getattr(exc, "stage", None)})
    return CommandResult(f"check {args.which}", "pass" if rep.passed else "fail", rep.details)


def module_generator_actions(genus: int, module: str) -> list:
    """Integer matrices of the transvection generators on H, L or L/H."""
    from .sp_modules import sp_generator_action
    acts = sp_generator_action(genus)
    pick = {"H": lambda a: a.h, "L": lambda a: a.lambda3, "LmodH": lambda a: a.lmodh}[module]
    return [pick(a).matrix for a in acts]


def cmd_invariants(args) -> CommandResult:
    from .finite_coh import invariants_mod_p
    from .sp_modules import build_standard_maps
    m = build_standard_maps(args.g)
    rank = {"H": 2 * args.g, "L": m.c.source.rank, "LmodH": m.p.target.rank}[args.module]
    mats = module_generator_actions(args.g, args.module)
    basis = invariants_mod_p(mats, rank, args.p)
    return CommandResult("invariants", "value", {"genus": args.g, "module": args.module, "p": args.p,
                                                 "rank": rank, "generators": len(mats),
                                                 "dimension": len(basis), "basis": basis})


def cmd_h1(args) -> CommandResult:
    from .finite_coh import h1_bruteforce, parse_group, parse_module
    G = parse_group(_read(args.group))
    M = parse_module(_read(args.module))
    try:
        res = h1_bruteforce(G, M)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return CommandResult("h1", "value", {"order": G.order, "modulus": M.modulus, "rank": M.rank,
                                         "divisors": list(res.divisors), "h1_order": res.order,
                                         "exponent": res.exponent})


def cmd_snf(args) -> CommandResult:
    try:
        a = xl.parse_matrix(_read(args.file))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    snf = xl.smith_normal_form(a)
    payload = {"shape": list(a.shape), "diag": _ints(snf.diag), "rank": snf.rank}
    if args.transforms:
        payload["left"] = [_ints(r) for r in snf.left]
        payload["right"] = [_ints(r) for r in snf.right]
    return CommandResult("snf", "value", payload)


def cmd_corpus(args) -> CommandResult:
    from . import corpus as cp
    path = Path(args.path) if args.path else cp.default_corpus_path()
    try:
        entries = cp.parse_corpus(_read(str(path)))
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    if args.action == "verify":
        try:
            rep = cp.verify_corpus(entries)
        except (NotTorelli, NotInImage) as exc:
            return CommandResult("corpus verify", "fail", {"path": path.name, "message": str(exc)})
        return CommandResult("corpus verify", "pass" if rep.passed else "fail",
                             {"path": path.name, **rep.to_dict()})
    header = cp.CORPUS_HEADER if path == cp.default_corpus_path() else ""
    target = path if args.write else None
    try:
        _, diffs = cp.regenerate_expected(entries, write=target, overwrite=args.overwrite, header=header)
    except FileExistsError as exc:
        raise UsageError(f"{exc}; add --overwrite") from None
    return CommandResult("corpus regenerate", "value", {
        "path": path.name, "written": bool(target), "diffs": len(diffs),
        "changed": [{"id": d.id, "old": None if d.old is None else list(d.old), "new": list(d.new)}
                    for d in diffs]})


def cmd_report(args) -> CommandResult:
    from .report import full_report
    rep = full_report(args.max_degree)
    return CommandResult("report", "pass" if rep["passed"] else "fail", rep)


# ---- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="surfacelie", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="emit one JSON object")
    p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE, help="truncation degree cap")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("grdim", help="rank of the degree-n surface graded piece")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_grdim)

    s = sub.add_parser("tau", help="Johnson tau of an endomorphism file")
    s.add_argument("--file", required=True)
    s.add_argument("--relaxed", type=int, metavar="M", help="validate the relator only through degree M")
    s.set_defaults(func=cmd_tau)

    s = sub.add_parser("check", help="run a module-map identity or exactness check")
    s.add_argument("which", choices=["jacobi", "ci", "decomp", "lmodh", "mod2"])
    s.add_argument("--g", type=int, required=True)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("invariants", help="fixed vectors of the transvection generators mod p")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--module", choices=["H", "L", "LmodH"], required=True)
    s.add_argument("--p", type=int, default=2)
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("h1", help="H^1 of a finite group table with coefficients in a finite module")
    s.add_argument("--group", required=True)
    s.add_argument("--module", required=True)
    s.set_defaults(func=cmd_h1)

    s = sub.add_parser("snf", help="Smith normal form of a matrix file")
    s.add_argument("--file", required=True)
    s.add_argument("--transforms", action="store_true")
    s.set_defaults(func=cmd_snf)

    s = sub.add_parser("corpus", help="verify or regenerate the Torelli corpus")
    s.add_argument("action", choices=["verify", "regenerate"])
    s.add_argument("--path")
    s.add_argument("--write", action="store_true", help="write regenerated values back")
    s.add_argument("--overwrite", action="store_true", help="allow replacing an existing file")
    s.set_defaults(func=cmd_corpus)

    s = sub.add_parser("report", help="run the acceptance battery and print one structured report")
    s.set_defaults(func=cmd_report)
    return p


def _validate_args(args):
    if args.max_degree < 1:
        raise UsageError("--max-degree must be positive")
    for name in ("g", "n"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise UsageError(f"--{name} must be positive")
    p = getattr(args, "p", None)
    if p is not None and (p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1))):
        raise UsageError("--p must be prime")
    r = getattr(args, "relaxed", None)
    if r is not None and not 1 <= r <= args.max_degree:
        raise UsageError("--relaxed must lie between 1 and --max-degree")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    t0 = time.perf_counter()
    try:
        _validate_args(args)
        res = args.func(args)
    except (UsageError, ParseError, TooLarge) as exc:
        print(f"error: {exc}", file=err)
        parser.print_usage(err)
        return EXIT_USAGE
    except (NotTorelliModN, SurfaceLieError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_FAIL
    res.elapsed_ms = (time.perf_counter() - t0) * 1000
    print(res.to_json() if args.json else res.to_text(), file=out)
    print(f"elapsed_ms: {res.elapsed_ms:.1f}", file=err)
    return res.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
