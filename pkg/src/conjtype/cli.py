"""Command line interface: ``conjtype <subcommand>``.

Exit codes: 0 success / isoclinic / verified, 1 definite negative,
2 inconclusive or incomplete, 64 usage or parse errors.  The environment
variable CONJTYPE_BUDGET replaces the default budget of ``verify`` and
``isoclinic``.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .canonicalize import CanonError, canonicalize
from .field import FieldError, is_prime
from .forms import (
    BudgetError,
    FormError,
    breadth_profile,
    conjugate_type,
    full_lambda2,
    heisenberg_ext,
    is_camina,
    radical,
)
from .group_model import GroupModel, structural_report
from .harness import SWEEP_BUDGET, TARGETS, VerificationError, run_verification
from .isoclinism import SEARCH_BUDGET, find_isoclinism
from .linalg import DTYPE, LinAlgError, Subspace, inverse, is_invertible

EXIT_OK, EXIT_NEGATIVE, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env_budget(default: int) -> int:
    raw = os.environ.get("CONJTYPE_BUDGET")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"CONJTYPE_BUDGET={raw!r} is not an integer") from None
    if value <= 0:
        raise UsageError("CONJTYPE_BUDGET must be positive")
    return value


def _read_model(path: str) -> GroupModel:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return GroupModel.from_text(text)


def parse_subspace(spec: str, p: int, ambient: int) -> Subspace:
    """``"1,0,0,0,0,1;0,1,0,0,2,0"`` -> Subspace of GF(p)^ambient."""
    try:
        rows = [[int(t) for t in part.split(",")] for part in spec.split(";") if part.strip()]
    except ValueError:
        raise UsageError(f"bad subspace spec {spec!r}") from None
    if not rows or any(len(r) != ambient for r in rows):
        raise UsageError(f"each vector in the subspace spec needs {ambient} entries")
    return Subspace.from_rows(np.array(rows, dtype=DTYPE), p, ambient)


def _fmt_type(ct) -> str:
    return "{" + ", ".join(str(c) for c in sorted(ct)) + "}"


def _summary(model: GroupModel) -> list[str]:
    B = model.form
    p, n, m = B.p, B.dim_v, B.dim_w
    lines = [
        f"order {p}^{n + m} = {p ** (n + m)}",
        f"dimV {n}",
        f"dimW {m}",
        f"|G'| {p}^{B.image_rank()}",
    ]
    try:
        rep = structural_report(model)
        lines.append(f"special {'yes' if rep['special'] else 'no'}")
        lines.append(f"exponent {rep['exponent']}")
    except BudgetError:
        special = radical(B).dim == 0 and B.is_spanning()
        lines.append(f"special {'yes' if special else 'no'} (form-level)")
        lines.append("exponent not computed (element budget)")
    lines.append(f"conjugate type {_fmt_type(conjugate_type(B))}")
    if m:
        lines.append(f"camina {'yes' if is_camina(B) else 'no'}")
    return lines


def cmd_construct(args) -> int:
    if args.kind == "from-file":
        if not args.file:
            raise UsageError("construct from-file needs a FILE argument")
        model = _read_model(args.file)
    else:
        if args.p is None or not is_prime(args.p):
            raise UsageError("--p must be a prime")
        if args.kind == "g_r":
            if args.r is None or args.r < 1:
                raise UsageError("construct g_r needs --r >= 1")
            model = GroupModel(full_lambda2(args.r + 1, args.p))
        else:
            if args.m is None or args.m < 1:
                raise UsageError("construct heisenberg needs --m >= 1")
            model = GroupModel(heisenberg_ext(args.p, args.m))
    text = model.to_text()
    summary = "".join(f"# {line}\n" for line in _summary(model))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        sys.stdout.write(summary + f"# written to {args.out}\n")
    else:
        # comments keep stdout a valid group file
        sys.stdout.write(summary + text)
    return EXIT_OK


def cmd_conjtype(args) -> int:
    B = _read_model(args.file).form
    print(f"conjugate type {_fmt_type(conjugate_type(B))}")
    prof = breadth_profile(B)
    print("breadth profile " + " ".join(f"{b}:{c}" for b, c in sorted(prof.items())))
    return EXIT_OK


def cmd_camina(args) -> int:
    B = _read_model(args.file).form
    if B.dim_w == 0:
        print("camina no (abelian)")
        return EXIT_NEGATIVE
    ok = is_camina(B)
    print(f"camina {'yes' if ok else 'no'}")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_canonicalize(args) -> int:
    B = _read_model(args.file).form
    n, p = B.dim_v, B.p
    full = full_lambda2(n, p)
    U = parse_subspace(args.subspace, p, B.dim_w)
    if B == full:
        K = U
    else:
        S = B.pair_values()
        if S.shape[0] != S.shape[1] or not is_invertible(S, p):
            raise UsageError("canonicalize needs a form whose pair values form a basis of W")
        # B(x, y) = S^T (x ^ y): pull U back to Lambda^2 coordinates
        K = U.image(inverse(S.T, p))
        print("# subspace translated to Lambda^2 coordinates")
    res = canonicalize(full, K)
    if not res.verify():
        raise AssertionError("reducer produced an unverifiable result")
    sys.stdout.write(res.to_text())
    return EXIT_OK if res.accepted else EXIT_NEGATIVE


def cmd_isoclinic(args) -> int:
    a = _read_model(args.a).form
    b = _read_model(args.b).form
    budget = args.budget if args.budget is not None else _env_budget(SEARCH_BUDGET)
    if a.p != b.p:
        print("not_isoclinic: different primes")
        return EXIT_NEGATIVE
    res = find_isoclinism(a, b, budget)
    print(f"{res.status}: {res.reason}")
    if res.certificate is not None:
        sys.stdout.write(res.certificate.to_text())
    return res.exit_code


def cmd_verify(args) -> int:
    budget = args.budget if args.budget is not None else _env_budget(SWEEP_BUDGET)
    try:
        report = run_verification(args.target, args.p, args.n, budget)
    except VerificationError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(report.to_json())
    if args.format == "json":
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.to_text())
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="conjtype", description="Class-2 p-groups of conjugate type {1, p^3}.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="build a group and print its invariants")
    c.add_argument("kind", choices=["g_r", "heisenberg", "from-file"])
    c.add_argument("file", nargs="?", help="group file for from-file")
    c.add_argument("--p", type=int)
    c.add_argument("--r", type=int, help="g_r: r + 1 generators")
    c.add_argument("--m", type=int, help="heisenberg: extension degree")
    c.add_argument("--out", help="write the group file here instead of stdout")
    c.set_defaults(func=cmd_construct)

    c = sub.add_parser("conjtype", help="conjugate type and breadth census")
    c.add_argument("file")
    c.set_defaults(func=cmd_conjtype)

    c = sub.add_parser("camina", help="exit 0 iff the group is Camina")
    c.add_argument("file")
    c.set_defaults(func=cmd_camina)

    c = sub.add_parser("canonicalize", help="normal form of a central line or plane")
    c.add_argument("file")
    c.add_argument("--subspace", required=True, help='W-vectors, e.g. "1,0,0,0,0,1;0,1,0,0,2,0"')
    c.set_defaults(func=cmd_canonicalize)

    c = sub.add_parser("isoclinic", help="decide isoclinism of two groups")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--budget", type=int, help=f"search nodes (default {SEARCH_BUDGET})")
    c.set_defaults(func=cmd_isoclinic)

    c = sub.add_parser("verify", help="exhaustive verification sweep")
    c.add_argument("target", choices=TARGETS)
    c.add_argument("--p", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--budget", type=int, help=f"rank computations (default {SWEEP_BUDGET})")
    c.add_argument("--json", help="also write the JSON report to this path")
    c.add_argument("--format", choices=["text", "json"], default="text")
    c.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FormError, FieldError, CanonError, LinAlgError, VerificationError) as exc:
        print(f"conjtype: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as exc:
        print(f"conjtype: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
