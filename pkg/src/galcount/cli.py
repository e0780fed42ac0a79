"""Command-line entry point: ``galcount <verb> ...``.

Exit codes: 0 success, 2 input error, 3 resource cap, 4 verification failure.
Errors print one line, ``error: <code> <message>``, on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import acceptance, analytic, base, engine, fields, invariants
from .errors import GalcountError, InputError, VerificationError
from .families import parse_family
from .library import data_dir, resolve
from .perm import is_regular, regular_representation
from .rootexpr import frac_str


def _emit(args, text: str, record: dict) -> None:
    if args.format == "record":
        print(json.dumps(record, sort_keys=True))
    else:
        print(text)


def _parse_target(text: str):
    if text.startswith("family:"):
        return parse_family(text)
    if text.startswith("wreath:"):
        return engine.parse_wreath(text)
    return resolve(text)


def _parse_profile(text: str | None) -> list[int] | None:
    if text is None:
        return None
    out = []
    for part in text.split(","):
        part = part.strip()
        if "^" in part:
            d, _, k = part.partition("^")
            out += [int(d)] * int(k)
        elif part:
            out.append(int(part))
    if not out:
        raise InputError("empty profile")
    return out


def cmd_bound(args) -> int:
    target = _parse_target(args.group)
    try:
        profile = _parse_profile(args.profile)
    except ValueError:
        raise InputError(f"cannot parse profile {args.profile!r}") from None
    cert = engine.certify(target, args.mode, d=args.d, profile=profile, label=args.group, disc=args.disc)
    if not cert.revalidate():
        raise VerificationError("certificate trace failed re-validation")
    _emit(args, str(cert), cert.to_record())
    return 0


def cmd_invariants(args) -> int:
    G = resolve(args.group)
    R = G if is_regular(G) else regular_representation(G)
    S = invariants.regular_invariant_set(R)
    status = invariants.jacobian_independence(S, R.degree, trials=args.trials, seed=args.seed)
    prof = S.degree_profile
    record = {
        "group": args.group,
        "degree": R.degree,
        "profile": prof,
        "independence": str(status),
    }
    if isinstance(status, invariants.VerifiedRandomized):
        record["failure_bound"] = frac_str(status.failure_bound)
        record["prime"] = status.prime
    a, w = invariants.a_and_w_from_degrees(prof, R.degree)
    record["a"] = a.to_record()
    record["w"] = frac_str(w)
    text = "\n".join(
        [
            f"group: {args.group} (regular degree {R.degree})",
            f"degree profile: {_profile_text(prof)}",
            f"a = {a}, mean degree w = {frac_str(w)}",
            f"independence: {status}",
            "invariants:",
            S.to_text().rstrip(),
        ]
    )
    _emit(args, text, record)
    return 0


def _profile_text(prof: list[int]) -> str:
    out = []
    for d in sorted(set(prof)):
        k = prof.count(d)
        out.append(f"{d}^{k}" if k > 1 else str(d))
    return ", ".join(out)


def cmd_base(args) -> int:
    G = resolve(args.group)
    if args.strong is not None:
        cert = base.strong_set_search(G, args.strong, budget=args.budget, seed=args.seed)
        if cert is None:
            _emit(args, f"no strong {args.strong + 1}-set found within budget {args.budget} (not a proof of absence)", {"found": False, "b": args.strong})
            return 0
    else:
        cert = base.greedy_base(G)
    ok = base.verify_base(G, cert)
    b = cert.b if cert.b is not None else len(cert.points)
    a, w = base.base_to_exponent(G.degree, b, G.order)
    record = {**cert.to_record(), "verified": ok, "a": a.to_record(), "w": frac_str(w)}
    _emit(args, f"{cert}\nverified: {ok}\na = {a}, w = {frac_str(w)}", record)
    if not ok:
        raise VerificationError("base certificate failed verification")
    return 0


def cmd_stabprob(args) -> int:
    path = Path(args.classfile)
    if not path.exists() and (data_dir() / args.classfile).exists():
        path = data_dir() / args.classfile
    data = base.load_class_file(path)
    b = base.stab_prob_bounds(data, variant=args.variant)
    text = "\n".join(
        [
            f"degree: {b.degree} ({b.variant} counts)",
            f"triple bound: {frac_str(b.triple_bound)}",
            f"quadruple bound: {frac_str(b.quadruple_bound)}",
            f"quadruple + 4 * triple: {frac_str(b.union_bound_4choose3)}",
        ]
    )
    _emit(args, text, b.to_record())
    return 0


def cmd_count(args) -> int:
    X = args.X
    if args.kind == "quadratic":
        rep = fields.quadratic_density_report(X)
        _emit(args, str(rep), rep.to_record())
    elif args.kind == "abelian":
        cap = args.degree_cap if args.degree_cap is not None else max(2, analytic.degree_cutoff(X, 1, args.C))
        records = fields.abelian_fields_up_to(X, cap)
        if args.csv:
            print("conductor, subgroup_gens, galois_type, disc")
            for r in records:
                print(r.csv_row())
            return 0
        counts = fields.abelian_counts(records)
        text = f"X = {X}, degree cap {cap}\n" + "\n".join(f"  {k}: {v}" for k, v in sorted(counts.items()))
        _emit(args, text, {"X": X, "degree_cap": cap, "counts_by_group": dict(sorted(counts.items()))})
    else:
        rep = fields.galois_count_Q(X, args.C)
        _emit(args, str(rep), rep.to_record())
    return 0


def cmd_tail(args) -> int:
    if args.log_X is not None:
        rep = analytic.tail_bound(d=args.d, C=args.C, log_x=args.log_X)
    elif args.X is not None:
        rep = analytic.tail_bound(args.X, d=args.d, C=args.C)
    else:
        raise InputError("tail needs --X or --log-X")
    rec = rep.to_record()
    rec["resum_check"] = rep.resum_check()
    lines = [f"log X = {rec['log_X']}, d = {rep.d}, C = {rep.C}, cutoff = {rep.cutoff}"]
    if rep.is_zero:
        lines.append("range 5184..cutoff is empty: tail = 0")
    else:
        lt = rec["largest_term"]
        lines += [
            f"terms: {rec['terms']} (orders {rec['range'][0]}..{rec['range'][1]})",
            f"log tail: {rec['log_tail']}",
            f"largest term at |G| = {lt['order']}: log groups {lt['log_group_count']}, log constant {lt['log_constant']}, "
            f"log core-free {lt['log_core_free']}, log X-power {lt['log_X_power']}",
            f"re-summation check: {rec['resum_check']}",
        ]
    _emit(args, "\n".join(lines), rec)
    if not rec["resum_check"]:
        raise VerificationError("tail re-summation mismatch")
    return 0


def cmd_verify(args) -> int:
    selected = None
    if args.only:
        try:
            selected = [int(x) for x in args.only.split(",")]
        except ValueError:
            raise InputError(f"bad --only list {args.only!r}") from None
    results = acceptance.run_all(selected)
    if args.format == "record":
        print(json.dumps([{"criterion": r.number, "name": r.name, "passed": r.passed, "detail": r.detail} for r in results], sort_keys=True))
    else:
        for r in results:
            print(r.line())
        print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return 0 if all(r.passed for r in results) else 4


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "record"), default="text", help="record = one JSON object")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="worker cap (work runs in one process)")

    p = argparse.ArgumentParser(prog="galcount", description="Exponent certificates and exact field counts.")
    sub = p.add_subparsers(dest="verb", required=True)

    b = sub.add_parser("bound", parents=[common], help="certify an exponent for a group")
    b.add_argument("group", help="smallgroup:o:i, cyclic:n, ..., family:<name>..., wreath:r:order:<family>, or a file")
    b.add_argument("--mode", choices=engine.MODES, default=engine.UNIFORM)
    b.add_argument("--d", type=int, default=1, help="degree of the base field")
    b.add_argument("--disc", type=int, default=None, help="|Disc(k)| for explicit constants")
    b.add_argument("--profile", default=None, help="invariant degrees, e.g. '1,2,3,4,5^6140,9^12'")
    b.set_defaults(func=cmd_bound)

    i = sub.add_parser("invariants", parents=[common], help="regular invariant set and independence test")
    i.add_argument("group")
    i.add_argument("--trials", type=int, default=4)
    i.set_defaults(func=cmd_invariants)

    s = sub.add_parser("base", parents=[common], help="base or strong set certificate")
    s.add_argument("group")
    s.add_argument("--strong", type=int, default=None, metavar="b")
    s.add_argument("--budget", type=int, default=100_000)
    s.set_defaults(func=cmd_base)

    sp = sub.add_parser("stabprob", parents=[common], help="set-stabilizer probability bounds from a class file")
    sp.add_argument("classfile")
    sp.add_argument("--variant", choices=(base.PUBLISHED, base.EXACT), default=base.PUBLISHED)
    sp.set_defaults(func=cmd_stabprob)

    c = sub.add_parser("count", parents=[common], help="exact field counts over Q")
    c.add_argument("kind", choices=("quadratic", "abelian", "galois"))
    c.add_argument("--X", type=int, required=True)
    c.add_argument("--degree-cap", type=int, default=None)
    c.add_argument("--C", type=float, default=analytic.DEFAULT_CUTOFF_C)
    c.add_argument("--csv", action="store_true", help="abelian: list field records")
    c.set_defaults(func=cmd_count)

    t = sub.add_parser("tail", parents=[common], help="tail of the sum over large group orders")
    t.add_argument("--X", type=float, default=None)
    t.add_argument("--log-X", type=float, default=None, dest="log_X")
    t.add_argument("--d", type=int, default=1)
    t.add_argument("--C", type=float, default=analytic.DEFAULT_CUTOFF_C)
    t.set_defaults(func=cmd_tail)

    v = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    v.add_argument("--only", default=None, help="comma-separated criterion numbers")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except GalcountError as exc:
        print(f"error: {exc.code} {exc}", file=sys.stderr)
        return exc.exit_code
    except MemoryError:
        print("error: resource out of memory", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
