"""Command-line front end.

Exit codes: 0 success, 1 computation refused, 2 input error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import builders
from .algebra import AlgebraError, dump, load
from .builders import AxiomError
from .commutators import (DEFAULT_BOUNDS, ENGINES, SmithUndefined, WeightedCospan, centrality_check,
                          divergence_search, smith_commutator, smith_term_condition, weighted_commutator,
                          weighted_normal_commutator)
from .config import CapExceeded
from .congruences import NotNormal, cg, full, meet, zero_class
from .free import certificate_holds, maltsev_term, protomodularity_certificate
from .verify import hard_failures, verify_algebra

OK, REFUSED, INPUT_ERROR, VERIFY_FAILED = 0, 1, 2, 3


class InputError(ValueError):
    pass


class Refused(RuntimeError):
    pass


@dataclass
class Report:
    algebra: str
    subcommand: str
    inputs: dict = field(default_factory=dict)
    result: object = None
    status: str = "ok"
    witnesses: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def to_dict(self, timestamp=True):
        out = {"algebra": self.algebra, "subcommand": self.subcommand, "inputs": self.inputs,
               "result": self.result, "status": self.status, "witnesses": self.witnesses, "checks": self.checks}
        if timestamp:
            out["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        return out


# -- argument parsing helpers ---------------------------------------------------

def parse_ids(text: str, a) -> list:
    """``zero`` -> [], ``all`` -> every id, otherwise a comma/space separated id list."""
    text = text.strip()
    if text == "zero":
        return []
    if text == "all":
        return list(range(a.size))
    try:
        ids = [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"cannot parse element list {text!r}") from None
    bad = [i for i in ids if not 0 <= i < a.size]
    if bad:
        raise InputError(f"element ids {bad} out of range 0..{a.size - 1}")
    return ids


def parse_bounds(text: str) -> tuple:
    try:
        bounds = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise InputError(f"bounds must look like k,m,n; got {text!r}") from None
    if len(bounds) != 3 or min(bounds) < 0 or min(bounds[1:]) < 1:
        raise InputError(f"bounds must be k,m,n with k >= 0 and m, n >= 1; got {text!r}")
    return bounds


def parse_pairs(tokens: list, a):
    """Pairs such as ``0:2 1:3``; ``all`` is the full congruence, ``none`` the identity."""
    if tokens == ["all"]:
        return full(a), "all"
    if tokens in ([], ["none"]):
        return cg(a, []), []
    pairs = []
    for tok in " ".join(tokens).replace(",", " ").split():
        try:
            u, v = (int(s) for s in tok.split(":"))
        except ValueError:
            raise InputError(f"pair {tok!r} is not of the form i:j") from None
        for e in (u, v):
            if not 0 <= e < a.size:
                raise InputError(f"element id {e} out of range 0..{a.size - 1}")
        pairs.append((u, v))
    return cg(a, pairs), [list(p) for p in pairs]


def _load(path):
    try:
        return load(path)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


def _witness_dict(res):
    return {str(e): w.to_dict() for e, w in sorted(res.witnesses.items())}


# -- subcommands ------------------------------------------------------------------

def cmd_check(args):
    a = _load(args.file)
    rep = Report(a.name, "check", {"file": str(args.file)})
    m = maltsev_term(a)
    cert = protomodularity_certificate(a)
    cert_ok = cert.status == "found" and certificate_holds(a, cert)
    rep.result = {
        "size": a.size,
        "zero": a.zero,
        "operations": [[n, r] for n, r in a.signature.operations],
        "declared_properties": sorted(a.declared_properties),
        "pointed": True,
        "maltsev": {"status": m.status, "term": str(m.term) if m.term is not None else None, "reason": m.reason},
        "protomodularity": {
            "status": cert.status,
            "j": cert.j,
            "alphas": [str(t) for t in cert.alphas],
            "theta": str(cert.theta) if cert.theta is not None else None,
            "reason": cert.reason,
        },
    }
    declared = "maltsev" in a.declared_properties
    rep.checks = [
        {"name": "declared_maltsev_consistent", "hard": True, "passed": not (declared and m.status == "absent")},
        {"name": "certificate_rechecked", "hard": True, "passed": cert.status != "found" or cert_ok},
    ]
    rep.status = "ok" if all(c["passed"] for c in rep.checks) else "verification_failed"
    lines = [f"{a.name}: {a.size} elements, zero {a.zero}, pointed",
             f"Mal'tsev term: {m.status}" + (f"  p = {m.term}" if m.term is not None else ""),
             f"protomodularity certificate: {cert.status}" + (f" (j = {cert.j})" if cert.status == "found" else "")]
    return rep, lines, OK if rep.status == "ok" else VERIFY_FAILED


def cmd_commutator(args):
    a = _load(args.file)
    bounds = parse_bounds(args.bounds)
    x, y, w = parse_ids(args.x, a), parse_ids(args.y, a), parse_ids(args.w, a)
    c = WeightedCospan.generated(a, x, y, w)
    rep = Report(a.name, "commutator", {
        "file": str(args.file), "x": x, "y": y, "w": w, "bounds": list(bounds), "normal": args.normal,
        "engine": args.engine, "X": list(c.x_sub.elements), "Y": list(c.y_sub.elements),
        "W": list(c.w_sub.elements)})
    f = weighted_normal_commutator if args.normal else weighted_commutator
    res = f(c, bounds, args.engine)
    rep.result = res.to_dict()
    rep.result["centrality"] = centrality_check(c, bounds, args.engine) if not args.normal else None
    rep.status = res.status
    rep.witnesses = _witness_dict(res)
    rep.checks = [{"name": "witness_soundness", "hard": True, "passed": res.witnesses_sound()}]
    label = "N[X,Y]" if args.normal else "[X,Y]"
    lines = [f"X = {list(c.x_sub.elements)}  Y = {list(c.y_sub.elements)}  W = {list(c.w_sub.elements)}",
             f"{label} = {list(res.value.elements)}  ({res.status}, bounds used {list(res.bounds_used)}, "
             f"engine {res.engine})"]
    lines += [f"  {e}: {w.term}  at {dict((str(v), val) for v, val in w.assignment)}"
              for e, w in sorted(res.witnesses.items())]
    lines += [f"  note: {n}" for n in res.notes]
    code = OK if res.witnesses_sound() else VERIFY_FAILED
    return rep, lines, code


def cmd_smith(args):
    a = _load(args.file)
    alpha, alpha_in = parse_pairs(args.alpha_pairs, a)
    beta, beta_in = parse_pairs(args.beta_pairs, a)
    rep = Report(a.name, "smith", {"file": str(args.file), "alpha_pairs": alpha_in, "beta_pairs": beta_in,
                                   "alpha": [int(r) for r in alpha.rep], "beta": [int(r) for r in beta.rep]})
    s = smith_commutator(a, alpha, beta)
    rep.result = {"rep": [int(r) for r in s.rep], "classes": s.classes(), "zero_class": list(zero_class(s).elements)}
    rep.status = "exact"
    rep.checks = [{"name": "below_meet", "hard": True, "passed": s <= meet(alpha, beta)}]
    if args.oracle:
        try:
            oracle = smith_term_condition(a, alpha, beta)
        except ValueError as e:
            raise Refused(str(e)) from None
        rep.checks.append({"name": "term_condition_oracle", "hard": True, "passed": oracle == s})
    lines = [f"alpha = {alpha.classes()}", f"beta  = {beta.classes()}", f"[alpha, beta] = {s.classes()}"]
    failed = [c for c in rep.checks if not c["passed"]]
    return rep, lines, VERIFY_FAILED if failed else OK


def cmd_verify(args):
    a = _load(args.file)
    bounds = parse_bounds(args.bounds)
    rep = Report(a.name, "verify", {"file": str(args.file), "bounds": list(bounds), "engine": args.engine,
                                    "quotients": not args.no_quotients})
    checks = verify_algebra(a, bounds, args.engine, quotients=not args.no_quotients)
    rep.checks = [c.to_dict() for c in checks]
    bad = hard_failures(checks)
    rep.status = "verification_failed" if bad else "ok"
    rep.result = {"hard_failures": [c.name for c in bad]}
    lines = []
    for c in checks:
        tag = "skip" if c.skipped else "ok" if c.passed else "FAIL" if c.hard else "warn"
        lines.append(f"{tag:4}  {c.name} ({c.cases} cases){'  ' + c.skipped if c.skipped else ''}")
        lines += [f"      {v}" for v in c.violations]
    return rep, lines, VERIFY_FAILED if bad else OK


def cmd_divergence(args):
    a = _load(args.file)
    bounds = parse_bounds(args.bounds)
    rep = Report(a.name, "search-divergence", {"file": str(args.file), "bounds": list(bounds),
                                               "weights": args.weights, "engine": args.engine})
    found = divergence_search(a, bounds, args.weights, args.engine)
    rep.result = found
    rep.status = "exact" if all(e["all_exact"] for e in found) else "lower_bound"
    lines = [f"{len(found)} subalgebra pair(s) with a strict weight chain"]
    for e in found:
        lines.append(f"  X={e['x']} Y={e['y']}: [X,Y]_0={e['weight_zero']['value']} "
                     f"[X,Y]_1={e['weight_one']['value']} N[X,Y]_0={e['normal_weight_zero']['value']} "
                     f"N[X,Y]_1={e['normal_weight_one']['value']}")
    return rep, lines, OK


def _int_args(spec, count, what):
    if len(spec) != count:
        raise InputError(f"{what} expects {count} integer argument(s)")
    try:
        return [int(s) for s in spec]
    except ValueError:
        raise InputError(f"{what} expects integers, got {spec}") from None


def _table_file(spec, what):
    if len(spec) != 1:
        raise InputError(f"{what} table expects one JSON file")
    try:
        return json.loads(Path(spec[0]).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read table file: {e}") from None


def build_from_spec(family, kind, spec):
    if family == "group":
        if kind in ("cyclic", "dihedral", "symmetric"):
            (n,) = _int_args(spec, 1, kind)
            return builders.build_group(kind, n)
        if kind == "quaternion":
            return builders.quaternion()
        if kind == "table":
            return builders.group_from_table(_table_file(spec, "group")["mul"])
    elif family == "ring":
        if kind in ("zn", "zero_mult"):
            (n,) = _int_args(spec, 1, kind)
            return builders.build_ring(kind, n)
        if kind == "poly_nilpotent":
            p, d = _int_args(spec, 2, kind)
            return builders.poly_nilpotent(p, d)
        if kind == "table":
            t = _table_file(spec, "ring")
            return builders.ring_from_tables(t["add"], t["mul"])
    elif family == "loop":
        if kind == "l5":
            return builders.loop5()
        if kind == "table":
            t = _table_file(spec, "loop")
            return builders.build_loop(t["mul"], t.get("zero", 0))
    raise InputError(f"unknown {family} kind {kind!r}")


def cmd_build(args):
    try:
        a = build_from_spec(args.family, args.kind, args.spec)
    except (AxiomError, KeyError) as e:
        raise InputError(f"cannot build {args.family}: {e}") from None
    except ValueError as e:
        raise InputError(str(e)) from None
    dump(a, args.output)
    rep = Report(a.name, "build", {"family": args.family, "kind": args.kind, "spec": args.spec,
                                   "output": str(args.output)})
    rep.result = {"size": a.size, "declared_properties": sorted(a.declared_properties)}
    return rep, [f"wrote {a.name} ({a.size} elements) to {args.output}"], OK


# -- entry point ------------------------------------------------------------------------

def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    common.add_argument("--report", type=Path, help="also write the JSON report to this path")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp from reports")
    common.add_argument("--threads", type=int, default=1, help="worker cap (computation is single-threaded)")

    p = argparse.ArgumentParser(prog="wcomm", description="Weighted commutators of finite pointed algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="validate; Mal'tsev and protomodularity searches")
    s.add_argument("file", type=Path)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("commutator", parents=[common], help="weighted (normal) commutator")
    s.add_argument("file", type=Path)
    s.add_argument("--x", required=True, help="generators of X: ids, 'zero' or 'all'")
    s.add_argument("--y", required=True, help="generators of Y")
    s.add_argument("--w", default="zero", help="generators of the weight W")
    s.add_argument("--bounds", default=",".join(map(str, DEFAULT_BOUNDS)))
    s.add_argument("--normal", action="store_true")
    s.add_argument("--engine", choices=ENGINES, default="auto")
    s.set_defaults(func=cmd_commutator)

    s = sub.add_parser("smith", parents=[common], help="Smith commutator of two congruences")
    s.add_argument("file", type=Path)
    s.add_argument("--alpha-pairs", nargs="+", required=True, help="generating pairs i:j, 'all' or 'none'")
    s.add_argument("--beta-pairs", nargs="+", required=True)
    s.add_argument("--oracle", action="store_true", help="cross-check with the term-condition scan")
    s.set_defaults(func=cmd_smith)

    s = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    s.add_argument("file", type=Path)
    s.add_argument("--bounds", default=",".join(map(str, DEFAULT_BOUNDS)))
    s.add_argument("--engine", choices=ENGINES, default="auto")
    s.add_argument("--no-quotients", action="store_true", help="skip the surjection check")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("search-divergence", parents=[common], help="pairs where weight 0 and weight 1 differ")
    s.add_argument("file", type=Path)
    s.add_argument("--bounds", default=",".join(map(str, DEFAULT_BOUNDS)))
    s.add_argument("--weights", action="store_true", help="also tabulate every intermediate weight")
    s.add_argument("--engine", choices=ENGINES, default="auto")
    s.set_defaults(func=cmd_divergence)

    s = sub.add_parser("build", parents=[common], help="write a corpus algebra file")
    s.add_argument("family", choices=("group", "ring", "loop"))
    s.add_argument("kind", help="group: cyclic|dihedral|symmetric|quaternion|table; "
                                "ring: zn|zero_mult|poly_nilpotent|table; loop: l5|table")
    s.add_argument("spec", nargs="*", help="integer parameters or a JSON table file")
    s.add_argument("-o", "--output", type=Path, required=True)
    s.set_defaults(func=cmd_build)
    return p


def _emit(args, rep, lines):
    doc = rep.to_dict(timestamp=not args.no_timestamp)
    text = json.dumps(doc, indent=2)
    if args.report:
        args.report.write_text(text + "\n")
    if args.json:
        print(text)
    else:
        print("\n".join(lines))


def _error(args, command, kind, message, code):
    if getattr(args, "json", False):
        print(json.dumps({"subcommand": command, "status": kind, "error": {"kind": kind, "message": message},
                          "exit_code": code}, indent=2))
    else:
        print(f"error ({kind}): {message}", file=sys.stderr)
    return code


def run(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    try:
        rep, lines, code = args.func(args)
    except (InputError, AlgebraError) as e:
        return _error(args, args.command, "input_error", str(e), INPUT_ERROR)
    except (Refused, CapExceeded, SmithUndefined, NotNormal) as e:
        return _error(args, args.command, "refused", str(e), REFUSED)
    _emit(args, rep, lines)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
