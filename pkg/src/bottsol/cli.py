"""Command-line front end.

Exit codes: 0 all checks pass; 1 mismatch or refutation; 2 only known,
audited discrepancies; 64 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, pipeline, registry, verify
from .algebra import GROUPS, InvalidAlgebra, UnknownId, parse_custom_file, screen_jacobi
from .connection import DISTRIBUTIONS
from .soliton import DEFAULT_SEED, build_system

EX_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _add_selector_args(p, need_dist=True):
    p.add_argument("--group", required=True, choices=GROUPS)
    if need_dist:
        p.add_argument("--distribution", default="D", choices=sorted(DISTRIBUTIONS))
    p.add_argument("--perturbed", action="store_true")
    p.add_argument("--eta", type=int, choices=(1, -1), default=None,
                   help="sign for G4 (runs require it; other groups reject it)")


def _add_common(p):
    p.add_argument("--format", default="text", choices=("text", "structured"))
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=100,
                   help="minimum admissible sample points per non-existence claim")
    p.add_argument("--spot-samples", type=int, default=25,
                   help="instantiation points per confirmed solution family")
    p.add_argument("--timing", action="store_true",
                   help="include wall-clock timings (breaks byte-identical reports)")


def build_parser() -> _Parser:
    parser = _Parser(prog="bottsol", description=__doc__)
    parser.add_argument("--version", action="version", version=f"bottsol {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list the catalog and the registries")
    p.add_argument("--format", default="text", choices=("text", "structured"))

    for name, help_text in (
        ("print-connection", "print a connection table"),
        ("print-curvature", "print a curvature table"),
        ("print-ricci", "print the Ricci form (and its symmetrization)"),
        ("print-system", "print the soliton equation system"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_selector_args(p)
        if name == "print-connection":
            p.add_argument("--kind", default="bott", choices=("levi-civita", "bott"))
        if name == "print-ricci":
            p.add_argument("--symmetrized", action="store_true")
        p.add_argument("--format", default="text", choices=("text", "structured"))

    p = sub.add_parser("verify-fixture", help="verify stored reference tables")
    p.add_argument("--id", action="append", default=None, help="fixture id (repeatable)")
    p.add_argument("--format", default="text", choices=("text", "structured"))

    p = sub.add_parser("verify-theorem", help="verify classification theorems")
    p.add_argument("--id", action="append", default=None, help="theorem id (repeatable)")
    _add_common(p)

    p = sub.add_parser("verify-all", help="run the whole fixture and theorem corpus")
    _add_common(p)

    p = sub.add_parser("check-custom", help="validate a custom algebra file and print its system")
    p.add_argument("--spec-file", required=True)
    p.add_argument("--distribution", default="D", choices=sorted(DISTRIBUTIONS))
    p.add_argument("--perturbed", action="store_true")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--symbolic-jacobi", action="store_true",
                   help="check the Jacobi identity symbolically instead of at sampled points")
    p.add_argument("--format", default="text", choices=("text", "structured"))

    return parser


def _eta_for(args) -> int | None:
    if args.group == "G4":
        if args.eta is None:
            raise UnknownId("G4 requires --eta +1 or -1")
        return args.eta
    if args.eta is not None:
        raise UnknownId("--eta applies only to G4")
    return None


def _emit(args, text_lines, payload) -> None:
    if args.format == "structured":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(text_lines))


def _cmd_list(args) -> int:
    from . import algebra

    lines = ["groups:"]
    groups_payload = []
    for g in GROUPS:
        spec = algebra.catalog(g, eta_sign=1 if g == "G4" else None)
        kind = "unimodular" if spec.unimodular else "non-unimodular"
        cons = [str(c) + " = 0" for c in spec.equality_constraints]
        cons += [str(c) + " != 0" for c in spec.nonzero_constraints]
        extra = f" ({'; '.join(cons)})" if cons else ""
        lines.append(f"  {g}: {kind}, parameters {', '.join(spec.parameters)}{extra}")
        groups_payload.append(
            {"group": g, "class": kind, "parameters": list(spec.parameters), "constraints": cons}
        )
    lines.append("distributions:")
    for name, dist in sorted(DISTRIBUTIONS.items()):
        lines.append(f"  {name}: plane (e{dist.plane[0]}, e{dist.plane[1]}), normal e{dist.normal}")
    fixtures = registry.load_fixtures()
    theorems = registry.load_theorems()
    lines.append(f"registries: {len(fixtures)} reference tables, {len(theorems)} theorem records")
    _emit(args, lines, {
        "groups": groups_payload,
        "distributions": {
            name: {"plane": list(d.plane), "normal": d.normal} for name, d in DISTRIBUTIONS.items()
        },
        "fixtures": len(fixtures),
        "theorems": len(theorems),
    })
    return 0


def _cmd_print(args) -> int:
    eta = _eta_for(args)
    stage = pipeline.stage(args.group, args.distribution, args.perturbed, eta)
    header = f"{args.group}/{args.distribution}" + (" perturbed" if args.perturbed else "")
    if args.command == "print-connection":
        conn = stage.levi_civita if args.kind == "levi-civita" else stage.conn
        body = str(conn)
        payload = {"table": {f"{i},{j}": str(v) for (i, j), v in conn.rows()}}
    elif args.command == "print-curvature":
        body = str(stage.riemann)
        payload = {"table": {f"{i},{j},{p}": str(v) for (i, j, p), v in stage.riemann.entries()}}
    elif args.command == "print-ricci":
        form = stage.sym_ricci if args.symmetrized else stage.ricci
        body = str(form)
        payload = {"table": {f"{i},{j}": str(v) for (i, j), v in form.entries()}}
    else:  # print-system
        body = str(stage.system)
        payload = {"equations": [str(eq) for eq in stage.system.equations],
                   "unknowns": ["mu1", "mu2", "mu3", "mu"]}
    payload["context"] = header
    _emit(args, [header, body], payload)
    return 0


def _fixture_lines(rep) -> list:
    mark = {"match": "ok", "known_discrepancy": "DISCREPANCY", "mismatch": "MISMATCH"}[rep.status]
    lines = [f"[{mark}] {rep.fixture_id} {rep.kind} {rep.group}/{rep.distribution}"
             + (" perturbed" if rep.perturbed else "")]
    for d in rep.diffs:
        lines.append(f"    [{d.key}] stored:   {d.expected}")
        lines.append(f"    {' ' * len(f'[{d.key}]')} computed: {d.computed}")
    return lines


def _cmd_verify_fixture(args) -> int:
    errata = registry.errata_signatures()
    fixtures = registry.load_fixtures()
    if args.id:
        wanted = set(args.id)
        fixtures = [f for f in fixtures if f.id in wanted]
        missing = wanted - {f.id for f in fixtures}
        if missing:
            print(f"unknown fixture ids: {sorted(missing)}", file=sys.stderr)
            return EX_USAGE
    reports = [verify.verify_fixture(fix, errata) for fix in fixtures]
    lines = []
    for rep in reports:
        lines.extend(_fixture_lines(rep))
    counts = {"match": 0, "known_discrepancy": 0, "mismatch": 0}
    for rep in reports:
        counts[rep.status] += 1
    lines.append(
        f"fixtures: {counts['match']} match, {counts['known_discrepancy']} known discrepancies, "
        f"{counts['mismatch']} mismatches"
    )
    _emit(args, lines, {"fixtures": [rep.to_json() for rep in reports], "summary": counts})
    if counts["mismatch"]:
        return 1
    return 2 if counts["known_discrepancy"] else 0


def _theorem_lines(rep) -> list:
    lines = [f"[{rep.status}] {rep.theorem_id} ({rep.kind}, "
             f"{rep.group or 'all groups'}/{rep.distribution}"
             + (" perturbed" if rep.perturbed else "") + f", {rep.points_checked} points)"]
    for f in rep.families:
        if f.status == "confirmed":
            lines.append(f"    family {f.label}: confirmed ({f.spot_checks} instantiations)")
        else:
            lines.append(f"    family {f.label}: {f.status}")
            if f.equation:
                lines.append(f"        violated equation: {f.equation} = 0")
            if f.residual:
                lines.append(f"        residual: {f.residual}")
            if f.completion_status:
                lines.append(f"        corrected statement: {f.completion_status}")
    if rep.witness:
        lines.append(f"    witness: {rep.witness}")
    return lines


def _cmd_verify_theorem(args) -> int:
    records = registry.load_theorems()
    if args.id:
        wanted = set(args.id)
        records = [r for r in records if r.id in wanted]
        missing = wanted - {r.id for r in records}
        if missing:
            print(f"unknown theorem ids: {sorted(missing)}", file=sys.stderr)
            return EX_USAGE
    reports = [
        verify.verify_theorem(rec, minimum_points=args.samples,
                              spot_points=args.spot_samples, seed=args.seed)
        for rec in records
    ]
    lines = []
    for rep in reports:
        lines.extend(_theorem_lines(rep))
    _emit(args, lines,
          {"theorems": [rep.to_json(timing=args.timing) for rep in reports], "seed": args.seed})
    if any(rep.status == verify.REFUTED for rep in reports):
        return 1
    return 2 if any(rep.status == verify.DISCREPANCY for rep in reports) else 0


def _cmd_verify_all(args) -> int:
    summary = verify.run_all(minimum_points=args.samples, spot_points=args.spot_samples,
                             seed=args.seed)
    lines = []
    for rep in summary.fixture_reports:
        if rep.status != verify.MATCH:
            lines.extend(_fixture_lines(rep))
    for rep in summary.theorem_reports:
        if rep.status != verify.CONFIRMED:
            lines.extend(_theorem_lines(rep))
    counts = summary.counts()
    lines.append(
        f"fixtures: {counts['match']} match, {counts['known_discrepancy']} known discrepancies, "
        f"{counts['mismatch']} mismatches"
    )
    lines.append(
        f"theorems: {counts['confirmed']} confirmed, {counts['discrepancy']} discrepancies, "
        f"{counts['refuted']} refuted"
    )
    payload = {
        "seed": args.seed,
        "fixtures": [rep.to_json(timing=args.timing) for rep in summary.fixture_reports],
        "theorems": [rep.to_json(timing=args.timing) for rep in summary.theorem_reports],
        "summary": counts,
    }
    _emit(args, lines, payload)
    return summary.exit_code()


def _cmd_check_custom(args) -> int:
    try:
        with open(args.spec_file, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"cannot read {args.spec_file}: {exc}", file=sys.stderr)
        return EX_USAGE
    try:
        spec = parse_custom_file(text)
        screen_jacobi(spec, seed=args.seed, symbolic=args.symbolic_jacobi)
    except InvalidAlgebra as exc:
        print(f"invalid algebra: {exc}", file=sys.stderr)
        return EX_USAGE
    from . import connection as conn_mod

    dist = DISTRIBUTIONS[args.distribution]
    lc = conn_mod.levi_civita(spec)
    conn = conn_mod.bott(spec, lc, dist)
    if args.perturbed:
        conn = conn_mod.perturb(conn)
    system = build_system(spec, conn)
    lines = [
        f"custom algebra accepted (Jacobi screen passed, "
        f"{'symbolic' if args.symbolic_jacobi else 'sampled'})",
        f"soliton system for distribution {args.distribution}"
        + (" perturbed" if args.perturbed else "") + ":",
        str(system) if system.equations else "(empty system)",
    ]
    _emit(args, lines, {
        "accepted": True,
        "distribution": args.distribution,
        "perturbed": args.perturbed,
        "equations": [str(eq) for eq in system.equations],
    })
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            return _cmd_list(args)
        if args.command in ("print-connection", "print-curvature", "print-ricci", "print-system"):
            return _cmd_print(args)
        if args.command == "verify-fixture":
            return _cmd_verify_fixture(args)
        if args.command == "verify-theorem":
            return _cmd_verify_theorem(args)
        if args.command == "verify-all":
            return _cmd_verify_all(args)
        if args.command == "check-custom":
            return _cmd_check_custom(args)
    except UnknownId as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
