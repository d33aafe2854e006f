"""Comparison engine: recompute everything, compare with the stored tables,
and check every classification theorem.

Outcome vocabulary:

* fixtures:  Match, or Mismatch with per-entry expected/computed payloads.
  A Mismatch listed in the audited errata registry is a known discrepancy
  (the stored table disagrees with its own surrounding computation); an
  unlisted one signals a real problem and fails verification.
* theorems:  Confirmed, Refuted (a non-existence claim with an explicit
  solvable witness, or an existence family that is wrong even after the
  recorded correction), or Discrepancy (family violated as printed, with
  residual; confirmed in corrected form when a completion is recorded).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import pipeline, registry
from .curvature import curvature_delta
from .registry import FamilyRecord, Fixture, TheoremRecord
from .scalar import DenominatorZero, Poly, RatFun
from .soliton import (
    DEFAULT_SEED,
    UNKNOWNS,
    InconsistentFamily,
    SolitonSystem,
    SolutionFamily,
    check_family,
    decide_at_point,
    sample_plan,
)

MATCH = "match"
MISMATCH = "mismatch"
KNOWN_DISCREPANCY = "known_discrepancy"

CONFIRMED = "confirmed"
REFUTED = "refuted"
DISCREPANCY = "discrepancy"


@dataclass(frozen=True)
class EntryDiff:
    key: str
    expected: str
    computed: str


@dataclass(frozen=True)
class FixtureReport:
    fixture_id: str
    kind: str
    group: str
    distribution: str
    perturbed: bool
    status: str
    diffs: tuple = ()
    elapsed_ms: float = 0.0

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "id": self.fixture_id,
            "kind": self.kind,
            "group": self.group,
            "distribution": self.distribution,
            "perturbed": self.perturbed,
            "status": self.status,
            "mismatches": [
                {"key": d.key, "expected": d.expected, "computed": d.computed} for d in self.diffs
            ],
        }
        if timing:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


def _canonical_system(polys) -> list:
    return sorted(str(p.primitive()) for p in polys if not p.is_zero())


def _vec_str(vec) -> str:
    return str(vec)


def _key_str(key) -> str:
    return ",".join(str(k) for k in key)


def _diff_tables(expected: dict, computed: dict, render) -> list:
    diffs = []
    for key in sorted(set(expected) | set(computed)):
        exp = expected.get(key)
        got = computed.get(key)
        same = exp is not None and got is not None and exp == got
        if not same:
            diffs.append(
                EntryDiff(
                    _key_str(key),
                    "(absent)" if exp is None else render(exp),
                    "(absent)" if got is None else render(got),
                )
            )
    return diffs


def _verify_fixture_for_eta(fix: Fixture, eta: int | None) -> list:
    stage = pipeline.stage(
        fix.group,
        None if fix.kind == "levi_civita" else fix.distribution,
        perturbed=fix.perturbed,
        eta_sign=eta,
    )
    if fix.kind == "levi_civita":
        expected = fix.connection_table(eta=eta)
        computed = {key: stage.levi_civita.row(*key).c for key in expected}
        return _diff_tables(expected, computed, _render_vec)
    if fix.kind == "bott":
        expected = fix.connection_table(eta=eta)
        computed = {key: stage.conn.row(*key).c for key in expected}
        return _diff_tables(expected, computed, _render_vec)
    if fix.kind == "curvature":
        expected = fix.curvature_table(eta=eta)
        computed = {key: stage.riemann.at(*key).c for key in expected}
        return _diff_tables(expected, computed, _render_vec)
    if fix.kind == "ricci":
        expected = fix.bilinear_table(eta=eta)
        computed = {key: stage.ricci.at(*key) for key in expected}
        return _diff_tables(expected, computed, str)
    if fix.kind == "sym_ricci":
        expected = fix.bilinear_table(eta=eta)
        computed = {key: stage.sym_ricci.at(*key) for key in expected}
        return _diff_tables(expected, computed, str)
    if fix.kind == "lie_derivative":
        expected = fix.bilinear_table(eta=eta)
        computed = {key: stage.lie_derivative.at(*key) for key in expected}
        return _diff_tables(expected, computed, str)
    if fix.kind == "system":
        expected = _canonical_system(fix.system_equations(eta=eta))
        computed = _canonical_system(stage.system.equations)
        diffs = []
        for extra in sorted(set(expected) - set(computed)):
            diffs.append(EntryDiff("equations", extra, "(no matching equation)"))
        for extra in sorted(set(computed) - set(expected)):
            diffs.append(EntryDiff("equations", "(no matching equation)", extra))
        return diffs
    if fix.kind == "curvature_delta":
        base = pipeline.stage(fix.group, fix.distribution, perturbed=False, eta_sign=eta)
        expected = fix.delta_table(eta=eta)  # full perturbed values at listed triples
        delta = curvature_delta(base.riemann, stage.riemann)
        diffs = []
        for key in sorted(set(expected) | set(delta)):
            if key in expected:
                got = stage.riemann.at(*key).c
                if tuple(expected[key]) != tuple(got):
                    diffs.append(EntryDiff(_key_str(key), _render_vec(expected[key]), _render_vec(got)))
            else:
                base_v, pert_v = delta[key]
                diffs.append(
                    EntryDiff(
                        _key_str(key),
                        "(listed as unchanged)",
                        f"{_render_vec(pert_v.c)} (was {_render_vec(base_v.c)})",
                    )
                )
        return diffs
    if fix.kind == "sym_ricci_delta":
        base = pipeline.stage(fix.group, fix.distribution, perturbed=False, eta_sign=eta)
        expected = fix.delta_table(eta=eta)
        diffs = []
        changed = set()
        for i in (1, 2, 3):
            for j in range(i, 4):
                if base.sym_ricci.at(i, j) != stage.sym_ricci.at(i, j):
                    changed.add((i, j))
        for key in sorted(set(expected) | changed):
            pair = tuple(sorted(key))
            got = stage.sym_ricci.at(*key)
            if key in expected:
                if expected[key] != got:
                    diffs.append(EntryDiff(_key_str(key), str(expected[key]), str(got)))
            elif pair not in {tuple(sorted(k)) for k in expected}:
                diffs.append(
                    EntryDiff(
                        _key_str(key),
                        "(listed as unchanged)",
                        f"{got} (was {base.sym_ricci.at(*key)})",
                    )
                )
        return diffs
    raise registry.RegistryError(f"fixture {fix.id}: unknown kind {fix.kind}")


def _render_vec(comps) -> str:
    from .algebra import Vec3

    return str(Vec3(tuple(comps)))


def verify_fixture(fix: Fixture, errata: set | None = None) -> FixtureReport:
    """Recompute the fixture's object and compare entrywise.

    `errata` holds (fixture_id, key, stored, computed) signatures of audited
    discrepancies; only a diff reproducing one of them exactly counts as
    known.
    """
    started = time.perf_counter()
    diffs: list = []
    for eta in pipeline.eta_signs(fix.group):
        for diff in _verify_fixture_for_eta(fix, eta):
            if diff not in diffs:
                diffs.append(diff)
    if not diffs:
        status = MATCH
    elif errata is not None and all(
        (fix.id, d.key, d.expected, d.computed) in errata for d in diffs
    ):
        status = KNOWN_DISCREPANCY
    else:
        status = MISMATCH
    return FixtureReport(
        fix.id,
        fix.kind,
        fix.group,
        fix.distribution,
        fix.perturbed,
        status,
        tuple(diffs),
        (time.perf_counter() - started) * 1000.0,
    )


# --------------------------------------------------------------------------
# Theorem verification
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyReport:
    label: str
    printed_label: str
    status: str  # confirmed | discrepancy | refuted
    residual: str | None = None
    equation: str | None = None
    completion_status: str | None = None  # confirmed | refuted, when a completion exists
    spot_checks: int = 0

    def to_json(self) -> dict:
        return {
            "family": self.printed_label,
            "branch": self.label,
            "status": self.status,
            "residual": self.residual,
            "equation": self.equation,
            "completion_status": self.completion_status,
            "spot_checks": self.spot_checks,
        }


@dataclass(frozen=True)
class TheoremReport:
    theorem_id: str
    group: str | None
    distribution: str
    perturbed: bool
    kind: str
    status: str
    families: tuple = ()
    points_checked: int = 0
    witness: str | None = None
    elapsed_ms: float = 0.0

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "id": self.theorem_id,
            "group": self.group,
            "distribution": self.distribution,
            "perturbed": self.perturbed,
            "kind": self.kind,
            "status": self.status,
            "families": [f.to_json() for f in self.families],
            "points_checked": self.points_checked,
            "witness": self.witness,
        }
        if timing:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


def _family_from_record(rec: FamilyRecord, eta, completed: bool) -> SolutionFamily:
    from .scalar import parse_poly, parse_ratfun

    bindings = list(rec.bindings) + (list(rec.completion_bindings) if completed else [])
    side_eq = list(rec.side_equal) + (list(rec.completion_equal) if completed else [])
    side_nz = list(rec.side_nonzero) + (list(rec.completion_nonzero) if completed else [])
    return SolutionFamily(
        label=rec.label,
        bindings=tuple((name, parse_ratfun(expr, eta=eta)) for name, expr in bindings),
        side_equal=tuple(parse_poly(expr, eta=eta) for expr in side_eq),
        side_nonzero=tuple(parse_poly(expr, eta=eta) for expr in side_nz),
    )


def _spot_check_family(
    system: SolitonSystem,
    family: SolutionFamily,
    count: int,
    seed: int,
) -> int:
    """Instantiate the family at admissible random points; each point must
    solve every equation exactly and decide_at_point must agree.  Returns the
    number of points checked; raises AssertionError on any failure."""
    rng = random.Random(seed)
    binds = family.closed_bindings()
    bound = set(binds)
    free_names = [n for n in list(system.parameters) + list(UNKNOWNS) if n not in bound]

    reduced_eqs = []
    for poly in list(system.equality_constraints) + list(family.side_equal):
        r = RatFun.from_poly(poly).substitute(binds)
        if not r.is_zero():
            reduced_eqs.append(r.num)

    from .soliton import _solve_equalities

    done = 0
    attempts = 0
    while done < count and attempts < count * 500:
        attempts += 1
        point: dict = {}
        if not _solve_equalities(tuple(reduced_eqs), point, free_names, rng):
            continue
        try:
            full = dict(point)
            for name, val in binds.items():
                full[name] = val.eval_at(point)
        except DenominatorZero:
            continue
        try:
            ok = all(c.eval_at(full) == 0 for c in system.equality_constraints)
            ok = ok and all(c.eval_at(full) != 0 for c in system.nonzero_constraints)
            ok = ok and all(
                RatFun.from_poly(p).eval_at(full) != 0 for p in family.side_nonzero
            )
            if system.perturbed:
                ok = ok and full.get("a0", Fraction(1)) != 0
        except DenominatorZero:
            continue
        if not ok:
            continue
        for eq in system.equations:
            value = eq.eval_at(full)
            if value != 0:
                raise AssertionError(
                    f"family {family.label}: equation {eq} = {value} != 0 at {full}"
                )
        group_point = {k: v for k, v in full.items() if k not in UNKNOWNS}
        verdict = decide_at_point(system, group_point)
        if not verdict.solvable:
            raise AssertionError(
                f"family {family.label}: decide_at_point inconsistent at {group_point}"
            )
        done += 1
    if done < count:
        raise AssertionError(
            f"family {family.label}: only found {done}/{count} admissible sample points"
        )
    return done


def _verify_family(
    system: SolitonSystem,
    rec: FamilyRecord,
    eta,
    spot_points: int,
    seed: int,
) -> FamilyReport:
    try:
        literal = _family_from_record(rec, eta, completed=False)
        verdict = check_family(system, literal)
    except InconsistentFamily as exc:
        return FamilyReport(rec.label, rec.printed_label, DISCREPANCY, residual=str(exc))
    if verdict.satisfied:
        checked = _spot_check_family(system, literal, spot_points, seed)
        return FamilyReport(rec.label, rec.printed_label, CONFIRMED, spot_checks=checked)
    equation = str(system.equations[verdict.equation_index])
    residual = str(verdict.residual)
    if not rec.has_completion():
        return FamilyReport(
            rec.label, rec.printed_label, DISCREPANCY, residual=residual, equation=equation
        )
    # Completions document the corrected statement; they are checked
    # symbolically only (some corrected side conditions, e.g. sums of two
    # squares, have no generic rational parametrization to sample from).
    completed = _family_from_record(rec, eta, completed=True)
    completed_verdict = check_family(system, completed)
    if completed_verdict.satisfied:
        return FamilyReport(
            rec.label,
            rec.printed_label,
            DISCREPANCY,
            residual=residual,
            equation=equation,
            completion_status=CONFIRMED,
        )
    return FamilyReport(
        rec.label,
        rec.printed_label,
        DISCREPANCY,
        residual=residual,
        equation=equation,
        completion_status=REFUTED,
    )


def _verify_not_soliton(
    system: SolitonSystem, minimum: int, seed: int
) -> tuple:
    points = sample_plan(system, minimum=minimum, seed=seed)
    for point in points:
        verdict = decide_at_point(system, point)
        if verdict.solvable:
            return REFUTED, len(points), f"point {point} admits {verdict}"
    return CONFIRMED, len(points), None


def _einstein_system(system: SolitonSystem) -> SolitonSystem:
    extra = tuple(Poly.var(name) for name in ("mu1", "mu2", "mu3"))
    eqs = list(system.equations)
    for p in extra:
        if p not in eqs:
            eqs.append(p)
    return SolitonSystem(
        equations=tuple(eqs),
        group=system.group,
        distribution=system.distribution,
        perturbed=system.perturbed,
        eta_sign=system.eta_sign,
        equality_constraints=system.equality_constraints,
        nonzero_constraints=system.nonzero_constraints,
        parameters=system.parameters,
    )


_EINSTEIN_ZERO = (("mu1", "0"), ("mu2", "0"), ("mu3", "0"))


def verify_theorem(
    rec: TheoremRecord,
    minimum_points: int = 100,
    spot_points: int = 25,
    seed: int = DEFAULT_SEED,
) -> TheoremReport:
    started = time.perf_counter()
    family_reports: list = []
    points_checked = 0
    witness = None

    def systems_for(group: str):
        for eta in pipeline.eta_signs(group):
            yield eta, pipeline.stage(group, rec.distribution, rec.perturbed, eta).system

    if rec.kind == "not_soliton":
        status = CONFIRMED
        for eta, system in systems_for(rec.group):
            verdict, n, w = _verify_not_soliton(system, minimum_points, seed)
            points_checked += n
            if verdict == REFUTED:
                status, witness = REFUTED, w
                break
    elif rec.kind == "families":
        status = CONFIRMED
        for eta, system in systems_for(rec.group):
            for fam in rec.families:
                report = _verify_family(system, fam, eta, spot_points, seed)
                family_reports.append(report)
                points_checked += report.spot_checks
        if any(f.completion_status == REFUTED for f in family_reports) or any(
            f.status == REFUTED for f in family_reports
        ):
            status = REFUTED
        elif any(f.status == DISCREPANCY for f in family_reports):
            status = DISCREPANCY
    elif rec.kind == "einstein":
        status = CONFIRMED
        for clause in rec.clauses:
            for eta in pipeline.eta_signs(clause.group):
                system = pipeline.stage(clause.group, rec.distribution, rec.perturbed, eta).system
                if clause.kind == "not_einstein":
                    verdict, n, w = _verify_not_soliton(
                        _einstein_system(system), minimum_points, seed
                    )
                    points_checked += n
                    if verdict == REFUTED:
                        status, witness = REFUTED, f"{clause.group}: {w}"
                elif clause.kind == "einstein":
                    for fam in clause.families:
                        fam0 = FamilyRecord(
                            label=f"{clause.group}.{fam.label}",
                            printed_label=f"{clause.group}.{fam.printed_label}",
                            bindings=tuple(_EINSTEIN_ZERO) + fam.bindings,
                            side_equal=fam.side_equal,
                            side_nonzero=fam.side_nonzero,
                            completion_bindings=fam.completion_bindings,
                            completion_equal=fam.completion_equal,
                            completion_nonzero=fam.completion_nonzero,
                        )
                        report = _verify_family(system, fam0, eta, spot_points, seed)
                        family_reports.append(report)
                        points_checked += report.spot_checks
                else:
                    raise registry.RegistryError(f"unknown clause kind {clause.kind}")
        if any(f.status == REFUTED or f.completion_status == REFUTED for f in family_reports):
            status = REFUTED
        elif any(f.status == DISCREPANCY for f in family_reports) and status != REFUTED:
            status = DISCREPANCY
    else:
        raise registry.RegistryError(f"unknown theorem kind {rec.kind}")

    return TheoremReport(
        rec.id,
        rec.group,
        rec.distribution,
        rec.perturbed,
        rec.kind,
        status,
        tuple(family_reports),
        points_checked,
        witness,
        (time.perf_counter() - started) * 1000.0,
    )


# --------------------------------------------------------------------------
# Whole-corpus runs
# --------------------------------------------------------------------------


@dataclass
class RunSummary:
    fixture_reports: list = field(default_factory=list)
    theorem_reports: list = field(default_factory=list)

    def counts(self) -> dict:
        out = {MATCH: 0, KNOWN_DISCREPANCY: 0, MISMATCH: 0, CONFIRMED: 0, DISCREPANCY: 0, REFUTED: 0}
        for rep in self.fixture_reports:
            out[rep.status] += 1
        for rep in self.theorem_reports:
            out[rep.status] += 1
        return out

    def exit_code(self) -> int:
        counts = self.counts()
        if counts[MISMATCH] or counts[REFUTED]:
            return 1
        if counts[KNOWN_DISCREPANCY] or counts[DISCREPANCY]:
            return 2
        return 0


def run_all(minimum_points: int = 100, spot_points: int = 25, seed: int = DEFAULT_SEED) -> RunSummary:
    errata = registry.errata_signatures()
    summary = RunSummary()
    for fix in registry.load_fixtures():
        summary.fixture_reports.append(verify_fixture(fix, errata))
    for rec in registry.load_theorems():
        summary.theorem_reports.append(
            verify_theorem(rec, minimum_points=minimum_points, spot_points=spot_points, seed=seed)
        )
    return summary
