"""Reference-table and theorem registries, loaded from the packaged data files.

Table files (one per group and distribution, under data/tables/<dist>/) hold
the expected connection, curvature, Ricci, Lie-derivative, and system tables
keyed by their source equation numbers.  The expressions are stored exactly
as displayed in the source tables, including any misprints: the comparison
engine's job is to surface those, not to hide them.

Block grammar:

    [<kind> <id>]            plain block
    [<kind> <id> perturbed]  block for the perturbed connection
    i j : <vector expr>      connection rows
    i j p : <vector expr>    curvature rows (i < j)
    i j : <scalar expr>      bilinear-form entries
    <scalar expr>            system equations, one per line
    * : 0                    shorthand for an all-zero table

G4 files may use the name `eta`; it is substituted with the requested sign
while parsing, so the polynomial alphabet itself never contains it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable

from .scalar import parse_poly, parse_vector

TABLE_KINDS = (
    "levi_civita",
    "bott",
    "curvature",
    "ricci",
    "sym_ricci",
    "lie_derivative",
    "system",
    "curvature_delta",
    "sym_ricci_delta",
)

_SYM_KINDS = {"sym_ricci", "lie_derivative", "sym_ricci_delta"}


class RegistryError(Exception):
    pass


@dataclass(frozen=True)
class Fixture:
    id: str
    kind: str
    group: str
    distribution: str
    perturbed: bool
    rows: tuple  # raw (key, expression-string) pairs, in file order

    def connection_table(self, eta=None) -> dict:
        return {key: parse_vector(expr, eta=eta) for key, expr in self.rows}

    def curvature_table(self, eta=None) -> dict:
        return {key: parse_vector(expr, eta=eta) for key, expr in self.rows}

    def bilinear_table(self, eta=None) -> dict:
        """Full 3x3 dict; symmetric kinds are mirrored from the stored i<=j half."""
        out = {key: parse_poly(expr, eta=eta) for key, expr in self.rows}
        if self.kind in _SYM_KINDS:
            for (i, j), val in list(out.items()):
                out.setdefault((j, i), val)
        return out

    def delta_table(self, eta=None) -> dict:
        if self.kind == "curvature_delta":
            return {key: parse_vector(expr, eta=eta) for key, expr in self.rows}
        return {key: parse_poly(expr, eta=eta) for key, expr in self.rows}

    def system_equations(self, eta=None) -> list:
        return [parse_poly(expr, eta=eta) for _, expr in self.rows]


def _data_text(relpath: str) -> str:
    node = resources.files("bottsol").joinpath("data")
    for part in relpath.split("/"):
        node = node.joinpath(part)
    return node.read_text()


_HEADER = re.compile(r"^\[(\w+)\s+([0-9][\w.]*)\s*(perturbed)?\]$")


def _parse_table_file(text: str, group: str, dist: str) -> list:
    fixtures = []
    kind = fid = None
    perturbed = False
    rows: list = []

    def flush():
        if kind is not None:
            fixtures.append(Fixture(fid, kind, group, dist, perturbed, tuple(rows)))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            flush()
            kind, fid, perturbed = m.group(1), m.group(2), bool(m.group(3))
            if kind not in TABLE_KINDS:
                raise RegistryError(f"{group}/{dist} line {lineno}: unknown kind {kind!r}")
            rows = []
            continue
        if kind is None:
            raise RegistryError(f"{group}/{dist} line {lineno}: content before first block")
        if kind == "system":
            rows.append((None, line))
            continue
        key_part, sep, expr = line.partition(":")
        if not sep:
            raise RegistryError(f"{group}/{dist} line {lineno}: expected 'indices : expression'")
        key_txt = key_part.strip()
        expr = expr.strip()
        if key_txt == "*":
            if expr != "0":
                raise RegistryError(f"{group}/{dist} line {lineno}: '*' rows must be zero")
            rows.append(("*", expr))
            continue
        try:
            key = tuple(int(tok) for tok in key_txt.split())
        except ValueError as exc:
            raise RegistryError(f"{group}/{dist} line {lineno}: bad indices {key_txt!r}") from exc
        rows.append((key, expr))
    flush()
    return fixtures


def _expand_star(fixtures: Iterable[Fixture]) -> list:
    """Replace '* : 0' shorthand by the explicit index set of the kind."""
    out = []
    for fix in fixtures:
        if not any(key == "*" for key, _ in fix.rows):
            out.append(fix)
            continue
        if fix.kind == "curvature":
            keys = [(i, j, p) for i in (1, 2) for j in range(i + 1, 4) for p in (1, 2, 3)]
        elif fix.kind == "ricci":
            keys = [(i, j) for i in (1, 2, 3) for j in (1, 2, 3)]
        elif fix.kind in _SYM_KINDS:
            keys = [(i, j) for i in (1, 2, 3) for j in range(i, 4)]
        else:
            raise RegistryError(f"fixture {fix.id}: '*' not supported for kind {fix.kind}")
        rows = tuple((key, "0") for key in keys)
        out.append(Fixture(fix.id, fix.kind, fix.group, fix.distribution, fix.perturbed, rows))
    return out


def load_fixtures() -> list:
    fixtures = []
    for dist in ("D", "D1", "D2"):
        for group in ("G1", "G2", "G3", "G4", "G5", "G6", "G7"):
            text = _data_text(f"tables/{dist}/{group}.tab")
            fixtures.extend(_expand_star(_parse_table_file(text, group, dist)))
    return fixtures


def fixture_index() -> dict:
    return {fix.id: fix for fix in load_fixtures()}


# --------------------------------------------------------------------------
# Theorem registry
#
#   [theorem <id> group=G1 dist=D (perturbed)? kind=<not_soliton|families>]
#   [corollary <id> dist=D kind=einstein]
#   family <label>:            starts a family (theorem blocks)
#   clause <group> <kind>:     starts a corollary clause (einstein|not_einstein)
#   bind <name> = <ratfun>
#   zero <poly>                side condition: must vanish
#   nonzero <poly>             side condition: must stay nonzero
#   completion bind/zero/...   corrected variant, kept separate from the
#                              literal statement (see errata notes)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TheoremRecord:
    id: str
    group: str | None
    distribution: str
    perturbed: bool
    kind: str  # not_soliton | families | einstein
    families: tuple = ()  # FamilyRecord, theorem kinds
    clauses: tuple = ()  # ClauseRecord, corollary kind


@dataclass(frozen=True)
class FamilyRecord:
    label: str
    printed_label: str  # branch variants a/b share one printed label
    bindings: tuple  # (name, expr-string)
    side_equal: tuple
    side_nonzero: tuple
    completion_bindings: tuple = ()
    completion_equal: tuple = ()
    completion_nonzero: tuple = ()

    def has_completion(self) -> bool:
        return bool(self.completion_bindings or self.completion_equal or self.completion_nonzero)


@dataclass(frozen=True)
class ClauseRecord:
    group: str
    kind: str  # einstein | not_einstein
    families: tuple = ()


_THM_HEADER = re.compile(r"^\[(theorem|corollary)\s+(\S+)\s+(.*?)\]$")


def _parse_kv(kv_text: str) -> dict:
    out = {}
    for tok in kv_text.split():
        if tok == "perturbed":
            out["perturbed"] = True
        elif "=" in tok:
            k, v = tok.split("=", 1)
            out[k] = v
        else:
            raise RegistryError(f"bad token {tok!r} in theorem header")
    return out


def load_theorems() -> list:
    text = _data_text("theorems.tab")
    records: list = []
    current: dict | None = None
    family: dict | None = None
    clause: dict | None = None

    def flush_family():
        nonlocal family
        if family is not None:
            rec = FamilyRecord(
                label=family["label"],
                printed_label=family["label"].rstrip("ab"),
                bindings=tuple(family["bind"]),
                side_equal=tuple(family["zero"]),
                side_nonzero=tuple(family["nonzero"]),
                completion_bindings=tuple(family["cbind"]),
                completion_equal=tuple(family["czero"]),
                completion_nonzero=tuple(family["cnonzero"]),
            )
            if clause is not None:
                clause["families"].append(rec)
            else:
                current["families"].append(rec)
        family = None

    def flush_clause():
        nonlocal clause
        flush_family()
        if clause is not None:
            current["clauses"].append(
                ClauseRecord(clause["group"], clause["kind"], tuple(clause["families"]))
            )
        clause = None

    def flush_record():
        nonlocal current
        flush_clause()
        if current is not None:
            records.append(
                TheoremRecord(
                    id=current["id"],
                    group=current.get("group"),
                    distribution=current["dist"],
                    perturbed=current.get("perturbed", False),
                    kind=current["kind"],
                    families=tuple(current["families"]),
                    clauses=tuple(current["clauses"]),
                )
            )
        current = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _THM_HEADER.match(line)
        if m:
            flush_record()
            kv = _parse_kv(m.group(3))
            current = {
                "id": m.group(2),
                "dist": kv.get("dist"),
                "kind": kv.get("kind"),
                "perturbed": kv.get("perturbed", False),
                "group": kv.get("group"),
                "families": [],
                "clauses": [],
            }
            continue
        if current is None:
            raise RegistryError(f"theorems line {lineno}: content before first block")
        if line.startswith("clause "):
            flush_clause()
            m2 = re.match(r"^clause\s+(\w+)\s+(\w+):$", line)
            if not m2:
                raise RegistryError(f"theorems line {lineno}: bad clause header")
            clause = {"group": m2.group(1), "kind": m2.group(2), "families": []}
            continue
        if line.startswith("family "):
            flush_family()
            m2 = re.match(r"^family\s+(\w+):$", line)
            if not m2:
                raise RegistryError(f"theorems line {lineno}: bad family header")
            family = {
                "label": m2.group(1),
                "bind": [],
                "zero": [],
                "nonzero": [],
                "cbind": [],
                "czero": [],
                "cnonzero": [],
            }
            continue
        completion = line.startswith("completion ")
        body = line[len("completion "):] if completion else line
        if family is None:
            raise RegistryError(f"theorems line {lineno}: directive outside a family")
        if body.startswith("bind "):
            name, _, expr = body[len("bind "):].partition("=")
            family["cbind" if completion else "bind"].append((name.strip(), expr.strip()))
        elif body.startswith("zero "):
            family["czero" if completion else "zero"].append(body[len("zero "):].strip())
        elif body.startswith("nonzero "):
            family["cnonzero" if completion else "nonzero"].append(body[len("nonzero "):].strip())
        else:
            raise RegistryError(f"theorems line {lineno}: unknown directive {body!r}")
    flush_record()
    return records


def theorem_index() -> dict:
    return {rec.id: rec for rec in load_theorems()}


# --------------------------------------------------------------------------
# Errata registry: audited, corroborated mismatches between the stored
# reference tables and the values recomputed from the structure constants.
# Each entry pins the exact location and both payloads, so a new mismatch,
# or one that silently changes, is never classified as known.  The engine
# reports matching mismatches as known discrepancies (CLI exit 2) rather
# than failures (exit 1).
#
#   fixture <id> <key>         key: indices joined by commas, or 'equations'
#   stored <canonical string>  the value as stored/displayed
#   computed <canonical str>   the recomputed value
#   note <free text>           corroboration, e.g. the consistent system line
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ErrataEntry:
    fixture_id: str
    key: str
    stored: str
    computed: str
    note: str

    def signature(self) -> tuple:
        return (self.fixture_id, self.key, self.stored, self.computed)


def load_errata() -> list:
    text = _data_text("errata.tab")
    entries = []
    pending: dict | None = None

    def flush():
        nonlocal pending
        if pending is not None:
            for field_name in ("stored", "computed"):
                if field_name not in pending:
                    raise RegistryError(
                        f"errata entry {pending['fixture_id']} {pending['key']} lacks {field_name}"
                    )
            pending.setdefault("note", "")
            entries.append(ErrataEntry(**pending))
        pending = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("fixture "):
            flush()
            parts = line.split()
            if len(parts) != 3:
                raise RegistryError(f"errata line {lineno}: expected 'fixture <id> <key>'")
            pending = {"fixture_id": parts[1], "key": parts[2]}
        elif pending is None:
            raise RegistryError(f"errata line {lineno}: directive before first fixture")
        elif line.startswith("stored "):
            pending["stored"] = line[len("stored "):].strip()
        elif line.startswith("computed "):
            pending["computed"] = line[len("computed "):].strip()
        elif line.startswith("note "):
            pending["note"] = (pending.get("note", "") + " " + line[len("note "):].strip()).strip()
        else:
            raise RegistryError(f"errata line {lineno}: unknown directive")
    flush()
    return entries


def errata_signatures() -> set:
    return {entry.signature() for entry in load_errata()}
