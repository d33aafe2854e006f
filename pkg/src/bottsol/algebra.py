"""Three-dimensional Lorentzian Lie algebras in a pseudo-orthonormal frame.

The frame is e1, e2, e3 with metric diag(+1, +1, -1); e3 is the timelike
direction.  A LieAlgebraSpec stores structure constants c[i][j][k] meaning
[e_i, e_j] = sum_k c[i][j][k] e_k, together with the admissibility
constraints of the catalog entry it came from.  Constraints are carried as
data only: symbolic results are never reduced by them, so computed tables
stay literally comparable with the reference tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .scalar import ParseError, Poly, parse_poly

METRIC_SIGNS = (1, 1, -1)

GROUPS = ("G1", "G2", "G3", "G4", "G5", "G6", "G7")


class UnknownId(Exception):
    """Catalog lookup with an identifier outside G1..G7."""


class InvalidAlgebra(Exception):
    """A custom structure-constant table failed validation."""


@dataclass(frozen=True)
class Vec3:
    """Vector in the frame: components along (e1, e2, e3)."""

    c: tuple

    @staticmethod
    def zero() -> "Vec3":
        return Vec3((Poly.zero(), Poly.zero(), Poly.zero()))

    @staticmethod
    def basis(i: int) -> "Vec3":
        comps = [Poly.zero(), Poly.zero(), Poly.zero()]
        comps[i - 1] = Poly.const(1)
        return Vec3(tuple(comps))

    @staticmethod
    def of(c1, c2, c3) -> "Vec3":
        conv = lambda x: x if isinstance(x, Poly) else Poly.const(x)
        return Vec3((conv(c1), conv(c2), conv(c3)))

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(tuple(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(tuple(a - b for a, b in zip(self.c, other.c)))

    def __neg__(self) -> "Vec3":
        return Vec3(tuple(-a for a in self.c))

    def scale(self, factor) -> "Vec3":
        f = factor if isinstance(factor, Poly) else Poly.const(factor)
        return Vec3(tuple(f * a for a in self.c))

    def is_zero(self) -> bool:
        return all(comp.is_zero() for comp in self.c)

    def __str__(self) -> str:
        pieces = []
        for k, comp in enumerate(self.c, start=1):
            if comp.is_zero():
                continue
            body = str(comp)
            if body in ("1", "-1"):
                pieces.append(body[:-1] + f"e{k}")
            elif len(comp.terms) == 1:
                pieces.append(f"{body}*e{k}")
            else:
                pieces.append(f"({body})*e{k}")
        if not pieces:
            return "0"
        out = pieces[0]
        for piece in pieces[1:]:
            out += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return out


def metric_pair(x: Vec3, y: Vec3) -> Poly:
    """g(x, y) = x1*y1 + x2*y2 - x3*y3."""
    total = Poly.zero()
    for sign, a, b in zip(METRIC_SIGNS, x.c, y.c):
        total = total + (a * b).scaled(sign)
    return total


@dataclass(frozen=True)
class LieAlgebraSpec:
    label: str
    c: tuple  # c[i][j] is a Vec3, 0-indexed
    equality_constraints: tuple = ()
    nonzero_constraints: tuple = ()
    parameters: tuple = ()  # group parameters that occur, in PARAMS order
    unimodular: bool | None = None  # classification metadata only
    eta_sign: int | None = None  # only set for G4

    def bracket_basis(self, i: int, j: int) -> Vec3:
        """[e_i, e_j] for 1-based indices."""
        return self.c[i - 1][j - 1]


def _c_from_rows(rows: Mapping[tuple, Vec3]) -> tuple:
    """Build the full antisymmetric c array from the three independent rows."""
    table = [[Vec3.zero() for _ in range(3)] for _ in range(3)]
    for (i, j), vec in rows.items():
        table[i - 1][j - 1] = vec
        table[j - 1][i - 1] = -vec
    return tuple(tuple(row) for row in table)


def bracket(spec: LieAlgebraSpec, x: Vec3, y: Vec3) -> Vec3:
    """Bilinear extension of the structure constants."""
    out = Vec3.zero()
    for i in range(3):
        for j in range(3):
            coeff = x.c[i] * y.c[j]
            if coeff.is_zero():
                continue
            out = out + spec.c[i][j].scale(coeff)
    return out


def jacobi_defect(spec: LieAlgebraSpec) -> dict:
    """[[ei,ej],ek] + [[ej,ek],ei] + [[ek,ei],ej] per basis triple i<j<k."""
    out = {}
    for (i, j, k) in [(1, 2, 3)]:
        ei, ej, ek = Vec3.basis(i), Vec3.basis(j), Vec3.basis(k)
        defect = (
            bracket(spec, bracket(spec, ei, ej), ek)
            + bracket(spec, bracket(spec, ej, ek), ei)
            + bracket(spec, bracket(spec, ek, ei), ej)
        )
        out[(i, j, k)] = defect
    return out


def jacobi_holds(spec: LieAlgebraSpec) -> bool:
    return all(vec.is_zero() for vec in jacobi_defect(spec).values())


def _p(expr: str, eta=None) -> Poly:
    return parse_poly(expr, eta=eta)


def _v(expr: str, eta=None) -> Vec3:
    from .scalar import parse_vector

    return Vec3(parse_vector(expr, eta=eta))


def catalog(group: str, eta_sign: int | None = None) -> LieAlgebraSpec:
    """Catalog entry with its bracket table and admissibility constraints.

    G4 requires eta_sign in {+1, -1}; its bracket table is instantiated at
    that sign so the coefficient ring stays a plain polynomial ring.
    """
    if group not in GROUPS:
        raise UnknownId(f"unknown group {group!r}; expected one of {GROUPS}")
    if group == "G4":
        if eta_sign not in (1, -1):
            raise UnknownId("G4 needs eta_sign=+1 or -1")
    elif eta_sign is not None:
        raise UnknownId(f"eta_sign applies only to G4, not {group}")

    if group == "G1":
        rows = {
            (1, 2): _v("alpha*e1 - beta*e3"),
            (1, 3): _v("-alpha*e1 - beta*e2"),
            (2, 3): _v("beta*e1 + alpha*e2 + alpha*e3"),
        }
        return LieAlgebraSpec(
            "G1", _c_from_rows(rows),
            nonzero_constraints=(_p("alpha"),),
            parameters=("alpha", "beta"), unimodular=True,
        )
    if group == "G2":
        rows = {
            (1, 2): _v("gamma*e2 - beta*e3"),
            (1, 3): _v("-beta*e2 - gamma*e3"),
            (2, 3): _v("alpha*e1"),
        }
        return LieAlgebraSpec(
            "G2", _c_from_rows(rows),
            nonzero_constraints=(_p("gamma"),),
            parameters=("alpha", "beta", "gamma"), unimodular=True,
        )
    if group == "G3":
        rows = {
            (1, 2): _v("-gamma*e3"),
            (1, 3): _v("-beta*e2"),
            (2, 3): _v("alpha*e1"),
        }
        return LieAlgebraSpec(
            "G3", _c_from_rows(rows),
            parameters=("alpha", "beta", "gamma"), unimodular=True,
        )
    if group == "G4":
        eta = eta_sign
        rows = {
            (1, 2): _v("-e2 + (2*eta - beta)*e3", eta=eta),
            (1, 3): _v("-beta*e2 + e3", eta=eta),
            (2, 3): _v("alpha*e1", eta=eta),
        }
        return LieAlgebraSpec(
            "G4", _c_from_rows(rows),
            parameters=("alpha", "beta"), unimodular=True, eta_sign=eta,
        )
    if group == "G5":
        rows = {
            (1, 2): Vec3.zero(),
            (1, 3): _v("alpha*e1 + beta*e2"),
            (2, 3): _v("gamma*e1 + delta*e2"),
        }
        return LieAlgebraSpec(
            "G5", _c_from_rows(rows),
            equality_constraints=(_p("alpha*gamma + beta*delta"),),
            nonzero_constraints=(_p("alpha + delta"),),
            parameters=("alpha", "beta", "gamma", "delta"), unimodular=False,
        )
    if group == "G6":
        rows = {
            (1, 2): _v("alpha*e2 + beta*e3"),
            (1, 3): _v("gamma*e2 + delta*e3"),
            (2, 3): Vec3.zero(),
        }
        return LieAlgebraSpec(
            "G6", _c_from_rows(rows),
            equality_constraints=(_p("alpha*gamma - beta*delta"),),
            nonzero_constraints=(_p("alpha + delta"),),
            parameters=("alpha", "beta", "gamma", "delta"), unimodular=False,
        )
    # G7
    rows = {
        (1, 2): _v("-alpha*e1 - beta*e2 - beta*e3"),
        (1, 3): _v("alpha*e1 + beta*e2 + beta*e3"),
        (2, 3): _v("gamma*e1 + delta*e2 + delta*e3"),
    }
    return LieAlgebraSpec(
        "G7", _c_from_rows(rows),
        equality_constraints=(_p("alpha*gamma"),),
        nonzero_constraints=(_p("alpha + delta"),),
        parameters=("alpha", "beta", "gamma", "delta"), unimodular=False,
    )


def catalog_variants(group: str) -> list:
    """All parameter-sign instantiations of a catalog entry (two for G4)."""
    if group == "G4":
        return [catalog("G4", eta_sign=1), catalog("G4", eta_sign=-1)]
    return [catalog(group)]


def custom_spec(
    rows: Mapping[tuple, Vec3],
    equality_constraints: Sequence[Poly] = (),
    nonzero_constraints: Sequence[Poly] = (),
    label: str = "custom",
) -> LieAlgebraSpec:
    params = set()
    for vec in rows.values():
        for comp in vec.c:
            params |= comp.params()
    return LieAlgebraSpec(
        label,
        _c_from_rows(dict(rows)),
        equality_constraints=tuple(equality_constraints),
        nonzero_constraints=tuple(nonzero_constraints),
        parameters=tuple(sorted(params)),
    )


def screen_jacobi(spec: LieAlgebraSpec, seed: int = 0, points: int = 10, symbolic: bool = False):
    """Cheap admission gate for custom specs.

    Evaluates the Jacobi defect at `points` random rational points (or checks
    it symbolically when symbolic=True) and raises InvalidAlgebra on failure.
    """
    if symbolic:
        if not jacobi_holds(spec):
            raise InvalidAlgebra("Jacobi identity fails symbolically")
        return
    import random

    rng = random.Random(seed)
    defects = jacobi_defect(spec)
    names = sorted({name for vec in defects.values() for comp in vec.c for name in comp.params()})
    for _ in range(points):
        point = {name: Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for name in names}
        for triple, vec in defects.items():
            values = [comp.eval_at(point) for comp in vec.c]
            if any(v != 0 for v in values):
                raise InvalidAlgebra(
                    f"Jacobi identity fails on triple {triple} at {point}"
                )


# --------------------------------------------------------------------------
# Custom algebra input files
#
#   # comments and blank lines are ignored
#   [e1,e2] = alpha*e1 - beta*e3
#   [e1,e3] = 0
#   [e2,e3] = beta*e1
#   require_zero alpha*gamma + beta*delta      (optional, repeatable)
#   require_nonzero alpha + delta              (optional, repeatable)
# --------------------------------------------------------------------------

_BRACKET_KEYS = {"[e1,e2]": (1, 2), "[e1,e3]": (1, 3), "[e2,e3]": (2, 3)}


def parse_custom_file(text: str, label: str = "custom") -> LieAlgebraSpec:
    rows: dict = {}
    eq: list = []
    nz: list = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("require_zero"):
                eq.append(parse_poly(line[len("require_zero"):].strip()))
            elif line.startswith("require_nonzero"):
                nz.append(parse_poly(line[len("require_nonzero"):].strip()))
            else:
                lhs, _, rhs = line.partition("=")
                key = lhs.replace(" ", "")
                if key not in _BRACKET_KEYS or not rhs.strip():
                    raise InvalidAlgebra(f"line {lineno}: expected '[ei,ej] = <vector>'")
                if _BRACKET_KEYS[key] in rows:
                    raise InvalidAlgebra(f"line {lineno}: duplicate bracket {key}")
                rhs_text = rhs.strip()
                rows[_BRACKET_KEYS[key]] = _v(rhs_text) if rhs_text != "0" else Vec3.zero()
        except ParseError as exc:
            raise InvalidAlgebra(f"line {lineno}: {exc}") from exc
    missing = set(_BRACKET_KEYS.values()) - set(rows)
    if missing:
        raise InvalidAlgebra(f"missing bracket rows: {sorted(missing)}")
    return custom_spec(rows, eq, nz, label=label)
