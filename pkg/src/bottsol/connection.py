"""Levi-Civita, Bott, and perturbed Bott connections on the fixed frame.

A Connection stores gamma[i][j] = nabla_{e_i} e_j as a Vec3 (0-indexed
internally, 1-based in all I/O).  All vector fields handled here have
constant frame components, so the connection acts bilinearly in both slots;
that restriction is what makes the purely algebraic treatment exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import METRIC_SIGNS, LieAlgebraSpec, Vec3, bracket, metric_pair
from .scalar import Poly

LEVI_CIVITA = "levi_civita"
BOTT = "bott"
PERTURBED_BOTT = "perturbed_bott"


class KindMismatch(Exception):
    """Operation applied to a connection of the wrong kind."""


@dataclass(frozen=True)
class Distribution:
    """A coordinate 2-plane and its complementary normal direction."""

    name: str
    plane: tuple
    normal: int

    def __post_init__(self):
        if sorted((*self.plane, self.normal)) != [1, 2, 3]:
            raise ValueError("plane and normal must partition {1,2,3}")

    def project_plane(self, v: Vec3) -> Vec3:
        comps = [Poly.zero()] * 3
        for i in self.plane:
            comps[i - 1] = v.c[i - 1]
        return Vec3(tuple(comps))

    def project_normal(self, v: Vec3) -> Vec3:
        comps = [Poly.zero()] * 3
        comps[self.normal - 1] = v.c[self.normal - 1]
        return Vec3(tuple(comps))


D = Distribution("D", (1, 2), 3)
D1 = Distribution("D1", (1, 3), 2)
D2 = Distribution("D2", (2, 3), 1)

DISTRIBUTIONS = {"D": D, "D1": D1, "D2": D2}


@dataclass(frozen=True)
class Connection:
    kind: str
    gamma: tuple  # gamma[i][j]: Vec3, 0-indexed
    distribution: Distribution | None = None

    def row(self, i: int, j: int) -> Vec3:
        """nabla_{e_i} e_j for 1-based indices."""
        return self.gamma[i - 1][j - 1]

    def rows(self):
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                yield (i, j), self.gamma[i - 1][j - 1]

    def __str__(self) -> str:
        return "\n".join(f"nabla[e{i}]e{j} = {vec}" for (i, j), vec in self.rows())


def levi_civita(spec: LieAlgebraSpec) -> Connection:
    """Unique torsion-free metric connection of the left-invariant metric.

    On a frame of left-invariant fields the Koszul identity loses its
    derivative terms:  2 g(nabla_{e_i} e_j, e_k)
        = g([e_i,e_j], e_k) - g([e_j,e_k], e_i) + g([e_k,e_i], e_j).
    """
    basis = [Vec3.basis(i) for i in (1, 2, 3)]
    table = []
    for i in range(3):
        row = []
        for j in range(3):
            comps = []
            for k in range(3):
                g1 = metric_pair(bracket(spec, basis[i], basis[j]), basis[k])
                g2 = metric_pair(bracket(spec, basis[j], basis[k]), basis[i])
                g3 = metric_pair(bracket(spec, basis[k], basis[i]), basis[j])
                comps.append((g1 - g2 + g3).scaled(Poly.const(METRIC_SIGNS[k]).constant_value() / 2))
            row.append(Vec3(tuple(comps)))
        table.append(tuple(row))
    return Connection(LEVI_CIVITA, tuple(table))


def bott(spec: LieAlgebraSpec, lc: Connection, dist: Distribution) -> Connection:
    """Casewise projection connection attached to the distribution.

    plane/plane -> plane projection of the Levi-Civita row;
    normal/plane -> plane projection of the bracket;
    plane/normal -> normal projection of the bracket;
    normal/normal -> normal projection of the Levi-Civita row.
    """
    if lc.kind != LEVI_CIVITA:
        raise KindMismatch("bott() needs the Levi-Civita connection as input")
    basis = [Vec3.basis(i) for i in (1, 2, 3)]
    table = [[None] * 3 for _ in range(3)]
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i in dist.plane and j in dist.plane:
                vec = dist.project_plane(lc.row(i, j))
            elif i == dist.normal and j in dist.plane:
                vec = dist.project_plane(bracket(spec, basis[i - 1], basis[j - 1]))
            elif i in dist.plane and j == dist.normal:
                vec = dist.project_normal(bracket(spec, basis[i - 1], basis[j - 1]))
            else:
                vec = dist.project_normal(lc.row(i, j))
            table[i - 1][j - 1] = vec
    return Connection(BOTT, tuple(tuple(row) for row in table), dist)


def perturb(base: Connection) -> Connection:
    """Add the rank-one term a0 along the normal direction.

    Only gamma[n][n] changes, gaining +a0*e_n where n is the normal index.
    """
    if base.kind != BOTT:
        raise KindMismatch("perturb() applies to Bott connections only")
    dist = base.distribution
    n = dist.normal
    bump = Vec3.basis(n).scale(Poly.var("a0"))
    table = [list(row) for row in base.gamma]
    table[n - 1][n - 1] = table[n - 1][n - 1] + bump
    return Connection(PERTURBED_BOTT, tuple(tuple(row) for row in table), dist)


def apply(conn: Connection, x: Vec3, y: Vec3) -> Vec3:
    """nabla_x y by bilinear expansion (valid for constant-component fields)."""
    out = Vec3.zero()
    for i in range(3):
        for j in range(3):
            coeff = x.c[i] * y.c[j]
            if coeff.is_zero():
                continue
            out = out + conn.gamma[i][j].scale(coeff)
    return out
