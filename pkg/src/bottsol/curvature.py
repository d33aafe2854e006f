"""Curvature tensor, Ricci form, and its symmetrization."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import LieAlgebraSpec, Vec3, bracket
from .connection import Connection, apply
from .scalar import Poly


@dataclass(frozen=True)
class CurvatureTensor:
    """r[i][j][p] = R(e_i, e_j) e_p, 0-indexed storage, 1-based access."""

    r: tuple

    def at(self, i: int, j: int, p: int) -> Vec3:
        return self.r[i - 1][j - 1][p - 1]

    def entries(self):
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                for p in (1, 2, 3):
                    yield (i, j, p), self.at(i, j, p)

    def __str__(self) -> str:
        return "\n".join(f"R(e{i},e{j})e{p} = {vec}" for (i, j, p), vec in self.entries())


@dataclass(frozen=True)
class BilinearForm:
    """3x3 matrix of scalars; not necessarily symmetric."""

    m: tuple

    def at(self, i: int, j: int) -> Poly:
        return self.m[i - 1][j - 1]

    def entries(self):
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                yield (i, j), self.at(i, j)

    def is_symmetric(self) -> bool:
        return all(self.at(i, j) == self.at(j, i) for i in (1, 2, 3) for j in (1, 2, 3))

    def __str__(self) -> str:
        return "\n".join(
            "[ " + ", ".join(str(self.at(i, j)) for j in (1, 2, 3)) + " ]" for i in (1, 2, 3)
        )


def riemann(spec: LieAlgebraSpec, conn: Connection) -> CurvatureTensor:
    """R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.

    The same connection is used in all three terms, including the bracket
    term.
    """
    basis = [Vec3.basis(i) for i in (1, 2, 3)]
    table = []
    for i in range(3):
        plane_i = []
        for j in range(3):
            fibre = []
            for p in range(3):
                value = (
                    apply(conn, basis[i], apply(conn, basis[j], basis[p]))
                    - apply(conn, basis[j], apply(conn, basis[i], basis[p]))
                    - apply(conn, bracket(spec, basis[i], basis[j]), basis[p])
                )
                fibre.append(value)
            plane_i.append(tuple(fibre))
        table.append(tuple(plane_i))
    return CurvatureTensor(tuple(table))


def ricci(curv: CurvatureTensor) -> BilinearForm:
    """Signed frame trace:
    rho(X,Y) = -g(R(X,e1)Y,e1) - g(R(X,e2)Y,e2) + g(R(X,e3)Y,e3).

    With the metric signs folded in, every term contributes with weight -1:
    rho(e_i, e_j) = -sum_k [R(e_i, e_k) e_j]_k.  Generally not symmetric.
    """
    table = []
    for i in (1, 2, 3):
        row = []
        for j in (1, 2, 3):
            total = Poly.zero()
            for k in (1, 2, 3):
                total = total - curv.at(i, k, j).c[k - 1]
            row.append(total)
        table.append(tuple(row))
    return BilinearForm(tuple(table))


def symmetrize(rho: BilinearForm) -> BilinearForm:
    half = Fraction(1, 2)
    table = tuple(
        tuple((rho.at(i, j) + rho.at(j, i)).scaled(half) for j in (1, 2, 3)) for i in (1, 2, 3)
    )
    return BilinearForm(table)


def curvature_delta(base: CurvatureTensor, perturbed: CurvatureTensor) -> dict:
    """Triples (i,j,p) with i<j where the two tensors differ, with both values."""
    out = {}
    for i in (1, 2, 3):
        for j in range(i + 1, 4):
            for p in (1, 2, 3):
                if base.at(i, j, p) != perturbed.at(i, j, p):
                    out[(i, j, p)] = (base.at(i, j, p), perturbed.at(i, j, p))
    return out
