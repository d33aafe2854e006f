"""Cached end-to-end computations per (group, eta, distribution, perturbed)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import algebra, connection, curvature, soliton
from .algebra import LieAlgebraSpec
from .connection import Connection, Distribution
from .curvature import BilinearForm, CurvatureTensor
from .soliton import SolitonSystem


@dataclass(frozen=True)
class Stage:
    spec: LieAlgebraSpec
    levi_civita: Connection
    bott: Connection | None
    conn: Connection  # the connection the remaining stages are built on
    riemann: CurvatureTensor
    ricci: BilinearForm
    sym_ricci: BilinearForm
    lie_derivative: BilinearForm
    system: SolitonSystem


@lru_cache(maxsize=None)
def stage(group: str, dist_name: str | None, perturbed: bool = False, eta_sign: int | None = None) -> Stage:
    """Build every derived object for one configuration.

    dist_name None means the Levi-Civita connection itself is the object of
    interest (no Bott stage); perturbed requires a distribution.
    """
    spec = algebra.catalog(group, eta_sign=eta_sign)
    lc = connection.levi_civita(spec)
    if dist_name is None:
        conn = lc
        bott_conn = None
    else:
        dist: Distribution = connection.DISTRIBUTIONS[dist_name]
        bott_conn = connection.bott(spec, lc, dist)
        conn = connection.perturb(bott_conn) if perturbed else bott_conn
    curv = curvature.riemann(spec, conn)
    rho = curvature.ricci(curv)
    rho_sym = curvature.symmetrize(rho)
    lie = soliton.lie_derivative_form(conn, soliton.soliton_vector())
    system = soliton.build_system(spec, conn)
    return Stage(spec, lc, bott_conn, conn, curv, rho, rho_sym, lie, system)


def eta_signs(group: str) -> tuple:
    return (1, -1) if group == "G4" else (None,)


def all_configurations(perturbed_too: bool = True):
    """Yield (group, dist_name, perturbed, eta_sign) over the whole catalog."""
    for group in algebra.GROUPS:
        for dist_name in ("D", "D1", "D2"):
            for perturbed in ((False, True) if perturbed_too else (False,)):
                for eta in eta_signs(group):
                    yield group, dist_name, perturbed, eta
