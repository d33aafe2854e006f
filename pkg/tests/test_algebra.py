import pytest

from bottsol.algebra import (
    GROUPS,
    InvalidAlgebra,
    UnknownId,
    Vec3,
    bracket,
    catalog,
    catalog_variants,
    custom_spec,
    jacobi_defect,
    jacobi_holds,
    metric_pair,
    parse_custom_file,
    screen_jacobi,
)
from bottsol.scalar import Poly, parse_vector


def V(text):
    return Vec3(parse_vector(text))


E1, E2, E3 = Vec3.basis(1), Vec3.basis(2), Vec3.basis(3)


class TestCatalog:
    def test_g1_bracket_rows(self):
        g1 = catalog("G1")
        assert g1.bracket_basis(2, 3) == V("beta*e1 + alpha*e2 + alpha*e3")
        assert g1.bracket_basis(1, 2) == V("alpha*e1 - beta*e3")

    def test_g5_first_bracket_vanishes(self):
        assert catalog("G5").bracket_basis(1, 2).is_zero()

    def test_g3_row(self):
        assert catalog("G3").bracket_basis(1, 3) == V("-beta*e2")

    def test_g4_needs_eta(self):
        with pytest.raises(UnknownId):
            catalog("G4")
        with pytest.raises(UnknownId):
            catalog("G1", eta_sign=1)
        with pytest.raises(UnknownId):
            catalog("G8")
        plus = catalog("G4", eta_sign=1)
        minus = catalog("G4", eta_sign=-1)
        assert plus.bracket_basis(1, 2) != minus.bracket_basis(1, 2)

    def test_constraints_attached(self):
        assert [str(p) for p in catalog("G5").equality_constraints] == ["alpha*gamma + beta*delta"]
        assert [str(p) for p in catalog("G6").equality_constraints] == ["alpha*gamma - beta*delta"]
        assert [str(p) for p in catalog("G7").equality_constraints] == ["alpha*gamma"]
        assert [str(p) for p in catalog("G1").nonzero_constraints] == ["alpha"]
        assert [str(p) for p in catalog("G2").nonzero_constraints] == ["gamma"]

    def test_unimodularity_metadata(self):
        assert all(catalog_variants(g)[0].unimodular for g in ("G1", "G2", "G3", "G4"))
        assert not any(catalog_variants(g)[0].unimodular for g in ("G5", "G6", "G7"))


class TestBracket:
    def test_bilinearity_against_g1_row(self):
        g1 = catalog("G1")
        assert bracket(g1, E1, E2) == V("alpha*e1 - beta*e3")

    def test_antisymmetry_on_vectors(self):
        g1 = catalog("G1")
        v = Vec3.of(Poly.var("mu1"), Poly.var("mu2"), Poly.var("mu3"))
        assert bracket(g1, v, v).is_zero()

    def test_reversed_row(self):
        g5 = catalog("G5")
        assert bracket(g5, E3, E1) == V("-alpha*e1 - beta*e2")

    def test_structural_antisymmetry(self):
        for group in GROUPS:
            for spec in catalog_variants(group):
                for i in range(3):
                    for j in range(3):
                        assert spec.c[i][j] == -spec.c[j][i]


class TestJacobi:
    def test_catalog_is_jacobi_flat(self):
        for group in GROUPS:
            for spec in catalog_variants(group):
                assert jacobi_holds(spec), f"{group} fails the Jacobi identity"

    def test_abelian(self):
        spec = custom_spec({(1, 2): Vec3.zero(), (1, 3): Vec3.zero(), (2, 3): Vec3.zero()})
        assert jacobi_holds(spec)

    def test_failing_custom_spec(self):
        # [e1,e2]=e3, [e1,e3]=0, [e2,e3]=e2: by direct expansion the cyclic
        # sum is [[e1,e2],e3] + [[e2,e3],e1] + [[e3,e1],e2]
        #       = [e3,e3] + [e2,e1] + 0 = -e3.
        spec = custom_spec({(1, 2): V("e3"), (1, 3): Vec3.zero(), (2, 3): V("e2")})
        defect = jacobi_defect(spec)[(1, 2, 3)]
        assert defect == V("-e3")
        with pytest.raises(InvalidAlgebra):
            screen_jacobi(spec)
        with pytest.raises(InvalidAlgebra):
            screen_jacobi(spec, symbolic=True)


class TestMetric:
    def test_timelike_direction(self):
        assert metric_pair(E3, E3) == Poly.const(-1)

    def test_orthonormality(self):
        assert metric_pair(E1, E2).is_zero()
        assert metric_pair(E1, E1) == Poly.const(1)

    def test_component_extraction(self):
        v = Vec3.of(Poly.var("mu1"), Poly.var("mu2"), Poly.var("mu3"))
        assert metric_pair(v, E2) == Poly.var("mu2")
        assert metric_pair(v, E3) == -Poly.var("mu3")

    def test_symmetry_and_bilinearity(self):
        v = Vec3.of(Poly.var("mu1"), Poly.var("mu2"), Poly.var("mu3"))
        w = Vec3.of(Poly.var("alpha"), Poly.zero(), Poly.var("beta"))
        assert metric_pair(v, w) == metric_pair(w, v)
        assert metric_pair(v + w, w) == metric_pair(v, w) + metric_pair(w, w)


class TestCustomFile:
    GOOD = """
    # heisenberg-like example
    [e1,e2] = gamma*e3
    [e1,e3] = 0
    [e2,e3] = 0
    require_nonzero gamma
    """

    def test_parse_and_screen(self):
        spec = parse_custom_file(self.GOOD)
        assert spec.bracket_basis(1, 2) == V("gamma*e3")
        assert [str(p) for p in spec.nonzero_constraints] == ["gamma"]
        screen_jacobi(spec)
        screen_jacobi(spec, symbolic=True)

    def test_missing_row(self):
        with pytest.raises(InvalidAlgebra):
            parse_custom_file("[e1,e2] = gamma*e3")

    def test_bad_expression(self):
        with pytest.raises(InvalidAlgebra):
            parse_custom_file("[e1,e2] = foo*e3\n[e1,e3] = 0\n[e2,e3] = 0")

    def test_duplicate_row(self):
        text = "[e1,e2] = e3\n[e1,e2] = e2\n[e1,e3] = 0\n[e2,e3] = 0"
        with pytest.raises(InvalidAlgebra):
            parse_custom_file(text)
