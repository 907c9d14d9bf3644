import pytest

from ncg.actions import (Identification, KernelMatrix, antisymmetrize, dirac_template, fermionic_kernel,
                         match_template, pair_kernel, plane_wave_substitute, standard_action, weyl_right_template,
                         weyl_template)
from ncg.clifford import PAULI, OperatorExpr
from ncg.fluctuations import selfadjoint_family
from ncg.linalg import Mat
from ncg.models import build, field_basis, field_symbols, hr_basis
from ncg.scalars import I, ZERO, Scalar, ensure_symbol

E = ensure_symbol("aE", "real")


def test_plane_wave_of_time_derivative():
    K = OperatorExpr.partial(0, 2)
    assert plane_wave_substitute(K, E) == OperatorExpr.const(Mat.identity(2).scale(I * Scalar.sym(E)))
    # spatial derivatives are untouched
    K1 = OperatorExpr.partial(1, 2)
    assert plane_wave_substitute(K1, E) == K1


def test_plane_wave_rejects_second_order():
    K = OperatorExpr.partial(0, 2) * OperatorExpr.partial(0, 2)
    with pytest.raises(ValueError):
        plane_wave_substitute(K, E)


def test_antisymmetrize():
    # ∂ᵀ = -∂, so ∂·I is already antisymmetric
    d = OperatorExpr.partial(1, 2)
    assert antisymmetrize(d) == d
    S = OperatorExpr.const(Mat.identity(2))
    assert antisymmetrize(S).is_zero()


def test_right_weyl_template():
    # i σ^μ ∂_μ with σ = (I, σ_j), written out by hand
    want = OperatorExpr.partial(0, 2).scale(I)
    for j in (1, 2, 3):
        want = want + OperatorExpr.const(PAULI[j].scale(I)) * OperatorExpr.partial(j, 2)
    assert weyl_right_template().kernel == want
    left = OperatorExpr.partial(0, 2).scale(I)
    for j in (1, 2, 3):
        left = left - OperatorExpr.const(PAULI[j].scale(I)) * OperatorExpr.partial(j, 2)
    assert weyl_template().kernel == left


def test_dirac_template_mass_blocks():
    m = ensure_symbol("am", "real")
    g = field_symbols("g")
    t = dirac_template(m, g)
    c = t.kernel.coeff(())
    assert c[0, 2] == -Scalar.sym(m) and c[2, 0] == -Scalar.sym(m)
    assert t.kernel.coeff((0,))[0, 0] == I


def test_pair_kernel_doubles_off_diagonal():
    K = KernelMatrix(OperatorExpr.partial(1, 4), [("a", [0, 1]), ("b", [2, 3])])
    assert pair_kernel(K, "a", "a") == OperatorExpr.partial(1, 2)
    K2 = KernelMatrix(OperatorExpr.const(Mat.from_rows([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])),
                      [("a", [0, 1]), ("b", [2, 3])])
    assert pair_kernel(K2, "a", "b") == OperatorExpr.const(Mat.identity(2).scale(2))


def test_same_variables_on_both_sides_never_match():
    setup = standard_action("manifold-twist")
    res = setup.run()
    assert not res.matched
    assert "same" in res.reason


def test_kernel_of_free_manifold_is_antisymmetric():
    T = build("manifold-twist")
    K = fermionic_kernel(T, T.D, hr_basis(1))
    assert K.is_antisymmetric()


def test_unknown_action_setup():
    with pytest.raises(ValueError):
        standard_action("sm")


def test_doubled_manifold_match_is_basis_order_independent():
    # listing φ before ζ in the subspace basis must not change the outcome
    T = build("doubled-manifold")
    D = selfadjoint_family(T).express(field_basis("doubled-manifold"))
    hb = hr_basis(2)
    order = [2, 3, 0, 1]
    K = fermionic_kernel(T, D, [hb[k] for k in order], [("φ", [0, 1]), ("ζ", [2, 3])])
    f, g = field_symbols("f"), field_symbols("g")
    K = plane_wave_substitute(K, f[0])
    ident = Identification({"ψ_l": ("φ", PAULI[2].scale(-I))}, {"ψ_l": ("ζ", Mat.identity(2))},
                           {x: ZERO for x in g})
    res = match_template(K, weyl_template().planewave(f[0]), ident, 4)
    assert res.matched, res.residual.to_json()


def test_identification_must_cover_slots():
    setup = standard_action("doubled-manifold")
    with pytest.raises(ValueError):
        match_template(setup.kernel, weyl_right_template(), setup.ident, 4)


@pytest.mark.parametrize("name", ["doubled-manifold", "ed"])
def test_match_needs_the_field_energy(name):
    assert standard_action(name).run().matched
    off = standard_action(name, planewave="aE")
    assert not off.expect_match and not off.run().matched
