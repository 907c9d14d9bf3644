from hypothesis import given, settings, strategies as st

from ncg.clifford import (GAMMA, GAMMA_BASIS_TAG, PAULI, Germ, OperatorExpr, charge_conjugation, dirac_free,
                          germ_commutator, intertwiner_rank, is_bounded, solve_intertwiner_constraint)
from ncg.linalg import Mat
from ncg.scalars import I, ONE, Scalar


def test_clifford_relations():
    assert GAMMA.clifford_defects() == []
    assert GAMMA.gamma5 * GAMMA.gamma5 == Mat.identity(4)
    for g in GAMMA.gammas:
        assert g.adjoint() == g
        assert g.anticommutator(GAMMA.gamma5).is_zero()
    assert GAMMA.tag == GAMMA_BASIS_TAG


def test_gamma5_is_chirality_diagonal():
    assert GAMMA.gamma5 == Mat.diag([1, 1, -1, -1]) or GAMMA.gamma5 == Mat.diag([-1, -1, 1, 1])


def test_pauli_algebra():
    assert PAULI[1] * PAULI[2] == PAULI[3].scale(I)


def test_dirac_coefficients():
    D = dirac_free()
    assert D.degree() == 1
    assert D.coeff((1,)) == GAMMA[1].scale(-I)
    assert D.bounded_part().is_zero()


def test_dirac_is_formally_selfadjoint():
    D = dirac_free()
    assert D.adjoint() == D


def test_germ_commutator_is_clifford_multiplication():
    f = Germ("cf", "real")
    c = germ_commutator(dirac_free(), f.times(Mat.identity(4)))
    assert c.degree() == 0
    want = Mat.zeros(4)
    for mu, d in enumerate(f.gradient):
        want = want + GAMMA[mu].scale(-I * Scalar.sym(d))
    assert c.bounded_part() == want
    assert is_bounded(c)[0]


def test_twisted_germ_commutator_is_unbounded():
    f = Germ("cg", "real")
    F = f.times(Mat.identity(4))
    ok, cs = is_bounded(germ_commutator(dirac_free(), F, F.scale(-1)))
    assert not ok and len(cs) > 0


def test_intertwiner_rank():
    assert intertwiner_rank() == 30


def test_intertwiners_are_scalar():
    sol, A, B = solve_intertwiner_constraint()
    assert sol.dimension == 2
    for mu in range(4):
        assert A * GAMMA[mu] == GAMMA[mu] * B


def test_charge_conjugation():
    J = charge_conjugation()
    assert J.is_antiunitary()
    assert J.square() == Mat.identity(4).scale(-1)
    assert dirac_free().conjugate_by(J) == dirac_free()
    assert J.matrix == (GAMMA[0] * GAMMA[2]).scale(I)
    assert J.conjugate(GAMMA.gamma5) == GAMMA.gamma5


def test_charge_conjugation_phase_only_rescales():
    assert charge_conjugation(ONE).matrix.scale(-I) == charge_conjugation().matrix


def test_plane_wave_substitution():
    D = dirac_free()
    P = D.substitute_partial(0, I)
    assert P.coeff(()) == GAMMA[0]
    assert P.degree() == 1


mu_idx = st.integers(0, 3)


@settings(max_examples=30, deadline=None)
@given(mu_idx, mu_idx)
def test_partials_commute(a, b):
    pa, pb = OperatorExpr.partial(a, 2), OperatorExpr.partial(b, 2)
    assert (pa * pb - pb * pa).is_zero()


@settings(max_examples=30, deadline=None)
@given(mu_idx)
def test_leibniz_rule(mu):
    f = Germ("ch", "complex")
    F = f.times(Mat.identity(2))
    d = OperatorExpr.partial(mu, 2)
    assert d.commutator(F).bounded_part() == F.diff(mu)
