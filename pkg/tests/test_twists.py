import pytest

from ncg.clifford import GAMMA, OperatorExpr, is_bounded
from ncg.linalg import Mat
from ncg.models import manifold_twist, sm_finite
from ncg.scalars import ONE, Scalar
from ncg.triples import AlgebraSpec, Factor, manifold_triple
from ncg.twists import (Automorphism, TwistError, TwistedTriple, check_closure_under_twist,
                        check_twisted_first_order, minimal_twist, rho_adjoint, rho_product, signature,
                        twist_by_grading, twisted_commutator, validate_twisted)


def test_automorphism_algebra():
    r = Automorphism.flip([("a", "b")], fixed=["c"])
    assert r.is_involution()
    assert r.compose(r) == Automorphism.identity(["a", "b", "c"])
    assert r.inverse() == r
    assert r({"a": 1, "b": 2, "c": 3}) == {"b": 1, "a": 2, "c": 3}


def test_flip_must_match_factor_types():
    A = AlgebraSpec.of(Factor("a", "C"), Factor("b", "H"))
    assert not Automorphism.flip([("a", "b")]).is_valid_for(A)
    assert Automorphism.identity(["a", "b"]).is_valid_for(A)


def test_identity_twist_is_the_commutator():
    T = sm_finite()
    tt = TwistedTriple(T, Automorphism.identity(T.algebra.names()))
    a = T.algebra.generic("a")
    assert twisted_commutator(T.D, a, tt) == T.D.commutator(T.pi(a))


def test_diagonal_pair_recovers_the_original_representation():
    T = manifold_triple()
    tt = twist_by_grading(T)
    f = T.algebra.generic("a")
    both = {**f, **{k + "'": v for k, v in f.items()}}
    assert tt.pi(both) == T.pi(f)


def test_grading_twist_equals_minimal_twist_by_grading():
    T = manifold_triple()
    a, b = twist_by_grading(T), minimal_twist(T, T.gamma)
    x = a.algebra.generic("a")
    assert a.pi(x) == b.pi(x)
    assert a.rho == b.rho


def test_manifold_twist_axioms():
    T = manifold_twist()
    r = validate_twisted(T)
    assert r.passed, r.failures()
    assert T.R == GAMMA[0]
    assert T.grading_like


def test_manifold_twist_bounded_but_untwisted_is_not():
    T = manifold_twist()
    a = T.algebra.generic("a")
    assert is_bounded(twisted_commutator(T.D, a, T))[0]
    pa = OperatorExpr.const(T.pi(a))
    assert not is_bounded(T.D * pa - pa * T.D)[0]


def test_twisted_first_order_with_zero_operator():
    T = manifold_twist()
    assert check_twisted_first_order(T, OperatorExpr.zero(4)).satisfied


def test_r_implements_twist():
    T = manifold_twist()
    pa, pra = T.generic_pair()
    assert T.rho_op(pa) == pra


def test_rho_adjoint():
    T = manifold_twist()
    assert rho_adjoint(T, Mat.identity(4)) == Mat.identity(4)
    pa, pra = T.generic_pair()
    assert rho_adjoint(T, rho_adjoint(T, pa)) == pa
    assert rho_adjoint(T, pa) == T.pi(T.algebra.star(T.rho(T.algebra.generic("a"))))
    e0 = Mat.unit(4, 1, 0, 0)
    e2 = Mat.unit(4, 1, 2, 0)
    assert rho_product(T, e0, e2) == ONE
    assert rho_product(T, e0, e0) == Scalar.const(0)


def test_signature():
    assert signature(GAMMA[0]) == (2, 2)
    assert signature(Mat.diag([1, 1, -1])) == (2, 1)
    with pytest.raises(ValueError):
        signature(Mat.diag([1, 2]))


def test_full_algebra_is_closed():
    T = manifold_twist()
    cs, witness = check_closure_under_twist(T, T.algebra, lambda b: b)
    assert cs.satisfied and witness is None


def test_minimal_twist_rejects_bad_operators():
    T = manifold_triple()
    with pytest.raises(TwistError):
        minimal_twist(T, Mat.identity(4))
    with pytest.raises(TwistError):
        minimal_twist(T, Mat.diag([1, 1, 1, 2]))
    with pytest.raises(TwistError):
        minimal_twist(T, Mat.identity(3))

