import json

import pytest

from ncg.clifford import GAMMA
from ncg.linalg import AntilinearOp, Mat
from ncg.models import sm_finite
from ncg.scalars import Scalar, ensure_symbol
from ncg.triples import (AlgebraSpec, Factor, IndexScheme, RealSpectralTriple, Representation, check_first_order,
                         check_order_zero, ko_dimension, manifold_triple, product_triple, rep_is_multiplicative,
                         triple_from_config, triple_to_config, unitary_group_dim, validate_triple)
from ncg.clifford import OperatorExpr

m = ensure_symbol("tm", "complex")


def two_point(gamma=None, D=None):
    A = AlgebraSpec.of(Factor("u", "C"), Factor("v", "C"))
    rep = Representation(2).place("u", [0]).place("v", [1])
    if D is None:
        D = Mat.from_rows([[0, Scalar.sym(m)], [Scalar.sym(m.conj()), 0]])
    G = Mat.diag([1, -1]) if gamma is None else gamma
    return RealSpectralTriple("two-point", A, rep, OperatorExpr.const(D), AntilinearOp(Mat.identity(2)), G)


def test_sm_finite_is_a_real_triple():
    r = validate_triple(sm_finite())
    assert r.passed, r.failures()
    assert r.signs == (1, 1, -1)
    assert r.ko_dim == 6


def test_grading_identity_fails():
    T = sm_finite()
    T.gamma = Mat.identity(T.dim)
    r = validate_triple(T)
    assert not r.passed
    assert "grading anticommutes with D" in r.failures()


def test_two_point_first_order_constrained():
    T = two_point()
    assert check_order_zero(T).satisfied
    cs = check_first_order(T)
    assert not cs.satisfied
    assert check_first_order(T, OperatorExpr.zero(2)).satisfied


def test_commutative_order_zero():
    A = AlgebraSpec.of(Factor("u", "C"), Factor("v", "C"), Factor("w", "C"))
    rep = Representation(3).place("u", [0]).place("v", [1]).place("w", [2])
    T = RealSpectralTriple("three", A, rep, OperatorExpr.zero(3), AntilinearOp(Mat.identity(3)))
    assert check_order_zero(T).satisfied


def test_misplaced_matrix_factor_breaks_order_zero():
    # M3 on both sides of J: b° acts through the same block as a
    A = AlgebraSpec.of(Factor("m", "M", 3))
    rep = Representation(3).place("m", [0, 1, 2])
    T = RealSpectralTriple("bad", A, rep, OperatorExpr.zero(3), AntilinearOp(Mat.identity(3)))
    assert not check_order_zero(T).satisfied


def test_manifold_triple():
    r = validate_triple(manifold_triple())
    assert r.passed, r.failures()
    assert r.signs == (-1, 1, 1)
    assert r.ko_dim == 4


def test_product_dimensions_and_signs():
    T = product_triple(manifold_triple(), sm_finite())
    assert T.dim == 128
    assert T.gamma == GAMMA.gamma5.kron(sm_finite().gamma)
    # KO 4 + 6 = 2 mod 8
    assert T.signs() == (-1, 1, -1)
    assert ko_dimension(T.signs()) == 2
    assert sm_finite(3).dim == 96


def test_ko_table():
    assert ko_dimension((1, 1, 1)) == 0
    assert ko_dimension((-1, 1, -1)) == 2
    assert ko_dimension((1, 1, -1)) == 6
    assert ko_dimension((1, -1), even=False) == 1


def test_unitary_group_dims():
    assert unitary_group_dim(AlgebraSpec.of(Factor("c", "C"))) == 1
    assert unitary_group_dim(sm_finite().algebra) == 13
    assert unitary_group_dim(AlgebraSpec.of(Factor("h", "MH", 2))) == 10


def test_quaternion_generic_is_multiplicative():
    A = AlgebraSpec.of(Factor("h", "MH", 2))
    rep = Representation(4).place("h", [0, 1, 2, 3])
    assert rep_is_multiplicative(A, rep) == (True, True)


def test_index_scheme():
    S = IndexScheme((("a", ("x", "y")), ("b", ("0", "1", "2"))))
    assert S.dim == 6
    assert S.flat(a="y", b="1") == 4
    assert S.unflat(4) == {"a": "y", "b": "1"}
    assert S.indices(a="x") == [0, 1, 2]


def test_config_round_trip():
    cfg = {
        "name": "cfg",
        "dim": 2,
        "factors": [{"name": "u", "kind": "C"}, {"name": "v", "kind": "C"}],
        "placements": [{"factor": "u", "rows": [0]}, {"factor": "v", "rows": [1]}],
        "D": [["0", "2"], ["2", "0"]],
        "J": [["1", "0"], ["0", "1"]],
        "gamma": [["1", "0"], ["0", "-1"]],
    }
    T = triple_from_config(cfg)
    echo = triple_to_config(T)
    again = triple_to_config(triple_from_config(json.loads(json.dumps(echo))))
    assert again == echo
    assert validate_triple(T).passed


def test_unknown_factor_kind():
    with pytest.raises(ValueError):
        Factor("x", "Q")
