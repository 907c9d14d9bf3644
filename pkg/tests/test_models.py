import pytest

from ncg.clifford import GAMMA
from ncg.linalg import Mat
from ncg.models import (MODELS, UnknownModel, build, describe, dirac_parts, ed_finite, field_basis, finite_outer,
                        generations, grading_break, hr_basis, list_models, sm_finite, sm_parts)
from ncg.scalars import Scalar, get_symbol
from ncg.triples import validate_triple


def test_catalog_is_complete():
    names = [m.name for m in list_models()]
    assert names == sorted(MODELS)
    assert {"sm", "sm-twist", "grand", "grand-chiral", "bprime", "btilde", "manifold", "manifold-twist",
            "doubled-manifold", "ed"} <= set(names)
    for m in list_models():
        assert m.refs, m.name
        assert m.to_json()["name"] == m.name


def test_unknown_model():
    with pytest.raises(UnknownModel):
        describe("nope")
    with pytest.raises(UnknownModel):
        field_basis("sm")


def test_dimensions():
    assert build("sm").dim == 128
    assert build("sm-twist").dim == 128
    assert build("grand").dim == 128
    assert build("ed").dim == 16
    assert build("doubled-manifold").dim == 8
    assert sm_finite().dim == 32


def test_generations_override(monkeypatch):
    monkeypatch.setenv("NCG_GENERATIONS", "3")
    assert generations() == 3
    assert build("sm").dim == 384
    monkeypatch.delenv("NCG_GENERATIONS")
    assert generations() == 1


def test_sm_parts_sum_to_d():
    T = build("sm")
    parts = sm_parts(1)
    assert parts["free"] + parts["yukawa"] + parts["majorana"] == T.D
    assert set(dirac_parts("sm", T)) == {"free", "yukawa", "majorana", "all"}


def test_ed_finite_operator():
    T = ed_finite()
    d = Scalar.sym(get_symbol("d"))
    D = T.D.bounded_part()
    assert D[0, 1] == d and D[1, 0] == d.conj()
    assert D[2, 3] == d.conj() and D[3, 2] == d
    assert validate_triple(T).passed


def test_ed_finite_part_placement():
    T = build("ed")
    DF = dirac_parts("ed", T)["finite"].bounded_part()
    assert DF == GAMMA.gamma5.kron(ed_finite().D.bounded_part())
    # finite-outer order shows D_F ⊗ γ⁵
    assert finite_outer(DF, 4) == ed_finite().D.bounded_part().kron(GAMMA.gamma5)


def test_hr_basis_is_r_invariant():
    T = build("ed")
    for v in hr_basis(4):
        assert T.R * v == v
    assert len(hr_basis(4)) == 8


def test_field_basis_is_selfadjoint():
    for name in ("manifold-twist", "doubled-manifold", "ed"):
        for _, m in field_basis(name):
            assert m.adjoint() == m


def test_grading_break_of_sm_is_trivial():
    _, blocks = grading_break(build("sm"))
    assert all(b.kind in ("C", "H", "M") for b in blocks)


def test_expected_status_lookup():
    g = describe("grand")
    assert g.expected_status("free", "bounded commutators") == "FAIL"
    assert g.expected_status("yukawa", "order zero") == "PASS"
    assert describe("grand-chiral").expected_status("free", "order zero") == "CONSTRAINED"


def test_sm_finite_without_couplings():
    T = sm_finite(yukawa=False, majorana=False)
    assert T.D.bounded_part() == Mat.zeros(32)
