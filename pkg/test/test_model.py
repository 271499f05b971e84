"""Unit tests for `kriz.model`."""

from math import comb

import pytest
from sympy import QQ
from sympy.functions.combinatorial.numbers import stirling

from kriz.exterior import MultiVector, mul, w, x, y
from kriz.model import (
    KrizModel,
    ModelId,
    ResourceGuardError,
    enumerate_nbc_forests,
    find_broken_circuit,
    get_model,
    is_nbc,
    normal_form,
)


@pytest.fixture
def model2() -> KrizModel:
    return KrizModel(2)


@pytest.fixture
def model3() -> KrizModel:
    return KrizModel(3)


def letter(model: KrizModel, generator) -> MultiVector:
    return model.letter(generator)


def test_model_id_validation():
    with pytest.raises(ValueError):
        ModelId("C", 3)
    with pytest.raises(ValueError):
        ModelId("A", 0)
    assert ModelId("UB", 3).base == "B"


def test_model_rejects_invalid_arguments():
    with pytest.raises(ValueError):
        KrizModel(0)
    with pytest.raises(ValueError):
        KrizModel(2, jobs=0)


def test_enumerate_nbc_forests_small_cases():
    assert [f.edges for f in enumerate_nbc_forests(2, 1)] == [((1, 2),)]
    assert [f.edges for f in enumerate_nbc_forests(3, 2)] == [
        ((1, 2), (1, 3)),
        ((1, 2), (2, 3)),
    ]
    assert enumerate_nbc_forests(3, 3) == ()


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_nbc_count_is_stirling_number(n: int):
    for q in range(n):
        expected = int(stirling(n, n - q, kind=1, signed=False))
        assert len(enumerate_nbc_forests(n, q)) == expected


def test_broken_circuit_detection():
    assert find_broken_circuit(3, ((1, 3), (2, 3))) is not None
    assert is_nbc(3, ((1, 2), (2, 3)))
    assert not is_nbc(3, ((1, 3), (2, 3)))
    with pytest.raises(ValueError):
        find_broken_circuit(3, ((1, 2), (1, 3), (2, 3)))


def test_forest_components():
    forest = enumerate_nbc_forests(4, 2)[0]
    assert forest.edges == ((1, 2), (1, 3))
    assert forest.representatives == (1, 4)
    assert forest.components == ((1, 2, 3), (4,))


def test_basis_elements_n2(model2: KrizModel):
    assert [str(e) for e in model2.a_basis(1, 1).elements] == ["x1*w1_2", "y1*w1_2"]
    assert [str(e) for e in model2.a_basis(2, 1).elements] == ["x1*y1*w1_2"]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_basis_dimension_formula(n: int):
    model = KrizModel(n)
    for p, q in model.bidegrees("A"):
        expected = int(stirling(n, n - q, kind=1, signed=False)) * comb(2 * (n - q), p)
        assert model.dimension("A", p, q) == expected


def test_basis_is_empty_out_of_range(model3: KrizModel):
    assert model3.a_basis(0, 3).dim == 0
    assert model3.a_basis(7, 0).dim == 0


@pytest.mark.parametrize("n", [2, 3])
def test_basis_matches_oracle(n: int):
    model = KrizModel(n)
    for p, q in model.bidegrees("A"):
        assert model.oracle_quotient_dim("A", p, q) == model.dimension("A", p, q)


def test_oracle_examples(model2: KrizModel, model3: KrizModel):
    assert model2.oracle_quotient_dim("A", 1, 1) == 2
    assert model2.oracle_quotient_dim("A", 4, 1) == 0
    assert model3.oracle_quotient_dim("A", 0, 2) == 2


def test_oracle_rejects_other_models(model2: KrizModel):
    with pytest.raises(ValueError):
        model2.oracle_quotient_dim("B", 0, 0)


def test_oracle_resource_guard(mocker):
    mocker.patch("kriz.model.MAX_FREE_SLICE", 10)
    with pytest.raises(ResourceGuardError):
        KrizModel(3).oracle_quotient_dim("A", 2, 1)


def test_normal_form_collapses_letters(model2: KrizModel):
    v = mul(letter(model2, x(2)), letter(model2, w(1, 2)))
    expected = mul(letter(model2, x(1)), letter(model2, w(1, 2)))
    assert model2.reduce(v) == model2.reduce(expected)
    assert model2.coordinates(v, 1, 1) == {0: QQ(1)}


def test_normal_form_straightens_broken_circuits(model3: KrizModel):
    v = mul(letter(model3, w(1, 3)), letter(model3, w(2, 3)))
    reduced = model3.reduce(v)
    assert reduced.terms == {
        (w(1, 2), w(2, 3)): QQ(1),
        (w(1, 2), w(1, 3)): QQ(-1),
    }


def test_relations_reduce_to_zero(model3: KrizModel):
    def l(g):
        return letter(model3, g)

    assert model3.reduce(mul(l(x(1)) - l(x(2)), l(w(1, 2)))).is_zero()
    assert model3.reduce(mul(l(y(1)) - l(y(3)), l(w(1, 3)))).is_zero()
    arnold = (
        mul(l(w(1, 2)), l(w(2, 3)))
        - mul(l(w(1, 2)), l(w(1, 3)))
        + mul(l(w(2, 3)), l(w(1, 3)))
    )
    assert model3.reduce(arnold).is_zero()
    # A cycle of omegas vanishes.
    cycle = mul(mul(l(w(1, 2)), l(w(2, 3))), l(w(1, 3)))
    assert model3.reduce(cycle).is_zero()


def test_relations_are_d_stable(model3: KrizModel):
    def l(g):
        return letter(model3, g)

    relation = mul(l(x(1)) - l(x(2)), l(w(1, 2)))
    arnold = (
        mul(l(w(1, 2)), l(w(2, 3)))
        - mul(l(w(1, 2)), l(w(1, 3)))
        + mul(l(w(2, 3)), l(w(1, 3)))
    )
    assert model3.apply_d(relation).is_zero()
    assert model3.apply_d(arnold).is_zero()


def test_normal_form_is_idempotent(model3: KrizModel):
    basis = model3.a_basis(1, 1)
    for index, element in enumerate(basis.elements):
        v = MultiVector(3, {element.monomial: 1})
        assert model3.coordinates(v, 1, 1) == {index: QQ(1)}


def test_coordinates_reject_wrong_bidegree(model2: KrizModel):
    with pytest.raises(ValueError):
        model2.coordinates(letter(model2, x(1)), 0, 1)
    with pytest.raises(ValueError):
        model2.reduce(MultiVector.one(3))


def test_module_level_normal_form():
    v = mul(get_model(2).letter(y(2)), get_model(2).letter(w(1, 2)))
    assert normal_form(v, ModelId("A", 2)) == {1: QQ(1)}


def test_d_matrix_shapes(model2: KrizModel):
    assert model2.d_matrix(0, 1).shape == (6, 1)
    assert model2.d_matrix(2, 0).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_d_squares_to_zero(n: int):
    model = KrizModel(n)
    for p, q in model.bidegrees("A"):
        if q >= 2:
            assert (model.d_matrix(p + 2, q - 1) @ model.d_matrix(p, q)).is_zero()


def test_d_slice_dimensions():
    model = KrizModel(4)
    assert [model.dimension("D", p, 0) for p in range(4)] == [1, 2, 1, 0]
    assert model.dimension("D", 0, 1) == 0


def test_b_slices_n2(model2: KrizModel):
    assert [model2.dimension("B", p, 0) for p in range(4)] == [1, 2, 1, 0]
    assert model2.dimension("B", 0, 1) == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_splitting_dimension_identity(n: int):
    model = KrizModel(n)
    for p, q in model.bidegrees("A"):
        split = sum(comb(2, j) * model.dimension("B", p - j, q) for j in range(3))
        assert model.dimension("A", p, q) == split


def test_differential_matrix_restricts_to_b():
    model = KrizModel(3)
    for p, q in model.bidegrees("B"):
        if q >= 1:
            matrix = model.differential_matrix("B", p, q)
            assert matrix.shape == (
                model.dimension("B", p + 2, q - 1),
                model.dimension("B", p, q),
            )


def test_basis_of_submodel_lists_echelon_vectors(model2: KrizModel):
    basis = model2.basis("D", 1, 0)
    assert basis.dim == 2
    assert str(basis.element_vector(basis.vectors[0])) == "x1 + x2"


def test_basis_rejects_unknown_model(model2: KrizModel):
    with pytest.raises(ValueError):
        model2.basis("E", 0, 0)
