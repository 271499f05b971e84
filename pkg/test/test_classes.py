"""Unit tests for `kriz.classes`."""

import pytest
from sympy import QQ

from kriz.classes import (
    CocycleError,
    PresentationReport,
    a_coefficient,
    alpha_power,
    b_coefficient,
    beta_word,
    build_class,
    candidate_exponents,
    class_product,
    coefficient_reports,
    is_invariant,
    is_nonzero_class,
    lowering_matches,
    monomial_coefficient,
    power_word,
    quotient_dimensions,
    relation_exponent,
    verify_determinant_identity,
    verify_formality,
    verify_generation,
    verify_power_nonvanishing,
    verify_presentation,
    word_coefficient,
)
from kriz.exterior import MultiVector, w, x, y
from kriz.model import KrizModel


@pytest.fixture(scope="module")
def model3() -> KrizModel:
    return KrizModel(3)


@pytest.fixture(scope="module")
def model4() -> KrizModel:
    return KrizModel(4)


def test_gamma_is_the_sum_of_x_letters():
    gamma = build_class(KrizModel(2), "gamma")
    assert str(gamma.value) == "x1 + x2"
    assert gamma.bidegree == (1, 0)


def test_bidegrees(model4: KrizModel):
    assert build_class(model4, "alpha").bidegree == (1, 1)
    assert build_class(model4, "alphabar").bidegree == (1, 1)
    assert build_class(model4, "beta").bidegree == (2, 1)


def test_build_class_raises_on_bad_input():
    with pytest.raises(ValueError):
        build_class(KrizModel(3), "delta")
    with pytest.raises(ValueError):
        build_class(KrizModel(2), "alpha")
    with pytest.raises(ValueError):
        build_class(KrizModel(3), "beta")


def test_build_class_raises_if_not_closed(mocker):
    model = KrizModel(3)
    mocker.patch(
        "kriz.classes._expand", return_value=MultiVector.generator(w(1, 2), 3)
    )
    with pytest.raises(CocycleError):
        build_class(model, "gamma")


def test_alpha_coefficients(model3: KrizModel):
    alpha = build_class(model3, "alpha").value
    assert word_coefficient(model3, alpha, [x(3), w(1, 2)]) == QQ(1)
    assert word_coefficient(model3, alpha, [x(1), w(1, 2)]) == QQ(-1)
    assert word_coefficient(model3, alpha, [w(1, 2), x(1)]) == QQ(1)


def test_monomial_coefficient_requires_normal_form(model3: KrizModel):
    alpha = build_class(model3, "alpha").value
    with pytest.raises(ValueError):
        monomial_coefficient(model3, alpha, (x(2), w(1, 2)))
    with pytest.raises(ValueError):
        word_coefficient(model3, alpha, [x(1), x(1)])


def test_words():
    assert power_word(2) == [x(1), w(1, 2), x(3), w(3, 4)]
    assert beta_word(1) == [x(1), y(3), w(1, 2)]
    assert beta_word(2) == [x(1), w(1, 2), x(3), y(5), w(3, 4)]


def test_coefficient_formulas():
    assert a_coefficient(3, 1) == -1
    assert a_coefficient(5, 2) == 10
    assert b_coefficient(4, 1) == -2
    assert b_coefficient(6, 2) == 24


@pytest.mark.parametrize("n", [3, 4, 5])
def test_computed_coefficients_match(n: int):
    reports = coefficient_reports(KrizModel(n))
    assert reports
    assert all(report.matches for report in reports)


def test_coefficient_reports_empty_for_small_n():
    assert coefficient_reports(KrizModel(2)) == ()


def test_beta_coefficient_n4(model4: KrizModel):
    beta = build_class(model4, "beta").value
    assert word_coefficient(model4, beta, [x(3), y(4), w(1, 2)]) == QQ(3)


def test_classes_are_invariant(model3: KrizModel):
    for name in ("alpha", "alphabar", "gamma", "gammabar"):
        assert is_invariant(model3, build_class(model3, name).value)
    assert not is_invariant(model3, MultiVector.generator(x(1), 3))


def test_lowering_maps_alpha_to_alphabar(model3: KrizModel, model4: KrizModel):
    assert lowering_matches(model3)
    assert lowering_matches(model4)


def test_class_product(model3: KrizModel):
    assert class_product(model3, {}) == MultiVector.one(3)
    value = class_product(model3, {"gamma": 1, "gammabar": 1})
    assert value.bidegree() == (2, 0)
    assert alpha_power(model3, 0) == MultiVector.one(3)


def test_nonvanishing(model4: KrizModel):
    assert is_nonzero_class(model4, "UB", build_class(model4, "alpha").value)
    assert not is_nonzero_class(model4, "UB", MultiVector.zero(4))
    report = verify_power_nonvanishing(model4)
    assert report.alpha_powers == {1: True}
    assert report.alpha_power_beta == {1: True}
    assert report.passed


def test_determinant_identity():
    for q in range(1, 6):
        assert verify_determinant_identity(q)
    with pytest.raises(ValueError):
        verify_determinant_identity(0)


def test_quotient_dimensions():
    dims = quotient_dimensions(2, 1, 8)
    assert dims == {0: 1, 1: 0, 2: 2, 3: 1, 4: 0, 5: 0, 6: 0, 7: 0, 8: 0}
    assert quotient_dimensions(2, 2, 6)[5] == 2


def test_candidate_exponents():
    assert candidate_exponents(4) == (1, 2, 3)
    assert candidate_exponents(1) == (0, 1)


def test_relation_exponent():
    assert [relation_exponent(n) for n in (4, 5, 6, 7)] == [1, 1, 2, 2]


def test_presentation_passes_only_for_the_relation_exponent():
    def report(n: int, matching: tuple) -> PresentationReport:
        return PresentationReport(n, {}, {}, matching, multiplicative=True)

    assert report(5, (1,)).passed
    assert not report(5, (2,)).passed
    assert report(5, (2,)).half_exponent_matches
    assert not report(6, (1, 2)).passed
    assert not report(6, ()).passed


def test_presentation_n4(model4: KrizModel):
    report = verify_presentation(model4)
    assert report.matching == (1,)
    assert report.matched_exponent == 1
    assert not report.half_exponent_matches
    assert report.stated_exponent_matches
    assert report.multiplicative
    assert report.passed
    assert report.cohomology_dims[2] == 2


def test_presentation_requires_n4(model3: KrizModel):
    with pytest.raises(ValueError):
        verify_presentation(model3)


def test_generation_and_formality_n4(model4: KrizModel):
    assert verify_generation(model4).passed
    formality = verify_formality(model4)
    assert formality.passed
    assert formality.support == ((0, 0), (1, 1), (2, 1))


def test_formality_requires_n4(model3: KrizModel):
    with pytest.raises(ValueError):
        verify_formality(model3)
    with pytest.raises(ValueError):
        verify_generation(model3)
