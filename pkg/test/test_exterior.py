"""Unit tests for `kriz.exterior`."""

import random
from typing import Tuple

import pytest
from sympy import QQ

from kriz.equivariance import sl2_operator
from kriz.exterior import (
    Derivation,
    Generator,
    MultiVector,
    apply_derivation,
    compose,
    differential,
    format_monomial,
    generators,
    mul,
    parse_monomial,
    permutation_images,
    product,
    sl2_images,
    sort_word,
    substitute,
    w,
    x,
    y,
)


def letter(generator: Generator, n: int = 3) -> MultiVector:
    return MultiVector.generator(generator, n)


def test_generator_order():
    assert x(1) < y(1) < x(2) < y(2) < w(1, 2) < w(1, 3) < w(2, 3)
    assert list(generators(2)) == [x(1), y(1), x(2), y(2), w(1, 2)]


def test_omega_indices_are_symmetric():
    assert w(2, 1) == w(1, 2)
    assert (w(2, 1).i, w(2, 1).j) == (1, 2)


def test_generator_validation():
    with pytest.raises(ValueError):
        Generator("z", 1)
    with pytest.raises(ValueError):
        w(1, 1)
    with pytest.raises(ValueError):
        x(0)


def test_generator_parse_roundtrip():
    for generator in generators(3):
        assert Generator.parse(str(generator)) == generator


def test_generator_bidegree_and_weight():
    assert x(1).bidegree == (1, 0)
    assert w(1, 2).bidegree == (0, 1)
    assert (x(1).weight, y(1).weight, w(1, 2).weight) == (1, -1, 0)


def test_sort_word_sign():
    assert sort_word([y(1), x(1)]) == (-1, (x(1), y(1)))
    assert sort_word([w(1, 2), x(2), y(1)]) == (-1, (y(1), x(2), w(1, 2)))
    assert sort_word([x(1), y(2), x(1)]) == (0, ())


def test_parse_monomial():
    assert parse_monomial("x1*w1_2") == (x(1), w(1, 2))
    assert parse_monomial("1") == ()
    assert format_monomial((x(1), w(1, 2))) == "x1*w1_2"
    with pytest.raises(ValueError):
        parse_monomial("w1_2*x1")


def test_generators_anticommute():
    assert mul(letter(x(1)), letter(y(1))) == -mul(letter(y(1)), letter(x(1)))
    assert mul(letter(x(1)), letter(x(1))).is_zero()


def test_multivector_arithmetic():
    v = letter(x(1)) + letter(y(2)).scale(2)
    assert v.coefficient((y(2),)) == QQ(2)
    assert (v - v).is_zero()
    assert 3 * v == v.scale(3)
    assert v.bidegree() == (1, 0)
    assert MultiVector.zero(3).bidegree() is None


def test_multivector_bidegree_raises_if_inhomogeneous():
    with pytest.raises(ValueError):
        (letter(x(1)) + letter(w(1, 2))).bidegree()


def test_multivector_rejects_ambient_mismatch():
    with pytest.raises(ValueError):
        letter(x(1), 2) + letter(x(1), 3)
    with pytest.raises(ValueError):
        MultiVector.generator(x(4), 3)


def test_multivector_str():
    v = letter(x(1)) - letter(y(2))
    assert str(v) == "x1 - y2"
    assert str(MultiVector.zero(3)) == "0"


def test_product_of_word():
    expected = MultiVector.monomial((w(1, 2), x(1)), 3)
    assert product([letter(w(1, 2)), letter(x(1))], 3) == expected
    assert expected.coefficient((x(1), w(1, 2))) == -1


def test_differential_of_omega():
    d = differential(2)
    dx = letter(x(1), 2) - letter(x(2), 2)
    dy = letter(y(1), 2) - letter(y(2), 2)
    assert apply_derivation(d, letter(w(1, 2), 2)) == mul(dx, dy)


def test_differential_squares_to_zero():
    d = differential(3)
    v = mul(letter(w(1, 2)), letter(w(1, 3))) + mul(letter(x(2)), letter(w(2, 3)))
    assert apply_derivation(d, apply_derivation(d, v)).is_zero()


def test_odd_derivation_sign():
    d = differential(3)
    v = mul(letter(x(3)), letter(w(1, 2)))
    # d(x3 w12) = -x3 d(w12)
    expected = -mul(letter(x(3)), apply_derivation(d, letter(w(1, 2))))
    assert apply_derivation(d, v) == expected


def test_derivation_without_image_raises():
    with pytest.raises(ValueError):
        apply_derivation(Derivation({}), letter(x(1)))
    with pytest.raises(ValueError):
        Derivation({}, parity="neither")


def test_permutation_substitution():
    images = permutation_images((2, 1, 3), 3)
    v = mul(letter(x(1)), letter(w(1, 3)))
    assert substitute(v, images) == mul(letter(x(2)), letter(w(2, 3)))


def test_permutation_substitution_is_a_homomorphism():
    sigma, tau = (2, 3, 1), (2, 1, 3)
    v = mul(letter(y(1)), letter(w(1, 2)))
    twice = substitute(
        substitute(v, permutation_images(tau, 3)), permutation_images(sigma, 3)
    )
    assert twice == substitute(v, permutation_images(compose(sigma, tau), 3))


def test_permutation_images_reject_non_permutations():
    with pytest.raises(ValueError):
        permutation_images((1, 1, 2), 3)


def test_sl2_substitution():
    images = sl2_images(((1, 0), (1, 1)), 2)
    assert images[x(1)] == letter(x(1), 2) + letter(y(1), 2)
    assert images[y(1)] == letter(y(1), 2)
    # x1 y1 is the determinant line.
    v = mul(letter(x(1), 2), letter(y(1), 2))
    assert substitute(v, images) == v


def test_substitute_rejects_images_of_wrong_bidegree():
    with pytest.raises(ValueError):
        substitute(letter(x(1)), {x(1): letter(w(1, 2))})


def test_substitute_respects_zero_images():
    assert substitute(letter(x(1)), {x(1): MultiVector.zero(3)}).is_zero()


def random_element(rand: random.Random, n: int, p: int, q: int) -> MultiVector:
    """A random combination of monomials of bidegree (p, q)."""
    letters = [g for g in generators(n) if g.kind != "w"]
    omegas = [g for g in generators(n) if g.kind == "w"]
    element = MultiVector.zero(n)
    for _ in range(rand.randint(1, 4)):
        word = rand.sample(letters, p) + rand.sample(omegas, q)
        rand.shuffle(word)
        element = element + MultiVector.word(word, n).scale(rand.randint(-3, 3))
    return element


def random_bidegree(rand: random.Random, n: int) -> Tuple[int, int]:
    return rand.randint(0, 3), rand.randint(0, 2)


@pytest.mark.parametrize("seed", range(10))
def test_mul_is_graded_commutative(seed: int):
    rand = random.Random(seed)
    (p, q), (r, s) = random_bidegree(rand, 4), random_bidegree(rand, 4)
    u = random_element(rand, 4, p, q)
    v = random_element(rand, 4, r, s)
    sign = (-1) ** ((p + q) * (r + s))
    assert mul(u, v) == mul(v, u).scale(sign)


@pytest.mark.parametrize("seed", range(10))
def test_derivations_satisfy_leibniz_rule(seed: int):
    rand = random.Random(seed)
    (p, q), (r, s) = random_bidegree(rand, 4), random_bidegree(rand, 4)
    u = random_element(rand, 4, p, q)
    v = random_element(rand, 4, r, s)

    d = differential(4)
    expected = mul(apply_derivation(d, u), v) + mul(
        u, apply_derivation(d, v)
    ).scale((-1) ** (p + q))
    assert apply_derivation(d, mul(u, v)) == expected

    e = sl2_operator("e", 4)
    expected = mul(apply_derivation(e, u), v) + mul(u, apply_derivation(e, v))
    assert apply_derivation(e, mul(u, v)) == expected


@pytest.mark.parametrize("seed", range(10))
def test_permutation_substitution_follows_group_law(seed: int):
    rand = random.Random(seed)
    sigma = tuple(rand.sample(range(1, 5), 4))
    tau = tuple(rand.sample(range(1, 5), 4))
    v = random_element(rand, 4, *random_bidegree(rand, 4))

    twice = substitute(
        substitute(v, permutation_images(tau, 4)), permutation_images(sigma, 4)
    )
    assert twice == substitute(v, permutation_images(compose(sigma, tau), 4))


@pytest.mark.parametrize("seed", range(10))
def test_permutations_commute_with_sl2_substitutions(seed: int):
    rand = random.Random(seed)
    sigma = permutation_images(tuple(rand.sample(range(1, 5), 4)), 4)
    matrix = [[rand.randint(-2, 2) for _ in range(2)] for _ in range(2)]
    g = sl2_images(matrix, 4)
    v = random_element(rand, 4, *random_bidegree(rand, 4))

    assert substitute(substitute(v, g), sigma) == substitute(substitute(v, sigma), g)
