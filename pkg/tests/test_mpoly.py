import itertools
import random

import pytest

from dickson_delta.gf import field_new
from dickson_delta.mpoly import (
    ExponentOverflow,
    MultiPoly,
    NotDivisible,
    NotSquare,
    PolyFraction,
    VariableCountMismatch,
    coefficient_in_var,
    determinant,
    determinant_leibniz,
    exact_div,
    frob_power,
    parse_poly,
    random_poly,
    substitute,
)


def as_dict(f):
    return {e: c.code for e, c in f.terms.items()}


def naive_product(f, g):
    F = f.field
    out = {}
    for (a, x), (b, y) in itertools.product(as_dict(f).items(), as_dict(g).items()):
        e = tuple(i + j for i, j in zip(a, b))
        out[e] = F.add(out.get(e, 0), F.mul(x, y))
    return {e: c for e, c in out.items() if c}


def rand(F, n, rng, deg=3, terms=4):
    return random_poly(F, n, deg, terms, rng)


def test_product_matches_dict_oracle(field):
    rng = random.Random(1)
    for _ in range(60):
        f, g = rand(field, 3, rng), rand(field, 3, rng)
        assert as_dict(f * g) == naive_product(f, g)


def test_ring_laws(small_field):
    rng = random.Random(2)
    for _ in range(50):
        f, g, h = (rand(small_field, 3, rng) for _ in range(3))
        assert f * (g + h) == f * g + f * h
        assert (f * g) * h == f * (g * h)
        assert f - f == MultiPoly.zero(small_field, 3)


def test_exact_div_round_trip(small_field):
    rng = random.Random(3)
    for _ in range(500):
        f = rand(small_field, 3, rng)
        g = rand(small_field, 3, rng, deg=2, terms=3)
        if not g:
            continue
        assert exact_div(f * g, g) == f


def test_exact_div_rejects_non_multiples():
    F = field_new(2)
    x1, x2 = MultiPoly.gens(F, 2)
    with pytest.raises(NotDivisible):
        exact_div(x1 + 1, x2)
    with pytest.raises(ZeroDivisionError):
        exact_div(x1, MultiPoly.zero(F, 2))


def test_determinant_matches_permutation_sum(small_field):
    rng = random.Random(4)
    for _ in range(200):
        M = [[rand(small_field, 3, rng, deg=2, terms=2) for _ in range(3)] for _ in range(3)]
        assert determinant(M) == determinant_leibniz(M)


def test_determinant_four_by_four_against_oracle():
    F = field_new(3)
    rng = random.Random(5)
    M = [[rand(F, 2, rng, deg=1, terms=2) for _ in range(4)] for _ in range(4)]
    assert determinant(M) == determinant_leibniz(M)


def test_determinant_shape_errors():
    F = field_new(2)
    one = MultiPoly.constant(F, 1)
    with pytest.raises(NotSquare):
        determinant([[one, one]])
    with pytest.raises(ValueError):
        determinant([[one] * 7 for _ in range(7)])


def test_substitution_is_a_homomorphism(small_field):
    rng = random.Random(6)
    for _ in range(200):
        f, g = rand(small_field, 3, rng, deg=2), rand(small_field, 3, rng, deg=2)
        images = [rand(small_field, 3, rng, deg=1, terms=2) for _ in range(3)]
        assert substitute(f * g, images) == substitute(f, images) * substitute(g, images)
        assert substitute(f + g, images) == substitute(f, images) + substitute(g, images)


def test_truncated_substitution_agrees_with_truncating_afterwards():
    F = field_new(2)
    rng = random.Random(7)
    for _ in range(50):
        f = rand(F, 3, rng)
        images = [rand(F, 3, rng, deg=2, terms=2) for _ in range(3)]
        assert substitute(f, images, bound=4) == substitute(f, images).truncate(4)


def test_frob_power_matches_repeated_multiplication(small_field):
    rng = random.Random(8)
    q = small_field.q
    for _ in range(30):
        f = rand(small_field, 2, rng, deg=2)
        slow = MultiPoly.constant(small_field, 2, 1)
        for _ in range(q):
            slow = slow * f
        assert frob_power(f, 1) == slow
        assert frob_power(f, 2) == frob_power(frob_power(f, 1), 1)


def test_pow_matches_repeated_multiplication(small_field):
    f = parse_poly("x1 + x2 + 1", small_field, 2)
    acc = MultiPoly.constant(small_field, 2, 1)
    for k in range(7):
        assert f**k == acc
        acc = acc * f


def test_truncate_and_mul_truncated():
    F = field_new(3)
    rng = random.Random(9)
    for _ in range(50):
        f, g = rand(F, 3, rng, deg=4), rand(F, 3, rng, deg=4)
        assert f.mul_truncated(g, 3) == (f * g).truncate(3)
        t = f.truncate(3)
        assert all(max(e) < 3 for e in t.monomials())
        assert t.truncate(3) == t


def test_parse_and_format_round_trip():
    F = field_new(3)
    f = parse_poly("2*x1^2*x2 - x3 + 1", F, 3)
    assert f.coefficient((0, 0, 1)).code == 2
    assert parse_poly(str(f), F, 3) == f
    G = field_new(2, 2)
    g = parse_poly("(a+1)*x1 + a", G, 1)
    assert parse_poly(str(g), G, 1) == g


def test_grlex_monomial_order():
    F = field_new(2)
    f = parse_poly("x1^2 + x2 + x1*x2 + 1", F, 2)
    assert f.monomials() == [(0, 0), (0, 1), (1, 1), (2, 0)]
    assert f.leading_term()[0] == (2, 0)


def test_structure_queries():
    F = field_new(2)
    f = parse_poly("x1^3*x3 + x2", F, 3)
    assert f.total_degree() == 4
    assert f.degree_in(1) == 3
    assert f.support() == {1, 2, 3}
    assert set(f.homogeneous_components()) == {1, 4}
    assert coefficient_in_var(f, 3, 1) == parse_poly("x1^3", F, 3)


def test_mismatched_rings_rejected():
    F = field_new(2)
    with pytest.raises(VariableCountMismatch):
        MultiPoly.var(F, 2, 1) + MultiPoly.var(F, 3, 1)


def test_exponent_overflow():
    F = field_new(2)
    with pytest.raises(ExponentOverflow):
        MultiPoly.var(F, 1, 1, 2**21)


def test_json_round_trip(small_field):
    f = random_poly(small_field, 3, 3, 5, 11)
    assert MultiPoly.from_json(small_field, f.to_json()) == f


def test_fraction_equality():
    F = field_new(2)
    x1, x2 = MultiPoly.gens(F, 2)
    assert PolyFraction(x1 * x2, x1 * x1).equals(PolyFraction(x2, x1))
    assert not PolyFraction(x2, x1).equals(PolyFraction(x1, x2))


def test_codes_versus_integers_over_gf4():
    F = field_new(2, 2)
    assert not MultiPoly.from_terms(F, 1, {(1,): 2})
    assert MultiPoly.from_codes(F, 1, {(1,): 2}).coefficient((1,)).code == 2


def test_random_poly_is_seeded():
    F = field_new(3)
    assert random_poly(F, 3, 2, 4, 99) == random_poly(F, 3, 2, 4, 99)
