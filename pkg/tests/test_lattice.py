import random
from fractions import Fraction

import pytest

from conftest import (
    oracle_cvp,
    oracle_relevant,
    oracle_shortest,
    random_pd_gram,
    random_point,
)
from tropmoment.lattice import (
    DimensionMismatchError,
    LatticeError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    closest_vector,
    closest_vectors_all,
    inner,
    norm_sq,
    relevant_vectors,
    validate,
)

A2 = [[2, 1], [1, 2]]
ID2 = [[1, 0], [0, 1]]


def test_validate_rank1_identity():
    lat = validate([[1]])
    assert lat.rank == 1
    assert lat.gram == ((Fraction(1),),)


def test_validate_a2():
    lat = validate(A2)
    assert lat.rank == 2


def test_validate_accepts_rational_strings():
    lat = validate([["2", "1"], ["1", "3/1"]])
    assert lat.gram[1][1] == 3


def test_validate_rejects_indefinite_with_minor_index():
    with pytest.raises(NotPositiveDefiniteError) as exc:
        validate([[1, 2], [2, 1]])
    assert exc.value.minor_index == 2


def test_validate_rejects_negative_leading_entry():
    with pytest.raises(NotPositiveDefiniteError) as exc:
        validate([[-1]])
    assert exc.value.minor_index == 1


def test_validate_rejects_asymmetric():
    with pytest.raises(NotSymmetricError):
        validate([[1, 0], [1, 1]])


def test_validate_rejects_nonsquare():
    with pytest.raises(DimensionMismatchError):
        validate([[1, 0]])


def test_validate_rejects_floats():
    with pytest.raises(LatticeError):
        validate([[1.5]])


def test_inner_identity_unit():
    lat = validate(ID2)
    assert inner(lat, (1, 0), (1, 0)) == 1


def test_inner_a2_entry_readout():
    lat = validate(A2)
    assert inner(lat, (1, 0), (0, 1)) == 1


def test_inner_a2_ones():
    lat = validate(A2)
    assert inner(lat, (1, 1), (1, 1)) == 6


def test_inner_dimension_mismatch():
    lat = validate(A2)
    with pytest.raises(DimensionMismatchError):
        inner(lat, (1, 0, 0), (0, 1, 0))


def test_inner_bilinear_symmetric_positive():
    rng = random.Random(101)
    for _ in range(25):
        gram = random_pd_gram(rng)
        lat = validate(gram)
        g = lat.rank
        x, y, z = (random_point(rng, g, den=7) for _ in range(3))
        a, b = Fraction(rng.randint(-5, 5)), Fraction(rng.randint(-5, 5))
        assert inner(lat, x, y) == inner(lat, y, x)
        combo = tuple(a * xi + b * yi for xi, yi in zip(x, y))
        assert inner(lat, combo, z) == a * inner(lat, x, z) + b * inner(lat, y, z)
        if any(x):
            assert inner(lat, x, x) > 0


def test_closest_vector_identity_rounding():
    lat = validate(ID2)
    assert closest_vector(lat, (Fraction(2, 5), Fraction(3, 5))) == (0, 1)


def test_closest_vector_tie_breaks_lex():
    lat = validate([[1]])
    assert closest_vector(lat, (Fraction(1, 2),)) == (0,)


def test_closest_vector_a2_half_half():
    # brute force over the certified box (and over |u|_inf <= 2) gives
    # min distance 1/2, attained at (0,1) and (1,0)
    lat = validate(A2)
    dist, sols = closest_vectors_all(lat, (Fraction(1, 2), Fraction(1, 2)))
    assert dist == Fraction(1, 2)
    assert sols == [(0, 1), (1, 0)]
    assert closest_vector(lat, (Fraction(1, 2), Fraction(1, 2))) == (0, 1)
    assert oracle_cvp(A2, (Fraction(1, 2), Fraction(1, 2)))[0] == Fraction(1, 2)


def test_closest_vector_matches_bruteforce():
    rng = random.Random(202)
    for _ in range(40):
        gram = random_pd_gram(rng)
        lat = validate(gram)
        point = random_point(rng, lat.rank)
        dist, sols = closest_vectors_all(lat, point)
        odist, osols = oracle_cvp(gram, point)
        assert dist == odist
        assert sols == osols


def test_closest_vector_periodicity():
    rng = random.Random(303)
    for _ in range(30):
        gram = random_pd_gram(rng)
        lat = validate(gram)
        g = lat.rank
        point = random_point(rng, g)
        shift = tuple(rng.randint(-4, 4) for _ in range(g))
        moved = closest_vector(lat, tuple(p + s for p, s in zip(point, shift)))
        assert moved == tuple(
            c + s for c, s in zip(closest_vector(lat, point), shift)
        )


def test_relevant_identity_lattices():
    for g in range(1, 5):
        gram = [[int(i == j) for j in range(g)] for i in range(g)]
        rel = relevant_vectors(validate(gram))
        expected = set()
        for i in range(g):
            e = tuple(int(j == i) for j in range(g))
            expected.add(e)
            expected.add(tuple(-c for c in e))
        assert set(rel) == expected


def test_relevant_rank1():
    assert set(relevant_vectors(validate([[7]]))) == {(1,), (-1,)}


def test_relevant_a2_hexagonal():
    rel = set(relevant_vectors(validate(A2)))
    assert rel == {(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)}


def test_relevant_matches_oracle_and_bounds():
    rng = random.Random(404)
    for _ in range(20):
        gram = random_pd_gram(rng)
        lat = validate(gram)
        rel = relevant_vectors(lat)
        assert sorted(rel) == oracle_relevant(gram)
        assert len(rel) <= 2 * (2**lat.rank - 1)
        assert set(rel) == {tuple(-c for c in v) for v in rel}


def test_relevant_contains_all_shortest_vectors():
    rng = random.Random(505)
    for _ in range(15):
        gram = random_pd_gram(rng)
        lat = validate(gram)
        rel = set(relevant_vectors(lat))
        shortest_norm, shortest = oracle_shortest(gram)
        for v in shortest:
            assert v in rel
            assert norm_sq(lat, v) == shortest_norm
