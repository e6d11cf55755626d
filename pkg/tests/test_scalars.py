from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilcomm import linalg
from nilcomm.errors import DomainError
from nilcomm.scalars import (
    GaussianRational,
    QuadraticElement,
    as_exact,
    decode_scalar,
    encode_scalar,
    exact_sqrt,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gaussians = st.builds(GaussianRational, rationals, rationals)
quadratics = st.builds(lambda a, b: QuadraticElement(a, b, 3), rationals, rationals)


@given(gaussians, gaussians, gaussians)
def test_gaussian_field_laws(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    if y:
        assert (x / y) * y == x


@given(quadratics, quadratics)
def test_quadratic_field_laws(x, y):
    assert x * y == y * x
    assert (x * y).field_norm() == x.field_norm() * y.field_norm()
    if y:
        assert (x / y) * y == x


def test_sqrt3_squares_to_three():
    r = QuadraticElement(0, 1, 3)
    assert r * r == 3
    assert abs(float(r) - 3 ** 0.5) < 1e-15


def test_mixed_radicands_rejected():
    with pytest.raises(TypeError):
        QuadraticElement(0, 1, 2) + QuadraticElement(0, 1, 3)


def test_radicand_must_be_squarefree():
    with pytest.raises(ValueError):
        QuadraticElement(1, 1, 4)


def test_gaussian_integer_predicate():
    assert GaussianRational(2, -3).is_gaussian_integer()
    assert not GaussianRational(Fraction(1, 2), 0).is_gaussian_integer()


def test_ints_normalise_to_fractions():
    assert isinstance(as_exact(3), Fraction)
    with pytest.raises(TypeError):
        as_exact(True)


@given(st.one_of(rationals, gaussians, quadratics))
def test_scalar_json_round_trip(x):
    assert decode_scalar(encode_scalar(x)) == x


def test_scalar_json_shapes():
    assert encode_scalar(Fraction(-3, 4)) == {"num": -3, "den": 4}
    assert encode_scalar(GaussianRational(1, 2)) == {"re": {"num": 1, "den": 1}, "im": {"num": 2, "den": 1}}
    assert decode_scalar(7) == Fraction(7)
    with pytest.raises(ValueError):
        decode_scalar({"num": 1, "den": 0})


def test_exact_sqrt():
    assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert exact_sqrt(2) is None
    assert exact_sqrt(-1) is None


@settings(max_examples=50)
@given(st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_and_rank(m):
    if linalg.det(m) == 0:
        assert linalg.rank(m) < 3
        with pytest.raises(DomainError):
            linalg.inverse(m)
    else:
        assert linalg.equal(linalg.matmul(m, linalg.inverse(m)), linalg.identity(3))


@settings(max_examples=50)
@given(st.lists(st.lists(rationals, min_size=4, max_size=4), min_size=2, max_size=3))
def test_nullspace_is_kernel(m):
    basis = linalg.nullspace(m)
    assert len(basis) == 4 - linalg.rank(m)
    for v in basis:
        assert all(x == 0 for x in linalg.matvec(m, v))
