from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import isotropic, orthonormal_isotropic, rand_scalar, rand_vec
from nilcomm import linalg
from nilcomm.errors import DomainError, GeodesicError
from nilcomm.frames import (
    DoubledFrame,
    IsotropicEmbedding,
    LinearPolarPath,
    OrthSymplecticFrame,
    StiefelGeodesic,
    doubled_path,
    isotropic_to_symplectic,
    j_matrix,
    pack_cayley_dickson,
    polar_isotropic,
    stiefel_path,
    symplectic_completion,
    symplectic_polar_path,
    symplectic_to_isotropic,
    unpack_cayley_dickson,
)
from nilcomm.lie_core import FieldTag
from nilcomm.scalars import GaussianRational, conj

seeds = st.integers(min_value=0, max_value=10**6)
fields = st.sampled_from([FieldTag.REAL, FieldTag.COMPLEX])


def shape(n_max=4):
    return st.integers(1, n_max).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n)))


def bilinear(a, b, n):
    return linalg.matmul(linalg.transpose(a), linalg.matmul(j_matrix(n), b))


def herm(a):
    return linalg.matmul([[conj(v) for v in row] for row in linalg.transpose(a)], a)


def is_orth_symplectic(mat) -> bool:
    try:
        OrthSymplecticFrame(mat)
    except DomainError:
        return False
    return True


def doubled(rng, n, r, field) -> DoubledFrame:
    return pack_cayley_dickson(isotropic_to_symplectic(IsotropicEmbedding(orthonormal_isotropic(rng, n, r, field), field)))


# -- isotropic to symplectic ----------------------------------------------------------------------


def test_extension_of_first_basis_vector():
    frame = isotropic_to_symplectic(IsotropicEmbedding([[1], [0]]))
    assert frame.matrix == [[0, 1], [-1, 0]]
    assert bilinear(frame.matrix, frame.matrix, 1) == j_matrix(1)
    assert symplectic_to_isotropic(frame).matrix == [[1], [0]]


def test_non_isotropic_input_rejected():
    with pytest.raises(DomainError) as err:
        IsotropicEmbedding([[1, 0], [0, 1]])
    assert err.value.name == "not-isotropic"
    with pytest.raises(DomainError):
        isotropic_to_symplectic(IsotropicEmbedding([[2], [0]]), orthonormal=True)


@settings(max_examples=100, deadline=None)
@given(seeds, shape(), fields)
def test_orthonormal_extension_is_exact_and_invertible(seed, nd, field):
    n, d = nd
    rng = random.Random(seed)
    phi = orthonormal_isotropic(rng, n, d, field)
    frame = isotropic_to_symplectic(IsotropicEmbedding(phi))
    assert isinstance(frame, OrthSymplecticFrame)
    assert bilinear(frame.matrix, frame.matrix, n) == j_matrix(d)
    assert herm(frame.matrix) == linalg.identity(2 * d)
    assert symplectic_to_isotropic(frame).matrix == phi


@settings(max_examples=60, deadline=None)
@given(seeds, shape(3), fields)
def test_general_extension_is_symplectic(seed, nd, field):
    n, d = nd
    rng = random.Random(seed)
    phi = isotropic(rng, n, d, field)
    frame = isotropic_to_symplectic(IsotropicEmbedding(phi), orthonormal=False)
    assert bilinear(frame.matrix, frame.matrix, n) == j_matrix(d)
    assert frame.g_block == phi


# -- polar decomposition --------------------------------------------------------------------------


def test_polar_of_scaled_basis_vector():
    u, s = polar_isotropic(IsotropicEmbedding([[2], [0]]))
    assert np.allclose(u.matrix, [[1], [0]])
    assert abs(s[0, 0] - math.log(2)) < 1e-15


def test_polar_of_orthonormal_input_is_itself():
    a = IsotropicEmbedding([[0], [1]])
    u, s = polar_isotropic(a)
    assert u is a and s == [[0]]


def test_polar_rejects_rank_deficiency():
    with pytest.raises(DomainError):
        polar_isotropic(IsotropicEmbedding(np.array([[1.0, 2.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]), check=False))


@settings(max_examples=100, deadline=None)
@given(seeds, shape(), fields)
def test_polar_reconstruction(seed, nd, field):
    n, d = nd
    rng = random.Random(seed)
    a = np.array([[complex(v) for v in row] for row in isotropic(rng, n, d, field)])
    if field is FieldTag.REAL:
        a = a.real
    u, s = polar_isotropic(IsotropicEmbedding(a))
    um = u.matrix
    assert np.max(np.abs(um @ scipy.linalg.expm(s) - a)) < 1e-10
    assert np.max(np.abs(um.conj().T @ um - np.eye(d))) < 1e-10
    assert np.max(np.abs(um.T @ j_matrix(n, True) @ um)) < 1e-10
    assert np.max(np.abs(s - s.conj().T)) < 1e-12


def test_symplectic_polar_path_ends_unitary():
    rng = random.Random(4)
    core = isotropic_to_symplectic(IsotropicEmbedding(isotropic(rng, 3, 2)), orthonormal=False)
    square = symplectic_completion(core)
    path = symplectic_polar_path(square)
    j = j_matrix(3, True)
    for t in (0.0, 0.3, 0.7, 1.0):
        x = path(t)
        assert np.allclose(x.T @ j @ x, j, atol=1e-10)
    u = path(1.0)
    assert np.allclose(u.T @ u, np.eye(6), atol=1e-10)
    assert np.allclose(path(0.0), np.array(square, dtype=float), atol=1e-10)


# -- packing ----------------------------------------------------------------------------------------


def test_pack_of_standard_real_frame():
    d = pack_cayley_dickson(OrthSymplecticFrame([[1, 0], [0, 1]]))
    assert d.entries == [[(1, 0)]]
    assert unpack_cayley_dickson(d).matrix == [[1, 0], [0, 1]]


def test_pack_rejects_frames_not_of_doubled_form():
    with pytest.raises(DomainError) as err:
        pack_cayley_dickson([[1, 0], [0, -1]])
    assert err.value.name == "not-doubled"


@settings(max_examples=100, deadline=None)
@given(seeds, shape(), fields)
def test_pack_unpack_exact_inverses(seed, nd, field):
    n, r = nd
    rng = random.Random(seed)
    frame = isotropic_to_symplectic(orthonormal_isotropic(rng, n, r, field))
    d = pack_cayley_dickson(frame)
    assert d.is_orthonormal()
    assert unpack_cayley_dickson(d).matrix == frame.matrix
    assert pack_cayley_dickson(unpack_cayley_dickson(d)) == d
    assert DoubledFrame.from_json(d.to_json()) == d


@settings(max_examples=200, deadline=None)
@given(seeds, shape(3), fields, st.booleans())
def test_gram_identity_characterises_orth_symplectic(seed, nd, field, perturb):
    n, r = nd
    rng = random.Random(seed)
    phi = orthonormal_isotropic(rng, n, r, field)
    if perturb:
        i, j = rng.randrange(2 * n), rng.randrange(r)
        eps = rand_scalar(rng, field, 1) * Fraction(1, rng.choice([3, 7, 100]))
        phi = [[v + eps if (a, b) == (i, j) else v for b, v in enumerate(row)] for a, row in enumerate(phi)]
    # (J conj(phi) | phi) always has the doubled shape, so packing never refuses it
    first = linalg.matmul(j_matrix(n), [[conj(v) for v in row] for row in phi])
    mat = [a + b for a, b in zip(first, phi)]
    d = pack_cayley_dickson(mat, field)
    assert d.is_orthonormal() == is_orth_symplectic(mat)
    if not perturb:
        assert d.is_orthonormal()


@settings(max_examples=100, deadline=None)
@given(seeds, st.integers(1, 4), fields)
def test_packing_intertwines_the_two_forms(seed, n, field):
    rng = random.Random(seed)
    x, y = rand_vec(rng, 2 * n, field), rand_vec(rng, 2 * n, field)

    def pairs(v):
        return [(v[l], v[n + l] if field is FieldTag.REAL else conj(v[n + l])) for l in range(n)]

    px, py = pairs(x), pairs(y)
    d = DoubledFrame(field, [[a, b] for a, b in zip(px, py)])
    inner, pure = d.gram()[0][1]
    assert inner == sum((conj(a) * b for a, b in zip(x, y)), Fraction(0))
    sympl = linalg.matmul([x], linalg.matmul(j_matrix(n), [[v] for v in y]))[0][0]
    assert pure == conj(sympl)


# -- Stiefel paths ------------------------------------------------------------------------------------


def test_stiefel_constant_path():
    rng = random.Random(1)
    d = doubled(rng, 3, 2, FieldTag.COMPLEX)
    x = StiefelGeodesic(d, d).matrix(0.5)
    assert np.allclose(x, d.to_complex_matrix(), atol=1e-12)


def test_stiefel_quarter_turn_midpoint():
    f0 = DoubledFrame(FieldTag.REAL, [[(1, 0)]])
    f1 = DoubledFrame(FieldTag.REAL, [[(0, 1)]])
    mid = stiefel_path(f0, f1, 0.5)
    z = complex(*mid.entries[0][0])
    assert abs(abs(z) - 1) < 1e-12
    assert abs(z - cmath.exp(0.25j * math.pi)) < 1e-12
    assert stiefel_path(f0, f1, 0) == f0 and stiefel_path(f0, f1, 1) == f1


def test_quaternionic_sign_flip_falls_back():
    f0 = DoubledFrame(FieldTag.COMPLEX, [[(1, 0)]])
    f1 = DoubledFrame(FieldTag.COMPLEX, [[(-1, 0)]])
    with pytest.raises(GeodesicError):
        stiefel_path(f0, f1, 0.5)
    sampler, route = doubled_path(f0, f1, 32)
    assert route == "linear-polar" and isinstance(sampler, LinearPolarPath)
    for s in np.linspace(0, 1, 33):
        assert sampler(float(s)).is_orthonormal()
        unpack_cayley_dickson(sampler(float(s)))


@settings(max_examples=40, deadline=None)
@given(seeds, shape(), fields)
def test_doubled_path_stays_on_stiefel(seed, nr, field):
    n, r = nr
    rng = random.Random(seed)
    f0, f1 = doubled(rng, n, r, field), doubled(rng, n, r, field)
    sampler, _ = doubled_path(f0, f1, 64)
    assert sampler(0.0) == f0 and sampler(1.0) == f1
    for s in np.linspace(0, 1, 65):
        frame = sampler(float(s))
        assert frame.is_orthonormal(1e-9)
        unpack_cayley_dickson(frame)


def test_stiefel_path_parameter_range():
    f0 = DoubledFrame(FieldTag.REAL, [[(1, 0)]])
    with pytest.raises(ValueError):
        stiefel_path(f0, f0, 1.5)


def test_symplectic_completion_is_exact():
    rng = random.Random(9)
    for field in (FieldTag.REAL, FieldTag.COMPLEX):
        core = isotropic_to_symplectic(IsotropicEmbedding(isotropic(rng, 3, 1, field)), orthonormal=False)
        square = symplectic_completion(core)
        assert bilinear(square, square, 3) == j_matrix(3)
        assert [row[0] for row in square] == [row[0] for row in core.matrix]
        assert [row[3] for row in square] == [row[1] for row in core.matrix]


def test_gaussian_rational_frames_stay_exact():
    phi = [[GaussianRational(0, 1)], [0]]
    frame = isotropic_to_symplectic(IsotropicEmbedding(phi))
    assert frame.is_exact
    # E = J conj(phi) = (0; i) packs to the quaternion 0 + conj(i) j
    assert pack_cayley_dickson(frame).entries == [[(0, GaussianRational(0, -1))]]
