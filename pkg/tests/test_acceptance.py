"""End-to-end acceptance checks, one test per criterion, each under a wall-clock limit."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import numpy as np
import scipy.linalg

from conftest import acceptance
from gen import (
    almost_commuting_tuple,
    isotropic,
    orthonormal_isotropic,
    rand_fiber_point,
    rand_heis,
    rand_label,
    rand_matrix,
    rand_scalar,
    rand_skew,
    rand_unimodular,
)
from nilcomm import linalg
from nilcomm.components import canonical_representative, connect_in_fiber, homeo_k2, retract_kernel, retract_strict_to_heis
from nilcomm.errors import DomainError
from nilcomm.frames import (
    IsotropicEmbedding,
    OrthSymplecticFrame,
    isotropic_to_symplectic,
    j_matrix,
    pack_cayley_dickson,
    polar_isotropic,
    unpack_cayley_dickson,
)
from nilcomm.invariant import (
    LinearMap,
    SkewLabel,
    SkewMatrix,
    component_label,
    darboux_normal_form,
    is_realizable,
    normal_form_matrix,
    phi,
    plucker_rank2_test,
)
from nilcomm.lie_core import Convention, FieldTag, Lattice, bch_product_2step, group_commutator_log, nilpotent_exp, st_bracket
from nilcomm.scalars import QuadraticElement, conj
from nilcomm.strata import is_rational_point

S_GRID = [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)]
FIELDS = [FieldTag.REAL, FieldTag.COMPLEX]


def test_bch_dictionary():
    rng = random.Random(101)
    with acceptance(1, "BCH product and group commutator, 1000 exact Heisenberg pairs", 5) as note:
        for i in range(1000):
            n = 1 + i % 3
            field = FIELDS[i % 2]
            x, y = rand_heis(rng, n, field), rand_heis(rng, n, field)
            assert nilpotent_exp(bch_product_2step(x, y)) == linalg.matmul(nilpotent_exp(x), nilpotent_exp(y))
            assert group_commutator_log(x, y) == st_bracket(x, y)
        note["text"] = "1000 pairs, n in {1,2,3}, R and C"


def test_component_classification():
    with acceptance(2, "realizability matches canonical representatives, entries in [-2,2], k<=4, n<=2", 60) as note:
        checked = rejected = 0
        for k in (2, 3, 4):
            top = 2 * (k // 2)
            for upper in product(range(-2, 3), repeat=k * (k - 1) // 2):
                label = SkewLabel.from_upper(k, upper)
                rank = label.rank()
                for n in (1, 2):
                    try:
                        m = canonical_representative(label, n)
                        exists = phi(m) == label.as_matrix()
                        assert exists
                    except DomainError as err:
                        assert err.name == "unrealizable"
                        exists = False
                    verdict = is_realizable(label, n)
                    assert verdict == exists
                    if rank == top and top > 0:
                        # maximal-rank labels fail exactly when floor(k/2) > n
                        assert (not verdict) == (k // 2 > n)
                    rejected += not verdict
                    checked += 1
        note["text"] = f"{checked} (label, n) cases, {rejected} rejected"


def test_darboux_normal_form():
    rng = random.Random(303)
    with acceptance(3, "Darboux normal form, 1000 exact antisymmetric matrices, k<=6", 10) as note:
        for i in range(1000):
            k = 1 + i % 6
            field = FIELDS[(i // 6) % 2]
            b = rand_skew(rng, k, field)
            p, r = darboux_normal_form(b)
            assert linalg.matmul(linalg.transpose(p), linalg.matmul(b, p)) == normal_form_matrix(k, r)
            assert linalg.det(p) != 0
        note["text"] = "exact congruence to Omega_r + 0, P invertible"


def test_homotopy_invariance():
    rng = random.Random(404)
    with acceptance(4, "labels and phi constant along both retractions, 500 instances each", 10) as note:
        for i in range(500):
            field = FIELDS[i % 2]
            n, k = 2 + i % 2, 1 + i % 4
            t = almost_commuting_tuple(rng, n, k, field, strict=True)
            lab = component_label(t)
            assert all(component_label(retract_strict_to_heis(t, s)) == lab for s in S_GRID)
        for i in range(500):
            field = FIELDS[i % 2]
            k, n = 1 + i % 5, 1 + i % 3
            r = rng.randint(0, min(k // 2, n))
            beta = SkewMatrix(k, normal_form_matrix(k, r), field)
            m = rand_fiber_point(rng, beta, n)
            assert all(phi(retract_kernel(m, beta, s)) == beta for s in S_GRID)
        note["text"] = "s in {0, 1/4, 1/2, 3/4, 1}, exact"


def test_fiber_connectivity():
    rng = random.Random(505)
    with acceptance(5, "connect_in_fiber on 50 random same-label pairs, k,n<=4, R and C", 60) as note:
        worst = 0.0
        routes = {}
        for i in range(50):
            field = FIELDS[i % 2]
            k, n = rng.randint(1, 4), rng.randint(1, 4)
            lab = rand_label(rng, k, field, 2, max_rank=2 * n)
            beta = SkewMatrix(k, lab.entries, field)
            m0 = rand_fiber_point(rng, beta, n)
            m1 = rand_fiber_point(rng, beta, n)
            path = connect_in_fiber(m0, m1, 64)
            assert path.samples[0] == m0 and path.samples[-1] == m1
            assert path.residuals[0] == 0.0 and path.residuals[-1] == 0.0
            worst = max(worst, max(path.residuals))
            routes[path.diagnostics["route"]] = routes.get(path.diagnostics["route"], 0) + 1
        assert worst < 1e-9
        note["text"] = f"max residual {worst:.1e}, routes {dict(sorted(routes.items()))}"


def test_k2_homeomorphism():
    rng = random.Random(606)
    omega1 = SkewMatrix(2, normal_form_matrix(2, 1))
    with acceptance(6, "k=2 homeomorphism round trip and sphere constraint, 200 points, n<=3", 5) as note:
        worst_trip = worst_sphere = 0.0
        for i in range(200):
            m = rand_fiber_point(rng, omega1, 1 + i % 3)
            p = homeo_k2(m)
            worst_sphere = max(worst_sphere, abs(sum(float(x) ** 2 for x in p.u) - 1))
            back = np.array(homeo_k2(p, "inverse").entries, dtype=float)
            worst_trip = max(worst_trip, float(np.max(np.abs(back - np.array(m.entries, dtype=float)))))
        assert worst_trip < 1e-12 and worst_sphere < 1e-12
        note["text"] = f"round trip {worst_trip:.1e}, sphere {worst_sphere:.1e}"


def _orth_symplectic(mat) -> bool:
    try:
        OrthSymplecticFrame(mat)
    except DomainError:
        return False
    return True


def test_frames():
    rng = random.Random(707)
    with acceptance(7, "frames: exact extension, polar reconstruction, packing, Gram identity, 200 each", 20) as note:
        worst_polar = 0.0
        both_ways = [0, 0]
        for i in range(200):
            field = FIELDS[i % 2]
            n = 1 + i % 4
            d = 1 + (i // 4) % n
            # exact symplectic preservation of the extension
            phi_ = isotropic(rng, n, d, field)
            frame = isotropic_to_symplectic(IsotropicEmbedding(phi_), orthonormal=False)
            gram = linalg.matmul(linalg.transpose(frame.matrix), linalg.matmul(j_matrix(n), frame.matrix))
            assert gram == j_matrix(d)
            # polar reconstruction in floats
            a = np.array([[complex(v) for v in row] for row in phi_])
            a = a.real if field is FieldTag.REAL else a
            u, s = polar_isotropic(IsotropicEmbedding(a))
            worst_polar = max(worst_polar, float(np.max(np.abs(u.matrix @ scipy.linalg.expm(s) - a))))
            # pack and unpack are exact inverses
            orth = isotropic_to_symplectic(orthonormal_isotropic(rng, n, d, field))
            packed = pack_cayley_dickson(orth)
            assert unpack_cayley_dickson(packed).matrix == orth.matrix
            # Gram identity after packing holds exactly for orthonormal symplectic frames
            base = orthonormal_isotropic(rng, n, d, field)
            if i % 2:
                row, col = rng.randrange(2 * n), rng.randrange(d)
                base[row][col] = base[row][col] + rand_scalar(rng, field, 1) / 5
            mat = [x + y for x, y in zip(linalg.matmul(j_matrix(n), [[conj(v) for v in r] for r in base]), base)]
            expected = _orth_symplectic(mat)
            assert pack_cayley_dickson(mat, field).is_orthonormal() == expected
            both_ways[expected] += 1
        assert worst_polar < 1e-10
        assert both_ways[0] > 0 and both_ways[1] > 0
        note["text"] = f"polar error {worst_polar:.1e}, Gram cases orth/non-orth {both_ways[1]}/{both_ways[0]}"


def test_irrational_torus_detection():
    rng = random.Random(808)
    root2 = QuadraticElement(0, 1, 2)
    irrational = LinearMap.from_rows([[root2, 1], [root2, 1]])
    with acceptance(8, "irrational torus detection with sqrt 2, invariance under 100 GL_2(Z) moves", 5) as note:
        assert not is_rational_point(irrational, Lattice())
        rational = [LinearMap.from_rows(rand_matrix(rng, 2, 2, bound=3)) for _ in range(100)]
        assert all(is_rational_point(f, Lattice()) for f in rational)
        for i in range(100):
            u = rand_unimodular(rng, 2)
            assert not is_rational_point(irrational.with_entries(linalg.matmul(irrational.entries, u)))
            f = rational[i]
            assert is_rational_point(f.with_entries(linalg.matmul(f.entries, u)))
        note["text"] = "sqrt 2 flagged, 100 rational maps flagged rational"


def test_plucker_equivalence():
    with acceptance(9, "Plucker test equals Darboux rank <= 2, all 15625 k=4 labels in [-2,2]", 30) as note:
        low = 0
        for upper in product(range(-2, 3), repeat=6):
            label = SkewLabel.from_upper(4, upper)
            rank_ok = darboux_normal_form(label)[1] <= 1
            assert plucker_rank2_test(label) == rank_ok
            low += rank_ok
        note["text"] = f"{low} labels of rank <= 2"
