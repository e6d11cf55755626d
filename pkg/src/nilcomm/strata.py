"""Rank strata of maps into F^{2n}, the conjugation action on central coordinates,
rational-point detection and the summand inventory of the stable splitting."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import DomainError, ShapeError, UnsupportedRegimeError
from .invariant import LinearMap, map_to_json
from .lie_core import Convention, FieldTag, Lattice, StrictUpperElement, omega_form, riffle
from .scalars import GaussianRational, QuadraticElement, as_exact, encode_scalar


@dataclass(frozen=True)
class StratumPoint:
    f: LinearMap
    d: int
    kernel_basis: tuple

    def __post_init__(self):
        if self.d + len(self.kernel_basis) != self.f.k:
            raise ShapeError("rank plus kernel dimension must equal k")


@dataclass(frozen=True)
class OrbitPoint:
    f: LinearMap
    v: tuple

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(as_exact(x) for x in self.v))
        if len(self.v) != self.f.k:
            raise ShapeError("v must have length k")
        if any(x != 0 for x in linalg.matvec(self.f.entries, self.v)):
            raise DomainError("v is not in the kernel of f", name="not-in-kernel")


@dataclass(frozen=True)
class SummandDescriptor:
    l: int
    base_dim: int
    fiber_rank: int
    convention: str = "v1"

    def to_json(self) -> dict:
        return {"l": self.l, "base_dim": self.base_dim, "fiber_rank": self.fiber_rank, "convention": self.convention}


def _require_exact(f: LinearMap) -> None:
    if not f.is_exact:
        raise UnsupportedRegimeError("this operation needs exact entries")


def stratum_index(f: LinearMap) -> int:
    _require_exact(f)
    return linalg.rank(f.entries)


def kernel_basis(f: LinearMap) -> list:
    _require_exact(f)
    return linalg.nullspace(f.entries)


def stratum_point(f: LinearMap) -> StratumPoint:
    basis = kernel_basis(f)
    return StratumPoint(f, f.k - len(basis), tuple(tuple(v) for v in basis))


def kernel_projection(f: LinearMap) -> list:
    """K (K^T K)^-1 K^T for a kernel basis K; the projection onto ker f along im f^T.

    Over R this is the orthogonal projection.  Over C the transpose is not
    conjugated, which keeps the complement equal to im f^T, the direction in
    which conjugation moves central coordinates.
    """
    basis = kernel_basis(f)
    k = f.k
    if not basis:
        return linalg.zeros(k, k)
    kmat = linalg.transpose(basis)
    gram = linalg.matmul(basis, kmat)
    try:
        ginv = linalg.inverse(gram)
    except DomainError:
        raise DomainError(
            "kernel meets its bilinear complement; no projection exists", name="degenerate-kernel"
        ) from None
    return linalg.matmul(kmat, linalg.matmul(ginv, basis))


def conjugate_tuple(f: LinearMap, z: Sequence, g: StrictUpperElement) -> tuple[LinearMap, list]:
    """Shift each z_i by omega(f_i, (x, y)), with (x, y) the vector part of g.

    This is the central part of conjugating the tuple by exp(-g); f is unchanged.
    """
    if not g.is_heisenberg:
        raise DomainError("conjugating element must be a Heisenberg element", name="not-heisenberg")
    if g.n != f.n:
        raise ShapeError("element and map disagree on n")
    if len(z) != f.k:
        raise ShapeError("z must have length k")
    vec = list(g.vector_part)
    if f.convention is Convention.OMEGA:
        vec = riffle(vec, Convention.OMEGA)
    z = [as_exact(v) for v in z]
    shifted = [zi + omega_form(col, vec, f.convention) for zi, col in zip(z, f.columns())]
    return f, shifted


def orbit_normal_form(f: LinearMap, z: Sequence) -> OrbitPoint:
    rho = kernel_projection(f)
    return OrbitPoint(f, linalg.matvec(rho, [as_exact(v) for v in z]))


def _flatten(vec: Sequence) -> list:
    """Coordinates over Q: (a, b) for a + b sqrt(m), (re, im) for Gaussian rationals."""
    out = []
    for x in vec:
        if isinstance(x, QuadraticElement):
            out += [x.a, x.b]
        elif isinstance(x, GaussianRational):
            out += [x.re, x.im]
        else:
            out += [Fraction(x), Fraction(0)]
    return out


def is_rational_point(f: LinearMap, lattice: Lattice | None = None) -> bool:
    """Does rho_f(A^k) have Q-rank equal to dim_R ker f?"""
    if not f.is_exact:
        raise UnsupportedRegimeError("rationality needs exact entries; floats cannot certify it")
    lattice = lattice or Lattice()
    ents = [v for r in f.entries for v in r]
    if any(isinstance(v, GaussianRational) for v in ents) and any(isinstance(v, QuadraticElement) for v in ents):
        raise UnsupportedRegimeError("mixed Gaussian and quadratic entries are not supported")
    k = f.k
    kdim = k - stratum_index(f)
    real_dim = kdim * f.field.real_dim
    if lattice.kind == "trivial":
        return real_dim == 0
    rho = kernel_projection(f)
    units = [Fraction(1)] if f.field is FieldTag.REAL else [Fraction(1), GaussianRational(0, 1)]
    gens = []
    for j in range(k):
        col = [rho[i][j] for i in range(k)]
        for unit in units:
            gens.append(_flatten([unit * lattice.scale * v for v in col]))
    rank = linalg.rank(gens) if gens else 0
    return rank == real_dim


def _orthogonal_dim(l: int, field: FieldTag) -> int:
    # isometry group of D(F)^l: U(l) over C, Sp(l) over H
    return l * l if field is FieldTag.REAL else l * (2 * l + 1)


def splitting_inventory(k: int, n: int, d: int, field=FieldTag.REAL) -> list[SummandDescriptor]:
    """Dimension bookkeeping for the wedge summands indexed by 0 <= l <= d."""
    field = FieldTag.parse(field)
    if not 0 <= d <= k <= n:
        raise ValueError("need 0 <= d <= k <= n")
    f_dim = field.real_dim
    d_dim = 2 * f_dim
    out = []
    for l in range(d + 1):
        base = d * (k - d) * f_dim + l * (d - l) * d_dim
        copies = (n - d) * d_dim + d * f_dim
        fiber = _orthogonal_dim(l, field) + copies * l * d_dim
        out.append(SummandDescriptor(l, base, fiber))
    return out


def orbit_to_json(p: OrbitPoint) -> dict:
    return {"f": map_to_json(p.f), "v": [encode_scalar(x) for x in p.v]}
