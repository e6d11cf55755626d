"""Canonical representatives, retraction homotopies and paths inside fibers of phi."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import linalg
from .errors import DomainError, GeodesicError, ShapeError, UnsupportedRegimeError
from .frames import (
    DoubledFrame,
    doubled_path,
    j_matrix,
    pack_cayley_dickson,
    symplectic_completion,
    symplectic_polar_path,
    unpack_cayley_dickson,
)
from .invariant import (
    LinearMap,
    SkewLabel,
    SkewMatrix,
    darboux_normal_form,
    is_normal_form,
    phi,
    skew_to_json,
    map_to_json,
)
from .lie_core import Convention, FieldTag, GroupTuple, form_matrix, is_almost_commuting, riffle_permutation
from .scalars import as_exact, encode_scalar, exact_sqrt, is_exact

DEFAULT_STEPS = 64
DEFAULT_TOL = 1e-9


def _permute_rows_to(rows: list, n: int, src: Convention, dst: Convention) -> list:
    if src is dst:
        return rows
    perm = riffle_permutation(n)
    if dst is Convention.J:
        return [rows[p] for p in perm]
    out = [None] * (2 * n)
    for i, p in enumerate(perm):
        out[p] = rows[i]
    return out


# -- canonical representatives -------------------------------------------------------------


def canonical_representative(beta, n: int, convention=Convention.OMEGA) -> LinearMap:
    """A 2n x k matrix M with phi(M) = beta, namely M0 P^-1 for the Darboux basis P.

    Only the first 2r rows of P^-1 survive the product, and those follow from
    P^T B P = Omega_r + 0: row 2i is (B w_i)^T and row 2i+1 is u_i^T B, where
    (u_i, w_i) is the i-th hyperbolic pair.
    """
    if not isinstance(beta, (SkewLabel, SkewMatrix)):
        beta = SkewMatrix.from_rows(beta)
    convention = Convention.parse(convention)
    b = beta.entries
    k = beta.k
    p, r = darboux_normal_form(beta)
    if r > n:
        raise DomainError(f"rank {2 * r} label needs n >= {r}, got n={n}", name="unrealizable")
    rows = linalg.zeros(2 * n, k)
    cols = linalg.transpose(p)
    for i in range(r):
        u, w = cols[2 * i], cols[2 * i + 1]
        rows[2 * i] = linalg.matvec(b, w)
        rows[2 * i + 1] = linalg.matvec(linalg.transpose(b), u)
    rows = _permute_rows_to(rows, n, Convention.OMEGA, convention)
    return LinearMap(n, k, rows, convention, beta.field)


# -- retractions ---------------------------------------------------------------------------------


def retract_strict_to_heis(t: GroupTuple, s) -> GroupTuple:
    """Scale every interior block x of the logs by s; s = 0 lands in the Heisenberg algebra."""
    if not is_almost_commuting(t):
        raise DomainError("tuple is not almost commuting", name="not-almost-commuting")
    s = as_exact(s)
    return t.with_logs(
        g.with_x([[s * v for v in row] for row in g.x]) for g in t.logs
    )


def retract_kernel(m: LinearMap, beta, s) -> LinearMap:
    """Scale the columns of M past the first 2r by s (M must lie over Omega_r + 0)."""
    if not isinstance(beta, (SkewLabel, SkewMatrix)):
        beta = SkewMatrix.from_rows(beta, m.field)
    r = is_normal_form(beta)
    if r is None:
        raise DomainError("label is not in Darboux normal form", name="not-normal-form")
    if beta.k != m.k:
        raise ShapeError("label size differs from the number of columns")
    if m.is_exact:
        if not linalg.equal(phi(m).entries, beta.entries):
            raise DomainError("map does not lie in the fiber over the label", name="not-in-fiber")
    else:
        if _residual(m, beta) > DEFAULT_TOL:
            raise DomainError("map does not lie in the fiber over the label", name="not-in-fiber")
    s = as_exact(s)
    rows = [[v if j < 2 * r else s * v for j, v in enumerate(row)] for row in m.entries]
    return m.with_entries(rows)


# -- paths inside a fiber --------------------------------------------------------------------------


def _numeric(rows, complex_field: bool) -> np.ndarray:
    if isinstance(rows, np.ndarray):
        return rows
    dtype = complex if complex_field else float
    conv = complex if complex_field else float
    if not rows or not rows[0]:
        return np.zeros((len(rows), 0), dtype=dtype)
    return np.array([[conv(v) for v in r] for r in rows], dtype=dtype)


def _phi_numeric(m: np.ndarray, n: int, convention: Convention) -> np.ndarray:
    omega = np.array(form_matrix(n, convention), dtype=float)
    return m.T @ omega @ m


def _residual(m: LinearMap, beta) -> float:
    if m.is_exact:
        d = linalg.sub(phi(m).entries, beta.entries)
        return float(max((abs(complex(v)) for r in d for v in r), default=0.0))
    arr = _numeric(m.entries, m.field is FieldTag.COMPLEX)
    ref = _numeric(beta.entries, m.field is FieldTag.COMPLEX)
    return float(np.max(np.abs(_phi_numeric(arr, m.n, m.convention) - ref), initial=0.0))


@dataclass
class FiberPath:
    beta: SkewMatrix
    samples: list
    residuals: list
    tolerance: float = DEFAULT_TOL
    diagnostics: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "beta": skew_to_json(self.beta),
            "samples": [map_to_json(s) for s in self.samples],
            "residuals": list(self.residuals),
            "tolerance": self.tolerance,
        }


class _Endpoint:
    """Darboux-normalised endpoint data: exact core and tail in block coordinates."""

    def __init__(self, m: LinearMap, p, r: int, samples: int):
        n, k = m.n, m.k
        self.n, self.r = n, r
        nrm = linalg.matmul(m.entries, p)
        nj = _permute_rows_to(nrm, n, m.convention, Convention.J)
        perm = riffle_permutation(r) if r else []
        self.core = [[row[c] for c in perm] for row in nj]
        self.tail = [row[2 * r :] for row in nj]
        self.complex = m.field is FieldTag.COMPLEX
        self.core_np = _numeric(self.core, self.complex)
        self.tail_np = _numeric(self.tail, self.complex)
        if r:
            square = symplectic_completion(self.core)
            self.polar = symplectic_polar_path(square)
            self.core_cols = list(range(r)) + list(range(n, n + r))
            e = self.polar(1.0)[:, :r]
            # rebuild G = -J conj(E) so rounding in the polar factor cannot break the doubled form
            g = -(j_matrix(n, True) @ e.conj())
            self.doubled = pack_cayley_dickson(np.hstack([e, g]), m.field)
        else:
            self.polar = None
            self.doubled = None

    def polar_core(self, t: float) -> np.ndarray:
        if not self.r:
            return self.core_np
        return self.polar(t)[:, self.core_cols]


def connect_in_fiber(
    m0: LinearMap, m1: LinearMap, steps: int = DEFAULT_STEPS, tol: float = DEFAULT_TOL
) -> FiberPath:
    """Sampled path from M0 to M1 inside the fiber of phi over their common label.

    The route normalises the label, shrinks the kernel columns, polar-retracts
    each core onto an orthonormal symplectic frame, joins the two frames along a
    Stiefel path of the packed frames, and then runs the first two legs
    backwards for M1.  Endpoints are returned exactly.
    """
    if steps < 1:
        raise ValueError("steps must be positive")
    if (m0.n, m0.k, m0.field) != (m1.n, m1.k, m1.field):
        raise ShapeError("endpoints must share n, k and field")
    if not (m0.is_exact and m1.is_exact):
        raise UnsupportedRegimeError("path endpoints must be exact")
    m1 = m1.to_convention(m0.convention)
    beta = phi(m0)
    if not linalg.equal(beta.entries, phi(m1).entries):
        raise DomainError("endpoints have different labels", name="label-mismatch")
    n, k, conv = m0.n, m0.k, m0.convention
    taus = [Fraction(j, steps) for j in range(steps + 1)]

    if linalg.equal(m0.entries, m1.entries):
        return FiberPath(beta, [m0] * len(taus), [0.0] * len(taus), tol, {"route": "constant"})

    p, r = darboux_normal_form(beta)
    pinv = _numeric(linalg.inverse(p), m0.field is FieldTag.COMPLEX)
    e0, e1 = _Endpoint(m0, p, r, steps), _Endpoint(m1, p, r, steps)
    route = "kernel-only"
    sampler = None
    if r:
        sampler, route = doubled_path(e0.doubled, e1.doubled, steps)

    perm_back = np.argsort(riffle_permutation(r)) if r else np.array([], dtype=int)
    row_perm = riffle_permutation(n)

    def assemble(core: np.ndarray, tail: np.ndarray) -> np.ndarray:
        nj = np.hstack([core[:, perm_back] if r else core, tail])
        if conv is Convention.OMEGA:
            rows = np.empty_like(nj)
            rows[row_perm] = nj
        else:
            rows = nj
        return rows @ pinv

    zero_tail = np.zeros_like(e0.tail_np)

    def sample(tau: Fraction) -> np.ndarray:
        x = float(tau) * 5
        seg = min(int(x), 4)
        loc = x - seg
        if seg == 0:
            return assemble(e0.core_np, e0.tail_np * (1 - loc))
        if seg == 1:
            return assemble(e0.polar_core(loc), zero_tail)
        if seg == 2:
            if not r:
                return assemble(e0.core_np, zero_tail)
            frame = unpack_cayley_dickson(sampler(loc), check=False).matrix
            return assemble(np.asarray(frame), zero_tail)
        if seg == 3:
            return assemble(e1.polar_core(1 - loc), zero_tail)
        return assemble(e1.core_np, e1.tail_np * loc)

    samples, residuals = [], []
    ref = _numeric(beta.entries, m0.field is FieldTag.COMPLEX)
    for tau in taus:
        if tau == 0 or tau == 1:
            samples.append(m0 if tau == 0 else m1)
            residuals.append(0.0)
            continue
        arr = sample(tau)
        res = float(np.max(np.abs(_phi_numeric(arr, n, conv) - ref), initial=0.0))
        if res >= tol:
            raise GeodesicError(f"path residual {res:.3g} exceeds tolerance {tol:.3g}")
        if m0.field is FieldTag.REAL:
            arr = np.real(arr)
        samples.append(LinearMap(n, k, arr.tolist(), conv, m0.field))
        residuals.append(res)
    return FiberPath(beta, samples, residuals, tol, {"route": route, "rank": 2 * r})


# -- the k = 2 homeomorphism -----------------------------------------------------------------------


@dataclass(frozen=True)
class SpherePoint:
    """u = (u1, u2) on the unit sphere of R^{2n} and v = (v1, v2) in R^{2n}."""

    u: tuple
    v: tuple

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(as_exact(x) for x in self.u))
        object.__setattr__(self, "v", tuple(as_exact(x) for x in self.v))
        if len(self.u) != len(self.v) or len(self.u) % 2 or not self.u:
            raise ShapeError("u and v must share an even positive length")

    @property
    def n(self) -> int:
        return len(self.u) // 2

    @property
    def is_exact(self) -> bool:
        return all(is_exact(x) for x in self.u + self.v)

    def to_json(self) -> dict:
        return {"u": [encode_scalar(x) for x in self.u], "v": [encode_scalar(x) for x in self.v]}


def _sqrt(q, exact: bool):
    if exact:
        root = exact_sqrt(q)
        if root is not None:
            return root
    return float(q) ** 0.5


def _sq(vec) -> object:
    return sum((x * x for x in vec), Fraction(0))


def homeo_k2(obj, direction: str = "forward"):
    """Forward: X(2, n, 2) -> S^{2n-1} x R^{2n}; inverse: back to a 2n x 2 matrix.

    Writing the columns of M as (x1, y1) and (x2, y2) in interleaved
    coordinates, u is proportional to (x1 + y2, y1 - x2) and
    v = ((y2 - x1)/2, (y1 + x2)/2).
    """
    direction = direction.lower()
    if direction == "forward":
        return _homeo_forward(obj)
    if direction == "inverse":
        return _homeo_inverse(obj)
    raise ValueError("direction must be 'forward' or 'inverse'")


def _homeo_forward(m: LinearMap) -> SpherePoint:
    if m.field is not FieldTag.REAL:
        raise UnsupportedRegimeError("the k = 2 homeomorphism is defined over R only")
    if m.k != 2:
        raise ShapeError("the k = 2 homeomorphism needs a 2n x 2 matrix")
    m = m.to_convention(Convention.OMEGA)
    target = SkewMatrix(2, [[0, 1], [-1, 0]])
    if _residual(m, target) > (0 if m.is_exact else DEFAULT_TOL):
        raise DomainError("matrix does not pull the form back to Omega_1", name="not-in-fiber")
    rows = m.entries
    x1 = [r[0] for r in rows[0::2]]
    y1 = [r[0] for r in rows[1::2]]
    x2 = [r[1] for r in rows[0::2]]
    y2 = [r[1] for r in rows[1::2]]
    half = Fraction(1, 2)
    v1 = [(b - a) * half for a, b in zip(x1, y2)]
    v2 = [(a + b) * half for a, b in zip(y1, x2)]
    radicand = 4 + _sq([a + b for a, b in zip(y1, x2)]) + _sq([b - a for a, b in zip(x1, y2)])
    denom = _sqrt(radicand, m.is_exact)
    u = [(a + b) / denom for a, b in zip(x1, y2)] + [(a - b) / denom for a, b in zip(y1, x2)]
    return SpherePoint(u, v1 + v2)


def _homeo_inverse(p: SpherePoint) -> LinearMap:
    n = p.n
    u1, u2 = p.u[:n], p.u[n:]
    v1, v2 = p.v[:n], p.v[n:]
    rho = _sqrt(1 + _sq(p.v), p.is_exact)
    rows = []
    for i in range(n):
        a, b = rho * u1[i], rho * u2[i]
        x1, y2 = a - v1[i], a + v1[i]
        x2, y1 = v2[i] - b, v2[i] + b
        rows.append([x1, x2])
        rows.append([y1, y2])
    return LinearMap(n, 2, rows, Convention.OMEGA, FieldTag.REAL)
