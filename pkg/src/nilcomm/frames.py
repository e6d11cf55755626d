"""Isotropic and symplectic frames in the block pairing J_n.

Exact frames are lists of rows of exact scalars; float frames are numpy arrays.
A doubled frame is an n x r matrix over C (real base) or H (complex base) whose
entries are pairs ``(z1, z2)`` meaning ``z1 + z2*i`` over R and ``z1 + z2*j``
over C.  Both cases share one multiplication rule::

    (a, b) * (c, d) = (a c - b conj(d), a d + b conj(c)),   conj(a, b) = (conj(a), -b)

since complex conjugation is the identity on real scalars.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from . import linalg
from .errors import DomainError, GeodesicError, ShapeError, UnsupportedRegimeError
from .lie_core import Convention, FieldTag, form_matrix
from .scalars import as_exact, conj, decode_scalar, encode_scalar, is_exact

TOL = 1e-9


# -- helpers ------------------------------------------------------------------------------


def is_float_matrix(m) -> bool:
    if isinstance(m, np.ndarray):
        return True
    return any(isinstance(v, (float, complex)) for r in m for v in r)


def to_numpy(m) -> np.ndarray:
    if isinstance(m, np.ndarray):
        return m
    vals = [[complex(v) for v in r] for r in m]
    arr = np.array(vals, dtype=complex).reshape(len(m), len(m[0]) if m else 0)
    if not np.any(arr.imag):
        return arr.real.copy()
    return arr


def j_matrix(n: int, numeric: bool = False):
    m = form_matrix(n, Convention.J)
    return np.array(m, dtype=float) if numeric else m


def _conj_matrix(m):
    if isinstance(m, np.ndarray):
        return m.conj()
    return [[conj(v) for v in r] for r in m]


def _bilinear_gram(a, b, n: int):
    """a^T J_n b (no conjugation)."""
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        a, b = to_numpy(a), to_numpy(b)
        return a.T @ j_matrix(n, True) @ b
    return linalg.matmul(linalg.transpose(a), linalg.matmul(j_matrix(n), b))


def _herm_gram(a):
    if isinstance(a, np.ndarray):
        return a.conj().T @ a
    return linalg.matmul(linalg.conj_transpose(a), a)


def _close(m, target, tol: float) -> bool:
    if isinstance(m, np.ndarray):
        t = np.array(target, dtype=complex) if not isinstance(target, np.ndarray) else target
        return bool(m.size == 0 or np.max(np.abs(m - t)) <= tol)
    return linalg.equal(m, target)


def _field_of(m) -> FieldTag:
    if isinstance(m, np.ndarray):
        return FieldTag.COMPLEX if np.iscomplexobj(m) and np.any(m.imag) else FieldTag.REAL
    return FieldTag.COMPLEX if any(isinstance(v, complex) or getattr(v, "im", 0) != 0 for r in m for v in r) else FieldTag.REAL


def _shape(m) -> tuple[int, int]:
    if isinstance(m, np.ndarray):
        return m.shape
    return linalg.shape(m)


def _cols(m, idx: Sequence[int]):
    if isinstance(m, np.ndarray):
        return m[:, list(idx)]
    return [[r[i] for i in idx] for r in m]


def _normalise(m):
    if isinstance(m, np.ndarray):
        return m
    return [[as_exact(v) for v in r] for r in m]


def _hstack(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.hstack([to_numpy(a), to_numpy(b)])
    return [list(r) + list(s) for r, s in zip(a, b)]


# -- frame types ------------------------------------------------------------------------------


class IsotropicEmbedding:
    """Injective 2n x d matrix with phi^T J_n phi = 0."""

    def __init__(self, matrix, field=None, tol: float = TOL, check: bool = True):
        rows, d = _shape(matrix)
        if rows % 2 or rows == 0 or d == 0:
            raise ShapeError("an isotropic embedding is a 2n x d matrix with d >= 1")
        self.n, self.d = rows // 2, d
        self.matrix = _normalise(matrix)
        self.field = FieldTag.parse(field) if field is not None else _field_of(matrix)
        if check:
            if not _close(_bilinear_gram(self.matrix, self.matrix, self.n), linalg.zeros(d, d), tol):
                raise DomainError("embedding is not isotropic", name="not-isotropic")
            if _rank(self.matrix) < d:
                raise DomainError("columns are linearly dependent", name="rank-deficient")

    @property
    def is_exact(self) -> bool:
        return not is_float_matrix(self.matrix)


def _rank(m) -> int:
    if isinstance(m, np.ndarray):
        return int(np.linalg.matrix_rank(m, tol=1e-10 * max(1.0, np.abs(m).max(initial=0.0))))
    return linalg.rank(m)


class SymplecticFrame:
    """2n x 2r matrix with F^T J_n F = J_r; columns laid out as (E | G)."""

    def __init__(self, matrix, field=None, tol: float = TOL, check: bool = True):
        rows, cols = _shape(matrix)
        if rows % 2 or cols % 2 or rows == 0 or cols == 0:
            raise ShapeError("a symplectic frame is a 2n x 2r matrix")
        self.n, self.r = rows // 2, cols // 2
        self.matrix = _normalise(matrix)
        self.field = FieldTag.parse(field) if field is not None else _field_of(matrix)
        self.tol = tol
        if check:
            self._validate()

    def _validate(self) -> None:
        if not _close(_bilinear_gram(self.matrix, self.matrix, self.n), j_matrix(self.r), self.tol):
            raise DomainError("frame does not pull J_n back to J_r", name="not-symplectic")

    @property
    def is_exact(self) -> bool:
        return not is_float_matrix(self.matrix)

    @property
    def e_block(self):
        return _cols(self.matrix, range(self.r))

    @property
    def g_block(self):
        return _cols(self.matrix, range(self.r, 2 * self.r))


class OrthSymplecticFrame(SymplecticFrame):
    """Symplectic frame with orthonormal columns (hermitian inner product)."""

    def _validate(self) -> None:
        super()._validate()
        if not _close(_herm_gram(self.matrix), linalg.identity(2 * self.r), self.tol):
            raise DomainError("frame columns are not orthonormal", name="not-orthonormal")


# -- isotropic <-> symplectic ----------------------------------------------------------------


def isotropic_to_symplectic(phi: IsotropicEmbedding, orthonormal: bool = True) -> SymplecticFrame:
    """Extend an isotropic embedding to the symplectic frame (J conj(phi) | phi).

    With ``orthonormal=False`` the first block is J conj(phi) conj(G)^-1 where
    G = phi* phi, which is symplectic for any isotropic injective phi.
    """
    if not isinstance(phi, IsotropicEmbedding):
        phi = IsotropicEmbedding(phi)
    mat, n, d = phi.matrix, phi.n, phi.d
    gram = _herm_gram(mat)
    j = j_matrix(n, numeric=isinstance(mat, np.ndarray))
    if isinstance(mat, np.ndarray):
        first = j @ mat.conj()
    else:
        first = linalg.matmul(j, _conj_matrix(mat))
    if orthonormal:
        if not _close(gram, linalg.identity(d), TOL):
            raise DomainError("orthonormal extension needs phi* phi = I", name="not-orthonormal")
        return OrthSymplecticFrame(_hstack(first, mat), phi.field)
    if isinstance(mat, np.ndarray):
        first = first @ np.linalg.inv(gram.conj())
    else:
        first = linalg.matmul(first, linalg.inverse(_conj_matrix(gram)))
    return SymplecticFrame(_hstack(first, mat), phi.field)


def symplectic_to_isotropic(frame: SymplecticFrame) -> IsotropicEmbedding:
    """Drop the first block, keeping the isotropic half (the last r columns)."""
    return IsotropicEmbedding(frame.g_block, frame.field)


# -- polar decompositions -----------------------------------------------------------------------


def _herm_function(g: np.ndarray, fn) -> np.ndarray:
    w, v = np.linalg.eigh(g)
    return (v * fn(w)) @ v.conj().T


def polar_isotropic(a: IsotropicEmbedding):
    """A = U exp(S) with U* U = I and S self-adjoint.

    Returns ``(U, S)``.  An exactly orthonormal exact input returns itself with
    an exact zero S; everything else is computed in floats.
    """
    if not isinstance(a, IsotropicEmbedding):
        a = IsotropicEmbedding(a)
    if a.is_exact and linalg.equal(_herm_gram(a.matrix), linalg.identity(a.d)):
        return a, linalg.zeros(a.d, a.d)
    m = to_numpy(a.matrix)
    g = m.conj().T @ m
    g = (g + g.conj().T) / 2
    w, v = np.linalg.eigh(g)
    if w[0] <= 1e-14 * max(1.0, w[-1]):
        raise DomainError("polar decomposition needs full column rank", name="rank-deficient")
    s = (v * (0.5 * np.log(w))) @ v.conj().T
    u = m @ ((v * w ** -0.5) @ v.conj().T)
    if not np.iscomplexobj(m):
        s, u = s.real, u.real
    return IsotropicEmbedding(u, a.field, tol=1e-8), s


def symplectic_polar_path(s_matrix) -> Callable[[float], np.ndarray]:
    """t -> S P^-t where S = U P is the polar form; symplectic for every t, unitary at t=1.

    Uses the SVD S = W diag(sigma) V*, so P^-t = V diag(sigma^-t) V*.
    """
    s = to_numpy(s_matrix)
    w, sigma, vh = np.linalg.svd(s)
    if sigma[-1] <= 1e-14 * sigma[0]:
        raise DomainError("matrix is singular", name="singular")
    u = w @ vh
    real = not np.iscomplexobj(s)

    def at(t: float) -> np.ndarray:
        if t == 1:
            return u
        out = (w * sigma ** (1 - t)) @ vh
        return out.real if real and np.iscomplexobj(out) else out

    return at


def symplectic_completion(core) -> list:
    """Extend a symplectic frame (E | G) to a square symplectic matrix (E, E', G, G').

    Exact symplectic Gram-Schmidt against the standard basis, so the output is
    exact whenever ``core`` is.
    """
    frame = core if isinstance(core, SymplecticFrame) else SymplecticFrame(core)
    if not frame.is_exact:
        raise UnsupportedRegimeError("symplectic completion runs in exact arithmetic")
    n, r = frame.n, frame.r
    cols = linalg.transpose(frame.matrix)
    es, gs = cols[:r], cols[r:]

    def omega(u, v):
        total = Fraction(0)
        for i in range(n):
            if u[i] != 0 and v[n + i] != 0:
                total = total + u[i] * v[n + i]
            if v[i] != 0 and u[n + i] != 0:
                total = total - v[i] * u[n + i]
        return total

    def project(v, e, g):
        we, wg = omega(v, e), omega(v, g)
        if we == 0 and wg == 0:
            return v
        return [vc - wg * ec + we * gc for vc, ec, gc in zip(v, e, g)]

    candidates = [[Fraction(int(i == j)) for i in range(2 * n)] for j in range(2 * n)]
    for e, g in zip(es, gs):
        candidates = [project(v, e, g) for v in candidates]
    new_e, new_g = [], []
    while len(new_e) < n - r:
        candidates = [v for v in candidates if any(c != 0 for c in v)]
        found = None
        for i in range(len(candidates)):
            for j in range(i + 1, len(candidates)):
                val = omega(candidates[i], candidates[j])
                if val != 0:
                    found = (i, j, val)
                    break
            if found:
                break
        if found is None:
            raise DomainError("symplectic completion failed", name="completion-failure")
        i, j, val = found
        e = candidates[i]
        g = [c / val for c in candidates[j]]
        candidates = [project(v, e, g) for t, v in enumerate(candidates) if t not in (i, j)]
        new_e.append(e)
        new_g.append(g)
    return linalg.transpose(es + new_e + gs + new_g)


# -- Cayley-Dickson packing -------------------------------------------------------------------


def pair_mul(p, q):
    a, b = p
    c, d = q
    return (a * c - b * conj(d), a * d + b * conj(c))


def pair_conj(p):
    return (conj(p[0]), -p[1])


def pair_add(p, q):
    return (p[0] + q[0], p[1] + q[1])


class DoubledFrame:
    """An n x r matrix over D(F), entries stored as pairs."""

    def __init__(self, base_field, entries):
        self.base_field = FieldTag.parse(base_field)
        self.entries = [[tuple(as_exact(v) for v in e) for e in row] for row in entries]
        self.n = len(self.entries)
        self.r = len(self.entries[0]) if self.entries else 0
        if self.n == 0 or self.r == 0 or any(len(row) != self.r for row in self.entries):
            raise ShapeError("a doubled frame is a nonempty n x r matrix")
        if any(len(e) != 2 for row in self.entries for e in row):
            raise ShapeError("doubled frame entries are pairs")

    def __eq__(self, other):
        if not isinstance(other, DoubledFrame):
            return NotImplemented
        return self.base_field is other.base_field and self.entries == other.entries

    def gram(self) -> list:
        """Hermitian Gram matrix sum_l conj(F[l][i]) F[l][j], entries as pairs."""
        out = []
        for i in range(self.r):
            row = []
            for j in range(self.r):
                acc = (Fraction(0), Fraction(0))
                for l in range(self.n):
                    acc = pair_add(acc, pair_mul(pair_conj(self.entries[l][i]), self.entries[l][j]))
                row.append(acc)
            out.append(row)
        return out

    def is_orthonormal(self, tol: float = TOL) -> bool:
        for i, row in enumerate(self.gram()):
            for j, (x, y) in enumerate(row):
                target = 1 if i == j else 0
                if is_exact(x) and is_exact(y):
                    if x != target or y != 0:
                        return False
                elif abs(complex(x) - target) > tol or abs(complex(y)) > tol:
                    return False
        return True

    def to_complex_matrix(self) -> np.ndarray:
        """C^{n x r} for a real base; the 2n x 2r matrix [[Z1, Z2], [-conj Z2, conj Z1]] otherwise."""
        z1 = np.array([[complex(e[0]) for e in row] for row in self.entries])
        z2 = np.array([[complex(e[1]) for e in row] for row in self.entries])
        if self.base_field is FieldTag.REAL:
            return z1.real + 1j * z2.real
        return np.block([[z1, z2], [-z2.conj(), z1.conj()]])

    def to_json(self) -> dict:
        return {
            "base_field": self.base_field.value,
            "n": self.n,
            "r": self.r,
            "entries": [[[encode_scalar(z) for z in e] for e in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, doc: dict) -> DoubledFrame:
        try:
            out = cls(doc["base_field"], [[tuple(decode_scalar(z) for z in e) for e in row] for row in doc["entries"]])
        except (KeyError, TypeError) as exc:
            raise ShapeError(f"malformed doubled frame: {exc}") from exc
        if (out.n, out.r) != (doc.get("n", out.n), doc.get("r", out.r)):
            raise ShapeError("doubled frame size disagrees with its entries")
        return out

    @classmethod
    def from_complex_matrix(cls, base_field, m: np.ndarray) -> DoubledFrame:
        base_field = FieldTag.parse(base_field)
        if base_field is FieldTag.REAL:
            return cls(base_field, [[(float(v.real), float(v.imag)) for v in row] for row in m])
        n, r = m.shape[0] // 2, m.shape[1] // 2
        return cls(
            base_field,
            [[(complex(m[l, i]), complex(m[l, r + i])) for i in range(r)] for l in range(n)],
        )


def pack_cayley_dickson(frame, field=None) -> DoubledFrame:
    """Pack a frame (E | G) with G = -J conj(E) into an n x r frame over D(F).

    A column E_i = (p; q) becomes p + q*i over R and p + conj(q)*j over C.
    """
    mat = frame.matrix if isinstance(frame, SymplecticFrame) else frame
    fld = FieldTag.parse(field) if field is not None else (
        frame.field if isinstance(frame, SymplecticFrame) else _field_of(mat)
    )
    rows, cols = _shape(mat)
    if rows % 2 or cols % 2:
        raise ShapeError("expected a 2n x 2r frame")
    n, r = rows // 2, cols // 2
    e = _cols(mat, range(r))
    g = _cols(mat, range(r, 2 * r))
    if isinstance(mat, np.ndarray):
        expect = -(j_matrix(n, True) @ e.conj())
    else:
        expect = linalg.scale(-1, linalg.matmul(j_matrix(n), _conj_matrix(e)))
    if not _close(g if not isinstance(mat, np.ndarray) else g, expect, TOL):
        raise DomainError("frame is not of the form (E | -J conj E)", name="not-doubled")
    entries = []
    for l in range(n):
        row = []
        for i in range(r):
            p, q = e[l][i], e[n + l][i]
            if isinstance(mat, np.ndarray):
                p, q = p.item(), q.item()
            row.append((p, q) if fld is FieldTag.REAL else (p, conj(q)))
        entries.append(row)
    return DoubledFrame(fld, entries)


def unpack_cayley_dickson(d: DoubledFrame, check: bool = True) -> SymplecticFrame:
    """Inverse of :func:`pack_cayley_dickson`."""
    n, r = d.n, d.r
    e = linalg.zeros(2 * n, r)
    for l in range(n):
        for i in range(r):
            z1, z2 = d.entries[l][i]
            e[l][i] = z1
            e[n + l][i] = z2 if d.base_field is FieldTag.REAL else conj(z2)
    if any(isinstance(v, (float, complex)) for row in e for v in row):
        e = to_numpy(e)
        if d.base_field is FieldTag.COMPLEX:
            e = e.astype(complex)
        g = -(j_matrix(n, True) @ e.conj())
        mat = np.hstack([e, g])
    else:
        g = linalg.scale(-1, linalg.matmul(j_matrix(n), _conj_matrix(e)))
        mat = _hstack(e, g)
    cls = OrthSymplecticFrame if check else SymplecticFrame
    return cls(mat, d.base_field, check=check)


# -- Stiefel paths --------------------------------------------------------------------------------


def _structure_map(x: np.ndarray) -> np.ndarray:
    """Antilinear map (u; w) -> (-conj w; conj u) on C^{2n} (right multiplication by j)."""
    n = x.shape[0] // 2
    return np.concatenate([-x[n:].conj(), x[:n].conj()])


def _complete_unitary(d: DoubledFrame) -> np.ndarray:
    """Square unitary (resp. quaternion-unitary) matrix whose leading columns are d."""
    m = d.to_complex_matrix()
    if d.base_field is FieldTag.REAL:
        comp = scipy.linalg.null_space(m.conj().T)
        return np.hstack([m, comp]) if comp.size else m
    n, r = d.n, d.r
    first = [m[:, i] for i in range(r)]
    basis = first + [_structure_map(c) for c in first]
    for t in range(2 * n):
        if len(first) == n:
            break
        v = np.zeros(2 * n, dtype=complex)
        v[t] = 1
        for b in basis:
            v = v - b * np.vdot(b, v)
        for b in basis:
            v = v - b * np.vdot(b, v)
        nrm = np.linalg.norm(v)
        if nrm > 1e-6:
            v = v / nrm
            first.append(v)
            basis += [v, _structure_map(v)]
    cols = first + [_structure_map(c) for c in first]
    return np.column_stack(cols)


def _frame_columns(d: DoubledFrame) -> list[int]:
    if d.base_field is FieldTag.REAL:
        return list(range(d.r))
    return list(range(d.r)) + list(range(d.n, d.n + d.r))


def _unit_log(m: np.ndarray):
    t, z = scipy.linalg.schur(m, output="complex")
    lam = np.diag(t)
    lam = lam / np.abs(lam)
    return z, np.angle(lam)


def _gram_residual(x: np.ndarray) -> float:
    if x.size == 0:
        return 0.0
    return float(np.max(np.abs(x.conj().T @ x - np.eye(x.shape[1]))))


class StiefelGeodesic:
    """Geodesic s -> Q0 exp(s log(Q0* Q1)) restricted to the frame columns."""

    def __init__(self, f0: DoubledFrame, f1: DoubledFrame):
        if (f0.base_field, f0.n, f0.r) != (f1.base_field, f1.n, f1.r):
            raise ShapeError("frames must share base field, n and r")
        self.f0, self.f1 = f0, f1
        self.q0 = _complete_unitary(f0)
        q1 = _complete_unitary(f1)
        self.z, self.theta = _unit_log(self.q0.conj().T @ q1)
        self.cols = _frame_columns(f0)
        self.n2 = self.q0.shape[0]

    def matrix(self, s: float) -> np.ndarray:
        rot = (self.z * np.exp(1j * s * self.theta)) @ self.z.conj().T
        return (self.q0 @ rot)[:, self.cols]

    def __call__(self, s: float) -> DoubledFrame:
        if s == 0:
            return self.f0
        if s == 1:
            return self.f1
        x = self.matrix(s)
        if self.f0.base_field is FieldTag.COMPLEX:
            r, n = self.f0.r, self.f0.n
            if np.max(np.abs(x[:, r:] - _structure_map(x[:, :r])), initial=0.0) > 1e-9:
                raise GeodesicError("logarithm left the quaternionic structure")
        if _gram_residual(x) > TOL:
            raise GeodesicError("geodesic sample lost orthonormality")
        return DoubledFrame.from_complex_matrix(self.f0.base_field, x)


def _polar_columns(x: np.ndarray) -> np.ndarray:
    g = x.conj().T @ x
    g = (g + g.conj().T) / 2
    w, v = np.linalg.eigh(g)
    if w[0] <= 1e-12:
        raise GeodesicError("interpolant is rank deficient")
    return x @ ((v * w ** -0.5) @ v.conj().T)


class LinearPolarPath:
    """Fallback: re-orthonormalised straight line, routed via waypoints when degenerate.

    The polar factor of a structured matrix keeps its quaternionic structure,
    so each sample is again a doubled frame.
    """

    def __init__(self, f0: DoubledFrame, f1: DoubledFrame, samples: int = 64):
        self.f0, self.f1 = f0, f1
        self.base = f0.base_field
        x0, x1 = f0.to_complex_matrix(), f1.to_complex_matrix()
        self.legs = self._legs(x0, x1, samples)

    def _ok(self, a: np.ndarray, b: np.ndarray, samples: int) -> bool:
        for s in np.linspace(0, 1, 2 * samples + 1):
            y = (1 - s) * a + s * b
            sv = np.linalg.svd(y, compute_uv=False)
            if sv.size and sv[-1] < 1e-6:
                return False
        return True

    def _rotate(self, x: np.ndarray, angle: float) -> np.ndarray:
        r = self.f0.r
        if self.base is FieldTag.REAL:
            return x * np.exp(1j * angle)
        ph = np.concatenate([np.full(r, np.exp(1j * angle)), np.full(r, np.exp(-1j * angle))])
        return x * ph

    def _legs(self, x0, x1, samples):
        if self._ok(x0, x1, samples):
            return [("line", x0, x1)]
        for angle in (np.pi / 2, -np.pi / 2, np.pi / 3, 2 * np.pi / 3, np.pi / 5):
            mid = self._rotate(x0, angle)
            if self._ok(mid, x1, samples):
                return [("phase", x0, angle), ("line", mid, x1)]
        raise GeodesicError("no nondegenerate waypoint found")

    def matrix(self, s: float) -> np.ndarray:
        m = len(self.legs)
        idx = min(int(s * m), m - 1)
        loc = s * m - idx
        kind, a, b = self.legs[idx]
        if kind == "phase":
            return self._rotate(a, b * loc)
        return _polar_columns((1 - loc) * a + loc * b)

    def __call__(self, s: float) -> DoubledFrame:
        if s == 0:
            return self.f0
        if s == 1:
            return self.f1
        return DoubledFrame.from_complex_matrix(self.base, self.matrix(s))


def stiefel_path(f0: DoubledFrame, f1: DoubledFrame, s: float) -> DoubledFrame:
    """Point at parameter s on the Stiefel geodesic from f0 to f1.

    Raises :class:`GeodesicError` when the matrix logarithm breaks the
    quaternionic structure; callers fall back to :class:`LinearPolarPath`.
    """
    if not 0 <= s <= 1:
        raise ValueError("s must lie in [0, 1]")
    return StiefelGeodesic(f0, f1)(s)


def doubled_path(f0: DoubledFrame, f1: DoubledFrame, samples: int = 64) -> tuple[Callable, str]:
    """A sampler s -> DoubledFrame and the name of the route taken."""
    try:
        geo = StiefelGeodesic(f0, f1)
        for s in np.linspace(0, 1, samples + 1)[1:-1]:
            geo(float(s))
        return geo, "geodesic"
    except GeodesicError:
        return LinearPolarPath(f0, f1, samples), "linear-polar"
