"""The commutator invariant: skew forms, their normal forms and component labels."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import linalg
from .errors import DomainError, ShapeError
from .lie_core import (
    Convention,
    FieldTag,
    GroupTuple,
    form_matrix,
    riffle_permutation,
    st_bracket,
)
from .scalars import GaussianRational, as_exact, decode_scalar, encode_scalar


def _is_nonreal(v) -> bool:
    if isinstance(v, GaussianRational):
        return v.im != 0
    if isinstance(v, complex):
        return v.imag != 0
    return False


def _freeze(rows) -> tuple:
    return tuple(tuple(as_exact(v) for v in r) for r in rows)


def _check_skew(entries, k: int) -> None:
    if len(entries) != k or any(len(r) != k for r in entries):
        raise ShapeError(f"expected a {k}x{k} matrix")
    for i in range(k):
        if entries[i][i] != 0:
            raise DomainError("diagonal of a skew matrix must vanish", name="not-antisymmetric")
        for j in range(i + 1, k):
            if entries[i][j] != -entries[j][i]:
                raise DomainError("matrix is not antisymmetric", name="not-antisymmetric")


@dataclass(frozen=True)
class SkewMatrix:
    k: int
    entries: tuple
    field: FieldTag = FieldTag.REAL

    def __post_init__(self):
        object.__setattr__(self, "field", FieldTag.parse(self.field))
        object.__setattr__(self, "entries", _freeze(self.entries))
        _check_skew(self.entries, self.k)

    @classmethod
    def from_rows(cls, rows, field=FieldTag.REAL) -> SkewMatrix:
        return cls(len(rows), rows, field)

    def rows(self) -> list:
        return [list(r) for r in self.entries]

    def rank(self) -> int:
        return linalg.rank(self.entries) if self.k else 0


@dataclass(frozen=True)
class SkewLabel:
    """A skew matrix with entries in Z (real field) or Z[i] (complex field)."""

    k: int
    entries: tuple
    field: FieldTag = FieldTag.REAL

    def __post_init__(self):
        object.__setattr__(self, "field", FieldTag.parse(self.field))
        object.__setattr__(self, "entries", _freeze(self.entries))
        _check_skew(self.entries, self.k)
        for r in self.entries:
            for v in r:
                if isinstance(v, GaussianRational):
                    if self.field is FieldTag.REAL and v.im != 0:
                        raise DomainError("Gaussian entry in a real label", name="not-in-lattice")
                    if not v.is_gaussian_integer():
                        raise DomainError(f"entry {v} is not a Gaussian integer", name="not-in-lattice")
                elif not isinstance(v, Fraction) or v.denominator != 1:
                    raise DomainError(f"entry {v!r} is not an integer", name="not-in-lattice")

    @classmethod
    def from_rows(cls, rows, field=FieldTag.REAL) -> SkewLabel:
        return cls(len(rows), rows, field)

    @classmethod
    def from_upper(cls, k: int, upper: Sequence, field=FieldTag.REAL) -> SkewLabel:
        return cls(k, _from_upper(k, upper), field)

    def as_matrix(self) -> SkewMatrix:
        return SkewMatrix(self.k, self.entries, self.field)

    def rows(self) -> list:
        return [list(r) for r in self.entries]

    def rank(self) -> int:
        return linalg.rank(self.entries) if self.k else 0


def _from_upper(k: int, upper: Sequence) -> list:
    need = k * (k - 1) // 2
    if len(upper) != need:
        raise ShapeError(f"upper triangle of a {k}x{k} matrix has {need} entries, got {len(upper)}")
    m = linalg.zeros(k, k)
    it = iter(upper)
    for i in range(k):
        for j in range(i + 1, k):
            v = as_exact(next(it))
            m[i][j] = v
            m[j][i] = -v
    return m


def _upper(entries) -> list:
    k = len(entries)
    return [entries[i][j] for i in range(k) for j in range(i + 1, k)]


@dataclass(frozen=True)
class LinearMap:
    """A 2n x k matrix, the coordinate form of a linear map F^k -> F^{2n}."""

    n: int
    k: int
    entries: tuple
    convention: Convention = Convention.OMEGA
    field: FieldTag = FieldTag.REAL

    def __post_init__(self):
        object.__setattr__(self, "convention", Convention.parse(self.convention))
        object.__setattr__(self, "field", FieldTag.parse(self.field))
        object.__setattr__(self, "entries", _freeze(self.entries))
        if self.n < 1 or self.k < 1:
            raise ShapeError("n and k must be positive")
        if len(self.entries) != 2 * self.n or any(len(r) != self.k for r in self.entries):
            raise ShapeError(f"expected a {2 * self.n}x{self.k} matrix")
        if self.field is FieldTag.REAL and any(_is_nonreal(v) for r in self.entries for v in r):
            raise ShapeError("complex entry in a real map")

    @classmethod
    def from_rows(cls, rows, convention=Convention.OMEGA, field=FieldTag.REAL) -> LinearMap:
        if not rows or len(rows) % 2:
            raise ShapeError("a map into F^{2n} needs an even, positive number of rows")
        return cls(len(rows) // 2, len(rows[0]), rows, convention, field)

    def rows(self) -> list:
        return [list(r) for r in self.entries]

    def column(self, j: int) -> list:
        return [r[j] for r in self.entries]

    def columns(self) -> list:
        return [self.column(j) for j in range(self.k)]

    @property
    def is_exact(self) -> bool:
        return not any(isinstance(v, (float, complex)) for r in self.entries for v in r)

    def to_convention(self, convention) -> LinearMap:
        """Same map with rows reordered for the other coordinate pairing."""
        convention = Convention.parse(convention)
        if convention is self.convention:
            return self
        perm = riffle_permutation(self.n)
        if convention is Convention.J:
            rows = [self.entries[p] for p in perm]
        else:
            rows = [None] * (2 * self.n)
            for i, p in enumerate(perm):
                rows[p] = self.entries[i]
        return LinearMap(self.n, self.k, rows, convention, self.field)

    def with_entries(self, rows) -> LinearMap:
        return LinearMap(self.n, self.k, rows, self.convention, self.field)


# -- the map phi --------------------------------------------------------------------


def phi(m: LinearMap) -> SkewMatrix:
    """M^T Omega M for the pairing of ``m``'s convention (bilinear, no conjugation)."""
    omega = form_matrix(m.n, m.convention)
    out = linalg.matmul(linalg.transpose(m.entries), linalg.matmul(omega, m.entries))
    return SkewMatrix(m.k, out, m.field)


def _row_pairs(m: LinearMap):
    n = m.n
    if m.convention is Convention.OMEGA:
        return [(m.entries[2 * i], m.entries[2 * i + 1]) for i in range(n)]
    return [(m.entries[i], m.entries[n + i]) for i in range(n)]


def phi_rowwedge(m: LinearMap) -> SkewMatrix:
    """Sum over row pairs (x, y) of the wedge x ^ y, entry (j, l) = x_j y_l - x_l y_j."""
    k = m.k
    out = linalg.zeros(k, k)
    for x, y in _row_pairs(m):
        for j in range(k):
            if x[j] == 0 and y[j] == 0:
                continue
            for l in range(j + 1, k):
                w = x[j] * y[l] - x[l] * y[j]
                if w != 0:
                    out[j][l] = out[j][l] + w
                    out[l][j] = out[l][j] - w
    return SkewMatrix(k, out, m.field)


# -- Darboux normal form ---------------------------------------------------------------


def darboux_normal_form(b) -> tuple[list, int]:
    """Return (P, r) with P^T B P = Omega_r + 0 exactly.

    Symplectic Gram-Schmidt on the standard basis: the first pair (i < j) with
    B(v_i, v_j) != 0 becomes the next hyperbolic pair and is projected out of
    the remaining vectors.  Leftover vectors span the kernel.
    """
    rows = b.entries if isinstance(b, (SkewMatrix, SkewLabel)) else b
    k = len(rows)
    if isinstance(b, (SkewMatrix, SkewLabel)):
        rows = [list(r) for r in rows]
    else:
        rows = [[as_exact(v) for v in r] for r in rows]
        _check_skew(rows, k)
    remaining = [[Fraction(int(i == j)) for i in range(k)] for j in range(k)]
    pairs: list = []

    def form(u, v):
        total = Fraction(0)
        for i, ui in enumerate(u):
            if ui == 0:
                continue
            row = rows[i]
            for j, vj in enumerate(v):
                if vj != 0 and row[j] != 0:
                    total = total + ui * row[j] * vj
        return total

    while True:
        found = None
        for i in range(len(remaining)):
            for j in range(i + 1, len(remaining)):
                val = form(remaining[i], remaining[j])
                if val != 0:
                    found = (i, j, val)
                    break
            if found:
                break
        if found is None:
            break
        i, j, val = found
        u = remaining[i]
        w = [c / val for c in remaining[j]]
        rest = [v for t, v in enumerate(remaining) if t not in (i, j)]
        projected = []
        for v in rest:
            bw, bu = form(v, w), form(v, u)
            if bw != 0 or bu != 0:
                v = [vc - bw * uc + bu * wc for vc, uc, wc in zip(v, u, w)]
            projected.append(v)
        remaining = projected
        pairs.append((u, w))

    cols = [c for pair in pairs for c in pair] + remaining
    return linalg.transpose(cols), len(pairs)


def normal_form_matrix(k: int, r: int) -> list:
    """Omega_r padded by zeros to k x k (interleaved pairs)."""
    m = linalg.zeros(k, k)
    for i in range(r):
        m[2 * i][2 * i + 1] = Fraction(1)
        m[2 * i + 1][2 * i] = Fraction(-1)
    return m


def is_normal_form(b) -> int | None:
    """r when B equals Omega_r + 0, otherwise None."""
    rows = b.entries if isinstance(b, (SkewMatrix, SkewLabel)) else b
    k = len(rows)
    r = 0
    while 2 * r + 1 < k and rows[2 * r][2 * r + 1] == 1:
        r += 1
    return r if linalg.equal(rows, normal_form_matrix(k, r)) else None


# -- labels -----------------------------------------------------------------------------


def component_label(t: GroupTuple) -> SkewLabel:
    k = t.k
    m = linalg.zeros(k, k)
    for i in range(k):
        for j in range(i + 1, k):
            br = st_bracket(t.logs[i], t.logs[j])
            if not br.is_central or not t.lattice.contains(br.z, t.field):
                raise DomainError("tuple is not almost commuting", name="not-almost-commuting")
            c = t.lattice.coordinates(br.z, t.field)
            m[i][j] = c
            m[j][i] = -c
    return SkewLabel(k, m, t.field)


def stacked_vector_map(t: GroupTuple) -> LinearMap:
    """Columns (a_i; b_i) of the logs, as a map in the block convention."""
    cols = [g.vector_part for g in t.logs]
    return LinearMap(t.n, t.k, linalg.transpose(cols), Convention.J, t.field)


def is_realizable(beta, n: int) -> bool:
    rank = beta.rank() if isinstance(beta, (SkewLabel, SkewMatrix)) else linalg.rank(beta)
    return rank // 2 <= n


def plucker_rank2_test(beta) -> bool:
    """True iff every Pluecker quadric vanishes, i.e. rank(beta) <= 2."""
    b = beta.entries if isinstance(beta, (SkewLabel, SkewMatrix)) else beta
    k = len(b)
    for i, j, p, q in combinations(range(k), 4):
        if b[i][j] * b[p][q] - b[i][p] * b[j][q] + b[i][q] * b[j][p] != 0:
            return False
    return True


# -- JSON -------------------------------------------------------------------------------


def skew_to_json(s) -> dict:
    return {
        "k": s.k,
        "field": s.field.value,
        "entries": [encode_scalar(v) for v in _upper(s.entries)],
    }


def _skew_parts(obj: dict):
    if not isinstance(obj, dict) or "entries" not in obj:
        raise ValueError("skew matrix needs 'entries'")
    entries = obj["entries"]
    field = FieldTag.parse(obj.get("field", "R"))
    if entries and isinstance(entries[0], list):
        rows = [[decode_scalar(v) for v in r] for r in entries]
        return len(rows), rows, field
    k = obj.get("k")
    if not isinstance(k, int):
        raise ValueError("upper-triangle encoding needs 'k'")
    return k, _from_upper(k, [decode_scalar(v) for v in entries]), field


def label_from_json(obj: dict) -> SkewLabel:
    k, rows, field = _skew_parts(obj)
    return SkewLabel(k, rows, field)


def skew_from_json(obj: dict) -> SkewMatrix:
    k, rows, field = _skew_parts(obj)
    return SkewMatrix(k, rows, field)


def map_to_json(m: LinearMap) -> dict:
    return {
        "n": m.n,
        "k": m.k,
        "field": m.field.value,
        "convention": m.convention.value,
        "entries": [[encode_scalar(v) for v in r] for r in m.entries],
    }


def map_from_json(obj: dict, field=None, convention=None) -> LinearMap:
    if not isinstance(obj, dict) or "entries" not in obj:
        raise ValueError("linear map needs 'entries'")
    rows = [[decode_scalar(v) for v in r] for r in obj["entries"]]
    fld = field if field is not None else obj.get("field", "R")
    conv = convention if convention is not None else obj.get("convention", "omega")
    m = LinearMap.from_rows(rows, conv, fld)
    if "n" in obj and obj["n"] != m.n or "k" in obj and obj["k"] != m.k:
        raise ShapeError("declared n/k disagree with the entries")
    return m
