"""Strictly upper triangular Lie algebras, Heisenberg algebras and their groups.

An element of st_{n+2}(F) is stored by its blocks ``(a, b, x, z)``: ``a`` is the
top row (without the corner), ``b`` the last column, ``x`` the strictly upper
triangular n x n interior and ``z`` the top-right corner.  Heisenberg elements
are the ones with ``x = 0``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from . import linalg
from .errors import DomainError, ShapeError
from .scalars import GaussianRational, QuadraticElement, as_exact, decode_scalar, encode_scalar


class FieldTag(str, enum.Enum):
    REAL = "R"
    COMPLEX = "C"

    @property
    def real_dim(self) -> int:
        return 1 if self is FieldTag.REAL else 2

    @classmethod
    def parse(cls, value) -> FieldTag:
        if isinstance(value, FieldTag):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"field must be 'R' or 'C', got {value!r}") from None


class Convention(str, enum.Enum):
    """Coordinate pairing on F^{2n}: interleaved (x1,y1,x2,y2,...) or block (x;y)."""

    OMEGA = "omega"
    J = "j"

    @classmethod
    def parse(cls, value) -> Convention:
        if isinstance(value, Convention):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"convention must be 'omega' or 'j', got {value!r}") from None


def _zero():
    return Fraction(0)


def _exact_vec(v) -> tuple:
    return tuple(as_exact(x) for x in v)


@dataclass(frozen=True)
class StrictUpperElement:
    n: int
    a: tuple
    b: tuple
    x: tuple
    z: object

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise ShapeError("n must be positive")
        object.__setattr__(self, "a", _exact_vec(self.a))
        object.__setattr__(self, "b", _exact_vec(self.b))
        object.__setattr__(self, "x", tuple(_exact_vec(r) for r in self.x))
        object.__setattr__(self, "z", as_exact(self.z))
        if len(self.a) != n or len(self.b) != n:
            raise ShapeError(f"a and b must have length {n}")
        if len(self.x) != n or any(len(r) != n for r in self.x):
            raise ShapeError(f"x must be {n}x{n}")
        for i in range(n):
            for j in range(i + 1):
                if self.x[i][j] != 0:
                    raise ShapeError("x must be strictly upper triangular")

    @property
    def is_heisenberg(self) -> bool:
        return all(v == 0 for row in self.x for v in row)

    @property
    def is_central(self) -> bool:
        return (
            all(v == 0 for v in self.a)
            and all(v == 0 for v in self.b)
            and self.is_heisenberg
        )

    @property
    def vector_part(self) -> tuple:
        """(a; b) in block coordinates, i.e. the image in h/Z(h) = F^{2n}."""
        return self.a + self.b

    def __add__(self, other: StrictUpperElement) -> StrictUpperElement:
        _check_pair(self, other)
        return StrictUpperElement(
            self.n,
            tuple(p + q for p, q in zip(self.a, other.a)),
            tuple(p + q for p, q in zip(self.b, other.b)),
            tuple(tuple(p + q for p, q in zip(r, s)) for r, s in zip(self.x, other.x)),
            self.z + other.z,
        )

    def __neg__(self) -> StrictUpperElement:
        return self.scaled(-1)

    def __sub__(self, other: StrictUpperElement) -> StrictUpperElement:
        return self + (-other)

    def scaled(self, c) -> StrictUpperElement:
        c = as_exact(c)
        return StrictUpperElement(
            self.n,
            tuple(c * v for v in self.a),
            tuple(c * v for v in self.b),
            tuple(tuple(c * v for v in r) for r in self.x),
            c * self.z,
        )

    def with_x(self, x) -> StrictUpperElement:
        return StrictUpperElement(self.n, self.a, self.b, x, self.z)

    def with_z(self, z) -> StrictUpperElement:
        return StrictUpperElement(self.n, self.a, self.b, self.x, z)

    def to_matrix(self) -> list:
        n = self.n
        m = linalg.zeros(n + 2, n + 2)
        for j in range(n):
            m[0][j + 1] = self.a[j]
            m[j + 1][n + 1] = self.b[j]
            for i in range(n):
                m[i + 1][j + 1] = self.x[i][j]
        m[0][n + 1] = self.z
        return m

    @classmethod
    def from_matrix(cls, m: Sequence[Sequence]) -> StrictUpperElement:
        size = len(m)
        n = size - 2
        if n < 1 or any(len(r) != size for r in m):
            raise ShapeError("expected a square matrix of size n+2 >= 3")
        for i in range(size):
            for j in range(i + 1):
                if m[i][j] != 0:
                    raise ShapeError("matrix is not strictly upper triangular")
        a = [m[0][j + 1] for j in range(n)]
        b = [m[j + 1][n + 1] for j in range(n)]
        x = [[m[i + 1][j + 1] for j in range(n)] for i in range(n)]
        return cls(n, a, b, x, m[0][n + 1])

    @classmethod
    def zero(cls, n: int) -> StrictUpperElement:
        return cls(n, [0] * n, [0] * n, [[0] * n for _ in range(n)], 0)


def st(a, b, x=None, z=0) -> StrictUpperElement:
    n = len(a)
    if x is None:
        x = [[0] * n for _ in range(n)]
    return StrictUpperElement(n, a, b, x, z)


def heis(a, b, z=0) -> StrictUpperElement:
    """The Heisenberg element h_{2n+1}(a, b, z) = st_{n+2}(a, b, 0, z)."""
    return st(a, b, None, z)


def _check_pair(u: StrictUpperElement, v: StrictUpperElement) -> None:
    if u.n != v.n:
        raise ShapeError(f"dimension mismatch: n={u.n} vs n={v.n}")


def _rowmat(a, x):
    n = len(a)
    return [sum((a[i] * x[i][j] for i in range(n) if a[i] != 0 and x[i][j] != 0), _zero()) for j in range(n)]


def st_bracket(u: StrictUpperElement, v: StrictUpperElement) -> StrictUpperElement:
    """[u, v] = st(a x' - a' x, x b' - x' b, [x, x'], a b' - a' b), the matrix commutator."""
    _check_pair(u, v)
    xa = _rowmat(u.a, v.x)
    xb = _rowmat(v.a, u.x)
    new_a = [p - q for p, q in zip(xa, xb)]
    new_b = [p - q for p, q in zip(linalg.matvec(u.x, v.b), linalg.matvec(v.x, u.b))]
    xx = linalg.sub(linalg.matmul(u.x, v.x), linalg.matmul(v.x, u.x))
    new_z = linalg.dot(u.a, v.b) - linalg.dot(v.a, u.b)
    return StrictUpperElement(u.n, new_a, new_b, xx, new_z)


# -- symplectic pairings on F^{2n} -------------------------------------------------


def riffle(v: Sequence, to: Convention | str = Convention.J) -> list:
    """Reorder coordinates between the interleaved and the block pairing.

    ``riffle(v, "j")`` takes interleaved (x1,y1,...,xn,yn) to (x1..xn, y1..yn);
    ``riffle(v, "omega")`` is the inverse shuffle.
    """
    to = Convention.parse(to)
    if len(v) % 2:
        raise ShapeError("vector length must be even")
    n = len(v) // 2
    if to is Convention.J:
        return [v[2 * i] for i in range(n)] + [v[2 * i + 1] for i in range(n)]
    out = [None] * (2 * n)
    for i in range(n):
        out[2 * i] = v[i]
        out[2 * i + 1] = v[n + i]
    return out


def riffle_permutation(n: int) -> list[int]:
    """Index map p with riffle(v, 'j')[i] == v[p[i]]."""
    return [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]


def form_matrix(n: int, convention: Convention | str) -> list:
    """Gram matrix of the standard symplectic form (Omega_n or J_n)."""
    convention = Convention.parse(convention)
    m = linalg.zeros(2 * n, 2 * n)
    for i in range(n):
        if convention is Convention.OMEGA:
            p, q = 2 * i, 2 * i + 1
        else:
            p, q = i, n + i
        m[p][q] = Fraction(1)
        m[q][p] = Fraction(-1)
    return m


def omega_form(u: Sequence, v: Sequence, convention: Convention | str = Convention.OMEGA):
    convention = Convention.parse(convention)
    if len(u) != len(v) or len(u) % 2:
        raise ShapeError("vectors must share an even length")
    n = len(u) // 2
    total = _zero()
    for i in range(n):
        if convention is Convention.OMEGA:
            p, q = 2 * i, 2 * i + 1
        else:
            p, q = i, n + i
        total = total + u[p] * v[q] - v[p] * u[q]
    return total


# -- exponential and logarithm --------------------------------------------------


def _div(x, m: int):
    if isinstance(x, int):
        return Fraction(x, m)
    return x / m


def _mat_series(nmat: list, sign_alternating: bool) -> list:
    size = len(nmat)
    total = linalg.identity(size) if not sign_alternating else linalg.zeros(size, size)
    power = nmat
    k = 1
    while not linalg.is_zero(power):
        if sign_alternating:
            coef = Fraction((-1) ** (k + 1), k)
        else:
            coef = Fraction(1, factorial(k))
        total = [[t + coef * p if p != 0 else t for t, p in zip(tr, pr)] for tr, pr in zip(total, power)]
        power = linalg.matmul(power, nmat)
        k += 1
    return total


def nilpotent_exp(x: StrictUpperElement) -> list:
    """exp of a strictly upper triangular matrix; the series stops by nilpotency."""
    return _mat_series(x.to_matrix(), sign_alternating=False)


def nilpotent_log(g: Sequence[Sequence]) -> StrictUpperElement:
    size = len(g)
    if any(len(r) != size for r in g):
        raise ShapeError("expected a square matrix")
    for i in range(size):
        if g[i][i] != 1 or any(g[i][j] != 0 for j in range(i)):
            raise DomainError("matrix is not unipotent upper triangular", name="non-unipotent")
    nmat = [[g[i][j] - (1 if i == j else 0) for j in range(size)] for i in range(size)]
    return StrictUpperElement.from_matrix(_mat_series(nmat, sign_alternating=True))


def _require_two_step(x: StrictUpperElement, y: StrictUpperElement) -> StrictUpperElement:
    br = st_bracket(x, y)
    zero = StrictUpperElement.zero(x.n)
    if st_bracket(x, br) != zero or st_bracket(y, br) != zero:
        raise DomainError("inputs do not generate a 2-step nilpotent subalgebra", name="not-2-step")
    return br


def bch_product_2step(x: StrictUpperElement, y: StrictUpperElement) -> StrictUpperElement:
    """log(exp(x) exp(y)) = x + y + [x, y]/2 when all double brackets vanish."""
    _check_pair(x, y)
    br = _require_two_step(x, y)
    return x + y + br.scaled(Fraction(1, 2))


def group_commutator_log(x: StrictUpperElement, y: StrictUpperElement) -> StrictUpperElement:
    """log of the matrix commutator exp(x)^-1 exp(y)^-1 exp(x) exp(y)."""
    _check_pair(x, y)
    ex, ey = nilpotent_exp(x), nilpotent_exp(y)
    exi, eyi = nilpotent_exp(-x), nilpotent_exp(-y)
    return nilpotent_log(linalg.matmul(linalg.matmul(exi, eyi), linalg.matmul(ex, ey)))


def adjoint_action(x: StrictUpperElement, y: StrictUpperElement) -> StrictUpperElement:
    """exp(x) . y = sum_m ad(x)^m (y) / m!."""
    _check_pair(x, y)
    total = y
    term = y
    m = 1
    while True:
        term = st_bracket(x, term).scaled(Fraction(1, m))
        if term == StrictUpperElement.zero(x.n):
            return total
        total = total + term
        m += 1


# -- tuples and lattices ----------------------------------------------------------


@dataclass(frozen=True)
class Lattice:
    """The central lattice A: {0}, or Z*scale (real) / Z[i]*scale (complex)."""

    kind: str = "unit"
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in ("unit", "trivial"):
            raise ValueError(f"lattice kind must be 'unit' or 'trivial', got {self.kind!r}")
        object.__setattr__(self, "scale", as_exact(self.scale))
        if self.scale == 0:
            raise ValueError("lattice scale must be nonzero")

    def coordinates(self, z, field: FieldTag):
        """Lattice coordinate of z, or None when z is not in A."""
        if self.kind == "trivial":
            return Fraction(0) if z == 0 else None
        c = z / self.scale
        if isinstance(c, QuadraticElement):
            if c.b != 0:
                return None
            c = c.a
        if isinstance(c, GaussianRational):
            if field is FieldTag.REAL and c.im != 0:
                return None
            if not c.is_gaussian_integer():
                return None
            return c.re if field is FieldTag.REAL else c
        if isinstance(c, Fraction):
            if c.denominator != 1:
                return None
            return c if field is FieldTag.REAL else GaussianRational(c, 0)
        return None

    def contains(self, z, field: FieldTag) -> bool:
        return self.coordinates(z, field) is not None


def _is_nonreal(v) -> bool:
    if isinstance(v, GaussianRational):
        return v.im != 0
    if isinstance(v, complex):
        return v.imag != 0
    return False


@dataclass(frozen=True)
class GroupTuple:
    """A k-tuple in the reduced group, stored by the logarithms of lifts."""

    field: FieldTag
    logs: tuple
    lattice: Lattice = Lattice()

    def __post_init__(self):
        object.__setattr__(self, "field", FieldTag.parse(self.field))
        object.__setattr__(self, "logs", tuple(self.logs))
        if not self.logs:
            raise ShapeError("a tuple needs at least one element")
        n = self.logs[0].n
        if any(g.n != n for g in self.logs):
            raise ShapeError("all logs must share n")
        if self.field is FieldTag.REAL:
            for g in self.logs:
                for v in (*g.a, *g.b, g.z, *(w for r in g.x for w in r)):
                    if _is_nonreal(v):
                        raise ShapeError("complex entry in a real tuple")

    @property
    def n(self) -> int:
        return self.logs[0].n

    @property
    def k(self) -> int:
        return len(self.logs)

    def with_logs(self, logs) -> GroupTuple:
        return GroupTuple(self.field, tuple(logs), self.lattice)

    def group_elements(self) -> list:
        return [nilpotent_exp(g) for g in self.logs]


def is_almost_commuting(t: GroupTuple) -> bool:
    for i in range(t.k):
        for j in range(i + 1, t.k):
            br = st_bracket(t.logs[i], t.logs[j])
            if not br.is_central or not t.lattice.contains(br.z, t.field):
                return False
    return True


# -- JSON ---------------------------------------------------------------------------


def element_to_json(x: StrictUpperElement) -> dict:
    return {
        "n": x.n,
        "a": [encode_scalar(v) for v in x.a],
        "b": [encode_scalar(v) for v in x.b],
        "x": [[encode_scalar(v) for v in r] for r in x.x],
        "z": encode_scalar(x.z),
    }


def element_from_json(obj: dict) -> StrictUpperElement:
    if not isinstance(obj, dict) or not {"a", "b"} <= set(obj):
        raise ValueError("element needs at least 'a' and 'b'")
    a = [decode_scalar(v) for v in obj["a"]]
    n = obj.get("n", len(a))
    b = [decode_scalar(v) for v in obj["b"]]
    x = obj.get("x")
    x = [[decode_scalar(v) for v in r] for r in x] if x is not None else [[0] * n for _ in range(n)]
    return StrictUpperElement(n, a, b, x, decode_scalar(obj.get("z", 0)))


def lattice_to_json(lat: Lattice) -> dict:
    return {"kind": lat.kind, "scale": encode_scalar(lat.scale)}


def lattice_from_json(obj) -> Lattice:
    if obj is None:
        return Lattice()
    if isinstance(obj, str):
        return Lattice(obj)
    return Lattice(obj.get("kind", "unit"), decode_scalar(obj.get("scale", 1)))


def tuple_to_json(t: GroupTuple) -> dict:
    return {
        "field": t.field.value,
        "lattice": lattice_to_json(t.lattice),
        "logs": [element_to_json(g) for g in t.logs],
    }


def tuple_from_json(obj: dict, field=None, lattice=None) -> GroupTuple:
    if not isinstance(obj, dict) or "logs" not in obj:
        raise ValueError("tuple needs 'logs'")
    fld = FieldTag.parse(field if field is not None else obj.get("field", "R"))
    lat = lattice if lattice is not None else lattice_from_json(obj.get("lattice"))
    return GroupTuple(fld, [element_from_json(g) for g in obj["logs"]], lat)
