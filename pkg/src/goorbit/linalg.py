"""Exact rational linear algebra over :class:`fractions.Fraction`.

Vectors are tuples of Fractions, matrices are tuples of row tuples.  All
structural computations in the package go through this module; floating
point is confined to :mod:`goorbit.eigen` and :mod:`goorbit.sim`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class ShapeError(ValueError):
    """Operands have incompatible dimensions."""


def frac(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` literals to a Fraction.

    Floats are rejected: silently converting 0.1 to 3602879701896397/2**55
    is never what a caller wants here.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


def vec(xs: Iterable) -> Vector:
    return tuple(frac(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def zero_matrix(r: int, c: int) -> Matrix:
    return tuple(zeros(c) for _ in range(r))


def identity(n: int) -> Matrix:
    return tuple(unit(n, i) for i in range(n))


def diag(entries: Sequence) -> Matrix:
    d = vec(entries)
    n = len(d)
    return tuple(tuple(d[i] if i == j else ZERO for j in range(n)) for i in range(n))


def is_zero(v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in v)


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    if len(u) != len(v):
        raise ShapeError(f"vector lengths {len(u)} != {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    if len(u) != len(v):
        raise ShapeError(f"vector lengths {len(u)} != {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence[Fraction]) -> Vector:
    c = frac(c)
    return tuple(c * a for a in v)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ShapeError(f"vector lengths {len(u)} != {len(v)}")
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


def lincomb(coeffs: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]], n: int) -> Vector:
    """``sum(c_i * v_i)`` with ambient length ``n`` (needed when empty)."""
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for k, x in enumerate(v):
                if x:
                    out[k] += c * x
    return tuple(out)


def transpose(a: Sequence[Sequence[Fraction]]) -> Matrix:
    return tuple(zip(*a)) if a else ()


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    if a and len(a[0]) != len(b):
        raise ShapeError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x?")
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def matvec(a: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Vector:
    return tuple(dot(row, v) for row in a)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(sub(r, s) for r, s in zip(a, b))


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(add(r, s) for r, s in zip(a, b))


def mat_scale(c, a: Matrix) -> Matrix:
    return tuple(scale(c, r) for r in a)


def is_symmetric(a: Sequence[Sequence[Fraction]]) -> bool:
    n = len(a)
    return all(len(r) == n for r in a) and all(
        a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n)
    )


def bilinear(form: Sequence[Sequence[Fraction]], u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return dot(u, matvec(form, v))


# ---------------------------------------------------------------------------
# Elimination
# ---------------------------------------------------------------------------


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form; zero rows are dropped.

    Returns ``(rows, pivot_columns)``.
    """
    m = [list(map(frac, r)) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        if inv != 1:
            m[r] = [x * inv for x in m[r]]
        pivot_row = m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], pivot_row)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(a: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(a)[1])


def _nullspace_rows(a: Sequence[Sequence[Fraction]], ncols: int) -> list[Vector]:
    red, pivots = rref(a, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def kernel(a: Sequence[Sequence[Fraction]], ncols: int | None = None) -> "Subspace":
    """Exact nullspace ``{x : A x = 0}`` as a :class:`Subspace`."""
    if ncols is None:
        if not a:
            raise ShapeError("column count needed for an empty matrix")
        ncols = len(a[0])
    if any(len(r) != ncols for r in a):
        raise ShapeError("ragged matrix")
    return Subspace.span(_nullspace_rows(a, ncols), ncols)


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction], ncols: int | None = None) -> Vector | None:
    """One exact solution of ``A x = b``, or ``None`` when inconsistent."""
    if len(a) != len(b):
        raise ShapeError(f"{len(a)} equations but {len(b)} right-hand sides")
    if ncols is None:
        if not a:
            raise ShapeError("column count needed for an empty matrix")
        ncols = len(a[0])
    aug = [tuple(map(frac, row)) + (frac(rhs),) for row, rhs in zip(a, b)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return tuple(x)


def inconsistency_certificate(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Vector | None:
    """A row vector ``y`` with ``y A = 0`` and ``y . b != 0`` if ``A x = b`` is
    inconsistent, else ``None``.  Such a ``y`` proves infeasibility by itself."""
    if not a:
        return None
    left = kernel(transpose(a), len(a)) if a[0] else Subspace.full(len(a))
    for y in left.basis:
        if dot(y, b) != 0:
            return y
    return None


def inverse(a: Sequence[Sequence[Fraction]]) -> Matrix:
    n = len(a)
    aug = [tuple(map(frac, row)) + unit(n, i) for i, row in enumerate(a)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != tuple(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return tuple(row[n:] for row in red)


def determinant(a: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(map(frac, r)) for r in a]
    n = len(m)
    det = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return ZERO
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def is_positive_definite(a: Sequence[Sequence[Fraction]]) -> bool:
    """Exact test by Sylvester's criterion.

    Gaussian elimination without pivoting produces the ratios of consecutive
    leading principal minors; the form is positive definite iff all of them
    are positive.  A zero pivot already disqualifies the matrix.
    """
    if not is_symmetric(a):
        return False
    m = [list(map(frac, r)) for r in a]
    n = len(m)
    for c in range(n):
        if m[c][c] <= 0:
            return False
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return True


def is_negative_definite(a: Sequence[Sequence[Fraction]]) -> bool:
    return is_positive_definite(mat_scale(-1, tuple(map(tuple, a))))


def signature(a: Sequence[Sequence[Fraction]]) -> tuple[int, int, int]:
    """``(n_plus, n_minus, n_zero)`` of a rational symmetric matrix."""
    m = [list(map(frac, r)) for r in a]
    n = len(m)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is None:
            pair = next(
                ((i, j) for i in active for j in active if i < j and m[i][j] != 0), None
            )
            if pair is None:
                break
            i, j = pair
            # congruence e_i <- e_i + e_j creates a nonzero diagonal entry 2*m[i][j]
            for k in range(n):
                m[i][k] += m[j][k]
            for k in range(n):
                m[k][i] += m[k][j]
            piv = i
        d = m[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        row = m[piv][:]
        for i in active:
            if m[i][piv]:
                f = m[i][piv] / d
                for k in range(n):
                    m[i][k] -= f * row[k]
        for i in active:
            m[i][piv] = ZERO
            m[piv][i] = ZERO
    return pos, neg, n - pos - neg


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """A subspace of ``Q^ambient_dim`` stored by its RREF basis.

    Because the basis is canonical, ``==`` is subspace equality.
    """

    ambient_dim: int
    basis: Matrix
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        rows = [vec(v) for v in vectors]
        if any(len(r) != ambient_dim for r in rows):
            raise ShapeError(f"vectors must have length {ambient_dim}")
        red, pivots = rref(rows, ambient_dim)
        return cls(ambient_dim, red, pivots)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, (), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, identity(n), tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dim

    def __iter__(self):
        return iter(self.basis)

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise ShapeError(f"ambient dims {self.ambient_dim} != {other.ambient_dim}")

    def coordinates(self, v: Sequence[Fraction]) -> Vector | None:
        """Coordinates of ``v`` in :attr:`basis`, or ``None`` if ``v`` is not in the span."""
        v = vec(v)
        if len(v) != self.ambient_dim:
            raise ShapeError(f"vector of length {len(v)} in ambient {self.ambient_dim}")
        coords = tuple(v[p] for p in self.pivots)
        if lincomb(coords, self.basis, self.ambient_dim) != v:
            return None
        return coords

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return all(v in self for v in other.basis)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def annihilator(self) -> Matrix:
        """Rows ``y`` with ``y . v = 0`` for all ``v`` here; ``x`` is in the
        subspace iff every row annihilates it."""
        return tuple(_nullspace_rows(self.basis, self.ambient_dim)) if self.basis else identity(
            self.ambient_dim
        )

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        conditions = self.annihilator() + other.annihilator()
        if not conditions:
            return Subspace.full(self.ambient_dim)
        return kernel(conditions, self.ambient_dim)

    def is_zero(self) -> bool:
        return not self.basis

    def from_coordinates(self, coords: Sequence[Fraction]) -> Vector:
        return lincomb(vec(coords), self.basis, self.ambient_dim)

    def complement_basis(self) -> Matrix:
        """Standard unit vectors completing :attr:`basis` to a basis of the ambient space."""
        piv = set(self.pivots)
        return tuple(unit(self.ambient_dim, j) for j in range(self.ambient_dim) if j not in piv)

    def complement(self) -> "Subspace":
        return Subspace.span(self.complement_basis(), self.ambient_dim)


def span(vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    return Subspace.span(vectors, ambient_dim)


def subspace_sum(*spaces: Subspace, ambient_dim: int | None = None) -> Subspace:
    if not spaces:
        if ambient_dim is None:
            raise ShapeError("ambient_dim needed for an empty sum")
        return Subspace.zero(ambient_dim)
    out = spaces[0]
    for s in spaces[1:]:
        out = out + s
    return out


def is_direct_sum(*spaces: Subspace) -> bool:
    """True iff the dimension of the sum equals the sum of dimensions."""
    total = subspace_sum(*spaces)
    return total.dim == sum(s.dim for s in spaces)


def restricted_kernel(within: Subspace, conditions: Callable[[Vector], Sequence[Fraction]]) -> Subspace:
    """``{x in within : conditions(x) = 0}`` for a linear ``conditions`` map.

    The map is evaluated on the basis of ``within``; the resulting coefficient
    kernel is mapped back to ambient vectors.
    """
    n = within.ambient_dim
    if within.is_zero():
        return within
    cols = [tuple(conditions(b)) for b in within.basis]
    neq = len(cols[0])
    if neq == 0:
        return within
    a = tuple(tuple(col[r] for col in cols) for r in range(neq))
    coeffs = kernel(a, within.dim)
    return Subspace.span((lincomb(c, within.basis, n) for c in coeffs.basis), n)


def orthocomplement(form: Sequence[Sequence[Fraction]], s: Subspace, within: Subspace) -> Subspace:
    """``{x in within : form(x, y) = 0 for all y in s}``; degenerate forms allowed."""
    if s.ambient_dim != within.ambient_dim or len(form) != s.ambient_dim:
        raise ShapeError("form, s and within must share the ambient dimension")
    images = [matvec(form, y) for y in s.basis]
    return restricted_kernel(within, lambda x: [dot(x, fy) for fy in images])


def gram(form: Sequence[Sequence[Fraction]], basis: Sequence[Sequence[Fraction]]) -> Matrix:
    return tuple(tuple(bilinear(form, u, v) for v in basis) for u in basis)


def format_scalar(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_vector(v: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_scalar(x) for x in v) + ")"
