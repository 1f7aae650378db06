"""Structure-constant Lie algebras and their classical decompositions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import sympy

from . import linalg as la
from .linalg import Matrix, Subspace, Vector


class LieAlgebraError(ValueError):
    pass


class AxiomViolation(LieAlgebraError):
    """Structure constants violate antisymmetry or the Jacobi identity."""

    def __init__(self, axiom: str, indices: tuple[int, ...], message: str):
        super().__init__(message)
        self.axiom = axiom
        self.indices = indices


class VerificationError(LieAlgebraError):
    """An internally computed object failed its exact post-check."""


class PreconditionError(LieAlgebraError):
    pass


def _default_labels(n: int) -> tuple[str, ...]:
    return tuple(f"e{i + 1}" for i in range(n))


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Lie algebra given by ``[e_i, e_j] = sum_k c[i][j][k] e_k``.

    Construction checks antisymmetry and the Jacobi identity exactly and
    raises :class:`AxiomViolation` naming the first violated axiom.
    """

    c: tuple[tuple[Vector, ...], ...]
    labels: tuple[str, ...] = ()
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        n = len(self.c)
        if not self.labels:
            object.__setattr__(self, "labels", _default_labels(n))
        if len(self.labels) != n:
            raise LieAlgebraError(f"{len(self.labels)} labels for dimension {n}")
        for i in range(n):
            if len(self.c[i]) != n or any(len(self.c[i][j]) != n for j in range(n)):
                raise LieAlgebraError("structure constants must be an n x n x n array")
        if self.check:
            self._check_antisymmetry()
            self._check_jacobi()

    # -- construction -------------------------------------------------------

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, labels: Sequence[str] = ()) -> "LieAlgebra":
        """Build from ``{(i, j): {k: coeff}}`` with 0-based indices, ``i < j``.

        The opposite brackets are filled in by antisymmetry.
        """
        c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), terms in brackets.items():
            if i == j:
                raise AxiomViolation("antisymmetry", (i, i), f"[e{i + 1}, e{i + 1}] must vanish")
            if isinstance(terms, dict):
                items = terms.items()
            else:
                items = enumerate(terms)
            for k, coeff in items:
                coeff = la.frac(coeff)
                c[i][j][k] += coeff
                c[j][i][k] -= coeff
        return cls(tuple(tuple(tuple(r) for r in plane) for plane in c), tuple(labels))

    @classmethod
    def abelian(cls, n: int, labels: Sequence[str] = ()) -> "LieAlgebra":
        return cls.from_brackets(n, {}, labels)

    @classmethod
    def from_matrices(cls, mats: Sequence[Sequence[Sequence]], labels: Sequence[str] = ()) -> "LieAlgebra":
        """Structure constants of the span of linearly independent matrices
        closed under the commutator."""
        flat = [la.vec(x for row in m for x in row) for m in mats]
        n = len(flat)
        space = Subspace.span(flat, len(flat[0]))
        if space.dim != n:
            raise LieAlgebraError("matrices are linearly dependent")
        a = la.transpose(flat)
        ms = [la.mat(m) for m in mats]
        c = []
        for i in range(n):
            plane = []
            for j in range(n):
                comm = la.mat_sub(la.matmul(ms[i], ms[j]), la.matmul(ms[j], ms[i]))
                coords = la.solve(a, [x for row in comm for x in row], n)
                if coords is None:
                    raise LieAlgebraError("matrices are not closed under the commutator")
                plane.append(coords)
            c.append(tuple(plane))
        return cls(tuple(c), tuple(labels))

    # -- axioms ---------------------------------------------------------------

    def _check_antisymmetry(self) -> None:
        n = self.dim
        for i in range(n):
            for j in range(i, n):
                for k in range(n):
                    if self.c[i][j][k] != -self.c[j][i][k]:
                        raise AxiomViolation(
                            "antisymmetry",
                            (i, j, k),
                            f"antisymmetry violated: c[{i + 1}][{j + 1}][{k + 1}] = {self.c[i][j][k]}"
                            f" but c[{j + 1}][{i + 1}][{k + 1}] = {self.c[j][i][k]}",
                        )

    def jacobiator(self, i: int, j: int, k: int) -> Vector:
        e = self.basis_vector
        return la.add(
            la.add(self.bracket(e(i), self.bracket(e(j), e(k))), self.bracket(e(j), self.bracket(e(k), e(i)))),
            self.bracket(e(k), self.bracket(e(i), e(j))),
        )

    def _check_jacobi(self) -> None:
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    if not la.is_zero(self.jacobiator(i, j, k)):
                        raise AxiomViolation(
                            "jacobi",
                            (i, j, k),
                            f"Jacobi identity violated on ({self.labels[i]}, {self.labels[j]}, {self.labels[k]})",
                        )

    # -- basic operations -----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.c)

    def basis_vector(self, i: int) -> Vector:
        return la.unit(self.dim, i)

    @cached_property
    def _nonzero(self) -> dict[tuple[int, int], tuple[tuple[int, Fraction], ...]]:
        n = self.dim
        out = {}
        for i in range(n):
            for j in range(n):
                terms = tuple((k, x) for k, x in enumerate(self.c[i][j]) if x)
                if terms:
                    out[i, j] = terms
        return out

    def bracket(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        n = self.dim
        if len(x) != n or len(y) != n:
            raise la.ShapeError(f"vectors must have length {n}")
        out = [Fraction(0)] * n
        xs = [(i, a) for i, a in enumerate(x) if a]
        ys = [(j, b) for j, b in enumerate(y) if b]
        nz = self._nonzero
        for i, a in xs:
            for j, b in ys:
                terms = nz.get((i, j))
                if terms:
                    ab = a * b
                    for k, cc in terms:
                        out[k] += ab * cc
        return tuple(out)

    def ad(self, x: Sequence[Fraction]) -> Matrix:
        """Matrix of ``y -> [x, y]`` (column j is ``[x, e_j]``)."""
        cols = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        return la.transpose(cols)

    @cached_property
    def ad_basis(self) -> tuple[Matrix, ...]:
        return tuple(self.ad(self.basis_vector(i)) for i in range(self.dim))

    def bracket_space(self, a: Subspace, b: Subspace) -> Subspace:
        return Subspace.span(
            (self.bracket(x, y) for x in a.basis for y in b.basis), self.dim
        )

    @cached_property
    def killing_matrix(self) -> Matrix:
        return _killing(self)

    @cached_property
    def whole(self) -> Subspace:
        return Subspace.full(self.dim)

    def is_subalgebra(self, s: Subspace) -> bool:
        return s.contains(self.bracket_space(s, s))

    def is_ideal(self, s: Subspace) -> bool:
        return s.contains(self.bracket_space(self.whole, s))

    def commute(self, a: Subspace, b: Subspace) -> bool:
        return self.bracket_space(a, b).is_zero()

    def restrict(self, s: Subspace, labels: Sequence[str] = ()) -> "LieAlgebra":
        """The subalgebra ``s`` as an abstract algebra in the basis ``s.basis``."""
        if not self.is_subalgebra(s):
            raise PreconditionError("not a subalgebra")
        c = tuple(
            tuple(s.coordinates(self.bracket(x, y)) for y in s.basis) for x in s.basis
        )
        return LieAlgebra(c, tuple(labels), check=False)

    def rebase(self, new_basis: Sequence[Sequence], labels: Sequence[str] = ()) -> "LieAlgebra":
        """Same algebra expressed in the basis whose vectors are the rows of ``new_basis``."""
        p = la.mat(new_basis)
        full = Subspace.span(p, self.dim)
        if full.dim != self.dim or len(p) != self.dim:
            raise LieAlgebraError("new basis must be a basis")
        pt = la.transpose(p)
        c = tuple(
            tuple(la.solve(pt, self.bracket(x, y), self.dim) for y in p) for x in p
        )
        return LieAlgebra(c, tuple(labels))

    def direct_sum(self, other: "LieAlgebra") -> "LieAlgebra":
        n, m = self.dim, other.dim
        br = {}
        for (i, j), terms in self._nonzero.items():
            if i < j:
                br[i, j] = {k: x for k, x in terms}
        for (i, j), terms in other._nonzero.items():
            if i < j:
                br[n + i, n + j] = {n + k: x for k, x in terms}
        return LieAlgebra.from_brackets(n + m, br, self.labels + other.labels)


# ---------------------------------------------------------------------------
# Killing form, series, centralizers
# ---------------------------------------------------------------------------


def killing(g: LieAlgebra) -> Matrix:
    """``B(e_i, e_j) = tr(ad e_i ad e_j)`` as an exact symmetric matrix."""
    return g.killing_matrix


def _killing(g: LieAlgebra) -> Matrix:
    n = g.dim
    c = g.c
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(
                sum((c[i][l][k] * c[j][k][l] for k in range(n) for l in range(n) if c[i][l][k]), Fraction(0))
            )
        rows.append(tuple(row))
    return tuple(rows)


def killing_form_on(g: LieAlgebra, s: Subspace) -> Matrix:
    return la.gram(killing(g), s.basis)


@dataclass(frozen=True)
class Series:
    derived: tuple[Subspace, ...]
    lower_central: tuple[Subspace, ...]

    @property
    def is_solvable(self) -> bool:
        return self.derived[-1].is_zero()

    @property
    def is_nilpotent(self) -> bool:
        return self.lower_central[-1].is_zero()

    @property
    def step(self) -> int | None:
        """Nilpotency step: number of nonzero terms of the lower central series."""
        if not self.is_nilpotent:
            return None
        return sum(1 for s in self.lower_central if not s.is_zero())


def series(g: LieAlgebra, s: Subspace | None = None) -> Series:
    """Derived and lower central series of ``g`` (or of its subalgebra ``s``),
    each continued until it stabilizes."""
    top = g.whole if s is None else s
    derived = [top]
    while True:
        nxt = g.bracket_space(derived[-1], derived[-1])
        if nxt == derived[-1]:
            break
        derived.append(nxt)
    lower = [top]
    while True:
        nxt = g.bracket_space(top, lower[-1])
        if nxt == lower[-1]:
            break
        lower.append(nxt)
    return Series(tuple(derived), tuple(lower))


def centralizer(g: LieAlgebra, s: Subspace, within: Subspace | None = None) -> Subspace:
    within = g.whole if within is None else within
    return la.restricted_kernel(
        within, lambda x: [c for y in s.basis for c in g.bracket(x, y)]
    )


def center(g: LieAlgebra) -> Subspace:
    return centralizer(g, g.whole, g.whole)


def normalizer(g: LieAlgebra, s: Subspace, within: Subspace | None = None) -> Subspace:
    within = g.whole if within is None else within
    ann = s.annihilator()
    return la.restricted_kernel(
        within, lambda x: [la.dot(a, g.bracket(x, y)) for y in s.basis for a in ann]
    )


def ideal_generated(g: LieAlgebra, s: Subspace) -> Subspace:
    cur = s
    while True:
        nxt = cur + g.bracket_space(g.whole, cur)
        if nxt == cur:
            return cur
        cur = nxt


# ---------------------------------------------------------------------------
# Radical, nilradical, Levi
# ---------------------------------------------------------------------------


def radical(g: LieAlgebra) -> Subspace:
    """Solvable radical, the Killing-orthogonal of ``[g, g]``."""
    b = killing(g)
    derived = g.bracket_space(g.whole, g.whole)
    r = la.orthocomplement(b, derived, g.whole)
    if not (g.is_ideal(r) and series(g, r).is_solvable):
        raise VerificationError("computed radical is not a solvable ideal")
    return r


def _associative_span(mats: Sequence[Matrix], n: int) -> list[Matrix]:
    """Basis of the associative algebra generated by ``mats`` (no identity)."""
    flat = lambda m: tuple(x for row in m for x in row)
    unflat = lambda v: tuple(tuple(v[i * n:(i + 1) * n]) for i in range(n))
    space = Subspace.span([flat(m) for m in mats], n * n)
    while True:
        basis = [unflat(v) for v in space.basis]
        products = [flat(la.matmul(a, b)) for a in basis for b in basis]
        grown = Subspace.span(list(space.basis) + products, n * n)
        if grown == space:
            return basis
        space = grown


def nilradical(g: LieAlgebra, rad: Subspace | None = None) -> Subspace:
    """Largest nilpotent ideal.

    ``x`` in the radical lies in the nilradical iff ``ad x`` lies in the
    trace-form radical of the associative algebra generated by ``ad(rad)``.
    """
    r = radical(g) if rad is None else rad
    if r.is_zero():
        return r
    n = g.dim
    ads = [g.ad(x) for x in r.basis]
    assoc = _associative_span(ads, n)
    nil = la.restricted_kernel(
        r,
        lambda x: [sum((a * b for ra, rb in zip(g.ad(x), la.transpose(m)) for a, b in zip(ra, rb)), Fraction(0)) for m in assoc],
    )
    if not (g.is_ideal(nil) and series(g, nil).is_nilpotent):
        raise VerificationError("computed nilradical is not a nilpotent ideal")
    if not nil.contains(g.bracket_space(g.whole, r)):
        raise VerificationError("nilradical does not contain [g, rad]")
    return nil


@dataclass(frozen=True)
class QuotientAlgebra:
    algebra: LieAlgebra
    ideal: Subspace
    complement: Matrix  # ambient vectors whose images form the quotient basis

    def project(self, x: Sequence[Fraction]) -> Vector:
        return _project_mod(self.ideal, x)


def _project_mod(ideal: Subspace, x: Sequence[Fraction]) -> Vector:
    """Coordinates of ``x + ideal`` on the standard complement of the ideal's pivots."""
    x = la.vec(x)
    reduced = la.sub(x, la.lincomb([x[p] for p in ideal.pivots], ideal.basis, len(x)))
    piv = set(ideal.pivots)
    return tuple(v for j, v in enumerate(reduced) if j not in piv)


def quotient(g: LieAlgebra, ideal: Subspace) -> QuotientAlgebra:
    """``g / ideal`` on the standard complement of the ideal's pivot columns."""
    if not g.is_ideal(ideal):
        raise PreconditionError("not an ideal")
    comp = ideal.complement_basis()
    piv = set(ideal.pivots)
    labels = tuple(g.labels[j] for j in range(g.dim) if j not in piv)
    c = tuple(tuple(_project_mod(ideal, g.bracket(x, y)) for y in comp) for x in comp)
    alg = LieAlgebra(c, labels)
    out = QuotientAlgebra(alg, ideal, comp)
    for i, x in enumerate(comp):
        for j, y in enumerate(comp):
            lhs = out.project(g.bracket(x, y))
            rhs = alg.bracket(out.project(x), out.project(y))
            if lhs != rhs:
                raise VerificationError("projection is not a homomorphism")
    return out


@dataclass(frozen=True)
class LeviData:
    radical: Subspace
    nilradical: Subspace
    levi: Subspace
    levi_nc: Subspace
    levi_cp: Subspace


class LeviError(LieAlgebraError):
    pass


def _lift_levi(g: LieAlgebra, r: Subspace) -> Subspace:
    """Levi subalgebra by successive linear corrections modulo the derived
    series of the radical."""
    n = g.dim
    q = quotient(g, r)
    s_alg = q.algebra
    ns = s_alg.dim
    sigma = [list(v) for v in q.complement]
    chain = list(series(g, r).derived)
    if not chain[-1].is_zero():
        raise LeviError("radical is not solvable")
    for level, lower in zip(chain, chain[1:]):
        ann = lower.annihilator()
        d = level.dim
        rows = []
        rhs = []
        for a in range(ns):
            for b in range(a + 1, ns):
                defect = la.sub(
                    g.bracket(sigma[a], sigma[b]),
                    la.lincomb(s_alg.c[a][b], sigma, n),
                )
                # unknown tau_c = sum_t x[c, t] level.basis[t]
                coeff_vectors: dict[tuple[int, int], Vector] = {}
                for t, w in enumerate(level.basis):
                    coeff_vectors[b, t] = la.add(coeff_vectors.get((b, t), la.zeros(n)), g.bracket(sigma[a], w))
                    coeff_vectors[a, t] = la.add(coeff_vectors.get((a, t), la.zeros(n)), g.bracket(w, sigma[b]))
                    for c_idx, gamma in enumerate(s_alg.c[a][b]):
                        if gamma:
                            coeff_vectors[c_idx, t] = la.sub(
                                coeff_vectors.get((c_idx, t), la.zeros(n)), la.scale(gamma, w)
                            )
                for y in ann:
                    row = [Fraction(0)] * (ns * d)
                    for (c_idx, t), v in coeff_vectors.items():
                        row[c_idx * d + t] += la.dot(y, v)
                    rows.append(row)
                    rhs.append(-la.dot(y, defect))
        if not rows:
            continue
        x = la.solve(rows, rhs, ns * d)
        if x is None:
            raise LeviError("Levi lifting step is inconsistent")
        for c_idx in range(ns):
            corr = la.lincomb(x[c_idx * d:(c_idx + 1) * d], level.basis, n)
            sigma[c_idx] = list(la.add(sigma[c_idx], corr))
    levi = Subspace.span(sigma, n)
    return levi


def is_levi_factor(g: LieAlgebra, candidate: Subspace, rad: Subspace) -> bool:
    return (
        g.is_subalgebra(candidate)
        and la.is_direct_sum(candidate, rad)
        and (candidate + rad) == g.whole
    )


def levi(g: LieAlgebra, candidate: Subspace | None = None) -> LeviData:
    r = radical(g)
    nil = nilradical(g, r)
    if candidate is not None:
        if not is_levi_factor(g, candidate, r):
            raise LeviError("candidate is not a Levi factor (closure or complement check failed)")
        s = candidate
    elif r.is_zero():
        s = g.whole
    elif r == g.whole:
        s = Subspace.zero(g.dim)
    else:
        s = _lift_levi(g, r)
        if not is_levi_factor(g, s, r):
            raise VerificationError("lifted Levi factor failed verification")
    nc, cp = compact_split(g, s)
    return LeviData(r, nil, s, nc, cp)


# ---------------------------------------------------------------------------
# Semisimple splitting
# ---------------------------------------------------------------------------


def _action_matrix(g: LieAlgebra, x: Vector, s: Subspace) -> Matrix:
    """Matrix of ``ad x`` restricted to the invariant subspace ``s`` (in s-coordinates)."""
    cols = [s.coordinates(g.bracket(x, y)) for y in s.basis]
    return la.transpose(cols)


def centroid(g: LieAlgebra, s: Subspace) -> list[Matrix]:
    """Basis of the maps ``T`` on the ideal ``s`` commuting with ``ad(s)|_s``."""
    d = s.dim
    acts = [_action_matrix(g, x, s) for x in s.basis]
    rows = []
    for a in acts:
        # (T A - A T)[i][j] = sum_k T[i][k] A[k][j] - A[i][k] T[k][j]
        for i in range(d):
            for j in range(d):
                row = [Fraction(0)] * (d * d)
                for k in range(d):
                    if a[k][j]:
                        row[i * d + k] += a[k][j]
                    if a[i][k]:
                        row[k * d + j] -= a[i][k]
                if any(row):
                    rows.append(row)
    if not rows:
        sol = Subspace.full(d * d)
    else:
        sol = la.kernel(rows, d * d)
    return [tuple(tuple(v[i * d:(i + 1) * d]) for i in range(d)) for v in sol.basis]


def minimal_polynomial(t: Matrix) -> list[Fraction]:
    """Coefficients (constant term first, monic) of the minimal polynomial."""
    d = len(t)
    flat = lambda m: tuple(x for row in m for x in row)
    powers = [la.identity(d)]
    while True:
        nxt = la.matmul(powers[-1], t)
        a = la.transpose([flat(p) for p in powers])
        coeffs = la.solve(a, flat(nxt), len(powers))
        if coeffs is not None:
            return [-c for c in coeffs] + [Fraction(1)]
        powers.append(nxt)


def _poly_at(t: Matrix, coeffs: Sequence[Fraction]) -> Matrix:
    d = len(t)
    out = la.zero_matrix(d, d)
    power = la.identity(d)
    for c in coeffs:
        out = la.mat_add(out, la.mat_scale(c, power))
        power = la.matmul(power, t)
    return out


def _rational_factors(coeffs: Sequence[Fraction]) -> list[list[Fraction]]:
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in coeffs])), x, domain="QQ")
    _, factors = poly.factor_list()
    out = []
    for f, _mult in factors:
        cs = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in reversed(f.all_coeffs())]
        out.append(cs)
    return out


def simple_ideals(g: LieAlgebra, s: Subspace) -> list[Subspace]:
    """Split a semisimple ideal (or Levi factor treated as an algebra) into
    simple ideals using exact factorization in its centroid."""
    if s.is_zero():
        return []
    sub = g.restrict(s)
    pieces = _split_simple(sub, sub.whole)
    return [Subspace.span((s.from_coordinates(v) for v in p.basis), g.dim) for p in pieces]


def _split_simple(g: LieAlgebra, s: Subspace) -> list[Subspace]:
    cents = centroid(g, s)
    d = s.dim
    for t in cents:
        mp = minimal_polynomial(t)
        factors = _rational_factors(mp)
        if len(factors) < 2:
            continue
        f0 = factors[0]
        rest = [Fraction(1)]
        for f in factors[1:]:
            rest = _poly_mul(rest, f)
        k0 = la.kernel(_poly_at(t, f0), d)
        k1 = la.kernel(_poly_at(t, rest), d)
        a = Subspace.span((s.from_coordinates(v) for v in k0.basis), g.dim)
        b = Subspace.span((s.from_coordinates(v) for v in k1.basis), g.dim)
        if a.is_zero() or b.is_zero():
            continue
        return _split_simple(g, a) + _split_simple(g, b)
    if len(cents) == 1:
        return [s]
    if len(cents) == 2:
        nonscalar = next(t for t in cents if any(t[i][j] != (t[0][0] if i == j else 0) for i in range(d) for j in range(d)))
        mp = minimal_polynomial(nonscalar)
        if len(mp) == 3 and mp[1] ** 2 - 4 * mp[0] * mp[2] < 0:
            return [s]  # centroid is a field: a complex simple algebra viewed as real
    raise LieAlgebraError(
        "cannot split the semisimple algebra into simple ideals over Q; supply the decomposition"
    )


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def compact_split(g: LieAlgebra, s: Subspace) -> tuple[Subspace, Subspace]:
    """``(noncompact part, compact part)`` of a semisimple subalgebra ``s``.

    A simple ideal is compact iff its Killing form is negative definite.
    """
    n = g.dim
    if s.is_zero():
        return s, s
    sub = g.restrict(s)
    if la.determinant(killing(sub)) == 0:
        raise PreconditionError("subalgebra is not semisimple")
    nc = Subspace.zero(n)
    cp = Subspace.zero(n)
    for ideal in simple_ideals(g, s):
        local = Subspace.span((s.coordinates(v) for v in ideal.basis), s.dim)
        form = la.gram(killing(sub), local.basis)
        if la.is_negative_definite(form):
            cp = cp + ideal
        else:
            nc = nc + ideal
    if not g.commute(nc, cp):
        raise VerificationError("noncompact and compact parts do not commute")
    return nc, cp
