"""Riemannian nilmanifolds: skew derivations, the v + z splitting, 2-step groups."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg as la
from .lie import LieAlgebra, PreconditionError, VerificationError, center, series
from .linalg import Matrix, Subspace, Vector
from .report import Report
from .space import HomogeneousSpaceSpec, describe


class StepError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class NilmanifoldSpec:
    n: LieAlgebra
    ip: Matrix  # Gram matrix in the basis of n
    name: str = ""
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.ip) != self.n.dim or not la.is_symmetric(self.ip):
            raise ValueError("metric must be a symmetric matrix of size dim n")
        if not la.is_positive_definite(self.ip):
            raise ValueError("metric is not positive definite")
        if not series(self.n).is_nilpotent:
            raise ValueError("algebra is not nilpotent")

    @classmethod
    def create(cls, n: LieAlgebra, ip: Sequence[Sequence] | None = None, name: str = "", flags: dict | None = None):
        ip = la.identity(n.dim) if ip is None else la.mat(ip)
        return cls(n, ip, name, dict(flags or {}))

    @cached_property
    def z(self) -> Subspace:
        return center(self.n)

    @cached_property
    def v(self) -> Subspace:
        return la.orthocomplement(self.ip, self.z, self.n.whole)

    @cached_property
    def step(self) -> int:
        return series(self.n).step

    def inner(self, x, y) -> Fraction:
        return la.bilinear(self.ip, x, y)


# ---------------------------------------------------------------------------
# Skew-symmetric derivations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SkewDerivationAlgebra:
    basis: tuple[Matrix, ...]  # matrices acting on column vectors of n

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combine(self, coeffs: Sequence[Fraction]) -> Matrix:
        n = len(self.basis[0]) if self.basis else 0
        out = la.zero_matrix(n, n)
        for c, d in zip(coeffs, self.basis):
            if c:
                out = la.mat_add(out, la.mat_scale(c, d))
        return out

    def coordinates(self, d: Matrix) -> Vector | None:
        flat = lambda m: tuple(x for row in m for x in row)
        a = la.transpose([flat(b) for b in self.basis])
        return la.solve(a, flat(d), self.dim) if self.basis else (() if not any(flat(d)) else None)


def _is_derivation(n: LieAlgebra, d: Matrix) -> bool:
    for i in range(n.dim):
        for j in range(i + 1, n.dim):
            ei, ej = n.basis_vector(i), n.basis_vector(j)
            lhs = la.matvec(d, n.bracket(ei, ej))
            rhs = la.add(n.bracket(la.matvec(d, ei), ej), n.bracket(ei, la.matvec(d, ej)))
            if lhs != rhs:
                return False
    return True


def _is_skew(ip: Matrix, d: Matrix) -> bool:
    s = la.matmul(ip, d)
    return la.mat_add(s, la.transpose(s)) == la.zero_matrix(len(d), len(d))


def skew_derivations(nspec: NilmanifoldSpec) -> SkewDerivationAlgebra:
    """Basis of ``{D : D derivation of n, <Dx,y> + <x,Dy> = 0}``."""
    n = nspec.n
    d = n.dim
    nunk = d * d  # D[r][c] at index r*d + c

    def coeff_vector(x: Vector) -> list[list[Fraction]]:
        # rows: output component r, columns: unknown index; (D x)_r = sum_c D[r][c] x_c
        rows = [[Fraction(0)] * nunk for _ in range(d)]
        for r in range(d):
            for c, xc in enumerate(x):
                if xc:
                    rows[r][r * d + c] += xc
        return rows

    eqs = []
    for i in range(d):
        for j in range(i + 1, d):
            ei, ej = n.basis_vector(i), n.basis_vector(j)
            # D[ei,ej] - [D ei, ej] - [ei, D ej] = 0, each term linear in D
            lhs = coeff_vector(n.bracket(ei, ej))
            row_terms = [list(r) for r in lhs]
            for c in range(d):
                # D ei = sum_r D[r][i] e_r  -> [e_r, ej] weighted by unknown (r, i)
                er = n.basis_vector(c)
                b1 = n.bracket(er, ej)
                b2 = n.bracket(ei, er)
                for out in range(d):
                    if b1[out]:
                        row_terms[out][c * d + i] -= b1[out]
                    if b2[out]:
                        row_terms[out][c * d + j] -= b2[out]
            eqs.extend(row_terms)
    ip = nspec.ip
    for i in range(d):
        for j in range(i, d):
            # (ip D)_{ij} + (ip D)_{ji} = sum_r ip[i][r] D[r][j] + ip[j][r] D[r][i]
            row = [Fraction(0)] * nunk
            for r in range(d):
                row[r * d + j] += ip[i][r]
                row[r * d + i] += ip[j][r]
            eqs.append(row)
    ker = la.kernel(eqs, nunk)
    # canonical basis: echelon form with D read column by column, so that the
    # first pivot is the image of e1 (for h3 this gives J e1 = e2)
    cols = Subspace.span([[v[r * d + c] for c in range(d) for r in range(d)] for v in ker.basis], nunk)
    basis = tuple(tuple(tuple(v[c * d + r] for c in range(d)) for r in range(d)) for v in cols.basis)
    out = SkewDerivationAlgebra(basis)
    for dm in basis:
        if not (_is_derivation(n, dm) and _is_skew(ip, dm)):
            raise VerificationError("kernel element is not a skew derivation")
    for a in basis:
        for b in basis:
            comm = la.mat_sub(la.matmul(a, b), la.matmul(b, a))
            if out.coordinates(comm) is None:
                raise VerificationError("skew derivations not closed under commutator")
    return out


def is_invariant(sda: SkewDerivationAlgebra, s: Subspace) -> bool:
    return all(la.matvec(d, x) in s for d in sda.basis for x in s.basis)


def to_homogeneous_spec(nspec: NilmanifoldSpec, sda: SkewDerivationAlgebra | None = None) -> HomogeneousSpaceSpec:
    """``g = n + h`` with ``h`` the skew derivations acting on ``n``; m is n."""
    n = nspec.n
    sda = sda or skew_derivations(nspec)
    dn, k = n.dim, sda.dim
    dim = dn + k
    br: dict = {}
    for (i, j), terms in n._nonzero.items():
        if i < j:
            br[i, j] = {t: c for t, c in terms}
    for a, da in enumerate(sda.basis):
        for j in range(dn):
            col = tuple(da[r][j] for r in range(dn))
            if any(col):
                br[dn + a, j] = {r: c for r, c in enumerate(col) if c}
        for b in range(a + 1, k):
            comm = la.mat_sub(la.matmul(da, sda.basis[b]), la.matmul(sda.basis[b], da))
            coords = sda.coordinates(comm)
            if any(coords):
                br[dn + a, dn + b] = {dn + t: c for t, c in enumerate(coords) if c}
    labels = n.labels + tuple(f"D{a + 1}" for a in range(k)) if k > 1 else n.labels + (("J",) if k else ())
    g = LieAlgebra.from_brackets(dim, br, labels)
    h_rows = [la.unit(dim, dn + a) for a in range(k)]
    m_rows = [la.unit(dim, i) for i in range(dn)]
    return HomogeneousSpaceSpec.create(g, h_rows, m_rows, nspec.ip, name=nspec.name, flags=nspec.flags)


def go_nil_solve(nspec: NilmanifoldSpec, v: Sequence[Fraction], z: Sequence[Fraction],
                 sda: SkewDerivationAlgebra | None = None) -> Matrix | None:
    """Skew derivation ``A`` with ``<[X+W,Y] + A Y, X+W> = 0`` for all Y, or ``None``."""
    n = nspec.n
    if nspec.step > 2:
        raise StepError("needs a nilpotent algebra of step at most 2")
    x, w = la.vec(v), la.vec(z)
    if x not in nspec.v or w not in nspec.z:
        raise PreconditionError("v must lie in v and z in z")
    sda = sda or skew_derivations(nspec)
    xw = la.add(x, w)
    rows, rhs = [], []
    for j in range(n.dim):
        y = n.basis_vector(j)
        rows.append(tuple(nspec.inner(la.matvec(d, y), xw) for d in sda.basis))
        rhs.append(-nspec.inner(n.bracket(xw, y), xw))
    coeffs = la.solve(rows, rhs, sda.dim)
    if coeffs is None:
        return None
    return sda.combine(coeffs) if sda.basis else la.zero_matrix(n.dim, n.dim)


# ---------------------------------------------------------------------------
# Structural checks
# ---------------------------------------------------------------------------


def commuting_blocks_check(nspec: NilmanifoldSpec, blocks: Sequence[Subspace],
                           sda: SkewDerivationAlgebra | None = None) -> Report:
    """For invariant, orthogonal blocks summing to v: cross brackets vanish and
    each ``v_i + [v_i, v_i]`` is an ideal."""
    n = nspec.n
    sda = sda or skew_derivations(nspec)
    for b in blocks:
        if not nspec.v.contains(b):
            raise PreconditionError("block not contained in v")
        if not is_invariant(sda, b):
            raise PreconditionError("block not invariant under skew derivations")
    for i, a in enumerate(blocks):
        for b in blocks[i + 1:]:
            if any(nspec.inner(x, y) for x in a.basis for y in b.basis):
                raise PreconditionError("blocks are not pairwise orthogonal")
    if blocks and not (la.is_direct_sum(*blocks) and la.subspace_sum(*blocks) == nspec.v):
        raise PreconditionError("blocks do not sum to v")
    rep = Report("commuting blocks")
    rep.value("blocks", len(blocks))
    for i, a in enumerate(blocks):
        for j in range(i + 1, len(blocks)):
            b = blocks[j]
            bad = next(((x, y) for x in a.basis for y in b.basis if any(n.bracket(x, y))), None)
            rep.check(
                f"blocks_{i + 1}_{j + 1}_commute", bad is None,
                "" if bad is None else f"[{describe(n, bad[0])}, {describe(n, bad[1])}] = {describe(n, n.bracket(*bad))}",
            )
    for i, a in enumerate(blocks):
        ideal = a + n.bracket_space(a, a)
        rep.check(f"block_{i + 1}_ideal", n.is_ideal(ideal))
    return rep


def invariant_subalgebra_ideal_check(nspec: NilmanifoldSpec, o: Subspace,
                                     sda: SkewDerivationAlgebra | None = None) -> Report:
    n = nspec.n
    sda = sda or skew_derivations(nspec)
    if not n.is_subalgebra(o):
        raise PreconditionError("o is not a subalgebra")
    if not is_invariant(sda, o):
        raise PreconditionError("o is not invariant under skew derivations")
    rep = Report("invariant subalgebra")
    rep.value("dim_o", o.dim)
    rep.check("is_ideal", n.is_ideal(o))
    return rep


def step_bound_check(nspec: NilmanifoldSpec) -> Report:
    rep = Report("step bound")
    step = nspec.step
    rep.value("step", step)
    if nspec.flags.get("go"):
        rep.check("go_step_at_most_2", step <= 2, "" if step <= 2 else "G.O. claim contradicts step > 2")
    else:
        rep.check("step_at_most_2", step <= 2 if step <= 2 else None,
                  "" if step <= 2 else "step > 2: cannot be a G.O. nilmanifold")
    return rep


# ---------------------------------------------------------------------------
# Exact group model for step <= 2
# ---------------------------------------------------------------------------


class TwoStepGroup:
    """Group structure on a nilpotent algebra of step at most 2.

    Exponential coordinates identify the group with the algebra, with product
    ``x * y = x + y + [x, y] / 2``.  :meth:`exp2` and :meth:`log2` convert to
    second-kind coordinates ``a`` in the adapted basis (v basis, then z basis):
    the element ``exp(a_1 b_1) ... exp(a_k b_k)``.
    """

    def __init__(self, nspec: NilmanifoldSpec):
        if nspec.step > 2:
            raise StepError("needs a nilpotent algebra of step at most 2")
        self.n = nspec.n
        self.basis = nspec.v.basis + nspec.z.basis
        self.nv = nspec.v.dim
        self._to_adapted = la.inverse(la.transpose(self.basis))

    def bch2(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        return la.add(la.add(x, y), la.scale(Fraction(1, 2), self.n.bracket(x, y)))

    def inverse(self, x: Sequence[Fraction]) -> Vector:
        return la.scale(-1, x)

    def _correction(self, a: Sequence[Fraction]) -> Vector:
        """``(1/2) sum_{i<j} a_i a_j [b_i, b_j]`` over the adapted basis."""
        dim = self.n.dim
        out = la.zeros(dim)
        for i in range(self.nv):
            for j in range(i + 1, self.nv):
                if a[i] and a[j]:
                    out = la.add(out, la.scale(a[i] * a[j] / 2, self.n.bracket(self.basis[i], self.basis[j])))
        return out

    def log2(self, a: Sequence[Fraction]) -> Vector:
        """Second-kind coordinates to exponential coordinates."""
        a = la.vec(a)
        x = la.lincomb(a, self.basis, self.n.dim)
        return la.add(x, self._correction(a))

    def exp2(self, x: Sequence[Fraction]) -> Vector:
        """Exponential coordinates to second-kind coordinates."""
        x = la.vec(x)
        coords = la.matvec(self._to_adapted, x)
        # the correction lies in z, so the v-part of a is read off directly
        a_v = tuple(coords[: self.nv]) + la.zeros(len(coords) - self.nv)
        corr = la.matvec(self._to_adapted, self._correction(a_v))
        return tuple(c - k if i >= self.nv else c for i, (c, k) in enumerate(zip(coords, corr)))
