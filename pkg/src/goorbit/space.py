"""Homogeneous spaces at the Lie algebra level: (g, h, m, <,>)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg as la
from .lie import LieAlgebra, LeviData, PreconditionError, center, centralizer, killing, normalizer
from .linalg import Matrix, Subspace, Vector
from .report import Report


class SpecError(ValueError):
    """Raised when space data fails validation; carries the report."""

    def __init__(self, message: str, report: Report | None = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True, eq=False)
class HomogeneousSpaceSpec:
    """Reductive data ``g = h + m`` with an inner product on ``m``.

    ``ip`` is the Gram matrix in the coordinates of ``m.basis`` (the RREF basis).
    Use :meth:`create` to pass the metric in any basis of ``m``.
    """

    g: LieAlgebra
    h: Subspace
    m: Subspace
    ip: Matrix
    name: str = ""
    flags: dict = field(default_factory=dict)

    @classmethod
    def create(
        cls,
        g: LieAlgebra,
        h_rows: Sequence[Sequence] = (),
        m_rows: Sequence[Sequence] | None = None,
        ip: Sequence[Sequence] | None = None,
        name: str = "",
        flags: dict | None = None,
        check: bool = True,
    ) -> "HomogeneousSpaceSpec":
        """Build a spec, with ``ip`` given in the basis ``m_rows``.

        Without ``m_rows`` the Killing complement is used and ``ip`` refers to its
        RREF basis.  ``ip=None`` means the identity in the given basis.
        """
        h = Subspace.span(h_rows, g.dim)
        if m_rows is None:
            m = killing_complement(g, h)
            rows = list(m.basis)
        else:
            rows = [la.vec(r) for r in m_rows]
            m = Subspace.span(rows, g.dim)
            if m.dim != len(rows):
                raise SpecError("complement rows are linearly dependent")
        ip_m = la.identity(len(rows)) if ip is None else la.mat(ip)
        if len(ip_m) != len(rows) or any(len(r) != len(rows) for r in ip_m):
            raise SpecError(f"metric must be {len(rows)}x{len(rows)}")
        coords = tuple(m.coordinates(r) for r in rows)
        cinv = la.inverse(coords)
        ip_rref = la.matmul(la.matmul(cinv, ip_m), la.transpose(cinv))
        spec = cls(g, h, m, ip_rref, name, dict(flags or {}))
        if check:
            rep = validate(spec)
            if not rep.ok:
                bad = ", ".join(c.name for c in rep.failures())
                raise SpecError(f"invalid homogeneous space data ({bad})", rep)
        return spec

    def with_flags(self, **flags) -> "HomogeneousSpaceSpec":
        merged = dict(self.flags)
        merged.update(flags)
        return HomogeneousSpaceSpec(self.g, self.h, self.m, self.ip, self.name, merged)

    @property
    def dim_m(self) -> int:
        return self.m.dim

    @cached_property
    def _splitter(self) -> Matrix | None:
        stacked = self.h.basis + self.m.basis
        if len(stacked) != self.g.dim or la.rank(stacked) != self.g.dim:
            return None
        return la.inverse(la.transpose(stacked))

    def split(self, x: Sequence[Fraction]) -> tuple[Vector, Vector]:
        """``(x_h, x_m)`` with ``x = x_h + x_m``."""
        inv = self._splitter
        if inv is None:
            raise SpecError("g is not the direct sum of h and m")
        coeffs = la.matvec(inv, la.vec(x))
        k = self.h.dim
        n = self.g.dim
        return la.lincomb(coeffs[:k], self.h.basis, n), la.lincomb(coeffs[k:], self.m.basis, n)

    def proj_m(self, x: Sequence[Fraction]) -> Vector:
        return self.split(x)[1]

    def proj_h(self, x: Sequence[Fraction]) -> Vector:
        return self.split(x)[0]

    def m_coords(self, x: Sequence[Fraction]) -> Vector:
        c = self.m.coordinates(x)
        if c is None:
            raise SpecError("vector is not in m")
        return c

    def from_m(self, coords: Sequence) -> Vector:
        return self.m.from_coordinates(la.vec(coords))

    def inner(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
        """Inner product of two ambient vectors lying in ``m``."""
        return la.bilinear(self.ip, self.m_coords(x), self.m_coords(y))

    def bracket_m(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        return self.proj_m(self.g.bracket(x, y))

    @cached_property
    def ambient_ip(self) -> Matrix:
        """Form on g: ``<x_m, y_m>``.  Handy for orthocomplements inside m."""
        n = self.g.dim
        cols = [self.m_coords(self.proj_m(la.unit(n, i))) for i in range(n)]
        return tuple(tuple(la.bilinear(self.ip, cols[i], cols[j]) for j in range(n)) for i in range(n))

    def label(self, x: Sequence[Fraction]) -> str:
        return describe(self.g, x)


def describe(g: LieAlgebra, x: Sequence[Fraction]) -> str:
    """Readable linear combination of basis labels, e.g. ``e1 + 1/2 e3``."""
    parts = []
    for c, name in zip(x, g.labels):
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        term = name if a == 1 else f"{la.format_scalar(a)} {name}"
        parts.append((sign, term))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out


def killing_complement(g: LieAlgebra, h: Subspace) -> Subspace:
    """Killing-orthogonal complement of an isotropy subalgebra ``h``."""
    b = killing(g)
    if not g.is_subalgebra(h):
        raise PreconditionError("h is not a subalgebra")
    if h.dim and not la.is_negative_definite(la.gram(b, h.basis)):
        raise PreconditionError("Killing form is not negative definite on h")
    m = la.orthocomplement(b, h, g.whole)
    if not (la.is_direct_sum(h, m) and (h + m) == g.whole):
        raise PreconditionError("h and its Killing complement do not span g")
    if not m.contains(g.bracket_space(h, m)):
        raise PreconditionError("Killing complement is not ad(h)-invariant")
    return m


def complement_kind(spec: HomogeneousSpaceSpec) -> str:
    """``killing`` if ``m`` is the Killing complement of ``h``, else ``explicit``."""
    try:
        return "killing" if killing_complement(spec.g, spec.h) == spec.m else "explicit"
    except PreconditionError:
        return "explicit"


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _first_pair_outside(g: LieAlgebra, a: Subspace, b: Subspace, target: Subspace):
    for i, x in enumerate(a.basis):
        for j, y in enumerate(b.basis):
            if g.bracket(x, y) not in target:
                return i, j
    return None


def validate(spec: HomogeneousSpaceSpec) -> Report:
    g, h, m = spec.g, spec.h, spec.m
    rep = Report("validation")
    rep.value("complement", complement_kind(spec))
    w = _first_pair_outside(g, h, h, h)
    rep.check("h_subalgebra", w is None,
              "" if w is None else f"[{describe(g, h.basis[w[0]])}, {describe(g, h.basis[w[1]])}] not in h")
    bh = la.gram(killing(g), h.basis)
    rep.check("killing_negative_definite_on_h", la.is_negative_definite(bh) if h.dim else True)
    direct = la.is_direct_sum(h, m) and (h + m) == g.whole
    rep.check("direct_sum", direct, "" if direct else f"dim h + dim m = {h.dim + m.dim}, dim(h+m) = {(h + m).dim}")
    w = _first_pair_outside(g, h, m, m)
    rep.check("h_preserves_m", w is None,
              "" if w is None else f"[{describe(g, h.basis[w[0]])}, {describe(g, m.basis[w[1]])}] not in m")
    sym = la.is_symmetric(spec.ip) and len(spec.ip) == m.dim
    rep.check("ip_symmetric", sym)
    rep.check("ip_positive_definite", sym and la.is_positive_definite(spec.ip))
    if not direct:
        rep.check("ip_ad_h_invariant", None, "needs g = h + m")
        return rep
    witness = ip_invariance_witness(spec)
    if witness is None:
        rep.check("ip_ad_h_invariant", True)
    else:
        a, i, j, val = witness
        rep.check(
            "ip_ad_h_invariant", False,
            f"witness ({describe(g, h.basis[a])}, {describe(g, m.basis[i])}, {describe(g, m.basis[j])}) "
            f"value {la.format_scalar(val)}",
        )
    return rep


def ip_invariance_witness(spec: HomogeneousSpaceSpec):
    """First ``(a, i, j, value)`` with ``<[A_a,X_i],X_j> + <X_i,[A_a,X_j]> != 0``."""
    mb = spec.m.basis
    for a, A in enumerate(spec.h.basis):
        images = [spec.m_coords(spec.bracket_m(A, x)) for x in mb]
        for i in range(len(mb)):
            for j in range(i, len(mb)):
                val = la.bilinear(spec.ip, images[i], la.unit(len(mb), j)) + la.bilinear(
                    spec.ip, la.unit(len(mb), i), images[j]
                )
                if val:
                    return a, i, j, val
    return None


# ---------------------------------------------------------------------------
# Normalizer data
# ---------------------------------------------------------------------------


def skew_conditions(spec: HomogeneousSpaceSpec, y: Sequence[Fraction]) -> list[Fraction]:
    """Linear conditions in ``y``: ``ad(y)`` preserves m and is skew on it."""
    mb = spec.m.basis
    d = len(mb)
    out = []
    images = []
    for x in mb:
        hx, mx = spec.split(spec.g.bracket(y, x))
        out.extend(spec.h.coordinates(hx))
        images.append(spec.m_coords(mx))
    for i in range(d):
        for j in range(i, d):
            out.append(la.bilinear(spec.ip, images[i], la.unit(d, j)) + la.bilinear(spec.ip, la.unit(d, i), images[j]))
    return out


def skew_witness(spec: HomogeneousSpaceSpec, y: Sequence[Fraction]) -> str | None:
    """Why ``ad(y)|m`` fails to be a skew endomorphism of m, or ``None``."""
    g = spec.g
    mb = spec.m.basis
    for x in mb:
        hx, _ = spec.split(g.bracket(y, x))
        if not la.is_zero(hx):
            return f"[{describe(g, y)}, {describe(g, x)}] leaves m"
    for i, x in enumerate(mb):
        for w in mb[i:]:
            val = spec.inner(spec.bracket_m(y, x), w) + spec.inner(x, spec.bracket_m(y, w))
            if val:
                return (
                    f"<[Y,{describe(g, x)}],{describe(g, w)}> + <{describe(g, x)},[Y,{describe(g, w)}]> "
                    f"= {la.format_scalar(val)}"
                )
    return None


@dataclass(frozen=True)
class NormalizerData:
    c_m_h: Subspace
    n_g_h: Subspace
    w_m: Subspace
    center_g: Subspace
    f: Subspace
    report: Report


def normalizer_data(spec: HomogeneousSpaceSpec, f: Subspace | None = None) -> NormalizerData:
    """``C_m(h)``, ``N_g(h)``, the skew part ``w_m`` and a splitting ``w_m = C(g) + f``.

    ``f`` defaults to the ip-orthogonal complement of ``C(g)`` inside ``w_m``.
    """
    g = spec.g
    rep = Report("normalizer")
    c_m_h = centralizer(g, spec.h, spec.m)
    n_g_h = normalizer(g, spec.h)
    rep.check("normalizer_is_h_plus_c_m_h", n_g_h == spec.h + c_m_h)
    rep.check("c_m_h_preserves_m", spec.m.contains(g.bracket_space(c_m_h, spec.m)))
    rep.check("c_m_h_subalgebra", g.is_subalgebra(c_m_h))
    w_m = la.restricted_kernel(c_m_h, lambda y: skew_conditions(spec, y))
    rep.check("w_m_subalgebra", g.is_subalgebra(w_m))
    cg = center(g)
    rep.check("center_in_w_m", w_m.contains(cg))
    if f is None:
        f = la.restricted_kernel(w_m, lambda y: [la.bilinear(spec.ambient_ip, y, c) for c in cg.basis])
        rep.value("f_choice", "ip-orthogonal complement of C(g) in w_m")
    else:
        rep.value("f_choice", "supplied")
    rep.check("w_m_is_center_plus_f", la.is_direct_sum(cg, f) and (cg + f) == w_m)
    rep.check("f_subalgebra", g.is_subalgebra(f))
    rep.value("dim_c_m_h", c_m_h.dim)
    rep.value("dim_w_m", w_m.dim)
    rep.value("dim_center", cg.dim)
    rep.value("dim_f", f.dim)
    return NormalizerData(c_m_h, n_g_h, w_m, cg, f, rep)


# ---------------------------------------------------------------------------
# Transitivity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Transitivity:
    ok: bool
    total: Subspace
    missing: Matrix  # directions of g not reached (standard complement of the span)


def transitivity_check(spec: HomogeneousSpaceSpec, u: Subspace, v: Subspace,
                       ndata: NormalizerData | None = None) -> Transitivity:
    """Is ``h + u + v = g``?  ``u`` must be a subalgebra and ``v`` inside ``f``."""
    g = spec.g
    if not g.is_subalgebra(u):
        raise PreconditionError("u is not a subalgebra")
    if not v.is_zero():
        ndata = ndata or normalizer_data(spec)
        if not ndata.f.contains(v):
            raise PreconditionError("v is not contained in f")
    total = spec.h + u + v
    return Transitivity(total == g.whole, total, total.complement_basis())


def nilrad_transitivity(spec: HomogeneousSpaceSpec, levi_data: LeviData,
                        ndata: NormalizerData | None = None) -> Report:
    """Skewness hypothesis on ``C_m(h)`` and the span ``g = h + Lev + Nil + C(f)``."""
    g = spec.g
    ndata = ndata or normalizer_data(spec)
    rep = Report("nilradical transitivity")
    witness = None
    for y in ndata.c_m_h.basis:
        why = skew_witness(spec, y)
        if why is not None:
            witness = (y, why)
            break
    if witness is None:
        rep.check("skew_hypothesis", True)
    else:
        rep.check("skew_hypothesis", False, f"Y = {describe(g, witness[0])}: {witness[1]}")
        rep.check("span_identity", None, "hypothesis fails")
        return rep
    cf = centralizer(g, ndata.f, ndata.f)
    total = spec.h + levi_data.levi + levi_data.nilradical + cf
    rep.check("span_identity", total == g.whole,
              "" if total == g.whole else f"missing {len(total.complement_basis())} directions")
    rep.value("dim_center_f", cf.dim)
    return rep


def compatible_triple_check(spec: HomogeneousSpaceSpec, l: Subspace, levi_data: LeviData) -> Report:
    """Verify the conclusions required of a Levi factor compatible with ``h`` via ``l``."""
    g = spec.g
    if not g.is_subalgebra(l):
        raise PreconditionError("l is not a subalgebra")
    if not l.contains(spec.h):
        raise PreconditionError("l does not contain h")
    lev, rad = levi_data.levi, levi_data.radical
    rep = Report("compatible triple")
    lr = l & rad
    ll = l & lev
    rep.check("l_splits", la.is_direct_sum(lr, ll) and (lr + ll) == l)
    rep.check("l_rad_abelian", g.commute(lr, lr))
    rep.check("l_rad_commutes_with_levi", g.commute(lr, lev))
    rep.check("l_derived_in_levi", lev.contains(g.bracket_space(l, l)))
    rep.value("compatible", rep.ok)
    return rep
