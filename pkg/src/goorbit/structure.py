"""Structure of G.O. spaces: o-algebra, Levi/radical interplay,
Iwasawa decomposition, the S x N splitting and the submersion picture."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg as la
from .eigen import sym_eigen
from .lie import (
    LeviData, LieAlgebra, PreconditionError, VerificationError, center, centralizer,
    killing, levi, series,
)
from .linalg import Matrix, Subspace, Vector
from .nilmanifold import NilmanifoldSpec
from .report import Report
from .space import (
    HomogeneousSpaceSpec, NormalizerData, compatible_triple_check, describe,
    nilrad_transitivity, normalizer_data, skew_witness,
)

ROOT_DENOMINATOR = 64
ROOT_TOL = 1e-9


class StructureError(ValueError):
    def __init__(self, message: str, report: Report | None = None):
        super().__init__(message)
        self.report = report


# ---------------------------------------------------------------------------
# o-algebra, gnc, thm.nil content
# ---------------------------------------------------------------------------


def o_algebra(spec: HomogeneousSpaceSpec, ld: LeviData | None = None) -> tuple[Subspace, Report]:
    """``{Y : ad(Y)|Nil skew for the metric restricted to Nil}``, with checks."""
    g = spec.g
    ld = ld or levi(g)
    nil = ld.nilradical
    rep = Report("o-algebra")
    if not spec.m.contains(nil):
        rep.check("nil_in_m", False, "nilradical is not contained in m")
        raise StructureError("nilradical not contained in m", rep)
    nb = nil.basis

    def cond(y):
        imgs = [g.bracket(y, x) for x in nb]
        return [
            spec.inner(imgs[i], nb[j]) + spec.inner(nb[i], imgs[j])
            for i in range(len(nb)) for j in range(i, len(nb))
        ]

    o = la.restricted_kernel(g.whole, cond)
    rep.value("dim_o", o.dim)
    rep.check("o_subalgebra", g.is_subalgebra(o))
    rep.check("h_in_o", o.contains(spec.h))
    p = la.orthocomplement(spec.ambient_ip, nil, spec.m)
    rep.value("dim_p", p.dim)
    spans = (o + nil) == g.whole
    if spec.flags.get("go"):
        rep.check("p_in_o", o.contains(p))
        rep.check("g_is_o_plus_nil", spans)
    else:
        rep.value("p_in_o", o.contains(p))
        rep.value("g_is_o_plus_nil", spans)
    return o, rep


def gnc_check(spec: HomogeneousSpaceSpec, ld: LeviData | None = None) -> Report:
    g = spec.g
    ld = ld or levi(g)
    rep = Report("gnc")
    rep.value("dim_levi_nc", ld.levi_nc.dim)
    rep.value("dim_radical", ld.radical.dim)
    bad = next(
        ((x, y) for x in ld.levi_nc.basis for y in ld.radical.basis if any(g.bracket(x, y))), None
    )
    rep.check(
        "levi_nc_commutes_with_radical", bad is None,
        "" if bad is None else f"[{describe(g, bad[0])}, {describe(g, bad[1])}] != 0",
    )
    return rep


def thm_nil_check(spec: HomogeneousSpaceSpec, ld: LeviData | None = None,
                  nd: NormalizerData | None = None) -> Report:
    g = spec.g
    ld = ld or levi(g)
    nd = nd or normalizer_data(spec)
    rep = Report("thm-nil")
    nt = nilrad_transitivity(spec, ld, nd)
    rep.add("transitivity", nt)
    if nt["skew_hypothesis"].ok is False:
        rep.value("applicable", False)
        rep.value("note", "skew hypothesis fails, so the space is not G.O.")
        return rep
    rep.value("applicable", True)
    step = series(g, ld.nilradical).step
    f_abelian = g.commute(nd.f, nd.f)
    rep.value("nil_step", step)
    rep.check("nil_plus_center_f_step_at_most_2", step <= 2)
    rep.value("f_abelian", f_abelian)
    return rep


# ---------------------------------------------------------------------------
# Cartan and Iwasawa
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CartanData:
    levi_nc: Subspace
    k: Subspace
    p: Subspace
    theta: Matrix  # row i: theta(levi_nc.basis[i])
    report: Report

    def apply(self, x: Sequence[Fraction]) -> Vector:
        c = self.levi_nc.coordinates(x)
        if c is None:
            raise PreconditionError("vector not in levi_nc")
        return la.lincomb(c, self.theta, len(x))


def _cartan(g: LieAlgebra, levi_nc: Subspace, k: Subspace, p: Subspace) -> CartanData:
    n = g.dim
    rep = Report("cartan")
    b = killing(g)
    ok_split = la.is_direct_sum(k, p) and (k + p) == levi_nc
    rep.check("k_plus_p", ok_split)
    if not ok_split:
        raise StructureError("k and p do not split levi_nc", rep)
    theta = []
    for x in levi_nc.basis:
        stacked = k.basis + p.basis
        coeffs = la.solve(la.transpose(stacked), x, len(stacked))
        xk = la.lincomb(coeffs[: k.dim], k.basis, n)
        xp = la.lincomb(coeffs[k.dim:], p.basis, n)
        theta.append(la.sub(xk, xp))
    rep.check("kk_in_k", k.contains(g.bracket_space(k, k)))
    rep.check("kp_in_p", p.contains(g.bracket_space(k, p)))
    rep.check("pp_in_k", k.contains(g.bracket_space(p, p)))
    btheta = tuple(
        tuple(-la.bilinear(b, x, t) for t in theta) for x in levi_nc.basis
    )
    rep.check("b_theta_positive_definite", la.is_positive_definite(btheta) if levi_nc.dim else True)
    data = CartanData(levi_nc, k, p, tuple(theta), rep)
    # theta is an involutive automorphism
    for x in levi_nc.basis:
        if data.apply(data.apply(x)) != x:
            raise VerificationError("theta is not an involution")
    if not rep.ok:
        raise StructureError("Cartan data failed verification", rep)
    return data


def cartan_from_k(g: LieAlgebra, levi_nc: Subspace, k: Subspace) -> CartanData:
    """Cartan decomposition with the given ``k``; ``p`` is its Killing complement."""
    if not levi_nc.contains(k):
        raise PreconditionError("k must lie in levi_nc")
    p = la.orthocomplement(killing(g), k, levi_nc)
    return _cartan(g, levi_nc, k, p)


def cartan_from_theta(g: LieAlgebra, levi_nc: Subspace, theta: Sequence[Sequence]) -> CartanData:
    """Cartan data from an ambient matrix ``theta`` (acting on column vectors)."""
    t = la.mat(theta)
    k = la.restricted_kernel(levi_nc, lambda x: la.sub(la.matvec(t, x), x))
    p = la.restricted_kernel(levi_nc, lambda x: la.add(la.matvec(t, x), x))
    data = _cartan(g, levi_nc, k, p)
    for x, tx in zip(levi_nc.basis, data.theta):
        if la.matvec(t, x) != tx:
            raise VerificationError("supplied theta differs from the eigenspace involution")
    for x in levi_nc.basis:
        for y in levi_nc.basis:
            if la.matvec(t, g.bracket(x, y)) != g.bracket(la.matvec(t, x), la.matvec(t, y)):
                raise StructureError("theta is not an automorphism", data.report)
    return data


@dataclass(frozen=True)
class Root:
    values: Vector  # alpha(a_i) over the basis of a
    values_float: tuple[float, ...]
    multiplicity: int
    space: Subspace
    space_float: np.ndarray  # eigenvectors (columns, ambient coordinates) from the float solve


@dataclass(frozen=True)
class IwasawaData:
    k: Subspace
    a: Subspace
    a_basis: Matrix  # greedy basis, in the order found
    roots: tuple[Root, ...]
    n_plus: Subspace
    s: Subspace
    regular: Vector
    report: Report


def maximal_abelian(g: LieAlgebra, p: Subspace) -> list[Vector]:
    """Greedy maximal abelian subspace of ``p`` via centralizer chains."""
    chosen: list[Vector] = []
    while True:
        a = Subspace.span(chosen, g.dim) if chosen else Subspace.zero(g.dim)
        c = centralizer(g, a, p) if chosen else p
        if c == a:
            return chosen
        nxt = next(v for v in c.basis if v not in a)
        chosen.append(nxt)


def _recognize(x: float) -> Fraction:
    r = Fraction(x).limit_denominator(ROOT_DENOMINATOR)
    if abs(float(r) - x) > ROOT_TOL * max(1.0, abs(x)):
        raise StructureError(f"eigenvalue {x!r} is not recognized as a rational")
    return r


def _regular_candidates(r: int):
    if r == 1:
        yield (Fraction(1),)
        return
    t = 2
    while t < 50:
        yield tuple(Fraction(t) ** i for i in range(r))
        yield tuple(Fraction(i + 1) * t for i in range(r))
        t += 1


def _try_roots(g: LieAlgebra, levi_nc: Subspace, a_basis: Sequence[Vector], coeffs: Sequence[Fraction],
               gram_theta: Matrix):
    """Eigen-decomposition of ad(H) on levi_nc; ``None`` if H is not generic."""
    n = g.dim
    hvec = la.lincomb(coeffs, a_basis, n)
    a = Subspace.span(a_basis, n)
    if centralizer(g, Subspace.span([hvec], n), levi_nc) != centralizer(g, a, levi_nc):
        return None
    # matrix of ad(H) on levi_nc coordinates
    mcols = [levi_nc.coordinates(g.bracket(hvec, x)) for x in levi_nc.basis]
    m_ex = la.transpose(mcols)
    mf = np.array(m_ex, dtype=float)
    gf = np.array(gram_theta, dtype=float)
    lchol = np.linalg.cholesky(gf)  # G = L L^T
    # ad(H) is self-adjoint for G: G M = M^T G, so L^T M L^{-T} is symmetric
    sym = lchol.T @ mf @ np.linalg.inv(lchol.T)
    sym = 0.5 * (sym + sym.T)
    w, v = sym_eigen(sym, tol=1e-13)
    vecs = np.linalg.inv(lchol.T) @ v  # eigenvectors in levi_nc coordinates
    lams: list[Fraction] = []
    for x in w:
        r = _recognize(float(x))
        if r not in lams:
            lams.append(r)
    d = levi_nc.dim
    spaces = []
    for lam in lams:
        shifted = la.mat_sub(m_ex, la.mat_scale(lam, la.identity(d)))
        ker = la.kernel(la.matmul(shifted, shifted), d)
        amb = Subspace.span([levi_nc.from_coordinates(c) for c in ker.basis], n)
        idx = [i for i, x in enumerate(w) if abs(x - float(lam)) <= 1e-6 * max(1.0, abs(float(lam)))]
        fl = np.array(levi_nc.basis, dtype=float).T @ vecs[:, idx]
        spaces.append((lam, amb, fl))
    if sum(s.dim for _, s, _ in spaces) != d:
        raise StructureError("eigenspaces do not exhaust levi_nc")
    roots = []
    zero_space = None
    for lam, space, fl in spaces:
        x0 = space.basis[0]
        vals = []
        for ai in a_basis:
            img = g.bracket(ai, x0)
            piv = next(i for i, c in enumerate(x0) if c)
            alpha = img[piv] / x0[piv]
            if any(g.bracket(ai, x) != la.scale(alpha, x) for x in space.basis):
                return None
            vals.append(alpha)
        if lam == 0:
            zero_space = space
            continue
        roots.append(Root(tuple(vals), tuple(float(v) for v in vals), space.dim, space, fl))
    roots.sort(key=lambda r: (-float(la.dot(r.values, coeffs)), r.values))
    return hvec, roots, zero_space


def iwasawa(g: LieAlgebra, cartan: CartanData, regular: Sequence | None = None) -> IwasawaData:
    """Iwasawa decomposition ``levi_nc = k + a + n_plus`` with exact root spaces."""
    n = g.dim
    levi_nc, k, p = cartan.levi_nc, cartan.k, cartan.p
    rep = Report("iwasawa")
    if levi_nc.is_zero():
        z = Subspace.zero(n)
        rep.value("dims_k_a_n", (0, 0, 0))
        return IwasawaData(z, z, (), (), z, z, (), rep)
    b = killing(g)
    if la.is_negative_definite(la.gram(b, levi_nc.basis)):
        raise PreconditionError("levi_nc is compact (Killing form negative definite)")
    a_basis = maximal_abelian(g, p)
    a = Subspace.span(a_basis, n)
    gram_theta = tuple(
        tuple(-la.bilinear(b, x, t) for t in cartan.theta) for x in levi_nc.basis
    )
    if regular is not None:
        coeffs = tuple(la.frac(c) if not isinstance(c, float) else Fraction(c).limit_denominator(10**6) for c in regular)
        found = _try_roots(g, levi_nc, a_basis, coeffs, gram_theta)
        if found is None:
            raise StructureError("regular vector is annihilated by a root or not generic")
    else:
        found = None
        for coeffs in _regular_candidates(len(a_basis)):
            found = _try_roots(g, levi_nc, a_basis, coeffs, gram_theta)
            if found is not None:
                break
        if found is None:
            raise StructureError("no generic element found in a")
    hvec, roots, zero_space = found
    pos = [r for r in roots if la.dot(r.values, coeffs) > 0]
    n_plus = la.subspace_sum(*(r.space for r in pos), ambient_dim=n)
    s = a + n_plus
    rep.value("dims_k_a_n", (k.dim, a.dim, n_plus.dim))
    rep.value("regular", describe(g, hvec))
    for r in roots:
        rep.value(f"root {la.format_vector(r.values)}", f"multiplicity {r.multiplicity}")
    rep.check("a_abelian", g.commute(a, a))
    rep.check("a_maximal_abelian_in_p", centralizer(g, a, p) == a)
    rep.check("k_a_n_direct", la.is_direct_sum(k, a, n_plus) and (k + a + n_plus) == levi_nc)
    rep.check("a_normalizes_n", n_plus.contains(g.bracket_space(a, n_plus)))
    rep.check("n_nilpotent", series(g, n_plus).is_nilpotent)
    rep.check("s_solvable_subalgebra", g.is_subalgebra(s) and series(g, s).is_solvable)
    if not rep.ok:
        raise StructureError("Iwasawa verification failed", rep)
    return IwasawaData(k, a, tuple(a_basis), tuple(roots), n_plus, s, hvec, rep)


# ---------------------------------------------------------------------------
# S x N decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RnDecomposition:
    l: Subspace
    levi_data: LeviData
    cartan: CartanData
    iwasawa: IwasawaData
    u: Subspace
    f: Subspace
    claim_ok: bool
    s_commutes_nil: bool
    N_data: LieAlgebra
    ev_basis: Matrix  # images in m of the basis of u (+) f
    pullback_ip: Matrix
    report: Report


def l_algebra(spec: HomogeneousSpaceSpec, nd: NormalizerData | None = None) -> Subspace:
    nd = nd or normalizer_data(spec)
    return spec.h + nd.c_m_h


def is_rn_type(spec: HomogeneousSpaceSpec) -> bool:
    l = l_algebra(spec)
    return spec.h.contains(spec.g.bracket_space(l, l))


def rn_decompose(spec: HomogeneousSpaceSpec, ld: LeviData | None = None,
                 cartan: CartanData | None = None, theta: Sequence[Sequence] | None = None) -> RnDecomposition:
    g = spec.g
    n = g.dim
    nd = normalizer_data(spec)
    l = spec.h + nd.c_m_h
    if not spec.h.contains(g.bracket_space(l, l)):
        raise PreconditionError("[l, l] is not contained in h (space not of R^n type)")
    rep = Report("rn-decomposition")
    rep.value("dim_l", l.dim)
    f = nd.f
    rep.check("f_abelian", g.commute(f, f))
    ld = ld or levi(g)
    comp = compatible_triple_check(spec, l, ld)
    rep.add("compatibility", comp)
    if not comp.ok:
        raise StructureError("Levi factor is not compatible with h", rep)
    if cartan is None:
        if theta is not None:
            cartan = cartan_from_theta(g, ld.levi_nc, theta)
        else:
            cartan = cartan_from_k(g, ld.levi_nc, l & ld.levi_nc)
    rep.add("cartan", cartan.report)
    iw = iwasawa(g, cartan)
    rep.add("iwasawa", iw.report)
    nil = ld.nilradical
    u = iw.s + nil
    rep.value("dim_s", iw.s.dim)
    rep.value("dim_nil", nil.dim)
    rep.value("dim_u", u.dim)
    rep.value("dim_f", f.dim)
    rep.check("u_subalgebra", g.is_subalgebra(u))
    hf = spec.h + f
    claim = (
        la.is_direct_sum(spec.h, u, f)
        and (hf + u) == g.whole
    )
    rep.check("claim_g_is_h_u_f_direct", claim)
    rep.check("l_cap_u_is_center", (l & u) == center(g))
    rep.check("h_f_cap_u_zero", (hf & u).is_zero())
    s_comm = g.commute(iw.s, nil)
    rep.check("s_commutes_nil", s_comm)
    nil_alg = g.restrict(nil)
    N = nil_alg.direct_sum(LieAlgebra.abelian(f.dim)) if f.dim else nil_alg
    step = series(N).step
    rep.value("N_dim", N.dim)
    rep.value("N_step", step)
    if spec.flags.get("go"):
        rep.check("N_step_at_most_2", step <= 2)
    # evaluation map u (+) f -> m: u acts on the left, f by right translation
    ev = [spec.proj_m(x) for x in u.basis] + [la.scale(-1, y) for y in f.basis]
    pull = tuple(tuple(spec.inner(x, y) for y in ev) for x in ev)
    rep.check("pullback_positive_definite", la.is_positive_definite(pull))
    if not rep.ok:
        raise StructureError("R^n decomposition failed verification", rep)
    return RnDecomposition(l, ld, cartan, iw, u, f, claim, s_comm, N, tuple(ev), pull, rep)


def s_not_orthogonal_check(spec: HomogeneousSpaceSpec, rn: RnDecomposition | None = None) -> Report:
    """Decompose ``X in s`` as ``X_h + X_p + X_rest`` and evaluate the pairing of
    ``ev(s)`` with the evaluated nilpotent factor ``Nil + f``."""
    g = spec.g
    rn = rn or rn_decompose(spec)
    rep = Report("s-not-orthogonal")
    nil = rn.levi_data.nilradical
    p = rn.cartan.p
    rest = [spec.proj_m(x) for x in nil.basis] + [la.scale(-1, y) for y in rn.f.basis]
    rest_space = Subspace.span(rest, g.dim)
    nonzero = False
    for x in rn.iwasawa.s.basis:
        xh, xm = spec.split(x)
        stacked = p.basis + rest_space.basis
        coeffs = la.solve(la.transpose(stacked), xm, len(stacked)) if stacked else None
        if coeffs is None:
            raise StructureError("m-component not in p + Nil + f", rep)
        xp = la.lincomb(coeffs[: p.dim], p.basis, g.dim)
        xr = la.lincomb(coeffs[p.dim:], rest_space.basis, g.dim)
        rep.value(f"X = {describe(g, x)}", f"X_h = {describe(g, xh)}; X_p = {describe(g, xp)}; X_rest = {describe(g, xr)}")
        pair = tuple(spec.inner(xm, y) for y in rest)
        rep.value(f"<ev({describe(g, x)}), ev(Nil+f)>", pair)
        nonzero = nonzero or any(pair)
    rep.check("pairing_nonzero", nonzero)
    return rep


# ---------------------------------------------------------------------------
# Submersion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubmersionData:
    q: Subspace
    levi_nc: Subspace
    k: Subspace
    p: Subspace
    base_ip: Matrix  # ip restricted to p.basis
    fiber: NilmanifoldSpec
    case: int
    report: Report


def submersion_decompose(spec: HomogeneousSpaceSpec, rn: RnDecomposition | None = None) -> SubmersionData:
    g = spec.g
    rn = rn or rn_decompose(spec)
    if not rn.f.is_zero():
        raise PreconditionError("f is nonzero: pass the enlarged isometry-algebra spec")
    ld = rn.levi_data
    nil, rad = ld.nilradical, ld.radical
    k, p = rn.cartan.k, rn.cartan.p
    rep = Report("submersion")
    q = k + ld.levi_cp + rad
    rep.check("q_is_k_cp_rad", q == spec.h + nil)
    rep.check("m_is_p_plus_nil", la.is_direct_sum(p, nil) and (p + nil) == spec.m)
    rep.check("p_perp_nil", not any(spec.inner(x, y) for x in p.basis for y in nil.basis))
    rep.check("k_commutes_nil", g.commute(k, nil))
    rep.check("base_symmetric_pair", k.contains(g.bracket_space(p, p)))
    if rad.is_zero():
        case = 1
    elif ld.levi_nc.is_zero():
        case = 2
    else:
        case = 3
    rep.value("case", case)
    rep.value("base_dim", p.dim)
    rep.value("fiber_dim", nil.dim)
    base_ip = la.gram(spec.ambient_ip, p.basis)
    fiber_alg = g.restrict(nil, tuple(describe(g, x) if sum(1 for c in x if c) == 1 else f"n{i + 1}"
                                      for i, x in enumerate(nil.basis)))
    fiber_ip = la.gram(spec.ambient_ip, nil.basis)
    fiber = NilmanifoldSpec.create(fiber_alg, fiber_ip, name=f"{spec.name}/fiber",
                                   flags={"go": True} if spec.flags.get("go") else {})
    rep.value("fiber_step", fiber.step)
    if not rep.ok:
        raise StructureError("submersion verification failed", rep)
    return SubmersionData(q, ld.levi_nc, k, p, base_ip, fiber, case, rep)


# ---------------------------------------------------------------------------
# Consolidated report
# ---------------------------------------------------------------------------


def decompose(spec: HomogeneousSpaceSpec, theta: Sequence[Sequence] | None = None,
              levi_candidate: Subspace | None = None) -> Report:
    """Radical, nilradical, Levi split, Iwasawa data and, for R^n-type spaces,
    the S x N and submersion data."""
    g = spec.g
    rep = Report(f"decompose {spec.name}".strip())
    ld = levi(g, levi_candidate)
    alg = rep.add("algebra", Report("algebra"))
    alg.value("dim_g", g.dim)
    alg.value("radical", ld.radical)
    alg.value("nilradical", ld.nilradical)
    alg.value("levi", ld.levi)
    alg.value("levi_nc", ld.levi_nc)
    alg.value("levi_cp", ld.levi_cp)
    nd = normalizer_data(spec)
    rep.add("normalizer", nd.report)
    rep.add("gnc", gnc_check(spec, ld))
    rep.add("thm_nil", thm_nil_check(spec, ld, nd))
    if not is_rn_type(spec):
        rep.value("rn_type", False)
        return rep
    rep.value("rn_type", True)
    try:
        rn = rn_decompose(spec, ld, theta=theta)
    except StructureError as exc:
        if exc.report is not None:
            rep.add("rn", exc.report)
        rep.check("rn_decompose", False, str(exc))
        return rep
    rep.add("rn", rn.report)
    if rn.f.is_zero():
        try:
            sub = submersion_decompose(spec, rn)
        except StructureError as exc:
            rep.add("submersion", exc.report)
            return rep
        rep.add("submersion", sub.report)
    else:
        rep.value("submersion", "skipped: f is nonzero")
    return rep
