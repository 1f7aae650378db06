"""Geodesic vectors and geodesic-orbit verdicts."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .lie import LieAlgebra, PreconditionError, VerificationError, centralizer, quotient
from .linalg import Matrix, Subspace, Vector
from .report import Report
from .space import HomogeneousSpaceSpec, describe, skew_witness

SAMPLE_BOUND = 7


# ---------------------------------------------------------------------------
# Per-direction solving
# ---------------------------------------------------------------------------


def _system(spec: HomogeneousSpaceSpec, x: Vector) -> tuple[Matrix, Vector]:
    """Rows j: sum_a z_a <[A_a, Y_j]_m, X> = -<[X, Y_j]_m, X>."""
    hb = spec.h.basis
    rows, rhs = [], []
    for y in spec.m.basis:
        rows.append(tuple(spec.inner(spec.bracket_m(a, y), x) for a in hb))
        rhs.append(-spec.inner(spec.bracket_m(x, y), x))
    return tuple(rows), tuple(rhs)


def residuals(spec: HomogeneousSpaceSpec, x: Sequence[Fraction], z: Sequence[Fraction]) -> Vector:
    """``<[X+Z, Y_j]_m, X>`` over the basis of m."""
    xz = la.add(x, z)
    return tuple(spec.inner(spec.bracket_m(xz, y), x) for y in spec.m.basis)


@dataclass(frozen=True)
class GeodesicVectorCertificate:
    X: Vector
    Z: Vector
    residuals: Vector

    def verify(self, spec: HomogeneousSpaceSpec) -> bool:
        return (
            self.Z in spec.h
            and residuals(spec, self.X, self.Z) == self.residuals
            and not any(self.residuals)
        )


@dataclass(frozen=True)
class Infeasibility:
    """``y A = 0`` but ``y . b != 0`` for the system ``A z = b`` of direction X."""

    X: Vector
    y: Vector
    value: Fraction  # y . b

    def verify(self, spec: HomogeneousSpaceSpec) -> bool:
        a, b = _system(spec, self.X)
        ya = [sum((yi * row[c] for yi, row in zip(self.y, a)), Fraction(0)) for c in range(spec.h.dim)]
        return not any(ya) and la.dot(self.y, b) == self.value != 0


def solve_direction(spec: HomogeneousSpaceSpec, x: Sequence[Fraction]) -> GeodesicVectorCertificate | Infeasibility:
    x = la.vec(x)
    if x not in spec.m:
        raise PreconditionError("X must lie in m")
    a, b = _system(spec, x)
    coeffs = la.solve(a, b, spec.h.dim)
    if coeffs is None:
        y = la.inconsistency_certificate(a, b)
        return Infeasibility(x, y, la.dot(y, b))
    z = la.lincomb(coeffs, spec.h.basis, spec.g.dim)
    return GeodesicVectorCertificate(x, z, residuals(spec, x, z))


def geodesic_vector(spec: HomogeneousSpaceSpec, x: Sequence[Fraction]) -> GeodesicVectorCertificate | None:
    """A ``Z`` in h making ``X + Z`` a geodesic vector, or ``None``."""
    out = solve_direction(spec, x)
    return out if isinstance(out, GeodesicVectorCertificate) else None


# ---------------------------------------------------------------------------
# Structural certificates
# ---------------------------------------------------------------------------


def is_symmetric_pair(spec: HomogeneousSpaceSpec) -> bool:
    return spec.h.contains(spec.g.bracket_space(spec.m, spec.m))


def nr_defect(spec: HomogeneousSpaceSpec):
    """First basis triple violating ``<[X,Y]_m,W> + <Y,[X,W]_m> = 0`` as
    ``(i, j, k, value)``, or ``None``."""
    mb = spec.m.basis
    d = len(mb)
    for i in range(d):
        for j in range(d):
            xy = spec.bracket_m(mb[i], mb[j])
            for k in range(d):
                val = spec.inner(xy, mb[k]) + spec.inner(mb[j], spec.bracket_m(mb[i], mb[k]))
                if val:
                    return i, j, k, val
    return None


@dataclass(frozen=True)
class NaturalReductivity:
    """``phi`` maps m-coordinates to h-vectors; the complement
    ``{X + phi(X)}`` carries a naturally reductive metric.  ``phi = 0`` means
    the given decomposition itself works."""

    holds: bool
    phi: Matrix | None  # row i: phi(m.basis[i])
    shifted: bool

    def Z(self, spec: HomogeneousSpaceSpec, x: Sequence[Fraction]) -> Vector:
        coords = spec.m_coords(x)
        return la.lincomb(coords, self.phi, spec.g.dim)


def shifted_spec(spec: HomogeneousSpaceSpec, phi: Matrix) -> HomogeneousSpaceSpec:
    """Same space with complement ``{X + phi(X)}`` and the transported metric."""
    rows = [la.add(x, p) for x, p in zip(spec.m.basis, phi)]
    return HomogeneousSpaceSpec.create(
        spec.g, spec.h.basis, rows, spec.ip, name=spec.name, flags=spec.flags, check=True
    )


def natural_reductivity(spec: HomogeneousSpaceSpec) -> NaturalReductivity:
    """Naturally reductive on the given complement, or on a shifted one.

    The shifted complement ``{X + phi(X)}`` must be ad(h)-invariant, which
    forces ``phi`` to be h-equivariant; with that, the identity becomes linear in
    ``phi`` because ``[h, m]`` lies in m.  The solution is re-verified on the
    shifted spec.
    """
    g = spec.g
    n = g.dim
    d, k = spec.m.dim, spec.h.dim
    if nr_defect(spec) is None:
        return NaturalReductivity(True, tuple(la.zeros(n) for _ in range(d)), False)
    if k == 0:
        return NaturalReductivity(False, None, False)
    mb, hb = spec.m.basis, spec.h.basis
    nunk = d * k  # unknown p[i][a]: phi(X_i) = sum_a p[i][a] A_a

    def idx(i, a):
        return i * k + a

    rows, rhs = [], []
    # equivariance: phi([A_b, X_i]) = [A_b, phi(X_i)], in h-coordinates
    for b, ab in enumerate(hb):
        brs = [spec.h.coordinates(g.bracket(ab, hb[a])) for a in range(k)]
        if any(v is None for v in brs):
            raise VerificationError("h is not a subalgebra")
        for i, xi in enumerate(mb):
            coords = spec.m_coords(spec.bracket_m(ab, xi))
            for c in range(k):
                row = [Fraction(0)] * nunk
                for j, cj in enumerate(coords):
                    row[idx(j, c)] += cj
                for a in range(k):
                    row[idx(i, a)] -= brs[a][c]
                rows.append(row)
                rhs.append(Fraction(0))
    # identity on the shifted complement, linear in phi:
    # T(X,Y) = [X,Y]_m + [X, phi Y] + [phi X, Y]
    ad_h_m = [[spec.m_coords(spec.bracket_m(a, x)) for x in mb] for a in hb]  # [A_a, X_i]
    ip = spec.ip
    for i in range(d):
        for j in range(d):
            for l in range(d):
                row = [Fraction(0)] * nunk
                base = la.bilinear(ip, spec.m_coords(spec.bracket_m(mb[i], mb[j])), la.unit(d, l)) + la.bilinear(
                    ip, la.unit(d, j), spec.m_coords(spec.bracket_m(mb[i], mb[l]))
                )
                for a in range(k):
                    # <[X_i, phi X_j], X_l> = -p[j][a] <[A_a, X_i], X_l>
                    row[idx(j, a)] -= la.bilinear(ip, ad_h_m[a][i], la.unit(d, l))
                    # <[phi X_i, X_j], X_l> = p[i][a] <[A_a, X_j], X_l>
                    row[idx(i, a)] += la.bilinear(ip, ad_h_m[a][j], la.unit(d, l))
                    # <X_j, [X_i, phi X_l]> = -p[l][a] <X_j, [A_a, X_i]>
                    row[idx(l, a)] -= la.bilinear(ip, la.unit(d, j), ad_h_m[a][i])
                    # <X_j, [phi X_i, X_l]> = p[i][a] <X_j, [A_a, X_l]>
                    row[idx(i, a)] += la.bilinear(ip, la.unit(d, j), ad_h_m[a][l])
                rows.append(row)
                rhs.append(-base)
    sol = la.solve(rows, rhs, nunk)
    if sol is None:
        return NaturalReductivity(False, None, False)
    phi = tuple(la.lincomb(sol[i * k:(i + 1) * k], hb, n) for i in range(d))
    if nr_defect(shifted_spec(spec, phi)) is not None:
        raise VerificationError("shifted complement failed the naturally reductive identity")
    return NaturalReductivity(True, phi, True)


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NotGO:
    witness: Infeasibility
    samples_tried: int
    seed: int | None

    name = "NotGO"

    def verify(self, spec: HomogeneousSpaceSpec) -> bool:
        return self.witness.verify(spec)


@dataclass(frozen=True)
class ProbablyGO:
    samples: int
    seed: int
    feasible: int

    name = "ProbablyGO"

    def verify(self, spec: HomogeneousSpaceSpec) -> bool:
        return sample_directions(spec, self.samples, self.seed)[0] is None


@dataclass(frozen=True)
class ProvedGO:
    kind: str  # "symmetric" | "naturally-reductive" | "user-theorem"
    nr: NaturalReductivity | None = None
    samples: int = 0
    seed: int | None = None
    feasible: int = 0

    name = "ProvedGO"

    def verify(self, spec: HomogeneousSpaceSpec) -> bool:
        if self.kind == "symmetric":
            return is_symmetric_pair(spec)
        if self.kind == "naturally-reductive":
            nr = natural_reductivity(spec)
            return nr.holds
        return bool(spec.flags.get("go_theorem"))


Verdict = NotGO | ProbablyGO | ProvedGO


def sample_vector(spec: HomogeneousSpaceSpec, rng: random.Random) -> Vector:
    coords = [
        Fraction(rng.randint(-SAMPLE_BOUND, SAMPLE_BOUND), rng.randint(1, SAMPLE_BOUND))
        for _ in range(spec.m.dim)
    ]
    return spec.from_m(coords)


def sample_directions(spec: HomogeneousSpaceSpec, samples: int, seed: int, probe_basis: bool = True):
    """Solve the basis directions, then ``samples`` random ones.

    Returns ``(infeasibility or None, number of random samples tried, feasible count)``.
    """
    if probe_basis:
        for x in spec.m.basis:
            out = solve_direction(spec, x)
            if isinstance(out, Infeasibility):
                return out, 0, 0
    rng = random.Random(seed)
    feasible = 0
    for t in range(samples):
        out = solve_direction(spec, sample_vector(spec, rng))
        if isinstance(out, Infeasibility):
            return out, t + 1, feasible
        feasible += 1
    return None, samples, feasible


def check_go(spec: HomogeneousSpaceSpec, samples: int = 100, seed: int = 0, structural: bool = True) -> Verdict:
    """Structural certificates first, then exact solving on sampled directions.

    Sampling runs in every case; a sampled infeasible direction always wins.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    bad, tried, feasible = sample_directions(spec, samples, seed)
    if bad is not None:
        return NotGO(bad, tried, seed)
    if structural:
        if is_symmetric_pair(spec):
            return ProvedGO("symmetric", None, samples, seed, feasible)
        nr = natural_reductivity(spec)
        if nr.holds:
            return ProvedGO("naturally-reductive", nr, samples, seed, feasible)
        if spec.flags.get("go_theorem"):
            return ProvedGO("user-theorem", None, samples, seed, feasible)
    return ProbablyGO(samples, seed, feasible)


def verdict_report(spec: HomogeneousSpaceSpec, v: Verdict) -> Report:
    g = spec.g
    rep = Report(f"check-go {spec.name}".strip())
    rep.value("verdict", v.name if not isinstance(v, ProvedGO) else f"ProvedGO({v.kind})")
    if isinstance(v, NotGO):
        w = v.witness
        rep.value("witness_X", describe(g, w.X))
        rep.value("witness_m_coords", spec.m_coords(w.X))
        rep.value("certificate_y", w.y)
        rep.value("certificate_value", w.value)
        rep.value("random_samples_tried", v.samples_tried)
        rep.check("witness_reverified", w.verify(spec))
    else:
        rep.value("seed", v.seed)
        rep.value("samples_feasible", f"{v.feasible}/{v.samples}")
        if isinstance(v, ProvedGO) and v.nr is not None:
            rep.value("complement_shifted", v.nr.shifted)
            if v.nr.shifted:
                for x, p in zip(spec.m.basis, v.nr.phi):
                    rep.value(f"phi({describe(g, x)})", describe(g, p))
        rep.check("certificate_reverified", v.verify(spec))
    return rep


# ---------------------------------------------------------------------------
# Necessary conditions and submanifolds
# ---------------------------------------------------------------------------


def skew_consequence(spec: HomogeneousSpaceSpec) -> Report:
    """Every Y in ``C_m(h)`` must act on m by a skew endomorphism on a G.O. space."""
    g = spec.g
    rep = Report("skew consequence")
    c = centralizer(g, spec.h, spec.m)
    rep.value("dim_c_m_h", c.dim)
    witness = None
    for y in c.basis:
        why = skew_witness(spec, y)
        if why is not None:
            witness = (y, why)
            break
    if witness is None:
        rep.check("c_m_h_skew", True)
    else:
        rep.check("c_m_h_skew", False, f"Y = {describe(g, witness[0])}: {witness[1]}")
        rep.value("witness_Y", witness[0])
        if spec.flags.get("go"):
            rep.check("go_claim_consistent", False, "claimed G.O. but a centralizing direction is not skew")
    return rep


def skew_failure(spec: HomogeneousSpaceSpec) -> Vector | None:
    c = centralizer(spec.g, spec.h, spec.m)
    for y in c.basis:
        if skew_witness(spec, y) is not None:
            return y
    return None


def _effective_kernel(g: LieAlgebra, top: Subspace, h: Subspace) -> Subspace:
    """Largest ideal of ``top`` inside ``h``."""
    cur = h
    while True:
        ann = cur.annihilator()
        nxt = la.restricted_kernel(
            cur, lambda a: [la.dot(r, g.bracket(x, a)) for x in top.basis for r in ann]
        )
        if nxt == cur:
            return cur
        cur = nxt


def totally_geodesic_sub(spec: HomogeneousSpaceSpec, q: Subspace, effective: bool = True) -> HomogeneousSpaceSpec:
    """Orbit of the subalgebra ``q`` through the base point, as its own space.

    The ambient algebra is ``q + h`` with isotropy ``h`` and complement
    ``(q + h) & m``.  With ``effective`` the largest ideal inside the isotropy is
    divided out.
    """
    g = spec.g
    if not g.is_subalgebra(q):
        raise PreconditionError("q is not a subalgebra")
    if not q.contains(g.bracket_space(spec.h, q)):
        raise PreconditionError("q is not normalized by h")
    top = q + spec.h
    m2 = top & spec.m
    ip = la.gram(spec.ambient_ip, m2.basis)
    kern = _effective_kernel(g, top, spec.h) if effective else Subspace.zero(g.dim)
    sub = g.restrict(top, tuple(f"q{i + 1}" for i in range(top.dim)))
    to_sub = lambda v: top.coordinates(v)
    kern_s = Subspace.span([to_sub(v) for v in kern.basis], top.dim)
    if kern_s.is_zero():
        alg, proj = sub, (lambda v: v)
    else:
        qa = quotient(sub, kern_s)
        alg, proj = qa.algebra, qa.project
    h_rows = [proj(to_sub(v)) for v in spec.h.basis]
    m_rows = [proj(to_sub(v)) for v in m2.basis]
    flags = {"go": True} if spec.flags.get("go") else {}
    return HomogeneousSpaceSpec.create(
        alg, [r for r in h_rows if any(r)], m_rows, ip, name=f"{spec.name}/sub", flags=flags
    )
