"""Built-in example spaces with their expected properties."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import linalg as la
from .go import NotGO, ProvedGO, check_go, natural_reductivity, skew_consequence, verdict_report
from .lie import LieAlgebra, LieAlgebraError, levi, series
from .linalg import Matrix, Subspace
from .nilmanifold import (
    NilmanifoldSpec, commuting_blocks_check, invariant_subalgebra_ideal_check, skew_derivations,
    step_bound_check, to_homogeneous_spec,
)
from .report import Report, format_value
from .space import HomogeneousSpaceSpec, SpecError, validate
from .structure import (
    StructureError, gnc_check, is_rn_type, rn_decompose, submersion_decompose, thm_nil_check,
)


class CatalogError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    name: str
    params: tuple
    spec: HomogeneousSpaceSpec
    expected: dict
    nspec: NilmanifoldSpec | None = None
    theta: Matrix | None = None
    blocks: tuple[Subspace, ...] = ()  # subspaces of the nilmanifold algebra
    invariant_subalgebras: tuple[Subspace, ...] = ()
    structure: dict = field(default_factory=dict)  # expected radical/nilradical/levi rows
    matrix_model: str | None = None

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}:" + ",".join(la.format_scalar(Fraction(p)) for p in self.params)


def _sp(g: LieAlgebra, rows) -> Subspace:
    return Subspace.span(rows, g.dim) if rows else Subspace.zero(g.dim)


def _u(n: int, *idx_coeff) -> tuple:
    v = [Fraction(0)] * n
    for i, c in idx_coeff:
        v[i] += Fraction(c)
    return tuple(v)


# ---------------------------------------------------------------------------
# Algebras
# ---------------------------------------------------------------------------


def heisenberg_algebra() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, {(0, 1): {2: 1}}, ("e1", "e2", "e3"))


def sl2_brackets(offset: int = 0) -> dict:
    h, e, f = offset, offset + 1, offset + 2
    return {(h, e): {e: 2}, (h, f): {f: -2}, (e, f): {h: 1}}


def sl2_algebra() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, sl2_brackets(), ("H", "E", "F"))


def so3_algebra() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}}, ("X1", "X2", "X3"))


def e11_algebra() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, {(0, 1): {1: 1}, (0, 2): {2: -1}}, ("e1", "e2", "e3"))


def free_step3_algebra() -> LieAlgebra:
    # x, y, z = [x,y], u = [x,z], w = [y,z]
    return LieAlgebra.from_brackets(
        5, {(0, 1): {2: 1}, (0, 2): {3: 1}, (1, 2): {4: 1}}, ("x", "y", "z", "u", "w")
    )


def _elem(n: int, i: int, j: int) -> list[list[Fraction]]:
    m = [[Fraction(0)] * n for _ in range(n)]
    m[i][j] = Fraction(1)
    return m


def sln_algebra(n: int) -> tuple[LieAlgebra, list]:
    """``sl(n, R)`` with basis ``H_i = E_ii - E_i+1,i+1`` then ``E_ij`` (i != j)."""
    mats, labels = [], []
    for i in range(n - 1):
        m = _elem(n, i, i)
        m[i + 1][i + 1] = Fraction(-1)
        mats.append(m)
        labels.append(f"H{i + 1}")
    for i in range(n):
        for j in range(n):
            if i != j:
                mats.append(_elem(n, i, j))
                labels.append(f"E{i + 1}{j + 1}")
    return LieAlgebra.from_matrices(mats, labels), mats


# ---------------------------------------------------------------------------
# Entries
# ---------------------------------------------------------------------------


def _structure(g, rad, nil, lev):
    return {"radical": _sp(g, rad), "nilradical": _sp(g, nil), "levi": _sp(g, lev)}


def euclidean(n: int = 3) -> CatalogEntry:
    n = int(n)
    if n < 1:
        raise CatalogError("euclidean needs n >= 1")
    g = LieAlgebra.abelian(n, tuple(f"e{i + 1}" for i in range(n)))
    rows = la.identity(n)
    spec = HomogeneousSpaceSpec.create(g, (), rows, None, name=f"euclidean:{n}", flags={"go": True})
    return CatalogEntry(
        "euclidean", (n,), spec,
        {"is_go": True, "verdict": "ProvedGO(symmetric)", "naturally_reductive": True,
         "rn_type": True, "case": 2, "nil_step": 1, "dims": {"levi_nc": 0, "nilradical": n}},
        structure=_structure(g, rows, rows, ()),
        matrix_model="two-step",
    )


def _nil_entry(name: str, nspec: NilmanifoldSpec, expected: dict, blocks=(), inv=(), params=()) -> CatalogEntry:
    spec = to_homogeneous_spec(nspec)
    g = spec.g
    dn = nspec.n.dim
    nil_rows = [la.unit(g.dim, i) for i in range(dn)]
    return CatalogEntry(
        name, params, spec, expected, nspec=nspec,
        blocks=tuple(blocks), invariant_subalgebras=tuple(inv),
        structure=_structure(g, la.identity(g.dim), nil_rows, ()),
        matrix_model="two-step" if nspec.step <= 2 else None,
    )


def heisenberg3() -> CatalogEntry:
    n = heisenberg_algebra()
    nspec = NilmanifoldSpec.create(n, None, name="heisenberg3", flags={"go": True})
    blocks = (Subspace.span([(1, 0, 0), (0, 1, 0)], 3),)
    inv = (Subspace.span([(0, 0, 1)], 3),)
    return _nil_entry(
        "heisenberg3", nspec,
        {"is_go": True, "verdict": "ProvedGO(naturally-reductive)", "naturally_reductive": True,
         "rn_type": True, "case": 2, "nil_step": 2, "dims": {"levi_nc": 0, "nilradical": 3, "h": 1}},
        blocks, inv,
    )


def heisenberg3_anisotropic() -> CatalogEntry:
    n = heisenberg_algebra()
    nspec = NilmanifoldSpec.create(n, la.diag([1, 2, 1]), name="heisenberg3_anisotropic", flags={"go": True})
    # The solver finds a one-dimensional skew derivation algebra here
    # (e1 -> -e2/2, e2 -> e1), so this metric is again G.O.
    blocks = (Subspace.span([(1, 0, 0), (0, 1, 0)], 3),)
    inv = (Subspace.span([(0, 0, 1)], 3),)
    return _nil_entry(
        "heisenberg3_anisotropic", nspec,
        {"is_go": True, "verdict": "ProvedGO(naturally-reductive)", "naturally_reductive": True,
         "rn_type": True, "case": 2, "nil_step": 2, "dims": {"levi_nc": 0, "nilradical": 3, "h": 1}},
        blocks, inv,
    )


def h3_product() -> CatalogEntry:
    h = heisenberg_algebra()
    n = h.direct_sum(h)
    n = LieAlgebra(n.c, ("e1", "e2", "e3", "f1", "f2", "f3"))
    nspec = NilmanifoldSpec.create(n, None, name="h3_product", flags={"go": True})
    blocks = (
        Subspace.span([_u(6, (0, 1)), _u(6, (1, 1))], 6),
        Subspace.span([_u(6, (3, 1)), _u(6, (4, 1))], 6),
    )
    inv = (
        Subspace.span([_u(6, (0, 1)), _u(6, (1, 1)), _u(6, (2, 1))], 6),
        Subspace.span([_u(6, (3, 1)), _u(6, (4, 1)), _u(6, (5, 1))], 6),
        Subspace.span([_u(6, (2, 1)), _u(6, (5, 1))], 6),
    )
    return _nil_entry(
        "h3_product", nspec,
        {"is_go": True, "verdict": "ProvedGO(naturally-reductive)", "naturally_reductive": True,
         "rn_type": True, "case": 2, "nil_step": 2, "dims": {"levi_nc": 0, "nilradical": 6, "h": 2}},
        blocks, inv,
    )


def free_nilpotent_step3() -> CatalogEntry:
    n = free_step3_algebra()
    nspec = NilmanifoldSpec.create(n, None, name="free_nilpotent_step3")
    return _nil_entry(
        "free_nilpotent_step3", nspec,
        {"is_go": False, "verdict": "NotGO", "naturally_reductive": False,
         "nil_step": 3, "dims": {"levi_nc": 0, "nilradical": 5, "h": 1}},
    )


def e11_sol() -> CatalogEntry:
    g = e11_algebra()
    spec = HomogeneousSpaceSpec.create(g, (), la.identity(3), None, name="e11_sol")
    return CatalogEntry(
        "e11_sol", (), spec,
        {"is_go": False, "verdict": "NotGO", "witness": (0, 1, 0), "naturally_reductive": False,
         "rn_type": False, "nil_step": 1, "dims": {"levi_nc": 0, "nilradical": 2}},
        structure=_structure(g, la.identity(3), [(0, 1, 0), (0, 0, 1)], ()),
        matrix_model="sol",
    )


SL2_THETA = ((-1, 0, 0), (0, 0, -1), (0, -1, 0))  # H -> -H, E -> -F, F -> -E


def hyperbolic_plane() -> CatalogEntry:
    g = sl2_algebra()
    spec = HomogeneousSpaceSpec.create(
        g, [(0, 1, -1)], [(1, 0, 0), (0, 1, 1)], la.diag([8, 8]),
        name="hyperbolic_plane", flags={"go": True},
    )
    return CatalogEntry(
        "hyperbolic_plane", (), spec,
        {"is_go": True, "verdict": "ProvedGO(symmetric)", "naturally_reductive": True,
         "rn_type": True, "case": 1, "nil_step": 0,
         "dims": {"levi_nc": 3, "nilradical": 0, "k": 1, "a": 1, "n": 1}},
        theta=la.mat(SL2_THETA),
        structure=_structure(g, (), (), la.identity(3)),
        matrix_model="hyperbolic",
    )


def slnR_symmetric(n: int = 3) -> CatalogEntry:
    n = int(n)
    if n < 2:
        raise CatalogError("slnR_symmetric needs n >= 2")
    g, mats = sln_algebra(n)
    d = g.dim
    labels = g.labels
    idx = {lab: i for i, lab in enumerate(labels)}
    h_rows, m_rows = [], []
    for i in range(n - 1):
        m_rows.append(la.unit(d, i))
    for i in range(n):
        for j in range(i + 1, n):
            a, b = idx[f"E{i + 1}{j + 1}"], idx[f"E{j + 1}{i + 1}"]
            h_rows.append(_u(d, (a, 1), (b, -1)))
            m_rows.append(_u(d, (a, 1), (b, 1)))
    b = g.killing_matrix
    ip = la.gram(b, m_rows)
    # theta X = -X^T on the matrix basis
    theta_cols = []
    for m in mats:
        t = [[-m[c][r] for c in range(n)] for r in range(n)]
        theta_cols.append(_matrix_coords(mats, t))
    theta = la.transpose(theta_cols)
    spec = HomogeneousSpaceSpec.create(g, h_rows, m_rows, ip, name=f"slnR_symmetric:{n}", flags={"go": True})
    npos = n * (n - 1) // 2
    return CatalogEntry(
        "slnR_symmetric", (n,), spec,
        {"is_go": True, "verdict": "ProvedGO(symmetric)", "naturally_reductive": True,
         "rn_type": True, "case": 1, "nil_step": 0,
         "dims": {"levi_nc": d, "nilradical": 0, "k": npos, "a": n - 1, "n": npos}},
        theta=theta,
        structure=_structure(g, (), (), la.identity(d)),
    )


def _matrix_coords(mats, t) -> tuple:
    flat = lambda m: tuple(Fraction(x) for row in m for x in row)
    a = la.transpose([flat(m) for m in mats])
    x = la.solve(a, flat(t), len(mats))
    if x is None:
        raise CatalogError("matrix outside the span of the basis")
    return x


def sl2cover_nr(a=1, b=1) -> CatalogEntry:
    a, b = Fraction(a), Fraction(b)
    if a <= 0 or b <= 0:
        raise CatalogError("sl2cover_nr needs a > 0 and b > 0")
    g = LieAlgebra.from_brackets(4, sl2_brackets(), ("H", "E", "F", "f0"))
    spec = HomogeneousSpaceSpec.create(
        g, [(0, 1, -1, 1)], [(1, 0, 0, 0), (0, 1, 1, 0), (0, 0, 0, 1)], la.diag([8 * a, 8 * a, b]),
        name=f"sl2cover_nr:{la.format_scalar(a)},{la.format_scalar(b)}", flags={"go": True},
    )
    theta = la.mat(((-1, 0, 0, 0), (0, 0, -1, 0), (0, -1, 0, 0), (0, 0, 0, 1)))
    return CatalogEntry(
        "sl2cover_nr", (a, b), spec,
        {"is_go": True, "verdict": "ProvedGO(naturally-reductive)", "naturally_reductive": True,
         "rn_type": True, "case": 3, "nil_step": 1,
         "dims": {"levi_nc": 3, "nilradical": 1, "k": 1, "a": 1, "n": 1, "base": 2, "fiber": 1}},
        theta=theta,
        structure=_structure(g, [(0, 0, 0, 1)], [(0, 0, 0, 1)], [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)]),
    )


def hyperbolic_x_h3() -> CatalogEntry:
    br = sl2_brackets()
    br[3, 4] = {5: 1}  # [e1, e2] = e3
    br[6, 3] = {4: 1}  # [J, e1] = e2
    br[6, 4] = {3: -1}  # [J, e2] = -e1
    g = LieAlgebra.from_brackets(7, br, ("H", "E", "F", "e1", "e2", "e3", "J"))
    h_rows = [_u(7, (1, 1), (2, -1)), _u(7, (6, 1))]
    m_rows = [_u(7, (0, 1)), _u(7, (1, 1), (2, 1)), _u(7, (3, 1)), _u(7, (4, 1)), _u(7, (5, 1))]
    spec = HomogeneousSpaceSpec.create(g, h_rows, m_rows, la.diag([8, 8, 1, 1, 1]),
                                       name="hyperbolic_x_h3", flags={"go": True})
    theta = [[Fraction(0)] * 7 for _ in range(7)]
    for r, row in enumerate(SL2_THETA):
        for c, x in enumerate(row):
            theta[r][c] = Fraction(x)
    for i in range(3, 7):
        theta[i][i] = Fraction(1)
    nil = [_u(7, (3, 1)), _u(7, (4, 1)), _u(7, (5, 1))]
    return CatalogEntry(
        "hyperbolic_x_h3", (), spec,
        {"is_go": True, "verdict": "ProvedGO(naturally-reductive)", "naturally_reductive": True,
         "rn_type": True, "case": 3, "nil_step": 2,
         "dims": {"levi_nc": 3, "nilradical": 3, "k": 1, "a": 1, "n": 1, "base": 2, "fiber": 3}},
        theta=la.mat(theta),
        structure=_structure(g, nil + [_u(7, (6, 1))], nil, [_u(7, (0, 1)), _u(7, (1, 1)), _u(7, (2, 1))]),
    )


BUILDERS: dict[str, Callable[..., CatalogEntry]] = {
    "euclidean": euclidean,
    "heisenberg3": heisenberg3,
    "heisenberg3_anisotropic": heisenberg3_anisotropic,
    "h3_product": h3_product,
    "e11_sol": e11_sol,
    "hyperbolic_plane": hyperbolic_plane,
    "slnR_symmetric": slnR_symmetric,
    "sl2cover_nr": sl2cover_nr,
    "hyperbolic_x_h3": hyperbolic_x_h3,
    "free_nilpotent_step3": free_nilpotent_step3,
}

PARAM_HELP = {
    "euclidean": "n (default 3)",
    "slnR_symmetric": "n (default 3)",
    "sl2cover_nr": "a,b > 0 (default 1,1)",
}


def names() -> list[str]:
    return list(BUILDERS)


def build(name: str, *params) -> CatalogEntry:
    if name not in BUILDERS:
        raise CatalogError(f"unknown catalog entry {name!r}")
    try:
        return BUILDERS[name](*params)
    except TypeError as exc:
        raise CatalogError(f"bad parameters for {name}: {exc}") from None


def parse_target(text: str) -> tuple[str, tuple]:
    """``name`` or ``name:p1,p2`` with rational parameters."""
    name, _, rest = text.partition(":")
    try:
        params = tuple(la.frac(p.strip()) for p in rest.split(",")) if rest else ()
    except (ValueError, ZeroDivisionError):
        raise CatalogError(f"bad parameters in {text!r}: expected comma-separated rationals") from None
    return name, params


def build_target(text: str) -> CatalogEntry:
    name, params = parse_target(text)
    if name in ("euclidean", "slnR_symmetric"):
        if any(p.denominator != 1 for p in params):
            raise CatalogError(f"{name} takes an integer parameter")
        params = tuple(int(p) for p in params)
    return build(name, *params)


def default_entries() -> list[CatalogEntry]:
    """One instance of each entry, with the parameters used for golden reports."""
    return [build(n) for n in BUILDERS]


def negative_control() -> tuple[NilmanifoldSpec, tuple[Subspace, ...]]:
    """2-step algebra ``[x1,x2] = z1, [x1,x3] = z2`` with metric diag(1,1,1,1,2).

    It has no skew derivations, so every subspace is invariant, and the
    orthogonal blocks ``span{x1}`` and ``span{x2, x3}`` do not commute.
    """
    n = LieAlgebra.from_brackets(5, {(0, 1): {3: 1}, (0, 2): {4: 1}}, ("x1", "x2", "x3", "z1", "z2"))
    nspec = NilmanifoldSpec.create(n, la.diag([1, 1, 1, 1, 2]), name="negative_control")
    return nspec, (Subspace.span([_u(5, (0, 1))], 5), Subspace.span([_u(5, (1, 1)), _u(5, (2, 1))], 5))


# ---------------------------------------------------------------------------
# Consolidated run
# ---------------------------------------------------------------------------


def _guard(rep: Report, key: str, fn):
    """Run ``fn`` and attach its report; failures become a failed check."""
    try:
        out = fn()
    except (LieAlgebraError, StructureError, SpecError, ValueError) as exc:
        rep.check(key, False, str(exc))
        report = getattr(exc, "report", None)
        if report is not None:
            rep.add(f"{key}_partial", report)
        return None
    return out


def run_all(entry: CatalogEntry, samples: int = 100, seed: int = 0) -> Report:
    """Every applicable checker on ``entry``, then a comparison with its expected flags."""
    spec = entry.spec
    g = spec.g
    rep = Report(f"run-all {entry.label}")
    actual: dict[str, Any] = {}
    rep.add("validate", validate(spec))
    verdict = check_go(spec, samples, seed)
    rep.add("check_go", verdict_report(spec, verdict))
    actual["is_go"] = not isinstance(verdict, NotGO)
    actual["verdict"] = verdict.name if not isinstance(verdict, ProvedGO) else f"ProvedGO({verdict.kind})"
    if isinstance(verdict, NotGO):
        actual["witness"] = spec.m_coords(verdict.witness.X)
    actual["naturally_reductive"] = natural_reductivity(spec).holds
    rep.add("skew", skew_consequence(spec))
    ld = levi(g)
    dims = {"levi_nc": ld.levi_nc.dim, "nilradical": ld.nilradical.dim, "h": spec.h.dim}
    actual["nil_step"] = series(g, ld.nilradical).step
    if entry.structure:
        st = rep.add("structure", Report("structure"))
        st.check("radical", ld.radical == entry.structure["radical"])
        st.check("nilradical", ld.nilradical == entry.structure["nilradical"])
        st.check("levi", ld.levi == entry.structure["levi"])
    rep.add("gnc", gnc_check(spec, ld))
    rep.add("thm_nil", thm_nil_check(spec, ld))
    actual["rn_type"] = is_rn_type(spec)
    if actual["is_go"] and actual["rn_type"]:
        rn = _guard(rep, "rn_decompose", lambda: rn_decompose(spec, ld, theta=entry.theta))
        if rn is not None:
            rep.add("rn", rn.report)
            dims.update(k=rn.cartan.k.dim, a=rn.iwasawa.a.dim, n=rn.iwasawa.n_plus.dim)
            if rn.f.is_zero():
                sub = _guard(rep, "submersion_decompose", lambda: submersion_decompose(spec, rn))
                if sub is not None:
                    rep.add("submersion", sub.report)
                    actual["case"] = sub.case
                    dims.update(base=sub.p.dim, fiber=sub.fiber.n.dim)
    if entry.nspec is not None:
        nrep = rep.add("nilmanifold", Report("nilmanifold"))
        nspec = entry.nspec
        sda = skew_derivations(nspec)
        nrep.value("dim_skew_derivations", sda.dim)
        nrep.add("step_bound", step_bound_check(nspec))
        if entry.blocks:
            blk = _guard(nrep, "commuting_blocks", lambda: commuting_blocks_check(nspec, entry.blocks, sda))
            if blk is not None:
                nrep.add("commuting_blocks", blk)
        for i, o in enumerate(entry.invariant_subalgebras):
            inv = _guard(nrep, f"invariant_subalgebra_{i + 1}",
                         lambda: invariant_subalgebra_ideal_check(nspec, o, sda))
            if inv is not None:
                nrep.add(f"invariant_subalgebra_{i + 1}", inv)
    actual["dims"] = dims
    cmp = rep.add("expected", Report("expected"))
    mismatches = 0
    for key, want in entry.expected.items():
        if key == "dims":
            for dk, dv in want.items():
                got = dims.get(dk)
                ok = got == dv
                mismatches += not ok
                cmp.check(f"dim_{dk}", ok, f"expected {dv}, got {format_value(got)}")
            continue
        got = actual.get(key)
        if key == "witness":
            want = la.vec(want)
        ok = got == want
        mismatches += not ok
        cmp.check(key, ok, f"expected {format_value(want)}, got {format_value(got)}")
    cmp.value("mismatches", mismatches)
    return rep
