from fractions import Fraction
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from goorbit import catalog, linalg as la
from goorbit.lie import (
    AxiomViolation, LieAlgebra, LieAlgebraError, PreconditionError, center, centralizer,
    compact_split, killing, levi, nilradical, normalizer, quotient, radical, series, simple_ideals,
)
from goorbit.linalg import Subspace

import algebras

F = Fraction


def brute_killing(g):
    """Trace of products of explicitly assembled ad matrices, in sympy."""
    n = g.dim
    ads = [sympy.Matrix(n, n, lambda k, j: g.c[i][j][k]) for i in range(n)]
    return [[(ads[i] * ads[j]).trace() for j in range(n)] for i in range(n)]


def brute_jacobi_ok(c):
    n = len(c)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if c[i][j][k] != -c[j][i][k]:
                    return False
    # [[e_i, e_j], e_k] = sum_l c[i][j][l] [e_l, e_k]; sparse dict form keeps this cheap
    nz = {(a, b): [(l, x) for l, x in enumerate(c[a][b]) if x] for a in range(n) for b in range(n)}

    def dbl(a, b, k):
        out = [F(0)] * n
        for l, x in nz[a, b]:
            for m, y in nz[l, k]:
                out[m] += x * y
        return out
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                t = [p + q + r for p, q, r in zip(dbl(i, j, k), dbl(j, k, i), dbl(k, i, j))]
                if any(t):
                    return False
    return True


def test_killing_examples():
    assert killing(catalog.heisenberg_algebra()) == la.zero_matrix(3, 3)
    assert killing(catalog.sl2_algebra()) == la.mat([[8, 0, 0], [0, 0, 4], [0, 4, 0]])
    assert killing(LieAlgebra.abelian(4)) == la.zero_matrix(4, 4)
    assert killing(catalog.so3_algebra()) == la.mat_scale(-2, la.identity(3))


@pytest.mark.parametrize("name,alg", algebras.catalog_algebras() + [
    ("sl2+so3", algebras.sl2_plus_so3()), ("sl2 x R2", algebras.sl2_ltimes_r2())])
def test_killing_matches_brute_force(name, alg):
    assert [list(r) for r in killing(alg)] == brute_killing(alg)


@pytest.mark.parametrize("n", [2, 3])
def test_killing_of_sln_is_2n_trace(n):
    g, mats = catalog.sln_algebra(n)
    tr = lambda a, b: sum(a[i][k] * b[k][i] for i in range(n) for k in range(n))
    assert killing(g) == tuple(tuple(2 * n * tr(a, b) for b in mats) for a in mats)


@pytest.mark.parametrize("name,alg", algebras.catalog_algebras())
def test_killing_ad_invariant(name, alg):
    b = killing(alg)
    n = alg.dim
    e = [alg.basis_vector(i) for i in range(n)]
    for x in e:
        for y in e:
            for z in e:
                assert la.bilinear(b, alg.bracket(x, y), z) + la.bilinear(b, y, alg.bracket(x, z)) == 0


def test_series_examples():
    h3 = catalog.heisenberg_algebra()
    s = series(h3)
    assert s.is_nilpotent and s.step == 2
    sl2 = catalog.sl2_algebra()
    assert not series(sl2).is_solvable
    assert series(LieAlgebra.abelian(3)).step == 1


def test_center_examples():
    assert center(catalog.heisenberg_algebra()) == Subspace.span([(0, 0, 1)], 3)
    assert center(catalog.sl2_algebra()).is_zero()
    assert center(LieAlgebra.abelian(3)) == Subspace.full(3)


def test_radical_examples():
    assert radical(catalog.sl2_algebra()).is_zero()
    assert radical(catalog.heisenberg_algebra()) == Subspace.full(3)
    assert radical(algebras.sl2_plus_line()) == Subspace.span([(0, 0, 0, 1)], 4)


def test_nilradical_examples():
    assert nilradical(algebras.two_dim_nonabelian()) == Subspace.span([(0, 1)], 2)
    assert nilradical(catalog.e11_algebra()) == Subspace.span([(0, 1, 0), (0, 0, 1)], 3)
    assert nilradical(catalog.heisenberg_algebra()) == Subspace.full(3)


def test_levi_examples():
    g = algebras.sl2_ltimes_r2()
    ld = levi(g)
    r2 = Subspace.span([(0, 0, 0, 1, 0), (0, 0, 0, 0, 1)], 5)
    assert ld.radical == r2 and ld.nilradical == r2
    assert ld.levi.dim == 3 and g.is_subalgebra(ld.levi) and la.is_direct_sum(ld.levi, ld.radical)
    sl2 = catalog.sl2_algebra()
    assert levi(sl2).levi == sl2.whole and levi(sl2).radical.is_zero()
    assert levi(catalog.e11_algebra()).levi.is_zero()


def test_levi_candidate_checked():
    g = algebras.sl2_ltimes_r2()
    bad = Subspace.span([(1, 0, 0, 0, 0), (0, 1, 0, 1, 0), (0, 0, 1, 0, 0)], 5)
    with pytest.raises(LieAlgebraError):
        levi(g, bad)


def test_compact_split_examples():
    sl2 = catalog.sl2_algebra()
    nc, cp = compact_split(sl2, sl2.whole)
    assert nc == sl2.whole and cp.is_zero()
    so3 = catalog.so3_algebra()
    nc, cp = compact_split(so3, so3.whole)
    assert nc.is_zero() and cp == so3.whole
    g = algebras.sl2_plus_so3()
    nc, cp = compact_split(g, g.whole)
    assert nc == Subspace.span([la.unit(6, i) for i in range(3)], 6)
    assert cp == Subspace.span([la.unit(6, i) for i in range(3, 6)], 6)


def test_simple_ideals_of_sl2_plus_sl2():
    g = algebras.sl2_plus_sl2()
    parts = simple_ideals(g, g.whole)
    assert sorted(p.dim for p in parts) == [3, 3]
    assert la.is_direct_sum(*parts) and la.subspace_sum(*parts) == g.whole


def test_quotient_examples():
    h3 = catalog.heisenberg_algebra()
    q = quotient(h3, center(h3))
    assert q.algebra.dim == 2 and killing(q.algebra) == la.zero_matrix(2, 2)
    assert series(q.algebra).step == 1
    assert quotient(h3, h3.whole).algebra.dim == 0
    e11 = catalog.e11_algebra()
    q = quotient(e11, Subspace.span([(0, 1, 0), (0, 0, 1)], 3))
    assert q.algebra.dim == 1
    with pytest.raises(PreconditionError):
        quotient(h3, Subspace.span([(1, 0, 0)], 3))


def test_normalizer_and_centralizer():
    sl2 = catalog.sl2_algebra()
    k = Subspace.span([(0, 1, -1)], 3)
    assert normalizer(sl2, k) == k
    assert centralizer(sl2, k) == k


@pytest.mark.parametrize("entry", catalog.default_entries(), ids=lambda e: e.label)
def test_decomposition_matches_catalog(entry):
    g = entry.spec.g
    ld = levi(g)
    assert ld.radical == entry.structure["radical"]
    assert ld.nilradical == entry.structure["nilradical"]
    assert ld.levi == entry.structure["levi"]
    assert la.is_direct_sum(ld.levi, ld.radical) and ld.levi + ld.radical == g.whole
    assert g.is_subalgebra(ld.levi)
    assert g.commute(ld.levi_nc, ld.levi_cp)
    assert g.is_ideal(ld.nilradical) and series(g, ld.nilradical).is_nilpotent
    assert ld.nilradical.contains(g.bracket_space(g.whole, ld.radical))
    if not ld.radical.is_zero() and ld.radical != g.whole:
        assert radical(quotient(g, ld.radical).algebra).is_zero()


def test_axiom_errors_name_the_axiom():
    c = [[[F(0)] * 2 for _ in range(2)] for _ in range(2)]
    c[0][1][1] = F(1)
    with pytest.raises(AxiomViolation) as exc:
        LieAlgebra(tuple(tuple(tuple(r) for r in p) for p in c))
    assert exc.value.axiom == "antisymmetry"


def _perturbed(alg, rng, antisymmetric):
    n = alg.dim
    c = [[list(r) for r in p] for p in alg.c]
    i, j, k = rng.randrange(n), rng.randrange(n), rng.randrange(n)
    while antisymmetric and i == j:
        i, j = rng.randrange(n), rng.randrange(n)
    d = F(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))
    c[i][j][k] += d
    if antisymmetric:
        c[j][i][k] -= d
    return tuple(tuple(tuple(r) for r in p) for p in c)


@settings(max_examples=30)
@given(st.integers(0, 2**31), st.booleans())
def test_perturbations_agree_with_oracle(seed, antisym):
    rng = random.Random(seed)
    algs = algebras.catalog_algebras()
    name, alg = algs[rng.randrange(len(algs))]
    c = _perturbed(alg, rng, antisym)
    valid = brute_jacobi_ok(c)
    if valid:
        LieAlgebra(c)
    else:
        with pytest.raises(AxiomViolation):
            LieAlgebra(c)


@settings(max_examples=15)
@given(st.sampled_from([0, 1, 2, 3, 5, 7, 9]), st.integers(0, 2**31))
def test_invariants_under_change_of_basis(idx, seed):
    entries = catalog.default_entries()
    g = entries[idx].spec.g
    rng = random.Random(seed)
    n = g.dim
    while True:
        p = [[F(rng.randint(-1, 1)) for _ in range(n)] for _ in range(n)]
        if la.determinant(p) != 0:
            break
    h = g.rebase(p)
    a, b = levi(g), levi(h)
    assert (a.radical.dim, a.nilradical.dim, a.levi_nc.dim, a.levi_cp.dim) == (
        b.radical.dim, b.nilradical.dim, b.levi_nc.dim, b.levi_cp.dim)
    assert la.signature(killing(g)) == la.signature(killing(h))
    assert series(g).step == series(h).step
