from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from goorbit import catalog, linalg as la
from goorbit.go import (
    Infeasibility, NotGO, ProbablyGO, ProvedGO, check_go, geodesic_vector, natural_reductivity,
    nr_defect, residuals, sample_vector, shifted_spec, skew_consequence, solve_direction,
    totally_geodesic_sub, verdict_report,
)
from goorbit.lie import PreconditionError, levi
from goorbit.linalg import Subspace

from strategies import rationals, vectors

F = Fraction
GO_ENTRIES = [e for e in catalog.default_entries() if e.expected["is_go"]] + [
    catalog.build("sl2cover_nr", a, b) for a in (1, 2) for b in (1, 2) if (a, b) != (1, 1)]


def substitution_residuals(spec, x, z):
    """Independent evaluation of <[X+Z, Y]_m, X> for each basis Y of m, via the
    ambient form <u_m, v_m>."""
    form = spec.ambient_ip
    out = []
    for y in spec.m.basis:
        br = spec.g.bracket(la.add(x, z), y)
        out.append(la.bilinear(form, br, x))
    return out


def test_euclidean_z_zero():
    spec = catalog.build("euclidean", 3).spec
    cert = geodesic_vector(spec, (1, 2, 3))
    assert cert is not None and not any(cert.Z)


def test_h3_example():
    spec = catalog.build("heisenberg3").spec
    cert = geodesic_vector(spec, (1, 0, 1, 0))
    assert cert.Z == (0, 0, 0, 1)  # Z = J
    assert cert.verify(spec)
    assert not any(substitution_residuals(spec, cert.X, cert.Z))


def test_sol_infeasible():
    spec = catalog.build("e11_sol").spec
    out = solve_direction(spec, (0, 1, 0))
    assert isinstance(out, Infeasibility) and out.verify(spec)
    assert geodesic_vector(spec, (0, 1, 0)) is None
    # direct evaluation: <[e2, e1], e2> = -1
    assert spec.inner(spec.g.bracket((0, 1, 0), (1, 0, 0)), (0, 1, 0)) == -1


def test_x_outside_m_rejected():
    spec = catalog.build("heisenberg3").spec
    with pytest.raises(PreconditionError):
        solve_direction(spec, (0, 0, 0, 1))


def test_check_go_examples():
    assert check_go(catalog.build("hyperbolic_plane").spec) == ProvedGO("symmetric", None, 100, 0, 100)
    h3 = catalog.build("heisenberg3").spec
    v = check_go(h3, samples=1000, seed=1)
    assert isinstance(v, ProvedGO) and v.kind == "naturally-reductive" and v.feasible == 1000
    v = check_go(h3, samples=200, seed=1, structural=False)
    assert isinstance(v, ProbablyGO) and v.feasible == 200
    sol = catalog.build("e11_sol").spec
    v = check_go(sol, samples=100, seed=7)
    assert isinstance(v, NotGO) and v.verify(sol)
    assert verdict_report(sol, v)["witness_X"] == "e2"


def test_check_go_rejects_zero_samples():
    with pytest.raises(ValueError):
        check_go(catalog.build("heisenberg3").spec, samples=0)


def test_natural_reductivity_examples():
    assert natural_reductivity(catalog.build("hyperbolic_plane").spec).holds
    for a in (1, 2, F(1, 3)):
        for b in (1, 2, 5):
            assert natural_reductivity(catalog.build("sl2cover_nr", a, b).spec).holds
    sol = catalog.build("e11_sol").spec
    assert not natural_reductivity(sol).holds
    i, j, k, val = nr_defect(sol)
    assert val != 0


def test_skew_consequence_examples():
    assert skew_consequence(catalog.build("heisenberg3").spec).ok
    rep = skew_consequence(catalog.build("hyperbolic_plane").spec)
    assert rep.ok and rep["dim_c_m_h"] == 0
    rep = skew_consequence(catalog.build("e11_sol").spec)
    assert not rep.ok and rep["witness_Y"] == (1, 0, 0)


@pytest.mark.parametrize("entry", GO_ENTRIES, ids=lambda e: e.label)
def test_skew_consequence_on_go_entries(entry):
    assert skew_consequence(entry.spec).ok


def test_totally_geodesic_examples():
    spec = catalog.build("heisenberg3").spec
    same = totally_geodesic_sub(spec, spec.g.whole)
    assert same.g.c == spec.g.c and same.h == spec.h and same.m == spec.m and same.ip == spec.ip
    cov = catalog.build("sl2cover_nr").spec
    ld = levi(cov.g)
    line = totally_geodesic_sub(cov, ld.nilradical + cov.h)
    assert line.g.dim == 1 and line.h.is_zero() and line.m.dim == 1
    prod = catalog.build("hyperbolic_x_h3").spec
    ld = levi(prod.g)
    sub = totally_geodesic_sub(prod, ld.nilradical + prod.h)
    assert sub.g.dim == 4 and sub.h.dim == 1 and sub.m.dim == 3
    assert not isinstance(check_go(sub, 50), NotGO)


@pytest.mark.parametrize("entry", GO_ENTRIES, ids=lambda e: e.label)
def test_totally_geodesic_subs_stay_go(entry):
    spec = entry.spec
    ld = levi(spec.g)
    for q in (ld.nilradical + spec.h, ld.levi + spec.h):
        g = spec.g
        if q.is_zero() or not g.is_subalgebra(q):
            continue
        sub = totally_geodesic_sub(spec, q)
        assert not isinstance(check_go(sub, 30, seed=3), NotGO)


@settings(max_examples=40)
@given(st.sampled_from(GO_ENTRIES), st.integers(0, 2**31), rationals.filter(bool))
def test_certificate_and_homogeneity(entry, seed, lam):
    spec = entry.spec
    x = sample_vector(spec, random.Random(seed))
    cert = geodesic_vector(spec, x)
    assert cert is not None and cert.verify(spec)
    assert not any(substitution_residuals(spec, cert.X, cert.Z))
    assert not any(residuals(spec, la.scale(lam, x), la.scale(lam, cert.Z)))


@settings(max_examples=30)
@given(st.sampled_from(GO_ENTRIES), st.integers(0, 2**31))
def test_natural_reductivity_gives_z(entry, seed):
    spec = entry.spec
    nr = natural_reductivity(spec)
    if not nr.holds:
        return
    x = sample_vector(spec, random.Random(seed))
    z = nr.Z(spec, x)
    assert z in spec.h
    assert not any(residuals(spec, x, z))
    if not nr.shifted:
        assert not any(z)
    else:
        assert nr_defect(shifted_spec(spec, nr.phi)) is None


@settings(max_examples=10)
@given(st.integers(0, 2**31))
def test_not_go_is_stable(seed):
    for name in ("e11_sol", "free_nilpotent_step3"):
        spec = catalog.build(name).spec
        v = check_go(spec, 100, seed)
        assert isinstance(v, NotGO)
        assert v.witness.verify(spec)
        assert isinstance(check_go(spec, 100, seed + 1), NotGO)
        assert solve_direction(spec, v.witness.X) == v.witness


def test_sampling_is_reproducible():
    spec = catalog.build("h3_product").spec
    a = [sample_vector(spec, r) for r in [random.Random(5)] for _ in range(5)]
    b = [sample_vector(spec, r) for r in [random.Random(5)] for _ in range(5)]
    assert a == b
