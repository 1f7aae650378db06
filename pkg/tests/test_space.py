from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from goorbit import catalog, linalg as la
from goorbit.lie import PreconditionError, levi, normalizer
from goorbit.linalg import Subspace
from goorbit.space import (
    HomogeneousSpaceSpec, SpecError, compatible_triple_check, killing_complement, nilrad_transitivity,
    normalizer_data, skew_witness, transitivity_check, validate,
)
from goorbit.structure import l_algebra

import algebras

ENTRIES = catalog.default_entries() + [catalog.build("sl2cover_nr", 1, 2)]


def test_killing_complement_examples():
    sl2 = catalog.sl2_algebra()
    assert killing_complement(sl2, Subspace.span([(0, 1, -1)], 3)) == Subspace.span([(1, 0, 0), (0, 1, 1)], 3)
    assert killing_complement(sl2, Subspace.zero(3)) == sl2.whole
    g = algebras.sl2_plus_line()
    m = killing_complement(g, Subspace.span([(0, 1, -1, 1)], 4))
    assert m == Subspace.span([(1, 0, 0, 0), (0, 1, 1, 0), (0, 0, 0, 1)], 4)


def test_killing_complement_needs_compact_h():
    sl2 = catalog.sl2_algebra()
    with pytest.raises(PreconditionError):
        killing_complement(sl2, Subspace.span([(1, 0, 0)], 3))


def test_validate_examples():
    assert validate(catalog.build("euclidean", 3).spec).ok
    h3 = catalog.build("heisenberg3").spec
    assert validate(h3).ok
    g = h3.g
    assert g.bracket(la.unit(4, 3), la.unit(4, 0)) == (0, 1, 0, 0)  # J e1 = e2
    bad = HomogeneousSpaceSpec.create(g, h3.h.basis, h3.m.basis, la.diag([1, 2, 1]), check=False)
    rep = validate(bad)
    assert not rep.ok
    assert rep["ip_ad_h_invariant"].detail == "witness (J, e1, e2) value 1"
    with pytest.raises(SpecError):
        HomogeneousSpaceSpec.create(g, h3.h.basis, h3.m.basis, la.diag([1, 2, 1]))


def test_validate_rejects_indefinite_metric():
    g = catalog.build("euclidean", 2).spec.g
    with pytest.raises(SpecError):
        HomogeneousSpaceSpec.create(g, (), la.identity(2), [[1, 0], [0, -1]])


@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e.label)
def test_normalizer_data_invariants(entry):
    spec = entry.spec
    g = spec.g
    nd = normalizer_data(spec)
    assert nd.report.ok
    assert nd.n_g_h == normalizer(g, spec.h) == spec.h + nd.c_m_h
    assert spec.m.contains(g.bracket_space(nd.c_m_h, spec.m))
    assert g.is_subalgebra(nd.w_m)
    for y in nd.w_m.basis:
        assert skew_witness(spec, y) is None
    assert la.is_direct_sum(spec.h, spec.m) and spec.m.contains(g.bracket_space(spec.h, spec.m))


def test_transitivity_trivial_cases():
    spec = catalog.build("hyperbolic_plane").spec
    assert transitivity_check(spec, spec.g.whole, Subspace.zero(3)).ok
    t = transitivity_check(spec, Subspace.zero(3), Subspace.zero(3))
    assert not t.ok and len(t.missing) == 2


@settings(max_examples=30)
@given(st.integers(0, 2**31))
def test_transitivity_monotone(seed):
    rng = random.Random(seed)
    entry = ENTRIES[rng.randrange(len(ENTRIES))]
    spec = entry.spec
    g = spec.g
    # subalgebras generated by a random vector and its brackets with h
    def sub(k):
        vecs = [tuple(Fraction(rng.randint(-2, 2)) for _ in range(g.dim)) for _ in range(k)]
        s = Subspace.span(vecs, g.dim)
        while not g.is_subalgebra(s):
            s = s + g.bracket_space(s, s)
        return s
    u = sub(1)
    big = u + sub(rng.randint(0, 2))
    while not g.is_subalgebra(big):
        big = big + g.bracket_space(big, big)
    z = Subspace.zero(g.dim)
    if transitivity_check(spec, u, z).ok:
        assert transitivity_check(spec, big, z).ok
    assert transitivity_check(spec, g.whole, z).ok


def test_nilrad_transitivity_examples():
    h3 = catalog.build("heisenberg3").spec
    rep = nilrad_transitivity(h3, levi(h3.g))
    assert rep["skew_hypothesis"].ok and rep["span_identity"].ok
    hyp = catalog.build("hyperbolic_plane").spec
    assert nilrad_transitivity(hyp, levi(hyp.g)).ok
    sol = catalog.build("e11_sol").spec
    rep = nilrad_transitivity(sol, levi(sol.g))
    assert rep["skew_hypothesis"].ok is False and rep["skew_hypothesis"].detail.startswith("Y = e1:")


def test_compatible_triple_examples():
    hyp = catalog.build("hyperbolic_plane").spec
    assert compatible_triple_check(hyp, hyp.h, levi(hyp.g))["compatible"]
    cov = catalog.build("sl2cover_nr").spec
    assert compatible_triple_check(cov, l_algebra(cov), levi(cov.g))["compatible"]
    with pytest.raises(PreconditionError):
        compatible_triple_check(hyp, Subspace.span([(0, 1, -1), (1, 0, 0)], 3), levi(hyp.g))


def test_report_names_complement():
    h3 = catalog.build("heisenberg3").spec
    assert validate(h3)["complement"] == "killing"
    shifted = HomogeneousSpaceSpec.create(h3.g, [(0, 0, 0, 1)], [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 1)])
    rep = validate(shifted)
    assert rep.ok and rep["complement"] == "explicit"
