"""Acceptance criteria 1-12, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line (shown even
without ``-s``) and then asserts the outcome.
"""

import os
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from goorbit import catalog, sim
from goorbit.go import NotGO, ProvedGO, check_go, geodesic_vector, sample_vector, skew_consequence
from goorbit.lie import AxiomViolation, LieAlgebra, center, levi, series
from goorbit.nilmanifold import commuting_blocks_check, invariant_subalgebra_ideal_check
from goorbit.space import validate
from goorbit.structure import (
    gnc_check, rn_decompose, s_not_orthogonal_check, submersion_decompose, thm_nil_check,
)

from test_lie import _perturbed, brute_jacobi_ok, brute_killing

PAIRS = [(1, 1), (1, 2), (2, 1), (2, 2)]


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, f"criterion {n}: {detail}"
    return emit


def test_criterion_01_axioms(verdict):
    t0 = time.perf_counter()
    algs = [(e.label, e.spec.g) for e in catalog.default_entries()]
    rng = random.Random(2024)
    rejected = agree = invalid = 0
    for case in range(200):
        _, alg = algs[case % len(algs)]
        c = _perturbed(alg, rng, antisymmetric=bool(case % 2))
        should_fail = not brute_jacobi_ok(c)
        try:
            LieAlgebra(c)
            failed = False
        except AxiomViolation:
            failed = True
        invalid += should_fail
        rejected += failed and should_fail
        agree += failed == should_fail
    all_valid = all(validate(e.spec).ok for e in catalog.default_entries())
    dt = time.perf_counter() - t0
    ok = agree == 200 and rejected == invalid and all_valid and dt < 10
    verdict(1, ok, f"{rejected}/{invalid} axiom-breaking perturbations rejected, "
                   f"{200 - invalid} still-valid perturbations accepted, catalog valid={all_valid}, {dt:.1f}s")


def test_criterion_02_killing_and_decompositions(verdict):
    algs = {"sl(2,R)": catalog.sl2_algebra(), "so(3)": catalog.so3_algebra(),
            "h3": catalog.heisenberg_algebra(), "e(1,1)": catalog.e11_algebra()}
    killing_ok = all([[int(x) if x == int(x) else x for x in row] for row in g.killing_matrix] == brute_killing(g)
                     for g in algs.values())
    bad = []
    for e in catalog.default_entries():
        if not e.structure:
            continue
        ld = levi(e.spec.g)
        for key, got in (("radical", ld.radical), ("nilradical", ld.nilradical), ("levi", ld.levi)):
            if got != e.structure[key]:
                bad.append(f"{e.label}.{key}")
    ok = killing_ok and not bad
    verdict(2, ok, f"killing exact on {len(algs)} algebras={killing_ok}, decomposition mismatches={bad or 0}")


def test_criterion_03_go_criterion(verdict):
    t0 = time.perf_counter()
    h3 = catalog.build("heisenberg3").spec
    rng = random.Random(0)
    feasible = 0
    for _ in range(1000):
        cert = geodesic_vector(h3, sample_vector(h3, rng))
        feasible += cert is not None and cert.verify(h3)
    sol = catalog.build("e11_sol").spec
    v = check_go(sol, samples=100, seed=0)
    sol_ok = isinstance(v, NotGO) and v.samples_tried <= 100 and v.verify(sol)
    proved = [isinstance(check_go(catalog.build("hyperbolic_plane").spec), ProvedGO)]
    proved += [isinstance(check_go(catalog.build("sl2cover_nr", a, b).spec), ProvedGO) for a, b in PAIRS]
    dt = time.perf_counter() - t0
    ok = feasible == 1000 and sol_ok and all(proved) and dt < 60
    verdict(3, ok, f"h3 feasible {feasible}/1000, sol NotGO re-verified={sol_ok}, "
                   f"ProvedGO {sum(proved)}/{len(proved)}, {dt:.1f}s")


def test_criterion_04_skew(verdict):
    go_entries = [e for e in catalog.default_entries() if e.expected.get("is_go")]
    passing = sum(skew_consequence(e.spec).ok for e in go_entries)
    rep = skew_consequence(catalog.build("e11_sol").spec)
    sol_ok = not rep.ok and tuple(rep["witness_Y"]) == (1, 0, 0)
    ok = passing == len(go_entries) and sol_ok
    verdict(4, ok, f"skew on {passing}/{len(go_entries)} G.O. entries, sol fails with witness e1={sol_ok}")


def test_criterion_05_gnc(verdict):
    results = {}
    for target in ("hyperbolic_x_h3", "sl2cover_nr", "sl2cover_nr:2,1"):
        spec = catalog.build_target(target).spec
        ld = levi(spec.g)
        assert not ld.radical.is_zero()
        results[target] = gnc_check(spec, ld)["levi_nc_commutes_with_radical"].ok
    verdict(5, all(results.values()), f"[levi_nc, radical] = 0: {results}")


def test_criterion_06_thm_nil(verdict):
    go_entries = [e for e in catalog.default_entries() if e.expected.get("is_go")]
    bad = []
    for e in go_entries:
        rep = thm_nil_check(e.spec)
        if not (rep["transitivity"]["span_identity"].ok and rep["nil_plus_center_f_step_at_most_2"].ok):
            bad.append(e.label)
    v = check_go(catalog.build("free_nilpotent_step3").spec, samples=500, seed=0)
    caught = isinstance(v, NotGO) and v.samples_tried <= 500
    ok = not bad and caught
    verdict(6, ok, f"span identity and step<=2 on {len(go_entries) - len(bad)}/{len(go_entries)} entries, "
                   f"free step 3 NotGO after {getattr(v, 'samples_tried', '-')} samples")


def test_criterion_07_blocks(verdict):
    e = catalog.build("h3_product")
    blocks_ok = commuting_blocks_check(e.nspec, e.blocks).ok
    ideals_ok = all(invariant_subalgebra_ideal_check(e.nspec, o).ok for o in e.invariant_subalgebras)
    nspec, blocks = catalog.negative_control()
    flagged = not commuting_blocks_check(nspec, blocks).ok
    ok = blocks_ok and ideals_ok and bool(e.invariant_subalgebras) and flagged
    verdict(7, ok, f"h3_product blocks={blocks_ok}, invariant subalgebras ideals={ideals_ok}, "
                   f"negative control flagged={flagged}")


def test_criterion_08_rn_decompose(verdict):
    targets = ["euclidean:1", "euclidean:3", "euclidean:5", "heisenberg3", "hyperbolic_plane",
               "sl2cover_nr", "hyperbolic_x_h3"]
    bad = []
    for t in targets:
        e = catalog.build_target(t)
        rn = rn_decompose(e.spec, theta=e.theta)
        if not (rn.claim_ok and rn.report.ok and (rn.l & rn.u) == center(e.spec.g)
                and rn.report["claim_g_is_h_u_f_direct"].ok and series(e.spec.g, rn.iwasawa.s).is_solvable):
            bad.append(t)
    hyp = catalog.build("hyperbolic_plane")
    iw = rn_decompose(hyp.spec, theta=hyp.theta).iwasawa
    dims = (iw.k.dim, iw.a.dim, iw.n_plus.dim)
    ok = not bad and dims == (1, 1, 1)
    verdict(8, ok, f"certificates hold on {len(targets) - len(bad)}/{len(targets)} entries, sl(2,R) k,a,n dims {dims}")


def test_criterion_09_submersion(verdict):
    want = {"hyperbolic_plane": 1, "heisenberg3": 2, "sl2cover_nr": 3, "sl2cover_nr:2,1": 3, "hyperbolic_x_h3": 3}
    got, checks_ok = {}, True
    for t in want:
        e = catalog.build_target(t)
        sub = submersion_decompose(e.spec, rn_decompose(e.spec, theta=e.theta))
        got[t] = sub.case
        checks_ok &= all(sub.report[k].ok for k in
                         ("q_is_k_cp_rad", "p_perp_nil", "k_commutes_nil", "base_symmetric_pair"))
    ok = got == want and checks_ok
    verdict(9, ok, f"cases {got}, exact checks={checks_ok}")


def test_criterion_10_s_not_orthogonal(verdict):
    values = {}
    for a, b in PAIRS:
        e = catalog.build("sl2cover_nr", a, b)
        rep = s_not_orthogonal_check(e.spec, rn_decompose(e.spec, theta=e.theta))
        values[(a, b)] = rep["pairing_nonzero"].ok
    verdict(10, all(values.values()), f"nonzero pairing for {values}")


def test_criterion_11_simulator(verdict):
    t0 = time.perf_counter()
    model = sim.group_model(catalog.build("heisenberg3").spec)
    spec = model.spec
    rng = random.Random(11)
    worst = drift = 0.0
    for _ in range(50):
        X = sample_vector(spec, rng)
        cert = geodesic_vector(spec, X)
        traj = model.geodesic(X, 1.0, 1000)
        worst = max(worst, sim.compare(traj, model.orbit(X, cert.Z, traj.times)))
        drift = max(drift, sim.speed_drift(model.metric, traj))
    X = spec.from_m([1, 0, 1])
    ref = model.orbit(X, geodesic_vector(spec, X).Z, np.linspace(0.0, 1.0, 2))
    orders = sim.convergence_order(ref, model.metric, model.initial_velocity(X), 1.0, (10, 20, 40))
    sol = sim.group_model(catalog.build("e11_sol").spec)
    Xs = sol.spec.from_m([0, 1, 0])
    straj = sol.geodesic(Xs, 1.0, 1000)
    sdev = sim.compare(straj, sol.orbit(Xs, [0, 0, 0], straj.times))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-7 and drift <= 1e-9 and all(3.7 <= p <= 4.3 for p in orders) and sdev > 1e-3 and dt < 120
    verdict(11, ok, f"orbit vs RK4 {worst:.2e}, speed drift {drift:.2e}, orders "
                    f"{', '.join(f'{p:.3f}' for p in orders)}, sol deviation {sdev:.3f}, {dt:.1f}s")


REPORT_SCRIPT = """
from goorbit import catalog, go
for t in catalog.names() + ['sl2cover_nr:2,1', 'euclidean:5']:
    e = catalog.build_target(t)
    print(catalog.run_all(e, samples=100, seed=5).render())
    print(go.verdict_report(e.spec, go.check_go(e.spec, 50, seed=9)).render())
"""


def test_criterion_12_determinism(verdict):
    outs = []
    for hashseed in ("1", "2"):
        env = {**os.environ, "PYTHONHASHSEED": hashseed}
        res = subprocess.run([sys.executable, "-c", REPORT_SCRIPT], capture_output=True, env=env, check=True)
        outs.append(res.stdout)
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    verdict(12, ok, f"two runs, {len(outs[0])} bytes each, identical={outs[0] == outs[1]}")
