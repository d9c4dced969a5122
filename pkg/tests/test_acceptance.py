"""One test per acceptance criterion, at the stated tolerances.

Each test records a pass/fail line that pytest prints in its summary.
"""
import time
from fractions import Fraction
from math import sqrt

import numpy as np
import pytest

from clonometry import cli, fock, qubit, runner, werner
from clonometry.hilbert import partial_trace, random_density, random_ket, trace_distance


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def test_01_derived_qubit_povm(record):
    with Timer() as t:
        fam = qubit.derived_povm_family()
        dev = max(np.max(np.abs(fam[m] - qubit.closed_form_povm(m))) for m in qubit.OUTCOMES)
    ok = dev <= 1e-12 and len(fam) == 8 and t.seconds < 1
    record(1, ok, f"derived POVM max deviation {dev:.1e} over 8 outcomes (tol 1e-12)", t.seconds)
    assert ok


def test_02_shrinking_and_fidelity_laws(record, rng):
    worst = 0.0
    with Timer() as t:
        for n in range(1, 5):
            for m in range(n, 5):
                params = qubit.CloneParams(n, m)
                eta = float(qubit.shrinking_factor(params))
                fid = float(qubit.fidelity_formula(params))
                for _ in range(20):
                    psi = random_ket(2, rng)
                    rho_in = np.outer(psi, psi.conj())
                    single = qubit.single_clone(qubit.clone(params, psi), m)
                    worst = max(worst,
                                abs(np.vdot(psi, single @ psi).real - fid),
                                np.max(np.abs(qubit.bloch_vector(single) - eta * qubit.bloch_vector(rho_in))))
    exact = qubit.shrinking_factor(qubit.CloneParams(1, 3)) == Fraction(5, 9)
    ok = worst <= 1e-10 and exact and t.seconds < 30
    record(2, ok, f"eta, F over 1<=N<=M<=4 x 20 inputs: worst {worst:.1e} (tol 1e-10); eta(1,3) == 5/9: {exact}",
           t.seconds)
    assert ok


def test_03_clone_based_total_uncertainty(record, rng):
    with Timer() as t:
        values = [qubit.estimate_moments(random_ket(2, rng))["<dJ^2>_e"].measured for _ in range(20)]
        dev = max(abs(v - 109 / 50) for v in values)
    ok = dev <= 1e-10
    record(3, ok, f"<dJ^2>_e = 2.18, worst deviation {dev:.1e} over 20 pure inputs (tol 1e-10)", t.seconds)
    assert ok


def test_04_spin_coherent_benchmark(record, rng):
    with Timer() as t:
        residual = 0.0
        for j in (0.5, 1.0, 1.5):
            mom = qubit.coherent_moment_operators(qubit.SpinCoherentPovm(j))
            residual = max(residual, *mom.second_moment_residuals)
        povm = qubit.SpinCoherentPovm(0.5)
        totals = [qubit.coherent_total_uncertainty_quadrature(povm, random_ket(2, rng)) for _ in range(10)]
        dev = max(abs(v - 2) for v in totals)
    ok = residual <= 1e-6 and dev <= 1e-8
    record(4, ok, f"second-moment operator residual {residual:.1e} (tol 1e-6); "
                  f"j=1/2 total uncertainty - 2 = {dev:.1e} (tol 1e-8)", t.seconds)
    assert ok


def test_05_ideal_povm_is_not_positive(record):
    with Timer() as t:
        lmin = qubit.ideal_povm_min_eigenvalue()
    ok = lmin < 0 and abs(lmin - (1 - sqrt(3)) / 8) <= 1e-14
    record(5, ok, f"min eigenvalue of (1/8)[1 + m.sigma] = {lmin:.6f}, (1 - sqrt 3)/8 = {(1 - sqrt(3)) / 8:.6f}",
           t.seconds)
    assert ok


def test_06_cv_coherent_state_povm(record):
    space = fock.FockSpace(40)
    axis = np.arange(-1.5, 1.5 + 1e-9, 0.25)
    worst_td = worst_tr = 0.0
    with Timer() as t:
        for x in axis:
            for y in axis:
                f = fock.joint_povm_f(x, y, 1.0, space)
                tr = np.trace(f).real
                coh = fock.coherent_state(space, complex(x, y))
                worst_td = max(worst_td, trace_distance(f / tr, np.outer(coh, coh.conj())))
                worst_tr = max(worst_tr, abs(tr - 1 / np.pi))
    ok = worst_td <= 1e-3 and worst_tr <= 1e-3 and t.seconds < 120
    record(6, ok, f"F(x,y) vs (1/pi)|x+iy><x+iy| on 13x13 grid |x|,|y|<=1.5: trace distance {worst_td:.1e}, "
                  f"|Tr F - 1/pi| {worst_tr:.1e} (tol 1e-3)", t.seconds)
    assert ok


def test_07_minimum_added_noise(record):
    worst = 0.0
    with Timer() as t:
        for sigma in (1.0, 0.7, 1.4):
            phi = np.arctan(sigma ** 2)
            for alpha in (0.0, 0.5 + 0.3j):
                rep = fock.moment_check(sigma, fock.coherent_state(40, alpha))
                names = ["added var +phi", "added var -phi"]
                if sigma == 1.0:
                    names += ["added var x", "added var y"]
                for name in names:
                    row = rep[name]
                    assert row.target == pytest.approx(abs(np.sin(2 * phi)) / 4 if "phi" in name else 0.25)
                    worst = max(worst, row.deviation)
    ok = worst <= 5e-3
    record(7, ok, f"added variance vs (1/4)|sin 2phi| for sigma in 0.7, 1, 1.4: worst {worst:.1e} (tol 5e-3)",
           t.seconds)
    assert ok


def test_08_twin_beam_photons(record):
    with Timer() as t:
        space = fock.FockSpace(40)
        psi = fock.twin_beam(space, 1 / 3)
        n = np.arange(space.dim)
        photons = float(np.sum(np.add.outer(n, n).reshape(-1) * np.abs(psi) ** 2))
    ok = abs(photons - 0.25) <= 1e-8
    record(8, ok, f"twin beam lambda=1/3 mean photons {photons:.12f} (target 1/4, tol 1e-8)", t.seconds)
    assert ok


def test_09_route_crosscheck(record):
    small, big = fock.FockSpace(10), fock.FockSpace(40)
    route = sym = 0.0
    with Timer() as t:
        for alpha in (0, 0.8, -0.8j, 0.5 + 0.6j, -0.4 - 0.3j):
            uc, ua = fock.unitary_route_reductions(fock.coherent_state(small, alpha), small)
            out = fock.clone_channel_cv(fock.coherent_state(big, alpha), 1.0, big)
            pc, pa = (r[:11, :11] for r in fock.clone_reductions(out, big))
            route = max(route, trace_distance(uc, pc), trace_distance(ua, pa))
            sym = max(sym, trace_distance(uc, ua))
    ok = route <= 5e-3 and sym <= 5e-3
    record(9, ok, f"U route (nmax=10) vs P route: {route:.1e}; clone c vs a: {sym:.1e} (tol 5e-3, |alpha|<=0.8)",
           t.seconds)
    assert ok


def test_10_werner_regularization(record, rng):
    with Timer() as t:
        d = 6
        sw = werner.swap_operator(d - 1)
        identities = (np.array_equal(partial_trace(sw, [0], [d, d]), np.eye(d))
                      and np.array_equal(partial_trace(sw, [1], [d, d]), np.eye(d)))
        for _ in range(10):
            a, b = random_density(d, rng), random_density(d, rng)
            identities &= np.allclose(sw @ np.kron(a, b), np.kron(b, a) @ sw, atol=1e-14, rtol=0)
        trace_dev = 0.0
        for lam in (0.5, 0.9, 0.99):
            th = werner.ThermalWeight(lam, tail=1e-6)
            for _ in range(3):
                rho = np.zeros((5, 5), dtype=complex)
                rho[:4, :4] = random_density(4, rng)
                trace_dev = max(trace_dev, abs(werner.regularized_clone(rho, th, dense=False).trace - 1))
        th = werner.ThermalWeight(0.99, tail=1e-6)
        vac = np.array([1.0])
        reduced = werner.regularized_clone(vac, th).reduced
        target = werner.depolarizing_target(vac, th)
        depol = float(np.max(np.abs(reduced - target)))
        depol_td = trace_distance(reduced, target)
        rel = []
        for lam in (0.8, 0.9, 0.95):
            row = werner.moments_g(lam, vac)["excess x^2"]
            rel.append(row.deviation / row.target)
        th = werner.ThermalWeight(0.95, tail=1e-3)
        first = werner.moments_g(th, fock.coherent_state(th.nmax, 0.5))["<x>"]
    ok = (identities and trace_dev <= 1e-6 and depol <= 5e-3 and max(rel) <= 0.10
          and first.deviation <= 5e-2)
    record(10, ok, f"swap identities exact: {bool(identities)}; trace dev {trace_dev:.1e}; depolarizing limit "
                   f"(max entry) {depol:.2e}, trace distance {depol_td:.2e} for reference; excess rel err {', '.join(f'{r:.3f}' for r in rel)}; "
                   f"<x> - <X>/2 = {first.deviation:.1e}", t.seconds)
    assert ok


def test_11_covariance_dichotomy(record):
    with Timer() as t:
        worst = 0.0
        for alpha in (0.5, 0.8j, -0.4 + 0.4j):
            rep = werner.covariance_comparison(alpha, 1.0, 0.5)
            worst = max(worst, rep["covariance trace distance"].measured)
        ranks = (int(rep["rank P"].measured), int(rep["rank S2"].measured))
    ok = worst <= 2e-3 and ranks == (21, 231)
    record(11, ok, f"displacement covariance {worst:.1e} (tol 2e-3); rank P = {ranks[0]}, rank S2 = {ranks[1]} "
                   f"at nmax=20", t.seconds)
    assert ok


def test_12_bundled_sweep(record, tmp_path):
    codes = {}
    with Timer() as t:
        for name in runner.bundled_scenarios():
            codes[name] = cli.main(["run", name, "--strict", "--out", str(tmp_path)])
    ok = len(codes) >= 7 and all(c == 0 for c in codes.values()) and t.seconds < 600
    record(12, ok, f"{len(codes)} bundled scenarios under --strict, exit codes {sorted(set(codes.values()))}",
           t.seconds)
    assert ok
