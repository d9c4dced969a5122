import numpy as np
import pytest

from clonometry import fock, werner
from clonometry.hilbert import partial_trace, random_density


def _low_fock_density(rng, levels, dim):
    rho = np.zeros((dim, dim), dtype=complex)
    rho[:levels, :levels] = random_density(levels, rng)
    return rho


def test_swap_basics():
    sw = werner.swap_operator(3)
    ket = np.zeros(16)
    ket[1] = 1  # |0,1>
    out = sw @ ket
    assert out[4] == 1 and out.sum() == 1  # |1,0>
    np.testing.assert_array_equal(sw @ sw, np.eye(16))


def test_swap_identities(rng):
    d = 5
    sw = werner.swap_operator(d - 1)
    np.testing.assert_array_equal(partial_trace(sw, [0], [d, d]), np.eye(d))
    np.testing.assert_array_equal(partial_trace(sw, [1], [d, d]), np.eye(d))
    for _ in range(10):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        b = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        np.testing.assert_allclose(sw @ np.kron(a, b), np.kron(b, a) @ sw, atol=1e-13)


def test_swap_displacement_integral():
    levels = 30 // 3 + 1
    oracle = werner.swap_integral_oracle(levels)
    np.testing.assert_allclose(oracle, werner.swap_operator(levels - 1), atol=1e-3)


def test_symmetrizer_routes():
    s2 = werner.symmetrizer_s2_cv(40)
    np.testing.assert_allclose(s2 @ s2, s2, atol=1e-14)
    np.testing.assert_allclose(s2, s2.conj().T, atol=0)
    parity = werner.symmetrizer_s2_cv(40, route="parity")
    n = np.arange(41)
    low = np.logical_and.outer(n <= 20, n <= 20).reshape(-1)
    np.testing.assert_allclose(parity[np.ix_(low, low)], s2[np.ix_(low, low)], atol=1e-4)
    mask = werner.sector_mask(40)
    np.testing.assert_allclose(parity[np.ix_(mask, mask)], s2[np.ix_(mask, mask)], atol=1e-10)
    with pytest.raises(ValueError):
        werner.symmetrizer_s2_cv(4, route="other")


def test_symmetrizer_on_coherent_pair():
    space = fock.FockSpace(30)
    ca, cb = fock.coherent_state(space, 0.5), fock.coherent_state(space, -0.3)
    out = werner.symmetrizer_s2_cv(space) @ np.kron(ca, cb)
    target = np.kron(ca, cb) + np.kron(cb, ca)
    fid = abs(np.vdot(target, out)) ** 2 / (np.vdot(target, target).real * np.vdot(out, out).real)
    assert fid > 1 - 1e-12


def test_thermal_weight():
    th = werner.ThermalWeight(0.9, tail=1e-8)
    assert th.tail_bound <= 1e-8
    assert th.trace == pytest.approx(th.trace_exact, abs=1e-8)
    with pytest.raises(ValueError):
        werner.ThermalWeight(1.0)
    with pytest.raises(ValueError):
        werner.ThermalWeight(0.0)


@pytest.mark.parametrize("lam", [0.5, 0.9])
def test_k_factor_vacuum(lam):
    th = werner.ThermalWeight(lam, tail=1e-12)
    vac = np.array([[1.0]])
    assert werner.k_factor(vac, th) == pytest.approx(2 / (1 / (1 - lam) + 1), rel=1e-10)


@pytest.mark.parametrize("lam", [0.5, 0.9, 0.99])
def test_trace_preservation(rng, lam):
    th = werner.ThermalWeight(lam, tail=1e-6)
    for _ in range(10):
        res = werner.regularized_clone(_low_fock_density(rng, 4, 6), th, dense=False)
        assert res.trace == pytest.approx(1, abs=1e-6)
        assert np.trace(res.reduced).real == pytest.approx(1, abs=1e-6)


def test_dense_output_and_reductions(rng):
    th = werner.ThermalWeight(0.6, tail=1e-6)
    rho = _low_fock_density(rng, 4, 6)
    res = werner.regularized_clone(rho, th, dense=True)
    d = th.dim
    assert np.trace(res.output).real == pytest.approx(1, abs=1e-6)
    r1 = partial_trace(res.output, [0], [d, d])
    r2 = partial_trace(res.output, [1], [d, d])
    np.testing.assert_allclose(r1, r2, atol=1e-8)
    np.testing.assert_allclose(r1, res.reduced, atol=1e-12)
    assert np.linalg.eigvalsh(res.output).min() > -1e-10
    k = res.k_factor
    expected = k * werner.symmetrizer_s2_cv(th.nmax) @ np.kron(werner._embed(rho, d), np.diag(th.diag)) \
        @ werner.symmetrizer_s2_cv(th.nmax)
    np.testing.assert_allclose(res.output, expected, atol=1e-14)


def test_depolarizing_limit():
    th = werner.ThermalWeight(0.99, tail=1e-6)
    vac = fock.coherent_state(20, 0)
    res = werner.regularized_clone(vac, th)
    assert res.output is None
    dev = np.max(np.abs(res.reduced - werner.depolarizing_target(vac, th)))
    assert dev <= 5e-3


def test_refuses_tail_violations():
    with pytest.raises(fock.TruncationError):
        werner.regularized_clone(np.array([1.0]), werner.ThermalWeight(0.99, nmax=100))
    with pytest.raises(fock.TruncationError):
        werner.regularized_clone(fock.coherent_state(6, 2.0), 0.5)


def test_nonlinearity_vanishes(rng):
    rho1 = _low_fock_density(rng, 3, 4)
    rho2 = np.diag([0, 0, 0, 1.0])
    gaps = []
    for lam in (0.8, 0.9, 0.95, 0.99):
        th = werner.ThermalWeight(lam, tail=1e-6)
        k1, k2 = werner.k_factor(rho1, th), werner.k_factor(rho2, th)
        gaps.append(abs(k1 - k2) / max(k1, k2))
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_povm_g_properties():
    th = werner.ThermalWeight(0.95, tail=1e-3)
    g = werner.povm_g(0.4, -0.3, th)
    assert np.linalg.eigvalsh(g.exact).min() >= -1e-8
    d = th.dim
    rot = np.diag(np.exp(-1j * np.pi * np.arange(d) / 2))
    # rotating by -pi/2 in phase space maps G(x, y) to G(y, -x)
    np.testing.assert_allclose(rot @ g.exact @ rot.conj().T, werner.povm_g(-0.3, -0.4, th).exact, atol=1e-12)


def test_povm_g_exact_vs_asymptotic():
    th = werner.ThermalWeight(0.95, tail=1e-3)
    low = slice(0, 11)
    for state in (None, np.array([1.0])):
        g = werner.povm_g(0.4, -0.3, th, state=state)
        diff = np.abs(np.linalg.eigvalsh((g.exact - g.asymptotic)[low, low])).sum()
        ref = np.abs(np.linalg.eigvalsh(g.asymptotic[low, low])).sum()
        assert diff / ref <= 0.10


def test_povm_g_dense_route():
    th = werner.ThermalWeight(0.6, tail=1e-6)
    g = werner.povm_g(0.2, 0.5, th)
    left = werner.povm_g_dense(0.2, 0.5, th, "left")
    right = werner.povm_g_dense(0.2, 0.5, th, "right")
    np.testing.assert_allclose(left, right, atol=1e-14)
    np.testing.assert_allclose(g.exact, g.k_factor * left, atol=1e-13)
    with pytest.raises(ValueError):
        werner.povm_g_dense(0, 0, werner.ThermalWeight(0.95, tail=1e-3))


def test_moments_vacuum_scan():
    excess = []
    for lam in (0.8, 0.9, 0.95):
        rep = werner.moments_g(lam, np.array([1.0]))
        assert rep.passed, rep.failures()
        row = rep["excess x^2"]
        assert abs(row.measured - row.target) / row.target <= 0.10
        assert abs(rep["<x>"].measured) < 1e-12
        assert rep.diagnostics["exceeds_optimum_x"]
        excess.append(row.measured)
    assert all(a < b for a, b in zip(excess, excess[1:]))
    assert excess[1] > 1


def test_moments_coherent_first_moment():
    th = werner.ThermalWeight(0.95, tail=1e-3)
    rep = werner.moments_g(th, fock.coherent_state(th.nmax, 0.5))
    assert rep["<x>"].measured == pytest.approx(0.25, abs=5e-2)
    assert rep["<x> closed form"].passed


def test_moments_state_normalization_is_a_diagnostic():
    rep = werner.moments_g(0.95, np.array([1.0]), k_mode="state")
    assert rep["normalization"].measured == pytest.approx(1, abs=1e-3)
    with pytest.raises(ValueError):
        werner.moments_g(0.9, np.array([1.0]), k_mode="bad")


def test_werner_scan_fit():
    rep = werner.werner_scan([0.8, 0.9, 0.95], np.array([1.0]))
    assert rep.passed
    assert rep.diagnostics["increasing"]
    assert rep.diagnostics["fit_slope"] == pytest.approx(1 / 8, rel=0.10)


def test_covariance_comparison():
    rep = werner.covariance_comparison(0.5, 1.0, 0.5)
    assert rep.passed, rep.failures()
    assert rep["rank P"].measured == 21
    assert rep["rank S2"].measured == 231
    assert rep.diagnostics["werner_covariance_distance"] > 1e-2
    assert werner.covariance_comparison(0.0, 1.0, 0.5)["covariance trace distance"].measured < 1e-12
