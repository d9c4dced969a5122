"""Universal qubit cloning and the joint spin measurement built on it.

The optimal universal N -> M cloner outputs

    rho_M = (N+1)/(M+1) S_M (|psi><psi|^{(x)N} (x) 1^{(x)(M-N)}) S_M

with S_M the projector onto the symmetric subspace. Measuring sigma_x,
sigma_y and sigma_z on the three outputs of the 1 -> 3 cloner gives a joint
spin measurement on the input, compared here with the spin-coherent POVM.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterator

import numpy as np
from numpy.polynomial.legendre import leggauss

from ._config import TOL
from .hilbert import Ket, matrix_exponential, partial_trace, permutation_operator
from .reports import MomentReport

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SX, SY, SZ)

OutcomeTriple = tuple[int, int, int]
OUTCOMES: tuple[OutcomeTriple, ...] = tuple(itertools.product((1, -1), repeat=3))

SHRINK_13 = Fraction(5, 9)


@dataclass(frozen=True)
class CloneParams:
    n_in: int
    m_out: int
    site_dim: int = 2

    def __post_init__(self):
        if not 1 <= self.n_in <= self.m_out:
            raise ValueError(f"need 1 <= n_in <= m_out, got N={self.n_in}, M={self.m_out}")
        if self.site_dim != 2:
            raise ValueError("qubit cloning is defined for site_dim == 2")


# ---------------------------------------------------------------------------
# symmetric subspace

def symmetric_basis(m_sites: int, site_dim: int = 2) -> np.ndarray:
    """Orthonormal symmetrized basis kets as columns, one per occupation multiset.

    For qubits these are the Dicke states |s_0>, ..., |s_M>.
    """
    if m_sites < 1:
        raise ValueError("m_sites must be >= 1")
    total = site_dim ** m_sites
    multisets = list(itertools.combinations_with_replacement(range(site_dim), m_sites))
    basis = np.zeros((total, len(multisets)), dtype=complex)
    weights = site_dim ** np.arange(m_sites - 1, -1, -1)
    for col, ms in enumerate(multisets):
        for word in set(itertools.permutations(ms)):
            basis[int(np.dot(word, weights)), col] = 1.0
        basis[:, col] /= np.linalg.norm(basis[:, col])
    return basis


@lru_cache(maxsize=None)
def _symmetric_projector(m_sites: int, site_dim: int) -> np.ndarray:
    b = symmetric_basis(m_sites, site_dim)
    s = b @ b.conj().T
    s.setflags(write=False)
    return s


def symmetric_projector(m_sites: int, site_dim: int = 2) -> np.ndarray:
    """Projector onto the symmetric subspace of ``m_sites`` sites."""
    return _symmetric_projector(int(m_sites), int(site_dim))


def symmetric_projector_recursive(m_sites: int, site_dim: int = 2) -> np.ndarray:
    """Same projector, built as S_M = (1/M)(1 + sum_i Pi_(iM)) (S_{M-1} (x) 1)."""
    if m_sites < 1:
        raise ValueError("m_sites must be >= 1")
    s = np.eye(site_dim, dtype=complex)
    for m in range(2, m_sites + 1):
        dims = [site_dim] * m
        acc = np.eye(site_dim ** m, dtype=complex)
        for i in range(m - 1):
            perm = list(range(m))
            perm[i], perm[m - 1] = m - 1, i
            acc = acc + permutation_operator(perm, dims)
        s = acc @ np.kron(s, np.eye(site_dim)) / m
    return s


def symmetric_dimension(m_sites: int, site_dim: int = 2) -> int:
    return comb(site_dim + m_sites - 1, m_sites)


# ---------------------------------------------------------------------------
# cloning channel

def _as_density(state) -> tuple[np.ndarray, bool]:
    if isinstance(state, Ket):
        state = state.amplitudes
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        v = state / np.linalg.norm(state)
        return np.outer(v, v.conj()), True
    return state, False


def clone(params: CloneParams, state) -> np.ndarray:
    """Output of the optimal universal N -> M cloner on M qubit sites.

    ``state`` is a single-qubit ket or density matrix; N copies of it are fed
    in. Mixed inputs are only accepted for N == 1, where the map is linear.
    """
    rho, pure = _as_density(state)
    if rho.shape != (2, 2):
        raise ValueError("clone expects a single-qubit input")
    if not pure and params.n_in > 1:
        raise ValueError("mixed inputs are only supported for n_in == 1")
    n, m = params.n_in, params.m_out
    s = symmetric_projector(m, 2)
    inp = rho
    for _ in range(n - 1):
        inp = np.kron(inp, rho)
    inp = np.kron(inp, np.eye(2 ** (m - n)))
    return (n + 1) / (m + 1) * (s @ inp @ s)


def fidelity_formula(params: CloneParams) -> Fraction:
    n, m = params.n_in, params.m_out
    return Fraction(m * (n + 1) + n, m * (n + 2))


def shrinking_factor(params: CloneParams) -> Fraction:
    n, m = params.n_in, params.m_out
    return Fraction(n * (m + 2), m * (n + 2))


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    return np.array([np.trace(rho @ p).real for p in PAULIS])


def single_clone(rho_m: np.ndarray, m_out: int, site: int = 0) -> np.ndarray:
    return partial_trace(rho_m, [site], [2] * m_out)


# ---------------------------------------------------------------------------
# joint spin measurement from three clones

def product_spin_povm(m: OutcomeTriple, assignment: tuple[int, int, int] = (0, 1, 2)) -> np.ndarray:
    """Omega(m): sigma_{assignment[k]} measured on clone k, outcome m[axis]."""
    _check_outcome(m)
    factors = [I2 + m[axis] * PAULIS[axis] for axis in assignment]
    return np.kron(np.kron(factors[0], factors[1]), factors[2]) / 8


def _check_outcome(m) -> None:
    if len(m) != 3 or any(v not in (1, -1) for v in m):
        raise ValueError(f"outcome triple must have entries +-1, got {m}")


def derived_povm(m: OutcomeTriple, assignment: tuple[int, int, int] = (0, 1, 2)) -> np.ndarray:
    """(1/2) Tr_{2,3}[S_3 Omega(m) S_3], the POVM seen by the input qubit."""
    s3 = symmetric_projector(3, 2)
    return 0.5 * partial_trace(s3 @ product_spin_povm(m, assignment) @ s3, [0], [2, 2, 2])


def closed_form_povm(m: OutcomeTriple, shrink: float = 5 / 9) -> np.ndarray:
    """(1/8)[1 + shrink * m . sigma]; ``shrink=1`` gives the unphysical ideal."""
    _check_outcome(m)
    return (I2 + shrink * sum(mi * p for mi, p in zip(m, PAULIS))) / 8


def derived_povm_family(assignment: tuple[int, int, int] = (0, 1, 2)) -> dict[OutcomeTriple, np.ndarray]:
    return {m: derived_povm(m, assignment) for m in OUTCOMES}


def estimate_moments(state) -> MomentReport:
    """Statistics of the clone-based joint spin measurement.

    Outcomes are rescaled to +-9/5 so the component means are unbiased; the
    returned report holds per-axis means and variances and the total
    uncertainty sum_a <J_a^2>_e - <J_a>_e^2 with J = sigma/2.
    """
    rho, pure = _as_density(state)
    povm = derived_povm_family()
    probs = {m: float(np.trace(rho @ e).real) for m, e in povm.items()}
    scale = 9 / 5
    report = MomentReport("clone-based joint spin measurement")
    total = 0.0
    for axis, name in enumerate("xyz"):
        measured = sum(m[axis] * p for m, p in probs.items())
        estimate = scale * measured
        second = scale ** 2 * sum(m[axis] ** 2 * p for m, p in probs.items())
        true_mean = np.trace(rho @ PAULIS[axis]).real
        report.add(f"<sigma_{name}>_m", measured, 5 / 9 * true_mean, TOL.uncertainty)
        report.add(f"<sigma_{name}>_e", estimate, true_mean, TOL.uncertainty)
        variance = (second - estimate ** 2) / 4
        report.add(f"<dJ_{name}^2>_e", variance, None)
        total += variance
    s2 = float(np.sum(bloch_vector(rho) ** 2))
    report.add("<dJ^2>_e", total, (243 - 25 * s2) / 100, TOL.uncertainty,
               note="109/50 for pure inputs")
    report.diagnostics["pure_input"] = pure
    report.diagnostics["probabilities"] = {"".join("+" if v > 0 else "-" for v in m): p
                                           for m, p in probs.items()}
    return report


def most_probable_outcome(state) -> OutcomeTriple:
    rho, _ = _as_density(state)
    povm = derived_povm_family()
    return max(OUTCOMES, key=lambda m: np.trace(rho @ povm[m]).real)


# ---------------------------------------------------------------------------
# spin-coherent benchmark

def spin_operators(j: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """J_x, J_y, J_z in the basis m = j, j-1, ..., -j."""
    two_j = round(2 * j)
    if two_j < 1 or abs(two_j - 2 * j) > 1e-12:
        raise ValueError(f"j must be a positive half-integer, got {j}")
    ms = j - np.arange(two_j + 1)
    jp = np.zeros((two_j + 1, two_j + 1), dtype=complex)
    for k in range(1, two_j + 1):
        jp[k - 1, k] = np.sqrt(j * (j + 1) - ms[k] * (ms[k] + 1))
    jx = (jp + jp.conj().T) / 2
    jy = (jp - jp.conj().T) / 2j
    return jx, jy, np.diag(ms).astype(complex)


def spin_coherent_state(j: float, theta: float, phi: float) -> np.ndarray:
    """|n> with n.J|n> = -j|n>, n = (sin t cos p, sin t sin p, cos t)."""
    if not 0 <= theta <= np.pi:
        raise ValueError("theta must lie in [0, pi]")
    jx, jy, jz = spin_operators(j)
    lowest = np.zeros(jz.shape[0], dtype=complex)
    lowest[-1] = 1.0
    rot = matrix_exponential(-1j * phi * jz) @ matrix_exponential(-1j * theta * jy)
    return rot @ lowest


def _coherent_states_on_grid(j: float, thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    # closed-form rotated lowest-weight amplitudes, vectorized over the grid
    two_j = round(2 * j)
    k = np.arange(two_j + 1)  # row k <-> m = j - k
    binom = np.array([factorial(two_j) / (factorial(i) * factorial(two_j - i)) for i in k])
    c = np.cos(thetas / 2)[:, None]
    s = np.sin(thetas / 2)[:, None]
    amp = np.sqrt(binom)[None, :] * s ** (two_j - k)[None, :] * c ** k[None, :]
    amp = amp * (-1.0) ** (two_j - k)[None, :]
    ms = j - k
    phase = np.exp(-1j * np.outer(phis, ms))
    return amp[:, None, :] * phase[None, :, :]


@dataclass
class SpinCoherentPovm:
    """Quadrature discretization of the spin-coherent POVM on the sphere.

    Gauss-Legendre nodes in cos(theta), uniform nodes in phi; weights carry
    the (2j+1)/(4 pi) measure so that sum w |n><n| is the identity.
    """

    j: float
    n_theta: int = 64
    n_phi: int = 128
    thetas: np.ndarray = field(init=False, repr=False)
    phis: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)
    states: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        x, w = leggauss(self.n_theta)
        self.thetas = np.arccos(x)
        self.phis = 2 * np.pi * np.arange(self.n_phi) / self.n_phi
        meas = (2 * self.j + 1) / (4 * np.pi)
        self.weights = meas * np.outer(w, np.full(self.n_phi, 2 * np.pi / self.n_phi))
        self.states = _coherent_states_on_grid(self.j, self.thetas, self.phis)

    @property
    def dim(self) -> int:
        return round(2 * self.j) + 1

    def directions(self) -> np.ndarray:
        t = self.thetas[:, None]
        p = self.phis[None, :]
        return np.stack(np.broadcast_arrays(np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)))

    def integrate(self, fn_values: np.ndarray | float = 1.0) -> np.ndarray:
        """sum over nodes of weight * fn(n) * |n><n|."""
        w = self.weights * fn_values
        return np.einsum("tp,tpi,tpj->ij", w, self.states, self.states.conj())

    def normalization_error(self) -> float:
        return float(np.max(np.abs(self.integrate() - np.eye(self.dim))))


@dataclass
class CoherentMoments:
    first: tuple[np.ndarray, np.ndarray, np.ndarray]
    second: tuple[np.ndarray, np.ndarray, np.ndarray]
    first_sign: int
    second_moment_residuals: tuple[float, float, float]


def coherent_moment_operators(povm: SpinCoherentPovm, tol: float = TOL.sphere_grid) -> CoherentMoments:
    """First/second moment operators of the spin-coherent measurement.

    E1_a = int dmu (j+1) n_a |n><n| and E2_a = int dmu (j+1)^2 n_a^2 |n><n|.
    The sign relating E1_a to J_a is measured, not assumed; the residual of
    E2_a against (j+1)/(j+3/2) [J_a^2 + (j+1)/2] is recorded per axis.
    """
    err = povm.normalization_error()
    if err > tol:
        raise ValueError(f"sphere grid does not resolve the identity (error {err:.2e})")
    j = povm.j
    n = povm.directions()
    spins = spin_operators(j)
    e1 = tuple(povm.integrate((j + 1) * n[a]) for a in range(3))
    e2 = tuple(povm.integrate((j + 1) ** 2 * n[a] ** 2) for a in range(3))
    sign = int(np.sign(np.trace(e1[2] @ spins[2]).real))
    identity = np.eye(povm.dim)
    residuals = tuple(
        float(np.max(np.abs(e2[a] - (j + 1) / (j + 1.5) * (spins[a] @ spins[a] + (j + 1) / 2 * identity))))
        for a in range(3))
    return CoherentMoments(e1, e2, sign, residuals)


def coherent_total_uncertainty(j: float, state, check_bound: bool = True) -> float:
    """j(j+1)^2/(j+3/2) + 3(j+1)^2/(2j+3) - sum_a <J_a>^2, bounded below by 2j+1."""
    rho, _ = _as_density(state)
    spins = spin_operators(j)
    if rho.shape[0] != spins[0].shape[0]:
        raise ValueError("state dimension must be 2j+1")
    mean_sq = sum(np.trace(rho @ s).real ** 2 for s in spins)
    value = j * (j + 1) ** 2 / (j + 1.5) + 3 * (j + 1) ** 2 / (2 * j + 3) - mean_sq
    if check_bound and value < 2 * j + 1 - 1e-9:
        raise AssertionError(f"total uncertainty {value} below the bound {2 * j + 1}")
    return float(value)


def coherent_total_uncertainty_quadrature(povm: SpinCoherentPovm, state) -> float:
    """Same quantity from the quadrature moment operators."""
    rho, _ = _as_density(state)
    mom = coherent_moment_operators(povm)
    second = sum(np.trace(rho @ e).real for e in mom.second)
    first = sum(np.trace(rho @ e).real ** 2 for e in mom.first)
    return float(second - first)


def iter_assignments() -> Iterator[tuple[int, int, int]]:
    return itertools.permutations(range(3))


def pauli_swap_decomposition() -> np.ndarray:
    """(3/4) 1 (x) 1 + (1/4) sum_i sigma_i (x) sigma_i."""
    return 0.75 * np.eye(4) + 0.25 * sum(np.kron(p, p) for p in PAULIS)


def ideal_povm_min_eigenvalue() -> float:
    """Smallest eigenvalue over the outcomes of (1/8)[1 + m . sigma]."""
    return min(np.linalg.eigvalsh(closed_form_povm(m, shrink=1.0)).min() for m in OUTCOMES)
