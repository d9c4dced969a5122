"""Regularized universal 1 -> 2 cloning for a single bosonic mode.

The universal cloner needs an identity ancilla, which is not normalizable in
infinite dimension. Replacing it with the thermal operator lam^{a^dag a}
gives

    T(rho) = K S2 (rho (x) lam^{a^dag a}) S2,   S2 = (1 + SWAP)/2,
    K = 2 / Tr[(1 + rho) lam^{n}],

which is trace preserving but depends on rho through K. As lam -> 1 each
clone approaches (rho + thermal)/2, but separate X and Y measurements on the
clones have second moments growing like 2 lam/(1 - lam).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, log, sqrt

import numpy as np
from numpy.polynomial.hermite import hermgauss

from ._config import TOL
from .fock import (FockSpace, QuadratureGrid, TruncationError, _input_components, _space,
                   beamsplitter_v, coherent_state, displacement, displacement_elements, mode_operators,
                   projector_pca, quadrature_eigenstate, quadrature_eigenstates, cv_cloning_map)
from .hilbert import partial_trace, trace_distance
from .reports import MomentReport

DENSE_NMAX = 40


@dataclass(frozen=True)
class ThermalWeight:
    """Unnormalized thermal operator lam^{a^dag a}, stored as its diagonal."""

    lam: float
    nmax: int | None = None
    tail: float = 1e-8

    def __post_init__(self):
        if not 0 < self.lam < 1:
            raise ValueError("lambda must lie in (0, 1)")
        if self.nmax is None:
            object.__setattr__(self, "nmax", self.cutoff_for(self.lam, self.tail))

    @staticmethod
    def cutoff_for(lam: float, tail: float) -> int:
        """Smallest nmax with lam^(nmax+1)/(1-lam) <= tail."""
        return max(1, ceil(log(tail * (1 - lam)) / log(lam)) - 1)

    @property
    def dim(self) -> int:
        return self.nmax + 1

    @property
    def diag(self) -> np.ndarray:
        return self.lam ** np.arange(self.dim)

    @property
    def tail_bound(self) -> float:
        return self.lam ** (self.nmax + 1) / (1 - self.lam)

    @property
    def trace(self) -> float:
        return float(self.diag.sum())

    @property
    def trace_exact(self) -> float:
        return 1 / (1 - self.lam)

    def resized(self, nmax: int) -> "ThermalWeight":
        return ThermalWeight(self.lam, nmax, self.tail)


@dataclass
class RegularizedMapResult:
    k_factor: float
    lam: ThermalWeight
    reduced: np.ndarray
    output: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def trace(self) -> float:
        return self.diagnostics["trace"]


# ---------------------------------------------------------------------------
# swap and symmetrizer

def swap_operator(space) -> np.ndarray:
    """Exact SWAP |m, n> -> |n, m> on two truncated modes."""
    d = _space(space).dim
    out = np.zeros((d * d, d * d))
    m, n = np.divmod(np.arange(d * d), d)
    out[n * d + m, m * d + n] = 1.0
    return out


def symmetrizer_s2_cv(space, route: str = "swap") -> np.ndarray:
    """(1 + SWAP)/2, or V (even-parity projector on c (x) 1) V^dag.

    The parity route is exact on photon-number sectors up to nmax.
    """
    space = _space(space)
    d = space.dim
    if route == "swap":
        return 0.5 * (np.eye(d * d) + swap_operator(space))
    if route == "parity":
        v = beamsplitter_v(space)
        even = np.diag((np.arange(d) % 2 == 0).astype(float))
        return v @ np.kron(even, np.eye(d)) @ v.conj().T
    raise ValueError("route must be 'swap' or 'parity'")


def sector_mask(space) -> np.ndarray:
    """Boolean mask of two-mode basis states with total photon number <= nmax."""
    space = _space(space)
    n = np.arange(space.dim)
    return (np.add.outer(n, n) <= space.nmax).reshape(-1)


def swap_integral_oracle(levels: int, nodes: int = 41) -> np.ndarray:
    """(1/pi) int d^2alpha D(alpha) (x) D^dag(alpha), restricted to ``levels`` per mode.

    Gauss-Hermite in each real axis; the matrix elements carry an exp(-|alpha|^2)
    envelope times a polynomial, so the rule is exact up to rounding.
    """
    t, w = hermgauss(nodes)
    ax, ay = np.meshgrid(t, t, indexing="ij")
    alpha = ax + 1j * ay
    weights = np.outer(w, w) * np.exp(ax ** 2 + ay ** 2) / np.pi
    dmat = displacement_elements(alpha, levels)
    ddag = np.conj(np.swapaxes(dmat, 0, 1))
    out = np.einsum("mnxy,pqxy,xy->mpnq", dmat, ddag, weights)
    return out.reshape(levels * levels, levels * levels)


# ---------------------------------------------------------------------------
# regularized map

def k_factor(rho: np.ndarray, lam: ThermalWeight) -> float:
    """K = 2 / Tr[(1 + rho) lam^{n}]."""
    tau = lam.diag
    d = rho.shape[0]
    if d > tau.size:
        raise ValueError("input dimension exceeds the thermal cutoff")
    return 2 / (tau.sum() + float(np.real(np.sum(np.diag(rho) * tau[:d]))))


def _embed(rho: np.ndarray, d: int) -> np.ndarray:
    out = np.zeros((d, d), dtype=complex)
    out[: rho.shape[0], : rho.shape[1]] = rho
    return out


def _as_density(state) -> np.ndarray:
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        arr = np.outer(arr, arr.conj()) / np.vdot(arr, arr).real
    return arr


def regularized_clone(state, lam: ThermalWeight | float, dense: bool | None = None,
                      tail: float = 1e-6) -> RegularizedMapResult:
    """Apply the regularized cloner to a single-mode input.

    The single-clone state is always returned, from
    Tr_2[T(rho)] = (K/4)(rho Tr tau + tau + tau rho + rho tau). The full
    two-mode output is built only when ``dense`` (default: nmax <= 40).
    """
    rho = _as_density(state)
    if not isinstance(lam, ThermalWeight):
        lam = ThermalWeight(float(lam), tail=tail)
    if lam.tail_bound > tail:
        raise TruncationError(f"thermal tail {lam.tail_bound:.2e} exceeds {tail:.0e}")
    top = float(np.real(rho[-1, -1]))
    if rho.shape[0] > 1 and top > tail:
        raise TruncationError(f"input population {top:.2e} in its top Fock level exceeds {tail:.0e}")
    if rho.shape[0] > lam.dim:
        lam = lam.resized(rho.shape[0] - 1)
    d = lam.dim
    rho = _embed(rho, d)
    tau = lam.diag
    k = k_factor(rho, lam)
    tau_rho = tau[:, None] * rho
    reduced = k / 4 * (rho * tau.sum() + np.diag(tau) + tau_rho + tau_rho.conj().T)
    trace = k / 4 * 2 * (tau.sum() * np.trace(rho).real + np.trace(tau_rho).real)
    result = RegularizedMapResult(k, lam, reduced, diagnostics={
        "trace": float(trace), "tail_bound": lam.tail_bound, "nmax": lam.nmax})
    if dense is None:
        dense = lam.nmax <= DENSE_NMAX
    if dense:
        s2 = symmetrizer_s2_cv(lam.nmax)
        out = k * s2 @ np.kron(rho, np.diag(tau)) @ s2
        result.output = out
        result.diagnostics["trace_dense"] = float(np.trace(out).real)
    return result


def depolarizing_target(state, lam: ThermalWeight) -> np.ndarray:
    """(rho + lam^{n}/Tr lam^{n}) / 2, the lam -> 1 form of each clone."""
    rho = _embed(_as_density(state), lam.dim)
    return 0.5 * (rho + np.diag(lam.diag) / lam.trace)


# ---------------------------------------------------------------------------
# measurement on the clones

@dataclass
class GPovm:
    exact: np.ndarray
    asymptotic: np.ndarray
    k_factor: float
    k_mode: str


def _g_unnormalized(space: FockSpace, lam: ThermalWeight, x: float, y: float) -> np.ndarray:
    # Tr_a[(1 (x) tau) S2 (|x><x| (x) |y><y|) S2] with S2|x,y> = (|x,y> + |y,x>)/2
    kx = quadrature_eigenstate(space, x, "x")
    ky = quadrature_eigenstate(space, y, "y")
    m = 0.5 * (np.outer(kx, ky) + np.outer(ky, kx))
    return (m * lam.diag[None, :]) @ m.conj().T


def povm_g(x: float, y: float, lam: ThermalWeight | float, state=None) -> GPovm:
    """Clone-measurement POVM element G(x, y) of the regularized cloner.

    ``exact`` is K Tr_a[(1 (x) lam^{n}) S2 (|x><x| (x) |y><y|_Y) S2] with K
    from ``state`` when given, otherwise the state-independent 2/Tr lam^{n}.
    ``asymptotic`` is the four-term expansion with prefactor (1 - lam)/2.
    """
    lam = lam if isinstance(lam, ThermalWeight) else ThermalWeight(float(lam))
    space = FockSpace(lam.nmax)
    if state is not None:
        k = k_factor(_embed(_as_density(state), lam.dim), lam)
        mode = "state"
    else:
        k = 2 / lam.trace
        mode = "lambda"
    exact = k * _g_unnormalized(space, lam, x, y)
    kx = quadrature_eigenstate(space, x, "x")
    ky = quadrature_eigenstate(space, y, "y")
    tau = lam.diag

    def tau_elem(u, v):
        return np.sum(u.conj() * tau * v)

    asym = (1 - lam.lam) / 2 * (
        tau_elem(ky, ky) * np.outer(kx, kx.conj()) + tau_elem(kx, kx) * np.outer(ky, ky.conj())
        + tau_elem(kx, ky) * np.outer(kx, ky.conj()) + tau_elem(ky, kx) * np.outer(ky, kx.conj()))
    return GPovm(exact, asym, k, mode)


def povm_g_dense(x: float, y: float, lam: ThermalWeight, tau_side: str = "left") -> np.ndarray:
    """Unnormalized G(x, y) from the full two-mode operators (small nmax only).

    ``tau_side`` places the thermal factor left or right of the symmetrized
    projector inside the partial trace; both must agree.
    """
    if lam.nmax > DENSE_NMAX:
        raise ValueError(f"dense route limited to nmax <= {DENSE_NMAX}")
    space = FockSpace(lam.nmax)
    d = space.dim
    s2 = symmetrizer_s2_cv(space)
    ket = np.kron(quadrature_eigenstate(space, x, "x"), quadrature_eigenstate(space, y, "y"))
    e = s2 @ np.outer(ket, ket.conj()) @ s2
    t = np.kron(np.eye(d), np.diag(lam.diag))
    inner = t @ e if tau_side == "left" else e @ t
    return partial_trace(inner, [0], [d, d])


def g_distribution(lam: ThermalWeight, state, grid: QuadratureGrid | None = None,
                   k: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Outcome density of G(x, y) for a pure input, on the grid."""
    space = FockSpace(lam.nmax)
    grid = grid or QuadratureGrid.for_space(space)
    pts = grid.points
    comps = _input_components(_embed(_as_density(state), lam.dim), lam.dim)
    tau = lam.diag
    kx = quadrature_eigenstates(space, pts, "x")
    ky = quadrature_eigenstates(space, pts, "y")
    txx = np.einsum("ni,n,ni->i", kx.conj(), tau, kx).real
    tyy = np.einsum("ni,n,ni->i", ky.conj(), tau, ky).real
    tyx = (ky.conj().T * tau) @ kx  # [j, i] = <y_j| tau |x_i>
    if k is None:
        rho = sum(w * np.outer(v, v.conj()) for w, v in comps)
        k = k_factor(rho, lam)
    p = np.zeros((pts.size, pts.size))
    for weight, phi in comps:
        u = kx.conj().T @ phi  # <x_i|phi>
        v = ky.conj().T @ phi  # <y_j|phi>
        cross = 2 * np.real(u[:, None] * v.conj()[None, :] * tyx.T)
        p += weight * k / 4 * (np.abs(u[:, None]) ** 2 * tyy[None, :]
                               + np.abs(v[None, :]) ** 2 * txx[:, None] + cross)
    return pts, p


def second_moment_excess_closed_form(lam: float) -> float:
    return (1 + 2 * lam / (1 - lam)) / 8


def moments_g(lam: ThermalWeight | float, state, grid: QuadratureGrid | None = None,
              k_mode: str = "lambda", tail: float = 1e-3) -> MomentReport:
    """Grid moments of the clone measurement through G(x, y).

    ``k_mode="lambda"`` normalizes with 2/Tr lam^{n}, the prefactor of the
    asymptotic expansion; ``"state"`` uses the input-dependent K. The
    excess is the x second moment minus half the input <X^2>.
    """
    if not isinstance(lam, ThermalWeight):
        lam = ThermalWeight(float(lam), tail=tail)
    space = FockSpace(lam.nmax)
    grid = grid or QuadratureGrid.for_space(space)
    rho = _embed(_as_density(state), lam.dim)
    if k_mode == "lambda":
        k = 2 / lam.trace
    elif k_mode == "state":
        k = k_factor(rho, lam)
    else:
        raise ValueError("k_mode must be 'lambda' or 'state'")
    pts, p = g_distribution(lam, rho, grid, k)
    h2 = grid.step ** 2
    xg, yg = np.meshgrid(pts, pts, indexing="ij")
    # square the quadratures in a padded space so the top level is not clipped
    _, xpad, ypad = mode_operators(lam.nmax + 2)
    d = lam.dim
    tau = np.diag(lam.diag)

    def expect(op):
        return float(np.trace(rho @ op).real)

    report = MomentReport(f"regularized cloner measurement, lambda={lam.lam:g}")
    report.diagnostics.update(lam=lam.lam, nmax=lam.nmax, k=k, k_mode=k_mode,
                              half_width=grid.half_width, step=grid.step)
    report.add("normalization", h2 * p.sum(), None)
    closed = second_moment_excess_closed_form(lam.lam)
    for label, g, pad in (("x", xg, xpad), ("y", yg, ypad)):
        op, op2 = pad[:d, :d], (pad @ pad)[:d, :d]
        first = h2 * np.sum(g * p)
        second = h2 * np.sum(g ** 2 * p)
        exact_first = k / 4 * (lam.trace * expect(op) + np.trace(op @ tau).real
                               + expect(tau @ op + op @ tau))
        exact_second = k / 4 * (lam.trace * expect(op2) + np.trace(op2 @ tau).real
                                + expect(tau @ op2 + op2 @ tau))
        report.add(f"<{label}>", first, expect(op) / 2, TOL.werner_first_moment,
                   note="half the input quadrature")
        report.add(f"<{label}> closed form", first, exact_first, 1e-6)
        report.add(f"<{label}^2> closed form", second, exact_second, 1e-6 * max(1.0, exact_second))
        excess = second - expect(op2) / 2
        report.add(f"excess {label}^2", excess, closed, TOL.werner_rel_fit * closed,
                   note="(1/8)(1 + 2 lam/(1-lam))")
        rescaled = 4 * (second - first ** 2) - (expect(op2) - expect(op) ** 2)
        report.add(f"rescaled added noise {label}", rescaled, None,
                   note="variance of 2x minus input variance; optimum 1/4")
        report.diagnostics[f"exceeds_optimum_{label}"] = bool(rescaled > 0.25)
    return report


def werner_scan(lams, state, k_mode: str = "lambda") -> MomentReport:
    """Excess x second moment over a lambda scan and its fit a + b * 2lam/(1-lam)."""
    report = MomentReport("regularized cloner lambda scan")
    xs, ys = [], []
    for lam in lams:
        sub = moments_g(lam, state, k_mode=k_mode)
        row = sub["excess x^2"]
        report.add(f"excess x^2 @ {lam:g}", row.measured, row.target, row.tolerance)
        xs.append(2 * lam / (1 - lam))
        ys.append(row.measured)
    if len(xs) >= 2:
        b, a = np.polyfit(xs, ys, 1)
        report.diagnostics.update(fit_intercept=float(a), fit_slope=float(b))
    report.diagnostics["increasing"] = bool(np.all(np.diff(ys) > 0))
    return report


# ---------------------------------------------------------------------------
# comparison with the displacement-covariant cloner

def _fidelity(state, target) -> float:
    state = state / np.linalg.norm(state)
    target = target / np.linalg.norm(target)
    return float(abs(np.vdot(target, state)) ** 2)


def covariance_comparison(alpha: complex, sigma: float = 1.0, lam: float = 0.5,
                          beta: complex = -0.3, state=None, nmax: int = 40,
                          rank_nmax: int = 20) -> MomentReport:
    """Displacement covariance of the non-universal cloner versus the Werner one.

    Checks T(D rho D^dag) = D^{(x)2} T(rho) D^dag^{(x)2} for the projector
    cloner, compares the ranks of P and S2, and the action of both projectors
    on |alpha>|beta>.
    """
    space = FockSpace(nmax)
    d = space.dim
    phi = coherent_state(space, 0.2 + 0.1j) if state is None else np.asarray(state, dtype=complex)
    rho = np.outer(phi, phi.conj())
    dis = displacement(space, alpha)
    lhs = cv_cloning_map(dis @ rho @ dis.conj().T, sigma, space)
    d2 = np.kron(dis, dis)
    rhs = d2 @ cv_cloning_map(rho, sigma, space) @ d2.conj().T
    report = MomentReport(f"covariance comparison, alpha={alpha}")
    report.add("covariance trace distance", trace_distance(lhs, rhs), 0.0, TOL.covariance)

    rspace = FockSpace(rank_nmax)
    p = projector_pca(rspace, 1.0)
    s2 = symmetrizer_s2_cv(rspace)
    rank_p = int(np.sum(np.linalg.eigvalsh(p) > 0.5))
    rank_s = int(np.sum(np.linalg.eigvalsh(s2) > 0.5))
    rd = rspace.dim
    report.add("rank P", rank_p, rd, 0)
    report.add("rank S2", rank_s, rd * (rd + 1) // 2, 0)
    report.diagnostics["P_smaller_than_S2"] = rank_p < rank_s

    ca, cb = coherent_state(space, alpha), coherent_state(space, beta)
    sym_out = symmetrizer_s2_cv(space) @ np.kron(ca, cb)
    sym_target = np.kron(ca, cb) + np.kron(cb, ca)
    mid = coherent_state(space, (alpha + beta) / 2)
    p_out = projector_pca(space, 1.0) @ np.kron(ca, cb)
    report.add("S2|a,b> fidelity", _fidelity(sym_out, sym_target), 1.0, 1e-3)
    report.add("P|a,b> fidelity", _fidelity(p_out, np.kron(mid, mid)), 1.0, 1e-3)

    # the regularized Werner map is not covariant: its ancilla is not displaced
    th = ThermalWeight(lam, tail=1e-6)
    if th.nmax <= 30:
        wspace = FockSpace(th.nmax)
        wd = displacement(wspace, alpha)
        wphi = coherent_state(wspace, 0.2 + 0.1j)
        wr = np.outer(wphi, wphi.conj())
        lw = regularized_clone(wd @ wr @ wd.conj().T, th, dense=True, tail=1e-3).output
        w2 = np.kron(wd, wd)
        rw = w2 @ regularized_clone(wr, th, dense=True, tail=1e-3).output @ w2.conj().T
        report.diagnostics["werner_covariance_distance"] = trace_distance(lw, rw)
    return report
