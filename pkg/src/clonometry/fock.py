"""Continuous-variable 1 -> 2 cloning on truncated Fock spaces.

Conventions: X = (a + a^dag)/2, Y = (a - a^dag)/2i, so the vacuum variance of
either quadrature is 1/4 and [X, Y] = i/2. Two-mode operators act on
``c (x) a`` with ``c`` the input mode; three-mode ones on ``c (x) a (x) b``.

The cloner sends |phi> to (1/2) P (|phi><phi| (x) 1) P, where
P = V (|0><0| (x) 1) V^dag and V = exp[pi/4 (c^dag a - c a^dag)] is a
balanced beam splitter. Measuring X on one clone and Y on the other realizes
the coherent-state POVM (1/pi)|x+iy><x+iy| on the input; conjugating P with
squeezers S(ln sigma) tilts it to a squeezed-state POVM.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from math import ceil, sqrt

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy.special import eval_genlaguerre, gammaln

from ._config import TOL
from .hilbert import Ket, matrix_exponential, partial_trace, trace_distance
from .reports import MomentReport

__all__ = [
    "FockSpace", "GaussianWeight", "QuadratureGrid", "TruncationError", "TruncationWarning",
    "mode_operators", "coherent_state", "displacement", "squeeze", "beamsplitter_v",
    "twin_beam", "twin_beam_lambda", "cloner_unitary_u", "projector_pca", "clone_channel_cv",
    "clone_reductions", "unitary_route_reductions", "displacement_mixture",
    "quadrature_eigenstate", "joint_povm_f", "joint_distribution", "moment_check",
    "symplectic_fourier", "fourier_selfdual_check", "cv_cloning_map", "annihilation",
    "rotation", "quadrature_eigenstates", "twin_beam_photons", "twin_beam_gain",
    "displacement_elements", "projector_integral_oracle", "MAX_THREE_MODE_NMAX",
]


class TruncationError(RuntimeError):
    """The Fock cutoff is too small for the requested accuracy."""


class TruncationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FockSpace:
    nmax: int

    def __post_init__(self):
        if self.nmax < 1:
            raise ValueError("nmax must be >= 1")

    @property
    def dim(self) -> int:
        return self.nmax + 1


def _space(space) -> FockSpace:
    return space if isinstance(space, FockSpace) else FockSpace(int(space))


@dataclass(frozen=True)
class GaussianWeight:
    """f(z) = sqrt(2/pi) exp(-Re(z)^2/sigma^2 - sigma^2 Im(z)^2)."""

    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    @property
    def isotropic(self) -> bool:
        return self.sigma == 1.0

    def __call__(self, z):
        z = np.asarray(z)
        return sqrt(2 / np.pi) * np.exp(-z.real ** 2 / self.sigma ** 2 - self.sigma ** 2 * z.imag ** 2)


@dataclass(frozen=True)
class QuadratureGrid:
    """Uniform outcome grid on [-L, L] (same for x and y) with step h."""

    half_width: float
    step: float = 0.05

    def __post_init__(self):
        if self.step > 0.05 + 1e-15:
            raise ValueError("grid step must be <= 0.05")
        if self.half_width <= 0:
            raise ValueError("grid half-width must be positive")

    @classmethod
    def for_space(cls, space, step: float = 0.05) -> "QuadratureGrid":
        n = _space(space).nmax
        return cls(ceil(1.5 * sqrt(n) / step) * step, step)

    def resolves(self, space) -> bool:
        return self.half_width >= 1.5 * sqrt(_space(space).nmax) - 1e-12

    @property
    def points(self) -> np.ndarray:
        n = int(round(self.half_width / self.step))
        return self.step * np.arange(-n, n + 1)


# ---------------------------------------------------------------------------
# single-mode building blocks

def annihilation(space) -> np.ndarray:
    d = _space(space).dim
    return np.diag(np.sqrt(np.arange(1, d)), 1).astype(complex)


def mode_operators(space) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(a, X, Y) on the truncated basis |0>, ..., |nmax>."""
    a = annihilation(space)
    ad = a.conj().T
    return a, (a + ad) / 2, (a - ad) / 2j


def coherent_state(space, alpha: complex) -> np.ndarray:
    """Exact coherent amplitudes exp(-|alpha|^2/2) alpha^n / sqrt(n!), truncated."""
    n = np.arange(_space(space).dim)
    alpha = complex(alpha)
    if alpha == 0:
        out = np.zeros(n.size, dtype=complex)
        out[0] = 1.0
        return out
    return np.exp(-abs(alpha) ** 2 / 2 + n * np.log(alpha) - gammaln(n + 1) / 2)


def displacement(space, alpha: complex) -> np.ndarray:
    """D(alpha) = exp(alpha a^dag - alpha^* a) on the truncated space."""
    space = _space(space)
    if abs(alpha) > sqrt(space.nmax) / 3:
        warnings.warn(f"|alpha|={abs(alpha):.3g} exceeds sqrt(nmax)/3 at nmax={space.nmax}; "
                      "truncation error is not controlled", TruncationWarning, stacklevel=2)
    a = annihilation(space)
    return matrix_exponential(alpha * a.conj().T - np.conj(alpha) * a)


def squeeze(space, r: float) -> np.ndarray:
    """S(r) = exp[r (a^dag^2 - a^2)/2]; S^dag a S = cosh(r) a + sinh(r) a^dag."""
    a = annihilation(space)
    ad = a.conj().T
    return matrix_exponential(r * (ad @ ad - a @ a) / 2)


def rotation(space, theta: float) -> np.ndarray:
    """exp(-i theta a^dag a)."""
    return np.diag(np.exp(-1j * theta * np.arange(_space(space).dim)))


def quadrature_eigenstate(space, value: float, quadrature: str = "x") -> np.ndarray:
    """Fock amplitudes of the delta-normalized eigenket of X (or Y).

    <n|x> = (2/pi)^{1/4} (2^n n!)^{-1/2} H_n(sqrt(2) x) exp(-x^2), evaluated
    with the normalized three-term recurrence. Y eigenkets carry an extra
    phase i^n.
    """
    return quadrature_eigenstates(space, np.atleast_1d(value), quadrature)[:, 0]


def quadrature_eigenstates(space, values: np.ndarray, quadrature: str = "x") -> np.ndarray:
    """Columns are eigenkets for each entry of ``values``."""
    d = _space(space).dim
    x = np.asarray(values, dtype=float).reshape(-1)
    out = np.zeros((d, x.size))
    out[0] = (2 / np.pi) ** 0.25 * np.exp(-x ** 2)
    if d > 1:
        out[1] = 2 * x * out[0]
    for n in range(2, d):
        out[n] = (2 * x * out[n - 1] - sqrt(n - 1) * out[n - 2]) / sqrt(n)
    if quadrature == "x":
        return out.astype(complex)
    if quadrature == "y":
        return (1j ** np.arange(d))[:, None] * out
    raise ValueError("quadrature must be 'x' or 'y'")


# ---------------------------------------------------------------------------
# two- and three-mode operators

def _photon_sectors(dims: tuple[int, ...]) -> list[np.ndarray]:
    grids = np.indices(dims).reshape(len(dims), -1)
    total = grids.sum(axis=0)
    return [np.flatnonzero(total == n) for n in range(int(total.max()) + 1)]


def _two_mode(space) -> tuple[np.ndarray, np.ndarray]:
    a = annihilation(space)
    eye = np.eye(a.shape[0])
    return np.kron(a, eye), np.kron(eye, a)


@lru_cache(maxsize=8)
def _beamsplitter(nmax: int) -> np.ndarray:
    space = FockSpace(nmax)
    c, a = _two_mode(space)
    gen = np.pi / 4 * (c.conj().T @ a - c @ a.conj().T)
    out = np.zeros_like(gen)
    # the generator conserves c^dag c + a^dag a; exponentiate sector by sector
    for sel in _photon_sectors((space.dim, space.dim)):
        block = np.ix_(sel, sel)
        out[block] = matrix_exponential(gen[block])
    out.setflags(write=False)
    return out


def beamsplitter_v(space) -> np.ndarray:
    """V = exp[pi/4 (c^dag a - c a^dag)] on c (x) a.

    V c V^dag = (c - a)/sqrt2 and V a V^dag = (c + a)/sqrt2. Photon-number
    sectors with total <= nmax are complete in the truncated space, so V is
    exact there.
    """
    return _beamsplitter(_space(space).nmax)


def twin_beam_lambda(delta_sq: float) -> float:
    return (delta_sq - 0.5) / (delta_sq + 0.5)


def twin_beam(space, lam: float) -> np.ndarray:
    """sqrt(1 - lam^2) sum_n (-lam)^n |n>|n>, truncated and not renormalized."""
    if not abs(lam) < 1:
        raise ValueError("|lambda| must be < 1")
    d = _space(space).dim
    out = np.zeros((d, d), dtype=complex)
    out[np.arange(d), np.arange(d)] = sqrt(1 - lam ** 2) * (-lam) ** np.arange(d)
    return out.reshape(-1)


def twin_beam_photons(lam: float) -> float:
    return 2 * lam ** 2 / (1 - lam ** 2)


def twin_beam_gain(lam: float) -> float:
    return 1 / (1 - lam ** 2)


MAX_THREE_MODE_NMAX = 12


def cloner_unitary_u(space) -> np.ndarray:
    """U = exp[c (a^dag + b) - c^dag (a + b^dag)] on c (x) a (x) b."""
    space = _space(space)
    if space.nmax > MAX_THREE_MODE_NMAX:
        raise ValueError(f"three-mode cloner needs nmax <= {MAX_THREE_MODE_NMAX}, got {space.nmax}")
    return _cloner_unitary(space.nmax)


@lru_cache(maxsize=2)
def _cloner_unitary(nmax: int) -> np.ndarray:
    a1 = annihilation(nmax)
    eye = np.eye(nmax + 1)
    c = np.kron(np.kron(a1, eye), eye)
    a = np.kron(np.kron(eye, a1), eye)
    b = np.kron(np.kron(eye, eye), a1)
    u = matrix_exponential(c @ (a.conj().T + b) - c.conj().T @ (a + b.conj().T))
    u.setflags(write=False)
    return u


@lru_cache(maxsize=8)
def _pca_isometry(nmax: int, sigma: float) -> np.ndarray:
    # columns (S (x) S) V |0>_c |m>_a span the range of P(sigma)
    d = nmax + 1
    v = beamsplitter_v(nmax)
    iso = v.reshape(d, d, d, d)[:, :, 0, :].reshape(d * d, d)
    if sigma != 1.0:
        s = squeeze(nmax, np.log(sigma))
        iso = np.kron(s, s) @ iso
    iso.setflags(write=False)
    return iso


def projector_pca(space, sigma: float = 1.0) -> np.ndarray:
    """P(sigma) = (S_c S_a)(ln sigma) V (|0><0|_c (x) 1_a) V^dag (S_c S_a)^dag."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    iso = _pca_isometry(_space(space).nmax, float(sigma))
    return iso @ iso.conj().T


def _input_components(state, d: int) -> list[tuple[float, np.ndarray]]:
    if isinstance(state, Ket):
        state = state.amplitudes
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        if state.size != d:
            raise ValueError(f"input has dimension {state.size}, expected {d}")
        return [(1.0, state)]
    if state.shape != (d, d):
        raise ValueError(f"input has shape {state.shape}, expected {(d, d)}")
    w, v = np.linalg.eigh((state + state.conj().T) / 2)
    return [(wk, v[:, k]) for k, wk in enumerate(w) if wk > 1e-14]


def clone_channel_cv(state, sigma: float = 1.0, space=None, check: bool = True) -> np.ndarray:
    """Two-mode output (1/2) P(sigma) (rho (x) 1_a) P(sigma).

    ``state`` is a ket or density matrix on mode c. The trace equals one in
    infinite dimension; its deviation is the truncation diagnostic and a
    deviation above the failure threshold raises :class:`TruncationError`.
    """
    if space is None:
        arr = state.amplitudes if isinstance(state, Ket) else np.asarray(state)
        space = FockSpace(arr.shape[0] - 1)
    space = _space(space)
    d = space.dim
    iso = _pca_isometry(space.nmax, float(sigma))
    iso3 = iso.reshape(d, d, d)  # (c, a, m)
    out = np.zeros((d * d, d * d), dtype=complex)
    for weight, phi in _input_components(state, d):
        # P (phi (x) |m>) for every m, as columns
        cols = iso @ np.einsum("cam,c->ma", iso3.conj(), phi)
        out += 0.5 * weight * (cols @ cols.conj().T)
    if check:
        dev = abs(np.trace(out).real - 1)
        if dev > TOL.cv_trace_failure:
            raise TruncationError(f"clone output trace deviates from 1 by {dev:.3g}")
    return out


def cv_cloning_map(rho, sigma: float = 1.0, space=None) -> np.ndarray:
    return clone_channel_cv(rho, sigma, space)


def clone_reductions(rho2: np.ndarray, space) -> tuple[np.ndarray, np.ndarray]:
    """Single-mode states of clone c and clone a."""
    d = _space(space).dim
    return partial_trace(rho2, [0], [d, d]), partial_trace(rho2, [1], [d, d])


def unitary_route_reductions(state, space, lam: float = 1 / 3) -> tuple[np.ndarray, np.ndarray]:
    """Clone states from U acting on |phi>_c (x) twin beam_ab, b traced out."""
    space = _space(space)
    d = space.dim
    phi = state.amplitudes if isinstance(state, Ket) else np.asarray(state, dtype=complex)
    out = cloner_unitary_u(space) @ np.kron(phi, twin_beam(space, lam))
    t = out.reshape(d, d, d)
    rho_c = np.einsum("iab,jab->ij", t, t.conj())
    rho_a = np.einsum("aib,ajb->ij", t, t.conj())
    return rho_c, rho_a


def displacement_mixture(rho: np.ndarray, space, sigma: float = 1.0,
                         weight_sq=None, scale: tuple[float, float] | None = None,
                         nodes: int = 41) -> np.ndarray:
    """int d^2z w(z) D^dag(z) rho D(z) by tensor Gauss-Hermite quadrature.

    The default weight is |f(z)|^2 for :class:`GaussianWeight` ``sigma``,
    for which the node scaling makes the Gaussian factor exact. A custom
    ``weight_sq`` callable needs a matching ``scale`` = (s_re, s_im): nodes
    sit at s * t with t the Hermite nodes.
    """
    space = _space(space)
    if weight_sq is None:
        f = GaussianWeight(sigma)
        weight_sq = lambda z: np.abs(f(z)) ** 2  # noqa: E731
        scale = (sigma / sqrt(2), 1 / (sigma * sqrt(2)))
    elif scale is None:
        raise ValueError("scale is required with a custom weight")
    t, w = hermgauss(nodes)
    sx, sy = scale
    a = annihilation(space)
    ad = a.conj().T
    out = np.zeros_like(rho, dtype=complex)
    for ti, wi in zip(t, w):
        for tj, wj in zip(t, w):
            z = sx * ti + 1j * sy * tj
            coeff = sx * sy * wi * wj * np.exp(ti ** 2 + tj ** 2) * weight_sq(z)
            if abs(coeff) < 1e-16:
                continue
            dz = matrix_exponential(z * ad - np.conj(z) * a)
            out += coeff * (dz.conj().T @ rho @ dz)
    return out


def displacement_elements(alpha: np.ndarray, levels: int) -> np.ndarray:
    """Exact <m|D(alpha)|n> for m, n < levels; shape (levels, levels, *alpha.shape).

    Uses the associated-Laguerre closed form, so it is free of truncation.
    """
    alpha = np.asarray(alpha, dtype=complex)
    r2 = np.abs(alpha) ** 2
    out = np.zeros((levels, levels) + alpha.shape, dtype=complex)
    for m in range(levels):
        for n in range(levels):
            k, lo = abs(m - n), min(m, n)
            pref = np.exp(0.5 * (gammaln(lo + 1) - gammaln(lo + k + 1)) - r2 / 2)
            lag = eval_genlaguerre(lo, k, r2)
            if m >= n:
                out[m, n] = pref * alpha ** k * lag
            else:
                out[m, n] = pref * (-np.conj(alpha)) ** k * lag
    return out


def projector_integral_oracle(levels: int, nodes: int = 41) -> np.ndarray:
    """(2/pi) int d^2z exp(-|z|^2) D^dag(z) (x) D(z), restricted to ``levels`` per mode.

    Independent of the beam-splitter construction of P; uses the exact
    displacement matrix elements and Gauss-Hermite nodes scaled for the
    combined exp(-2|z|^2) envelope.
    """
    t, w = hermgauss(nodes)
    tx, ty = np.meshgrid(t, t, indexing="ij")
    z = (tx + 1j * ty) / sqrt(2)
    weights = np.outer(w, w) * np.exp(tx ** 2 + ty ** 2 - np.abs(z) ** 2) / np.pi
    dmat = displacement_elements(z, levels)
    ddag = np.conj(np.swapaxes(dmat, 0, 1))
    out = np.einsum("mnxy,pqxy,xy->mpnq", ddag, dmat, weights)
    return out.reshape(levels * levels, levels * levels)


# ---------------------------------------------------------------------------
# joint quadrature measurement

def joint_povm_f(x: float, y: float, sigma: float = 1.0, space=40) -> np.ndarray:
    """F_sigma(x, y) = (1/2) Tr_a[P(sigma) (|x><x|_c (x) |y><y|_a) P(sigma)].

    ``|y>_a`` is the Y eigenket on clone a. The squeezers act on the
    delta-normalized eigenkets through their exact action,
    S^dag |x> = sigma^{-1/2} |x/sigma> and S^dag |y>_Y = sigma^{1/2} |sigma y>_Y,
    because truncated quadrature eigenkets carry weight at the cutoff where
    the truncated squeezer is inaccurate.
    """
    space = _space(space)
    d = space.dim
    iso = _pca_isometry(space.nmax, 1.0)
    ket = np.kron(quadrature_eigenstate(space, x / sigma, "x"),
                  quadrature_eigenstate(space, sigma * y, "y"))
    w0 = (iso @ (iso.conj().T @ ket)).reshape(d, d)
    f = 0.5 * w0 @ w0.conj().T
    if sigma != 1.0:
        s = squeeze(space, np.log(sigma))
        f = s @ f @ s.conj().T
    return f


def _sector_coefficients(space, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    # coef[m, i, j] = <0,m| V^dag |x_i>|y_j>, using that V|0,m> lives in sector m
    space = _space(space)
    d = space.dim
    iso = _pca_isometry(space.nmax, 1.0).reshape(d, d, d)
    px = quadrature_eigenstates(space, xs, "x")
    py = quadrature_eigenstates(space, ys, "y")
    coef = np.zeros((d, xs.size, ys.size), dtype=complex)
    for m in range(d):
        for c in range(m + 1):
            amp = np.conj(iso[c, m - c, m])
            if amp != 0:
                coef[m] += amp * np.outer(px[c], py[m - c])
    return coef


def joint_distribution(state, sigma: float = 1.0, space=40,
                       grid: QuadratureGrid | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Outcome density p(x, y) = Tr[rho F_sigma(x, y)] on ``grid``.

    Returns ``(points, p)`` with ``p[i, j]`` the density at
    ``(points[i], points[j])``; multiply by ``step**2`` for probabilities.
    """
    space = _space(space)
    d = space.dim
    grid = grid or QuadratureGrid.for_space(space)
    pts = grid.points
    iso = _pca_isometry(space.nmax, 1.0).reshape(d, d, d)
    comps = _input_components(state, d)
    if sigma != 1.0:
        s = squeeze(space, np.log(sigma))
        comps = [(w, s.conj().T @ phi) for w, phi in comps]
    coef = _sector_coefficients(space, pts / sigma, pts * sigma)
    p = np.zeros((pts.size, pts.size))
    for weight, phi in comps:
        # g[a, m] = sum_c conj(iso[c, a, m]) phi[c]
        g = np.einsum("cam,c->am", iso.conj(), phi)
        amp = np.tensordot(g, coef.conj(), axes=([1], [0]))
        p += 0.5 * weight * np.sum(np.abs(amp) ** 2, axis=0)
    return pts, p


def moment_check(sigma: float, state, space=40, grid: QuadratureGrid | None = None) -> MomentReport:
    """Grid-integrated first and second moments of the joint measurement.

    With phi = arctan(sigma^2), the outcomes x cos(phi) +- y sin(phi) should
    reproduce <X_{+-phi}> and <X_{+-phi}^2> + |sin(2 phi)|/4.
    """
    space = _space(space)
    grid = grid or QuadratureGrid.for_space(space)
    pts, p = joint_distribution(state, sigma, space, grid)
    h2 = grid.step ** 2
    xg, yg = np.meshgrid(pts, pts, indexing="ij")
    comps = _input_components(state, space.dim)
    rho = sum(w * np.outer(v, v.conj()) for w, v in comps)
    _, xop, yop = mode_operators(space)

    def expect(op):
        return float(np.trace(rho @ op).real)

    phi = np.arctan(sigma ** 2)
    offset = abs(np.sin(2 * phi)) / 4
    report = MomentReport(f"joint quadrature measurement, sigma={sigma:g}")
    norm = h2 * p.sum()
    report.add("normalization", norm, 1.0, TOL.added_noise)
    report.add("<x>", h2 * np.sum(xg * p), expect(xop), TOL.coherent_povm)
    report.add("<y>", h2 * np.sum(yg * p), expect(yop), TOL.coherent_povm)
    vx_in = expect(xop @ xop) - expect(xop) ** 2
    vy_in = expect(yop @ yop) - expect(yop) ** 2
    mx = h2 * np.sum(xg * p)
    my = h2 * np.sum(yg * p)
    report.add("added var x", h2 * np.sum(xg ** 2 * p) - mx ** 2 - vx_in, sigma ** 2 / 4, TOL.added_noise)
    report.add("added var y", h2 * np.sum(yg ** 2 * p) - my ** 2 - vy_in, 1 / (4 * sigma ** 2), TOL.added_noise)
    for sign, label in ((1, "+"), (-1, "-")):
        xphi = np.cos(phi) * xop + sign * np.sin(phi) * yop
        u = np.cos(phi) * xg + sign * np.sin(phi) * yg
        first = h2 * np.sum(u * p)
        second = h2 * np.sum(u ** 2 * p)
        report.add(f"<X_{label}phi>", first, expect(xphi), TOL.coherent_povm)
        report.add(f"second moment offset {label}phi", second - expect(xphi @ xphi), offset, TOL.added_noise)
        var_in = expect(xphi @ xphi) - expect(xphi) ** 2
        report.add(f"added var {label}phi", second - first ** 2 - var_in, offset, TOL.added_noise)
    report.diagnostics.update(phi=float(phi), nmax=space.nmax, half_width=grid.half_width,
                              step=grid.step, tail=float(abs(1 - norm)))
    return report


# ---------------------------------------------------------------------------
# identical-clone condition

def symplectic_fourier(f, w_re: np.ndarray, w_im: np.ndarray,
                       half_width: float = 12.0, step: float = 0.05) -> np.ndarray:
    """int d^2z/pi exp(w z^* - w^* z) f(z), evaluated on the grid w_re x w_im.

    The integral runs over a uniform square grid in z. Returns an array
    indexed ``[i, j]`` for ``w = w_re[i] + 1j * w_im[j]``.
    """
    n = int(round(half_width / step))
    pts = step * np.arange(-n, n + 1)
    zx, zy = np.meshgrid(pts, pts, indexing="ij")
    fz = f(zx + 1j * zy)
    # w z^* - w^* z = 2i (Im w Re z - Re w Im z), separable in the two axes
    k_re = np.exp(-2j * np.outer(np.asarray(w_re, float), pts))  # acts on Im z
    k_im = np.exp(2j * np.outer(np.asarray(w_im, float), pts))  # acts on Re z
    return step ** 2 / np.pi * (k_re @ fz.T @ k_im.T)


def fourier_selfdual_check(weight=None, half_width: float = 4.0, step: float = 0.1,
                           tol: float = TOL.selfdual) -> dict:
    """Compare f with its symplectic Fourier transform on a grid of points."""
    weight = GaussianWeight(1.0) if weight is None else weight
    pts = step * np.arange(-int(round(half_width / step)), int(round(half_width / step)) + 1)
    wx, wy = np.meshgrid(pts, pts, indexing="ij")
    ft = symplectic_fourier(weight, pts, pts)
    dev = float(np.max(np.abs(ft - weight(wx + 1j * wy))))
    return {"max_deviation": dev, "selfdual": dev <= tol, "tolerance": tol}
