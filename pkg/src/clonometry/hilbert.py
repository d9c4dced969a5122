"""Dense linear algebra on tensor-product Hilbert spaces.

Operators are plain complex ``numpy`` arrays. Tensor structure is carried by a
``dims`` sequence, leftmost factor slowest-varying (the ``np.kron`` order).
:class:`Operator` and :class:`Ket` are thin labeled wrappers for callers that
want the structure attached to the data.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np
import scipy.linalg

from ._config import TOL

__all__ = [
    "HilbertSpace",
    "Operator",
    "Ket",
    "tensor",
    "partial_trace",
    "permutation_operator",
    "matrix_exponential",
    "dagger",
    "is_hermitian",
    "is_density",
    "check_density",
    "trace_distance",
    "projector",
    "random_density",
    "random_ket",
    "random_unitary",
]


@dataclass(frozen=True)
class HilbertSpace:
    dims: tuple[int, ...]

    def __init__(self, dims: Sequence[int]):
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"subsystem dimensions must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total(self) -> int:
        return prod(self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __add__(self, other: "HilbertSpace") -> "HilbertSpace":
        return HilbertSpace(self.dims + other.dims)

    def restrict(self, keep: Sequence[int]) -> "HilbertSpace":
        return HilbertSpace([self.dims[i] for i in keep])


@dataclass(frozen=True)
class Operator:
    """A square matrix tagged with the space it acts on."""

    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.space.total, self.space.total):
            raise ValueError(f"matrix shape {m.shape} does not match dims {self.space.dims}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_array(cls, matrix, dims: Sequence[int] | None = None) -> "Operator":
        matrix = np.asarray(matrix, dtype=complex)
        return cls(HilbertSpace(dims if dims is not None else [matrix.shape[0]]), matrix)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.space.dims

    def dag(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)

    def __matmul__(self, other: "Operator") -> "Operator":
        if other.space != self.space:
            raise ValueError("operators act on different spaces")
        return Operator(self.space, self.matrix @ other.matrix)

    def ptrace(self, keep: Sequence[int]) -> "Operator":
        return partial_trace(self, keep)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))


@dataclass(frozen=True)
class Ket:
    space: HilbertSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if v.size != self.space.total:
            raise ValueError(f"ket length {v.size} does not match dims {self.space.dims}")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @classmethod
    def from_array(cls, amplitudes, dims: Sequence[int] | None = None) -> "Ket":
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(HilbertSpace(dims if dims is not None else [amplitudes.size]), amplitudes)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "Ket":
        return Ket(self.space, self.amplitudes / self.norm)

    def is_normalized(self, atol: float = TOL.ket_norm) -> bool:
        return abs(self.norm - 1.0) <= atol

    def proj(self) -> Operator:
        return Operator(self.space, projector(self.amplitudes))


def _as_array(a):
    if isinstance(a, Operator):
        return a.matrix
    if isinstance(a, Ket):
        return a.amplitudes
    return np.asarray(a)


def tensor(*ops):
    """Kronecker product of operators (or kets), left to right.

    Labeled inputs give a labeled result on the concatenated space; raw
    arrays give a raw array.
    """
    if not ops:
        raise ValueError("tensor needs at least one factor")
    out = _as_array(ops[0])
    for op in ops[1:]:
        out = np.kron(out, _as_array(op))
    if all(isinstance(o, Operator) for o in ops):
        space = ops[0].space
        for o in ops[1:]:
            space = space + o.space
        return Operator(space, out)
    if all(isinstance(o, Ket) for o in ops):
        space = ops[0].space
        for o in ops[1:]:
            space = space + o.space
        return Ket(space, out)
    return out


def partial_trace(a, keep: Sequence[int] | int, dims: Sequence[int] | None = None):
    """Trace out every subsystem not listed in ``keep``.

    ``keep`` indices are returned in increasing order. For raw arrays pass
    ``dims``; an :class:`Operator` carries its own.
    """
    labeled = isinstance(a, Operator)
    if labeled:
        dims = a.dims
    elif dims is None:
        raise ValueError("dims is required for raw arrays")
    rho = _as_array(a)
    dims = [int(d) for d in dims]
    keep = sorted({keep} if isinstance(keep, (int, np.integer)) else set(keep))
    n = len(dims)
    for k in keep:
        if not 0 <= k < n:
            raise IndexError(f"subsystem index {k} out of range for {n} subsystems")
    if rho.shape != (prod(dims), prod(dims)):
        raise ValueError(f"operator shape {rho.shape} does not match dims {dims}")
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    # contract traced bra/ket index pairs, highest axis first so positions stay valid
    for i in sorted(traced, reverse=True):
        t = np.trace(t, axis1=i, axis2=i + t.ndim // 2)
    dk = prod(dims[i] for i in keep) if keep else 1
    out = t.reshape(dk, dk)
    if labeled:
        return Operator(HilbertSpace([dims[i] for i in keep]) if keep else HilbertSpace([1]), out)
    return out


def permutation_operator(perm: Sequence[int], dims: Sequence[int] | HilbertSpace):
    """Unitary moving the factor at site ``i`` to site ``perm[i]``.

    On basis kets, |x_0 ... x_{n-1}> maps to the ket whose entry at
    ``perm[i]`` is ``x_i``. Composition follows
    ``P(p1) @ P(p2) == P(p1 o p2)`` with ``(p1 o p2)[i] = p1[p2[i]]``.
    """
    if isinstance(dims, HilbertSpace):
        dims = dims.dims
    dims = [int(d) for d in dims]
    perm = [int(p) for p in perm]
    n = len(dims)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of {n} sites")
    moved = [i for i in range(n) if perm[i] != i]
    if len({dims[i] for i in moved}) > 1:
        raise ValueError("permuted sites must have equal dimension")
    total = prod(dims)
    idx = np.arange(total).reshape(dims)
    # output axis perm[i] carries input axis i
    inverse = np.argsort(perm)
    src = np.transpose(idx, inverse).reshape(-1)
    out = np.zeros((total, total), dtype=complex)
    out[np.arange(total), src] = 1.0
    return out


def matrix_exponential(a):
    """exp(a) for a dense square matrix (Pade approximation via scipy)."""
    if isinstance(a, Operator):
        return Operator(a.space, scipy.linalg.expm(a.matrix))
    return scipy.linalg.expm(np.asarray(a, dtype=complex))


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def projector(ket) -> np.ndarray:
    v = _as_array(ket).reshape(-1)
    return np.outer(v, v.conj())


def is_hermitian(a, atol: float = TOL.hermitian) -> bool:
    m = _as_array(a)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= atol)


def check_density(rho, trace_tol: float = TOL.density_trace,
                  eig_tol: float = TOL.density_eig) -> None:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, unit-trace and PSD."""
    m = _as_array(rho)
    if not is_hermitian(m, max(TOL.hermitian, eig_tol)):
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(m).real
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density trace {tr} differs from 1")
    lmin = np.linalg.eigvalsh((m + m.conj().T) / 2).min()
    if lmin < -eig_tol:
        raise ValueError(f"density has negative eigenvalue {lmin}")


def is_density(rho, trace_tol: float = TOL.density_trace,
               eig_tol: float = TOL.density_eig) -> bool:
    try:
        check_density(rho, trace_tol, eig_tol)
    except ValueError:
        return False
    return True


def trace_distance(a, b) -> float:
    """Half the trace norm of ``a - b`` for Hermitian arguments."""
    d = _as_array(a) - _as_array(b)
    d = (d + d.conj().T) / 2
    return 0.5 * float(np.abs(np.linalg.eigvalsh(d)).sum())


def random_ket(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
