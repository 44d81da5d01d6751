"""Dense complex matrix kernel.

Matrices are plain ``numpy`` arrays. Subsystem ordering is row-major with the
first subsystem as the slowest index everywhere in the package, so that
``tensor(a, b)`` acts with ``a`` on subsystem 0.

Functions acting on subsystems (``partial_trace``, ``partial_transpose``)
accept stacks of matrices with shape ``(..., D, D)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, NotHermitianError

HERMITIAN_TOL = 1e-10
SUPPORT_CUTOFF = 1e-12
NEGATIVE_EIG_TOL = 1e-9


def as_cmatrix(m) -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def tensor(*mats) -> np.ndarray:
    """Kronecker product; the first factor is the slow (leftmost) subsystem."""
    if not mats:
        raise ValueError("tensor needs at least one operand")
    return reduce(np.kron, (np.asarray(m, dtype=complex) for m in mats))


def _check_dims(m: np.ndarray, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise DimensionError(f"subsystem dimensions must be positive: {dims}")
    total = int(np.prod(dims))
    if m.shape[-1] != m.shape[-2]:
        raise DimensionError(f"matrix must be square, got shape {m.shape[-2:]}")
    if m.shape[-1] != total:
        raise DimensionError(f"dims {dims} multiply to {total}, matrix is {m.shape[-1]}-dimensional")
    return dims


def _normalize_subsystems(sub: int | Iterable[int], n: int) -> tuple[int, ...]:
    idx = (sub,) if isinstance(sub, (int, np.integer)) else tuple(sub)
    out = []
    for i in idx:
        i = int(i)
        if not -n <= i < n:
            raise DimensionError(f"subsystem index {i} out of range for {n} subsystems")
        out.append(i % n)
    return tuple(sorted(set(out)))


def partial_trace(m, dims: Sequence[int], keep: int | Iterable[int]) -> np.ndarray:
    """Reduce ``m`` onto the subsystems listed in ``keep``.

    Kept subsystems stay in their original order.
    """
    m = np.asarray(m, dtype=complex)
    dims = _check_dims(m, dims)
    n = len(dims)
    keep = _normalize_subsystems(keep, n)
    batch = m.shape[:-2]
    t = m.reshape(batch + dims + dims)
    nb = len(batch)
    # einsum labels: batch, row indices, column indices (traced ones shared)
    letters = iter("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
    blab = [next(letters) for _ in range(nb)]
    rows = [next(letters) for _ in range(n)]
    cols = [rows[i] if i not in keep else next(letters) for i in range(n)]
    out = blab + [rows[i] for i in keep] + [cols[i] for i in keep]
    subs = "".join(blab + rows + cols) + "->" + "".join(out)
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    return np.einsum(subs, t).reshape(batch + (dk, dk))


def partial_transpose(m, dims: Sequence[int], subsystem: int | Iterable[int] = 1) -> np.ndarray:
    """Transpose the selected subsystem(s). Defaults to the second party."""
    m = np.asarray(m, dtype=complex)
    dims = _check_dims(m, dims)
    n = len(dims)
    sel = _normalize_subsystems(subsystem, n)
    batch = m.shape[:-2]
    nb = len(batch)
    t = m.reshape(batch + dims + dims)
    perm = list(range(nb + 2 * n))
    for i in sel:
        perm[nb + i], perm[nb + n + i] = perm[nb + n + i], perm[nb + i]
    return t.transpose(perm).reshape(m.shape)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order with matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermiticity_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def herm_eig(m, tol: float = HERMITIAN_TOL) -> Spectrum:
    m = as_cmatrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"matrix must be square, got shape {m.shape}")
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitianError(f"max |m - m^dagger| = {defect:.3e} exceeds {tol:.1e}")
    herm = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(herm)
    return Spectrum(eigenvalues=w[::-1].copy(), eigenvectors=v[:, ::-1].copy())


def matrix_log2_on_support(m, cutoff: float = SUPPORT_CUTOFF) -> np.ndarray:
    """``log2`` on the support of a PSD matrix; the kernel maps to zero."""
    eig = herm_eig(m)
    lam = eig.eigenvalues
    if lam.size and lam.min() < -NEGATIVE_EIG_TOL:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {lam.min():.3e})")
    logs = np.zeros_like(lam)
    on = lam > cutoff
    logs[on] = np.log2(lam[on])
    v = eig.eigenvectors
    return (v * logs) @ v.conj().T


def trace_norm(m) -> float:
    """Sum of singular values."""
    m = np.asarray(m, dtype=complex)
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.swapaxes(np.conj(m), -1, -2)
