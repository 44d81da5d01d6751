"""State construction, validation and Haar sampling.

Random draws always go through an explicit ``numpy.random.Generator``. Use
:func:`substream` to derive the generator for a given ``(seed, index...)`` key so
that sample ``i`` is reproducible without replaying samples ``0..i-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import qlinalg
from .errors import (
    DimensionError,
    StateHermiticityError,
    StateNegativityError,
    StateTraceError,
)

NORM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for the spawn key ``key`` under master ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss)


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        dims = tuple(int(d) for d in self.dims)
        if amp.size != int(np.prod(dims)):
            raise DimensionError(f"{amp.size} amplitudes do not fit dims {dims}")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm:.12f} is not 1")
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "dims", dims)

    def density(self) -> "DensityMatrix":
        a = self.amplitudes
        return DensityMatrix(np.outer(a, a.conj()), self.dims)


@dataclass(frozen=True)
class DensityMatrix:
    """Density operator with subsystem dimensions.

    The constructor only checks shapes; :func:`validate_density` checks the
    physical invariants.
    """

    matrix: np.ndarray
    dims: tuple[int, ...] = field(default=())

    def __post_init__(self):
        m = qlinalg.as_cmatrix(self.matrix)
        dims = tuple(int(d) for d in self.dims) or (m.shape[0],)
        if m.shape != (int(np.prod(dims)),) * 2:
            raise DimensionError(f"matrix shape {m.shape} does not match dims {dims}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def marginal(self, keep) -> "DensityMatrix":
        keep_idx = [keep] if isinstance(keep, (int, np.integer)) else list(keep)
        sub = tuple(self.dims[i] for i in sorted(set(keep_idx)))
        return DensityMatrix(qlinalg.partial_trace(self.matrix, self.dims, keep_idx), sub)


def validate_density(m, dims: Sequence[int] | None = None) -> DensityMatrix:
    """Return a :class:`DensityMatrix` or raise naming the broken invariant."""
    m = qlinalg.as_cmatrix(m)
    rho = DensityMatrix(m, tuple(dims) if dims is not None else ())
    defect = qlinalg.hermiticity_defect(m)
    if defect > qlinalg.HERMITIAN_TOL:
        raise StateHermiticityError(f"not Hermitian: max asymmetry {defect:.3e}")
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise StateTraceError(f"trace is {tr:.12g}, expected 1")
    lam_min = np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0]
    if lam_min < -PSD_TOL:
        raise StateNegativityError(f"negative eigenvalue {lam_min:.3e}")
    return rho


def basis_state(index: int, dims: Sequence[int]) -> PureState:
    dims = tuple(dims)
    amp = np.zeros(int(np.prod(dims)), dtype=complex)
    amp[index] = 1.0
    return PureState(amp, dims)


def max_entangled(d: int) -> PureState:
    """``(1/sqrt d) sum_i |ii>``."""
    if d < 2:
        raise ValueError(f"maximally entangled state needs d >= 2, got {d}")
    amp = np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)
    return PureState(amp, (d, d))


def ghz(n: int, d: int = 2) -> PureState:
    amp = np.zeros(d**n, dtype=complex)
    step = sum(d**k for k in range(n))
    amp[[i * step for i in range(d)]] = 1 / np.sqrt(d)
    return PureState(amp, (d,) * n)


def maximally_mixed(d: int, dims: Sequence[int] | None = None) -> DensityMatrix:
    return DensityMatrix(np.eye(d, dtype=complex) / d, tuple(dims) if dims else (d,))


def isotropic(d: int, q: float) -> DensityMatrix:
    """``q |phi+><phi+| + (1-q) I/d^2``; for ``d = 2`` the Werner family."""
    phi = max_entangled(d).density().matrix
    return DensityMatrix(q * phi + (1 - q) * np.eye(d * d) / d**2, (d, d))


def werner(q: float) -> DensityMatrix:
    return isotropic(2, q)


def product(*states: DensityMatrix) -> DensityMatrix:
    mats = [s.matrix for s in states]
    dims = tuple(d for s in states for d in s.dims)
    return DensityMatrix(qlinalg.tensor(*mats), dims)


def haar_random_vectors(dim: int, n: int, stream: np.random.Generator) -> np.ndarray:
    """``n`` Haar-uniform unit vectors in ``C^dim`` as rows, shape ``(n, dim)``."""
    z = stream.standard_normal((n, dim)) + 1j * stream.standard_normal((n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_random_pure(dA: int, dB: int, stream: np.random.Generator) -> PureState:
    if dA < 1 or dB < 1:
        raise DimensionError(f"dimensions must be positive, got {dA}, {dB}")
    return PureState(haar_random_vectors(dA * dB, 1, stream)[0], (dA, dB))


def haar_random_unitaries(d: int, n: int, stream: np.random.Generator) -> np.ndarray:
    """``n`` Haar unitaries, shape ``(n, d, d)`` (QR of Ginibre with phase fix)."""
    z = (stream.standard_normal((n, d, d)) + 1j * stream.standard_normal((n, d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r, axis1=-2, axis2=-1)
    ph = ph / np.abs(ph)
    return q * ph[:, None, :]


def haar_random_unitary(d: int, stream: np.random.Generator) -> np.ndarray:
    return haar_random_unitaries(d, 1, stream)[0]


def vectors_to_densities(vecs: np.ndarray) -> np.ndarray:
    """Stack of pure-state vectors ``(n, D)`` to projectors ``(n, D, D)``."""
    return vecs[:, :, None] * vecs.conj()[:, None, :]
