"""Kraus and Choi representations and the basic channel algebra."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from .. import qlinalg
from ..errors import CPTPError, DimensionError, SimplexError
from ..states import DensityMatrix, max_entangled

COMPLETENESS_TOL = 1e-9
SIMPLEX_TOL = 1e-12


@dataclass(frozen=True)
class ChannelLabel:
    family: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def __str__(self) -> str:
        if not self.params:
            return self.family
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.family}({inner})"


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPTP map ``rho -> sum_k K_k rho K_k^dagger``.

    ``kraus_ops`` is stored as one array of shape ``(n_ops, dim_out, dim_in)``.
    Completeness is not enforced here; see :func:`check_cptp`.
    """

    kraus_ops: np.ndarray
    label: ChannelLabel = field(default_factory=lambda: ChannelLabel("kraus"))

    def __post_init__(self):
        ops = np.asarray(self.kraus_ops, dtype=complex)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3 or ops.shape[0] == 0:
            raise DimensionError(f"Kraus operators must stack to (n, out, in), got {ops.shape}")
        if not np.all(np.isfinite(ops)):
            raise ValueError("Kraus operators have non-finite entries")
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def dim_in(self) -> int:
        return self.kraus_ops.shape[2]

    @property
    def dim_out(self) -> int:
        return self.kraus_ops.shape[1]

    def __len__(self) -> int:
        return self.kraus_ops.shape[0]

    def __call__(self, rho):
        return apply(self, rho)

    def completeness_defect(self) -> float:
        ops = self.kraus_ops
        s = np.einsum("kai,kaj->ij", ops.conj(), ops)
        return float(np.max(np.abs(s - np.eye(self.dim_in))))

    def relabel(self, label: ChannelLabel) -> "KrausChannel":
        return KrausChannel(self.kraus_ops, label)


@dataclass(frozen=True)
class ChoiMatrix:
    """``(Lambda (x) I)|phi+><phi+|`` on ``dim_out (x) dim_in``."""

    state: DensityMatrix

    @property
    def matrix(self) -> np.ndarray:
        return self.state.matrix

    @property
    def dims(self) -> tuple[int, int]:
        return self.state.dims  # type: ignore[return-value]


def check_cptp(ch: KrausChannel, atol: float = COMPLETENESS_TOL) -> None:
    defect = ch.completeness_defect()
    if defect > atol:
        raise CPTPError(
            f"trace preservation violated: max |sum K^dagger K - I| = {defect:.3e} > {atol:.1e}"
        )


def is_unital(ch: KrausChannel, atol: float = 1e-9) -> bool:
    if ch.dim_in != ch.dim_out:
        return False
    ops = ch.kraus_ops
    out = np.einsum("kai,kbi->ab", ops, ops.conj())
    return bool(np.max(np.abs(out - np.eye(ch.dim_out))) <= atol)


def _as_matrix(rho) -> tuple[np.ndarray, tuple[int, ...]]:
    if isinstance(rho, DensityMatrix):
        return rho.matrix, rho.dims
    m = qlinalg.as_cmatrix(rho)
    return m, (m.shape[0],)


def apply(ch: KrausChannel, rho) -> DensityMatrix:
    m, dims = _as_matrix(rho)
    if m.shape[0] != ch.dim_in:
        raise DimensionError(f"channel expects dimension {ch.dim_in}, state has {m.shape[0]}")
    ops = ch.kraus_ops
    out = np.einsum("kai,ij,kbj->ab", ops, m, ops.conj())
    out_dims = dims if ch.dim_out == ch.dim_in else (ch.dim_out,)
    return DensityMatrix(out, out_dims)


def apply_local_array(
    ops: np.ndarray, mats: np.ndarray, dims: Sequence[int], subsystem: int
) -> np.ndarray:
    """Apply Kraus stack ``ops`` to ``subsystem`` of every matrix in ``mats``.

    ``mats`` has shape ``(..., D, D)``. The subsystem dimension changes from
    ``ops.shape[2]`` to ``ops.shape[1]``.
    """
    dims = tuple(dims)
    n = len(dims)
    if not 0 <= subsystem < n:
        raise DimensionError(f"subsystem {subsystem} out of range for dims {dims}")
    d = dims[subsystem]
    d_out = ops.shape[1]
    if ops.shape[2] != d:
        raise DimensionError(f"operators of shape {ops.shape[1:]} cannot act on a {d}-level subsystem")
    batch = mats.shape[:-2]
    left = int(np.prod(dims[:subsystem]))
    right = int(np.prod(dims[subsystem + 1 :]))
    t = mats.reshape(batch + (left, d, right, left, d, right))
    out = np.einsum("kai,...xiyujv,kbj->...xayubv", ops, t, ops.conj(), optimize=True)
    D = left * d_out * right
    return out.reshape(batch + (D, D))


def apply_local(ch: KrausChannel, rho: DensityMatrix, subsystem: int) -> DensityMatrix:
    """``(I (x) ... (x) Lambda (x) ... (x) I) rho`` with the channel on ``subsystem``."""
    if not 0 <= subsystem < len(rho.dims):
        raise DimensionError(f"subsystem {subsystem} out of range for dims {rho.dims}")
    if rho.dims[subsystem] != ch.dim_in:
        raise DimensionError(
            f"subsystem {subsystem} has dimension {rho.dims[subsystem]}, channel expects {ch.dim_in}"
        )
    dims = list(rho.dims)
    dims[subsystem] = ch.dim_out
    return DensityMatrix(apply_local_array(ch.kraus_ops, rho.matrix, rho.dims, subsystem), tuple(dims))


def choi(ch: KrausChannel) -> ChoiMatrix:
    phi = max_entangled(ch.dim_in).density()
    return ChoiMatrix(apply_local(ch, phi, 0))


def kraus_from_choi(c: ChoiMatrix, atol: float = 1e-9, label: ChannelLabel | None = None) -> KrausChannel:
    """Kraus operators from the scaled eigenvectors of the Choi matrix."""
    d_out, d_in = c.dims
    marginal = qlinalg.partial_trace(c.matrix, c.dims, 1)
    defect = float(np.max(np.abs(marginal - np.eye(d_in) / d_in)))
    if defect > atol:
        raise CPTPError(f"Choi input marginal differs from I/d by {defect:.3e}; not trace preserving")
    eig = qlinalg.herm_eig(c.matrix)
    lam = eig.eigenvalues
    if lam[-1] < -atol:
        raise CPTPError(f"Choi matrix has negative eigenvalue {lam[-1]:.3e}; not completely positive")
    keep = lam > atol
    vecs = eig.eigenvectors[:, keep] * np.sqrt(d_in * lam[keep])
    ops = vecs.T.reshape(-1, d_out, d_in)
    return KrausChannel(ops, label or ChannelLabel("kraus"))


def _check_simplex(weights: Sequence[float], n: int | None = None) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if n is not None and w.shape != (n,):
        raise SimplexError(f"expected {n} weights, got {w.shape}")
    if np.any(w < -SIMPLEX_TOL) or abs(w.sum() - 1.0) > SIMPLEX_TOL:
        raise SimplexError(f"weights {w.tolist()} are not a probability vector")
    return np.clip(w, 0.0, None)


def mixture(
    channels: Sequence[KrausChannel], weights: Sequence[float], label: ChannelLabel | None = None
) -> KrausChannel:
    """Convex combination realized as a Kraus-set union with ``sqrt(w)`` scaling."""
    if not channels:
        raise ValueError("mixture of zero channels")
    w = _check_simplex(weights, len(channels))
    shape = channels[0].kraus_ops.shape[1:]
    if any(c.kraus_ops.shape[1:] != shape for c in channels):
        raise DimensionError("all channels in a mixture must share input and output dimensions")
    ops = [np.sqrt(wi) * c.kraus_ops for wi, c in zip(w, channels) if wi > 0]
    default = ChannelLabel(
        "mixture", {"weights": [float(x) for x in w], "parts": [str(c.label) for c in channels]}
    )
    return KrausChannel(np.concatenate(ops), label or default)


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel(np.eye(d, dtype=complex)[None], ChannelLabel("identity", {"d": d}))


def unitary_channel(u: np.ndarray) -> KrausChannel:
    u = qlinalg.as_cmatrix(u)
    return KrausChannel(u[None], ChannelLabel("unitary"))


def compose_unitaries(ch: KrausChannel, pre: np.ndarray | None = None, post: np.ndarray | None = None) -> KrausChannel:
    """``post o ch o pre`` for unitary pre/post processing."""
    ops = ch.kraus_ops
    if pre is not None:
        ops = ops @ pre
    if post is not None:
        ops = post @ ops
    return KrausChannel(ops, ChannelLabel("conjugated", {"base": str(ch.label)}))
