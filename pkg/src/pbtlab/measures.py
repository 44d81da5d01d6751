"""Entropic and entanglement figures of merit.

All entropies are in bits. The ``*_batch`` helpers operate on stacks of
matrices with shape ``(n, D, D)`` and skip validation; the Monte-Carlo sweeps
use them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import qlinalg
from .channels.core import KrausChannel, apply_local_array, choi
from .channels.families import PAULIS
from .errors import DimensionError
from .states import DensityMatrix, haar_random_unitaries, max_entangled

ADVANTAGE_TOL = 1e-9


def entropy_from_eigenvalues(lam: np.ndarray, cutoff: float = qlinalg.SUPPORT_CUTOFF) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    safe = np.where(lam > cutoff, lam, 1.0)
    return -np.sum(np.where(lam > cutoff, lam * np.log2(safe), 0.0), axis=-1)


def entropy_batch(mats: np.ndarray) -> np.ndarray:
    return entropy_from_eigenvalues(np.linalg.eigvalsh(mats))


def entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy ``-Tr rho log2 rho``."""
    return float(entropy_from_eigenvalues(qlinalg.herm_eig(rho.matrix).eigenvalues))


def _subsystem_list(sub, n: int) -> list[int]:
    idx = [sub] if isinstance(sub, (int, np.integer)) else list(sub)
    if not idx or any(not 0 <= i < n for i in idx):
        raise DimensionError(f"subsystems {idx} invalid for a {n}-party state")
    return sorted(set(int(i) for i in idx))


def conditional_entropy(rho: DensityMatrix, conditioned_on=None) -> float:
    """``S(rho) - S(rho_R)`` where ``R = conditioned_on`` (default: last subsystem)."""
    n = len(rho.dims)
    if n < 2:
        raise DimensionError("conditional entropy needs at least two subsystems")
    cond = _subsystem_list(n - 1 if conditioned_on is None else conditioned_on, n)
    if len(cond) == n:
        raise DimensionError("cannot condition on every subsystem")
    return entropy(rho) - entropy(rho.marginal(cond))


@dataclass(frozen=True)
class DccResult:
    coherent_form: float
    capacity: float
    classical_bound: float
    advantage: bool

    @classmethod
    def from_coherent(cls, coherent: float, classical: float) -> "DccResult":
        return cls(
            coherent_form=float(coherent),
            capacity=float(max(coherent, classical)),
            classical_bound=float(classical),
            advantage=bool(coherent > classical + ADVANTAGE_TOL),
        )


def _split(dims: Sequence[int], senders) -> tuple[list[int], list[int]]:
    n = len(dims)
    if n < 2:
        raise DimensionError("dense coding needs at least one sender and a receiver")
    snd = list(range(n - 1)) if senders is None else _subsystem_list(senders, n)
    rcv = [i for i in range(n) if i not in snd]
    if not rcv:
        raise DimensionError("no receiver subsystem left after removing the senders")
    return snd, rcv


def coherent_dcc_batch(mats: np.ndarray, dims: Sequence[int], senders=None) -> np.ndarray:
    """``log2 d_S + S(rho_R) - S(rho_SR)`` for every matrix in the stack."""
    snd, rcv = _split(dims, senders)
    log_ds = float(np.log2(np.prod([dims[i] for i in snd])))
    s_r = entropy_batch(qlinalg.partial_trace(mats, dims, rcv))
    return log_ds + s_r - entropy_batch(mats)


def dcc(rho: DensityMatrix, senders=None) -> DccResult:
    """Dense-coding capacity with senders ``senders`` (default: all but the last)."""
    snd, _ = _split(rho.dims, senders)
    log_ds = float(np.log2(np.prod([rho.dims[i] for i in snd])))
    coherent = coherent_dcc_batch(rho.matrix[None], rho.dims, snd)[0]
    return DccResult.from_coherent(coherent, log_ds)


def noisy_coherent_dcc_batch(
    mats: np.ndarray,
    dims: Sequence[int],
    senders: Sequence[int],
    channels: Sequence[KrausChannel],
    unitaries: Sequence[np.ndarray],
) -> np.ndarray:
    """Noisy coherent form per state, maximized over the supplied encoding unitaries.

    ``unitaries[k]`` has shape ``(T, d_k, d_k)`` and is applied to sender
    ``senders[k]``; the ``T`` trials are paired across senders.
    """
    n, D = mats.shape[0], mats.shape[-1]
    T = unitaries[0].shape[0]
    stack = np.broadcast_to(mats[:, None], (n, T, D, D)).reshape(n * T, D, D)
    for i, us in zip(senders, unitaries):
        stack = _conj_local(np.tile(us, (n, 1, 1)), stack, dims, i)
    for i, ch in zip(senders, channels):
        stack = apply_local_array(ch.kraus_ops, stack, dims, i)
    rcv = [k for k in range(len(dims)) if k not in senders]
    log_ds = float(np.log2(np.prod([dims[i] for i in senders])))
    s_r = entropy_batch(qlinalg.partial_trace(mats, dims, rcv))
    s_min = entropy_batch(stack).reshape(n, T).min(axis=1)
    return log_ds + s_r - s_min


def dcc_noisy_multisender(
    rho: DensityMatrix,
    sender_channels: Sequence[KrausChannel],
    unitary_trials: int,
    stream: np.random.Generator,
    senders=None,
) -> DccResult:
    """Capacity when each sender's encoded subsystem passes through its own channel.

    The encoding-side entropy minimization over local unitaries is sampled:
    the identity plus ``unitary_trials`` Haar draws per sender.
    """
    snd, _ = _split(rho.dims, senders)
    if len(sender_channels) != len(snd):
        raise DimensionError(f"{len(snd)} senders but {len(sender_channels)} channels")
    for i, ch in zip(snd, sender_channels):
        if ch.dim_in != rho.dims[i] or ch.dim_out != rho.dims[i]:
            raise DimensionError(f"channel on sender {i} does not act on dimension {rho.dims[i]}")
    us = [encoding_unitaries(rho.dims[i], unitary_trials, stream) for i in snd]
    coherent = noisy_coherent_dcc_batch(rho.matrix[None], rho.dims, snd, sender_channels, us)[0]
    log_ds = float(np.log2(np.prod([rho.dims[i] for i in snd])))
    return DccResult.from_coherent(coherent, log_ds)


def encoding_unitaries(d: int, trials: int, stream: np.random.Generator) -> np.ndarray:
    """Identity followed by ``trials`` Haar unitaries, shape ``(trials + 1, d, d)``."""
    us = haar_random_unitaries(d, trials, stream)
    return np.concatenate([np.eye(d, dtype=complex)[None], us])


def _conj_local(us: np.ndarray, stack: np.ndarray, dims: Sequence[int], i: int) -> np.ndarray:
    """``(U_n on subsystem i) stack[n] (U_n on subsystem i)^dagger`` per stack entry."""
    left = int(np.prod(dims[:i]))
    right = int(np.prod(dims[i + 1 :]))
    d = dims[i]
    n = stack.shape[0]
    t = stack.reshape(n, left, d, right, left, d, right)
    out = np.einsum("nai,nxiyujv,nbj->nxayubv", us, t, us.conj(), optimize=True)
    return out.reshape(stack.shape)


@dataclass(frozen=True)
class NegativityResult:
    neg_vidal: float
    neg_trace: float
    log_negativity: float


def pt_eigenvalues(mats: np.ndarray, dims: Sequence[int], subsystem: int = 1) -> np.ndarray:
    return np.linalg.eigvalsh(qlinalg.partial_transpose(mats, dims, subsystem))


def negativity_batch(mats: np.ndarray, dims: Sequence[int], subsystem: int = 1) -> np.ndarray:
    """Trace-norm negativity ``||rho^T_B||_1 - 1`` per matrix."""
    return np.abs(pt_eigenvalues(mats, dims, subsystem)).sum(axis=-1) - 1.0


def log_negativity_batch(mats: np.ndarray, dims: Sequence[int], subsystem: int = 1) -> np.ndarray:
    return np.log2(np.abs(pt_eigenvalues(mats, dims, subsystem)).sum(axis=-1))


def negativity(rho: DensityMatrix, subsystem: int = 1) -> NegativityResult:
    if len(rho.dims) != 2:
        raise DimensionError("negativity is defined here for bipartite states")
    lam = pt_eigenvalues(rho.matrix, rho.dims, subsystem)
    norm1 = float(np.abs(lam).sum())
    return NegativityResult(
        neg_vidal=float(-lam[lam < 0].sum()),
        neg_trace=norm1 - 1.0,
        log_negativity=float(np.log2(norm1)),
    )


def singlet_overlap(rho: DensityMatrix) -> float:
    """``<phi+|rho|phi+>`` for a ``d (x) d`` state."""
    if len(rho.dims) != 2 or rho.dims[0] != rho.dims[1]:
        raise DimensionError("singlet overlap needs a d x d bipartite state")
    phi = max_entangled(rho.dims[0]).amplitudes
    return float(np.real(phi.conj() @ rho.matrix @ phi))


def singlet_fraction_bound(rho: DensityMatrix) -> float:
    """``||rho^T_B||_1 / d``: an upper bound on the singlet fraction after any LOCC.

    Equals ``1/d`` on PPT states and is exact for two qubits.
    """
    if len(rho.dims) != 2 or rho.dims[0] != rho.dims[1]:
        raise DimensionError("singlet fraction needs a d x d bipartite state")
    return (1.0 + negativity(rho).neg_trace) / rho.dims[0]


def singlet_fraction_qubit_channel(ch: KrausChannel) -> float:
    """Optimal singlet fraction ``(1 + N(Choi))/2`` of a qubit channel."""
    if ch.dim_in != 2 or ch.dim_out != 2:
        raise DimensionError("qubit channel required")
    return 0.5 * (1.0 + negativity(choi(ch).state).neg_trace)


@dataclass(frozen=True)
class TeleportBound:
    fidelity: float
    singlet_fraction: float
    correlators: np.ndarray


def correlation_matrix(rho: DensityMatrix) -> np.ndarray:
    """``C_ij = Tr(rho sigma_i (x) sigma_j)`` for ``i, j in (x, y, z)``."""
    if rho.dims != (2, 2):
        raise DimensionError("two-qubit state required")
    sig = PAULIS[1:]
    return np.array([[np.real(np.trace(rho.matrix @ np.kron(a, b))) for b in sig] for a in sig])


def teleport_fidelity_bound_qubit(rho: DensityMatrix) -> TeleportBound:
    """``F <= (1 + Tr sqrt(C^dagger C)/3)/2`` and the implied ``(1 + Tr|C|)/4``."""
    c = correlation_matrix(rho)
    tn = qlinalg.trace_norm(c)
    return TeleportBound(fidelity=0.5 * (1 + tn / 3), singlet_fraction=0.25 * (1 + tn), correlators=c)
