"""Named channel families."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import DimensionError, SimplexError
from ..states import haar_random_unitary
from .clebsch import make_cg_channel
from .core import ChannelLabel, KrausChannel, _check_simplex, mixture

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.array([I2, SX, SY, SZ])


def weyl_operators(d: int) -> np.ndarray:
    """Generalized Pauli operators ``X^a Z^b``, ``a, b = 0..d-1``, shape ``(d*d, d, d)``.

    Index ``a*d + b``; entry 0 is the identity.
    """
    omega = np.exp(2j * np.pi / d)
    shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    clock = np.diag(omega ** np.arange(d))
    ops = []
    for a in range(d):
        xa = np.linalg.matrix_power(shift, a)
        for b in range(d):
            ops.append(xa @ np.linalg.matrix_power(clock, b))
    return np.array(ops)


def make_pauli(p0, p1, p2, p3) -> KrausChannel:
    """``rho -> sum_i p_i sigma_i rho sigma_i`` with ``sigma = (I, X, Y, Z)``."""
    w = _check_simplex([p0, p1, p2, p3], 4)
    ops = np.sqrt(w)[:, None, None] * PAULIS
    return KrausChannel(ops, ChannelLabel("pauli", {"p": [float(x) for x in w]}))


def make_unital_canonical(p1, p2, p3, p4) -> KrausChannel:
    """Canonical unital qubit channel ``sum_i p_i Lambda_i``.

    ``Lambda_1`` fully depolarizes, ``Lambda_2`` is the identity,
    ``Lambda_3 = (xi + X xi X)/2`` and ``Lambda_4 = (X xi X + Y xi Y)/2``.
    """
    w = _check_simplex([p1, p2, p3, p4], 4)
    parts = [
        KrausChannel(0.5 * PAULIS),
        KrausChannel(I2[None]),
        KrausChannel(np.array([I2, SX]) / np.sqrt(2)),
        KrausChannel(np.array([SX, SY]) / np.sqrt(2)),
    ]
    label = ChannelLabel("unital_canonical", {"p": [float(x) for x in w]})
    return mixture(parts, w, label=label)


def unital_canonical_pauli_weights(p1, p2, p3, p4) -> np.ndarray:
    """Pauli-channel weights ``(I, X, Y, Z)`` equivalent to the canonical unital mixture."""
    return np.array([p1 / 4 + p2 + p3 / 2, p1 / 4 + p3 / 2 + p4 / 2, p1 / 4 + p4 / 2, p1 / 4])


def make_depolarizing(d: int, q: float) -> KrausChannel:
    """``rho -> q rho + (1 - q) Tr(rho) I/d`` via the Weyl basis."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"depolarizing parameter must lie in [0, 1], got {q}")
    if d < 1:
        raise DimensionError(f"dimension must be positive, got {d}")
    w = np.full(d * d, (1 - q) / d**2)
    w[0] += q
    ops = np.sqrt(w)[:, None, None] * weyl_operators(d)
    return KrausChannel(ops, ChannelLabel("depolarizing", {"d": d, "q": float(q)}))


def make_werner_holevo(d: int) -> KrausChannel:
    """``rho -> (Tr(rho) I - rho^T)/(d - 1)`` from antisymmetric generators."""
    if d < 2:
        raise DimensionError(f"Werner-Holevo channel needs d >= 2, got {d}")
    ops = []
    for i in range(d):
        for j in range(i + 1, d):
            K = np.zeros((d, d), dtype=complex)
            K[i, j] = 1.0
            K[j, i] = -1.0
            ops.append(K / np.sqrt(d - 1))
    return KrausChannel(np.array(ops), ChannelLabel("werner_holevo", {"d": d}))


def make_gc33(p1: float, p2: float) -> KrausChannel:
    """SU(2)-covariant qutrit channel ``(1-p1-p2) Phi_0 + p1 Phi_2 + p2 Phi_4``.

    ``Phi_{2J}`` is the spin-1 Clebsch-Gordan channel with coupled spin ``J``.
    """
    p1, p2 = float(p1), float(p2)
    if p1 < 0 or p2 < 0 or p1 + p2 > 1 + 1e-12:
        raise SimplexError(f"(p1, p2) = ({p1}, {p2}) is outside the simplex")
    w0 = max(0.0, 1.0 - p1 - p2)
    parts = [make_cg_channel(1, J) for J in (0, 1, 2)]
    return mixture(parts, [w0, p1, p2], label=ChannelLabel("gc33", {"p1": p1, "p2": p2}))


def make_extreme_cq(
    measure_basis: np.ndarray, outputs: Sequence[np.ndarray], extreme: bool = False
) -> KrausChannel:
    """Classical-quantum channel ``rho -> sum_k <b_k|rho|b_k> |psi_k><psi_k|``.

    ``measure_basis`` holds the measurement vectors as columns. With
    ``extreme=True`` the outputs must also be pairwise non-orthogonal.
    """
    B = np.asarray(measure_basis, dtype=complex)
    d = B.shape[0]
    if B.shape != (d, d) or not np.allclose(B.conj().T @ B, np.eye(d), atol=1e-10):
        raise ValueError("measurement basis must be an orthonormal set of d column vectors")
    outs = [np.asarray(v, dtype=complex).reshape(-1) for v in outputs]
    if len(outs) != d:
        raise DimensionError(f"need one output state per basis vector ({d}), got {len(outs)}")
    dout = outs[0].size
    for v in outs:
        if v.size != dout or abs(np.linalg.norm(v) - 1) > 1e-10:
            raise ValueError("outputs must be unit vectors of a common dimension")
    if extreme:
        for a in range(d):
            for b in range(a + 1, d):
                if abs(np.vdot(outs[a], outs[b])) < 1e-12:
                    raise ValueError(f"outputs {a} and {b} are orthogonal; channel would not be extreme")
    ops = np.array([np.outer(v, B[:, k].conj()) for k, v in enumerate(outs)])
    return KrausChannel(ops, ChannelLabel("cq", {"extreme": bool(extreme)}))


def make_amplitude_damping(gamma: float) -> KrausChannel:
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"damping must lie in [0, 1], got {gamma}")
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return KrausChannel(np.array([k0, k1]), ChannelLabel("amplitude_damping", {"gamma": float(gamma)}))


def random_channel(d: int, n_kraus: int, stream: np.random.Generator) -> KrausChannel:
    """Kraus operators cut from a Haar isometry ``C^d -> C^d (x) C^n_kraus``."""
    u = haar_random_unitary(d * n_kraus, stream)
    iso = u[:, :d]
    ops = iso.reshape(d, n_kraus, d).transpose(1, 0, 2)
    return KrausChannel(ops, ChannelLabel("random", {"d": d, "n_kraus": n_kraus}))
