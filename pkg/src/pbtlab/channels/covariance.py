"""Group-covariance checks ``Lambda(U rho U^dagger) = V Lambda(rho) V^dagger``.

A representation is passed as a list of Hermitian Lie-algebra generators;
group elements are ``exp(-i sum_k theta_k G_k)`` with random angles. The input
and output representations must list corresponding generators in the same
order so one set of angles drives both.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.linalg import expm, null_space

from .. import qlinalg
from ..errors import DimensionError
from ..states import haar_random_vectors, vectors_to_densities
from .clebsch import spin_operators
from .core import KrausChannel


def gell_mann(d: int) -> list[np.ndarray]:
    """The ``d^2 - 1`` generalized Gell-Mann matrices spanning su(d)."""
    gens = []
    for a in range(d):
        for b in range(a + 1, d):
            s = np.zeros((d, d), dtype=complex)
            s[a, b] = s[b, a] = 1
            gens.append(s)
            t = np.zeros((d, d), dtype=complex)
            t[a, b], t[b, a] = -1j, 1j
            gens.append(t)
    for k in range(1, d):
        diag = np.zeros(d)
        diag[:k] = 1
        diag[k] = -k
        gens.append(np.diag(diag * np.sqrt(2 / (k * (k + 1)))).astype(complex))
    return gens


def spin_generators(j) -> list[np.ndarray]:
    return list(spin_operators(j))


def conjugate_generators(gens: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Generators of the complex-conjugate representation."""
    return [-np.conj(g) for g in gens]


def group_elements(gens: Sequence[np.ndarray], angles: np.ndarray) -> np.ndarray:
    return np.array([expm(-1j * np.tensordot(th, np.array(gens), axes=1)) for th in angles])


def is_irreducible(gens: Sequence[np.ndarray], atol: float = 1e-9) -> bool:
    """True when only multiples of the identity commute with every generator."""
    d = gens[0].shape[0]
    eye = np.eye(d)
    rows = [np.kron(g, eye) - np.kron(eye, g.T) for g in gens]
    return null_space(np.vstack(rows), rcond=atol).shape[1] == 1


def check_covariance(
    ch: KrausChannel,
    rep_in: Sequence[np.ndarray],
    rep_out: Sequence[np.ndarray],
    trials: int,
    stream: np.random.Generator,
) -> float:
    """Max trace-norm deviation over random group elements and random pure inputs."""
    if len(rep_in) != len(rep_out):
        raise DimensionError("input and output representations need the same number of generators")
    if rep_in[0].shape != (ch.dim_in,) * 2 or rep_out[0].shape != (ch.dim_out,) * 2:
        raise DimensionError("generator dimensions do not match the channel")
    angles = stream.uniform(-np.pi, np.pi, size=(trials, len(rep_in)))
    us = group_elements(rep_in, angles)
    vs = group_elements(rep_out, angles)
    rhos = vectors_to_densities(haar_random_vectors(ch.dim_in, trials, stream))
    ops = ch.kraus_ops
    act = lambda m: np.einsum("kai,nij,kbj->nab", ops, m, ops.conj())
    lhs = act(us @ rhos @ qlinalg.dagger(us))
    rhs = vs @ act(rhos) @ qlinalg.dagger(vs)
    return max(qlinalg.trace_norm(x) for x in lhs - rhs)
