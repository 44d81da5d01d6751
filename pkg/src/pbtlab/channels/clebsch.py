"""Clebsch-Gordan coefficients and SU(2)-covariant Clebsch-Gordan channels.

Spins are stored doubled (``2j``) so half-integers stay exact. Spin-``j``
matrices use the ordered basis ``|j, j>, |j, j-1>, ..., |j, -j>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..errors import SpinError
from .core import ChannelLabel, KrausChannel


def _doubled(x) -> int:
    two_x = Fraction(x) * 2
    if two_x.denominator != 1:
        raise SpinError(f"{x} is not a half-integer")
    return int(two_x)


@dataclass(frozen=True)
class CGCoefficientQuery:
    """``<j1 m1; j2 m2 | J M>`` with every quantum number stored doubled."""

    tj1: int
    tm1: int
    tj2: int
    tm2: int
    tJ: int
    tM: int

    def __post_init__(self):
        for tj, tm in ((self.tj1, self.tm1), (self.tj2, self.tm2), (self.tJ, self.tM)):
            if tj < 0:
                raise SpinError(f"negative spin {tj}/2")
            if abs(tm) > tj:
                raise SpinError(f"|m| = {abs(tm)}/2 exceeds j = {tj}/2")
            if (tj - tm) % 2:
                raise SpinError(f"m = {tm}/2 and j = {tj}/2 differ by a half-integer")

    @classmethod
    def from_spins(cls, j1, m1, j2, m2, J, M) -> "CGCoefficientQuery":
        return cls(*(_doubled(x) for x in (j1, m1, j2, m2, J, M)))

    @property
    def allowed(self) -> bool:
        return (
            self.tM == self.tm1 + self.tm2
            and abs(self.tj1 - self.tj2) <= self.tJ <= self.tj1 + self.tj2
            and (self.tj1 + self.tj2 + self.tJ) % 2 == 0
        )


@lru_cache(maxsize=None)
def _racah(tj1: int, tm1: int, tj2: int, tm2: int, tJ: int, tM: int) -> float:
    f = math.factorial
    # every argument below is an integer once the selection rules hold
    a = (tJ + tj1 - tj2) // 2
    b = (tJ - tj1 + tj2) // 2
    c = (tj1 + tj2 - tJ) // 2
    norm = Fraction((tJ + 1) * f(a) * f(b) * f(c), f((tj1 + tj2 + tJ) // 2 + 1))
    norm *= (
        f((tJ + tM) // 2) * f((tJ - tM) // 2)
        * f((tj1 - tm1) // 2) * f((tj1 + tm1) // 2)
        * f((tj2 - tm2) // 2) * f((tj2 + tm2) // 2)
    )
    total = Fraction(0)
    for k in range(0, c + 1):
        args = (
            k,
            c - k,
            (tj1 - tm1) // 2 - k,
            (tj2 + tm2) // 2 - k,
            (tJ - tj2 + tm1) // 2 + k,
            (tJ - tj1 - tm2) // 2 + k,
        )
        if min(args) < 0:
            continue
        denom = 1
        for x in args:
            denom *= f(x)
        total += Fraction((-1) ** k, denom)
    if total == 0:
        return 0.0
    sign = 1.0 if total > 0 else -1.0
    return sign * math.sqrt(norm * total * total)


def clebsch_gordan(q: CGCoefficientQuery) -> float:
    """Condon-Shortley coefficient from the Racah closed-form sum."""
    if not q.allowed:
        return 0.0
    return _racah(q.tj1, q.tm1, q.tj2, q.tm2, q.tJ, q.tM)


def cg(j1, m1, j2, m2, J, M) -> float:
    """Convenience wrapper taking ordinary (possibly half-integer) spins."""
    return clebsch_gordan(CGCoefficientQuery.from_spins(j1, m1, j2, m2, J, M))


def spin_operators(j) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(Jx, Jy, Jz)`` for spin ``j`` in the descending-``m`` basis."""
    tj = _doubled(j)
    if tj < 0:
        raise SpinError(f"negative spin {j}")
    dim = tj + 1
    m = (tj - 2 * np.arange(dim)) / 2.0
    jval = tj / 2.0
    jp = np.zeros((dim, dim), dtype=complex)
    for k in range(1, dim):
        # J+ |m_k> = sqrt(j(j+1) - m_k(m_k+1)) |m_{k-1}>
        jp[k - 1, k] = np.sqrt(jval * (jval + 1) - m[k] * (m[k] + 1))
    jx = (jp + jp.conj().T) / 2
    jy = (jp - jp.conj().T) / 2j
    jz = np.diag(m).astype(complex)
    return jx, jy, jz


def make_cg_channel(j, J) -> KrausChannel:
    """SU(2)-covariant channel on spin ``j`` built from the ``j (x) J -> j`` coupling.

    ``(K_m)_{mu', mu}`` is proportional to ``<j mu; J m | j mu'>`` for
    ``m = -J..J``; the common scale is fixed by completeness.
    """
    tj = _doubled(j)
    tJ = _doubled(J)
    if tJ % 2 or not 0 <= tJ <= 2 * tj:
        raise SpinError(f"coupled spin J must be an integer in [0, 2j], got {J} for j = {j}")
    dim = tj + 1
    tms = [tj - 2 * k for k in range(dim)]
    ops = []
    for tm in range(-tJ, tJ + 1, 2):
        K = np.zeros((dim, dim))
        for a, tmu_out in enumerate(tms):
            for b, tmu_in in enumerate(tms):
                K[a, b] = clebsch_gordan(CGCoefficientQuery(tj, tmu_in, tJ, tm, tj, tmu_out))
        ops.append(K)
    ops = np.array(ops, dtype=complex)
    s = np.einsum("kai,kaj->ij", ops.conj(), ops)
    scale = s[0, 0].real
    # Schur's lemma makes s proportional to the identity
    if not np.allclose(s, scale * np.eye(dim), atol=1e-12):
        raise RuntimeError("Clebsch-Gordan Kraus set is not proportional to an isometry")
    return KrausChannel(ops / np.sqrt(scale), ChannelLabel("cg", {"j": float(Fraction(tj, 2)), "J": tJ // 2}))
