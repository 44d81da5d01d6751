"""Channel verdicts: entanglement breaking, dense-coding breaking, teleportation breaking.

Verdicts are three-valued. A positive answer is only reported when a theorem
applies to the channel (``yes-by-theorem``); Monte-Carlo searches can refute
but never establish breaking, so they end in ``no-with-counterexample`` or
``undetermined``. Every counterexample carries the ``(seed, index)`` pair that
regenerates its probe with :func:`pbtlab.states.substream`; ``index`` is
``None`` for the maximally entangled probe.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Sequence

import numpy as np

from . import qlinalg
from .channels import (
    ChannelLabel,
    KrausChannel,
    apply_local,
    apply_local_array,
    check_covariance,
    choi,
    conjugate_generators,
    gell_mann,
    is_irreducible,
    is_unital,
    spin_generators,
)
from .errors import DimensionError
from .measures import (
    ADVANTAGE_TOL,
    coherent_dcc_batch,
    conditional_entropy,
    dcc,
    negativity,
    singlet_fraction_bound,
    singlet_fraction_qubit_channel,
    singlet_overlap,
)
from .states import (
    DensityMatrix,
    PureState,
    haar_random_pure,
    haar_random_unitaries,
    max_entangled,
    substream,
    vectors_to_densities,
)

PPT_TOL = 1e-9
COVARIANCE_TOL = 1e-8
COVARIANCE_TRIALS = 50
FIDELITY_TOL = 1e-9


class Status(str, Enum):
    YES = "yes"
    NO = "no"
    PPT_ONLY = "ppt-only-undetermined"
    YES_BY_THEOREM = "yes-by-theorem"
    NO_WITH_COUNTEREXAMPLE = "no-with-counterexample"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class Counterexample:
    measure: str
    value: float
    seed: int | None
    index: int | None
    dims: tuple[int, ...]
    amplitudes: list[list[float]]

    @classmethod
    def from_probe(cls, probe: PureState, measure: str, value: float, seed=None, index=None):
        amps = [[float(z.real), float(z.imag)] for z in probe.amplitudes]
        return cls(measure, float(value), seed, index, probe.dims, amps)

    def probe(self) -> PureState:
        if self.index is None:
            return PureState(np.array([complex(a, b) for a, b in self.amplitudes]), self.dims)
        return replay_probe(self.seed, self.index, self.dims)


@dataclass(frozen=True)
class Verdict:
    status: Status
    theorem: str
    evidence: dict[str, Any] = field(default_factory=dict)
    counterexample: Counterexample | None = None

    @property
    def is_yes(self) -> bool:
        return self.status in (Status.YES, Status.YES_BY_THEOREM)

    @property
    def is_no(self) -> bool:
        return self.status in (Status.NO, Status.NO_WITH_COUNTEREXAMPLE)

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "theorem": self.theorem,
            "evidence": self.evidence,
            "counterexample": asdict(self.counterexample) if self.counterexample else None,
        }


@dataclass(frozen=True)
class CovarianceEvidence:
    """Claimed covariance ``Lambda(U rho U^dagger) = V Lambda(rho) V^dagger``; always re-checked."""

    rep_in: Sequence[np.ndarray]
    rep_out: Sequence[np.ndarray]
    name: str = "user"


def replay_probe(seed: int, index: int, dims: Sequence[int]) -> PureState:
    dA, dB = dims
    return haar_random_pure(dA, dB, substream(seed, index))


def _sampled_probes(seed: int, budget: int, d: int) -> np.ndarray:
    return np.array([replay_probe(seed, i, (d, d)).amplitudes for i in range(budget)])


def _choi_state(ch: KrausChannel) -> DensityMatrix:
    if ch.dim_in != ch.dim_out:
        raise DimensionError("verdicts are implemented for square channels only")
    return choi(ch).state


def _me_counterexample(ch: KrausChannel, measure: str, value: float) -> Counterexample:
    return Counterexample.from_probe(max_entangled(ch.dim_in), measure, value)


def _in_gc33_region(label: ChannelLabel) -> bool:
    if label.family != "gc33":
        return False
    p1, p2 = label.params["p1"], label.params["p2"]
    return p1 <= 0.5 + 1e-12 and p1 + p2 >= 2 / 3 - 1e-12


def is_ebt(ch: KrausChannel) -> Verdict:
    """PPT test on the Choi state; exact for qubits, one-sided for ``d >= 3``."""
    rho = _choi_state(ch)
    lam_min = float(np.linalg.eigvalsh(qlinalg.partial_transpose(rho.matrix, rho.dims, 1))[0])
    ev = {"choi_pt_min_eigenvalue": lam_min, "log_negativity": negativity(rho).log_negativity}
    if lam_min < -PPT_TOL:
        cex = _me_counterexample(ch, "choi_pt_min_eigenvalue", lam_min)
        return Verdict(Status.NO, "NPT Choi state is entangled", ev, cex)
    if ch.dim_in == 2:
        return Verdict(Status.YES, "PPT is equivalent to separability in 2x2", ev)
    if _in_gc33_region(ch.label):
        return Verdict(Status.YES, "SU(2)_(3,3) region p1 <= 1/2, p1 + p2 >= 2/3", ev)
    if ch.label.family == "cq":
        return Verdict(Status.YES, "classical-quantum (measure-and-prepare) form", ev)
    return Verdict(Status.PPT_ONLY, "PPT is not sufficient for separability beyond 2x3", ev)


def default_covariance_evidence(ch: KrausChannel) -> CovarianceEvidence | None:
    """Spin-``j`` representation for the Clebsch-Gordan families, else ``None``."""
    if ch.label.family in ("gc33", "cg") and ch.dim_in == ch.dim_out:
        j = (ch.dim_in - 1) / 2
        gens = spin_generators(j)
        return CovarianceEvidence(gens, gens, name=f"SU(2) spin-{j:g}")
    return None


def covariance_status(
    ch: KrausChannel, seed: int, evidence: CovarianceEvidence | None = None
) -> dict[str, Any]:
    """Try SU(d) with ``V = U`` and ``V = conj(U)``, then any supplied evidence.

    Each candidate passes when the sampled deviation is below ``COVARIANCE_TOL``
    and its input representation is irreducible.
    """
    d = ch.dim_in
    gens = gell_mann(d)
    candidates = [
        ("SU(d) defining", gens, gens),
        ("SU(d) conjugate", gens, conjugate_generators(gens)),
    ]
    if evidence is not None:
        candidates.append((evidence.name, list(evidence.rep_in), list(evidence.rep_out)))
    tried = {}
    for k, (name, rin, rout) in enumerate(candidates):
        dev = check_covariance(ch, rin, rout, COVARIANCE_TRIALS, substream(seed, 2**31 + k))
        tried[name] = dev
        if dev < COVARIANCE_TOL and is_irreducible(rin):
            return {"covariant": True, "representation": name, "deviation": dev, "tried": tried}
    return {"covariant": False, "representation": None, "deviation": None, "tried": tried}


def _dcc_probe_values(ch: KrausChannel, vecs: np.ndarray) -> np.ndarray:
    d = ch.dim_in
    out = apply_local_array(ch.kraus_ops, vectors_to_densities(vecs), (d, d), 0)
    return coherent_dcc_batch(out, (d, d), [0])


def dbt_verdict(
    ch: KrausChannel,
    covariance_evidence: CovarianceEvidence | None = None,
    mc_budget: int = 1000,
    seed: int = 0,
) -> Verdict:
    """Dense-coding-breaking verdict.

    Order: an advantageous Choi state refutes immediately; entanglement-breaking
    channels are trivially breaking; unital qubit channels are decided exactly
    by the Choi capacity; irreducibly covariant channels inherit the Choi
    verdict; everything else gets a Monte-Carlo falsification attempt.
    """
    d = ch.dim_in
    rho = _choi_state(ch)
    res = dcc(rho, [0])
    ev: dict[str, Any] = {"choi_coherent_dcc": res.coherent_form, "classical_bound": res.classical_bound}
    if res.advantage:
        cex = _me_counterexample(ch, "coherent_dcc", res.coherent_form)
        return Verdict(Status.NO_WITH_COUNTEREXAMPLE, "maximally entangled probe keeps a dense-coding advantage", ev, cex)
    if is_ebt(ch).is_yes:
        return Verdict(Status.YES_BY_THEOREM, "entanglement-breaking channels are dense-coding breaking", ev)
    if d == 2 and is_unital(ch):
        return Verdict(Status.YES_BY_THEOREM, "unital qubit: Choi capacity decides", ev)
    cov = covariance_status(ch, seed, covariance_evidence or default_covariance_evidence(ch))
    ev["covariance"] = cov
    if cov["covariant"]:
        return Verdict(Status.YES_BY_THEOREM, "group covariance reduces every probe to the Choi state", ev)
    vals = _dcc_probe_values(ch, _sampled_probes(seed, mc_budget, d))
    ev["mc_budget"] = mc_budget
    ev["mc_max_coherent_dcc"] = float(vals.max()) if vals.size else None
    hits = np.flatnonzero(vals > res.classical_bound + ADVANTAGE_TOL)
    if hits.size:
        i = int(hits[0])
        cex = Counterexample.from_probe(replay_probe(seed, i, (d, d)), "coherent_dcc", vals[i], seed, i)
        return Verdict(Status.NO_WITH_COUNTEREXAMPLE, "sampled probe keeps a dense-coding advantage", ev, cex)
    return Verdict(Status.UNDETERMINED, "no theorem applies and sampling found no advantage", ev)


def _sender_rotated_phi(us: np.ndarray, d: int) -> np.ndarray:
    """Rows ``(U^dagger (x) I)|phi+>`` for each unitary ``U``."""
    phi = max_entangled(d).amplitudes.reshape(d, d)
    return np.einsum("uai,ib->uab", qlinalg.dagger(us), phi).reshape(len(us), d * d)


def _max_unitary_overlap(out: np.ndarray, d: int, us: np.ndarray) -> np.ndarray:
    """``max_U <phi+|(U (x) I) rho (U (x) I)^dagger|phi+>`` over ``us``, per state in ``out``.

    One-sided rotations suffice since ``(U (x) V)|phi+> = (U V^T (x) I)|phi+>``.
    """
    vecs = _sender_rotated_phi(us, d)
    return np.einsum("ui,nij,uj->nu", vecs.conj(), out, vecs).real.max(axis=1)


def tbt_verdict(
    ch: KrausChannel,
    mc_budget: int = 1000,
    seed: int = 0,
    covariance_evidence: CovarianceEvidence | None = None,
    n_unitaries: int = 20,
) -> Verdict:
    """Teleportation-breaking verdict.

    Qubits use the exact equivalence with entanglement breaking. For
    ``d >= 3`` the result concerns the standard protocol only (overlap with
    ``|phi+>`` after local unitaries).
    """
    d = ch.dim_in
    rho = _choi_state(ch)
    ebt = is_ebt(ch)
    if d == 2:
        f = singlet_fraction_qubit_channel(ch)
        ev = {"f_max": f, "choi_neg_trace": 2 * f - 1}
        if ebt.is_yes:
            return Verdict(Status.YES_BY_THEOREM, "qubit: teleportation breaking iff entanglement breaking", ev)
        cex = _me_counterexample(ch, "f_max", f)
        return Verdict(Status.NO_WITH_COUNTEREXAMPLE, "qubit: NPT Choi state beats the classical singlet fraction", ev, cex)
    overlap = singlet_overlap(rho)
    bound = singlet_fraction_bound(rho)
    ev = {"protocol": "standard", "choi_overlap": overlap, "choi_singlet_bound": bound, "threshold": 1 / d}
    if overlap > 1 / d + FIDELITY_TOL:
        cex = _me_counterexample(ch, "singlet_overlap", overlap)
        return Verdict(Status.NO_WITH_COUNTEREXAMPLE, "maximally entangled probe beats 1/d", ev, cex)
    if ebt.is_yes:
        return Verdict(Status.YES_BY_THEOREM, "entanglement-breaking channels are teleportation breaking", ev)
    cov = covariance_status(ch, seed, covariance_evidence or default_covariance_evidence(ch))
    ev["covariance"] = cov
    if cov["covariant"] and bound <= 1 / d + FIDELITY_TOL:
        return Verdict(Status.YES_BY_THEOREM, "group covariance with Choi singlet fraction <= 1/d", ev)
    vecs = _sampled_probes(seed, mc_budget, d)
    out = apply_local_array(ch.kraus_ops, vectors_to_densities(vecs), (d, d), 0)
    best = np.empty(mc_budget)
    for i in range(mc_budget):
        us = haar_random_unitaries(d, n_unitaries, substream(seed, i, 1))
        us = np.concatenate([np.eye(d, dtype=complex)[None], us])
        best[i] = _max_unitary_overlap(out[i : i + 1], d, us)[0]
    ev["mc_budget"] = mc_budget
    ev["mc_max_overlap"] = float(best.max()) if best.size else None
    hits = np.flatnonzero(best > 1 / d + FIDELITY_TOL)
    if hits.size:
        i = int(hits[0])
        cex = Counterexample.from_probe(replay_probe(seed, i, (d, d)), "singlet_overlap", best[i], seed, i)
        return Verdict(Status.NO_WITH_COUNTEREXAMPLE, "sampled probe beats 1/d after local unitaries", ev, cex)
    return Verdict(Status.UNDETERMINED, "no theorem applies and sampling found no overlap above 1/d", ev)
def _probe_output(ch: KrausChannel, probe: PureState) -> DensityMatrix:
    if len(probe.dims) != 2 or probe.dims[0] != ch.dim_in:
        raise DimensionError(f"probe dims {probe.dims} do not match a channel on dimension {ch.dim_in}")
    return apply_local(ch, probe.density(), 0)


def dc_witness_operator(ch: KrausChannel, probe: PureState) -> np.ndarray:
    """``W = -log2(rho) + I (x) log2(Tr_S rho)`` for ``rho = (Lambda (x) I)|probe><probe|``."""
    rho = _probe_output(ch, probe)
    d_s, d_r = rho.dims
    return -qlinalg.matrix_log2_on_support(rho.matrix) + np.kron(
        np.eye(d_s), qlinalg.matrix_log2_on_support(rho.marginal(1).matrix)
    )


def dc_witness_value(ch: KrausChannel, probe: PureState) -> float:
    """``Tr(W rho)``; negative values certify that the channel is not dense-coding breaking."""
    rho = _probe_output(ch, probe)
    w = dc_witness_operator(ch, probe)
    return float(np.real(np.trace(w @ rho.matrix)))


def teleport_witness(ch: KrausChannel) -> tuple[np.ndarray, float]:
    """``W_T = (|eta><eta|)^{T_B}`` for the most negative eigenvector of the Choi partial transpose."""
    if ch.dim_in != 2 or ch.dim_out != 2:
        raise DimensionError("teleportation witness is defined for qubit channels")
    rho = _choi_state(ch)
    eig = qlinalg.herm_eig(qlinalg.partial_transpose(rho.matrix, rho.dims, 1))
    eta = eig.eigenvectors[:, -1]
    w = qlinalg.partial_transpose(np.outer(eta, eta.conj()), rho.dims, 1)
    return w, float(np.real(np.trace(w @ rho.matrix)))


@dataclass(frozen=True)
class ProbeSearchResult:
    probe: PureState
    value: float
    seed: int
    index: int | None
    reason: str


def probe_search(
    ch: KrausChannel,
    budget: int = 1000,
    seed: int = 0,
    covariance_evidence: CovarianceEvidence | None = None,
) -> ProbeSearchResult:
    """Minimize the dense-coding witness over the ME probe and ``budget`` Haar probes.

    Covariant channels return the ME probe directly.
    """
    d = ch.dim_in
    me = max_entangled(d)
    cov = covariance_status(ch, seed, covariance_evidence or default_covariance_evidence(ch))
    if cov["covariant"]:
        return ProbeSearchResult(me, dc_witness_value(ch, me), seed, None, f"covariant ({cov['representation']})")
    vecs = np.vstack([me.amplitudes[None], _sampled_probes(seed, budget, d)])
    # conditional entropy S(S|R) = log2 d_S - coherent form
    values = np.log2(d) - _dcc_probe_values(ch, vecs)
    k = int(np.argmin(values))
    if k == 0:
        return ProbeSearchResult(me, dc_witness_value(ch, me), seed, None, "search: ME probe is minimal")
    probe = replay_probe(seed, k - 1, (d, d))
    return ProbeSearchResult(probe, dc_witness_value(ch, probe), seed, k - 1, "search: sampled probe")


@dataclass(frozen=True)
class ClassificationReport:
    label: str
    ebt: Verdict
    dbt: Verdict
    tbt: Verdict
    witness_dc: float
    witness_tp: float | None
    seed: int
    probe: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.ebt.is_yes and (self.dbt.is_no or self.tbt.is_no):
            raise RuntimeError(f"inconsistent verdicts for {self.label}: EBT channel refuted as DBT/TBT")
        for v in (self.ebt, self.dbt, self.tbt):
            if v.is_no and v.counterexample is None:
                raise RuntimeError(f"refutation without counterexample for {self.label}")

    def to_dict(self) -> dict:
        def cex(v: Verdict):
            return asdict(v.counterexample) if v.counterexample else None

        return {
            "ebt": self.ebt.status.value,
            "dbt": self.dbt.status.value,
            "tbt": self.tbt.status.value,
            "evidence": {
                "channel": self.label,
                "ebt": {"theorem": self.ebt.theorem, **self.ebt.evidence},
                "dbt": {"theorem": self.dbt.theorem, **self.dbt.evidence},
                "tbt": {"theorem": self.tbt.theorem, **self.tbt.evidence},
                "witness_probe": self.probe,
            },
            "witness_dc": self.witness_dc,
            "witness_tp": self.witness_tp,
            "seed": self.seed,
            "counterexample": {"dbt": cex(self.dbt), "tbt": cex(self.tbt)},
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=False, default=_json_default)


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"not JSON serializable: {type(x)}")


def classify_channel(
    ch: KrausChannel,
    seed: int = 0,
    mc_budget: int = 1000,
    covariance_evidence: CovarianceEvidence | None = None,
) -> ClassificationReport:
    ebt = is_ebt(ch)
    dbt = dbt_verdict(ch, covariance_evidence, mc_budget, seed)
    tbt = tbt_verdict(ch, mc_budget, seed, covariance_evidence)
    search = probe_search(ch, mc_budget, seed, covariance_evidence)
    witness_tp = teleport_witness(ch)[1] if ch.dim_in == 2 else None
    probe_info = {"index": search.index, "seed": search.seed, "reason": search.reason}
    return ClassificationReport(str(ch.label), ebt, dbt, tbt, search.value, witness_tp, seed, probe_info)
