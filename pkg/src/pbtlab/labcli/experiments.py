"""Seeded Monte-Carlo sweeps.

Row ``i`` of every sweep draws all of its randomness from
``substream(cfg.seed, i)``, so rows can be computed in any order (or in
parallel) and the CSV is identical. ``C_*`` and ``capacity*`` columns are
dense-coding capacities, i.e. ``max(log2 d_S, log2 d_S + S(rho_R) - S(rho_SR))``.

Column sets
-----------
fig1:         sample_index, seed, p1, p2, C_phi_plus, C_max_probe, delta_C, log_negativity
unital-scan:  sample_index, seed, p1, p2, p3, p4, C_choi, C_max_probe, delta_C, ebt_flag
multisender:  sample_index, seed, p1_1, p1_2, capacity_ghz, capacity, theorem_applies, bound_satisfied

``delta_C`` is the smallest gap ``K(phi+) - K(probe)`` over the sampled probes,
where ``K`` is the coherent form ``log2 d_S + S(rho_R) - S(rho_SR)`` without the
classical floor; it stays informative where both capacities sit at the bound.
"""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from ..channels import apply_local_array, choi, make_gc33, make_unital_canonical
from ..measures import coherent_dcc_batch, encoding_unitaries, log_negativity_batch, noisy_coherent_dcc_batch, pt_eigenvalues
from ..states import ghz, haar_random_vectors, substream, vectors_to_densities
from .config import ExperimentConfig

log = logging.getLogger(__name__)

FIG1_COLUMNS = ("sample_index", "seed", "p1", "p2", "C_phi_plus", "C_max_probe", "delta_C", "log_negativity")
UNITAL_COLUMNS = ("sample_index", "seed", "p1", "p2", "p3", "p4", "C_choi", "C_max_probe", "delta_C", "ebt_flag")
MULTI_COLUMNS = ("sample_index", "seed", "p1_1", "p1_2", "capacity_ghz", "capacity", "theorem_applies", "bound_satisfied")

PPT_TOL = 1e-9


@dataclass
class SweepResult:
    columns: Sequence[str]
    rows: list[tuple]
    violations: list[str] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        k = list(self.columns).index(name)
        return np.array([r[k] for r in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(x) for x in row])
        return buf.getvalue()

    def write(self, path: str | Path) -> None:
        path = Path(path)
        try:
            path.write_text(self.to_csv())
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not np.isfinite(x):
        raise ValueError("non-finite value in sweep row")
    return f"{x:.12g}"


def _run_rows(fn: Callable[[int], tuple], n: int, workers: int) -> list[tuple]:
    if workers <= 1:
        return [fn(i) for i in range(n)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n), chunksize=max(1, n // (4 * workers))))


def sample_triangle(rng: np.random.Generator) -> tuple[float, float]:
    """Uniform point of ``{p1, p2 >= 0, p1 + p2 <= 1}`` by rejection."""
    while True:
        p1, p2 = rng.random(2)
        if p1 + p2 <= 1.0:
            return float(p1), float(p2)


def sample_simplex(k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform point of the ``(k-1)``-simplex via normalized exponentials."""
    e = rng.exponential(size=k)
    return e / e.sum()


def _probe_coherent(ops: np.ndarray, d: int, vecs: np.ndarray) -> np.ndarray:
    out = apply_local_array(ops, vectors_to_densities(vecs), (d, d), 0)
    return coherent_dcc_batch(out, (d, d), [0])


def fig1_row(index: int, seed: int, probes: int) -> tuple:
    rng = substream(seed, index)
    p1, p2 = sample_triangle(rng)
    ch = make_gc33(p1, p2)
    c = choi(ch).matrix
    c_phi = float(coherent_dcc_batch(c[None], (3, 3), [0])[0])
    c_max = float(_probe_coherent(ch.kraus_ops, 3, haar_random_vectors(9, probes, rng)).max())
    logneg = float(log_negativity_batch(c, (3, 3)))
    bound = np.log2(3)
    return (index, seed, p1, p2, max(c_phi, bound), max(c_max, bound), c_phi - c_max, logneg)


def run_fig1(cfg: ExperimentConfig) -> SweepResult:
    """SU(2)-covariant qutrit channels: Choi capacity, probe gap and Choi log-negativity."""
    fn = partial(fig1_row, seed=cfg.seed, probes=cfg.probes)
    rows = _run_rows(fn, cfg.samples, cfg.workers)
    res = SweepResult(FIG1_COLUMNS, rows)
    for r in rows:
        idx, _, p1, p2, _, _, delta, logneg = r
        if delta < -cfg.delta_tol:
            res.violations.append(f"row {idx}: delta_C = {delta:.3e} < 0")
        if p1 <= 0.5 and p1 + p2 >= 2 / 3 and logneg > cfg.ebt_tol:
            res.violations.append(f"row {idx}: entangled Choi state inside the EBT region")
    return res


def unital_row(index: int, seed: int, probes: int) -> tuple:
    rng = substream(seed, index)
    p = sample_simplex(4, rng)
    ch = make_unital_canonical(*p)
    c = choi(ch).matrix
    c_choi = float(coherent_dcc_batch(c[None], (2, 2), [0])[0])
    c_max = float(_probe_coherent(ch.kraus_ops, 2, haar_random_vectors(4, probes, rng)).max())
    ebt = bool(pt_eigenvalues(c, (2, 2))[0] >= -PPT_TOL)
    return (index, seed, *map(float, p), max(c_choi, 1.0), max(c_max, 1.0), c_choi - c_max, ebt)


def run_unital_scan(cfg: ExperimentConfig) -> SweepResult:
    """Canonical unital qubit channels against Haar two-qubit probes."""
    fn = partial(unital_row, seed=cfg.seed, probes=cfg.probes)
    rows = _run_rows(fn, cfg.samples, cfg.workers)
    res = SweepResult(UNITAL_COLUMNS, rows)
    for r in rows:
        idx, p1, c_choi, delta = r[0], r[2], r[6], r[8]
        if delta < -cfg.delta_tol:
            res.violations.append(f"row {idx}: delta_C = {delta:.3e} < 0")
        if p1 >= 0.5 and c_choi > 1 + 1e-9:
            res.violations.append(f"row {idx}: p1 >= 1/2 but C_choi = {c_choi:.12g} > 1")
    return res


def _sender_weights(p1: float, remainder: str, rng: np.random.Generator) -> np.ndarray:
    if remainder == "identity":
        return np.array([p1, 1 - p1, 0.0, 0.0])
    return np.concatenate([[p1], (1 - p1) * sample_simplex(3, rng)])


def multisender_row(index: int, seed: int, steps: int, probes: int, trials: int, remainder: str, tol: float) -> tuple:
    rng = substream(seed, index)
    a, b = divmod(index, steps)
    q1, q2 = a / (steps - 1), b / (steps - 1)
    channels = [make_unital_canonical(*_sender_weights(q, remainder, rng)) for q in (q1, q2)]
    vecs = np.vstack([ghz(3).amplitudes[None], haar_random_vectors(8, probes, rng)])
    us = [encoding_unitaries(2, trials, rng) for _ in range(2)]
    coherent = noisy_coherent_dcc_batch(vectors_to_densities(vecs), (2, 2, 2), [0, 1], channels, us)
    cap = np.maximum(coherent, 2.0)
    applies = q1 + q2 >= 1 - 1e-12
    return (index, seed, q1, q2, float(cap[0]), float(cap.max()), applies, bool(cap.max() <= 2 + tol))


def run_multisender(cfg: ExperimentConfig) -> SweepResult:
    """Two unital channels on the senders of a three-qubit state, on a ``grid_steps``-square grid.

    Each point is evaluated on GHZ plus ``probes`` Haar states, with the
    identity and ``unitary_trials`` sampled encoding unitaries per sender.
    """
    if cfg.grid_steps < 2:
        raise ValueError("grid_steps must be at least 2")
    fn = partial(
        multisender_row,
        seed=cfg.seed,
        steps=cfg.grid_steps,
        probes=cfg.probes,
        trials=cfg.unitary_trials,
        remainder=cfg.remainder,
        tol=cfg.bound_tol,
    )
    rows = _run_rows(fn, cfg.grid_steps**2, cfg.workers)
    res = SweepResult(MULTI_COLUMNS, rows)
    for r in rows:
        if r[6] and not r[7]:
            res.violations.append(f"row {r[0]}: p1 sum >= 1 but capacity {r[5]:.12g} > 2")
    return res


SWEEPS = {"fig1": run_fig1, "unital-scan": run_unital_scan, "multisender": run_multisender}
