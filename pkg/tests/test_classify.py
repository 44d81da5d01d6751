import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pbtlab import classify as cl
from pbtlab.channels import (
    apply_local,
    choi,
    compose_unitaries,
    identity_channel,
    make_amplitude_damping,
    make_depolarizing,
    make_gc33,
    make_pauli,
    make_unital_canonical,
    make_werner_holevo,
    mixture,
    random_channel,
)
from pbtlab.measures import conditional_entropy, dcc, pt_eigenvalues, singlet_fraction_qubit_channel
from pbtlab.states import DensityMatrix, PureState, haar_random_pure, haar_random_unitary, max_entangled, substream

from oracles import werner_entropy

Status = cl.Status
seeds = st.integers(0, 2**32 - 1)


def leaky_damping():
    """Non-unital qubit channel whose Choi state has no advantage but other probes do."""
    return mixture([make_amplitude_damping(0.6), make_unital_canonical(1, 0, 0, 0)], [0.95, 0.05])


# --- is_ebt ---------------------------------------------------------------------


def test_is_ebt_examples():
    assert cl.is_ebt(make_depolarizing(2, 0.2)).status is Status.YES
    no = cl.is_ebt(make_depolarizing(2, 0.5))
    assert no.status is Status.NO
    assert no.evidence["choi_pt_min_eigenvalue"] == pytest.approx((1 - 3 * 0.5) / 4)
    assert cl.is_ebt(make_gc33(0.4, 0.3)).status is Status.YES
    assert cl.is_ebt(make_gc33(0.9, 0.05)).status is Status.NO


def test_is_ebt_ppt_qutrit_without_structure_is_undetermined():
    # a PPT qutrit channel that is not from a family with a known separability proof
    ch = mixture([make_gc33(0.4, 0.3), make_depolarizing(3, 0.0)], [0.5, 0.5]).relabel(cl.ChannelLabel("kraus"))
    assert cl.is_ebt(ch).status is Status.PPT_ONLY


# --- dbt_verdict ----------------------------------------------------------------


def test_dbt_examples():
    v = cl.dbt_verdict(make_unital_canonical(0.6, 0.4, 0, 0))
    assert v.status is Status.YES_BY_THEOREM
    dep = make_depolarizing(2, 0.5)
    v = cl.dbt_verdict(dep)
    assert v.status is Status.YES_BY_THEOREM
    assert v.evidence["choi_coherent_dcc"] == pytest.approx(2 - werner_entropy(0.5), abs=1e-12)
    assert werner_entropy(0.5) == pytest.approx(1.549, abs=1e-3)
    assert cl.is_ebt(dep).status is Status.NO
    ident = cl.dbt_verdict(identity_channel(2))
    assert ident.status is Status.NO_WITH_COUNTEREXAMPLE
    assert ident.counterexample.value == pytest.approx(2)
    assert np.allclose(ident.counterexample.probe().amplitudes, max_entangled(2).amplitudes)


def test_dbt_covariant_qutrits():
    assert cl.dbt_verdict(make_werner_holevo(3)).status is Status.YES_BY_THEOREM
    assert cl.dbt_verdict(make_gc33(0.9, 0.05)).status is Status.YES_BY_THEOREM
    assert cl.dbt_verdict(make_gc33(0.1, 0.1)).status is Status.NO_WITH_COUNTEREXAMPLE


def test_dbt_monte_carlo_counterexample_replays():
    ch = leaky_damping()
    assert dcc(choi(ch).state, [0]).coherent_form < 1
    v = cl.dbt_verdict(ch, mc_budget=500, seed=0)
    assert v.status is Status.NO_WITH_COUNTEREXAMPLE
    cex = v.counterexample
    assert (cex.seed, cex.index) == (0, 76)
    replay = cl.replay_probe(cex.seed, cex.index, cex.dims)
    assert np.array_equal(replay.amplitudes, cex.probe().amplitudes)
    out = apply_local(ch, replay.density(), 0)
    assert dcc(out, [0]).coherent_form == pytest.approx(cex.value, abs=1e-12)
    assert cex.value > 1


def test_dbt_undetermined_without_theorem_or_hit():
    ch = mixture([make_amplitude_damping(0.6), make_unital_canonical(1, 0, 0, 0)], [0.8, 0.2])
    assert cl.is_ebt(ch).status is Status.NO
    assert cl.dbt_verdict(ch, mc_budget=200).status is Status.UNDETERMINED


# --- tbt_verdict ----------------------------------------------------------------


def test_tbt_examples():
    assert cl.tbt_verdict(make_depolarizing(2, 0.2)).status is Status.YES_BY_THEOREM
    v = cl.tbt_verdict(make_depolarizing(2, 0.5))
    assert v.status is Status.NO_WITH_COUNTEREXAMPLE
    assert v.evidence["f_max"] == pytest.approx(0.625)
    ident = cl.tbt_verdict(identity_channel(2))
    assert ident.status is Status.NO_WITH_COUNTEREXAMPLE
    assert ident.evidence["f_max"] == pytest.approx(1)


def test_tbt_qutrits():
    assert cl.tbt_verdict(make_gc33(0.4, 0.3)).status is Status.YES_BY_THEOREM
    assert cl.tbt_verdict(make_gc33(0.1, 0.1)).status is Status.NO_WITH_COUNTEREXAMPLE
    # covariant but NPT: the singlet-fraction bound exceeds 1/3, so no theorem closes it
    wh = cl.tbt_verdict(make_werner_holevo(3), mc_budget=200)
    assert wh.evidence["protocol"] == "standard"
    assert wh.evidence["choi_singlet_bound"] > 1 / 3
    assert wh.status is Status.UNDETERMINED
    assert wh.evidence["mc_max_overlap"] <= 1 / 3


# --- witnesses ------------------------------------------------------------------


def test_dc_witness_examples():
    phi = max_entangled(2)
    assert cl.dc_witness_value(identity_channel(2), phi) == pytest.approx(-1, abs=1e-12)
    dep = make_unital_canonical(1, 0, 0, 0)
    for i in range(5):
        assert cl.dc_witness_value(dep, haar_random_pure(2, 2, substream(i))) == pytest.approx(1, abs=1e-9)
    # closed form S(Werner(0.9)) - 1
    expected = werner_entropy(0.9) - 1
    assert expected == pytest.approx(-0.4968, abs=1e-4)
    assert cl.dc_witness_value(make_depolarizing(2, 0.9), phi) == pytest.approx(expected, abs=1e-12)


def test_teleport_witness_examples():
    assert cl.teleport_witness(identity_channel(2))[1] == pytest.approx(-0.5, abs=1e-12)
    assert cl.teleport_witness(make_depolarizing(2, 0.5))[1] == pytest.approx(-0.125, abs=1e-12)
    for ch in (make_depolarizing(2, 0.2), make_pauli(0.5, 0.5, 0, 0), make_unital_canonical(1, 0, 0, 0)):
        assert cl.teleport_witness(ch)[1] >= -1e-9


def test_teleport_witness_separates():
    # the operator is non-negative on product states and negative on the Choi state
    w, value = cl.teleport_witness(make_depolarizing(2, 0.7))
    assert value < 0
    for i in range(50):
        s = substream(i)
        a = haar_random_pure(2, 1, s).amplitudes
        b = haar_random_pure(2, 1, s).amplitudes
        v = np.kron(a, b)
        assert np.real(v.conj() @ w @ v) >= -1e-12


def test_probe_search_examples():
    r = cl.probe_search(make_depolarizing(2, 0.9), budget=100)
    assert np.allclose(r.probe.amplitudes, max_entangled(2).amplitudes)
    assert r.value == pytest.approx(werner_entropy(0.9) - 1, abs=1e-12)
    r = cl.probe_search(make_unital_canonical(1, 0, 0, 0), budget=300)
    assert r.value >= 1 - 1e-9
    r = cl.probe_search(identity_channel(2), budget=10)
    assert r.value == pytest.approx(-1)
    r = cl.probe_search(leaky_damping(), budget=500)
    assert r.index is not None and r.value < 0


# --- reports --------------------------------------------------------------------


def test_report_fields_and_json():
    rep = cl.classify_channel(make_depolarizing(2, 0.5), mc_budget=50)
    d = json.loads(rep.to_json())
    assert set(d) == {"ebt", "dbt", "tbt", "evidence", "witness_dc", "witness_tp", "seed", "counterexample"}
    assert (d["ebt"], d["dbt"], d["tbt"]) == ("no", "yes-by-theorem", "no-with-counterexample")
    assert d["counterexample"]["dbt"] is None
    assert d["counterexample"]["tbt"]["measure"] == "f_max"


@pytest.mark.parametrize(
    "ch, expected",
    [
        (make_depolarizing(2, 0.2), ("yes", "yes-by-theorem", "yes-by-theorem")),
        (identity_channel(2), ("no", "no-with-counterexample", "no-with-counterexample")),
    ],
)
def test_report_examples(ch, expected):
    d = cl.classify_channel(ch, mc_budget=50).to_dict()
    assert (d["ebt"], d["dbt"], d["tbt"]) == expected


def test_report_rejects_inconsistent_verdicts():
    yes = cl.Verdict(Status.YES, "t", {})
    no = cl.Verdict(Status.NO_WITH_COUNTEREXAMPLE, "t", {}, cl.Counterexample.from_probe(max_entangled(2), "m", 1.0))
    with pytest.raises(RuntimeError):
        cl.ClassificationReport("x", yes, no, yes, 0.0, None, 0)
    bare = cl.Verdict(Status.NO_WITH_COUNTEREXAMPLE, "t", {})
    with pytest.raises(RuntimeError):
        cl.ClassificationReport("x", cl.Verdict(Status.NO, "t", {}), bare, bare, 0.0, None, 0)


# --- properties -----------------------------------------------------------------


def _random_unital(seed):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(4))
    u1, u2 = haar_random_unitary(2, rng), haar_random_unitary(2, rng)
    return compose_unitaries(make_unital_canonical(*p), pre=u1, post=u2)


@given(seeds)
@settings(max_examples=40)
def test_unital_probes_never_beat_choi(seed):
    ch = _random_unital(seed)
    ref = dcc(choi(ch).state, [0]).coherent_form
    vals = cl._dcc_probe_values(ch, cl._sampled_probes(seed, 50, 2))
    assert vals.max() <= ref + 1e-7


def test_convexity_of_dbt_by_theorem_unital():
    rng = np.random.default_rng(5)
    pairs = []
    while len(pairs) < 15:
        a, b = (make_pauli(*rng.dirichlet(np.ones(4))) for _ in range(2))
        if all(cl.dbt_verdict(x).status is Status.YES_BY_THEOREM for x in (a, b)):
            pairs.append((a, b))
    for a, b in pairs:
        for w in (0.25, 0.5, 0.75):
            assert cl.dbt_verdict(mixture([a, b], [w, 1 - w])).status is Status.YES_BY_THEOREM


@given(seeds)
@settings(max_examples=25)
def test_local_unitary_invariance_of_verdicts(seed):
    stream = substream(seed)
    ch = _random_unital(seed)
    u, v = haar_random_unitary(2, stream), haar_random_unitary(2, stream)
    rotated = PureState(np.kron(u, v) @ max_entangled(2).amplitudes, (2, 2))
    out_phi = choi(ch).state
    out_rot = apply_local(ch, rotated.density(), 0)
    assert abs(dcc(out_phi, [0]).capacity - dcc(out_rot, [0]).capacity) < 1e-9
    assert abs(pt_eigenvalues(out_phi.matrix, (2, 2))[0] - pt_eigenvalues(out_rot.matrix, (2, 2))[0]) < 1e-9
    # the same holds at the verdict level: the channel seen through U V^T on the input
    w = u @ v.T
    shifted = compose_unitaries(ch, pre=w)
    assert cl.dbt_verdict(shifted).status == cl.dbt_verdict(ch).status
    assert cl.tbt_verdict(shifted).status == cl.tbt_verdict(ch).status


def test_qubit_tbt_matches_ebt():
    stream = substream(2025)
    for k in range(200):
        ch = random_channel(2, 1 + k % 4, stream)
        tbt = cl.tbt_verdict(ch).status
        assert (tbt is Status.YES_BY_THEOREM) == (cl.is_ebt(ch).status is Status.YES)
        if tbt is Status.YES_BY_THEOREM:
            assert singlet_fraction_qubit_channel(ch) <= 0.5 + 1e-9


@given(seeds, st.sampled_from([2, 3]))
@settings(max_examples=40)
def test_dc_witness_bounds_and_identity(seed, d):
    stream = substream(seed)
    ch = random_channel(d, 1 + seed % 3, stream)
    probe = haar_random_pure(d, d, stream)
    w = cl.dc_witness_value(ch, probe)
    assert w >= -np.log2(d) - 1e-9
    out = apply_local(ch, probe.density(), 0)
    assert abs(w - conditional_entropy(out, 1)) < 1e-9
