import json

import numpy as np
import pytest

from pbtlab.channels import ChannelFileError, channel_from_dict, channel_to_dict, load_channel
from pbtlab.channels import choi, make_depolarizing, random_channel
from pbtlab.errors import CPTPError
from pbtlab.states import substream


def _pairs(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


@pytest.mark.parametrize(
    "doc",
    [
        {"kind": "identity", "d": 3},
        {"kind": "depolarizing", "d": 2, "q": 0.5},
        {"kind": "pauli", "p": [0.7, 0.1, 0.1, 0.1]},
        {"kind": "unital_canonical", "p": [0.6, 0.4, 0, 0]},
        {"kind": "gc33", "p1": 0.4, "p2": 0.3},
        {"kind": "werner_holevo", "d": 3},
        {"kind": "cq", "basis": _pairs(np.eye(2)), "outputs": [[[1, 0], [0, 0]], [[0.6, 0], [0.8, 0]]], "extreme": True},
    ],
)
def test_named_kinds_load(doc):
    ch = channel_from_dict(doc)
    assert ch.completeness_defect() < 1e-9


def test_kraus_kind_loads_and_round_trips():
    ch = random_channel(3, 2, substream(4))
    doc = channel_to_dict(ch)
    back = channel_from_dict(json.loads(json.dumps(doc)))
    assert np.allclose(choi(back).matrix, choi(ch).matrix, atol=1e-12)


def test_load_channel_file(tmp_path):
    path = tmp_path / "dep.json"
    path.write_text(json.dumps({"kind": "depolarizing", "d": 2, "q": 0.25}))
    ch = load_channel(path)
    assert np.allclose(choi(ch).matrix, choi(make_depolarizing(2, 0.25)).matrix)


def test_cptp_violations_name_the_condition():
    weak = {"kind": "kraus", "dim_in": 2, "dim_out": 2, "ops": [_pairs(0.9 * np.eye(2))]}
    with pytest.raises(CPTPError, match="trace preservation"):
        channel_from_dict(weak)
    with pytest.raises(CPTPError):
        channel_from_dict({"kind": "pauli", "p": [0.5, 0.5, 0.5, 0]})
    with pytest.raises(CPTPError):
        channel_from_dict({"kind": "depolarizing", "d": 2, "q": 1.5})


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"d": 2},
        {"kind": "nope"},
        {"kind": "depolarizing", "q": 0.5},
        {"kind": "pauli", "p": [1, 0]},
        {"kind": "pauli", "p": ["a", 0, 0, 0]},
        {"kind": "kraus", "dim_in": 2, "dim_out": 2, "ops": []},
        {"kind": "kraus", "dim_in": 2, "dim_out": 2, "ops": [[[1, 0], [0, 1]]]},
        {"kind": "kraus", "dim_in": 2, "dim_out": 2, "ops": [_pairs(np.eye(3))]},
    ],
)
def test_malformed_documents(doc):
    with pytest.raises(ChannelFileError):
        channel_from_dict(doc)


def test_unreadable_and_invalid_json(tmp_path):
    with pytest.raises(ChannelFileError):
        load_channel(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ChannelFileError):
        load_channel(bad)
