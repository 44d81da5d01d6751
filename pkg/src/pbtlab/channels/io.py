"""JSON channel description files.

Two shapes are accepted::

    {"kind": "kraus", "dim_in": 2, "dim_out": 2, "ops": [[[[re, im], ...], ...], ...]}
    {"kind": "depolarizing", "d": 2, "q": 0.5}

Named kinds: ``identity`` (d), ``depolarizing`` (d, q), ``pauli`` (p: 4 weights),
``unital_canonical`` (p: 4 weights), ``gc33`` (p1, p2), ``werner_holevo`` (d),
``cq`` (basis: d x d complex matrix with basis vectors as columns, outputs: list
of complex vectors, optional extreme flag). Every complex number is an
``[re, im]`` pair.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from ..errors import CPTPError, SimplexError
from . import families
from .core import ChannelLabel, KrausChannel, check_cptp, identity_channel

LOAD_TOL = 1e-7


class ChannelFileError(ValueError):
    """Channel file is unreadable or structurally malformed."""


def _complex_array(x: Any, what: str, ndim: int) -> np.ndarray:
    try:
        arr = np.asarray(x, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ChannelFileError(f"{what}: entries must be [re, im] pairs") from exc
    if arr.ndim != ndim + 1 or arr.shape[-1] != 2:
        raise ChannelFileError(f"{what}: expected a {ndim}-D array of [re, im] pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ChannelFileError(f"{what}: non-finite entries")
    return arr[..., 0] + 1j * arr[..., 1]


def _require(doc: dict, key: str, kind: str):
    if key not in doc:
        raise ChannelFileError(f"'{kind}' channel needs field '{key}'")
    return doc[key]


def _number(doc: dict, key: str, kind: str, cast=float):
    v = _require(doc, key, kind)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ChannelFileError(f"field '{key}' must be a number")
    if cast is int and int(v) != v:
        raise ChannelFileError(f"field '{key}' must be an integer")
    return cast(v)


def _weights(doc: dict, kind: str) -> list[float]:
    p = _require(doc, "p", kind)
    if not isinstance(p, list) or len(p) != 4:
        raise ChannelFileError(f"'{kind}' needs 'p' as a list of four weights")
    try:
        return [float(x) for x in p]
    except (TypeError, ValueError) as exc:
        raise ChannelFileError("weights must be numbers") from exc


def channel_from_dict(doc: Any, atol: float = LOAD_TOL) -> KrausChannel:
    """Build and CPTP-check a channel.

    Raises :class:`ChannelFileError` for structural problems and
    :class:`~pbtlab.errors.CPTPError` when the described map is not CPTP.
    """
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ChannelFileError("channel description must be an object with a 'kind' field")
    kind = doc["kind"]
    try:
        if kind == "kraus":
            ch = _kraus_from_doc(doc)
        elif kind == "identity":
            ch = identity_channel(_number(doc, "d", kind, int))
        elif kind == "depolarizing":
            q = _number(doc, "q", kind)
            if not 0.0 <= q <= 1.0:
                raise CPTPError(f"depolarizing q = {q} outside [0, 1]")
            ch = families.make_depolarizing(_number(doc, "d", kind, int), q)
        elif kind == "pauli":
            ch = families.make_pauli(*_weights(doc, kind))
        elif kind == "unital_canonical":
            ch = families.make_unital_canonical(*_weights(doc, kind))
        elif kind == "gc33":
            ch = families.make_gc33(_number(doc, "p1", kind), _number(doc, "p2", kind))
        elif kind == "werner_holevo":
            ch = families.make_werner_holevo(_number(doc, "d", kind, int))
        elif kind == "cq":
            basis = _complex_array(_require(doc, "basis", kind), "basis", 2)
            outputs = [_complex_array(v, "outputs", 1) for v in _require(doc, "outputs", kind)]
            ch = families.make_extreme_cq(basis, outputs, extreme=bool(doc.get("extreme", False)))
        else:
            raise ChannelFileError(f"unknown channel kind '{kind}'")
    except SimplexError as exc:
        # weights off the simplex break positivity (negative) or trace preservation (sum)
        raise CPTPError(f"invalid channel weights: {exc}") from exc
    except (CPTPError, ChannelFileError):
        raise
    except (TypeError, ValueError) as exc:
        raise ChannelFileError(f"invalid '{kind}' description: {exc}") from exc
    check_cptp(ch, atol)
    return ch


def _kraus_from_doc(doc: dict) -> KrausChannel:
    dim_in = _number(doc, "dim_in", "kraus", int)
    dim_out = _number(doc, "dim_out", "kraus", int)
    raw = _require(doc, "ops", "kraus")
    if not isinstance(raw, list) or not raw:
        raise ChannelFileError("'ops' must be a non-empty list of matrices")
    ops = [_complex_array(op, f"ops[{k}]", 2) for k, op in enumerate(raw)]
    for k, op in enumerate(ops):
        if op.shape != (dim_out, dim_in):
            raise ChannelFileError(f"ops[{k}] has shape {op.shape}, expected ({dim_out}, {dim_in})")
    return KrausChannel(np.array(ops), ChannelLabel("kraus"))


def load_channel(path: str | Path, atol: float = LOAD_TOL) -> KrausChannel:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ChannelFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ChannelFileError(f"{path} is not valid JSON: {exc}") from exc
    return channel_from_dict(doc, atol)


def channel_to_dict(ch: KrausChannel) -> dict:
    ops = [[[[float(z.real), float(z.imag)] for z in row] for row in op] for op in ch.kraus_ops]
    return {"kind": "kraus", "dim_in": ch.dim_in, "dim_out": ch.dim_out, "ops": ops}
