"""``pbt-lab`` command-line entry point.

Exit codes: 0 success, 1 sweep invariant violated, 2 malformed config or
channel file, 3 channel is not CPTP, 4 output not writable.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from ..channels import ChannelFileError, load_channel
from ..classify import classify_channel, probe_search, teleport_witness
from ..errors import CPTPError
from .config import COMMANDS, ConfigError, ExperimentConfig, load_config
from .experiments import SWEEPS

log = logging.getLogger("pbtlab")

EXIT_OK, EXIT_VIOLATION, EXIT_MALFORMED, EXIT_CPTP, EXIT_OUTPUT = 0, 1, 2, 3, 4


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pbt-lab", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path, help="key = value experiment config")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, help="parameter points (sweeps) or Monte-Carlo budget (classify, witness)")
    p.add_argument("--probes", type=int, help="Haar probes per parameter point")
    p.add_argument("--channel", help="channel description file (classify, witness)")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="output path; stdout when omitted")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def run_classify(cfg: ExperimentConfig) -> dict:
    ch = load_channel(cfg.channel)
    return classify_channel(ch, seed=cfg.seed, mc_budget=cfg.samples).to_dict()


def run_witness(cfg: ExperimentConfig) -> dict:
    ch = load_channel(cfg.channel)
    found = probe_search(ch, budget=cfg.samples, seed=cfg.seed)
    doc = {
        "channel": str(ch.label),
        "seed": cfg.seed,
        "witness_dc": found.value,
        "probe": {
            "index": found.index,
            "reason": found.reason,
            "dims": list(found.probe.dims),
            "amplitudes": [[float(z.real), float(z.imag)] for z in found.probe.amplitudes],
        },
        "witness_tp": None,
        "witness_tp_operator": None,
    }
    if ch.dim_in == 2:
        w, value = teleport_witness(ch)
        doc["witness_tp"] = value
        doc["witness_tp_operator"] = [[[float(z.real), float(z.imag)] for z in row] for row in w]
    return doc


def _writable(out: str) -> bool:
    path = Path(out)
    if path.is_dir():
        return False
    if path.exists():
        return os.access(path, os.W_OK)
    parent = path.parent if str(path.parent) else Path(".")
    return parent.is_dir() and os.access(parent, os.W_OK)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(
            args.config,
            args.command,
            seed=args.seed,
            samples=args.samples,
            probes=args.probes,
            channel=args.channel,
            workers=args.workers,
            out=args.out,
        )
    except ConfigError as exc:
        print(f"pbt-lab: {exc}", file=sys.stderr)
        return EXIT_MALFORMED

    if cfg.out is not None and not _writable(cfg.out):
        print(f"pbt-lab: cannot write output to {cfg.out}", file=sys.stderr)
        return EXIT_OUTPUT

    try:
        if cfg.command in SWEEPS:
            result = SWEEPS[cfg.command](cfg)
            text = result.to_csv()
            status = EXIT_OK
            for v in result.violations:
                log.error(v)
            if result.violations:
                status = EXIT_VIOLATION
            log.info("%s: %d rows, %d violations", cfg.command, len(result.rows), len(result.violations))
        else:
            doc = run_classify(cfg) if cfg.command == "classify" else run_witness(cfg)
            text = json.dumps(doc, indent=2, default=_json_default) + "\n"
            status = EXIT_OK
    except ChannelFileError as exc:
        print(f"pbt-lab: malformed channel file: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except CPTPError as exc:
        print(f"pbt-lab: channel is not CPTP: {exc}", file=sys.stderr)
        return EXIT_CPTP

    try:
        _emit(text, cfg.out)
    except OSError as exc:
        print(f"pbt-lab: cannot write output: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    return status


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"not JSON serializable: {type(x)}")


if __name__ == "__main__":
    sys.exit(main())
