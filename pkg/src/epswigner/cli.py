"""Command line front-end.

    epswigner run scenario.toml [--experiment NAME] [--out DIR] [--seed N]
    epswigner dump-hamiltonian --gauge A --t 0.7 [--form wigner]

Exit status: 0 when every check passes, 2 when a tolerance is missed, 1 on error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .config import EXPERIMENTS, ConfigError, load_config
from .experiments import SERIES_COLUMNS, run_experiment
from .gauges import HarmonicDrive, PhysicalParams, Representation
from .hamiltonian import build_sn_hamiltonian, build_wigner_hamiltonian, kanai_hamiltonian

log = logging.getLogger("epswigner")

EXIT_OK, EXIT_ERROR, EXIT_TOLERANCE = 0, 1, 2


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        # JSON has no literal for these; keep the file parseable
        return '"%s"' % x
    return "%.17g" % x


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps({"re": obj.real, "im": obj.imag}, indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Path):
        return dumps(str(obj))
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def write_series(path: Path, series: dict):
    cols = [np.real(np.asarray(series[c], dtype=complex)) for c in SERIES_COLUMNS]
    np.savetxt(path, np.column_stack(cols), fmt="%.17g", delimiter=",",
               header=",".join(SERIES_COLUMNS), comments="")


def run(config_path, experiment=None, out=None, seed=None) -> int:
    overrides = {}
    if experiment is not None:
        overrides["experiment"] = experiment
    if seed is not None:
        overrides["seed"] = seed
    if out is not None:
        overrides["output"] = {"dir": str(out)}
    try:
        cfg = load_config(config_path, overrides=overrides)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        report, series = run_experiment(cfg)
    except Exception as exc:  # noqa: BLE001 - reported with context, not swallowed
        print(f"{cfg.experiment} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        log.debug("traceback", exc_info=True)
        return EXIT_ERROR
    if cfg.seed is not None:
        report.setdefault("seed", cfg.seed)
    out_dir = cfg.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = cfg.experiment
    (out_dir / f"{stem}.json").write_text(dumps(report) + "\n")
    for name, s in series.items():
        write_series(out_dir / f"{stem}_{name}.csv", s)
    status = "PASS" if report["passed"] else "FAIL"
    print(f"{stem}: {status} -> {out_dir / (stem + '.json')}")
    return EXIT_OK if report["passed"] else EXIT_TOLERANCE


def dump_hamiltonian(gauge, t, form, representation, params=None, drive=None) -> str:
    params = params or PhysicalParams()
    drive = drive or HarmonicDrive(representation=representation)
    spec = kanai_hamiltonian(gauge, params, drive)
    build = build_sn_hamiltonian if form == "sn" else build_wigner_hamiltonian
    return dumps(build(spec, t).to_json(), indent=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="epswigner", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a scenario file")
    r.add_argument("config", type=Path)
    r.add_argument("--experiment", choices=EXPERIMENTS)
    r.add_argument("--out", type=Path, help="output directory")
    r.add_argument("--seed", type=int)

    d = sub.add_parser("dump-hamiltonian", help="print an extended Hamiltonian as sorted JSON")
    d.add_argument("--gauge", choices=["A", "phi"], default="A")
    d.add_argument("--t", type=float, default=0.0)
    d.add_argument("--form", choices=["sn", "wigner"], default="wigner")
    d.add_argument("--representation", choices=[r.value for r in Representation],
                   default=Representation.REAL_COSINE.value)
    d.add_argument("--config", type=Path, help="take params/drive from a scenario file")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "run":
        return run(args.config, args.experiment, args.out, args.seed)
    params = drive = None
    if args.config is not None:
        try:
            cfg = load_config(args.config)
        except (ConfigError, OSError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_ERROR
        params, drive = cfg.params, cfg.drive
    print(dump_hamiltonian(args.gauge, args.t, args.form, args.representation, params, drive))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
