"""Command-line front end.

Subcommands map one-to-one onto the library: `scatter`, `spectrum`,
`dynamics` and `winding` run a single experiment described by a key=value
configuration (file plus --set overrides, overrides win); `reproduce`
runs a named preset; `selftest` executes the built-in invariant suite.
Every run writes one CSV per curve plus a JSON sidecar with the fully
resolved configuration.  Exit codes: 0 success, 1 configuration error,
2 numerical error.

All energies are interpreted in units of the waveguide hopping xi; the
optional `xi_mhz` key (default 100) is metadata only and never rescales
any output.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from . import __version__
from .dynamics import ProbeParams, evolve_probe, far_detuning_ratio
from .errors import ConfigError, TgaWaveguideError
from .figures import FIGURE_IDS, FIGURES
from .model import (
    BOUNDARY_KINDS,
    COUPLING_MODES,
    CouplingConfig,
    SystemParams,
    TgaParams,
    WaveguideParams,
)
from .output import sidecar_payload, write_csv, write_sectioned_csv, write_sidecar
from .scattering import sweep_reflection
from .selftest import run_selftest
from .spectrum import diagonalize, winding_number


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"expected a number, got {text!r}") from exc


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"expected an integer, got {text!r}") from exc


def _parse_choice(options: tuple[str, ...]) -> Callable[[str], str]:
    def parse(text: str) -> str:
        if text not in options:
            raise ConfigError(f"expected one of {options}, got {text!r}")
        return text

    return parse


def _parse_optional_float(text: str) -> float | None:
    if text.lower() in ("auto", "none"):
        return None
    return _parse_float(text)


@dataclass(frozen=True)
class Key:
    parse: Callable[[str], Any]
    default: Any = None
    required: bool = False


_PHYSICS = {
    "omega_c": Key(_parse_float, 20.0),
    "omega_e": Key(_parse_float, 20.0),
    "t1": Key(_parse_float, 0.5),
    "t2": Key(_parse_float, 0.1),
    "n_cells": Key(_parse_int, 1),
    "j": Key(_parse_float, 0.9),
    "mode": Key(_parse_choice(COUPLING_MODES), "two_point"),
}

_META = {
    "output": Key(str, required=True),
    "xi_mhz": Key(_parse_float, 100.0),
}

_BOUNDARY = {
    "boundary": Key(_parse_choice(BOUNDARY_KINDS), "open"),
    "t3": Key(_parse_optional_float, None),
}

SCHEMAS: dict[str, dict[str, Key]] = {
    "scatter": {
        **_PHYSICS,
        "delta2_min": Key(_parse_float, -1.0),
        "delta2_max": Key(_parse_float, 1.0),
        "delta2_points": Key(_parse_int, 2001),
        **_META,
    },
    "spectrum": {
        **_PHYSICS,
        **_BOUNDARY,
        "m_sites": Key(_parse_int, 800),
        **_META,
    },
    "dynamics": {
        **_PHYSICS,
        **_BOUNDARY,
        "omega_p": Key(_parse_float, 16.65),
        "gamma": Key(_parse_float, 2e-4),
        "f": Key(_parse_float, 2e-3),
        "attach_site": Key(_parse_int, 0),
        "m_sites": Key(_parse_int, 400),
        "t_max": Key(_parse_float, 2000.0),
        "dt": Key(_parse_optional_float, None),
        "sample_stride": Key(_parse_float, 1.0),
        **_META,
    },
    "winding": {
        "t1": Key(_parse_float, 0.5),
        "t2": Key(_parse_float, 0.1),
        "k_points": Key(_parse_int, 1024),
        **_META,
    },
}


def _read_config_file(path: str) -> dict[str, str]:
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    entries: dict[str, str] = {}
    for ln, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{ln}: expected key=value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        entries[key] = value
    return entries


def resolve_config(command: str, config_path: str | None, overrides: list[str]) -> dict[str, Any]:
    """Defaults -> config file -> --set overrides, rejecting unknown keys."""
    schema = SCHEMAS[command]
    resolved: dict[str, Any] = {name: key.default for name, key in schema.items()}

    def apply(key: str, value: str, origin: str) -> None:
        if key not in schema:
            raise ConfigError(f"unknown key {key!r} for command {command} ({origin})")
        resolved[key] = schema[key].parse(value)

    if config_path is not None:
        for key, value in _read_config_file(config_path).items():
            apply(key, value, f"config file {config_path}")
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        apply(key.strip(), value.strip(), "--set override")

    for name, key in schema.items():
        if key.required and resolved[name] is None:
            raise ConfigError(f"missing required key {name!r} for command {command}")
    if "boundary" in schema:
        if resolved["boundary"] == "custom" and resolved["t3"] is None:
            raise ConfigError("boundary=custom requires a t3 value")
        if resolved["boundary"] != "custom" and resolved["t3"] is not None:
            raise ConfigError("t3 is only meaningful with boundary=custom")
    return resolved


def _system_from(cfg: dict[str, Any], boundary: str = "open", t3: float | None = None) -> SystemParams:
    return SystemParams(
        waveguide=WaveguideParams(omega_c=cfg["omega_c"]),
        tga=TgaParams(
            n_cells=cfg["n_cells"],
            omega_e=cfg["omega_e"],
            t1=cfg["t1"],
            t2=cfg["t2"],
            boundary=boundary,
            t3_custom=t3 if t3 is not None else 0.0,
        ),
        coupling=CouplingConfig(j=cfg["j"], mode=cfg["mode"]),
    )


def _run_scatter(cfg: dict[str, Any]) -> dict[str, Any] | None:
    if cfg["delta2_points"] < 1:
        raise ConfigError("delta2_points must be >= 1")
    sys_params = _system_from(cfg)
    grid = np.linspace(cfg["delta2_min"], cfg["delta2_max"], cfg["delta2_points"])
    table = sweep_reflection(sys_params, grid)
    rows = [
        (r.delta2, r.energy, r.k, r.reflection, r.transmission, r.in_band)
        for r in table.rows
    ]
    write_csv(cfg["output"], ["delta2", "energy", "k", "R", "T", "in_band"], rows)
    return None


def _run_spectrum(cfg: dict[str, Any]) -> dict[str, Any] | None:
    sys_params = _system_from(cfg, boundary=cfg["boundary"], t3=cfg["t3"])
    result = diagonalize(sys_params, cfg["m_sites"])
    eig_rows = [(i, float(e)) for i, e in enumerate(result.eigenvalues)]
    bound_rows = [
        (i, b.energy, b.side, b.localization_length, b.participation_ratio)
        for i, b in enumerate(result.bound_states)
    ]
    write_sectioned_csv(
        cfg["output"],
        [
            ("eigenvalues", ["index", "energy"], eig_rows),
            (
                "bound_states",
                ["index", "energy", "side", "localization_length", "participation_ratio"],
                bound_rows,
            ),
        ],
    )
    return None


def _run_dynamics(cfg: dict[str, Any]) -> dict[str, Any] | None:
    sys_params = _system_from(cfg, boundary=cfg["boundary"], t3=cfg["t3"])
    probe = ProbeParams(
        omega_p=cfg["omega_p"], gamma=cfg["gamma"], f=cfg["f"], attach_site=cfg["attach_site"]
    )
    series = evolve_probe(
        sys_params,
        probe,
        m_sites=cfg["m_sites"],
        t_max=cfg["t_max"],
        dt=cfg["dt"],
        sample_stride=cfg["sample_stride"],
    )
    rows = list(zip(series.times, series.p_e, series.total_norm))
    write_csv(cfg["output"], ["time", "p_e", "total_norm"], rows)
    # record how far the probe sits from the bound states; the pure-decay
    # reading of P_e(t) needs this ratio to be large
    ratio = far_detuning_ratio(sys_params, probe)
    return {"far_detuning_ratio": ratio if math.isfinite(ratio) else "inf"}


def _run_winding(cfg: dict[str, Any]) -> dict[str, Any] | None:
    result = winding_number(cfg["t1"], cfg["t2"], cfg["k_points"])
    write_csv(
        cfg["output"],
        ["t1", "t2", "k_points", "winding"],
        [(cfg["t1"], cfg["t2"], cfg["k_points"], result.winding)],
    )
    return None


_RUNNERS = {
    "scatter": _run_scatter,
    "spectrum": _run_spectrum,
    "dynamics": _run_dynamics,
    "winding": _run_winding,
}


def _execute(command: str, cfg: dict[str, Any], assumptions: tuple[str, ...] = ()) -> None:
    started = time.perf_counter()
    extra = _RUNNERS[command](cfg)
    payload = sidecar_payload(command, cfg, __version__, started, assumptions)
    if extra:
        payload.update(extra)
    write_sidecar(cfg["output"], payload)


def _run_reproduce(figure_id: str, out_dir: str) -> None:
    preset = FIGURES[figure_id]
    for curve in preset.curves:
        overrides = [f"{key}={value}" for key, value in curve.params.items()]
        overrides.append(f"output={out_dir.rstrip('/')}/{figure_id}_{curve.name}.csv")
        cfg = resolve_config(curve.command, None, overrides)
        _execute(curve.command, cfg, assumptions=preset.assumptions)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise ConfigError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tga-waveguide", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for command in _RUNNERS:
        p = sub.add_parser(command, help=f"run one {command} experiment")
        p.add_argument("--config", help="key=value configuration file")
        p.add_argument(
            "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
            help="override one configuration key (repeatable; wins over the file)",
        )
        p.add_argument("--output", help="shorthand for --set output=PATH")
    rep = sub.add_parser("reproduce", help="run a named preset study")
    rep.add_argument("figure_id", choices=FIGURE_IDS)
    rep.add_argument("--out-dir", default=".", help="directory for the preset's data files")
    st = sub.add_parser("selftest", help="run the built-in invariant suite")
    st.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "selftest":
            return run_selftest(args.seed)
        if args.command == "reproduce":
            _run_reproduce(args.figure_id, args.out_dir)
            return 0
        overrides = list(args.overrides)
        if args.output is not None:
            overrides.append(f"output={args.output}")
        cfg = resolve_config(args.command, args.config, overrides)
        _execute(args.command, cfg)
        return 0
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except TgaWaveguideError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
