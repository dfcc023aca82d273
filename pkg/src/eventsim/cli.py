"""Command-line interface.

SI units at the boundary: masses in kg, radii/heights in metres, times
(coherence, offsets, delays) in seconds.  Everything is converted to
geometric units on entry.  Outputs are CSV on stdout or to ``--out``, with
floats rendered at 12 significant digits and LF newlines, so identical
invocations produce byte-identical files.

Subcommands
-----------
convert-units   echo geometric-unit conversions for a mass/time/length
compute         one scenario point: mismatch and coincidence ratio
sweep-height    ratio-vs-satellite-height curve (first-order mismatch)
sweep-offset    coincidence dip vs arm path offset at fixed geometry
causal-scan     hold-delay scan comparing the two causal prescriptions
verify          run the discrete brute-force self-check battery

A ``--config FILE`` of ``key = value`` lines (``#`` comments) supplies
defaults for any long option of the subcommand (underscored: ``mass_kg``);
explicit flags win over the file, the file wins over built-ins.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import IO

import numpy as np

from .causal import CausalPrescription, causal_scan, delta_t_causal
from .coincidence import c_total, ratio_vs_height_curve
from .commutator import quotient_closed_form
from .modes import SqueezingParams, flat_mode, gaussian_mode
from .oracle import verify_report
from .spacetime import delta_t_approx, ground_satellite_geometry
from .units import (
    BodySpec,
    DomainError,
    geometric_to_time,
    mass_kg_to_geometric,
    time_to_geometric,
)

__all__ = ["ScenarioConfig", "OutputRow", "run_sweep", "write_csv", "main"]


class ConfigError(Exception):
    """Bad config file or config/flag value (usage error, exit code 2)."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Resolved inputs of one CLI invocation (SI units)."""

    kind: str
    mass_kg: float
    radius_m: float
    coherence_time_s: float
    prescription: str
    chi_max: float
    satellite_height_m: float
    start: float
    stop: float
    steps: int
    pbs_mirror_gap_m: float


@dataclass(frozen=True)
class OutputRow:
    """One CSV row.

    ``ratio_event`` is the event-model coincidence/standard ratio;
    ``ratio_standard`` is the same observable in standard theory (always
    1.0, kept as an explicit comparison column).  The rate columns are only
    emitted by sweep-offset and hold the normalized dip curves.
    """

    sweep_value: float
    delta_t_m: float
    ratio_event: float
    ratio_standard: float
    prescription: str
    rate_event: float | None = None
    rate_standard: float | None = None


_BASE_COLUMNS = ("sweep_value", "delta_t_m", "ratio_event", "ratio_standard", "prescription")

_FLOAT_KEYS = {
    "mass_kg",
    "radius_m",
    "coherence_time_s",
    "chi_max",
    "satellite_height_m",
    "start",
    "stop",
    "pbs_mirror_gap_m",
}
_INT_KEYS = {"steps", "n_k", "n_omega"}
_STR_KEYS = {"prescription"}

_DEFAULTS = {
    "mass_kg": 5.972e24,
    "radius_m": 6.38e6,
    "coherence_time_s": 30e-12,
    "prescription": "bennett",
    "chi_max": 1e-4,
    "satellite_height_m": 5e5,
    "pbs_mirror_gap_m": 50.0,
    "n_k": 128,
    "n_omega": 128,
}

# (start, stop, steps) defaults; units noted per subcommand in the help.
_SWEEP_DEFAULTS = {
    "compute": (0.0, 0.0, 1),
    "sweep-height": (0.0, 2e7, 201),
    "sweep-offset": (-100e-12, 100e-12, 81),
    "causal-scan": (0.0, 2e-6, 41),
}


def load_config(path: str) -> dict[str, str]:
    """Parse a ``key = value`` config file into a string mapping."""
    mapping: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, value = line.partition("=")
                if not sep or not key.strip() or not value.strip():
                    raise ConfigError(
                        f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}"
                    )
                mapping[key.strip()] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return mapping


def _resolve(args: argparse.Namespace, config: dict[str, str], key: str, fallback):
    cli_value = getattr(args, key, None)
    if cli_value is not None:
        return cli_value
    if key in config:
        raw = config[key]
        try:
            if key in _FLOAT_KEYS:
                return float(raw)
            if key in _INT_KEYS:
                return int(raw)
            return raw
        except ValueError as exc:
            raise ConfigError(f"config key {key}: cannot parse {raw!r}") from exc
    return fallback


def _validate_config_keys(config: dict[str, str], allowed: set[str]) -> None:
    unknown = sorted(set(config) - allowed)
    if unknown:
        raise ConfigError(
            f"unknown config key(s): {', '.join(unknown)}; "
            f"allowed: {', '.join(sorted(allowed))}"
        )


def _scenario_config(args: argparse.Namespace, config: dict[str, str]) -> ScenarioConfig:
    allowed = _FLOAT_KEYS | {"steps", "prescription"}
    _validate_config_keys(config, allowed)
    start0, stop0, steps0 = _SWEEP_DEFAULTS[args.command]
    prescription = _resolve(args, config, "prescription", _DEFAULTS["prescription"])
    if prescription not in ("bennett", "kent"):
        raise ConfigError(
            f"prescription must be 'bennett' or 'kent', got {prescription!r}"
        )
    steps = _resolve(args, config, "steps", steps0)
    if steps < 1:
        raise ConfigError(f"steps must be >= 1, got {steps}")
    return ScenarioConfig(
        kind=args.command,
        mass_kg=_resolve(args, config, "mass_kg", _DEFAULTS["mass_kg"]),
        radius_m=_resolve(args, config, "radius_m", _DEFAULTS["radius_m"]),
        coherence_time_s=_resolve(
            args, config, "coherence_time_s", _DEFAULTS["coherence_time_s"]
        ),
        prescription=prescription,
        chi_max=_resolve(args, config, "chi_max", _DEFAULTS["chi_max"]),
        satellite_height_m=_resolve(
            args, config, "satellite_height_m", _DEFAULTS["satellite_height_m"]
        ),
        start=_resolve(args, config, "start", start0),
        stop=_resolve(args, config, "stop", stop0),
        steps=steps,
        pbs_mirror_gap_m=_resolve(
            args, config, "pbs_mirror_gap_m", _DEFAULTS["pbs_mirror_gap_m"]
        ),
    )


def _body(config: ScenarioConfig) -> BodySpec:
    return BodySpec.from_si(config.mass_kg, config.radius_m)


def _sweep_values(config: ScenarioConfig) -> np.ndarray:
    if config.steps == 1:
        return np.asarray([config.start])
    return np.linspace(config.start, config.stop, config.steps)


def run_sweep(config: ScenarioConfig) -> list[OutputRow]:
    """Evaluate a subcommand's sweep and return its CSV rows.

    Points are independent and could be evaluated concurrently; they are
    kept serial so row order (and therefore output bytes) is deterministic.
    """
    body = _body(config)
    d_t = time_to_geometric(config.coherence_time_s)
    if d_t <= 0.0:
        raise DomainError(
            f"coherence_time_s must be positive, got {config.coherence_time_s}"
        )
    prescription = CausalPrescription(config.prescription)

    if config.kind == "compute":
        geom = ground_satellite_geometry(body, config.satellite_height_m)
        delta = delta_t_causal(geom, body, prescription)
        ratio = quotient_closed_form(d_t, delta).visibility
        return [
            OutputRow(
                sweep_value=config.satellite_height_m,
                delta_t_m=delta.delta_t,
                ratio_event=ratio,
                ratio_standard=1.0,
                prescription=config.prescription,
            )
        ]

    if config.kind == "sweep-height":
        heights = _sweep_values(config)
        curve = ratio_vs_height_curve(body, d_t, list(heights))
        return [
            OutputRow(
                sweep_value=h,
                delta_t_m=delta_t_approx(h, body).delta_t,
                ratio_event=ratio,
                ratio_standard=1.0,
                prescription=config.prescription,
            )
            for h, ratio in curve
        ]

    if config.kind == "sweep-offset":
        geom = ground_satellite_geometry(body, config.satellite_height_m)
        delta = delta_t_causal(geom, body, prescription)
        source = gaussian_mode(d_t)
        detector = flat_mode()
        squeezing = SqueezingParams(chi_max=config.chi_max)
        rows = []
        for offset_s in _sweep_values(config):
            pred = c_total(
                squeezing,
                source,
                detector,
                delta,
                offset_1=0.0,
                offset_2=time_to_geometric(offset_s),
            )
            rows.append(
                OutputRow(
                    sweep_value=offset_s,
                    delta_t_m=pred.delta_t,
                    ratio_event=pred.ratio,
                    ratio_standard=1.0,
                    prescription=config.prescription,
                    rate_event=pred.c_event,
                    rate_standard=pred.c_standard,
                )
            )
        return rows

    if config.kind == "causal-scan":
        geom = ground_satellite_geometry(
            body,
            config.satellite_height_m,
            pbs_offset=config.pbs_mirror_gap_m,
        )
        delays_m = [time_to_geometric(s) for s in _sweep_values(config)]
        rows = []
        for point in causal_scan(geom, body, delays_m, d_t):
            delay_s = geometric_to_time(point.delay)
            rows.append(
                OutputRow(
                    sweep_value=delay_s,
                    delta_t_m=point.delta_t_kent,
                    ratio_event=point.ratio_kent,
                    ratio_standard=1.0,
                    prescription="kent",
                )
            )
            rows.append(
                OutputRow(
                    sweep_value=delay_s,
                    delta_t_m=point.delta_t_bennett,
                    ratio_event=point.ratio_bennett,
                    ratio_standard=1.0,
                    prescription="bennett",
                )
            )
        return rows

    raise ConfigError(f"unknown subcommand {config.kind!r}")


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def write_csv(rows: list[OutputRow], stream: IO[str]) -> None:
    """Write rows as CSV with a fixed column order and LF newlines."""
    with_rates = any(r.rate_event is not None for r in rows)
    columns = _BASE_COLUMNS + (("rate_event", "rate_standard") if with_rates else ())
    stream.write(",".join(columns) + "\n")
    for row in rows:
        cells = [
            _fmt(row.sweep_value),
            _fmt(row.delta_t_m),
            _fmt(row.ratio_event),
            _fmt(row.ratio_standard),
            row.prescription,
        ]
        if with_rates:
            cells.append(_fmt(row.rate_event if row.rate_event is not None else 0.0))
            cells.append(
                _fmt(row.rate_standard if row.rate_standard is not None else 0.0)
            )
        stream.write(",".join(cells) + "\n")


def _emit(rows: list[OutputRow], out: str) -> None:
    if out == "-":
        write_csv(rows, sys.stdout)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        write_csv(rows, fh)


def _cmd_convert_units(args: argparse.Namespace) -> int:
    if args.mass_kg is None and args.time_s is None and args.length_m is None:
        print(
            "error: convert-units needs --mass-kg, --time-s, or --length-m",
            file=sys.stderr,
        )
        return 2
    if args.mass_kg is not None:
        print(f"mass {_fmt(args.mass_kg)} kg = {_fmt(mass_kg_to_geometric(args.mass_kg))} m")
    if args.time_s is not None:
        print(f"time {_fmt(args.time_s)} s = {_fmt(time_to_geometric(args.time_s))} m")
    if args.length_m is not None:
        print(
            f"length {_fmt(args.length_m)} m = {_fmt(geometric_to_time(args.length_m))} s"
        )
    return 0


def _cmd_verify(args: argparse.Namespace, config: dict[str, str]) -> int:
    _validate_config_keys(config, {"n_k", "n_omega", "chi_max", "coherence_time_s"})
    n_k = _resolve(args, config, "n_k", _DEFAULTS["n_k"])
    n_omega = _resolve(args, config, "n_omega", _DEFAULTS["n_omega"])
    chi_max = _resolve(args, config, "chi_max", _DEFAULTS["chi_max"])
    coherence_time_s = _resolve(
        args, config, "coherence_time_s", _DEFAULTS["coherence_time_s"]
    )
    checks = verify_report(
        n_k=n_k,
        n_omega=n_omega,
        chi_max=chi_max,
        coherence_length=time_to_geometric(coherence_time_s),
    )
    failed = 0
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} {check.name}: {check.detail}")
        failed += 0 if check.passed else 1
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eventsim",
        description="Event-operator model of gravitational decoherence "
        "for two-arm photon interferometry (SI units in, CSV out).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, sweep_units: str | None) -> None:
        p.add_argument("--config", help="key = value defaults file")
        p.add_argument("--out", default="-", help="output CSV path, '-' for stdout")
        p.add_argument("--mass-kg", dest="mass_kg", type=float, help="body mass [kg]")
        p.add_argument(
            "--radius-m", dest="radius_m", type=float, help="ground radius [m]"
        )
        p.add_argument(
            "--coherence-time-s",
            dest="coherence_time_s",
            type=float,
            help="source coherence time [s]",
        )
        p.add_argument(
            "--prescription",
            choices=("bennett", "kent"),
            help="causal prescription for the mismatch endpoint",
        )
        if sweep_units is not None:
            p.add_argument(
                "--start", type=float, help=f"sweep start [{sweep_units}]"
            )
            p.add_argument("--stop", type=float, help=f"sweep stop [{sweep_units}]")
            p.add_argument("--steps", type=int, help="number of sweep points")

    p_convert = sub.add_parser(
        "convert-units", help="print geometric-unit conversions"
    )
    p_convert.add_argument("--mass-kg", dest="mass_kg", type=float, help="mass [kg]")
    p_convert.add_argument("--time-s", dest="time_s", type=float, help="time [s]")
    p_convert.add_argument(
        "--length-m", dest="length_m", type=float, help="geometric length [m]"
    )

    p_compute = sub.add_parser(
        "compute", help="single scenario point (mismatch + ratio)"
    )
    add_common(p_compute, None)
    p_compute.add_argument(
        "--satellite-height-m",
        dest="satellite_height_m",
        type=float,
        help="satellite altitude above the ground radius [m]",
    )

    p_height = sub.add_parser(
        "sweep-height", help="coincidence ratio vs satellite height"
    )
    add_common(p_height, "m")

    p_offset = sub.add_parser(
        "sweep-offset", help="coincidence dip vs arm path offset"
    )
    add_common(p_offset, "s")
    p_offset.add_argument(
        "--satellite-height-m",
        dest="satellite_height_m",
        type=float,
        help="satellite altitude above the ground radius [m]",
    )
    p_offset.add_argument(
        "--chi-max", dest="chi_max", type=float, help="peak pair amplitude"
    )

    p_scan = sub.add_parser(
        "causal-scan", help="hold-delay scan of both causal prescriptions"
    )
    add_common(p_scan, "s")
    p_scan.add_argument(
        "--satellite-height-m",
        dest="satellite_height_m",
        type=float,
        help="satellite altitude above the ground radius [m]",
    )
    p_scan.add_argument(
        "--pbs-mirror-gap-m",
        dest="pbs_mirror_gap_m",
        type=float,
        help="radial gap between beamsplitter and mirror [m]; sets the "
        "space-like margin of the scan",
    )

    p_verify = sub.add_parser(
        "verify", help="discrete brute-force self-checks (exit 1 on failure)"
    )
    p_verify.add_argument("--config", help="key = value defaults file")
    p_verify.add_argument("--n-k", dest="n_k", type=int, help="field-axis nodes")
    p_verify.add_argument(
        "--n-omega", dest="n_omega", type=int, help="internal-axis nodes"
    )
    p_verify.add_argument(
        "--chi-max", dest="chi_max", type=float, help="peak pair amplitude"
    )
    p_verify.add_argument(
        "--coherence-time-s",
        dest="coherence_time_s",
        type=float,
        help="source coherence time [s]",
    )

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "convert-units":
            return _cmd_convert_units(args)
        config = load_config(args.config) if getattr(args, "config", None) else {}
        if args.command == "verify":
            return _cmd_verify(args, config)
        scenario = _scenario_config(args, config)
        rows = run_sweep(scenario)
        _emit(rows, args.out)
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
