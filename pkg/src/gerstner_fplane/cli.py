"""Command-line interface.

Subcommands: speed | profile | field | trace | verify.  Outputs are
deterministic: fixed field order, shortest round-trip float formatting
(repr), LF line endings, UTF-8.  Exit codes: 0 pass, 1 verification or
fit or inversion failure, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .fields import dispersion_residual, flow_map, wave_speed
from .inversion import (
    ConvergenceError,
    NotInDomainError,
    eulerian_pressure,
    eulerian_velocity,
    surface_profile,
)
from .params import WaveParameters
from .tracer import compare_to_analytic, trace
from .verification import (
    DEFAULT_TOLERANCES,
    SamplingGrid,
    VerificationReport,
    default_fd_step,
    run_full_verification,
    sample_points,
)

TAU = 2.0 * math.pi

PARAM_KEYS = ("k", "omega", "g", "rho", "p0", "b0")
FLOAT_KEYS = PARAM_KEYS + ("t", "depth", "dt", "tol", "h")
INT_KEYS = ("nx", "nz", "steps")
STR_KEYS = ("out", "format")
CONFIG_KEYS = FLOAT_KEYS + INT_KEYS + STR_KEYS


class ConfigError(ValueError):
    pass


def fmt(value: float) -> str:
    """Shortest decimal that round-trips the float (<= 17 significant
    digits)."""
    return repr(float(value))


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must hold a flat JSON object")
    unknown = set(raw) - set(CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = {}
    for key, value in raw.items():
        if key in STR_KEYS:
            if not isinstance(value, str):
                raise ConfigError(f"config key {key} must be a string")
            cfg[key] = value
        elif key in INT_KEYS:
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(f"config key {key} must be an integer")
            cfg[key] = value
        else:
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ConfigError(f"config key {key} must be a number")
            cfg[key] = float(value)
    return cfg


def _merge(args: argparse.Namespace) -> dict:
    """Precedence: command-line flags over config-file values over
    built-in defaults (which live in the library)."""
    merged = {}
    if args.config:
        merged.update(_load_config(args.config))
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _params(cfg: dict) -> WaveParameters:
    kwargs = {key: cfg[key] for key in PARAM_KEYS if key in cfg}
    return WaveParameters(**kwargs)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header: list[str], rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_doc(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _check_format(cfg: dict, allowed: tuple[str, ...]) -> str:
    out_format = cfg.get("format", allowed[0])
    if out_format not in allowed:
        raise ConfigError(
            f"format {out_format!r} not supported here (choose from {'/'.join(allowed)})"
        )
    return out_format


def _svg_scales(points, width=800, height=320, margin=40, pad_y=None):
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if pad_y is not None:
        y_lo, y_hi = min(y_lo, pad_y[0]), max(y_hi, pad_y[1])
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def sx(x):
        return margin + (x - x_lo) / x_span * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y_lo) / y_span * (height - 2 * margin)

    return sx, sy


def _svg_doc(body: str, width=800, height=320) -> str:
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
        f"{body}"
        "</svg>\n"
    )


def _svg_polyline(points, sx, sy, stroke="steelblue") -> str:
    pts = " ".join(f"{sx(x):.3f},{sy(y):.3f}" for x, y in points)
    return f'<polyline points="{pts}" fill="none" stroke="{stroke}" stroke-width="1.5"/>\n'


def cmd_speed(cfg: dict) -> int:
    params = _params(cfg)
    c = wave_speed(params)
    print(f"c = {c:.12f}")
    print(f"dispersion residual = {dispersion_residual(params):.6e}")
    return 0


def cmd_profile(cfg: dict) -> int:
    params = _params(cfg)
    out_format = _check_format(cfg, ("csv", "json", "svg"))
    t = cfg.get("t", 0.0)
    n = cfg.get("nx", 256)
    profile = surface_profile(t, params, n)
    samples = [(float(x), float(eta)) for x, eta in profile.samples]
    if out_format == "csv":
        _emit(_csv(["x", "eta"], samples), cfg.get("out"))
    elif out_format == "json":
        doc = {
            "k": params.k,
            "b0": params.b0,
            "t": t,
            "kind": profile.kind,
            "samples": [[x, eta] for x, eta in samples],
        }
        _emit(_json_doc(doc), cfg.get("out"))
    else:
        k, b0 = params.k, params.b0
        crest = b0 + math.exp(k * b0) / k
        trough = b0 - math.exp(k * b0) / k
        closed = samples + [(samples[0][0] + params.wavelength, samples[0][1])]
        sx, sy = _svg_scales(closed, pad_y=(trough, crest))
        guides = ""
        for level in (crest, trough):
            guides += (
                f'<line x1="{sx(closed[0][0]):.3f}" y1="{sy(level):.3f}" '
                f'x2="{sx(closed[-1][0]):.3f}" y2="{sy(level):.3f}" '
                'stroke="lightgray" stroke-dasharray="6,4"/>\n'
            )
        _emit(_svg_doc(guides + _svg_polyline(closed, sx, sy)), cfg.get("out"))
    return 0


def cmd_field(cfg: dict) -> int:
    params = _params(cfg)
    out_format = _check_format(cfg, ("csv", "json"))
    settings = None
    t = cfg.get("t", 0.0)
    grid = SamplingGrid(
        n_x=cfg.get("nx", 24),
        n_z=cfg.get("nz", 16),
        depth_extent=cfg.get("depth"),
        times=(t,),
    )
    h = cfg.get("h", default_fd_step(params))
    rows = []
    for pt, px, pz in sample_points(grid, params, settings):
        u, w = eulerian_velocity(pt, px, pz, params, settings)
        pressure = eulerian_pressure(pt, px, pz, params, settings)
        uzp, _ = eulerian_velocity(pt, px, pz + h, params, settings)
        uzm, _ = eulerian_velocity(pt, px, pz - h, params, settings)
        _, wxp = eulerian_velocity(pt, px + h, pz, params, settings)
        _, wxm = eulerian_velocity(pt, px - h, pz, params, settings)
        gamma_fd = (uzp - uzm) / (2 * h) - (wxp - wxm) / (2 * h)
        rows.append((px, pz, u, w, pressure, gamma_fd))
    if out_format == "csv":
        _emit(_csv(["x", "z", "u", "w", "p", "gamma"], rows), cfg.get("out"))
    else:
        doc = {
            "t": t,
            "columns": ["x", "z", "u", "w", "p", "gamma"],
            "rows": [list(row) for row in rows],
        }
        _emit(_json_doc(doc), cfg.get("out"))
    return 0


def cmd_trace(cfg: dict) -> int:
    params = _params(cfg)
    out_format = _check_format(cfg, ("csv", "json", "svg"))
    settings = None
    t0 = cfg.get("t", 0.0)
    depth = cfg.get("depth", 1.0 / params.k)
    label = params.label(0.0, params.b0 - depth)
    x0, z0 = flow_map(t0, label, params)
    period = TAU / (params.k * wave_speed(params))
    dt = cfg.get("dt")
    steps = cfg.get("steps")
    trajectory = trace(t0, x0, z0, params, dt, steps, settings)
    deviation = compare_to_analytic(trajectory, params, settings)
    gate = cfg.get("tol")
    if gate is None:
        # RK4 error model: deviation ~ (2 pi dt / T)^4 with generous headroom
        gate = max(1e-9, 100.0 * (TAU * trajectory.dt / period) ** 4)
    fit = {
        "center": list(trajectory.inferred_center),
        "radius": trajectory.inferred_radius,
        "period": trajectory.inferred_period,
        "max_deviation": deviation,
        "clockwise": trajectory.clockwise,
    }
    if out_format == "csv":
        if not cfg.get("out"):
            raise ConfigError("trace with csv format needs --out for the samples")
        _emit(_csv(["t", "x", "z"], trajectory.samples.tolist()), cfg["out"])
        print(_json_doc(fit), end="")
    elif out_format == "json":
        doc = {"fit": fit, "samples": [list(row) for row in trajectory.samples.tolist()]}
        _emit(_json_doc(doc), cfg.get("out"))
    else:
        pts = [(row[1], row[2]) for row in trajectory.samples.tolist()]
        sx, sy = _svg_scales(pts, height=600)
        cx, cz = trajectory.inferred_center
        circle = (
            f'<circle cx="{sx(cx):.3f}" cy="{sy(cz):.3f}" '
            f'r="{(sx(cx + trajectory.inferred_radius) - sx(cx)):.3f}" '
            'fill="none" stroke="lightgray" stroke-dasharray="6,4"/>\n'
        )
        _emit(_svg_doc(circle + _svg_polyline(pts, sx, sy), height=600), cfg.get("out"))
    if deviation > gate * trajectory.inferred_radius:
        print(
            f"orbit deviation {deviation:.3e} exceeds {fmt(gate)} * radius",
            file=sys.stderr,
        )
        return 1
    return 0


def report_to_dict(report: VerificationReport) -> dict:
    params = report.params
    grid = report.grid
    return {
        "params": {
            "k": params.k,
            "omega": params.omega,
            "g": params.g,
            "rho": params.rho,
            "p0": params.p0,
            "b0": params.b0,
            "c": wave_speed(params),
        },
        "checks": [
            {
                "name": ch.name,
                "max_abs_residual": ch.max_abs_residual,
                "residual_scale": ch.residual_scale,
                "tolerance": ch.tolerance,
                "pass": ch.passed,
            }
            for ch in report.checks
        ],
        "fd_step": report.fd_step,
        "grid": {
            "n_x": grid.n_x,
            "n_z": grid.n_z,
            "depth_extent": grid.depth_extent,
            "times": list(grid.times),
            "surface_offsets": list(grid.surface_offsets),
            "n_volume_points": report.n_volume_points,
            "n_surface_labels": report.n_surface_labels,
            "errors": list(report.errors),
        },
        "overall_pass": report.overall_pass,
    }


def cmd_verify(cfg: dict) -> int:
    params = _params(cfg)
    _check_format(cfg, ("json",))
    settings = None
    grid = SamplingGrid(
        n_x=cfg.get("nx", 24),
        n_z=cfg.get("nz", 16),
        depth_extent=cfg.get("depth"),
        times=(cfg["t"],) if "t" in cfg else None,
    )
    tolerances = None
    if "tol" in cfg:
        tolerances = {name: cfg["tol"] for name in DEFAULT_TOLERANCES}
    report = run_full_verification(params, grid, cfg.get("h"), settings, tolerances)
    _emit(_json_doc(report_to_dict(report)), cfg.get("out"))
    return 0 if report.overall_pass else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gerstner-fplane",
        description=(
            "Rotational deep-water wave toolkit: closed-form fields, surface "
            "profiles, particle orbits and a finite-difference certification "
            "of the governing equations."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "speed": "print the wave speed and its dispersion residual",
        "profile": "emit the surface profile over one wavelength",
        "field": "emit a (x, z, u, w, p, gamma) grid slice",
        "trace": "integrate one particle orbit and report the circle fit",
        "verify": "run the full residual sweep and emit the report",
    }
    for name, desc in descriptions.items():
        cmd = sub.add_parser(name, help=desc)
        for key in ("k", "omega", "g", "rho", "p0", "b0", "t", "depth", "dt", "tol", "h"):
            cmd.add_argument(f"--{key}", type=float, default=None)
        for key in ("nx", "nz", "steps"):
            cmd.add_argument(f"--{key}", type=int, default=None)
        cmd.add_argument("--out", type=str, default=None)
        cmd.add_argument("--format", type=str, default=None, choices=("csv", "json", "svg"))
        cmd.add_argument("--config", type=str, default=None)
    return parser


COMMANDS = {
    "speed": cmd_speed,
    "profile": cmd_profile,
    "field": cmd_field,
    "trace": cmd_trace,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge(args)
        return COMMANDS[args.command](cfg)
    except (NotInDomainError, ConvergenceError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
