"""Command line front end: design, reproduce, analyze.

Artifacts written to the output directory:

  weights.csv   index,re,im           excitation, exact round-trip floats
  pattern.csv   u_rad,theta_deg,magnitude_db   over u in [-pi, pi]
  zeros.csv     re,im,radius          pattern zeros
  report.json   the design report

Exit codes: 0 success, 1 usage or input errors, 2 bands unmet (the best
attempt is still written).

Design requests are JSON objects:

    {
      "name": "lowpass",                  // optional
      "spacing_wavelengths": 0.5,
      "angle_unit": "u_rad",              // or "theta_deg"
      "steering_angle_rad": 0.0,          // optional, radians of theta
      "bands": [
        {"u_lo": 0.0, "u_hi": 0.68, "kind": "pass", "ripple_db": 0.25},
        {"u_lo": 2.72, "u_hi": 3.14159265, "kind": "stop", "max_level_db": -52}
      ]
    }

With angle_unit "theta_deg" the band edges are read as theta in degrees
and converted through u = 2*pi*spacing*sin(theta) on load.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .analysis import (array_factor, build_report, metrics_grid,
                       min_phase_check, pattern_metrics, polynomial_zeros,
                       ZERO_RADIUS_TOL)
from .designs import (EXPECTED_ELEMENTS, PENCIL_ELEMENT_COUNT, builtin_spec,
                      design_pencil)
from .prototype import (InfeasibleSpecError, OrderSearchError, SearchLimits,
                        find_min_order)
from .spec_model import (BandSpec, DesignSpec, SpecValidationError,
                         VisibleRegionError, theta_to_u, validate_spec)
from .spectral_factor import DEFAULT_EXPANSION_FACTOR, DEFAULT_GAMMA_MARGIN


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; keep 2 reserved for unmet bands
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def load_design_spec(path: str | Path) -> DesignSpec:
    """Read and validate a JSON design request."""
    path = Path(path)
    data = json.loads(path.read_text())
    spacing = float(data["spacing_wavelengths"])
    angle_unit = data.get("angle_unit", "u_rad")
    if angle_unit not in ("u_rad", "theta_deg"):
        raise ValueError(f"angle_unit must be 'u_rad' or 'theta_deg', got {angle_unit!r}")

    def to_u(value: float) -> float:
        if angle_unit == "u_rad":
            return float(value)
        return theta_to_u(math.radians(float(value)), spacing)

    bands = []
    for entry in data["bands"]:
        bands.append(BandSpec(
            u_lo=to_u(entry["u_lo"]),
            u_hi=to_u(entry["u_hi"]),
            kind=entry["kind"],
            ripple_db=entry.get("ripple_db"),
            max_level_db=entry.get("max_level_db")))
    spec = DesignSpec(
        spacing_wavelengths=spacing,
        bands=tuple(bands),
        steering_angle_rad=float(data.get("steering_angle_rad", 0.0)),
        name=str(data.get("name", path.stem)))
    return validate_spec(spec)


def _read_weights(path: str | Path) -> np.ndarray:
    rows = Path(path).read_text().strip().splitlines()
    if not rows or rows[0].strip().lower() != "index,re,im":
        raise ValueError(f"{path}: expected a CSV with header 'index,re,im'")
    c = np.zeros(len(rows) - 1, complex)
    for line in rows[1:]:
        k, re, im = line.split(",")
        c[int(k)] = complex(float(re), float(im))
    if np.all(c.imag == 0.0):
        return c.real.copy()
    return c


def _write_weights(path: Path, c) -> None:
    lines = ["index,re,im"]
    for k, v in enumerate(np.atleast_1d(c)):
        z = complex(v)
        lines.append(f"{k},{z.real!r},{z.imag!r}")
    path.write_text("\n".join(lines) + "\n")


def _write_pattern(path: Path, c, spacing: float, points: int) -> None:
    half = np.linspace(0.0, math.pi, points)
    u = np.concatenate([-half[:0:-1], half])
    samples = array_factor(c, u)
    visible = 2.0 * math.pi * spacing
    lines = ["u_rad,theta_deg,magnitude_db"]
    for ui, db in zip(samples.u, samples.magnitude_db):
        if abs(ui) <= visible * (1.0 + 1e-12):
            theta = math.degrees(math.asin(min(1.0, max(-1.0, ui / visible))))
            theta_txt = f"{theta:.6f}"
        else:
            theta_txt = "nan"
        lines.append(f"{ui:.12g},{theta_txt},{db:.4f}")
    path.write_text("\n".join(lines) + "\n")


def _write_zeros(path: Path, zero_set) -> None:
    lines = ["re,im,radius"]
    for z in zero_set.zeros:
        lines.append(f"{z.real:.12g},{z.imag:.12g},{abs(z):.12g}")
    path.write_text("\n".join(lines) + "\n")


def _write_report(path: Path, report_dict: dict) -> None:
    path.write_text(json.dumps(report_dict, indent=2, sort_keys=True) + "\n")


def _write_artifacts(out: Path, c, spacing: float, zero_set, report_dict: dict,
                     points: int) -> None:
    out.mkdir(parents=True, exist_ok=True)
    _write_weights(out / "weights.csv", c)
    _write_pattern(out / "pattern.csv", c, spacing, points)
    _write_zeros(out / "zeros.csv", zero_set)
    _write_report(out / "report.json", report_dict)


def _limits_from(args) -> SearchLimits:
    return SearchLimits(
        max_order=args.max_n,
        expansion_factor=args.q_factor,
        grid_points=args.grid,
        newton=args.newton,
        gamma_margin=args.gamma_margin,
        zero_radius_tol=args.zero_tol)


def run_design(args) -> int:
    spec = load_design_spec(args.spec)
    limits = _limits_from(args)
    out = Path(args.out)
    try:
        result = find_min_order(spec, limits)
        report = result.report
        weights = result.weights
    except OrderSearchError as err:
        best = err.best
        if best is None or best.weights is None:
            print(f"error: {err}", file=sys.stderr)
            return 1
        zero_set = polynomial_zeros(best.weights.c)
        verdict = min_phase_check(zero_set, limits.zero_radius_tol)
        report = build_report(spec, best.order, best.metrics, zero_set, verdict,
                              feasible=False, diagnostics=best.diagnostics,
                              witness=best.violations)
        weights = best.weights
        print(f"bands unmet up to {limits.max_order} elements; "
              f"writing the best attempt ({best.order} elements)", file=sys.stderr)

    c_out = weights.c
    if spec.steering_angle_rad != 0.0:
        from .analysis import apply_steering
        u0 = theta_to_u(spec.steering_angle_rad, spec.spacing_wavelengths)
        c_out = apply_steering(weights.c, u0)
    zero_set = polynomial_zeros(c_out)
    _write_artifacts(out, c_out, spec.spacing_wavelengths, zero_set,
                     report.to_dict(), args.grid)
    print(f"{report.name or 'design'}: {report.element_count} elements, "
          f"sidelobes {report.max_sidelobe_db:.4f} dB, "
          f"ripple {report.flattop_ripple_db:.4f} dB -> {out}")
    return 0 if report.feasible else 2


def _check(label: str, ok: bool, detail: str) -> tuple[bool, str]:
    return ok, f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"


def run_reproduce(args) -> int:
    key = args.design
    limits = _limits_from(args)
    out = Path(args.out)
    spec = builtin_spec(key)
    checks: list[tuple[bool, str]] = []

    if key == "pencil":
        proto = design_pencil()
        c = proto.taps
        grid = metrics_grid(spec, args.grid)
        metrics = pattern_metrics(array_factor(c, grid), spec)
        zero_set = polynomial_zeros(c)
        verdict = min_phase_check(zero_set, limits.zero_radius_tol)
        report = build_report(spec, len(c), metrics, zero_set, verdict,
                              feasible=not metrics.violations)
        circle_err = float(np.max(np.abs(zero_set.radii - 1.0)))
        checks.append(_check(
            "element count", len(c) == PENCIL_ELEMENT_COUNT,
            f"{len(c)} (expected {PENCIL_ELEMENT_COUNT})"))
        checks.append(_check(
            "sidelobes at or below -30 dB", metrics.max_sidelobe_db <= -30.0,
            f"peak {metrics.max_sidelobe_db:.4f} dB"))
        checks.append(_check(
            "zeros on the unit circle", circle_err <= 1e-3,
            f"max |radius - 1| = {circle_err:.3e}"))
        weights_c = c
    else:
        try:
            result = find_min_order(spec, limits)
        except OrderSearchError as err:
            print(f"FAIL  {key}: {err}")
            return 2
        report = result.report
        weights_c = result.weights.c
        expected = EXPECTED_ELEMENTS[key]
        checks.append(_check(
            "element count", result.order <= expected,
            f"{result.order} (published value {expected})"))
        for lv in report.bands:
            label = f"{lv.kind} band [{lv.u_lo:.4f}, {lv.u_hi:.4f}] within bounds"
            checks.append(_check(
                label, lv.margin_db >= 0.0,
                f"achieved {lv.achieved_db:.4f} dB vs bound {lv.bound_db:.4f} dB "
                f"(margin {lv.margin_db:.4f} dB)"))
        checks.append(_check(
            "minimum phase", report.min_phase,
            f"max zero radius {report.zero_max_radius:.9f}"))
        if key == "design3":
            real_ok = bool(np.max(np.abs(np.imag(weights_c))) == 0.0)
            checks.append(_check(
                "weights real (element phases 0 or pi)", real_ok,
                "all imaginary parts zero" if real_ok else "complex weights"))
        zero_set = polynomial_zeros(weights_c)

    _write_artifacts(out, weights_c, spec.spacing_wavelengths, zero_set,
                     report.to_dict(), args.grid)
    all_ok = all(ok for ok, _ in checks)
    for _, line in checks:
        print(line)
    return 0 if all_ok else 2


def run_analyze(args) -> int:
    c = _read_weights(args.weights)
    out = Path(args.out)
    zero_set = polynomial_zeros(c)
    verdict = min_phase_check(zero_set, args.zero_tol)
    spec = load_design_spec(args.spec) if args.spec else None

    if spec is not None:
        grid = metrics_grid(spec, args.grid)
        metrics = pattern_metrics(array_factor(c, grid), spec)
        feasible = not metrics.violations
        report = build_report(spec, len(c), metrics, zero_set, verdict,
                              feasible=feasible,
                              witness=tuple(
                                  f"{lv.kind} band [{lv.u_lo:.6g}, {lv.u_hi:.6g}]: "
                                  f"margin {lv.margin_db:.4f} dB"
                                  for lv in metrics.violations))
        report_dict = report.to_dict()
        spacing = spec.spacing_wavelengths
    else:
        feasible = True
        radii = zero_set.radii
        report_dict = {
            "name": Path(args.weights).stem,
            "element_count": int(len(np.atleast_1d(c))),
            "min_phase": verdict.is_min_phase,
            "zero_count": int(len(zero_set.zeros)),
            "zero_max_radius": float(radii.max()) if len(radii) else 0.0,
            "zero_min_radius": float(radii.min()) if len(radii) else 0.0,
        }
        spacing = 0.5

    _write_artifacts(out, c, spacing, zero_set, report_dict, args.grid)
    verdict_txt = "minimum phase" if verdict.is_min_phase else \
        f"not minimum phase ({len(verdict.offenders)} zeros outside)"
    print(f"{len(np.atleast_1d(c))} elements, {verdict_txt} -> {out}")
    return 0 if feasible else 2


def _add_common(p) -> None:
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--grid", type=int, default=8192,
                   help="pattern grid points over [0, pi] (default 8192)")
    p.add_argument("--zero-tol", type=float, default=ZERO_RADIUS_TOL,
                   help="zero-radius tolerance for the min-phase verdict")


def _add_search(p) -> None:
    p.add_argument("--q-factor", type=int, default=DEFAULT_EXPANSION_FACTOR,
                   help="Toeplitz expansion Q as a multiple of N (default 30)")
    p.add_argument("--max-n", type=int, default=64,
                   help="largest element count the search may try (default 64)")
    p.add_argument("--newton", action=argparse.BooleanOptionalAction, default=True,
                   help="polish the factorization with Newton iterations")
    p.add_argument("--gamma-margin", type=float, default=DEFAULT_GAMMA_MARGIN,
                   help="relative safety margin on the diagonal lift (default 1e-3)")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mparray",
                     description="Minimum-phase excitation synthesis for "
                                 "uniformly spaced linear arrays")
    sub = parser.add_subparsers(dest="command", required=True)

    p_design = sub.add_parser("design", help="design from a JSON band request")
    p_design.add_argument("--spec", required=True, help="JSON design request")
    _add_common(p_design)
    _add_search(p_design)
    p_design.set_defaults(func=run_design)

    p_rep = sub.add_parser("reproduce", help="run a built-in reference design")
    p_rep.add_argument("design", choices=sorted(EXPECTED_ELEMENTS),
                       help="which reference design to run")
    _add_common(p_rep)
    _add_search(p_rep)
    p_rep.set_defaults(func=run_reproduce)

    p_an = sub.add_parser("analyze", help="analyze an excitation from file")
    p_an.add_argument("--weights", required=True, help="weights CSV (index,re,im)")
    p_an.add_argument("--spec", help="optional JSON design request to check against")
    _add_common(p_an)
    p_an.set_defaults(func=run_analyze)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecValidationError, InfeasibleSpecError, VisibleRegionError,
            ValueError, KeyError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
