"""Squared-magnitude prototype mapping and the minimal element-count search.

The minimum-phase route designs the squared pattern G(u) = |C(u)|^2 as an
equiripple prototype and factors it.  Amplitude bounds on |C| therefore
have to be restated as bounds on G:

  * a stop ceiling delta_s on |C| allows G to swing within +-delta_s^2/2
    about 0, so delta2' = delta_s^2 / 2;
  * a peak-to-peak pass ripple of r dB about the flat top, split evenly in
    dB, means |C| must stay above 10**(-r/40) =: 1 - delta_p, so G may dip
    to (1 - delta_p)^2.  With the stop-band lift folded in, the pass-band
    swing of G about 1 is delta1' = 1 - (1 - delta_p)^2 - 2*delta2'.

The mapping is conservative, so a design meeting the G-plan meets the
original bounds; feasibility of an element count is always judged on the
synthesized pattern against the original bands, never on the plan.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .analysis import (PatternMetrics, array_factor, build_report,
                       metrics_grid, min_phase_check, pattern_metrics,
                       polynomial_zeros, DesignReport, ZERO_RADIUS_TOL)
from .equiripple import (LinearPhasePrototype, PrototypeBand, estimate_order,
                         remez_design)
from .spec_model import DesignSpec, db_to_amplitude, validate_spec
from .spectral_factor import (DEFAULT_EXPANSION_FACTOR, DEFAULT_GAMMA_MARGIN,
                              FactorizationError, FactorizationDiagnostics,
                              MinPhaseWeights, spectral_factorize)


class InfeasibleSpecError(ValueError):
    """The requested bounds cannot be met by this design route."""


class OrderSearchError(RuntimeError):
    """No element count within the search limit satisfied the bands."""

    def __init__(self, message: str, best):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class PrototypeSpec:
    """Weighted equiripple plan for the squared pattern G(u)."""

    bands: tuple[PrototypeBand, ...]
    delta_pass: float
    delta_stop: float


@dataclass(frozen=True)
class SearchLimits:
    """Knobs of the minimal element-count search."""

    max_order: int = 64
    expansion_factor: int = DEFAULT_EXPANSION_FACTOR
    grid_points: int = 8192
    grid_density: int = 16
    newton: bool = True
    gamma_margin: float = DEFAULT_GAMMA_MARGIN
    zero_radius_tol: float = ZERO_RADIUS_TOL
    delta_shrink: float = 0.9
    max_shrinks: int = 5


@dataclass(frozen=True)
class DesignTrial:
    """One element count attempted against the original bands."""

    order: int
    feasible: bool
    weights: MinPhaseWeights | None
    diagnostics: FactorizationDiagnostics | None
    prototype: LinearPhasePrototype | None
    metrics: PatternMetrics | None
    violations: tuple[str, ...]
    shrinks: int


@dataclass(frozen=True)
class MinOrderResult:
    order: int
    weights: MinPhaseWeights
    diagnostics: FactorizationDiagnostics
    prototype: LinearPhasePrototype
    metrics: PatternMetrics
    report: DesignReport


def to_prototype_spec(spec: DesignSpec) -> PrototypeSpec:
    """Restate amplitude bands as a weighted plan for G = |C|^2.

    Pass and stop bands get Chebyshev weights 1/delta1' and 1/delta2' so
    a single equiripple level targets both tolerances at once.

    Raises
    ------
    InfeasibleSpecError
        If the ripple and sidelobe bounds leave no room for G (delta1'
        <= 0), if there is no stop band, or if the pass band is a single
        point (a pencil beam wants the direct equiripple route, not the
        squared-magnitude mapping).
    """
    spec = validate_spec(spec)
    pass_band = spec.pass_band
    stops = spec.stop_bands
    if pass_band.is_degenerate:
        raise InfeasibleSpecError(
            "degenerate pass band: design the pattern directly with "
            "remez_design and an interpolation constraint")
    if not stops:
        raise InfeasibleSpecError("need at least one stop band to bound sidelobes")
    delta2_each = [0.5 * db_to_amplitude(b.max_level_db) ** 2 for b in stops]
    delta2 = min(delta2_each)
    delta_p = 1.0 - 10.0 ** (-pass_band.ripple_db / 40.0)
    delta1 = 1.0 - (1.0 - delta_p) ** 2 - 2.0 * delta2
    if delta1 <= 0.0:
        raise InfeasibleSpecError(
            f"ripple bound {pass_band.ripple_db} dB leaves no squared-pattern "
            f"tolerance against the stop floor (delta1' = {delta1:.3e})")
    bands = [PrototypeBand(pass_band.u_lo, pass_band.u_hi, 1.0, 1.0 / delta1)]
    for b, d2 in zip(stops, delta2_each):
        bands.append(PrototypeBand(b.u_lo, b.u_hi, 0.0, 1.0 / d2))
    bands.sort(key=lambda b: b.u_lo)
    return PrototypeSpec(bands=tuple(bands), delta_pass=delta1, delta_stop=delta2)


def design_prototype(pspec: PrototypeSpec, order: int, *,
                     grid_density: int = 16) -> LinearPhasePrototype:
    """Equiripple G design with 2*order-1 taps for an order-N excitation."""
    if order < 1:
        raise ValueError("order must be at least 1")
    return remez_design(pspec.bands, order - 1, grid_density=grid_density)


def _scaled(pspec: PrototypeSpec, pass_scale: float, stop_scale: float) -> PrototypeSpec:
    if pass_scale == 1.0 and stop_scale == 1.0:
        return pspec
    bands = []
    for b in pspec.bands:
        scale = pass_scale if b.desired != 0.0 else stop_scale
        bands.append(replace(b, weight=b.weight / scale))
    return PrototypeSpec(bands=tuple(bands),
                         delta_pass=pspec.delta_pass * pass_scale,
                         delta_stop=pspec.delta_stop * stop_scale)


def _attempt(spec: DesignSpec, pspec: PrototypeSpec, order: int,
             limits: SearchLimits) -> DesignTrial:
    """Try one element count, tightening violated tolerances a few times.

    A uniform tolerance shrink would leave the Chebyshev weights in the
    same ratio and reproduce the identical prototype, so only the side
    that failed verification is tightened.

    The designed stop deviation is handed to the factorization as the
    gamma floor: G dips to exactly that value below zero, and the
    finite-section bisection underestimates it, which would leave G +
    gamma without a real spectral factor.
    """
    grid = metrics_grid(spec, limits.grid_points)
    pass_scale = stop_scale = 1.0
    last: DesignTrial | None = None
    for shrink in range(limits.max_shrinks + 1):
        plan = _scaled(pspec, pass_scale, stop_scale)
        prototype = design_prototype(plan, order, grid_density=limits.grid_density)
        dip = max((prototype.achieved_delta[i] / band.weight
                   for i, band in enumerate(prototype.bands) if band.desired == 0.0),
                  default=0.0)
        try:
            weights, diag = spectral_factorize(
                prototype.taps,
                expansion_factor=limits.expansion_factor,
                gamma_margin=limits.gamma_margin,
                gamma_floor=dip,
                newton=limits.newton)
        except FactorizationError as err:
            last = DesignTrial(order, False, None, None, prototype, None,
                               (f"factorization failed: {err}",), shrink)
            pass_scale *= limits.delta_shrink
            stop_scale *= limits.delta_shrink
            continue
        metrics = pattern_metrics(array_factor(weights.c, grid), spec)
        violations = tuple(
            f"{lv.kind} band [{lv.u_lo:.6g}, {lv.u_hi:.6g}]: achieved "
            f"{lv.achieved_db:.4f} dB vs bound {lv.bound_db:.4f} dB"
            for lv in metrics.violations)
        trial = DesignTrial(order, not violations, weights, diag, prototype,
                            metrics, violations, shrink)
        if trial.feasible:
            return trial
        last = trial
        if any(lv.kind == "pass" for lv in metrics.violations):
            pass_scale *= limits.delta_shrink
        if any(lv.kind == "stop" for lv in metrics.violations):
            stop_scale *= limits.delta_shrink
    return last


def find_min_order(spec: DesignSpec, limits: SearchLimits | None = None) -> MinOrderResult:
    """Smallest element count whose synthesized pattern meets every band.

    Starts from the heuristic estimate, then walks down while feasible or
    up while infeasible.  Feasibility of a count is judged on the final
    minimum-phase pattern against the original bands.  The report carries
    a minimality witness: the band violations observed at one element
    fewer.

    Raises
    ------
    OrderSearchError
        If no count up to ``limits.max_order`` is feasible; the best
        failing trial is attached.
    """
    limits = limits or SearchLimits()
    spec = validate_spec(spec)
    pspec = to_prototype_spec(spec)
    guess = min(max(estimate_order(pspec.bands, pspec.delta_pass, pspec.delta_stop), 1),
                limits.max_order)

    trials: dict[int, DesignTrial] = {}

    def trial(n: int) -> DesignTrial:
        if n not in trials:
            trials[n] = _attempt(spec, pspec, n, limits)
        return trials[n]

    if trial(guess).feasible:
        order = guess
        while order > 1 and trial(order - 1).feasible:
            order -= 1
    else:
        order = guess + 1
        while order <= limits.max_order and not trial(order).feasible:
            order += 1
        if order > limits.max_order:
            best = max(trials.values(),
                       key=lambda t: min((lv.margin_db for lv in t.metrics.bands),
                                         default=-math.inf) if t.metrics else -math.inf)
            raise OrderSearchError(
                f"no element count up to {limits.max_order} meets the bands", best)

    best = trial(order)
    witness = trial(order - 1).violations if order > 1 else ()
    zero_set = polynomial_zeros(best.weights.c)
    verdict = min_phase_check(zero_set, limits.zero_radius_tol)
    report = build_report(spec, order, best.metrics, zero_set, verdict,
                          feasible=True, diagnostics=best.diagnostics,
                          witness=witness)
    return MinOrderResult(order=order, weights=best.weights,
                          diagnostics=best.diagnostics, prototype=best.prototype,
                          metrics=best.metrics, report=report)
