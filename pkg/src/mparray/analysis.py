"""Pattern evaluation and verification for synthesized excitations.

The array factor of an excitation c of length N is

    C(u) = sum_{k=0}^{N-1} c_k exp(j k u),

and its zeros are the roots of the degree N-1 polynomial with c_0 as the
leading coefficient (the roots of C written in powers of exp(-ju)).  An
excitation is minimum phase when every zero lies inside or on the unit
circle, which is equivalent to its partial energy sums dominating those
of every other excitation with the same pattern magnitude.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .spec_model import DesignSpec

DEFAULT_GRID_POINTS = 8192
MIN_METRICS_GRID = 4096
ZERO_RADIUS_TOL = 1e-6
ALLPASS_MAX_ORDER = 12


@dataclass(frozen=True)
class PatternSamples:
    """Sampled pattern: u grid, normalized dB magnitude, raw complex values.

    ``magnitude_db`` is normalized so its maximum is exactly 0; a true
    pattern null maps to -inf.
    """

    u: np.ndarray
    magnitude_db: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class ZeroSet:
    """Pattern zeros, sorted by (real, imag) for reproducibility."""

    zeros: np.ndarray
    max_radius: float

    @property
    def radii(self) -> np.ndarray:
        return np.abs(self.zeros)


@dataclass(frozen=True)
class MinPhaseVerdict:
    is_min_phase: bool
    offenders: np.ndarray
    tol: float


@dataclass(frozen=True)
class BandLevel:
    """Measured level of one band against its bound.

    ``achieved_db`` is the peak level for a stop band and the peak-to-peak
    ripple for a pass band; ``margin_db`` is bound - achieved, so a
    non-negative margin means the band constraint is met.
    """

    kind: str
    u_lo: float
    u_hi: float
    bound_db: float | None
    achieved_db: float
    margin_db: float


@dataclass(frozen=True)
class PatternMetrics:
    bands: tuple[BandLevel, ...]
    flattop_ripple_db: float
    max_sidelobe_db: float

    @property
    def violations(self) -> tuple[BandLevel, ...]:
        return tuple(b for b in self.bands if b.margin_db < 0.0)


@dataclass(frozen=True)
class DesignReport:
    """Everything a design run asserts about its output."""

    name: str
    element_count: int
    feasible: bool
    bands: tuple[BandLevel, ...]
    flattop_ripple_db: float
    max_sidelobe_db: float
    zero_count: int
    zero_max_radius: float
    zero_min_radius: float
    min_phase: bool
    steering_angle_rad: float = 0.0
    gamma: float | None = None
    lambda_min_estimate: float | None = None
    autocorr_residual: float | None = None
    purge_residual: float | None = None
    expansion: int | None = None
    refined: bool | None = None
    witness: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        def db(x):
            if x is None or not math.isfinite(x):
                return None
            return round(float(x), 4)

        return {
            "name": self.name,
            "element_count": self.element_count,
            "feasible": self.feasible,
            "bands": [
                {
                    "kind": b.kind,
                    "u_lo": float(b.u_lo),
                    "u_hi": float(b.u_hi),
                    "bound_db": db(b.bound_db),
                    "achieved_db": db(b.achieved_db),
                    "margin_db": db(b.margin_db),
                }
                for b in self.bands
            ],
            "flattop_ripple_db": db(self.flattop_ripple_db),
            "max_sidelobe_db": db(self.max_sidelobe_db),
            "zero_count": self.zero_count,
            "zero_max_radius": self.zero_max_radius,
            "zero_min_radius": self.zero_min_radius,
            "min_phase": self.min_phase,
            "steering_angle_rad": self.steering_angle_rad,
            "gamma": self.gamma,
            "lambda_min_estimate": self.lambda_min_estimate,
            "autocorr_residual": self.autocorr_residual,
            "purge_residual": self.purge_residual,
            "expansion": self.expansion,
            "refined": self.refined,
            "witness": list(self.witness),
        }


def array_factor(c, u) -> PatternSamples:
    """Sample C(u) on a grid and normalize the magnitude to a 0 dB peak."""
    c = np.asarray(c)
    u = np.asarray(u, float)
    values = np.exp(1j * np.outer(u, np.arange(len(c)))) @ c
    mag = np.abs(values)
    peak = mag.max() if len(mag) else 0.0
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(mag)
        if peak > 0.0:
            db -= 20.0 * np.log10(peak)
    return PatternSamples(u=u, magnitude_db=db, values=values)


def metrics_grid(spec: DesignSpec, points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """Uniform grid on [0, pi] augmented with the exact band edges."""
    base = np.linspace(0.0, math.pi, points)
    edges = []
    for b in spec.bands:
        edges.extend((b.u_lo, b.u_hi))
    return np.unique(np.concatenate([base, np.asarray(edges, float)]))


def pattern_metrics(samples: PatternSamples, spec: DesignSpec) -> PatternMetrics:
    """Per-band achieved levels and margins of a sampled pattern.

    The samples must cover [0, pi] with at least ``MIN_METRICS_GRID``
    points (use :func:`metrics_grid`); each band must contain at least one
    sample.
    """
    if len(samples.u) < MIN_METRICS_GRID:
        raise ValueError(f"need at least {MIN_METRICS_GRID} samples over [0, pi], "
                         f"got {len(samples.u)}")
    levels = []
    for band in spec.bands:
        mask = (samples.u >= band.u_lo - 1e-9) & (samples.u <= band.u_hi + 1e-9)
        if not mask.any():
            raise ValueError(f"no samples inside band [{band.u_lo:.6g}, {band.u_hi:.6g}]")
        db = samples.magnitude_db[mask]
        if band.kind == "stop":
            achieved = float(db.max())
            bound = band.max_level_db
        else:
            achieved = float(db.max() - db.min()) if not band.is_degenerate else 0.0
            bound = band.ripple_db
        margin = math.inf if bound is None else float(bound - achieved)
        levels.append(BandLevel(kind=band.kind, u_lo=band.u_lo, u_hi=band.u_hi,
                                bound_db=bound, achieved_db=achieved, margin_db=margin))
    stops = [lv.achieved_db for lv in levels if lv.kind == "stop"]
    ripple = next((lv.achieved_db for lv in levels if lv.kind == "pass"), 0.0)
    return PatternMetrics(bands=tuple(levels),
                          flattop_ripple_db=ripple,
                          max_sidelobe_db=max(stops) if stops else -math.inf)


def polynomial_zeros(c) -> ZeroSet:
    """Pattern zeros via companion-matrix eigenvalues plus Newton polish.

    Exact leading zero coefficients are stripped first; each root gets up
    to two Newton corrections, kept only while they shrink |p(z)|.
    """
    coeffs = np.atleast_1d(np.asarray(c))
    lead = 0
    while lead < len(coeffs) and coeffs[lead] == 0.0:
        lead += 1
    coeffs = coeffs[lead:]
    if len(coeffs) <= 1:
        return ZeroSet(zeros=np.zeros(0, complex), max_radius=0.0)
    roots = np.roots(coeffs)
    deriv = np.polyder(coeffs)
    for i, z in enumerate(roots):
        for _ in range(2):
            pz = np.polyval(coeffs, z)
            dz = np.polyval(deriv, z)
            if dz == 0.0:
                break
            z_new = z - pz / dz
            if abs(np.polyval(coeffs, z_new)) < abs(pz):
                z = z_new
            else:
                break
        roots[i] = z
    order = np.lexsort((roots.imag, roots.real))
    roots = roots[order]
    return ZeroSet(zeros=roots, max_radius=float(np.max(np.abs(roots))))


def min_phase_check(zero_set: ZeroSet, tol: float = ZERO_RADIUS_TOL) -> MinPhaseVerdict:
    """Are all zeros inside or on the unit circle (radius <= 1 + tol)?"""
    offenders = zero_set.zeros[np.abs(zero_set.zeros) > 1.0 + tol]
    return MinPhaseVerdict(is_min_phase=len(offenders) == 0,
                           offenders=offenders, tol=tol)


def partial_energy_profile(c) -> np.ndarray:
    """Cumulative energy sums: out[k] = sum_{i<=k} |c_i|^2."""
    c = np.asarray(c)
    return np.cumsum(np.abs(c) ** 2)


def allpass_variants(c, *, on_circle_tol: float = ZERO_RADIUS_TOL) -> list[np.ndarray]:
    """Every excitation sharing |C(u)| with c, by reflecting interior zeros.

    Each strictly interior zero may be replaced by its conjugate
    reciprocal without changing the pattern magnitude (after an energy
    rescale); zeros on the unit circle are never reflected.  Returns one
    vector per subset of the interior zeros, the empty subset first, each
    scaled to the energy of c and with a positive real leading entry.
    """
    c = np.asarray(c)
    if len(c) > ALLPASS_MAX_ORDER:
        raise ValueError(f"variant enumeration capped at {ALLPASS_MAX_ORDER} elements, "
                         f"got {len(c)}")
    zero_set = polynomial_zeros(c)
    zeros = zero_set.zeros
    interior = [i for i, z in enumerate(zeros) if abs(z) < 1.0 - on_circle_tol]
    energy = float(np.sum(np.abs(c) ** 2))
    out = []
    for r in range(len(interior) + 1):
        for subset in combinations(interior, r):
            zv = zeros.copy()
            for i in subset:
                zv[i] = 1.0 / np.conj(zv[i])
            coeffs = np.poly(zv)
            if np.max(np.abs(coeffs.imag)) <= 1e-9 * np.max(np.abs(coeffs.real)):
                coeffs = coeffs.real
            coeffs = coeffs * math.sqrt(energy / float(np.sum(np.abs(coeffs) ** 2)))
            out.append(coeffs)
    return out


def apply_steering(c, u0: float) -> np.ndarray:
    """Steer the pattern peak to u0: c_k -> c_k exp(-j k u0).

    The steered pattern satisfies |C'(u)| = |C(u - u0)| exactly; u0 = 0
    returns an unmodified copy.
    """
    c = np.asarray(c)
    if u0 == 0.0:
        return c.copy()
    return c * np.exp(-1j * np.arange(len(c)) * u0)


def build_report(spec: DesignSpec, element_count: int, metrics: PatternMetrics,
                 zero_set: ZeroSet, verdict: MinPhaseVerdict, *,
                 feasible: bool = True, diagnostics=None,
                 witness: tuple[str, ...] = (), name: str | None = None) -> DesignReport:
    radii = zero_set.radii
    return DesignReport(
        name=name if name is not None else spec.name,
        element_count=element_count,
        feasible=feasible,
        bands=metrics.bands,
        flattop_ripple_db=metrics.flattop_ripple_db,
        max_sidelobe_db=metrics.max_sidelobe_db,
        zero_count=len(zero_set.zeros),
        zero_max_radius=float(radii.max()) if len(radii) else 0.0,
        zero_min_radius=float(radii.min()) if len(radii) else 0.0,
        min_phase=verdict.is_min_phase,
        steering_angle_rad=spec.steering_angle_rad,
        gamma=None if diagnostics is None else diagnostics.gamma,
        lambda_min_estimate=None if diagnostics is None else diagnostics.lambda_min_estimate,
        autocorr_residual=None if diagnostics is None else diagnostics.autocorr_residual,
        purge_residual=None if diagnostics is None else diagnostics.purge_residual,
        expansion=None if diagnostics is None else diagnostics.expansion,
        refined=None if diagnostics is None else diagnostics.refined,
        witness=tuple(witness))
