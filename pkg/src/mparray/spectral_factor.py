"""Minimum-phase factor extraction from symmetric autocorrelation taps.

Given real symmetric taps g (length 2N-1) whose zero-phase transform
G(u) may dip slightly below zero, the excitation c with

    sum_k c_k c_{k+m} = g[N-1+m] + gamma * [m == 0]

and all pattern zeros inside the closed unit disc is recovered from the
banded Cholesky factor of the (2Q+N)-dimensional symmetric Toeplitz
matrix with entry (i, j) = g[N-1-|i-j|], lifted by gamma on the diagonal.
The middle column of the factor converges, as the expansion Q grows, to
the reversed coefficient vector of the minimum-phase factor; gamma is the
smallest diagonal loading (found by bisection on Cholesky success) that
makes the matrix positive definite, enlarged by a small safety margin.

Everything here stays in banded storage; the dense matrix is never formed.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as _sla

DEFAULT_EXPANSION_FACTOR = 30
MIN_EXPANSION = 176
DEFAULT_GAMMA_MARGIN = 1e-3
PIVOT_FLOOR_FACTOR = 1e-14
PURGE_WARN_TOL = 1e-6


class FactorizationError(RuntimeError):
    """Banded Cholesky failed where it was expected to succeed."""


@dataclass(frozen=True)
class ToeplitzOperator:
    """Banded symmetric Toeplitz operator G + gamma*I in compact storage.

    ``taps`` is the full symmetric vector (length 2*order-1); ``expansion``
    is the padding Q on each side of the order-N window, so the operator
    dimension is 2Q+N.
    """

    taps: np.ndarray
    order: int
    expansion: int
    gamma: float = 0.0

    def __post_init__(self):
        taps = np.asarray(self.taps, float)
        object.__setattr__(self, "taps", taps)
        if len(taps) != 2 * self.order - 1:
            raise ValueError(f"taps length {len(taps)} does not match order {self.order}")
        scale = max(1.0, float(np.max(np.abs(taps))))
        if np.max(np.abs(taps - taps[::-1])) > 1e-9 * scale:
            raise ValueError("taps must be symmetric")
        if self.expansion < 1:
            raise ValueError("expansion must be at least 1")

    @property
    def dim(self) -> int:
        return 2 * self.expansion + self.order

    def banded(self) -> np.ndarray:
        """Upper-diagonal ordered banded storage of G + gamma*I.

        Row r holds diagonal number order-1-r, so row r is the constant
        taps[r]; the main diagonal (last row) carries the gamma lift.
        """
        ab = np.repeat(self.taps[:self.order, None], self.dim, axis=1)
        ab[-1, :] += self.gamma
        return ab

    def entry(self, i: int, j: int) -> float:
        lag = abs(i - j)
        if lag >= self.order:
            return 0.0
        val = float(self.taps[self.order - 1 - lag])
        if i == j:
            val += self.gamma
        return val


@dataclass(frozen=True)
class MinPhaseWeights:
    """Minimum-phase excitation extracted from a factorization.

    ``purge_residual`` is the largest entry (relative to max |c|) discarded
    outside the order-N read window of the augmented factor column.  The
    banded factor of a banded matrix is itself banded, so this is zero up
    to storage round-off; the meaningful convergence diagnostic is the
    autocorrelation residual.
    """

    c: np.ndarray
    gamma_used: float
    q_used: int
    purge_residual: float
    refined: bool = False


@dataclass(frozen=True)
class FactorizationDiagnostics:
    gamma: float
    lambda_min_estimate: float
    autocorr_residual: float
    purge_residual: float
    expansion: int
    refined: bool


def autocorrelation(c) -> np.ndarray:
    """Full autocorrelation of a real excitation: out[N-1+m] = sum_k c_k c_{k+m}."""
    c = np.asarray(c, float)
    if c.ndim != 1 or len(c) == 0:
        raise ValueError("expected a non-empty 1-d real vector")
    return np.correlate(c, c, mode="full")


def _try_factor(ab: np.ndarray, shift: float, pivot_floor: float):
    work = ab.copy()
    work[-1, :] += shift
    try:
        fact = _sla.cholesky_banded(work, lower=False, check_finite=False)
    except np.linalg.LinAlgError:
        return None
    pivots = fact[-1, :] ** 2
    if pivots.min() <= pivot_floor:
        return None
    return fact


def find_gamma(taps, order: int, expansion: int, *,
               gamma_margin: float = DEFAULT_GAMMA_MARGIN,
               rel_tol: float = 1e-6,
               pivot_floor_factor: float = PIVOT_FLOOR_FACTOR) -> tuple[float, float]:
    """Diagonal lift for the Toeplitz operator, by bisection on Cholesky success.

    Returns ``(gamma, lambda_min_estimate)``.  If the unlifted operator
    already factors, gamma is 0.  Otherwise the smallest shift s making
    the banded Cholesky succeed equals |lambda_min| up to the bisection
    tolerance, and gamma = s * (1 + gamma_margin).
    """
    op = ToeplitzOperator(taps, order, expansion)
    ab = op.banded()
    pivot_floor = pivot_floor_factor * float(np.max(np.abs(op.taps)))
    if _try_factor(ab, 0.0, pivot_floor) is not None:
        return 0.0, 0.0
    hi = float(np.sum(np.abs(op.taps))) + pivot_floor
    for _ in range(64):
        if _try_factor(ab, hi, pivot_floor) is not None:
            break
        hi *= 2.0
    else:
        raise FactorizationError("no diagonal shift renders the operator positive definite")
    lo = 0.0
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (hi + lo)
        if _try_factor(ab, mid, pivot_floor) is not None:
            hi = mid
        else:
            lo = mid
    return hi * (1.0 + gamma_margin), -hi


def cholesky_banded(op: ToeplitzOperator) -> np.ndarray:
    """Upper banded Cholesky factor of op, in the same banded storage.

    Raises
    ------
    FactorizationError
        If a pivot fails, which signals that gamma is too small.
    """
    fact = _try_factor(op.banded(), 0.0,
                       PIVOT_FLOOR_FACTOR * float(np.max(np.abs(op.taps))))
    if fact is None:
        raise FactorizationError(
            f"banded Cholesky failed at gamma = {op.gamma!r}; enlarge the margin")
    return fact


def factor_column(fact: np.ndarray, j: int) -> np.ndarray:
    """Dense column j of a banded upper factor (matrix rows j-N+1 .. j)."""
    n = fact.shape[0]
    lo = max(0, n - 1 - j)
    return fact[lo:, j]


def extract_min_phase(fact: np.ndarray, op: ToeplitzOperator) -> MinPhaseWeights:
    """Read the excitation out of the factor's symmetry-point column.

    Applying the factor to a Kronecker delta with the 1 at row Q+N-1
    selects the column holding (c_{N-1}, ..., c_1, c_0) in matrix rows
    Q .. Q+N-1; the 2Q entries outside that window are purged.  The sign
    is normalized so that sum(c) > 0.
    """
    n, q = op.order, op.expansion
    jc = q + n - 1
    col_aug = np.zeros(op.dim)
    col_aug[jc - n + 1:jc + 1] = factor_column(fact, jc)
    window = col_aug[q:q + n]
    purged = np.concatenate([col_aug[:q], col_aug[q + n:]])
    peak = float(np.max(np.abs(window)))
    purge_residual = float(np.max(np.abs(purged))) / peak if peak > 0.0 else 0.0
    c = window[::-1].copy()
    if c.sum() < 0.0:
        c = -c
    return MinPhaseWeights(c=c, gamma_used=op.gamma, q_used=q,
                           purge_residual=purge_residual)


def verify_factorization(weights: MinPhaseWeights, taps) -> np.ndarray:
    """Residual vector autocorrelation(c) - g, gamma removed from the center."""
    taps = np.asarray(taps, float)
    residual = autocorrelation(weights.c) - taps
    center = (len(taps) - 1) // 2
    residual[center] -= weights.gamma_used
    return residual


def refine_newton(c_init, taps, gamma: float, *,
                  tol: float = 1e-13, max_iter: int = 40) -> tuple[np.ndarray, bool]:
    """Newton polish of the factorization equations.

    Solves sum_k c_k c_{k+m} = g[N-1+m] + gamma*[m=0] for m = 0..N-1 with
    a damped Newton iteration started at ``c_init``.  Returns the refined
    vector and True on success; on divergence or a singular Jacobian the
    starting vector is returned unchanged with False.

    Iteration continues past ``tol`` until the residual stops improving:
    an ill-conditioned Jacobian (clustered zeros) amplifies a residual at
    tol into a much larger coefficient error, so the extra steps to the
    machine floor are what make the coefficients themselves accurate.
    """
    taps = np.asarray(taps, float)
    c = np.asarray(c_init, float).copy()
    n = len(c)
    target = taps[n - 1:].copy()
    target[0] += gamma

    def residual(v):
        return np.correlate(v, v, mode="full")[n - 1:] - target

    r = residual(c)
    norm = float(np.max(np.abs(r)))
    for _ in range(max_iter):
        jac = np.zeros((n, n))
        for m in range(n):
            for j in range(n):
                if j + m < n:
                    jac[m, j] += c[j + m]
                if j - m >= 0:
                    jac[m, j] += c[j - m]
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            break
        scale = 1.0
        for _ in range(12):
            trial = c + scale * step
            r_t = residual(trial)
            norm_t = float(np.max(np.abs(r_t)))
            if norm_t < norm and np.all(np.isfinite(r_t)):
                c, r, norm = trial, r_t, norm_t
                break
            scale *= 0.5
        else:
            break
    if norm <= tol:
        return c, True
    return np.asarray(c_init, float), False


def spectral_factorize(taps, *,
                       expansion_factor: int = DEFAULT_EXPANSION_FACTOR,
                       gamma_margin: float = DEFAULT_GAMMA_MARGIN,
                       newton: bool = False,
                       gamma_floor: float = 0.0,
                       gamma_rel_tol: float = 1e-6
                       ) -> tuple[MinPhaseWeights, FactorizationDiagnostics]:
    """Full pipeline: lift, factor, extract, optionally polish, verify.

    ``expansion_factor`` sets Q = expansion_factor * N, floored at
    MIN_EXPANSION: the extraction error decays like r^(2Q) with r the
    largest zero radius, so tiny arrays still need Q in the hundreds
    when a zero sits near 0.95.  The optional Newton polish tightens the
    autocorrelation residual toward machine precision; if it diverges,
    the unrefined extraction is kept and flagged in the diagnostics.

    ``gamma_floor`` is for callers that know the symbol minimum of g
    analytically (an equiripple prototype dips to exactly -delta_stop):
    the bisection estimates the finite section's lowest eigenvalue,
    which approaches that minimum only as Q grows, and an under-lifted
    symbol has no real spectral factor, leaving zeros stranded outside
    the unit circle.
    """
    taps = np.asarray(taps, float)
    order = (len(taps) + 1) // 2
    expansion = max(expansion_factor * order, MIN_EXPANSION)
    gamma, lam = find_gamma(taps, order, expansion,
                            gamma_margin=gamma_margin, rel_tol=gamma_rel_tol)
    if gamma_floor > 0.0:
        gamma = max(gamma, gamma_floor * (1.0 + gamma_margin))
    op = ToeplitzOperator(taps, order, expansion, gamma)
    fact = None
    for _ in range(4):
        try:
            fact = cholesky_banded(op)
            break
        except FactorizationError:
            op = replace(op, gamma=op.gamma * (1.0 + 10.0 * gamma_margin))
    if fact is None:
        raise FactorizationError("diagonal lift failed to stabilize the factorization")

    weights = extract_min_phase(fact, op)
    if weights.purge_residual > PURGE_WARN_TOL:
        import warnings
        warnings.warn(f"purge residual {weights.purge_residual:.3e} exceeds "
                      f"{PURGE_WARN_TOL:g}; expansion Q = {op.expansion} looks too small",
                      RuntimeWarning, stacklevel=2)
    if newton:
        c_ref, ok = refine_newton(weights.c, taps, op.gamma)
        weights = replace(weights, c=c_ref if ok else weights.c, refined=ok)

    residual = verify_factorization(weights, taps)
    diag = FactorizationDiagnostics(
        gamma=op.gamma, lambda_min_estimate=lam,
        autocorr_residual=float(np.max(np.abs(residual))),
        purge_residual=weights.purge_residual,
        expansion=op.expansion, refined=weights.refined)
    return weights, diag
