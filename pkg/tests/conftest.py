"""Shared fixtures and the random minimum-phase oracle.

The oracle draws zeros first and expands the polynomial, so the true
weight vector is known exactly and factorization error can be measured
against it.  Zero placement is stratified: conjugate-pair angles occupy
distinct sectors of (0, pi) and radii distinct rings, keeping the
autocorrelation Jacobian well conditioned.  Without that, near-coincident
zeros make the recovery problem itself ill posed (the rounding of the
autocorrelation alone moves the exact solution by more than the round-trip
tolerance) and the suite would measure conditioning, not the factorizer.
One draw always lands in [0.88, 0.95] so the radius cap is exercised.
"""
import numpy as np
import pytest

from mparray import design1_spec, design2_spec, design3_spec, design_pencil, find_min_order

ORACLE_SEED = 20260814


def make_min_phase(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random length-n real vector with all polynomial zeros inside radius 0.95."""
    m = n - 1
    pairs = m // 2
    zeros = []
    hot = int(rng.integers(0, pairs + (m % 2)))
    for i in range(pairs):
        ang = np.pi * (i + 0.5 + 0.25 * rng.uniform(-1, 1)) / pairs
        ang = min(max(ang, 0.12 * np.pi), 0.88 * np.pi)
        if i == hot:
            r = rng.uniform(0.88, 0.95)
        else:
            r = 0.35 + 0.4 * (i + 0.25 + 0.5 * rng.random()) / pairs
        zeros += [r * np.exp(1j * ang), r * np.exp(-1j * ang)]
    if m % 2:
        r = rng.uniform(0.88, 0.95) if hot == pairs else rng.uniform(0.3, 0.6)
        zeros.append(complex(r if rng.random() < 0.5 else -r))
    c = np.real(np.poly(zeros))
    c = c / np.max(np.abs(c))
    return c if c.sum() > 0 else -c


@pytest.fixture(scope="session")
def oracle_rng():
    return np.random.default_rng(ORACLE_SEED)


@pytest.fixture(scope="session")
def design1():
    return find_min_order(design1_spec())


@pytest.fixture(scope="session")
def design2():
    return find_min_order(design2_spec())


@pytest.fixture(scope="session")
def design3():
    return find_min_order(design3_spec())


@pytest.fixture(scope="session")
def pencil():
    return design_pencil()
