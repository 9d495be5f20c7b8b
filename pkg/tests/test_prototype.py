import math

import numpy as np
import pytest

from mparray import (BandSpec, DesignSpec, InfeasibleSpecError, PrototypeSpec,
                     SearchLimits, amplitude_response, design_prototype,
                     design1_spec, design2_spec, find_min_order, pencil_spec,
                     to_prototype_spec)
from mparray import PrototypeBand
from mparray.prototype import OrderSearchError


def test_squared_pattern_tolerances_for_design1():
    pspec = to_prototype_spec(design1_spec())
    # stop: half the squared linear ceiling; pass: what the ripple leaves
    assert pspec.delta_stop == pytest.approx(3.1547867224009644e-06, rel=1e-12)
    assert pspec.delta_pass == pytest.approx(0.028365738849448957, rel=1e-12)
    by_target = {b.desired: b for b in pspec.bands}
    assert by_target[1.0].weight == pytest.approx(1.0 / pspec.delta_pass, rel=1e-12)
    assert by_target[0.0].weight == pytest.approx(1.0 / pspec.delta_stop, rel=1e-12)


def test_tolerance_mapping_monotone_in_ripple():
    def delta_pass(ripple_db):
        bands = (BandSpec(0.0, 1.0, "pass", ripple_db=ripple_db),
                 BandSpec(2.0, math.pi, "stop", max_level_db=-40.0))
        return to_prototype_spec(DesignSpec(0.5, bands)).delta_pass

    values = [delta_pass(r) for r in (0.1, 0.25, 0.5, 1.0)]
    assert all(lo < hi for lo, hi in zip(values, values[1:]))


def test_overtight_ripple_is_infeasible():
    bands = (BandSpec(0.0, 1.0, "pass", ripple_db=0.01),
             BandSpec(2.0, math.pi, "stop", max_level_db=-3.0))
    with pytest.raises(InfeasibleSpecError, match="no squared-pattern"):
        to_prototype_spec(DesignSpec(0.5, bands))


def test_pencil_spec_cannot_use_squared_route():
    with pytest.raises(InfeasibleSpecError, match="degenerate pass band"):
        to_prototype_spec(pencil_spec())


def test_spec_without_stop_band_is_rejected():
    spec = DesignSpec(0.5, (BandSpec(0.0, math.pi, "pass", ripple_db=0.5),))
    with pytest.raises(InfeasibleSpecError, match="stop band"):
        to_prototype_spec(spec)


def test_single_element_prototype_is_unity():
    pspec = PrototypeSpec(bands=(PrototypeBand(0.0, math.pi, 1.0, 1.0),),
                          delta_pass=1.0, delta_stop=1.0)
    proto = design_prototype(pspec, 1)
    assert proto.taps == pytest.approx([1.0], abs=1e-14)


def test_design1_prototype_respects_stop_budget():
    pspec = to_prototype_spec(design1_spec())
    proto = design_prototype(pspec, 6)
    assert len(proto.taps) == 11
    stop = next(b for b in proto.bands if b.desired == 0.0)
    u = np.linspace(stop.u_lo, stop.u_hi, 20001)
    assert np.max(np.abs(amplitude_response(proto, u))) <= pspec.delta_stop * (1.0 + 1e-6)


def test_design2_prototype_balances_band_errors():
    pspec = to_prototype_spec(design2_spec())
    proto = design_prototype(pspec, 14)
    assert len(proto.taps) == 27
    assert proto.achieved_delta[0] == pytest.approx(proto.achieved_delta[1], rel=1e-6)


def test_minimal_order_search_design1(design1):
    assert design1.order == 6
    assert not design1.metrics.violations
    assert design1.report.min_phase
    # minimality witness: the trial one element short violated a band
    assert design1.report.witness
    assert all(lv.margin_db >= 0.0 for lv in design1.metrics.bands)


def test_search_is_deterministic(design1):
    again = find_min_order(design1_spec())
    assert again.order == design1.order
    assert np.array_equal(again.weights.c, design1.weights.c)


def test_search_reports_best_attempt_when_capped():
    with pytest.raises(OrderSearchError) as info:
        find_min_order(design1_spec(), SearchLimits(max_order=3))
    best = info.value.best
    assert best is not None
    assert best.order <= 3
    assert best.violations


def test_feasibility_is_judged_on_original_bands(design2):
    spec = design2_spec()
    for lv, band in zip(design2.metrics.bands, spec.bands):
        assert lv.u_lo == pytest.approx(band.u_lo)
        assert lv.u_hi == pytest.approx(band.u_hi)
        assert lv.margin_db >= 0.0
