"""Causal prescriptions: endpoint rule, cone entry, and the hold-delay scan."""

from __future__ import annotations

import math

import numpy as np
import pytest

from eventsim import (
    CausalPrescription,
    DetectionEvents,
    DomainError,
    arm_path,
    arm2_path_with_hold,
    causal_scan,
    cone_entry_time,
    delta_t_causal,
    delta_t_exact,
    effective_endpoint,
    ground_satellite_geometry,
    static_mismatch,
    tortoise_phase,
)

from conftest import random_geometry

D_COHERENCE = 9e-3


# ---------------------------------------------------------------------------
# endpoint rule
# ---------------------------------------------------------------------------


def test_effective_endpoint_no_truncation_branch():
    events = DetectionEvents(t_d1=0.0, t_d2=5.0, x_1=1.0, x_2=10.0)
    assert effective_endpoint(events) == 0.0


def test_effective_endpoint_truncation_branch():
    events = DetectionEvents(t_d1=0.0, t_d2=5.0, x_1=10.0, x_2=1.0)
    assert effective_endpoint(events) == -2.0


@pytest.mark.parametrize("seed", [3, 4, 5])
def test_effective_endpoint_continuous_at_cone_boundary(seed):
    """Both branch formulas agree where the branch condition flips.

    Coordinates are dyadic rationals so the boundary is hit exactly instead
    of to within rounding; the two branches must then coincide to 1e-12.
    A small perturbation of t_d2 may move the endpoint by at most half of it.
    """
    rng = np.random.default_rng(seed)
    for _ in range(20):
        t_d1 = float(rng.integers(-51200, 51200)) / 1024.0
        x_1 = float(rng.integers(1024, 102400)) / 1024.0
        x_2 = float(rng.integers(1024, 102400)) / 1024.0
        t_d2 = t_d1 + x_1 - x_2  # exact in floats for dyadic inputs
        events = DetectionEvents(t_d1=t_d1, t_d2=t_d2, x_1=x_1, x_2=x_2)
        crossing = 0.5 * (t_d1 + t_d2 + x_2 - x_1)
        assert abs(effective_endpoint(events) - crossing) <= 1e-12
        assert abs(effective_endpoint(events) - t_d1) <= 1e-12
        eps = 1e-7
        inside = DetectionEvents(t_d1=t_d1, t_d2=t_d2 - eps, x_1=x_1, x_2=x_2)
        outside = DetectionEvents(t_d1=t_d1, t_d2=t_d2 + eps, x_1=x_1, x_2=x_2)
        assert abs(effective_endpoint(inside) - t_d1) <= eps
        assert effective_endpoint(outside) == t_d1


def test_detection_events_from_geometry_use_phase_values(earth):
    geom = ground_satellite_geometry(earth, 5e5)
    events = DetectionEvents.from_geometry(geom, earth)
    assert events.x_1 == tortoise_phase(geom.x_d1, earth)
    assert events.x_2 == tortoise_phase(geom.x_d2, earth)
    assert events.t_d1 == geom.t_d1 and events.t_d2 == geom.t_d2


# ---------------------------------------------------------------------------
# prescriptions on plain geometries
# ---------------------------------------------------------------------------


def test_bennett_equals_full_mismatch(earth):
    geom = ground_satellite_geometry(earth, 5e5)
    assert (
        delta_t_causal(geom, earth, CausalPrescription.BENNETT).delta_t
        == delta_t_exact(geom, earth, method="quadrature").delta_t
    )


def test_kent_equals_bennett_for_spacelike_detections(earth):
    """Space-like separated detections: no beam can reach the other cone,
    so the prescriptions must coincide bit for bit."""
    rng = np.random.default_rng(21)
    checked = 0
    while checked < 12:
        geom = random_geometry(rng, earth)
        events = DetectionEvents.from_geometry(geom, earth)
        separation = abs(events.t_d2 - events.t_d1)
        distance = abs(events.x_2 - events.x_1)
        if separation >= distance - 1.0:  # keep a metre of space-like margin
            continue
        kent = delta_t_causal(geom, earth, CausalPrescription.KENT).delta_t
        bennett = delta_t_causal(geom, earth, CausalPrescription.BENNETT).delta_t
        assert kent == bennett
        checked += 1


def test_kent_truncation_matches_endpoint_formula(earth):
    """A geometry whose arm 1 beam does cross detection 2's cone: the generic
    leg walk must land on the closed-form crossing time, and the truncated
    mismatch must match accumulating to that time."""
    geom = ground_satellite_geometry(
        earth, 450.0, mirror_offset=0.0, pbs_offset=400.0, detector1_offset=1.2e6
    )
    events = DetectionEvents.from_geometry(geom, earth)
    endpoint = effective_endpoint(events)
    assert endpoint < geom.t_d1  # truncation really happens
    path_1 = arm_path(1, geom, earth)
    entry = cone_entry_time(path_1, events.t_d2, events.x_2, earth)
    assert entry is not None
    assert math.isclose(entry, endpoint, rel_tol=0.0, abs_tol=1e-6)
    kent = delta_t_causal(geom, earth, CausalPrescription.KENT).delta_t
    path_2 = arm_path(2, geom, earth)
    want = path_1.mismatch(earth, until=endpoint) - path_2.mismatch(earth)
    assert math.isclose(kent, want, rel_tol=1e-12)
    bennett = delta_t_causal(geom, earth, CausalPrescription.BENNETT).delta_t
    assert kent != bennett


def test_cone_entry_none_when_apex_in_far_future(earth):
    geom = ground_satellite_geometry(earth, 5e5)
    path = arm_path(1, geom, earth)
    apex_t = geom.t_d2 + 1e9
    assert cone_entry_time(path, apex_t, tortoise_phase(geom.x_d2, earth), earth) is None


def test_unknown_prescription_rejected(earth):
    geom = ground_satellite_geometry(earth, 5e5)
    with pytest.raises(DomainError):
        delta_t_causal(geom, earth, "bennett")  # not the enum


# ---------------------------------------------------------------------------
# hold paths and the delay scan
# ---------------------------------------------------------------------------


def test_arm2_hold_path_structure(earth):
    geom = ground_satellite_geometry(earth, 5e5, pbs_offset=50.0)
    plain = arm2_path_with_hold(geom, earth, 0.0)
    assert len(plain.legs) == 2
    assert abs(plain.t_end - geom.t_d2) < 1e-6
    held = arm2_path_with_hold(geom, earth, 120.0)
    assert len(held.legs) == 3
    assert math.isclose(held.t_end, geom.t_d2 + 120.0, rel_tol=1e-12)
    assert held.legs[1].radius == geom.x_p
    with pytest.raises(DomainError):
        arm2_path_with_hold(geom, earth, -1.0)


def test_causal_scan_rejects_negative_delay(earth):
    geom = ground_satellite_geometry(earth, 5e5, pbs_offset=50.0)
    with pytest.raises(DomainError):
        causal_scan(geom, earth, [-2.0], D_COHERENCE)
    with pytest.raises(DomainError):
        causal_scan(geom, earth, [0.0], 0.0)


def test_causal_scan_transition_at_two_way_gap(earth):
    """Kent snaps to the coherent prediction once the hold exceeds the
    two-way phase distance between the beamsplitter and the mirror."""
    geom = ground_satellite_geometry(earth, 5e5, pbs_offset=50.0)
    t_c = 2.0 * (tortoise_phase(geom.x_p, earth) - tortoise_phase(geom.x_m, earth))
    assert math.isclose(t_c, 100.0, rel_tol=1e-6)
    below, above = t_c - 2.0, t_c + 2.0
    pts = causal_scan(geom, earth, [0.0, below, above, 3.0 * t_c], D_COHERENCE)
    assert pts[1].ratio_kent == pts[1].ratio_bennett
    assert pts[2].ratio_kent > 0.999999
    assert pts[2].ratio_bennett < 0.9994
    assert abs(1.0 - pts[3].ratio_kent) < 1e-9
    # bennett stays continuous through the transition (the 4 m of extra hold
    # only adds ~1e-8 of static-mismatch drift)
    assert abs(pts[2].ratio_bennett - pts[1].ratio_bennett) < 1e-7


def test_causal_scan_bennett_drift_is_hold_mismatch(earth):
    """Holding at the beamsplitter only adds the static mismatch of the hold
    to the Bennett difference; check against static_mismatch directly."""
    geom = ground_satellite_geometry(earth, 5e5, pbs_offset=50.0)
    delays = [0.0, 75.0, 220.0]
    pts = causal_scan(geom, earth, delays, D_COHERENCE)
    base = pts[0].delta_t_bennett
    for pt in pts[1:]:
        want = base - static_mismatch(geom.x_p, pt.delay, earth)
        assert math.isclose(pt.delta_t_bennett, want, rel_tol=1e-9)


def test_causal_scan_zero_delay_matches_plain_prescriptions(earth):
    geom = ground_satellite_geometry(earth, 5e5, pbs_offset=50.0)
    (pt,) = causal_scan(geom, earth, [0.0], D_COHERENCE)
    assert math.isclose(
        pt.delta_t_bennett,
        delta_t_causal(geom, earth, CausalPrescription.BENNETT).delta_t,
        rel_tol=1e-12,
    )
    assert math.isclose(
        pt.delta_t_kent,
        delta_t_causal(geom, earth, CausalPrescription.KENT).delta_t,
        rel_tol=1e-12,
    )
