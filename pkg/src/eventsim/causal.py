"""Causal prescriptions for where an arm's event history ends.

The event label a detector assigns to its photon is the shell time
accumulated along the beam path.  Two prescriptions for the accumulation
endpoint are implemented:

* ``BENNETT``: each arm accumulates to its own detection event.  delta_t is
  then exactly the geometric mismatch difference of the full paths.
* ``KENT``: an arm stops accumulating as soon as its beam enters the future
  light cone of the *other* arm's detection event.  For space-like separated
  detections neither beam can enter the other cone before its own detection,
  so the two prescriptions coincide exactly.  When the detections become
  time-like separated (e.g. one beam is held on the ground long enough),
  the early detection's cone swallows the held beam's remaining path and the
  predicted decoherence collapses back to the standard (coherent) value.

Light-cone tests use the outgoing/ingoing null phase coordinates
``u = t - X(x)`` and ``v = t + X(x)`` with X the tortoise-like phase from
:mod:`eventsim.spacetime`.  Along any forward beam path both u and v are
monotone non-decreasing (outgoing leg: u frozen; ingoing leg: v frozen;
hold: both advance at unit rate), so the earliest entry into a cone can be
found leg by leg.

A beam segment that runs exactly *on* the boundary of the other detection's
cone (frozen coordinate equal to the cone's threshold) is counted as not
having entered: entry requires the frozen coordinate to clear the threshold
by EDGE_TOL.  This keeps the degenerate-but-common configuration "both
detections null separated" (mirror, beamsplitter and ground detector at one
radius) deterministic instead of at the mercy of ~1e-9 m floating-point
noise on Earth-scale coordinates, and it makes Kent agree with Bennett
through the space-like side of the boundary, which is the physically
mandated limit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .commutator import quotient_closed_form
from .spacetime import (
    ArmPath,
    DeltaMismatch,
    ExperimentGeometry,
    HoldLeg,
    arm_path,
    backtrack_origins,
    invert_tortoise,
    make_hold_leg,
    make_null_leg,
    tortoise_phase,
)
from .units import BodySpec, DomainError

__all__ = [
    "CausalPrescription",
    "DetectionEvents",
    "effective_endpoint",
    "cone_entry_time",
    "delta_t_causal",
    "arm2_path_with_hold",
    "CausalScanPoint",
    "causal_scan",
]

# Frozen-coordinate clearance (metres of geometric time) required to count a
# null leg as strictly inside a cone; see the module docstring.
EDGE_TOL = 1e-6


class CausalPrescription(enum.Enum):
    BENNETT = "bennett"
    KENT = "kent"


@dataclass(frozen=True)
class DetectionEvents:
    """The two detection events, with phase-space radii.

    ``x_1``/``x_2`` are the tortoise phase values X(detector radius), which
    is what the null-coordinate cone tests consume.
    """

    t_d1: float
    t_d2: float
    x_1: float
    x_2: float

    @classmethod
    def from_geometry(cls, geom: ExperimentGeometry, body: BodySpec) -> "DetectionEvents":
        return cls(
            t_d1=geom.t_d1,
            t_d2=geom.t_d2,
            x_1=tortoise_phase(geom.x_d1, body),
            x_2=tortoise_phase(geom.x_d2, body),
        )


def effective_endpoint(events: DetectionEvents) -> float:
    """Closed-form Kent endpoint for arm 1's history.

    If detection 2 satisfies ``x_2 + t_d2 >= x_1 + t_d1`` the outgoing beam
    of arm 1 never meets its future cone before detection and the endpoint
    is ``t_d1`` itself; otherwise it is the cone-crossing time

        (t_d1 + t_d2 + x_2 - x_1) / 2,

    the moment the outgoing leg (constant ``u = t_d1 - x_1``) reaches
    ``v = t_d2 + x_2``.  :func:`delta_t_causal` reproduces this value
    whenever the generic leg-walk finds the entry on arm 1's outgoing leg.
    """
    if events.x_2 + events.t_d2 >= events.x_1 + events.t_d1:
        return events.t_d1
    return 0.5 * (events.t_d1 + events.t_d2 + events.x_2 - events.x_1)


def cone_entry_time(
    path: ArmPath, t_event: float, x_event: float, body: BodySpec
) -> float | None:
    """Earliest time the path enters the future light cone of an event.

    Parameters
    ----------
    t_event, x_event : float
        Coordinate time and tortoise phase value X(radius) of the cone's
        apex event.
    Returns
    -------
    float or None
        Entry coordinate time, or None if the path ends (strictly) outside
        the cone.  Entry exactly at a path's end time counts as no entry
        (truncating there would be a no-op).
    """
    u_e = t_event - x_event
    v_e = t_event + x_event
    for leg in path.legs:
        if isinstance(leg, HoldLeg):
            x_h = tortoise_phase(leg.radius, body)
            candidate = max(leg.t_start, u_e + x_h, v_e - x_h)
            if candidate < leg.t_end:
                return candidate
            continue
        phase_start = tortoise_phase(leg.r_start, body)
        u_start = leg.t_start - phase_start
        v_start = leg.t_start + phase_start
        if leg.direction >= 0:
            # outgoing: u frozen, v advances at rate 2
            if u_start > u_e + EDGE_TOL:
                candidate = max(leg.t_start, leg.t_start + 0.5 * (v_e - v_start))
                if candidate < leg.t_end:
                    return candidate
        else:
            # ingoing: v frozen, u advances at rate 2
            if v_start > v_e + EDGE_TOL:
                candidate = max(leg.t_start, leg.t_start + 0.5 * (u_e - u_start))
                if candidate < leg.t_end:
                    return candidate
    return None


def _kent_endpoints(
    path_1: ArmPath,
    path_2: ArmPath,
    events: DetectionEvents,
    body: BodySpec,
) -> tuple[float, float]:
    entry_1 = cone_entry_time(path_1, events.t_d2, events.x_2, body)
    entry_2 = cone_entry_time(path_2, events.t_d1, events.x_1, body)
    end_1 = path_1.t_end if entry_1 is None else min(path_1.t_end, entry_1)
    end_2 = path_2.t_end if entry_2 is None else min(path_2.t_end, entry_2)
    return end_1, end_2


def delta_t_causal(
    geom: ExperimentGeometry,
    body: BodySpec,
    prescription: CausalPrescription,
) -> DeltaMismatch:
    """Arm mismatch under the chosen causal prescription.

    BENNETT integrates each arm's mismatch over its full reconstructed path
    (identical to ``delta_t_exact(..., method="quadrature")``).  KENT first
    truncates each path at its entry into the other detection's future
    light cone; at most one arm is ever truncated (the detections cannot
    each lie in the other's future).
    """
    path_1 = arm_path(1, geom, body)
    path_2 = arm_path(2, geom, body)
    if prescription is CausalPrescription.BENNETT:
        end_1, end_2 = path_1.t_end, path_2.t_end
    elif prescription is CausalPrescription.KENT:
        events = DetectionEvents.from_geometry(geom, body)
        end_1, end_2 = _kent_endpoints(path_1, path_2, events, body)
    else:
        raise DomainError(f"unknown causal prescription {prescription!r}")
    return DeltaMismatch(
        delta_t=path_1.mismatch(body, until=end_1)
        - path_2.mismatch(body, until=end_2)
    )


def arm2_path_with_hold(
    geom: ExperimentGeometry, body: BodySpec, delay: float
) -> ArmPath:
    """Arm 2's path with the beam held at the beamsplitter for ``delay``.

    The hold happens after reflection, before the outgoing transmission, so
    detection 2 shifts to ``t_d2 + delay``.  ``delay`` is a coordinate-time
    interval in metres.
    """
    origins = backtrack_origins(geom, body)
    r_origin = invert_tortoise(origins.x_i2, body)
    ingoing = make_null_leg(geom.t_i, r_origin, geom.x_p, body)
    if delay == 0.0:
        outgoing = make_null_leg(ingoing.t_end, geom.x_p, geom.x_d2, body)
        return ArmPath(legs=(ingoing, outgoing))
    hold = make_hold_leg(ingoing.t_end, geom.x_p, delay)
    outgoing = make_null_leg(hold.t_end, geom.x_p, geom.x_d2, body)
    return ArmPath(legs=(ingoing, hold, outgoing))


@dataclass(frozen=True)
class CausalScanPoint:
    """One row of a delay scan: both prescriptions' predictions."""

    delay: float
    ratio_kent: float
    ratio_bennett: float
    delta_t_kent: float
    delta_t_bennett: float


def causal_scan(
    geom: ExperimentGeometry,
    body: BodySpec,
    delays: list[float],
    coherence_length: float,
) -> list[CausalScanPoint]:
    """Sweep ground-hold delays on arm 2 and compare the prescriptions.

    For each delay the arm 2 beam is held at the beamsplitter (see
    :func:`arm2_path_with_hold`), pushing detection 2 later by the delay.
    Once the delay exceeds ``2 * (X(x_p) - X(x_m))`` the held beam falls
    into the future light cone of detection 1 and the KENT mismatch
    collapses to the ground-element residue (ratio returns to ~1), while
    BENNETT only picks up the hold's own static mismatch
    (~``M/x_p * delay``, a 1e-10-level ratio drift for lab-scale delays).

    ``coherence_length`` is the source d_t used to convert mismatches to
    coincidence-visibility ratios exp(-delta_t**2 / (2 d_t**2)).
    """
    if coherence_length <= 0.0:
        raise DomainError(
            f"coherence length must be positive, got {coherence_length}"
        )
    path_1 = arm_path(1, geom, body)
    x_1 = tortoise_phase(geom.x_d1, body)
    x_2 = tortoise_phase(geom.x_d2, body)
    mismatch_1_full = path_1.mismatch(body)
    points = []
    for delay in delays:
        if delay < 0.0:
            raise DomainError(f"delays must be non-negative, got {delay}")
        path_2 = arm2_path_with_hold(geom, body, delay)
        events = DetectionEvents(
            t_d1=geom.t_d1, t_d2=path_2.t_end, x_1=x_1, x_2=x_2
        )
        dt_bennett = mismatch_1_full - path_2.mismatch(body)
        end_1, end_2 = _kent_endpoints(path_1, path_2, events, body)
        dt_kent = path_1.mismatch(body, until=end_1) - path_2.mismatch(
            body, until=end_2
        )
        points.append(
            CausalScanPoint(
                delay=delay,
                ratio_kent=quotient_closed_form(
                    coherence_length, DeltaMismatch(dt_kent)
                ).visibility,
                ratio_bennett=quotient_closed_form(
                    coherence_length, DeltaMismatch(dt_bennett)
                ).visibility,
                delta_t_kent=dt_kent,
                delta_t_bennett=dt_bennett,
            )
        )
    return points
