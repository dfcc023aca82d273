"""Radial light propagation near a Schwarzschild body, in the weak field.

Model
-----
Both interferometer arms are radial: light leaves a common source, runs
inward to a turning element (a mirror for arm 1, a beamsplitter for arm 2),
reflects, and runs outward to a detector.  In Schwarzschild coordinates a
radial null ray obeys ``dt = +-dx / (1 - 2M/x)``, so coordinate time along a
ray advances by the span of the tortoise-like phase

    X(x) = x + 2 M ln x

between its endpoints.  This weak-field form (``ln x`` rather than
``ln(x - 2M)``) is used consistently for every coordinate-time and phase
bookkeeping in the package; for Earth parameters the difference from the
exact tortoise coordinate is ~1e-11 m, far below any tolerance used here.

A shell observer at radius x measures proper time ``sqrt(1 - 2M/x) dt``, so
along a null leg the shell time advances by ``dx / sqrt(1 - 2M/x)``.  The
per-leg difference between coordinate span and shell span (the "mismatch")
is the quantity gravity imprints on the photon pair: each arm's detector
assigns the photon an emission-to-detection shell time tau_j, and the
observable is

    delta_t = (t_d1 - tau_1) - (t_d2 - tau_2)
            = mismatch(arm 1) - mismatch(arm 2).

The mismatch form on the right is how the package evaluates delta_t: every
term is of order M, so no precision is lost to the ~1e7 m cancellations the
naive left-hand form would incur.

Floating-point care
-------------------
Weak-field small quantities are evaluated with expm1/log1p throughout:

* ``(1 - 2M/x)**-0.5 - 1``  ->  ``expm1(-0.5 * log1p(-2M/x))``
* ``1 - sqrt(1 - 2M/x)``    ->  ``-expm1(0.5 * log1p(-2M/x))``

and the closed-form delta_t groups logarithms into ``log1p`` of radius
ratios.  For ``M = 0`` every mismatch is exactly 0.0 and delta_t is exactly
zero, with no quadrature residue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from scipy.integrate import quad

from .units import BodySpec, DomainError

__all__ = [
    "tortoise_phase",
    "invert_tortoise",
    "shell_time_segment",
    "null_leg_mismatch",
    "static_mismatch",
    "ExperimentGeometry",
    "BacktrackedOrigins",
    "DeltaMismatch",
    "backtrack_origins",
    "propagation_phase",
    "NullLeg",
    "HoldLeg",
    "ArmPath",
    "make_null_leg",
    "make_hold_leg",
    "arm_path",
    "tau_arm",
    "delta_t_exact",
    "delta_t_approx",
    "ground_satellite_geometry",
]

# Adaptive quadrature tolerances for shell-time excess integrals.  The
# integrands are smooth and of order M/x, so these are comfortably reached.
_QUAD_EPSABS = 1e-15
_QUAD_EPSREL = 1e-12


def tortoise_phase(x: float, body: BodySpec) -> float:
    """Phase coordinate X(x) = x + 2 M ln x of a radius, in metres.

    Coordinate time along a radial null ray advances by the difference of
    this quantity between the ray's endpoints.

    Raises
    ------
    DomainError
        If ``x`` does not lie outside the horizon (``x <= 2M`` or
        ``x <= 0``).
    """
    m = body.mass_geometric
    if x <= 0.0 or x <= 2.0 * m:
        raise DomainError(f"radius {x} must lie outside the horizon 2M = {2.0 * m}")
    if m == 0.0:
        return x
    return x + 2.0 * m * math.log(x)


def invert_tortoise(value: float, body: BodySpec) -> float:
    """Radius x solving ``x + 2 M ln x = value``, to 1e-12 m.

    Newton iteration starting from ``value`` itself; in the weak field the
    correction is ~2M ln x so two or three steps converge.  For ``M = 0``
    this is the identity.
    """
    m = body.mass_geometric
    if m == 0.0:
        if value <= 0.0:
            raise DomainError(f"phase value {value} has no positive radius")
        return value
    r = max(value, 4.0 * m)
    for _ in range(60):
        f = r + 2.0 * m * math.log(r) - value
        step = f / (1.0 + 2.0 * m / r)
        r_next = r - step
        if r_next <= 2.0 * m:
            r_next = 0.5 * (r + 2.0 * m)
        if abs(r_next - r) <= 1e-13 * max(1.0, abs(r_next)):
            return r_next
        r = r_next
    raise DomainError(f"tortoise inversion did not converge for value {value}")


def _shell_excess_integrand(r: float, m: float) -> float:
    # (1 - 2M/r)**-0.5 - 1, stable in the weak field
    return math.expm1(-0.5 * math.log1p(-2.0 * m / r))


def _shell_excess(r_lo: float, r_hi: float, body: BodySpec) -> float:
    """Integral of (1-2M/r)^{-1/2} - 1 over [r_lo, r_hi] (r_lo <= r_hi)."""
    if r_lo == r_hi or body.mass_geometric == 0.0:
        return 0.0
    value, _ = quad(
        _shell_excess_integrand,
        r_lo,
        r_hi,
        args=(body.mass_geometric,),
        epsabs=_QUAD_EPSABS,
        epsrel=_QUAD_EPSREL,
        limit=200,
    )
    return value


def shell_time_segment(
    r_from: float, r_to: float, body: BodySpec, method: str = "quadrature"
) -> float:
    """Signed shell time along a radial null leg from ``r_from`` to ``r_to``.

    Returns ``integral of dr / sqrt(1 - 2M/r)`` with the orientation sign of
    the leg (positive when ``r_to > r_from``).  The elapsed shell time of a
    traversal is the absolute value.

    Parameters
    ----------
    method : {"quadrature", "weak_field"}
        "quadrature" integrates the exact integrand adaptively (abs tol
        1e-15 m); "weak_field" uses the first-order closed form
        ``(r_to - r_from) + M ln(r_to / r_from)``.
    """
    lo, hi = min(r_from, r_to), max(r_from, r_to)
    _require_outside_horizon(lo, body)
    sign = 1.0 if r_to >= r_from else -1.0
    if method == "quadrature":
        span = (hi - lo) + _shell_excess(lo, hi, body)
    elif method == "weak_field":
        m = body.mass_geometric
        span = (hi - lo) + (m * math.log(hi / lo) if m != 0.0 and lo != hi else 0.0)
    else:
        raise DomainError(f"unknown shell-time method {method!r}")
    return sign * span


def null_leg_mismatch(
    r_a: float, r_b: float, body: BodySpec, method: str = "quadrature"
) -> float:
    """Coordinate-time span minus shell-time span of a null leg, >= 0.

    This is the gravitational mismatch a single traversal of [r_a, r_b]
    contributes: ``2 M ln(hi/lo) - integral[(1-2M/r)^{-1/2} - 1]``.  It is
    orientation independent and O(M), so it is computed without forming
    either large span.
    """
    lo, hi = min(r_a, r_b), max(r_a, r_b)
    _require_outside_horizon(lo, body)
    m = body.mass_geometric
    if m == 0.0 or lo == hi:
        return 0.0
    coord_excess = 2.0 * m * math.log(hi / lo)
    if method == "quadrature":
        shell_excess = _shell_excess(lo, hi, body)
    elif method == "weak_field":
        shell_excess = m * math.log(hi / lo)
    else:
        raise DomainError(f"unknown mismatch method {method!r}")
    return coord_excess - shell_excess


def static_mismatch(radius: float, duration: float, body: BodySpec) -> float:
    """Mismatch accumulated by holding at ``radius`` for a coordinate time.

    A held beam ages by ``sqrt(1 - 2M/x) * duration`` of shell time, so the
    mismatch is ``(1 - sqrt(1 - 2M/x)) * duration``.
    """
    _require_outside_horizon(radius, body)
    if duration < 0.0:
        raise DomainError(f"hold duration must be non-negative, got {duration}")
    m = body.mass_geometric
    if m == 0.0:
        return 0.0
    return -math.expm1(0.5 * math.log1p(-2.0 * m / radius)) * duration


def _require_outside_horizon(radius: float, body: BodySpec) -> None:
    if radius <= 0.0 or radius <= 2.0 * body.mass_geometric:
        raise DomainError(
            f"radius {radius} must lie outside the horizon "
            f"2M = {2.0 * body.mass_geometric}"
        )


@dataclass(frozen=True)
class ExperimentGeometry:
    """Radii and coordinate times defining a two-arm radial interferometer.

    Attributes
    ----------
    x_m : float
        Turning (mirror) radius of arm 1, metres.
    x_p : float
        Turning (beamsplitter) radius of arm 2, metres.
    x_d1, x_d2 : float
        Detector radii of arms 1 and 2, metres.
    t_d1, t_d2 : float
        Detection coordinate times, geometric metres.
    t_i : float
        Common emission coordinate time.  Physical observables do not depend
        on it when both arms share an emission event; it fixes where the
        backtracked origins land.
    """

    x_m: float
    x_p: float
    x_d1: float
    x_d2: float
    t_d1: float
    t_d2: float
    t_i: float = 0.0

    def validate(self, body: BodySpec) -> None:
        """Raise DomainError if any element sits inside the horizon or a
        detection precedes emission."""
        for name in ("x_m", "x_p", "x_d1", "x_d2"):
            _require_outside_horizon(getattr(self, name), body)
        if self.t_d1 <= self.t_i or self.t_d2 <= self.t_i:
            raise DomainError(
                "detections must occur after emission: "
                f"t_i={self.t_i}, t_d1={self.t_d1}, t_d2={self.t_d2}"
            )


@dataclass(frozen=True)
class BacktrackedOrigins:
    """Phase values X(origin radius) of the two arms' emission points."""

    x_i1: float
    x_i2: float


@dataclass(frozen=True)
class DeltaMismatch:
    """Detector-frame time mismatch between the two arms, in metres.

    Positive when arm 1 has accumulated more gravitational mismatch than
    arm 2.  In the ground/satellite scenario (satellite on arm 2) the exact
    value is negative, ``M ln(x_d1 / x_d2)``; the quoted first-order
    magnitude is ``M h / r_e``.
    """

    delta_t: float


def backtrack_origins(geom: ExperimentGeometry, body: BodySpec) -> BacktrackedOrigins:
    """Trace each arm back from its detection to the emission time.

    Running a reflected radial ray backwards from detection ``(t_dj, x_dj)``
    through its turning radius to the emission time ``t_i`` gives an origin
    whose phase value is the closed form

        x_ij = -t_i + 2 X(turn_j) + t_dj - X(x_dj).

    The returned numbers are these phase values X(origin radius), not the
    radii themselves; apply :func:`invert_tortoise` for the radius.  The two
    coincide only at M = 0 (they differ by 2 M ln radius, ~0.3 m at Earth
    scale, which matters at every tolerance used downstream).

    Raises
    ------
    DomainError
        If an origin is non-positive or falls below its arm's turning
        radius (the geometry then admits no reflected path).
    """
    geom.validate(body)
    out = []
    for turn, x_d, t_d, arm in (
        (geom.x_m, geom.x_d1, geom.t_d1, 1),
        (geom.x_p, geom.x_d2, geom.t_d2, 2),
    ):
        phase_turn = tortoise_phase(turn, body)
        value = -geom.t_i + 2.0 * phase_turn + t_d - tortoise_phase(x_d, body)
        if value <= 0.0:
            raise DomainError(
                f"arm {arm} backtracked origin is non-positive ({value}); "
                "detection happens too soon after emission"
            )
        if value < phase_turn - 1e-9:
            raise DomainError(
                f"arm {arm} backtracked origin (phase {value}) lies below its "
                f"turning radius (phase {phase_turn}); no reflected path exists"
            )
        out.append(value)
    return BacktrackedOrigins(x_i1=out[0], x_i2=out[1])


def propagation_phase(arm: int, geom: ExperimentGeometry, body: BodySpec) -> float:
    """Accumulated phase argument of the reflected wave of one arm.

    The outgoing (reflected) component of arm j evaluated at its detection
    event carries the argument ``2 X(turn_j) + t_dj - X(x_dj)``; for M = 0
    this reduces to ``2 x_turn + t_dj - x_dj``.
    """
    turn, x_d, t_d = _arm_elements(arm, geom)
    return 2.0 * tortoise_phase(turn, body) + t_d - tortoise_phase(x_d, body)


def _arm_elements(arm: int, geom: ExperimentGeometry) -> tuple[float, float, float]:
    if arm == 1:
        return geom.x_m, geom.x_d1, geom.t_d1
    if arm == 2:
        return geom.x_p, geom.x_d2, geom.t_d2
    raise DomainError(f"arm must be 1 or 2, got {arm!r}")


# ---------------------------------------------------------------------------
# Piecewise arm paths.  A path is a contiguous sequence of radial null legs
# and static holds; the causal layer truncates them at light-cone entry
# times, so mismatch accumulation must support partial traversal.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NullLeg:
    """One radial null leg, ingoing or outgoing, between two radii."""

    t_start: float
    t_end: float
    r_start: float
    r_end: float

    @property
    def direction(self) -> int:
        """+1 outgoing, -1 ingoing, 0 for a zero-length leg."""
        if self.r_end > self.r_start:
            return 1
        if self.r_end < self.r_start:
            return -1
        return 0


@dataclass(frozen=True)
class HoldLeg:
    """A beam held at fixed radius for a coordinate-time interval."""

    t_start: float
    t_end: float
    radius: float

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start


PathLeg = Union[NullLeg, HoldLeg]


def make_null_leg(t_start: float, r_start: float, r_end: float, body: BodySpec) -> NullLeg:
    """Null leg starting at ``t_start``; its end time follows from the
    phase span |X(r_end) - X(r_start)|."""
    span = abs(tortoise_phase(r_end, body) - tortoise_phase(r_start, body))
    return NullLeg(t_start=t_start, t_end=t_start + span, r_start=r_start, r_end=r_end)


def make_hold_leg(t_start: float, radius: float, duration: float) -> HoldLeg:
    if duration < 0.0:
        raise DomainError(f"hold duration must be non-negative, got {duration}")
    return HoldLeg(t_start=t_start, t_end=t_start + duration, radius=radius)


@dataclass(frozen=True)
class ArmPath:
    """A contiguous piecewise beam path (null legs and holds)."""

    legs: tuple[PathLeg, ...]

    def __post_init__(self) -> None:
        if not self.legs:
            raise DomainError("an arm path needs at least one leg")
        for prev, cur in zip(self.legs, self.legs[1:]):
            if abs(cur.t_start - prev.t_end) > 1e-6:
                raise DomainError(
                    f"path legs are not contiguous: leg ends at {prev.t_end}, "
                    f"next starts at {cur.t_start}"
                )

    @property
    def t_start(self) -> float:
        return self.legs[0].t_start

    @property
    def t_end(self) -> float:
        return self.legs[-1].t_end

    def radius_at(self, t: float, body: BodySpec) -> float:
        """Beam radius at coordinate time t (clamped to the path's span)."""
        t = min(max(t, self.t_start), self.t_end)
        for leg in self.legs:
            if t <= leg.t_end or leg is self.legs[-1]:
                if isinstance(leg, HoldLeg):
                    return leg.radius
                phase = tortoise_phase(leg.r_start, body) + leg.direction * (
                    t - leg.t_start
                )
                return invert_tortoise(phase, body)
        raise AssertionError("unreachable")

    def mismatch(
        self, body: BodySpec, until: float | None = None, method: str = "quadrature"
    ) -> float:
        """Coordinate-minus-shell time accumulated along the path.

        ``until`` truncates accumulation at that coordinate time (used by
        the causal prescriptions); None means the full path.
        """
        stop = self.t_end if until is None else min(until, self.t_end)
        total = 0.0
        for leg in self.legs:
            if stop <= leg.t_start:
                break
            if isinstance(leg, HoldLeg):
                total += static_mismatch(
                    leg.radius, min(stop, leg.t_end) - leg.t_start, body
                )
                continue
            if stop >= leg.t_end:
                r_far = leg.r_end
            else:
                phase = tortoise_phase(leg.r_start, body) + leg.direction * (
                    stop - leg.t_start
                )
                r_far = invert_tortoise(phase, body)
            total += null_leg_mismatch(leg.r_start, r_far, body, method=method)
        return total

    def shell_time(self, body: BodySpec, method: str = "quadrature") -> float:
        """Total shell time elapsed along the path (a large number; prefer
        :meth:`mismatch` for differences)."""
        total = 0.0
        for leg in self.legs:
            if isinstance(leg, HoldLeg):
                rate = math.exp(0.5 * math.log1p(-2.0 * body.mass_geometric / leg.radius))
                total += rate * leg.duration
            else:
                total += abs(
                    shell_time_segment(leg.r_start, leg.r_end, body, method=method)
                )
        return total


def arm_path(arm: int, geom: ExperimentGeometry, body: BodySpec) -> ArmPath:
    """Reconstruct the two-leg beam path of one arm from the geometry.

    The origin radius comes from inverting the backtracked phase value, so
    the path's end time lands exactly on the arm's detection time.
    """
    origins = backtrack_origins(geom, body)
    phase_origin = origins.x_i1 if arm == 1 else origins.x_i2
    turn, x_d, t_d = _arm_elements(arm, geom)
    r_origin = invert_tortoise(phase_origin, body)
    ingoing = make_null_leg(geom.t_i, r_origin, turn, body)
    outgoing = make_null_leg(ingoing.t_end, turn, x_d, body)
    if abs(outgoing.t_end - t_d) > 1e-6:
        raise DomainError(
            f"arm {arm} path reaches the detector at t={outgoing.t_end}, "
            f"but detection is at t={t_d}; geometry is inconsistent"
        )
    return ArmPath(legs=(ingoing, outgoing))


def tau_arm(
    arm: int, geom: ExperimentGeometry, body: BodySpec, method: str = "quadrature"
) -> float:
    """Shell time a detector assigns to one arm, emission to detection.

    This is the large (~arm length) number; the observable mismatch
    ``delta_t`` is computed separately from O(M) terms, and recovering it as
    ``(t_d1 - tau_1) - (t_d2 - tau_2)`` loses ~1e-9 m to cancellation.
    """
    return arm_path(arm, geom, body).shell_time(body, method=method)


def delta_t_exact(
    geom: ExperimentGeometry, body: BodySpec, method: str = "quadrature"
) -> DeltaMismatch:
    """Detector-frame mismatch between the arms.

    Parameters
    ----------
    method : {"quadrature", "log"}
        "quadrature" accumulates each arm's coordinate-minus-shell mismatch
        along its reconstructed path with adaptive quadrature.  "log" uses
        the weak-field closed form

            delta_t = M ln[ (x_d1 * x_i1 * x_p^2) / (x_d2 * x_i2 * x_m^2) ]

        with the backtracked origin phase values x_ij; logarithms are
        grouped into log1p of radius ratios to keep full precision when the
        arms nearly coincide.  The two methods agree to ~1e-9 relative for
        Earth-scale geometries (the closed form drops O(M^2) terms).
    """
    if method == "quadrature":
        m1 = arm_path(1, geom, body).mismatch(body)
        m2 = arm_path(2, geom, body).mismatch(body)
        return DeltaMismatch(delta_t=m1 - m2)
    if method == "log":
        m = body.mass_geometric
        if m == 0.0:
            backtrack_origins(geom, body)  # still validate the geometry
            return DeltaMismatch(delta_t=0.0)
        origins = backtrack_origins(geom, body)
        log_sum = (
            math.log1p((geom.x_d1 - geom.x_d2) / geom.x_d2)
            + math.log1p((origins.x_i1 - origins.x_i2) / origins.x_i2)
            + 2.0 * math.log1p((geom.x_p - geom.x_m) / geom.x_m)
        )
        return DeltaMismatch(delta_t=m * log_sum)
    raise DomainError(f"unknown delta_t method {method!r}")


def delta_t_approx(height: float, body: BodySpec) -> DeltaMismatch:
    """First-order mismatch magnitude M * h / r_e for a satellite at height h.

    Positive by convention.  The exact signed value for the standard
    scenario (everything else at the reference radius, satellite on arm 2)
    is ``M ln(r_e / (r_e + h))``, which is negative; compare magnitudes
    against this estimate.  The two agree to 1e-3 relative only for
    h <~ r_e / 500 (about 13 km for Earth); the fractional gap grows as
    h / (2 r_e).
    """
    if height < 0.0:
        raise DomainError(f"satellite height must be non-negative, got {height}")
    r_e = body.reference_radius
    _require_outside_horizon(r_e + height, body)
    return DeltaMismatch(delta_t=body.mass_geometric * height / r_e)


def ground_satellite_geometry(
    body: BodySpec,
    satellite_height: float,
    *,
    mirror_offset: float = 0.0,
    pbs_offset: float = 0.0,
    detector1_offset: float = 0.0,
    source_offset: float | None = None,
    emission_time: float = 0.0,
) -> ExperimentGeometry:
    """Standard scenario: ground interferometer, satellite detector on arm 2.

    All offsets are radial distances above ``body.reference_radius``.  Both
    beams leave one source event at ``emission_time``; detection times follow
    from the null phase spans, so the backtracked origins of the two arms
    coincide by construction (which is what makes observables independent of
    the emission time).

    Parameters
    ----------
    satellite_height : float
        Arm 2 detector altitude above the reference radius.
    mirror_offset, pbs_offset : float
        Altitudes of the arm 1 mirror and arm 2 beamsplitter.
    detector1_offset : float
        Altitude of the arm 1 (ground) detector.
    source_offset : float, optional
        Source altitude; defaults to one metre above the higher of the two
        turning elements (both beams must start at or above their turning
        radius, and a source exactly at mirror and detector height would
        give arm 1 zero flight time).  The observables do not depend on
        this choice: both arms share the emission event, so the extra
        source path cancels between them.
    """
    r_e = body.reference_radius
    if source_offset is None:
        source_offset = max(mirror_offset, pbs_offset) + 1.0
    x_src = r_e + source_offset
    x_m = r_e + mirror_offset
    x_p = r_e + pbs_offset
    x_d1 = r_e + detector1_offset
    x_d2 = r_e + satellite_height
    for radius, name in ((x_src, "source"), (x_m, "mirror"), (x_p, "beamsplitter")):
        _require_outside_horizon(radius, body)
    if x_src < x_m or x_src < x_p:
        raise DomainError(
            "the source must sit at or above both turning elements: "
            f"source={x_src}, mirror={x_m}, beamsplitter={x_p}"
        )
    if x_d1 < x_m or x_d2 < x_p:
        raise DomainError(
            "each detector must sit at or above its arm's turning element; "
            f"got detector1={x_d1} vs mirror={x_m}, detector2={x_d2} vs "
            f"beamsplitter={x_p}"
        )
    phase_src = tortoise_phase(x_src, body)
    t_d1 = (
        emission_time
        + (phase_src - tortoise_phase(x_m, body))
        + (tortoise_phase(x_d1, body) - tortoise_phase(x_m, body))
    )
    t_d2 = (
        emission_time
        + (phase_src - tortoise_phase(x_p, body))
        + (tortoise_phase(x_d2, body) - tortoise_phase(x_p, body))
    )
    geom = ExperimentGeometry(
        x_m=x_m, x_p=x_p, x_d1=x_d1, x_d2=x_d2, t_d1=t_d1, t_d2=t_d2, t_i=emission_time
    )
    geom.validate(body)
    return geom
