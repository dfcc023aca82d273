"""Shared fixtures: reference body and a constructive geometry generator."""

from __future__ import annotations

import numpy as np
import pytest

from eventsim import EARTH, BodySpec, ExperimentGeometry
from eventsim.spacetime import tortoise_phase


@pytest.fixture
def earth() -> BodySpec:
    """Rounded Earth constants (M = 4.4e-3 m, r_e = 6.38e6 m)."""
    return EARTH


def random_geometry(
    rng: np.random.Generator,
    body: BodySpec,
    *,
    max_turn_offset: float = 2e5,
    max_detector_offset: float = 1e6,
) -> ExperimentGeometry:
    """Draw a random but always-consistent two-arm geometry.

    Radii and the emission time are drawn first; detection times are then
    derived from the null phase spans, so every generated geometry has an
    exactly reconstructible two-leg path per arm (same construction as
    ``ground_satellite_geometry``, with independent per-arm elements).
    """
    r_e = body.reference_radius
    mirror = r_e + rng.uniform(0.0, max_turn_offset)
    pbs = r_e + rng.uniform(0.0, max_turn_offset)
    source = max(mirror, pbs) + rng.uniform(1.0, 1e5)
    d1 = mirror + rng.uniform(0.0, max_detector_offset)
    d2 = pbs + rng.uniform(0.0, max_detector_offset)
    t_i = rng.uniform(-1e4, 1e4)
    phase = {r: tortoise_phase(r, body) for r in (mirror, pbs, source, d1, d2)}
    t_d1 = t_i + (phase[source] - phase[mirror]) + (phase[d1] - phase[mirror])
    t_d2 = t_i + (phase[source] - phase[pbs]) + (phase[d2] - phase[pbs])
    return ExperimentGeometry(
        x_m=mirror, x_p=pbs, x_d1=d1, x_d2=d2, t_d1=t_d1, t_d2=t_d2, t_i=t_i
    )


@pytest.fixture
def geometry_factory():
    """The constructive generator, as a fixture for tests that want it."""
    return random_geometry
