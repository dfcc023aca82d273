"""Geometric-unit conversions and gravitating-body parameters.

All downstream physics works in geometric units with G = c = 1, where every
quantity is a length in metres: a mass ``M`` stands for ``G*M_kg/c**2`` and a
time interval for ``c*t``.  SI values appear only at the package boundary
(CLI flags, config files) and are converted here.
"""

from __future__ import annotations

from dataclasses import dataclass

C_LIGHT = 299792458.0  # m/s, exact by definition
G_NEWTON = 6.674e-11  # m^3 kg^-1 s^-2

EARTH_MASS_KG = 5.972e24
EARTH_RADIUS_M = 6.38e6  # m, ground-station radius used in the satellite scenario


class DomainError(ValueError):
    """A physical precondition was violated (bad mass, radius, geometry...)."""


def mass_kg_to_geometric(mass_kg: float) -> float:
    """Convert a mass in kilograms to its geometric length G*m/c**2 in metres.

    Earth comes out near 4.4e-3 m, the scale that sets every gravitational
    time mismatch in this package.
    """
    if mass_kg < 0.0:
        raise DomainError(f"mass must be non-negative, got {mass_kg} kg")
    return G_NEWTON * mass_kg / C_LIGHT**2


def time_to_geometric(seconds: float) -> float:
    """Convert a time interval in seconds to metres (multiply by c)."""
    return C_LIGHT * seconds


def geometric_to_time(length_m: float) -> float:
    """Convert a geometric time in metres back to seconds (divide by c)."""
    return length_m / C_LIGHT


@dataclass(frozen=True)
class BodySpec:
    """A spherically symmetric gravitating body in geometric units.

    Parameters
    ----------
    mass_geometric : float
        Body mass as a length, G*m/c**2, in metres.  Zero gives flat
        spacetime and is fully supported (useful as an exactness check).
    reference_radius : float
        Radial coordinate of the ground station / lowest apparatus element,
        in metres.  Must lie outside the horizon radius ``2*mass_geometric``.
    """

    mass_geometric: float
    reference_radius: float

    def __post_init__(self) -> None:
        if self.mass_geometric < 0.0:
            raise DomainError(
                f"mass_geometric must be non-negative, got {self.mass_geometric}"
            )
        if self.reference_radius <= 2.0 * self.mass_geometric:
            raise DomainError(
                "reference_radius must exceed the horizon radius "
                f"2M = {2.0 * self.mass_geometric}, got {self.reference_radius}"
            )

    @classmethod
    def from_si(cls, mass_kg: float, radius_m: float) -> "BodySpec":
        """Build a body from SI mass (kg) and radius (m)."""
        return cls(mass_kg_to_geometric(mass_kg), radius_m)


#: Earth with the two-figure geometric mass conventionally quoted for this
#: experiment (the full SI conversion of EARTH_MASS_KG differs by under 1%;
#: use BodySpec.from_si for that).
EARTH = BodySpec(mass_geometric=4.4e-3, reference_radius=EARTH_RADIUS_M)
