"""Same-time commutator quotient of event-localized detection operators.

Detection operators built over both field frequency and an internal
frequency axis ("event operators") inherit an extra label: the shell time
the detector assigns to the photon's history.  The equal-position commutator
of two such operators factorizes into the ordinary single-frequency overlap
of their profiles times a quotient that depends only on the assigned-time
difference:

    q(dt) = integral |G H| exp(i W dt) dW  /  integral |G H| dW

with G the detection profile, H the source profile, and dt the difference
of assigned times (here: the gravitational mismatch delta_t between arms).
|q| <= 1 always, with equality exactly at dt = 0; for a flat G and Gaussian
H of width d_t,

    q(dt) = exp(i c dt) * exp(-dt**2 / (4 d_t**2)),

so coincidence visibilities shrink by |q|**2 = exp(-dt**2 / (2 d_t**2)).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .modes import (
    DEFAULT_NODES,
    SpectralMode,
    eval_amplitude,
    gauss_legendre,
    product_window,
)
from .spacetime import DeltaMismatch
from .units import DomainError

__all__ = ["EventQuotient", "quotient", "quotient_closed_form"]


@dataclass(frozen=True)
class EventQuotient:
    """Commutator quotient at a fixed assigned-time difference."""

    value: complex
    delta_t: float

    @property
    def magnitude(self) -> float:
        return abs(self.value)

    @property
    def visibility(self) -> float:
        """|q|**2, the factor multiplying coincidence rates."""
        return abs(self.value) ** 2


def quotient(
    detector: SpectralMode,
    source: SpectralMode,
    delta: DeltaMismatch,
    n_nodes: int = DEFAULT_NODES,
) -> EventQuotient:
    """Evaluate the commutator quotient for a detector/source profile pair.

    Fixed Gauss-Legendre rule (``n_nodes`` nodes) over a +-12 combined-width
    window around the profiles' combined center; at the default 256 nodes
    the phase factor is resolved to machine precision for
    ``|delta_t| <= ~10 coherence lengths``.  At ``delta_t = 0`` numerator and
    denominator are the same sum, so the result is exactly 1.0.

    Raises
    ------
    DomainError
        If both profiles are flat (no normalizable product).
    """
    dt = delta.delta_t
    lo, hi = product_window((detector, source))
    nodes, weights = gauss_legendre(lo, hi, n_nodes)
    absprod = np.abs(eval_amplitude(detector, nodes)) * np.abs(
        eval_amplitude(source, nodes)
    )
    denominator = float(np.sum(weights * absprod))
    if denominator <= 0.0:
        raise DomainError("profile product integrates to zero; no quotient exists")
    numerator = complex(np.sum(weights * absprod * np.exp(1j * nodes * dt)))
    return EventQuotient(value=numerator / denominator, delta_t=dt)


def quotient_closed_form(
    coherence_length: float, delta: DeltaMismatch, center: float = 0.0
) -> EventQuotient:
    """Closed form of the quotient for a flat detector and Gaussian source.

    ``exp(i * center * delta_t) * exp(-delta_t**2 / (4 * coherence_length**2))``.
    """
    if coherence_length <= 0.0:
        raise DomainError(
            f"coherence length must be positive, got {coherence_length}"
        )
    dt = delta.delta_t
    value = cmath.exp(1j * center * dt) * np.exp(-(dt**2) / (4.0 * coherence_length**2))
    return EventQuotient(value=complex(value), delta_t=dt)
