"""Spectral profiles of the photon-pair source and the detection modes.

A mode profile is a weight over a one-dimensional frequency-like variable
(either the wavenumber k of the travelling field or the internal frequency
the event operators integrate over).  Two shapes cover everything needed
here:

* ``GAUSSIAN``: amplitude ``(sqrt(2) w / sqrt(pi))**0.5 * exp(-(x-c)**2 w**2)``
  with width parameter ``w`` (the source coherence length d_t, in metres)
  and center ``c``.  Normalized so the squared modulus integrates to one.
* ``FLAT``: constant ``1/sqrt(2*pi)``, the broadband detector idealization.
  Not normalizable on its own; it must always be paired with at least one
  Gaussian factor under an integral.

All quadratures over products of these profiles use a fixed Gauss-Legendre
rule on a window of +-12 combined widths around the combined center, which
is exact to machine precision for the phase factors appearing here (up to
~40 oscillation cycles across the window).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .units import DomainError

__all__ = [
    "ModeKind",
    "SpectralMode",
    "flat_mode",
    "gaussian_mode",
    "eval_amplitude",
    "product_window",
    "gauss_legendre",
    "SqueezingParams",
    "chi_effective",
    "normalized_overlap",
]

DEFAULT_NODES = 256  # Gauss-Legendre nodes for all fixed-rule quadratures
DEFAULT_HALF_WIDTH = 12.0  # window half-width in units of 1/(combined width)


class ModeKind(enum.Enum):
    FLAT = "flat"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class SpectralMode:
    """One spectral profile.

    Attributes
    ----------
    kind : ModeKind
        FLAT or GAUSSIAN.
    center : float
        Center of the Gaussian, in rad/m (ignored for FLAT).
    width : float
        Gaussian width parameter (the coherence length, metres).  Must be
        positive for GAUSSIAN; unused for FLAT.
    """

    kind: ModeKind
    center: float = 0.0
    width: float = 0.0

    def __post_init__(self) -> None:
        if self.kind is ModeKind.GAUSSIAN and self.width <= 0.0:
            raise DomainError(
                f"gaussian mode needs a positive width, got {self.width}"
            )


def flat_mode() -> SpectralMode:
    """Broadband (flat) detector profile."""
    return SpectralMode(kind=ModeKind.FLAT)


def gaussian_mode(width: float, center: float = 0.0) -> SpectralMode:
    """Normalized Gaussian profile with the given width (metres) and center."""
    return SpectralMode(kind=ModeKind.GAUSSIAN, center=center, width=width)


def eval_amplitude(mode: SpectralMode, x):
    """Profile amplitude at ``x`` (scalar or ndarray, returned like ``x``)."""
    x = np.asarray(x, dtype=float)
    if mode.kind is ModeKind.FLAT:
        out = np.full_like(x, 1.0 / math.sqrt(2.0 * math.pi))
    else:
        norm = math.sqrt(math.sqrt(2.0) * mode.width / math.sqrt(math.pi))
        out = norm * np.exp(-((x - mode.center) ** 2) * mode.width**2)
    if out.ndim == 0:
        return float(out)
    return out


def product_window(
    modes: tuple[SpectralMode, ...], half_width_factor: float = DEFAULT_HALF_WIDTH
) -> tuple[float, float]:
    """Integration window covering the product of the given profiles.

    The Gaussian factors multiply into a single Gaussian of width
    ``sqrt(sum w_i**2)`` centered at the precision-weighted mean; the window
    extends ``half_width_factor`` of that combined width's reciprocals to
    each side (tails < exp(-144) at the default).  Flat factors impose no
    constraint.

    Raises
    ------
    DomainError
        If no Gaussian factor is present (the product would not be
        integrable on the line).
    """
    weights = [m.width**2 for m in modes if m.kind is ModeKind.GAUSSIAN]
    centers = [m.center for m in modes if m.kind is ModeKind.GAUSSIAN]
    if not weights:
        raise DomainError("a product of only flat profiles has no finite window")
    total = sum(weights)
    center = sum(c * w for c, w in zip(centers, weights)) / total
    combined_width = math.sqrt(total)
    half = half_width_factor / combined_width
    return center - half, center + half


@lru_cache(maxsize=8)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def gauss_legendre(lo: float, hi: float, n: int = DEFAULT_NODES):
    """Gauss-Legendre nodes and weights mapped onto [lo, hi]."""
    x, w = _leggauss(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


@dataclass(frozen=True)
class SqueezingParams:
    """Source squeezing strength.

    ``chi_max`` is the peak pair amplitude per mode; the model used here
    keeps only terms through one pair per arm, which is trustworthy for
    ``chi_max << 1``.  Values above 0.1 trigger a warning; brute-force
    verification refuses values above 0.2 outright.
    """

    chi_max: float

    def __post_init__(self) -> None:
        if self.chi_max < 0.0:
            raise DomainError(f"chi_max must be non-negative, got {self.chi_max}")
        if self.chi_max > 0.1:
            warnings.warn(
                f"chi_max={self.chi_max} is outside the weak-squeezing regime "
                "(> 0.1); pair-amplitude predictions degrade",
                stacklevel=2,
            )


def _overlap_integral(
    detector: SpectralMode,
    source: SpectralMode,
    offset: float,
    n_nodes: int = DEFAULT_NODES,
) -> complex:
    lo, hi = product_window((detector, source))
    nodes, weights = gauss_legendre(lo, hi, n_nodes)
    integrand = (
        eval_amplitude(detector, nodes)
        * eval_amplitude(source, nodes)
        * np.exp(1j * nodes * offset)
    )
    return complex(np.sum(weights * integrand))


def chi_effective(
    detector: SpectralMode,
    source: SpectralMode,
    offset: float,
    squeezing: SqueezingParams,
    n_nodes: int = DEFAULT_NODES,
) -> complex:
    """Effective pair amplitude seen by a detector at a path offset.

    ``chi_max * integral G(k) H(k) exp(i k * offset) dk``: the detection
    profile G overlapped with the source profile H, dephased by the extra
    path length ``offset`` (metres).  For a flat detector and Gaussian
    source this is a Gaussian in the offset with 1/e half-width
    ``2 * width``.
    """
    return squeezing.chi_max * _overlap_integral(detector, source, offset, n_nodes)


def normalized_overlap(
    detector: SpectralMode,
    source: SpectralMode,
    offset: float,
    n_nodes: int = DEFAULT_NODES,
) -> complex:
    """Overlap integral normalized to 1 at zero offset."""
    return _overlap_integral(detector, source, offset, n_nodes) / _overlap_integral(
        detector, source, 0.0, n_nodes
    )
