"""Laminar-flow relations for rectangular microchannels.

All quantities are SI: lengths in m, dynamic viscosity in Pa*s, volumetric
flow in m^3/s, pressure in Pa. Callers working in bench units (mm, ml/hr)
convert at the boundary; see the netlist layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "FluidProperties",
    "ChannelGeometry",
    "hydraulic_diameter",
    "fluidic_resistance",
    "pressure_drop",
    "mean_velocity",
]


def _require_positive_finite(name: str, value: float) -> None:
    if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class FluidProperties:
    """Newtonian carrier fluid, characterised by dynamic viscosity alone."""

    viscosity: float  # Pa*s

    def __post_init__(self) -> None:
        _require_positive_finite("viscosity", self.viscosity)


@dataclass(frozen=True)
class ChannelGeometry:
    """Rectangular duct of constant cross-section.

    length runs along the flow axis; width and depth span the cross-section.
    Validation is eager: a constructed geometry is always usable.
    """

    length: float  # m
    width: float  # m
    depth: float  # m

    def __post_init__(self) -> None:
        _require_positive_finite("length", self.length)
        _require_positive_finite("width", self.width)
        _require_positive_finite("depth", self.depth)

    @property
    def cross_section_area(self) -> float:
        """Cross-section area w*d in m^2."""
        return self.width * self.depth

    @property
    def wetted_perimeter(self) -> float:
        """Perimeter 2*(w+d) of the cross-section in m."""
        return 2.0 * (self.width + self.depth)


def hydraulic_diameter(geom: ChannelGeometry) -> float:
    """Effective duct diameter: 4 * area / wetted perimeter."""
    return 4.0 * geom.cross_section_area / geom.wetted_perimeter


def fluidic_resistance(geom: ChannelGeometry, fluid: FluidProperties) -> float:
    """Pressure-to-flow proportionality 32*mu*L / (D_h^2 * A) in Pa*s/m^3.

    Linear in channel length and in viscosity; always finite and positive
    for a valid geometry.
    """
    d_h = hydraulic_diameter(geom)
    return 32.0 * fluid.viscosity * geom.length / (d_h * d_h * geom.cross_section_area)


def pressure_drop(geom: ChannelGeometry, fluid: FluidProperties, flow: float) -> float:
    """Laminar pressure differential Q*R along the channel, signed like Q.

    Equivalent to 32 * U_avg * mu * L / D_h^2 with U_avg = Q/A.
    """
    if not math.isfinite(flow):
        raise ValueError(f"flow must be finite, got {flow!r}")
    return flow * fluidic_resistance(geom, fluid)


def mean_velocity(geom: ChannelGeometry, flow: float) -> float:
    """Cross-section averaged axial velocity Q/A, signed like Q."""
    if not math.isfinite(flow):
        raise ValueError(f"flow must be finite, got {flow!r}")
    return flow / geom.cross_section_area
