"""
Optical Cell Coverage - Gaussian-beam sizing for ceiling VCSEL cells

A ceiling laser with launch power P and floor-plane beam radius W has the
irradiance profile I(rho) = 2P / (pi W^2) * exp(-2 rho^2 / W^2). A cell of
radius r is covered when the irradiance at its periphery still reaches the
receiver sensitivity I_r.

All quantities are SI: watts, meters, watts per square meter.
"""
import math
from dataclasses import dataclass
from typing import Optional

from nlos_link.core.positioning import Point2D
from nlos_link.errors import DomainError

# Relative slack when comparing irradiance with sensitivity at the periphery
PERIPHERY_REL_TOL = 1e-12


@dataclass(frozen=True)
class GaussianBeam:
    """Ceiling transmitter beam"""
    launch_power_P: float        # W
    beam_radius_W: float         # m, at the floor plane

    def __post_init__(self):
        if not self.launch_power_P > 0:
            raise DomainError(f"Launch power must be > 0, got {self.launch_power_P}",
                              argument="launch_power_P", value=self.launch_power_P)
        if not self.beam_radius_W > 0:
            raise DomainError(f"Beam radius must be > 0, got {self.beam_radius_W}",
                              argument="beam_radius_W", value=self.beam_radius_W)


@dataclass(frozen=True)
class ReceiverSpec:
    """Mobile node photodiode receiver"""
    sensitivity_Ir: float                   # W/m², minimum irradiance at the cell periphery
    detector_area: Optional[float] = None   # m², only used to report received power

    def __post_init__(self):
        if not self.sensitivity_Ir > 0:
            raise DomainError(f"Receiver sensitivity must be > 0, got {self.sensitivity_Ir}",
                              argument="sensitivity_Ir", value=self.sensitivity_Ir)
        if self.detector_area is not None and not self.detector_area > 0:
            raise DomainError(f"Detector area must be > 0 when present, got {self.detector_area}",
                              argument="detector_area", value=self.detector_area)


@dataclass(frozen=True)
class Cell:
    """Sub-area disc served by one ceiling transceiver"""
    cell_id: object
    center: Point2D
    radius_r: float

    def __post_init__(self):
        if not self.radius_r > 0:
            raise DomainError(f"Cell radius must be > 0, got {self.radius_r}", argument="radius_r",
                              value=self.radius_r)


def _require_positive(name: str, value: float):
    if not value > 0:
        raise DomainError(f"{name} must be > 0, got {value}", argument=name, value=value)


def _require_non_negative(name: str, value: float):
    if not value >= 0:
        raise DomainError(f"{name} must be >= 0, got {value}", argument=name, value=value)


def required_launch_power(ir: float, w: float, r: float) -> float:
    """
    Launch power needed so the irradiance at radius r equals ir.

    P = (I_r * pi * W^2) / (2 * exp(-2 r^2 / W^2))

    Args:
        ir: Receiver sensitivity I_r in W/m²
        w: Beam radius W in meters
        r: Cell radius in meters

    Returns:
        Launch power in watts

    Raises:
        DomainError: If ir or w is not positive, or r is negative
    """
    _require_positive("ir", ir)
    _require_positive("w", w)
    _require_non_negative("r", r)
    return (ir * math.pi * w ** 2) / (2.0 * math.exp(-2.0 * r ** 2 / w ** 2))


def max_cell_radius(p: float, ir: float) -> float:
    """
    Largest cell radius a launch power can cover, r = sqrt(P / (I_r * pi * e)).

    Holds when the beam radius is chosen optimally for that cell (W = r * sqrt(2)).

    Raises:
        DomainError: If p is negative or ir is not positive
    """
    _require_non_negative("p", p)
    _require_positive("ir", ir)
    return math.sqrt(p / (ir * math.pi * math.e))


def irradiance_at(beam: GaussianBeam, rho: float) -> float:
    """
    Irradiance of the beam at radial offset rho from its axis, in W/m².

    Raises:
        DomainError: If rho is negative
    """
    _require_non_negative("rho", rho)
    w = beam.beam_radius_W
    return 2.0 * beam.launch_power_P / (math.pi * w ** 2) * math.exp(-2.0 * rho ** 2 / w ** 2)


def optimal_beam_radius(r: float) -> float:
    """Beam radius minimizing the launch power for a cell of radius r (W = r * sqrt(2))."""
    _require_non_negative("r", r)
    return r * math.sqrt(2.0)


def is_connected(beam: GaussianBeam, receiver: ReceiverSpec, rho: float) -> bool:
    """True when the irradiance at rho reaches the receiver sensitivity; the periphery counts."""
    irradiance = irradiance_at(beam, rho)
    if irradiance >= receiver.sensitivity_Ir:
        return True
    return math.isclose(irradiance, receiver.sensitivity_Ir, rel_tol=PERIPHERY_REL_TOL)


def received_power(beam: GaussianBeam, receiver: ReceiverSpec, rho: float) -> Optional[float]:
    """Optical power collected by the detector at rho, or None without a detector area."""
    if receiver.detector_area is None:
        return None
    return irradiance_at(beam, rho) * receiver.detector_area


def link_margin_db(beam: GaussianBeam, receiver: ReceiverSpec, rho: float) -> float:
    """Irradiance headroom over the sensitivity in dB; -inf once the irradiance underflows."""
    irradiance = irradiance_at(beam, rho)
    if irradiance <= 0:
        return float('-inf')
    return 10.0 * math.log10(irradiance / receiver.sensitivity_Ir)


def ceiling_beam_for_cell(cell_size: float, receiver: ReceiverSpec) -> GaussianBeam:
    """
    Beam for one square grid cell: covers the cell's circumscribed circle with minimal power.

    Every point of the square lies within cell_size / sqrt(2) of its center.
    """
    _require_positive("cell_size", cell_size)
    circumradius = cell_size / math.sqrt(2.0)
    w = optimal_beam_radius(circumradius)
    return GaussianBeam(
        launch_power_P=required_launch_power(receiver.sensitivity_Ir, w, circumradius),
        beam_radius_W=w,
    )
