"""
Core module - optical coverage, positioning, location management and key agreement
"""
from .coverage import (
    GaussianBeam,
    ReceiverSpec,
    Cell,
    required_launch_power,
    max_cell_radius,
    irradiance_at,
    optimal_beam_radius,
    is_connected,
)
from .positioning import Point2D, UltrasonicReceiver, RangeMeasurement, trilaterate, simulate_ranging
from .location_mgmt import CellGrid, LocationDB, Adjacency, cell_of, vicinity, on_move, locate
from .key_agreement import PublicParams, PasswordDigest, HandshakeSession, run_handshake

__all__ = [
    'GaussianBeam',
    'ReceiverSpec',
    'Cell',
    'required_launch_power',
    'max_cell_radius',
    'irradiance_at',
    'optimal_beam_radius',
    'is_connected',
    'Point2D',
    'UltrasonicReceiver',
    'RangeMeasurement',
    'trilaterate',
    'simulate_ranging',
    'CellGrid',
    'LocationDB',
    'Adjacency',
    'cell_of',
    'vicinity',
    'on_move',
    'locate',
    'PublicParams',
    'PasswordDigest',
    'HandshakeSession',
    'run_handshake',
]
