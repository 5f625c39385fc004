"""
NLOS Link - tracked and secured narrow line of sight optical wireless room

Gaussian-beam cell sizing, ultrasonic trilateration, reporting-cell location
management and password-authenticated Diffie-Hellman keying, tied together by
a deterministic tick simulator.
"""
__version__ = "1.0.0"

from nlos_link.errors import NLOSLinkError
from nlos_link.core import (
    GaussianBeam,
    ReceiverSpec,
    Point2D,
    CellGrid,
    LocationDB,
    PublicParams,
    run_handshake,
    trilaterate,
)

__all__ = [
    '__version__',
    'NLOSLinkError',
    'GaussianBeam',
    'ReceiverSpec',
    'Point2D',
    'CellGrid',
    'LocationDB',
    'PublicParams',
    'run_handshake',
    'trilaterate',
]
