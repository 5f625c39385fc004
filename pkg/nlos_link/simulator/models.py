"""
Data models for the simulation
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from nlos_link.core.location_mgmt import CellId
from nlos_link.core.positioning import Point2D


class EventKind(str, Enum):
    HEADER = "Header"
    POSITION_ESTIMATED = "PositionEstimated"
    CELL_ENTERED = "CellEntered"
    LOCATION_UPDATED = "LocationUpdated"
    SEARCH_PERFORMED = "SearchPerformed"
    LINK_ESTABLISHED = "LinkEstablished"
    HANDSHAKE_COMPLETED = "HandshakeCompleted"
    MESSAGE_DELIVERED = "MessageDelivered"
    LINK_LOST = "LinkLost"


@dataclass
class SimEvent:
    """One trace record"""
    tick: int
    seq: int                       # position within the tick
    kind: EventKind
    node: Optional[str]
    payload: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'tick': self.tick,
            'seq': self.seq,
            'kind': self.kind.value,
            'node': self.node,
            'payload': self.payload,
        }


@dataclass
class MobileNode:
    """Mobile user with a photodiode receiver and an ultrasonic emitter"""
    node_id: str
    true_position: Point2D
    waypoints: List[Point2D]
    speed: float                   # m/s
    password: bytes
    register_on_attach: bool = True
    loop: bool = False
    next_waypoint: int = 0
    estimate: Optional[Point2D] = None      # last successful trilateration, clamped to the room
    cell: Optional[CellId] = None           # last known cell
    connected: bool = False
    appeared: bool = False                  # first cell entry already handled

    def advance(self, dt: float) -> Point2D:
        """Move speed * dt along the waypoint list, carrying leftover distance past reached waypoints."""
        budget = self.speed * dt
        position = self.true_position
        while budget > 0 and self.waypoints:
            if self.next_waypoint >= len(self.waypoints):
                if not self.loop:
                    break
                self.next_waypoint = 0
            target = self.waypoints[self.next_waypoint]
            gap = position.distance_to(target)
            if gap <= budget:
                position = target
                budget -= gap
                self.next_waypoint += 1
                if gap == 0 and self.loop and len(set(self.waypoints)) == 1:
                    break
                continue
            fraction = budget / gap
            position = Point2D(position.x + (target.x - position.x) * fraction,
                               position.y + (target.y - position.y) * fraction)
            budget = 0.0
        self.true_position = position
        return position


def round_floats(value: Any, digits: int = 12) -> Any:
    """Round every float in a JSON-like structure to `digits` significant digits."""
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return float(f"{value:.{digits}g}")
    if isinstance(value, dict):
        return {k: round_floats(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(v, digits) for v in value]
    return value
