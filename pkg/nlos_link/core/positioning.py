"""
Ultrasonic Positioning - time-of-flight ranging and radical-axis trilateration

Three ceiling receivers time an ultrasonic burst from the mobile node. Each
time of flight gives a distance, each distance a circle around its receiver.
Subtracting the circle equations pairwise gives the radical axes, and the
common point of the axes is the node position.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from nlos_link.errors import DegenerateGeometryError, DomainError

logger = logging.getLogger(__name__)

DEFAULT_SPEED_OF_SOUND = 343.0     # m/s, dry air at 20 °C
COLLINEAR_AREA_EPS = 1e-9          # m², below this the centers count as collinear
CONCURRENCY_TOLERANCE = 1e-6       # m, allowed miss of the third radical axis


@dataclass(frozen=True)
class Point2D:
    """Planar point in meters"""
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError(f"Point coordinates must be finite, got ({self.x}, {self.y})",
                              argument="point", value=(self.x, self.y))

    def distance_to(self, other: "Point2D") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class UltrasonicReceiver:
    """Ceiling-mounted ultrasonic receiver at a known position"""
    receiver_id: str
    position: Point2D


@dataclass(frozen=True)
class RangeMeasurement:
    """Time of flight of one ultrasonic burst to one receiver"""
    receiver_id: str
    tof: float                   # seconds

    def __post_init__(self):
        if self.tof < 0:
            raise DomainError(f"Time of flight must be >= 0, got {self.tof}", argument="tof", value=self.tof)


@dataclass(frozen=True)
class Circle:
    center: Point2D
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise DomainError(f"Circle radius must be >= 0, got {self.radius}", argument="radius",
                              value=self.radius)

    def power_of(self, point: Point2D) -> float:
        """Power of a point with respect to this circle"""
        return (point.x - self.center.x) ** 2 + (point.y - self.center.y) ** 2 - self.radius ** 2


@dataclass(frozen=True)
class RadicalLine:
    """The line a*x + b*y = c"""
    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise DegenerateGeometryError("Radical line has zero normal vector", reason="zero_normal")

    def residual(self, point: Point2D) -> float:
        """Signed perpendicular distance (meters) from the point to the line"""
        return (self.a * point.x + self.b * point.y - self.c) / math.hypot(self.a, self.b)


def triangle_area(p1: Point2D, p2: Point2D, p3: Point2D) -> float:
    """Unsigned area of the triangle p1 p2 p3"""
    return abs((p2.x - p1.x) * (p3.y - p1.y) - (p3.x - p1.x) * (p2.y - p1.y)) / 2.0


def tof_to_distance(tof: float, speed: float = DEFAULT_SPEED_OF_SOUND) -> float:
    """
    Convert an ultrasonic time of flight to a distance.

    Args:
        tof: Time of flight in seconds
        speed: Propagation speed in m/s

    Returns:
        Distance in meters

    Raises:
        DomainError: If tof is negative or speed is not positive
    """
    if tof < 0:
        raise DomainError(f"Time of flight must be >= 0, got {tof}", argument="tof", value=tof)
    if speed <= 0:
        raise DomainError(f"Speed must be > 0, got {speed}", argument="speed", value=speed)
    return tof * speed


def radical_axis(c1: Circle, c2: Circle) -> RadicalLine:
    """
    Subtract the equations of two circles.

    (x - x1)² + (y - y1)² = d1² minus (x - x2)² + (y - y2)² = d2² leaves
    2(x2 - x1)x + 2(y2 - y1)y = (d1² - d2²) + (x2² - x1²) + (y2² - y1²).

    Raises:
        DegenerateGeometryError: If the centers coincide
    """
    x1, y1 = c1.center.x, c1.center.y
    x2, y2 = c2.center.x, c2.center.y
    if x1 == x2 and y1 == y2:
        raise DegenerateGeometryError(
            f"Coincident circle centers at ({x1}, {y1}) have no radical axis", reason="coincident")
    return RadicalLine(
        a=2.0 * (x2 - x1),
        b=2.0 * (y2 - y1),
        c=(c1.radius ** 2 - c2.radius ** 2) + (x2 ** 2 - x1 ** 2) + (y2 ** 2 - y1 ** 2),
    )


def radical_center(c1: Circle, c2: Circle, c3: Circle) -> Point2D:
    """
    Solve two radical axes for their common point and check the third passes through it.

    The three axes are linearly dependent (their equations sum to zero), so only
    axis(1,2) and axis(1,3) enter the solve. The work is done in a frame whose
    origin is the first center.

    Raises:
        DegenerateGeometryError: If the centers are coincident or collinear
    """
    area = triangle_area(c1.center, c2.center, c3.center)
    if area < COLLINEAR_AREA_EPS:
        raise DegenerateGeometryError(
            f"Circle centers are collinear (triangle area {area:.3e} m²); radical axes are parallel",
            reason="collinear")

    origin = c1.center
    shifted = [
        Circle(Point2D(c.center.x - origin.x, c.center.y - origin.y), c.radius)
        for c in (c1, c2, c3)
    ]
    first = radical_axis(shifted[0], shifted[1])
    second = radical_axis(shifted[0], shifted[2])

    matrix = np.array([[first.a, first.b], [second.a, second.b]], dtype=float)
    rhs = np.array([first.c, second.c], dtype=float)
    try:
        solution = np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as e:
        raise DegenerateGeometryError(f"Radical axes have no unique intersection: {e}",
                                      reason="singular") from e

    local = Point2D(float(solution[0]), float(solution[1]))
    third = radical_axis(shifted[1], shifted[2])
    miss = abs(third.residual(local))
    if miss > CONCURRENCY_TOLERANCE:
        raise DegenerateGeometryError(
            f"Third radical axis misses the solution by {miss:.3e} m", reason="not_concurrent")

    return Point2D(local.x + origin.x, local.y + origin.y)


def trilaterate(receivers: Sequence[UltrasonicReceiver], distances: Sequence[float]) -> Point2D:
    """
    Recover the node position from its distances to three receivers.

    Args:
        receivers: Exactly three receivers with pairwise distinct, non-collinear positions
        distances: Distance from the node to each receiver, same order

    Returns:
        The radical center of the three range circles

    Raises:
        DomainError: On wrong arity or negative distances
        DegenerateGeometryError: On coincident or collinear receivers
    """
    if len(receivers) != 3 or len(distances) != 3:
        raise DomainError(
            f"Trilateration needs exactly 3 receivers and 3 distances, got {len(receivers)} and {len(distances)}",
            argument="receivers")
    for receiver, distance in zip(receivers, distances):
        if distance < 0:
            raise DomainError(f"Distance to {receiver.receiver_id} must be >= 0, got {distance}",
                              argument="distances", value=distance)

    positions = [r.position for r in receivers]
    for i in range(3):
        for j in range(i + 1, 3):
            if positions[i] == positions[j]:
                raise DegenerateGeometryError(
                    f"Receivers {receivers[i].receiver_id} and {receivers[j].receiver_id} are coincident",
                    reason="coincident")

    circles = [Circle(r.position, float(d)) for r, d in zip(receivers, distances)]
    return radical_center(*circles)


def simulate_ranging(
    true_position: Point2D,
    receivers: Sequence[UltrasonicReceiver],
    speed: float = DEFAULT_SPEED_OF_SOUND,
    noise_sigma: float = 0.0,
    rng_seed: int = 0,
) -> List[RangeMeasurement]:
    """
    Forward model: time the burst from the node to every receiver.

    tof_i = |true_position - p_i| / speed + N(0, noise_sigma), clamped at 0.
    The emitter and receivers share a perfectly synchronized clock.

    Args:
        true_position: Actual node position
        receivers: Receivers to time
        speed: Propagation speed in m/s
        noise_sigma: Standard deviation of the additive time-of-flight noise, seconds
        rng_seed: Seed of the noise generator

    Returns:
        One measurement per receiver, in receiver order
    """
    if speed <= 0:
        raise DomainError(f"Speed must be > 0, got {speed}", argument="speed", value=speed)
    if noise_sigma < 0:
        raise DomainError(f"Noise sigma must be >= 0, got {noise_sigma}", argument="noise_sigma",
                          value=noise_sigma)

    ranges = np.array([true_position.distance_to(r.position) for r in receivers], dtype=float)
    tofs = ranges / speed
    if noise_sigma > 0:
        rng = np.random.default_rng(rng_seed)
        tofs = tofs + rng.standard_normal(len(receivers)) * noise_sigma
    tofs = np.clip(tofs, 0.0, None)

    return [RangeMeasurement(r.receiver_id, float(t)) for r, t in zip(receivers, tofs)]


def measurements_to_distances(
    measurements: Sequence[RangeMeasurement],
    receivers: Sequence[UltrasonicReceiver],
    speed: float = DEFAULT_SPEED_OF_SOUND,
) -> List[float]:
    """
    Convert measurements to distances in receiver order, matching by receiver id.

    Raises:
        DomainError: If a receiver has no measurement
    """
    by_id: Dict[str, RangeMeasurement] = {m.receiver_id: m for m in measurements}
    distances = []
    for receiver in receivers:
        measurement = by_id.get(receiver.receiver_id)
        if measurement is None:
            raise DomainError(f"No range measurement for receiver {receiver.receiver_id}",
                              argument="measurements")
        distances.append(tof_to_distance(measurement.tof, speed))
    return distances


def locate_from_tofs(
    measurements: Sequence[RangeMeasurement],
    receivers: Sequence[UltrasonicReceiver],
    speed: float = DEFAULT_SPEED_OF_SOUND,
) -> Tuple[Point2D, List[float]]:
    """Convert the measurements of the first three receivers to distances and trilaterate."""
    anchors = list(receivers[:3])
    distances = measurements_to_distances(measurements, anchors, speed)
    position = trilaterate(anchors, distances)
    logger.debug(f"Trilaterated ({position.x:.4f}, {position.y:.4f}) from distances {distances}")
    return position, distances
