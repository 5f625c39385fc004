"""
Scenario configuration - pydantic models for the JSON room description.

Top-level sections: room, grid, reporting_cells, nodes, ultrasonic, crypto,
noise, seed and the optional optics section.
"""
import hashlib
import json
import logging
import math
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from nlos_link.core.coverage import GaussianBeam, ReceiverSpec, ceiling_beam_for_cell
from nlos_link.core.key_agreement import DEFAULT_HASH, PublicParams
from nlos_link.core.location_mgmt import Adjacency, CellGrid
from nlos_link.core.positioning import (
    COLLINEAR_AREA_EPS,
    DEFAULT_SPEED_OF_SOUND,
    Point2D,
    UltrasonicReceiver,
    triangle_area,
)
from nlos_link.errors import ConfigError, DomainError

logger = logging.getLogger(__name__)

DEFAULT_MESSAGE = "secured optical link test payload"
SUPPORTED_HASHES = ("sha256", "sha384", "sha512", "sha3_256", "sha3_512", "blake2b")


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ─── Sections ─────────────────────────────────────────────────────────────

class RoomSection(_Section):
    width: float = Field(..., gt=0, description="Room width in meters (x extent)")
    height: float = Field(..., gt=0, description="Room depth in meters (y extent)")
    tick_duration: float = Field(default=1.0, gt=0, description="Simulated seconds per tick")


class GridSection(_Section):
    rows: int = Field(..., ge=1)
    cols: int = Field(..., ge=1)
    cell_size: float = Field(..., gt=0, description="Edge of one square cell in meters")
    adjacency: Adjacency = Field(default=Adjacency.FOUR, description="4 or 8 neighbor mode")


class NodeSpec(_Section):
    node_id: str = Field(..., min_length=1)
    start: Tuple[float, float] = Field(..., description="Initial (x, y) in meters")
    waypoints: List[Tuple[float, float]] = Field(default_factory=list)
    speed: float = Field(default=0.0, ge=0, description="m/s along the waypoints")
    password: str = Field(..., min_length=1, description="Shared secret for the key agreement")
    register_on_attach: bool = Field(default=True, description="Register in the location DB on first appearance")
    loop: bool = Field(default=False, description="Restart the waypoint list after the last point")


class UltrasonicReceiverSpec(_Section):
    receiver_id: str = Field(..., min_length=1)
    x: float
    y: float


class UltrasonicSection(_Section):
    speed_of_sound: float = Field(default=DEFAULT_SPEED_OF_SOUND, gt=0)
    receivers: List[UltrasonicReceiverSpec] = Field(default_factory=list)


class OpticsSection(_Section):
    sensitivity_ir: float = Field(default=1e-3, gt=0, description="Receiver sensitivity in W/m²")
    detector_area: Optional[float] = Field(default=1e-4, gt=0, description="Photodiode area in m²")
    launch_power: Optional[float] = Field(default=None, gt=0, description="Per-cell launch power in W")
    beam_radius: Optional[float] = Field(default=None, gt=0, description="Floor-plane beam radius in m")


class CryptoSection(_Section):
    group: Optional[Literal["modp2048"]] = Field(default="modp2048", description="Named group used when n is absent")
    n: Optional[int] = Field(default=None, description="Prime modulus")
    g: Optional[int] = Field(default=None, description="Base, 1 < g < n")
    hash: str = Field(default=DEFAULT_HASH, description="Password digest hash")


class NoiseSection(_Section):
    tof_sigma: float = Field(default=0.0, ge=0, description="Time-of-flight noise standard deviation in seconds")


class RequestSpec(_Section):
    tick: int = Field(..., ge=1)
    src: str
    dst: str
    message: str = Field(default=DEFAULT_MESSAGE)


# ─── Room configuration ───────────────────────────────────────────────────

class RoomConfig(_Section):
    room: RoomSection
    grid: GridSection
    reporting_cells: List[Tuple[int, int]] = Field(default_factory=list)
    nodes: List[NodeSpec] = Field(default_factory=list)
    ultrasonic: UltrasonicSection
    optics: OpticsSection = Field(default_factory=OpticsSection)
    crypto: CryptoSection = Field(default_factory=CryptoSection)
    noise: NoiseSection = Field(default_factory=NoiseSection)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_grid_covers_room(self):
        if not math.isclose(self.grid.rows * self.grid.cell_size, self.room.height, rel_tol=1e-9):
            raise ConfigError(
                f"grid.rows * grid.cell_size = {self.grid.rows * self.grid.cell_size} must equal room.height = {self.room.height}",
                field_path="grid.rows")
        if not math.isclose(self.grid.cols * self.grid.cell_size, self.room.width, rel_tol=1e-9):
            raise ConfigError(
                f"grid.cols * grid.cell_size = {self.grid.cols * self.grid.cell_size} must equal room.width = {self.room.width}",
                field_path="grid.cols")
        for i, (row, col) in enumerate(self.reporting_cells):
            if not (0 <= row < self.grid.rows and 0 <= col < self.grid.cols):
                raise ConfigError(f"reporting cell ({row}, {col}) is outside the {self.grid.rows}x{self.grid.cols} grid",
                                  field_path=f"reporting_cells.{i}")
        return self

    @model_validator(mode="after")
    def _check_ultrasonic(self):
        receivers = self.ultrasonic.receivers
        if len(receivers) < 3:
            raise ConfigError(
                f"at least 3 non-collinear ultrasonic receivers are required, got {len(receivers)}",
                field_path="ultrasonic.receivers")
        ids = [r.receiver_id for r in receivers]
        if len(set(ids)) != len(ids):
            raise ConfigError("ultrasonic receiver ids must be unique", field_path="ultrasonic.receivers")
        p1, p2, p3 = (Point2D(r.x, r.y) for r in receivers[:3])
        if triangle_area(p1, p2, p3) < COLLINEAR_AREA_EPS:
            raise ConfigError(
                "at least 3 non-collinear ultrasonic receivers are required: the first three are collinear",
                field_path="ultrasonic.receivers")
        return self

    @model_validator(mode="after")
    def _check_nodes(self):
        seen = set()
        for i, node in enumerate(self.nodes):
            if node.node_id in seen:
                raise ConfigError(f"duplicate node id {node.node_id!r}", field_path=f"nodes.{i}.node_id")
            seen.add(node.node_id)
            for label, (x, y) in [("start", node.start)] + [
                    (f"waypoints.{j}", p) for j, p in enumerate(node.waypoints)]:
                if not (0 <= x <= self.room.width and 0 <= y <= self.room.height):
                    raise ConfigError(f"node {node.node_id} position ({x}, {y}) is outside the room",
                                      field_path=f"nodes.{i}.{label}")
            displacement = node.speed * self.room.tick_duration
            if displacement > self.grid.cell_size:
                raise ConfigError(
                    f"node {node.node_id} moves {displacement} m per tick, more than one cell ({self.grid.cell_size} m)",
                    field_path=f"nodes.{i}.speed")
        return self

    @model_validator(mode="after")
    def _check_crypto(self):
        if self.crypto.hash not in SUPPORTED_HASHES:
            raise ConfigError(f"unsupported hash {self.crypto.hash!r}, choose one of {', '.join(SUPPORTED_HASHES)}",
                              field_path="crypto.hash")
        if (self.crypto.n is None) != (self.crypto.g is None):
            raise ConfigError("crypto.n and crypto.g must be given together", field_path="crypto.n")
        if self.crypto.n is None and self.crypto.group is None:
            raise ConfigError("either crypto.group or crypto.n/crypto.g is required", field_path="crypto.group")
        try:
            self.public_params()
        except DomainError as e:
            raise ConfigError(str(e), field_path=f"crypto.{e.argument or 'n'}") from e
        return self

    # ─── Builders ─────────────────────────────────────────────────────────

    def build_grid(self) -> CellGrid:
        return CellGrid(
            rows=self.grid.rows,
            cols=self.grid.cols,
            cell_size=self.grid.cell_size,
            reporting=frozenset(tuple(c) for c in self.reporting_cells),
            adjacency=self.grid.adjacency,
        )

    def build_receiver(self) -> ReceiverSpec:
        return ReceiverSpec(sensitivity_Ir=self.optics.sensitivity_ir, detector_area=self.optics.detector_area)

    def build_beam(self) -> GaussianBeam:
        """Configured beam, or the minimal-power beam that covers a whole cell."""
        default = ceiling_beam_for_cell(self.grid.cell_size, self.build_receiver())
        return GaussianBeam(
            launch_power_P=self.optics.launch_power or default.launch_power_P,
            beam_radius_W=self.optics.beam_radius or default.beam_radius_W,
        )

    def build_ultrasonic_receivers(self) -> List[UltrasonicReceiver]:
        return [UltrasonicReceiver(r.receiver_id, Point2D(r.x, r.y)) for r in self.ultrasonic.receivers]

    def public_params(self) -> PublicParams:
        if self.crypto.n is not None:
            return PublicParams(n=self.crypto.n, g=self.crypto.g)
        return PublicParams.modp_2048()

    def config_hash(self) -> str:
        canonical = json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()[:16]

    def with_seed(self, seed: Optional[int]) -> "RoomConfig":
        if seed is None:
            return self
        return self.model_copy(update={"seed": seed})


def _field_path(error: dict) -> str:
    return ".".join(str(part) for part in error.get("loc", ()))


def _translate(e: ValidationError, prefix: str = "") -> ConfigError:
    first = e.errors()[0]
    path = _field_path(first)
    if prefix:
        path = f"{prefix}.{path}" if path else prefix
    return ConfigError(f"{path}: {first.get('msg')}", field_path=path)


def parse_config(data: dict) -> RoomConfig:
    """
    Validate a configuration dictionary.

    Raises:
        ConfigError: With the offending field path
    """
    try:
        return RoomConfig.model_validate(data)
    except ValidationError as e:
        raise _translate(e) from e


def load_config(path: str) -> RoomConfig:
    """
    Read and validate a scenario file.

    Raises:
        ConfigError: When the file is missing, not JSON, or fails validation
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}", field_path="") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}", field_path="") from e
    config = parse_config(data)
    logger.info(f"Loaded config {path} (hash {config.config_hash()})")
    return config


def load_script(path: str) -> List[RequestSpec]:
    """
    Read a request script: a JSON list of {tick, src, dst, message?} objects.

    Raises:
        ConfigError: When the file is missing, not JSON, or an entry is malformed
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"script file not found: {path}", field_path="script") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"script file {path} is not valid JSON: {e}", field_path="script") from e
    if not isinstance(data, list):
        raise ConfigError("script must be a JSON list of requests", field_path="script")
    requests = []
    for i, entry in enumerate(data):
        try:
            requests.append(RequestSpec.model_validate(entry))
        except ValidationError as e:
            raise _translate(e, prefix=f"script.{i}") from e
    return requests
