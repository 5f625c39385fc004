"""
Simulation engine - the tracked, secured NLOS room

Each tick moves the mobile nodes along their waypoints, ranges them with the
ultrasonic receivers, maps the estimates to cells, applies the reporting-cell
rule and checks the optical link of every node. Data requests page the target,
activate its ceiling transceiver, run the password-authenticated key agreement
through the backend and deliver one enciphered message.

Everything runs on one thread and is seeded, so a (config, seed, script)
triple always produces the same trace.
"""
import hashlib
import logging
import random
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, Optional, Sequence

from nlos_link import __version__
from nlos_link.core.cipher import decipher, encipher
from nlos_link.core.coverage import (
    GaussianBeam,
    ReceiverSpec,
    irradiance_at,
    is_connected,
    link_margin_db,
    received_power,
)
from nlos_link.core.key_agreement import PublicParams, derive_digest, run_handshake, sample_exponent
from nlos_link.core.location_mgmt import (
    CellGrid,
    CellId,
    LocationDB,
    attach,
    cell_of,
    cells_along,
    locate,
    on_move,
)
from nlos_link.core.positioning import Point2D, UltrasonicReceiver, locate_from_tofs, simulate_ranging
from nlos_link.errors import ConfigError, DegenerateGeometryError, SearchMissError
from nlos_link.simulator.config import DEFAULT_MESSAGE, RequestSpec, RoomConfig
from nlos_link.simulator.models import MobileNode, SimEvent
from nlos_link.simulator.trace import Trace, TraceRecorder

logger = logging.getLogger(__name__)


def derive_seed(root_seed: int, *labels) -> int:
    """Independent 64-bit seed for one (root seed, labels) combination."""
    material = "|".join([str(root_seed)] + [str(label) for label in labels]).encode('utf-8')
    return int.from_bytes(hashlib.sha256(material).digest()[:8], 'big')


class BackendChannel:
    """Lossless in-memory FIFO between ceiling transceivers and the backend computer"""

    def __init__(self):
        self._queue: Deque[bytes] = deque()
        self.frames_carried = 0

    def send(self, frame: bytes):
        self._queue.append(bytes(frame))

    def receive(self) -> bytes:
        return self._queue.popleft()

    def relay(self, frame: bytes) -> bytes:
        """Hand a frame to the far side and return what arrives there."""
        self.send(frame)
        self.frames_carried += 1
        return self.receive()


@dataclass
class WorldState:
    """Everything the simulation thread owns"""
    config: RoomConfig
    grid: CellGrid
    beam: GaussianBeam
    receiver: ReceiverSpec
    ultrasonic: List[UltrasonicReceiver]
    params: PublicParams
    nodes: Dict[str, MobileNode]
    recorder: TraceRecorder
    db: LocationDB = field(default_factory=LocationDB)
    channel: BackendChannel = field(default_factory=BackendChannel)
    tick: int = 0
    requests_served: int = 0

    @classmethod
    def from_config(cls, config: RoomConfig) -> "WorldState":
        nodes = {}
        for spec in config.nodes:
            nodes[spec.node_id] = MobileNode(
                node_id=spec.node_id,
                true_position=Point2D(*spec.start),
                waypoints=[Point2D(*p) for p in spec.waypoints],
                speed=spec.speed,
                password=spec.password.encode('utf-8'),
                register_on_attach=spec.register_on_attach,
                loop=spec.loop,
            )
        beam = config.build_beam()
        world = cls(
            config=config,
            grid=config.build_grid(),
            beam=beam,
            receiver=config.build_receiver(),
            ultrasonic=config.build_ultrasonic_receivers(),
            params=config.public_params(),
            nodes=nodes,
            recorder=TraceRecorder(
                config_hash=config.config_hash(),
                seed=config.seed,
                version=__version__,
                hash_name=config.crypto.hash,
            ),
        )
        logger.info(
            f"World built: {config.grid.rows}x{config.grid.cols} cells, {len(nodes)} nodes, "
            f"beam P={beam.launch_power_P:.4g} W W={beam.beam_radius_W:.4g} m")
        return world

    @property
    def trace(self) -> Trace:
        return self.recorder.trace

    def sorted_nodes(self) -> List[MobileNode]:
        return [self.nodes[k] for k in sorted(self.nodes)]

    def clamp(self, point: Point2D) -> Point2D:
        """Pull a noisy estimate back inside the room"""
        return Point2D(min(max(point.x, 0.0), self.grid.width), min(max(point.y, 0.0), self.grid.height))

    def link_offset(self, node: MobileNode, cell: CellId) -> float:
        """Radial distance of the node from the transceiver above the cell's center"""
        return node.true_position.distance_to(self.grid.center_of(cell))


def step(world: WorldState) -> List[SimEvent]:
    """
    Advance the world by one tick.

    Events are emitted phase by phase (ranging, cell mapping, location update),
    nodes in id order within a phase.
    """
    world.tick += 1
    tick = world.tick
    recorder = world.recorder
    first_event = len(recorder.trace.events)
    config = world.config

    for node in world.sorted_nodes():
        node.advance(config.room.tick_duration)

    # ranging
    fresh: Dict[str, Point2D] = {}
    for node in world.sorted_nodes():
        measurements = simulate_ranging(
            node.true_position,
            world.ultrasonic,
            speed=config.ultrasonic.speed_of_sound,
            noise_sigma=config.noise.tof_sigma,
            rng_seed=derive_seed(config.seed, "ranging", tick, node.node_id),
        )
        try:
            estimate, _ = locate_from_tofs(measurements, world.ultrasonic, config.ultrasonic.speed_of_sound)
        except DegenerateGeometryError as e:
            logger.warning(f"Tick {tick}: trilateration failed for {node.node_id}: {e}")
            recorder.record_position_failure(tick, node.node_id, e.reason or "degenerate", node.cell)
            continue
        recorder.record_position(tick, node.node_id, estimate, node.true_position)
        fresh[node.node_id] = world.clamp(estimate)

    # cell mapping
    entered: Dict[str, List[CellId]] = {}
    for node in world.sorted_nodes():
        if node.node_id not in fresh:
            continue
        estimate = fresh[node.node_id]
        if node.estimate is None:
            path = [cell_of(world.grid, estimate)]
        else:
            path = cells_along(world.grid, node.estimate, estimate)[1:]
        previous = node.cell
        for cell in path:
            recorder.record_cell_entered(tick, node.node_id, cell, previous)
            previous = cell
        node.estimate = estimate
        node.cell = previous
        entered[node.node_id] = path

        offset = world.link_offset(node, node.cell)
        connected = is_connected(world.beam, world.receiver, offset)
        if node.connected and not connected:
            recorder.record_link_lost(tick, node.node_id, node.cell, offset, "below_sensitivity")
        node.connected = connected

    # location update
    for node in world.sorted_nodes():
        for cell in entered.get(node.node_id, []):
            if not node.appeared:
                node.appeared = True
                if not world.grid.is_reporting(cell):
                    if node.register_on_attach:
                        attach(world.db, world.grid, node.node_id, cell, tick)
                        logger.info(f"Tick {tick}: {node.node_id} registered at initial cell {cell}")
                    continue
            update = on_move(world.db, world.grid, node.node_id, cell, tick)
            if update is not None:
                recorder.record_location_update(tick, node.node_id, update.cell, update.previous)

    return recorder.trace.events[first_event:]


def request_data(world: WorldState, src: str, dst: str, message: Optional[str] = None) -> List[SimEvent]:
    """
    Serve one data request from src to dst through the backend.

    Pages dst, activates its cell's transceiver, agrees a key between the two
    passwords and delivers one enciphered message. Failures end the request
    with a marked event instead of raising.
    """
    tick = world.tick
    recorder = world.recorder
    first_event = len(recorder.trace.events)
    source = world.nodes[src]
    target = world.nodes[dst]
    payload = (message if message is not None else DEFAULT_MESSAGE).encode('utf-8')
    world.requests_served += 1

    record = world.db.get(dst)
    # dst answers the page in the cell positioning placed it in, the same cell its reports came from
    paged_cell = target.cell if target.cell is not None else cell_of(world.grid, target.true_position)
    try:
        found, probed = locate(world.db, world.grid, dst, lambda cell: cell == paged_cell)
    except SearchMissError as e:
        recorder.record_search(tick, src, dst, record.cell if record else None, e.probed, None)
        return recorder.trace.events[first_event:]
    recorder.record_search(tick, src, dst, record.cell if record else None, probed, found)

    if source.cell is None or not source.connected:
        recorder.record_link_lost(tick, src, source.cell, None, "source_not_connected")
        return recorder.trace.events[first_event:]

    offset = world.link_offset(target, found)
    if not is_connected(world.beam, world.receiver, offset):
        recorder.record_link_lost(tick, dst, found, offset, "below_sensitivity")
        return recorder.trace.events[first_event:]
    recorder.record_link_established(tick, dst, found, {
        'offset_m': offset,
        'irradiance': irradiance_at(world.beam, offset),
        'margin_db': link_margin_db(world.beam, world.receiver, offset),
        'received_power': received_power(world.beam, world.receiver, offset),
    })

    rng = random.Random(derive_seed(world.config.seed, "handshake", tick, world.requests_served, src, dst))
    a = sample_exponent(world.params, rng)
    b = sample_exponent(world.params, rng)
    hash_name = world.config.crypto.hash
    result = run_handshake(
        source.password,
        target.password,
        world.params,
        a,
        b,
        transport=world.channel.relay,
        initiator_digest=derive_digest(source.password, world.params, hash_name),
        responder_digest=derive_digest(target.password, world.params, hash_name),
    )
    recorder.record_handshake(tick, src, dst, result.key_initiator, result.key_responder, hash_name)
    if not result.keys_match:
        logger.warning(f"Tick {tick}: {src} -> {dst} key mismatch, message withheld")
        return recorder.trace.events[first_event:]

    ciphertext = encipher(payload, result.key_initiator)
    arrived = world.channel.relay(ciphertext.encode('ascii')).decode('ascii')
    recovered = decipher(arrived, result.key_responder)
    recorder.record_delivery(tick, src, dst, ciphertext, len(payload), recovered == payload)
    return recorder.trace.events[first_event:]


def run(config: RoomConfig, ticks: int, requests: Sequence[RequestSpec] = ()) -> Trace:
    """
    Run the scenario for a number of ticks.

    Scripted requests run after the movement phases of their tick, in script order.

    Raises:
        ConfigError: When ticks is negative or a request names an unknown node
    """
    if ticks < 0:
        raise ConfigError(f"ticks must be >= 0, got {ticks}", field_path="ticks")
    node_ids = {node.node_id for node in config.nodes}
    schedule: Dict[int, List[RequestSpec]] = defaultdict(list)
    for i, request in enumerate(requests):
        for role in ("src", "dst"):
            if getattr(request, role) not in node_ids:
                raise ConfigError(f"request names unknown node {getattr(request, role)!r}",
                                  field_path=f"script.{i}.{role}")
        if request.tick > ticks:
            logger.warning(f"Request {i} at tick {request.tick} is beyond the last tick {ticks}")
        schedule[request.tick].append(request)

    world = WorldState.from_config(config)
    for _ in range(ticks):
        step(world)
        for request in schedule.get(world.tick, []):
            request_data(world, request.src, request.dst, request.message)

    trace = world.trace
    logger.info(f"Run finished: {ticks} ticks, {len(trace.events)} events, "
                f"{trace.protocol_violations} protocol violations")
    return trace
