"""
Trace recording service for simulation events

Each record is one JSON object per line: {tick, seq, kind, node, payload}.
The first line is a header echoing the config hash, seed and tool version.
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from nlos_link.core.key_agreement import key_fingerprint
from nlos_link.core.location_mgmt import CellId
from nlos_link.core.positioning import Point2D
from nlos_link.simulator.models import EventKind, SimEvent, round_floats

logger = logging.getLogger(__name__)


def _cell(cell: Optional[CellId]) -> Optional[List[int]]:
    return [int(cell[0]), int(cell[1])] if cell is not None else None


@dataclass
class Trace:
    """Complete ordered output of one run"""
    header: SimEvent
    events: List[SimEvent] = field(default_factory=list)
    protocol_violations: int = 0
    auth_failures: int = 0

    @property
    def records(self) -> List[SimEvent]:
        return [self.header] + self.events

    def kinds(self) -> List[str]:
        return [e.kind.value for e in self.events]

    def of_kind(self, kind: EventKind) -> List[SimEvent]:
        return [e for e in self.events if e.kind == kind]

    def to_jsonl(self) -> str:
        """Canonical JSON lines: sorted keys, compact separators, floats at 12 significant digits"""
        lines = [
            json.dumps(round_floats(record.to_dict()), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
            for record in self.records
        ]
        return "\n".join(lines) + "\n"

    def write(self, path: str):
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(self.to_jsonl())


class TraceRecorder:
    """
    Collects simulation events in order, numbering them within each tick.

    Provides one record_* helper per event kind so payload shapes live in one place.
    """

    def __init__(self, config_hash: str, seed: int, version: str, hash_name: str):
        """
        Initialize the recorder.

        Args:
            config_hash: Short hash of the canonical configuration
            seed: Root seed of the run
            version: Tool version
            hash_name: Password digest hash, recorded for reproducibility
        """
        header = SimEvent(
            tick=0,
            seq=0,
            kind=EventKind.HEADER,
            node=None,
            payload={
                'config_hash': config_hash,
                'seed': seed,
                'version': version,
                'digest_hash': hash_name,
            },
        )
        self.trace = Trace(header=header)
        self._tick = 0
        self._seq = 0

    def record(self, tick: int, kind: EventKind, node: Optional[str], payload: Dict[str, Any]) -> SimEvent:
        if tick != self._tick:
            self._tick = tick
            self._seq = 0
        self._seq += 1
        event = SimEvent(tick=tick, seq=self._seq, kind=kind, node=node, payload=payload)
        self.trace.events.append(event)
        logger.debug(f"[tick {tick}] {kind.value} {node or ''} {payload}")
        return event

    def record_position(self, tick: int, node: str, estimate: Point2D, truth: Point2D) -> SimEvent:
        return self.record(tick, EventKind.POSITION_ESTIMATED, node, {
            'x': estimate.x,
            'y': estimate.y,
            'error_m': estimate.distance_to(truth),
        })

    def record_position_failure(self, tick: int, node: str, reason: str, kept_cell: Optional[CellId]) -> SimEvent:
        return self.record(tick, EventKind.POSITION_ESTIMATED, node, {
            'error': reason,
            'kept_cell': _cell(kept_cell),
        })

    def record_cell_entered(self, tick: int, node: str, cell: CellId, previous: Optional[CellId]) -> SimEvent:
        return self.record(tick, EventKind.CELL_ENTERED, node, {
            'cell': _cell(cell),
            'from': _cell(previous),
        })

    def record_location_update(self, tick: int, node: str, cell: CellId, previous: Optional[CellId]) -> SimEvent:
        return self.record(tick, EventKind.LOCATION_UPDATED, node, {
            'cell': _cell(cell),
            'previous': _cell(previous),
        })

    def record_search(self, tick: int, src: str, dst: str, recorded: Optional[CellId],
                      probed: List[CellId], found: Optional[CellId]) -> SimEvent:
        payload = {
            'src': src,
            'recorded_cell': _cell(recorded),
            'probed': [_cell(c) for c in probed],
            'found': _cell(found),
        }
        if found is None:
            payload['error'] = 'search_miss'
            self.trace.protocol_violations += 1
        return self.record(tick, EventKind.SEARCH_PERFORMED, dst, payload)

    def record_link_established(self, tick: int, node: str, cell: CellId, link: Dict[str, Any]) -> SimEvent:
        return self.record(tick, EventKind.LINK_ESTABLISHED, node, {'cell': _cell(cell), **link})

    def record_link_lost(self, tick: int, node: str, cell: Optional[CellId], offset_m: Optional[float],
                         reason: str) -> SimEvent:
        return self.record(tick, EventKind.LINK_LOST, node, {
            'cell': _cell(cell),
            'offset_m': offset_m,
            'reason': reason,
        })

    def record_handshake(self, tick: int, src: str, dst: str, key_initiator: int, key_responder: int,
                         hash_name: str) -> SimEvent:
        fp_initiator = key_fingerprint(key_initiator, hash_name)
        fp_responder = key_fingerprint(key_responder, hash_name)
        match = key_initiator == key_responder
        if not match:
            self.trace.auth_failures += 1
        return self.record(tick, EventKind.HANDSHAKE_COMPLETED, src, {
            'initiator': src,
            'responder': dst,
            'fingerprint_initiator': fp_initiator,
            'fingerprint_responder': fp_responder,
            'match': match,
        })

    def record_delivery(self, tick: int, src: str, dst: str, ciphertext: str, size: int,
                        round_trip_match: bool) -> SimEvent:
        return self.record(tick, EventKind.MESSAGE_DELIVERED, src, {
            'src': src,
            'dst': dst,
            'bytes': size,
            'ciphertext': ciphertext,
            'round_trip_match': round_trip_match,
        })
