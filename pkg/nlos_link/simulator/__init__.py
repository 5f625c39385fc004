"""
Simulator module - configuration, world state, engine and trace
"""
from .config import RoomConfig, RequestSpec, load_config, load_script, parse_config
from .models import EventKind, SimEvent, MobileNode
from .trace import Trace, TraceRecorder
from .engine import WorldState, BackendChannel, derive_seed, step, request_data, run

__all__ = [
    'RoomConfig',
    'RequestSpec',
    'load_config',
    'load_script',
    'parse_config',
    'EventKind',
    'SimEvent',
    'MobileNode',
    'Trace',
    'TraceRecorder',
    'WorldState',
    'BackendChannel',
    'derive_seed',
    'step',
    'request_data',
    'run',
]
