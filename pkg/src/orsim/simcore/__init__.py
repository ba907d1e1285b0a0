from .coordination import CoordinationOutcome, coordination_round
from .events import EventQueue
from .rng import RngStream
from .routing import DeliveryRecord, Packet, Policy, Router, route_packet
from .scenario import MetricsRow, ScenarioConfig, run_scenario

__all__ = [
    "CoordinationOutcome", "coordination_round", "EventQueue", "RngStream",
    "DeliveryRecord", "Packet", "Policy", "Router", "route_packet",
    "MetricsRow", "ScenarioConfig", "run_scenario",
]
