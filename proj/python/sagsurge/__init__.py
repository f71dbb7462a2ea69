"""Deterministic software twin of a residential voltage sag/surge detector."""

from ._core import (
    Action,
    ActionKind,
    Classification,
    DecodedStream,
    DetectorConfig,
    Diagnostic,
    DiagnosticKind,
    Disturbance,
    DisturbanceEvent,
    DisturbanceKind,
    EventFrame,
    EventKind,
    FrontendConfig,
    HalfCycleRms,
    Harmonic,
    RelayState,
    RmsConfig,
    RmsFormula,
    RmsTraceRow,
    SampleFrame,
    Scenario,
    ScenarioError,
    SimulationOptions,
    SimulationResult,
    SyncMode,
    WireEventClass,
    classify,
    compute_rms,
    crc16,
    decode_stream,
    encode_event_frame,
    encode_sample_frame,
    envelope_rms,
    parse_scenario,
    run_simulation,
    sample_at,
    synthesize,
    validate_scenario,
)

__all__ = [
    "Action",
    "ActionKind",
    "Classification",
    "DecodedStream",
    "DetectorConfig",
    "Diagnostic",
    "DiagnosticKind",
    "Disturbance",
    "DisturbanceEvent",
    "DisturbanceKind",
    "EventFrame",
    "EventKind",
    "FrontendConfig",
    "HalfCycleRms",
    "Harmonic",
    "RelayState",
    "RmsConfig",
    "RmsFormula",
    "RmsTraceRow",
    "SampleFrame",
    "Scenario",
    "ScenarioError",
    "SimulationOptions",
    "SimulationResult",
    "SyncMode",
    "WireEventClass",
    "classify",
    "compute_rms",
    "crc16",
    "decode_stream",
    "encode_event_frame",
    "encode_sample_frame",
    "envelope_rms",
    "parse_scenario",
    "run_simulation",
    "sample_at",
    "simulate_text",
    "synthesize",
    "validate_scenario",
]

__version__ = "1.0.0"


def simulate_text(text, options=None):
    """Parse scenario text and run it through the full pipeline."""
    scenario = parse_scenario(text)
    if options is None:
        options = SimulationOptions()
    return run_simulation(scenario, options)
