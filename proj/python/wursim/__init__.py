"""Acoustic wake-up receiver simulator."""

from ._wursim import (
    ChannelModel,
    ConfigError,
    DomainError,
    Echo,
    HarvesterMode,
    HarvesterParams,
    HarvesterState,
    ModulationParams,
    ProtocolError,
    Scenario,
    ScenarioResult,
    UnitError,
    WakeupFrame,
    calibrate_tx_amplitude,
    cap_energy,
    critical_reflection_distance,
    echo_delay,
    frame_energy,
    harvester_step,
    load_scenario,
    modulate_frame,
    parse_scenario,
    required_preamble,
    run_scenario,
    sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
