#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "sagsurge/detector.hpp"
#include "sagsurge/frontend.hpp"
#include "sagsurge/rms.hpp"
#include "sagsurge/telemetry.hpp"
#include "sagsurge/waveform.hpp"

namespace sagsurge {

struct SimulationOptions {
    FrontendConfig frontend;
    RmsConfig rms;
    DetectorConfig detector;
    bool emit_telemetry = false;
};

struct RmsTraceRow {
    HalfCycleRms measurement;
    Classification classification = Classification::InBounds;
};

struct SimulationResult {
    std::vector<AdcCode> codes;
    bool headroom_warning = false;
    AlignmentState alignment;
    std::vector<RmsTraceRow> rms_trace;
    std::vector<DisturbanceEvent> events;
    std::vector<Action> actions;
    std::vector<std::uint8_t> telemetry;  // empty unless requested
    RelayState final_relay = RelayState::Closed;
    DetectorMode final_mode = DetectorMode::Monitoring;

    std::size_t trips() const;
    std::size_t reconnects() const;
};

/// Full pipeline: synthesize -> condition -> quantize -> reconstruct ->
/// half-cycle RMS -> detector, optionally framing telemetry along the way.
/// Deterministic: identical inputs give identical results byte for byte.
SimulationResult run_simulation(const Scenario& scenario,
                                const SimulationOptions& options = {});

std::string_view to_string(Classification c);
std::string_view to_string(ActionKind k);
std::string_view to_string(RelayState r);

// CSV writers: fixed headers, 6-decimal fixed-point voltages, '\n' endings.
void write_rms_trace_csv(std::ostream& out, std::span<const RmsTraceRow> rows);
void write_events_csv(std::ostream& out, std::span<const DisturbanceEvent> events);
void write_actions_csv(std::ostream& out, std::span<const Action> actions);

}  // namespace sagsurge
