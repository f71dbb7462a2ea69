#include "sagsurge/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace sagsurge {

std::size_t SimulationResult::trips() const {
    std::size_t n = 0;
    for (const Action& a : actions) {
        if (a.kind == ActionKind::OpenRelay) ++n;
    }
    return n;
}

std::size_t SimulationResult::reconnects() const {
    std::size_t n = 0;
    for (const Action& a : actions) {
        if (a.kind == ActionKind::CloseRelay) ++n;
    }
    return n;
}

namespace {

WireEventClass to_wire(Classification c) {
    switch (c) {
        case Classification::Sag: return WireEventClass::Sag;
        case Classification::Surge: return WireEventClass::Surge;
        default: return WireEventClass::NotApplicable;
    }
}

std::uint32_t to_millivolts(double rms_v) {
    const double mv = rms_v * 1000.0;
    if (mv <= 0.0) return 0;
    return static_cast<std::uint32_t>(std::llround(mv));
}

}  // namespace

SimulationResult run_simulation(const Scenario& scenario,
                                const SimulationOptions& options) {
    SimulationResult result;

    Acquisition acq = acquire(scenario, options.frontend);
    result.headroom_warning = acq.headroom_warning;

    RmsEngine engine(options.rms, options.frontend.sample_rate_hz);
    Detector detector(options.detector);
    TelemetryWriter writer;

    for (const AdcCode& sample : acq.codes) {
        if (options.emit_telemetry) writer.push_code(sample.index, sample.code);

        const double volts = reconstruct(sample, options.frontend);
        const std::optional<HalfCycleRms> m = engine.push_sample(volts, sample.index);
        if (!m) continue;

        const Classification cls = classify(m->value, options.detector);
        result.rms_trace.push_back({*m, cls});

        for (const Action& action : detector.step(*m)) {
            if (!options.emit_telemetry) continue;
            const auto start = static_cast<std::uint32_t>(sample.index);
            if (action.kind == ActionKind::OpenRelay) {
                writer.push_event(EventKind::Trip, to_wire(cls),
                                  action.half_cycle_index, to_millivolts(m->value),
                                  start);
            } else if (action.kind == ActionKind::CloseRelay) {
                writer.push_event(EventKind::Reconnect, WireEventClass::NotApplicable,
                                  action.half_cycle_index, to_millivolts(m->value),
                                  start);
            }
        }
    }

    result.codes = std::move(acq.codes);
    result.alignment = engine.alignment();
    result.events = detector.events();
    result.actions = detector.actions();
    result.final_relay = detector.relay();
    result.final_mode = detector.mode();
    if (options.emit_telemetry) result.telemetry = writer.take();
    return result;
}

std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::Sag: return "sag";
        case Classification::Surge: return "surge";
        default: return "in_bounds";
    }
}

std::string_view to_string(ActionKind k) {
    switch (k) {
        case ActionKind::OpenRelay: return "open_relay";
        case ActionKind::CloseRelay: return "close_relay";
        case ActionKind::LedRed: return "led_red";
        default: return "led_green";
    }
}

std::string_view to_string(RelayState r) {
    return r == RelayState::Open ? "open" : "closed";
}

namespace {

std::string format_volts(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

void write_rms_trace_csv(std::ostream& out, std::span<const RmsTraceRow> rows) {
    out << "half_cycle_index,time_s,rms_v,classification\n";
    for (const RmsTraceRow& row : rows) {
        out << row.measurement.half_cycle_index << ','
            << format_volts(row.measurement.time_s) << ','
            << format_volts(row.measurement.value) << ','
            << to_string(row.classification) << '\n';
    }
}

void write_events_csv(std::ostream& out, std::span<const DisturbanceEvent> events) {
    out << "event_class,onset_half_cycle,trip_half_cycle,end_half_cycle,"
           "extremal_rms_v,reconnect_half_cycle\n";
    for (const DisturbanceEvent& ev : events) {
        out << to_string(ev.event_class) << ',' << ev.onset_half_cycle << ','
            << ev.trip_half_cycle << ',' << ev.end_half_cycle << ','
            << format_volts(ev.extremal_rms) << ',';
        if (ev.reconnect_half_cycle) {
            out << *ev.reconnect_half_cycle;
        } else {
            out << "pending";
        }
        out << '\n';
    }
}

void write_actions_csv(std::ostream& out, std::span<const Action> actions) {
    out << "half_cycle_index,action\n";
    for (const Action& a : actions) {
        out << a.half_cycle_index << ',' << to_string(a.kind) << '\n';
    }
}

}  // namespace sagsurge
