#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sagsurge/simulation.hpp"

namespace py = pybind11;
using namespace sagsurge;

namespace {

std::vector<std::uint8_t> to_vector(const py::bytes& data) {
    const std::string raw = data;
    return {raw.begin(), raw.end()};
}

py::bytes to_bytes(const std::vector<std::uint8_t>& data) {
    return py::bytes(reinterpret_cast<const char*>(data.data()), data.size());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Voltage sag/surge detector simulation core";

    py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);

    py::enum_<DisturbanceKind>(m, "DisturbanceKind")
        .value("SAG", DisturbanceKind::Sag)
        .value("SURGE", DisturbanceKind::Surge)
        .value("FIDVR", DisturbanceKind::Fidvr);

    py::class_<Harmonic>(m, "Harmonic")
        .def(py::init([](int order, double amp) {
                 return Harmonic{order, amp};
             }),
             py::arg("order"), py::arg("amplitude_fraction"))
        .def_readwrite("order", &Harmonic::order)
        .def_readwrite("amplitude_fraction", &Harmonic::amplitude_fraction);

    py::class_<Disturbance>(m, "Disturbance")
        .def_static("sag", &Disturbance::sag, py::arg("start_s"), py::arg("span_s"),
                    py::arg("target_rms"), py::arg("ramp_s") = 0.0)
        .def_static("surge", &Disturbance::surge, py::arg("start_s"),
                    py::arg("span_s"), py::arg("target_rms"), py::arg("ramp_s") = 0.0)
        .def_static("fidvr", &Disturbance::fidvr, py::arg("start_s"),
                    py::arg("span_s"), py::arg("sag_rms"), py::arg("surge_rms"),
                    py::arg("sag_span_s") = -1.0)
        .def_readonly("kind", &Disturbance::kind)
        .def_readonly("start_s", &Disturbance::start_s)
        .def_readonly("span_s", &Disturbance::span_s)
        .def_readonly("target_rms", &Disturbance::target_rms)
        .def_readonly("fidvr_sag_rms", &Disturbance::fidvr_sag_rms)
        .def_readonly("fidvr_surge_rms", &Disturbance::fidvr_surge_rms)
        .def_readonly("fidvr_sag_span_s", &Disturbance::fidvr_sag_span_s)
        .def_readonly("ramp_s", &Disturbance::ramp_s)
        .def_property_readonly("end_s", &Disturbance::end_s);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("nominal_rms", &Scenario::nominal_rms)
        .def_readwrite("frequency_hz", &Scenario::frequency_hz)
        .def_readwrite("initial_phase_rad", &Scenario::initial_phase_rad)
        .def_readwrite("duration_s", &Scenario::duration_s)
        .def_readwrite("events", &Scenario::events)
        .def_readwrite("harmonics", &Scenario::harmonics)
        .def_readwrite("noise_rms", &Scenario::noise_rms)
        .def_readwrite("seed", &Scenario::seed);

    m.def("parse_scenario", [](std::string_view text) { return parse_scenario(text); },
          py::arg("text"), "Parse scenario text into a Scenario");
    m.def("validate_scenario", [](const Scenario& s) { validate(s); }, py::arg("scenario"));
    m.def("envelope_rms", &envelope_rms, py::arg("scenario"), py::arg("t"));
    m.def("sample_at", &sample_at, py::arg("scenario"), py::arg("t"));
    m.def("synthesize", &synthesize, py::arg("scenario"), py::arg("rate_hz") = 3600.0);

    py::class_<FrontendConfig>(m, "FrontendConfig")
        .def(py::init<>())
        .def_readwrite("attenuation", &FrontendConfig::attenuation)
        .def_readwrite("offset_v", &FrontendConfig::offset_v)
        .def_readwrite("adc_reference_v", &FrontendConfig::adc_reference_v)
        .def_readwrite("adc_bits", &FrontendConfig::adc_bits)
        .def_readwrite("sample_rate_hz", &FrontendConfig::sample_rate_hz);

    py::enum_<RmsFormula>(m, "RmsFormula")
        .value("CORRECTED", RmsFormula::Corrected)
        .value("PAPER_LITERAL", RmsFormula::PaperLiteral);

    py::enum_<SyncMode>(m, "SyncMode")
        .value("ZERO_CROSSING", SyncMode::ZeroCrossing)
        .value("FIXED_STRIDE", SyncMode::FixedStride);

    py::class_<RmsConfig>(m, "RmsConfig")
        .def(py::init<>())
        .def_readwrite("window_samples", &RmsConfig::window_samples)
        .def_readwrite("stride_samples", &RmsConfig::stride_samples)
        .def_readwrite("sync_mode", &RmsConfig::sync_mode)
        .def_readwrite("formula", &RmsConfig::formula);

    py::class_<DetectorConfig>(m, "DetectorConfig")
        .def(py::init<>())
        .def_readwrite("lower_bound", &DetectorConfig::lower_bound)
        .def_readwrite("upper_bound", &DetectorConfig::upper_bound)
        .def_readwrite("trip_count", &DetectorConfig::trip_count)
        .def_readwrite("reconnect_count", &DetectorConfig::reconnect_count);

    m.def("compute_rms",
          [](const std::vector<double>& window, RmsFormula formula) {
              return compute_rms(window, formula);
          },
          py::arg("window"), py::arg("formula") = RmsFormula::Corrected);

    py::enum_<Classification>(m, "Classification")
        .value("IN_BOUNDS", Classification::InBounds)
        .value("SAG", Classification::Sag)
        .value("SURGE", Classification::Surge);

    py::enum_<RelayState>(m, "RelayState")
        .value("OPEN", RelayState::Open)
        .value("CLOSED", RelayState::Closed);

    py::enum_<ActionKind>(m, "ActionKind")
        .value("OPEN_RELAY", ActionKind::OpenRelay)
        .value("CLOSE_RELAY", ActionKind::CloseRelay)
        .value("LED_RED", ActionKind::LedRed)
        .value("LED_GREEN", ActionKind::LedGreen);

    m.def("classify",
          [](double rms, const DetectorConfig& cfg) { return classify(rms, cfg); },
          py::arg("rms"), py::arg("config") = DetectorConfig{});

    py::class_<HalfCycleRms>(m, "HalfCycleRms")
        .def_readonly("half_cycle_index", &HalfCycleRms::half_cycle_index)
        .def_readonly("time_s", &HalfCycleRms::time_s)
        .def_readonly("value", &HalfCycleRms::value);

    py::class_<RmsTraceRow>(m, "RmsTraceRow")
        .def_readonly("measurement", &RmsTraceRow::measurement)
        .def_readonly("classification", &RmsTraceRow::classification);

    py::class_<Action>(m, "Action")
        .def_readonly("half_cycle_index", &Action::half_cycle_index)
        .def_readonly("kind", &Action::kind);

    py::class_<DisturbanceEvent>(m, "DisturbanceEvent")
        .def_readonly("event_class", &DisturbanceEvent::event_class)
        .def_readonly("onset_half_cycle", &DisturbanceEvent::onset_half_cycle)
        .def_readonly("trip_half_cycle", &DisturbanceEvent::trip_half_cycle)
        .def_readonly("end_half_cycle", &DisturbanceEvent::end_half_cycle)
        .def_readonly("extremal_rms", &DisturbanceEvent::extremal_rms)
        .def_readonly("reconnect_half_cycle", &DisturbanceEvent::reconnect_half_cycle);

    py::class_<SimulationOptions>(m, "SimulationOptions")
        .def(py::init<>())
        .def_readwrite("frontend", &SimulationOptions::frontend)
        .def_readwrite("rms", &SimulationOptions::rms)
        .def_readwrite("detector", &SimulationOptions::detector)
        .def_readwrite("emit_telemetry", &SimulationOptions::emit_telemetry);

    py::class_<SimulationResult>(m, "SimulationResult")
        .def_readonly("headroom_warning", &SimulationResult::headroom_warning)
        .def_readonly("rms_trace", &SimulationResult::rms_trace)
        .def_readonly("events", &SimulationResult::events)
        .def_readonly("actions", &SimulationResult::actions)
        .def_readonly("final_relay", &SimulationResult::final_relay)
        .def_property_readonly("telemetry",
                               [](const SimulationResult& r) { return to_bytes(r.telemetry); })
        .def_property_readonly("trips", &SimulationResult::trips)
        .def_property_readonly("reconnects", &SimulationResult::reconnects);

    m.def("run_simulation",
          [](const Scenario& s, const SimulationOptions& o) {
              return run_simulation(s, o);
          },
          py::arg("scenario"), py::arg("options") = SimulationOptions{});

    m.def("crc16",
          [](const py::bytes& data) {
              const std::vector<std::uint8_t> raw = to_vector(data);
              return crc16(raw);
          },
          py::arg("data"));

    py::enum_<EventKind>(m, "EventKind")
        .value("TRIP", EventKind::Trip)
        .value("RECONNECT", EventKind::Reconnect);

    py::enum_<WireEventClass>(m, "WireEventClass")
        .value("NOT_APPLICABLE", WireEventClass::NotApplicable)
        .value("SAG", WireEventClass::Sag)
        .value("SURGE", WireEventClass::Surge);

    py::class_<SampleFrame>(m, "SampleFrame")
        .def(py::init<>())
        .def_readwrite("sequence", &SampleFrame::sequence)
        .def_readwrite("start_index", &SampleFrame::start_index)
        .def_readwrite("codes", &SampleFrame::codes)
        .def("__eq__", [](const SampleFrame& a, const SampleFrame& b) { return a == b; });

    py::class_<EventFrame>(m, "EventFrame")
        .def(py::init<>())
        .def_readwrite("sequence", &EventFrame::sequence)
        .def_readwrite("start_index", &EventFrame::start_index)
        .def_readwrite("kind", &EventFrame::kind)
        .def_readwrite("event_class", &EventFrame::event_class)
        .def_readwrite("half_cycle_index", &EventFrame::half_cycle_index)
        .def_readwrite("rms_millivolts", &EventFrame::rms_millivolts)
        .def("__eq__", [](const EventFrame& a, const EventFrame& b) { return a == b; });

    py::enum_<DiagnosticKind>(m, "DiagnosticKind")
        .value("CRC", DiagnosticKind::Crc)
        .value("TRUNCATED", DiagnosticKind::Truncated)
        .value("BAD_VERSION", DiagnosticKind::BadVersion)
        .value("BAD_TYPE", DiagnosticKind::BadType)
        .value("BAD_COUNT", DiagnosticKind::BadCount)
        .value("BAD_PAYLOAD", DiagnosticKind::BadPayload)
        .value("SEQUENCE_GAP", DiagnosticKind::SequenceGap);

    py::class_<Diagnostic>(m, "Diagnostic")
        .def_readonly("offset", &Diagnostic::offset)
        .def_readonly("kind", &Diagnostic::kind)
        .def_readonly("reason", &Diagnostic::reason);

    py::class_<DecodedStream>(m, "DecodedStream")
        .def_readonly("frames", &DecodedStream::frames)
        .def_readonly("diagnostics", &DecodedStream::diagnostics)
        .def("count", &DecodedStream::count, py::arg("kind"));

    m.def("encode_sample_frame",
          [](const SampleFrame& f) { return to_bytes(encode_sample_frame(f)); },
          py::arg("frame"));
    m.def("encode_event_frame",
          [](const EventFrame& f) { return to_bytes(encode_event_frame(f)); },
          py::arg("frame"));
    m.def("decode_stream",
          [](const py::bytes& data) {
              const std::vector<std::uint8_t> raw = to_vector(data);
              return decode_stream(raw);
          },
          py::arg("data"));
}
