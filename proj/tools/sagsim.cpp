#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sagsurge/simulation.hpp"

namespace fs = std::filesystem;
using namespace sagsurge;

namespace {

constexpr int kExitClean = 0;
constexpr int kExitDataQuality = 1;
constexpr int kExitInputError = 2;
constexpr int kExitIoError = 3;

std::optional<std::string> read_file(const fs::path& path, std::ios::openmode mode) {
    std::ifstream in(path, mode);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return std::move(buf).str();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct SimulateArgs {
    std::string scenario_path;
    std::string out_dir;
    SimulationOptions options;
};

int cmd_simulate(const SimulateArgs& args) {
    const std::optional<std::string> text = read_file(args.scenario_path, std::ios::in);
    if (!text) {
        std::cerr << "error: cannot read scenario file '" << args.scenario_path << "'\n";
        return kExitInputError;
    }

    Scenario scenario;
    SimulationResult result;
    try {
        scenario = parse_scenario(*text);
        result = run_simulation(scenario, args.options);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << args.scenario_path << ": " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }

    if (result.headroom_warning) {
        std::cerr << "warning: waveform peak exceeds the conditioned input range; "
                     "samples may saturate\n";
    }

    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory '" << args.out_dir
                  << "': " << ec.message() << '\n';
        return kExitIoError;
    }

    const auto write_text = [&](const char* name, auto&& writer) {
        const fs::path path = fs::path(args.out_dir) / name;
        std::ofstream out(path, std::ios::binary);
        writer(out);
        if (!out) {
            std::cerr << "error: cannot write '" << path.string() << "'\n";
            return false;
        }
        return true;
    };

    bool ok = write_text("rms_trace.csv", [&](std::ostream& out) {
        write_rms_trace_csv(out, result.rms_trace);
    });
    ok = ok && write_text("events.csv", [&](std::ostream& out) {
        write_events_csv(out, result.events);
    });
    ok = ok && write_text("actions.csv", [&](std::ostream& out) {
        write_actions_csv(out, result.actions);
    });
    if (ok && args.options.emit_telemetry) {
        ok = write_text("telemetry.bin", [&](std::ostream& out) {
            out.write(reinterpret_cast<const char*>(result.telemetry.data()),
                      static_cast<std::streamsize>(result.telemetry.size()));
        });
    }
    if (!ok) return kExitIoError;

    std::cout << result.events.size() << " events, " << result.trips()
              << " trips, relay " << to_string(result.final_relay) << '\n';
    return kExitClean;
}

const char* to_cstr(DiagnosticKind kind) {
    switch (kind) {
        case DiagnosticKind::Crc: return "crc";
        case DiagnosticKind::Truncated: return "truncated";
        case DiagnosticKind::BadVersion: return "bad_version";
        case DiagnosticKind::BadType: return "bad_type";
        case DiagnosticKind::BadCount: return "bad_count";
        case DiagnosticKind::BadPayload: return "bad_payload";
        case DiagnosticKind::SequenceGap: return "sequence_gap";
    }
    return "unknown";
}

const char* to_cstr(EventKind kind) {
    return kind == EventKind::Trip ? "trip" : "reconnect";
}

const char* to_cstr(WireEventClass cls) {
    switch (cls) {
        case WireEventClass::Sag: return "sag";
        case WireEventClass::Surge: return "surge";
        default: return "na";
    }
}

int cmd_decode(const std::string& path) {
    const std::optional<std::string> raw = read_file(path, std::ios::binary);
    if (!raw) {
        std::cerr << "error: cannot read '" << path << "'\n";
        return kExitInputError;
    }

    const DecodedStream decoded = decode_stream(
        {reinterpret_cast<const std::uint8_t*>(raw->data()), raw->size()});

    std::cout << "type,sequence,start_index,count,payload\n";
    for (const Frame& frame : decoded.frames) {
        if (const auto* s = std::get_if<SampleFrame>(&frame)) {
            std::cout << "sample," << s->sequence << ',' << s->start_index << ','
                      << s->codes.size() << ',';
            for (std::size_t i = 0; i < s->codes.size(); ++i) {
                if (i > 0) std::cout << ';';
                std::cout << s->codes[i];
            }
            std::cout << '\n';
        } else if (const auto* e = std::get_if<EventFrame>(&frame)) {
            std::cout << "event," << e->sequence << ',' << e->start_index << ",,"
                      << to_cstr(e->kind) << ';' << to_cstr(e->event_class) << ';'
                      << e->half_cycle_index << ';' << e->rms_millivolts << '\n';
        }
    }
    for (const Diagnostic& d : decoded.diagnostics) {
        std::cerr << "diagnostic: offset=" << d.offset << " kind=" << to_cstr(d.kind)
                  << " reason=" << d.reason << '\n';
    }
    return decoded.count(DiagnosticKind::Crc) > 0 ? kExitDataQuality : kExitClean;
}

int cmd_describe(const std::string& path) {
    const std::optional<std::string> text = read_file(path, std::ios::in);
    if (!text) {
        std::cerr << "error: cannot read scenario file '" << path << "'\n";
        return kExitInputError;
    }

    Scenario s;
    try {
        s = parse_scenario(*text);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << path << ": " << e.what() << '\n';
        return kExitInputError;
    }

    std::cout << "scenario: nominal_rms=" << fmt(s.nominal_rms)
              << " V, frequency=" << fmt(s.frequency_hz) << " Hz, phase="
              << fmt(s.initial_phase_rad) << " rad, duration=" << fmt(s.duration_s)
              << " s, noise_rms=" << fmt(s.noise_rms) << " V, seed=" << s.seed << '\n';

    if (s.harmonics.empty()) {
        std::cout << "harmonics: none\n";
    } else {
        std::cout << "harmonics:";
        for (const Harmonic& h : s.harmonics) {
            std::cout << " order=" << h.order << " amp=" << fmt(h.amplitude_fraction);
        }
        std::cout << '\n';
    }

    double env_min = s.nominal_rms;
    double env_max = s.nominal_rms;
    if (s.events.empty()) {
        std::cout << "timeline: no events\n";
    } else {
        std::cout << "timeline:\n";
        for (const Disturbance& e : s.events) {
            switch (e.kind) {
                case DisturbanceKind::Sag:
                    std::cout << "  sag start=" << fmt(e.start_s) << " end="
                              << fmt(e.end_s()) << " target=" << fmt(e.target_rms)
                              << " ramp=" << fmt(e.ramp_s) << '\n';
                    env_min = std::min(env_min, e.target_rms);
                    break;
                case DisturbanceKind::Surge:
                    std::cout << "  surge start=" << fmt(e.start_s) << " end="
                              << fmt(e.end_s()) << " target=" << fmt(e.target_rms)
                              << " ramp=" << fmt(e.ramp_s) << '\n';
                    env_max = std::max(env_max, e.target_rms);
                    break;
                case DisturbanceKind::Fidvr:
                    std::cout << "  fidvr start=" << fmt(e.start_s) << " end="
                              << fmt(e.end_s()) << " sag=" << fmt(e.fidvr_sag_rms)
                              << " surge=" << fmt(e.fidvr_surge_rms) << " sag_span="
                              << fmt(e.fidvr_sag_span_s) << '\n';
                    env_min = std::min({env_min, e.fidvr_sag_rms, e.fidvr_surge_rms});
                    env_max = std::max({env_max, e.fidvr_sag_rms, e.fidvr_surge_rms});
                    break;
            }
        }
    }
    std::cout << "envelope: min=" << fmt(env_min) << " V, max=" << fmt(env_max)
              << " V\n";
    return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Voltage sag/surge detector simulator"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Run a scenario through the full pipeline");
    simulate->add_option("--scenario", sim.scenario_path, "Scenario file")->required();
    simulate->add_option("--out", sim.out_dir, "Output directory")->required();
    simulate->add_option("--rate", sim.options.frontend.sample_rate_hz,
                         "Sample rate in Hz");
    simulate->add_option("--bits", sim.options.frontend.adc_bits, "ADC resolution");
    simulate->add_option("--vref", sim.options.frontend.adc_reference_v,
                         "ADC reference in volts");
    simulate->add_option("--lower", sim.options.detector.lower_bound,
                         "Lower RMS bound in volts");
    simulate->add_option("--upper", sim.options.detector.upper_bound,
                         "Upper RMS bound in volts");
    simulate->add_option("--trip-count", sim.options.detector.trip_count,
                         "Consecutive violations required to trip");
    simulate->add_option("--reconnect-count", sim.options.detector.reconnect_count,
                         "Consecutive compliant measurements required to reconnect");
    simulate
        ->add_option_function<std::string>(
            "--formula",
            [&](const std::string& v) {
                sim.options.rms.formula =
                    v == "paper" ? RmsFormula::PaperLiteral : RmsFormula::Corrected;
            },
            "RMS formula")
        ->check(CLI::IsMember({"corrected", "paper"}));
    simulate
        ->add_option_function<std::string>(
            "--sync",
            [&](const std::string& v) {
                sim.options.rms.sync_mode = v == "fixed" ? SyncMode::FixedStride
                                                         : SyncMode::ZeroCrossing;
            },
            "Window alignment mode")
        ->check(CLI::IsMember({"zero-crossing", "fixed"}));
    simulate->add_flag("--telemetry", sim.options.emit_telemetry,
                       "Write telemetry.bin");

    std::string decode_path;
    CLI::App* decode = app.add_subcommand("decode", "Decode a telemetry file");
    decode->add_option("path", decode_path, "Telemetry file")->required();

    std::string describe_path;
    CLI::App* describe =
        app.add_subcommand("describe", "Print a parsed scenario without running it");
    describe->add_option("path", describe_path, "Scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    if (simulate->parsed()) return cmd_simulate(sim);
    if (decode->parsed()) return cmd_decode(decode_path);
    if (describe->parsed()) return cmd_describe(describe_path);
    return kExitInputError;
}
