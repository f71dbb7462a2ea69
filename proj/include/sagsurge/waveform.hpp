#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sagsurge {

/// Raised for scenario-file syntax errors (line > 0) and semantic
/// invariant violations (line == 0, field names the offender).
class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(const std::string& message, std::size_t line = 0,
                           std::string field = {});

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_ = 0;
    std::string field_;
};

enum class DisturbanceKind { Sag, Surge, Fidvr };

/// One disturbance on the RMS envelope. Sag/Surge hold the envelope at
/// target_rms for span seconds (linear ramp of `ramp` seconds at each
/// edge). Fidvr drops to fidvr_sag_rms for fidvr_sag_span seconds, then
/// overshoots to fidvr_surge_rms for the rest of the span.
struct Disturbance {
    DisturbanceKind kind = DisturbanceKind::Sag;
    double start_s = 0.0;
    double span_s = 0.0;
    double target_rms = 0.0;  // Sag / Surge
    double fidvr_sag_rms = 0.0;
    double fidvr_surge_rms = 0.0;
    double fidvr_sag_span_s = 0.0;
    double ramp_s = 0.0;

    double end_s() const { return start_s + span_s; }

    static Disturbance sag(double start_s, double span_s, double target_rms,
                           double ramp_s = 0.0);
    static Disturbance surge(double start_s, double span_s, double target_rms,
                             double ramp_s = 0.0);
    /// sag_span_s < 0 selects the default sag portion (0.3 of span).
    static Disturbance fidvr(double start_s, double span_s, double sag_rms,
                             double surge_rms, double sag_span_s = -1.0);
};

struct Harmonic {
    int order = 2;                    // >= 2
    double amplitude_fraction = 0.0;  // relative to the fundamental
};

/// Declarative description of a mains-voltage waveform and its
/// disturbance events over time.
struct Scenario {
    double nominal_rms = 120.0;
    double frequency_hz = 60.0;
    double initial_phase_rad = 0.0;
    double duration_s = 1.0;
    std::vector<Disturbance> events;  // non-overlapping, within [0, duration]
    std::vector<Harmonic> harmonics;
    double noise_rms = 0.0;
    std::uint64_t seed = 0;
};

/// Throws ScenarioError if any Scenario invariant is violated.
void validate(const Scenario& s);

/// Parses the scenario file format: one directive per line, `#` starts a
/// comment, unknown keys are errors. Validates the result.
Scenario parse_scenario(std::string_view text);

/// Ideal RMS envelope at time t: nominal outside events, the event's
/// target inside (ramped at the edges). Requires 0 <= t <= duration.
double envelope_rms(const Scenario& s, double t);

/// Instantaneous voltage at time t: sqrt(2)*envelope*sin(2*pi*f*t + phase)
/// plus harmonics and seeded Gaussian noise. Pure function of (s, t).
double sample_at(const Scenario& s, double t);

/// floor(duration*rate) samples, sample n evaluated at t = n/rate.
/// Bit-identical across runs for a fixed scenario.
std::vector<double> synthesize(const Scenario& s, double rate_hz);

}  // namespace sagsurge
