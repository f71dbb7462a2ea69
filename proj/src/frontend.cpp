#include "sagsurge/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sagsurge {

namespace {
constexpr double kMinSampleRateHz = 120.0;  // Nyquist for the 60 Hz fundamental
}

void validate(const FrontendConfig& cfg) {
    if (!(std::isfinite(cfg.attenuation) && cfg.attenuation > 0.0))
        throw std::invalid_argument("attenuation must be > 0");
    if (!(std::isfinite(cfg.adc_reference_v) && cfg.adc_reference_v > 0.0))
        throw std::invalid_argument("adc reference must be > 0");
    if (!(std::isfinite(cfg.offset_v) && cfg.offset_v > 0.0 &&
          cfg.offset_v < cfg.adc_reference_v))
        throw std::invalid_argument("offset must lie strictly inside (0, reference)");
    if (cfg.adc_bits < 8 || cfg.adc_bits > 16)
        throw std::invalid_argument("adc bits must be in [8, 16]");
    if (!(std::isfinite(cfg.sample_rate_hz) && cfg.sample_rate_hz > kMinSampleRateHz))
        throw std::invalid_argument("sample rate must exceed 120 Hz");
}

double condition(double mains_v, const FrontendConfig& cfg) {
    return mains_v / cfg.attenuation + cfg.offset_v;
}

AdcCode quantize(double conditioned_v, const FrontendConfig& cfg) {
    const int max = cfg.max_code();
    const long long raw =
        std::llround(conditioned_v / cfg.adc_reference_v * static_cast<double>(max));
    AdcCode out;
    out.saturated = raw < 0 || raw > max;
    out.code = static_cast<std::uint16_t>(std::clamp<long long>(raw, 0, max));
    return out;
}

double reconstruct_code(std::uint16_t code, const FrontendConfig& cfg) {
    const double conditioned = static_cast<double>(code) * cfg.adc_reference_v /
                               static_cast<double>(cfg.max_code());
    return (conditioned - cfg.offset_v) * cfg.attenuation;
}

double reconstruct(const AdcCode& sample, const FrontendConfig& cfg) {
    return reconstruct_code(sample.code, cfg);
}

double max_unsaturated_rms(const FrontendConfig& cfg) {
    const double swing = std::min(cfg.offset_v, cfg.adc_reference_v - cfg.offset_v);
    return swing * cfg.attenuation / std::numbers::sqrt2;
}

bool Acquisition::any_saturated() const {
    return std::any_of(codes.begin(), codes.end(),
                       [](const AdcCode& c) { return c.saturated; });
}

Acquisition acquire(const Scenario& scenario, const FrontendConfig& cfg) {
    validate(cfg);

    Acquisition out;
    const std::vector<double> samples = synthesize(scenario, cfg.sample_rate_hz);
    out.codes.reserve(samples.size());
    for (std::size_t n = 0; n < samples.size(); ++n) {
        AdcCode code = quantize(condition(samples[n], cfg), cfg);
        code.index = n;
        out.codes.push_back(code);
    }

    // Warn up front when the continuous-time waveform peak cannot fit in the
    // conditioned range, even if no emitted sample happens to land outside it.
    double max_env = scenario.nominal_rms;
    for (const Disturbance& e : scenario.events) {
        switch (e.kind) {
            case DisturbanceKind::Fidvr:
                max_env = std::max({max_env, e.fidvr_sag_rms, e.fidvr_surge_rms});
                break;
            default:
                max_env = std::max(max_env, e.target_rms);
                break;
        }
    }
    double harmonic_gain = 1.0;
    for (const Harmonic& h : scenario.harmonics) harmonic_gain += h.amplitude_fraction;
    const double peak = std::numbers::sqrt2 * max_env * harmonic_gain;
    const double swing = std::min(cfg.offset_v, cfg.adc_reference_v - cfg.offset_v);
    out.headroom_warning = peak > swing * cfg.attenuation;
    return out;
}

}  // namespace sagsurge
