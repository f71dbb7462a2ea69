#pragma once

#include <cstdint>
#include <vector>

#include "sagsurge/waveform.hpp"

namespace sagsurge {

/// Analog conditioning stage (resistive attenuator plus DC offset) and
/// the ADC that samples it.
struct FrontendConfig {
    double attenuation = 200.0;   // 120 VRMS -> 0.6 VRMS
    double offset_v = 3.3;
    double adc_reference_v = 5.0;
    int adc_bits = 10;
    double sample_rate_hz = 3600.0;

    int max_code() const { return (1 << adc_bits) - 1; }
    double lsb_v() const { return adc_reference_v / max_code(); }
};

/// Throws std::invalid_argument on out-of-range fields.
void validate(const FrontendConfig& cfg);

struct AdcCode {
    std::uint16_t code = 0;
    std::uint64_t index = 0;
    bool saturated = false;  // conversion clamped to a rail
};

/// v_mains / attenuation + offset.
double condition(double v_mains, const FrontendConfig& cfg = {});

/// round(v/reference * max_code), half away from zero, clamped to
/// [0, max_code]. Sets `saturated` when clamping occurred.
AdcCode quantize(double v_conditioned, const FrontendConfig& cfg = {});

/// Inverse of the conditioning chain: mains-scale voltage estimate.
double reconstruct(const AdcCode& c, const FrontendConfig& cfg = {});
double reconstruct_code(std::uint16_t code, const FrontendConfig& cfg = {});

/// Largest sine RMS the conditioned range passes without clipping:
/// min(reference - offset, offset) * attenuation / sqrt(2).
double max_unsaturated_rms(const FrontendConfig& cfg = {});

struct Acquisition {
    std::vector<AdcCode> codes;
    bool headroom_warning = false;  // scenario peak exceeds representable range

    bool any_saturated() const;
};

/// synthesize -> condition -> quantize at cfg.sample_rate_hz.
Acquisition acquire(const Scenario& s, const FrontendConfig& cfg = {});

}  // namespace sagsurge
