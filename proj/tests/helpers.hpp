#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sagsurge/detector.hpp"
#include "sagsurge/rms.hpp"

namespace testutil {

// Reference bitwise CRC-16/CCITT-FALSE, deliberately not table-driven.
inline std::uint16_t crc16_reference(std::span<const std::uint8_t> data) {
    std::uint16_t crc = 0xFFFF;
    for (const std::uint8_t byte : data) {
        crc ^= static_cast<std::uint16_t>(byte) << 8;
        for (int bit = 0; bit < 8; ++bit) {
            crc = (crc & 0x8000) != 0
                      ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                      : static_cast<std::uint16_t>(crc << 1);
        }
    }
    return crc;
}

// Batch-mode RMS oracle: find the anchor by direct scanning, then slice
// windows out of the full sample vector.
struct NaiveRmsResult {
    std::optional<std::uint64_t> anchor;
    bool fallback = false;
    std::vector<double> values;
};

inline NaiveRmsResult naive_rms(const std::vector<double>& samples,
                                const sagsurge::RmsConfig& cfg, double rate_hz) {
    NaiveRmsResult out;

    std::size_t anchor = 0;
    if (cfg.sync_mode == sagsurge::SyncMode::ZeroCrossing) {
        const auto budget = static_cast<std::size_t>(2.0 * rate_hz / 60.0 + 0.5);
        bool found = false;
        double peak = 0.0;
        for (std::size_t n = 0; n + 1 < samples.size() && n + 1 < budget; ++n) {
            peak = std::max({peak, std::abs(samples[n]), std::abs(samples[n + 1])});
            if (samples[n] <= 0.0 && samples[n + 1] > 0.0 && peak >= 10.0) {
                anchor = n;
                found = true;
                break;
            }
        }
        if (!found) {
            if (samples.size() < budget) return out;  // still scanning
            anchor = budget;
            out.fallback = true;
        }
    }
    out.anchor = anchor;

    const auto window = static_cast<std::size_t>(cfg.window_samples);
    const auto stride = static_cast<std::size_t>(cfg.stride_samples);
    for (std::size_t start = anchor; start + window <= samples.size(); start += stride) {
        double sum_sq = 0.0;
        for (std::size_t i = start; i < start + window; ++i) {
            sum_sq += samples[i] * samples[i];
        }
        const auto n = static_cast<double>(window);
        out.values.push_back(cfg.formula == sagsurge::RmsFormula::PaperLiteral
                                 ? std::sqrt(sum_sq) / n
                                 : std::sqrt(sum_sq / n));
    }
    return out;
}

// Brute-force detector oracle: alternately searches for the next run of
// trip_count consecutive violations (Monitoring) or reconnect_count
// consecutive compliant values (Tripped), each run constrained to start at
// or after the previous decision point. LED edges are derived separately
// from the raw classification sequence. Actions at the same index keep the
// LED edge first.
inline std::vector<sagsurge::Action> oracle_actions(
    const std::vector<double>& values, const sagsurge::DetectorConfig& cfg) {
    using sagsurge::Action;
    using sagsurge::ActionKind;
    using sagsurge::Classification;

    const auto n = values.size();
    std::vector<bool> violating(n);
    for (std::size_t i = 0; i < n; ++i) {
        violating[i] = sagsurge::classify(values[i], cfg) != Classification::InBounds;
    }

    std::vector<Action> relay;
    std::size_t pos = 0;
    bool tripped = false;
    while (true) {
        const auto run = static_cast<std::size_t>(tripped ? cfg.reconnect_count
                                                          : cfg.trip_count);
        const bool want = !tripped;  // violations trip, compliance reconnects
        std::optional<std::size_t> hit;
        for (std::size_t j = pos + run - 1; j < n; ++j) {
            bool all = true;
            for (std::size_t i = j + 1 - run; i <= j; ++i) {
                if (violating[i] != want) {
                    all = false;
                    break;
                }
            }
            if (all) {
                hit = j;
                break;
            }
        }
        if (!hit) break;
        relay.push_back({static_cast<std::uint32_t>(*hit),
                         tripped ? ActionKind::CloseRelay : ActionKind::OpenRelay});
        pos = *hit + 1;
        tripped = !tripped;
    }

    std::vector<Action> leds;
    bool red = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (violating[i] && !red) {
            leds.push_back({static_cast<std::uint32_t>(i), ActionKind::LedRed});
            red = true;
        } else if (!violating[i] && red) {
            leds.push_back({static_cast<std::uint32_t>(i), ActionKind::LedGreen});
            red = false;
        }
    }

    std::vector<Action> merged;
    std::size_t li = 0;
    std::size_t ri = 0;
    while (li < leds.size() || ri < relay.size()) {
        if (ri == relay.size() ||
            (li < leds.size() && leds[li].half_cycle_index <= relay[ri].half_cycle_index)) {
            merged.push_back(leds[li++]);
        } else {
            merged.push_back(relay[ri++]);
        }
    }
    return merged;
}

inline std::vector<sagsurge::HalfCycleRms> as_stream(const std::vector<double>& values) {
    std::vector<sagsurge::HalfCycleRms> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.push_back({static_cast<std::uint32_t>(i),
                       static_cast<double>(i + 2) / 120.0, values[i]});
    }
    return out;
}

}  // namespace testutil
