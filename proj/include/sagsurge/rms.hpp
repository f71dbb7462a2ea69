#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

namespace sagsurge {

enum class SyncMode { ZeroCrossing, FixedStride };

/// Corrected: sqrt(sum(v^2)/N). PaperLiteral: sqrt(sum(v^2))/N, which is
/// Corrected/sqrt(N); kept for fidelity experiments.
enum class RmsFormula { Corrected, PaperLiteral };

struct RmsConfig {
    int window_samples = 60;   // one full cycle at 3600 Hz
    int stride_samples = 30;   // one semi-cycle
    SyncMode sync_mode = SyncMode::ZeroCrossing;
    RmsFormula formula = RmsFormula::Corrected;
};

void validate(const RmsConfig& cfg);

/// One RMS measurement per semi-cycle. time_s is the exclusive window-end
/// boundary: (last_sample_index + 1) / sample_rate.
struct HalfCycleRms {
    std::uint32_t half_cycle_index = 0;
    double time_s = 0.0;
    double value = 0.0;  // volts RMS
};

double compute_rms(std::span<const double> window, RmsFormula formula);

enum class AlignmentPhase { Pending, Anchored, FallbackAnchored };

struct AlignmentState {
    AlignmentPhase phase = AlignmentPhase::Pending;
    std::uint64_t anchor_index = 0;  // valid once phase != Pending
};

/// Streams mains-scale voltage samples into half-cycle-aligned windows
/// and emits one RMS measurement per stride once a full window exists.
///
/// With ZeroCrossing sync the engine first scans for a rising zero
/// crossing (prev <= 0, curr > 0, peak magnitude seen >= 10 V) and
/// anchors the window grid there; if two nominal cycles pass without one
/// it falls back to fixed-stride cadence at the next index. Single-owner:
/// feed sequentially, indices strictly increasing.
class RmsEngine {
public:
    RmsEngine(RmsConfig cfg, double sample_rate_hz);

    /// Buffers one sample; returns a measurement when a window completes.
    std::optional<HalfCycleRms> push_sample(double volts, std::uint64_t index);

    const AlignmentState& alignment() const { return align_; }
    const RmsConfig& config() const { return cfg_; }
    double sample_rate_hz() const { return rate_; }

private:
    void buffer_sample(double volts, std::uint64_t index);

    RmsConfig cfg_;
    double rate_ = 3600.0;
    int scan_budget_ = 120;  // two nominal cycles

    AlignmentState align_;
    bool have_prev_ = false;
    double prev_volts_ = 0.0;
    std::uint64_t prev_index_ = 0;
    double scan_peak_ = 0.0;
    int scanned_ = 0;

    std::vector<double> ring_;
    std::size_t ring_pos_ = 0;
    std::uint64_t buffered_ = 0;
    std::uint32_t emitted_ = 0;

    std::deque<HalfCycleRms> pending_;

    bool have_last_ = false;
    std::uint64_t last_index_ = 0;
};

}  // namespace sagsurge
