#include "sagsurge/rms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sagsurge {

namespace {
constexpr double kNominalFrequencyHz = 60.0;
constexpr double kAlignmentMinPeakV = 10.0;
}  // namespace

void validate(const RmsConfig& cfg) {
    if (cfg.window_samples < 2) throw std::invalid_argument("window must be >= 2 samples");
    if (cfg.stride_samples < 1) throw std::invalid_argument("stride must be >= 1 sample");
    if (cfg.stride_samples > cfg.window_samples)
        throw std::invalid_argument("stride must not exceed window");
}

double compute_rms(std::span<const double> window, RmsFormula formula) {
    if (window.empty()) throw std::invalid_argument("rms of empty window");
    double sum_sq = 0.0;
    for (const double v : window) sum_sq += v * v;
    const auto n = static_cast<double>(window.size());
    switch (formula) {
        case RmsFormula::PaperLiteral:
            return std::sqrt(sum_sq) / n;
        case RmsFormula::Corrected:
        default:
            return std::sqrt(sum_sq / n);
    }
}

RmsEngine::RmsEngine(RmsConfig cfg, double sample_rate_hz)
    : cfg_(cfg), rate_(sample_rate_hz) {
    validate(cfg_);
    if (!(std::isfinite(rate_) && rate_ > 0.0))
        throw std::invalid_argument("sample rate must be > 0");
    scan_budget_ = static_cast<int>(std::lround(2.0 * rate_ / kNominalFrequencyHz));
    ring_.assign(static_cast<std::size_t>(cfg_.window_samples), 0.0);
    if (cfg_.sync_mode == SyncMode::FixedStride) {
        align_.phase = AlignmentPhase::Anchored;
        align_.anchor_index = 0;
    }
}

std::optional<HalfCycleRms> RmsEngine::push_sample(double volts, std::uint64_t index) {
    if (have_last_ && index <= last_index_)
        throw std::invalid_argument("sample indices must be strictly increasing");
    have_last_ = true;
    last_index_ = index;

    if (align_.phase != AlignmentPhase::Pending) {
        buffer_sample(volts, index);
    } else {
        // Scanning for a rising zero crossing. Crossings only count once the
        // scanned stretch has shown a real mains-scale excursion; otherwise
        // ADC noise around the offset would anchor the grid at an arbitrary
        // spot of a de-energized line.
        scan_peak_ = std::max(scan_peak_, std::abs(volts));
        ++scanned_;

        if (have_prev_ && prev_volts_ <= 0.0 && volts > 0.0 &&
            scan_peak_ >= kAlignmentMinPeakV) {
            align_.phase = AlignmentPhase::Anchored;
            align_.anchor_index = prev_index_;
            // The crossing pair opens the first window.
            buffer_sample(prev_volts_, prev_index_);
            buffer_sample(volts, index);
        } else if (scanned_ >= scan_budget_) {
            align_.phase = AlignmentPhase::FallbackAnchored;
            align_.anchor_index = index + 1;  // grid starts at the next sample
            have_prev_ = false;
        } else {
            have_prev_ = true;
            prev_volts_ = volts;
            prev_index_ = index;
        }
    }

    if (pending_.empty()) return std::nullopt;
    const HalfCycleRms front = pending_.front();
    pending_.pop_front();
    return front;
}

void RmsEngine::buffer_sample(double volts, std::uint64_t index) {
    if (index < align_.anchor_index) return;

    ring_[ring_pos_] = volts;
    ring_pos_ = (ring_pos_ + 1) % ring_.size();
    ++buffered_;

    const auto window = static_cast<std::uint64_t>(cfg_.window_samples);
    const auto stride = static_cast<std::uint64_t>(cfg_.stride_samples);
    if (buffered_ < window || (buffered_ - window) % stride != 0) return;

    // ring_pos_ points at the oldest sample of the just-completed window.
    std::vector<double> ordered(ring_.size());
    for (std::size_t i = 0; i < ring_.size(); ++i) {
        ordered[i] = ring_[(ring_pos_ + i) % ring_.size()];
    }

    HalfCycleRms out;
    out.half_cycle_index = emitted_++;
    out.time_s = static_cast<double>(index + 1) / rate_;
    out.value = compute_rms(ordered, cfg_.formula);
    pending_.push_back(out);
}

}  // namespace sagsurge
