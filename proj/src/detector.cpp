#include "sagsurge/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sagsurge {

void validate(const DetectorConfig& cfg) {
    if (!(std::isfinite(cfg.lower_bound) && cfg.lower_bound > 0.0))
        throw std::invalid_argument("lower bound must be > 0");
    if (!(std::isfinite(cfg.upper_bound) && cfg.upper_bound > cfg.lower_bound))
        throw std::invalid_argument("upper bound must exceed lower bound");
    if (cfg.trip_count < 1) throw std::invalid_argument("trip count must be >= 1");
    if (cfg.reconnect_count < 1)
        throw std::invalid_argument("reconnect count must be >= 1");
}

Classification classify(double rms, const DetectorConfig& cfg) {
    if (rms < cfg.lower_bound) return Classification::Sag;
    if (rms > cfg.upper_bound) return Classification::Surge;
    return Classification::InBounds;
}

Detector::Detector(DetectorConfig cfg) : cfg_(cfg) { validate(cfg_); }

std::vector<Action> Detector::step(const HalfCycleRms& m) {
    if (have_last_ && m.half_cycle_index <= last_index_)
        throw std::invalid_argument("measurement indices must be strictly increasing");
    have_last_ = true;
    last_index_ = m.half_cycle_index;

    std::vector<Action> out;
    const auto emit = [&](ActionKind kind) {
        out.push_back({m.half_cycle_index, kind});
        actions_.push_back(out.back());
    };

    const Classification cls = classify(m.value, cfg_);

    // LED tracks the latest measurement; only edges produce actions.
    const LedColor want = cls == Classification::InBounds ? LedColor::Green : LedColor::Red;
    if (want != led_) {
        led_ = want;
        emit(want == LedColor::Red ? ActionKind::LedRed : ActionKind::LedGreen);
    }

    if (mode_ == DetectorMode::Monitoring) {
        if (cls == Classification::InBounds) {
            violations_ = 0;
            pending_ = std::nullopt;
            return out;
        }
        if (violations_ == 0) {
            run_onset_ = m.half_cycle_index;
            run_min_ = m.value;
            run_max_ = m.value;
        } else {
            run_min_ = std::min(run_min_, m.value);
            run_max_ = std::max(run_max_, m.value);
        }
        pending_ = cls;
        ++violations_;
        if (violations_ >= cfg_.trip_count) {
            emit(ActionKind::OpenRelay);
            DisturbanceEvent ev;
            ev.event_class = cls;  // class of the measurement that tripped
            ev.onset_half_cycle = run_onset_;
            ev.trip_half_cycle = m.half_cycle_index;
            ev.end_half_cycle = m.half_cycle_index;
            ev.extremal_rms = cls == Classification::Sag ? run_min_ : run_max_;
            events_.push_back(ev);
            mode_ = DetectorMode::Tripped;
            violations_ = 0;
            compliant_ = 0;
            pending_ = std::nullopt;
        }
        return out;
    }

    // Tripped: wait out the disturbance.
    DisturbanceEvent& ev = events_.back();
    if (cls == Classification::InBounds) {
        pending_ = std::nullopt;
        ++compliant_;
        if (compliant_ >= cfg_.reconnect_count) {
            emit(ActionKind::CloseRelay);
            ev.reconnect_half_cycle = m.half_cycle_index;
            mode_ = DetectorMode::Monitoring;
            compliant_ = 0;
            violations_ = 0;
        }
        return out;
    }

    pending_ = cls;
    compliant_ = 0;  // any violation restarts the reconnect wait
    ev.end_half_cycle = m.half_cycle_index;
    if (ev.event_class == Classification::Sag) {
        ev.extremal_rms = std::min(ev.extremal_rms, m.value);
    } else {
        ev.extremal_rms = std::max(ev.extremal_rms, m.value);
    }
    return out;
}

DetectorRun run_detector(std::span<const HalfCycleRms> stream,
                         const DetectorConfig& cfg) {
    Detector det(cfg);
    for (const HalfCycleRms& m : stream) det.step(m);
    DetectorRun out;
    out.events = det.events();
    out.actions = det.actions();
    out.final_relay = det.relay();
    out.final_mode = det.mode();
    return out;
}

}  // namespace sagsurge
