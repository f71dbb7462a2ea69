#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sagsurge/rms.hpp"

namespace sagsurge {

struct DetectorConfig {
    double lower_bound = 99.0;    // 0.9 x 110 VRMS
    double upper_bound = 132.0;   // 1.1 x 120 VRMS
    int trip_count = 3;           // consecutive violating semi-cycles to trip
    int reconnect_count = 360;    // consecutive compliant semi-cycles to reconnect
};

void validate(const DetectorConfig& cfg);

enum class Classification { InBounds, Sag, Surge };

/// Sag below lower_bound, Surge above upper_bound; the boundary values
/// themselves are compliant.
Classification classify(double rms, const DetectorConfig& cfg);

enum class RelayState { Open, Closed };
enum class LedColor { Green, Red };
enum class DetectorMode { Monitoring, Tripped };
enum class ActionKind { OpenRelay, CloseRelay, LedRed, LedGreen };

struct Action {
    std::uint32_t half_cycle_index = 0;
    ActionKind kind = ActionKind::OpenRelay;
};

/// One recorded disturbance: created when the relay trips, closed when it
/// reconnects. extremal_rms is the minimum RMS seen for a Sag event and
/// the maximum for a Surge event.
struct DisturbanceEvent {
    Classification event_class = Classification::Sag;
    std::uint32_t onset_half_cycle = 0;  // first measurement of the tripping run
    std::uint32_t trip_half_cycle = 0;
    std::uint32_t end_half_cycle = 0;    // last violating measurement
    double extremal_rms = 0.0;
    std::optional<std::uint32_t> reconnect_half_cycle;
};

/// Trip/reconnect state machine.
///
/// Monitoring counts consecutive violating measurements (mixed sag/surge
/// classes share the counter) and opens the relay at trip_count; Tripped
/// counts consecutive compliant measurements and closes it at
/// reconnect_count, with any violation fully resetting the counter. The
/// LED mirrors the latest measurement's classification.
class Detector {
public:
    explicit Detector(DetectorConfig cfg = {});

    /// Feeds one measurement; returns the actions it caused. Indices must
    /// be strictly increasing.
    std::vector<Action> step(const HalfCycleRms& m);

    DetectorMode mode() const { return mode_; }
    RelayState relay() const {
        return mode_ == DetectorMode::Monitoring ? RelayState::Closed
                                                 : RelayState::Open;
    }
    LedColor led() const { return led_; }
    /// Class of the latest violating measurement; empty when the latest
    /// measurement was in bounds.
    std::optional<Classification> pending_class() const { return pending_; }
    int violation_count() const { return violations_; }
    int compliant_count() const { return compliant_; }

    const std::vector<DisturbanceEvent>& events() const { return events_; }
    const std::vector<Action>& actions() const { return actions_; }
    const DetectorConfig& config() const { return cfg_; }

private:
    DetectorConfig cfg_;
    DetectorMode mode_ = DetectorMode::Monitoring;
    LedColor led_ = LedColor::Green;
    std::optional<Classification> pending_;
    int violations_ = 0;  // Monitoring: consecutive violations
    int compliant_ = 0;   // Tripped: consecutive compliant

    // provisional run info before a trip
    std::uint32_t run_onset_ = 0;
    double run_min_ = 0.0;
    double run_max_ = 0.0;

    bool have_last_ = false;
    std::uint32_t last_index_ = 0;

    std::vector<DisturbanceEvent> events_;
    std::vector<Action> actions_;
};

struct DetectorRun {
    std::vector<DisturbanceEvent> events;
    std::vector<Action> actions;
    RelayState final_relay = RelayState::Closed;
    DetectorMode final_mode = DetectorMode::Monitoring;
};

/// Folds Detector::step over an ordered stream.
DetectorRun run_detector(std::span<const HalfCycleRms> stream,
                         const DetectorConfig& cfg = {});

}  // namespace sagsurge
