#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "sagsurge/frontend.hpp"
#include "sagsurge/rms.hpp"
#include "sagsurge/waveform.hpp"

using namespace sagsurge;

namespace {

std::vector<double> sine(double amplitude, double phase, std::size_t count,
                         double rate = 3600.0) {
    std::vector<double> out(count);
    for (std::size_t n = 0; n < count; ++n) {
        out[n] = amplitude *
                 std::sin(2.0 * std::numbers::pi * 60.0 * static_cast<double>(n) / rate +
                          phase);
    }
    return out;
}

std::vector<HalfCycleRms> feed(RmsEngine& engine, const std::vector<double>& samples) {
    std::vector<HalfCycleRms> out;
    for (std::size_t n = 0; n < samples.size(); ++n) {
        if (const auto m = engine.push_sample(samples[n], n)) out.push_back(*m);
    }
    return out;
}

}  // namespace

TEST_CASE("constant window gives its own value back") {
    const std::vector<double> window(60, 1.0);
    CHECK(compute_rms(window, RmsFormula::Corrected) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("full cycle of an exact sine measures amplitude over sqrt(2)") {
    for (const double phase : {0.0, 0.3, 1.0, 2.5, 4.0, 6.0}) {
        const std::vector<double> window =
            sine(120.0 * std::numbers::sqrt2, phase, 60);
        const double rms = compute_rms(window, RmsFormula::Corrected);
        CHECK(std::abs(rms - 120.0) / 120.0 < 1e-9);

        const double literal = compute_rms(window, RmsFormula::PaperLiteral);
        CHECK(literal == doctest::Approx(120.0 / std::sqrt(60.0)).epsilon(1e-12));
        CHECK(literal ==
              doctest::Approx(rms / std::sqrt(60.0)).epsilon(1e-15));
    }
}

TEST_CASE("paper literal value lands near 15.492") {
    const std::vector<double> window = sine(120.0 * std::numbers::sqrt2, 0.0, 60);
    CHECK(compute_rms(window, RmsFormula::PaperLiteral) ==
          doctest::Approx(15.4919).epsilon(1e-4));
}

TEST_CASE("empty window is rejected") {
    CHECK_THROWS_AS(compute_rms({}, RmsFormula::Corrected), std::invalid_argument);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(validate(RmsConfig{1, 1, SyncMode::FixedStride, RmsFormula::Corrected}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(RmsConfig{60, 0, SyncMode::FixedStride, RmsFormula::Corrected}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(RmsConfig{60, 61, SyncMode::FixedStride, RmsFormula::Corrected}),
                    std::invalid_argument);
    CHECK_NOTHROW(validate(RmsConfig{}));
}

TEST_CASE("emission cadence: one measurement per semi-cycle after the first window") {
    RmsEngine engine({}, 3600.0);
    const std::vector<double> samples = sine(120.0 * std::numbers::sqrt2, 0.0, 3600);
    const std::vector<HalfCycleRms> ms = feed(engine, samples);

    CHECK(ms.size() == 119);  // floor((3600 - 60) / 30) + 1
    CHECK(engine.alignment().phase == AlignmentPhase::Anchored);
    CHECK(engine.alignment().anchor_index == 0);

    // first window completes at sample 60; time is the window-end boundary
    CHECK(ms[0].half_cycle_index == 0);
    CHECK(ms[0].time_s == doctest::Approx(60.0 / 3600.0).epsilon(1e-12));
    CHECK(ms[1].time_s == doctest::Approx(90.0 / 3600.0).epsilon(1e-12));
    for (std::size_t i = 0; i < ms.size(); ++i) {
        CHECK(ms[i].half_cycle_index == i);
        CHECK(ms[i].value == doctest::Approx(120.0).epsilon(1e-9));
    }
}

TEST_CASE("no emission before the first full window") {
    RmsEngine engine({}, 3600.0);
    const std::vector<double> samples = sine(120.0 * std::numbers::sqrt2, 0.0, 60);
    for (std::size_t n = 0; n < 59; ++n) {
        CHECK_FALSE(engine.push_sample(samples[n], n).has_value());
    }
    CHECK(engine.push_sample(samples[59], 59).has_value());
}

TEST_CASE("alignment anchors at the rising zero crossing") {
    SUBCASE("phase 0 anchors at index 0") {
        RmsEngine engine({}, 3600.0);
        feed(engine, sine(120.0 * std::numbers::sqrt2, 0.0, 200));
        CHECK(engine.alignment().phase == AlignmentPhase::Anchored);
        CHECK(engine.alignment().anchor_index == 0);
    }
    SUBCASE("phase pi anchors at index 30") {
        RmsEngine engine({}, 3600.0);
        feed(engine, sine(120.0 * std::numbers::sqrt2, std::numbers::pi, 200));
        CHECK(engine.alignment().phase == AlignmentPhase::Anchored);
        CHECK(engine.alignment().anchor_index == 30);
    }
    SUBCASE("all-zero input falls back to fixed stride at index 120") {
        RmsEngine engine({}, 3600.0);
        std::vector<HalfCycleRms> ms;
        for (std::size_t n = 0; n < 400; ++n) {
            if (const auto m = engine.push_sample(0.0, n)) ms.push_back(*m);
        }
        CHECK(engine.alignment().phase == AlignmentPhase::FallbackAnchored);
        CHECK(engine.alignment().anchor_index == 120);
        // windows resume on the fallback grid: first completes at sample 180
        REQUIRE(!ms.empty());
        CHECK(ms[0].time_s == doctest::Approx(180.0 / 3600.0).epsilon(1e-12));
        CHECK(ms[0].value == 0.0);
    }
    SUBCASE("sub-threshold amplitude never anchors on crossings") {
        RmsEngine engine({}, 3600.0);
        feed(engine, sine(7.0, 0.0, 400));  // peak 7 V < 10 V gate
        CHECK(engine.alignment().phase == AlignmentPhase::FallbackAnchored);
        CHECK(engine.alignment().anchor_index == 120);
    }
    SUBCASE("random phases anchor on a true sign change within two cycles") {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        for (int trial = 0; trial < 200; ++trial) {
            const std::vector<double> samples =
                sine(120.0 * std::numbers::sqrt2, phase(rng), 300);
            RmsEngine engine({}, 3600.0);
            feed(engine, samples);
            REQUIRE(engine.alignment().phase == AlignmentPhase::Anchored);
            const std::uint64_t a = engine.alignment().anchor_index;
            REQUIRE(a < 120);
            REQUIRE(samples[a] <= 0.0);
            REQUIRE(samples[a + 1] > 0.0);
        }
    }
}

TEST_CASE("fixed stride mode skips the scan entirely") {
    RmsConfig cfg;
    cfg.sync_mode = SyncMode::FixedStride;
    RmsEngine engine(cfg, 3600.0);
    CHECK(engine.alignment().phase == AlignmentPhase::Anchored);
    CHECK(engine.alignment().anchor_index == 0);

    const std::vector<HalfCycleRms> ms =
        feed(engine, sine(120.0 * std::numbers::sqrt2, 1.234, 3600));
    CHECK(ms.size() == 119);
}

TEST_CASE("indices must increase strictly") {
    RmsEngine engine({}, 3600.0);
    engine.push_sample(0.0, 5);
    CHECK_THROWS_AS(engine.push_sample(1.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(engine.push_sample(1.0, 4), std::invalid_argument);
    CHECK_NOTHROW(engine.push_sample(1.0, 6));
}

TEST_CASE("streaming engine matches batch slicing on random scenarios") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> nominal(20.0, 200.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> noise(0.0, 10.0);
    std::uniform_int_distribution<std::uint64_t> seed;

    for (int trial = 0; trial < 50; ++trial) {
        Scenario s;
        s.duration_s = 0.5;
        s.nominal_rms = nominal(rng);
        s.initial_phase_rad = phase(rng);
        s.noise_rms = noise(rng);
        s.seed = seed(rng);
        if (trial % 3 == 0) {
            s.events.push_back(
                Disturbance::sag(0.2, 0.1, s.nominal_rms * 0.5));
        }

        for (const RmsFormula formula : {RmsFormula::Corrected, RmsFormula::PaperLiteral}) {
            RmsConfig cfg;
            cfg.formula = formula;
            cfg.sync_mode = trial % 2 == 0 ? SyncMode::ZeroCrossing
                                           : SyncMode::FixedStride;

            const std::vector<double> samples = synthesize(s, 3600.0);
            RmsEngine engine(cfg, 3600.0);
            const std::vector<HalfCycleRms> streamed = feed(engine, samples);
            const testutil::NaiveRmsResult sliced =
                testutil::naive_rms(samples, cfg, 3600.0);

            REQUIRE(sliced.anchor.has_value());
            CHECK(engine.alignment().anchor_index == *sliced.anchor);
            REQUIRE(streamed.size() == sliced.values.size());
            for (std::size_t i = 0; i < streamed.size(); ++i) {
                REQUIRE(streamed[i].value == sliced.values[i]);
            }
        }
    }
}

TEST_CASE("quantized pipeline feed anchors like the analog waveform") {
    Scenario s;
    s.duration_s = 0.2;
    const Acquisition acq = acquire(s);

    RmsEngine engine({}, 3600.0);
    for (const AdcCode& c : acq.codes) {
        engine.push_sample(reconstruct(c), c.index);
    }
    // sample 0 reconstructs to -0.176 V (<= 0), sample 1 is positive
    CHECK(engine.alignment().phase == AlignmentPhase::Anchored);
    CHECK(engine.alignment().anchor_index == 0);
}

TEST_CASE("mixed window during a step change blends old and new levels") {
    // 30 samples at 120 VRMS followed by 30 at 70 VRMS in one window:
    // each half contributes its own mean square, any alignment phase.
    std::vector<double> window;
    for (int n = 0; n < 30; ++n) {
        window.push_back(120.0 * std::numbers::sqrt2 *
                         std::sin(std::numbers::pi * n / 30.0 + 0.7));
    }
    for (int n = 30; n < 60; ++n) {
        window.push_back(70.0 * std::numbers::sqrt2 *
                         std::sin(std::numbers::pi * n / 30.0 + 0.7));
    }
    const double expected = std::sqrt((120.0 * 120.0 + 70.0 * 70.0) / 2.0);
    CHECK(compute_rms(window, RmsFormula::Corrected) ==
          doctest::Approx(expected).epsilon(1e-9));
}
