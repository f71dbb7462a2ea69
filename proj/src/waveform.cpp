#include "sagsurge/waveform.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace sagsurge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDefaultFidvrSagPortion = 0.3;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Uniform draw in (0, 1]: always safe as a log() argument.
double unit_open(std::uint64_t bits) {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Counter-based Gaussian noise: a pure function of (seed, t), so sample n
// of a synthesis run depends only on (seed, n) regardless of evaluation
// order, and two runs agree bit for bit.
double gaussian_noise(std::uint64_t seed, double t, double rms) {
    if (rms <= 0.0) return 0.0;
    const std::uint64_t counter = std::bit_cast<std::uint64_t>(t);
    const std::uint64_t h1 = splitmix64(seed ^ splitmix64(counter));
    const std::uint64_t h2 = splitmix64(h1);
    const double u1 = unit_open(h1);
    const double u2 = unit_open(h2);
    return rms * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

const Disturbance* event_at(const Scenario& s, double t) {
    for (const Disturbance& e : s.events) {
        if (t >= e.start_s && t < e.end_s()) return &e;
    }
    return nullptr;
}

double lerp_rms(double from, double to, double frac) {
    return from + (to - from) * frac;
}

[[noreturn]] void semantic_error(const std::string& field, const std::string& msg) {
    throw ScenarioError(msg, 0, field);
}

}  // namespace

ScenarioError::ScenarioError(const std::string& message, std::size_t line,
                             std::string field)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                  : message),
      line_(line),
      field_(std::move(field)) {}

Disturbance Disturbance::sag(double start_s, double span_s, double target_rms,
                             double ramp_s) {
    return {DisturbanceKind::Sag, start_s, span_s, target_rms, 0.0, 0.0, 0.0, ramp_s};
}

Disturbance Disturbance::surge(double start_s, double span_s, double target_rms,
                               double ramp_s) {
    return {DisturbanceKind::Surge, start_s, span_s, target_rms, 0.0, 0.0, 0.0, ramp_s};
}

Disturbance Disturbance::fidvr(double start_s, double span_s, double sag_rms,
                               double surge_rms, double sag_span_s) {
    if (sag_span_s < 0.0) sag_span_s = kDefaultFidvrSagPortion * span_s;
    return {DisturbanceKind::Fidvr, start_s, span_s, 0.0,
            sag_rms, surge_rms, sag_span_s, 0.0};
}

void validate(const Scenario& s) {
    if (!finite_positive(s.nominal_rms)) semantic_error("nominal_rms", "nominal_rms must be > 0");
    if (!finite_positive(s.frequency_hz)) semantic_error("frequency", "frequency must be > 0");
    if (!finite_positive(s.duration_s)) semantic_error("duration", "duration must be > 0");
    if (!(std::isfinite(s.noise_rms) && s.noise_rms >= 0.0))
        semantic_error("noise_rms", "noise_rms must be >= 0");
    if (!std::isfinite(s.initial_phase_rad)) semantic_error("phase", "phase must be finite");

    for (const Harmonic& h : s.harmonics) {
        if (h.order < 2) semantic_error("harmonic.order", "harmonic order must be >= 2");
        if (!(std::isfinite(h.amplitude_fraction) && h.amplitude_fraction >= 0.0))
            semantic_error("harmonic.amp", "harmonic amplitude fraction must be >= 0");
    }
    for (std::size_t i = 0; i < s.harmonics.size(); ++i) {
        for (std::size_t j = i + 1; j < s.harmonics.size(); ++j) {
            if (s.harmonics[i].order == s.harmonics[j].order)
                semantic_error("harmonic.order",
                               "duplicate harmonic order " +
                                   std::to_string(s.harmonics[i].order));
        }
    }

    for (const Disturbance& e : s.events) {
        if (!finite_positive(e.span_s)) semantic_error("span", "event span must be > 0");
        if (!(std::isfinite(e.start_s) && e.start_s >= 0.0))
            semantic_error("start", "event start must be >= 0");
        if (e.end_s() > s.duration_s)
            semantic_error("span", "event extends past scenario duration");
        if (!(std::isfinite(e.ramp_s) && e.ramp_s >= 0.0 && e.ramp_s <= e.span_s / 2.0))
            semantic_error("ramp", "ramp must satisfy 0 <= ramp <= span/2");
        switch (e.kind) {
            case DisturbanceKind::Sag:
                if (!(std::isfinite(e.target_rms) && e.target_rms >= 0.0))
                    semantic_error("target", "sag target must be >= 0");
                if (e.target_rms >= s.nominal_rms)
                    semantic_error("target", "sag target must be below nominal_rms");
                break;
            case DisturbanceKind::Surge:
                if (!std::isfinite(e.target_rms) || e.target_rms <= s.nominal_rms)
                    semantic_error("target", "surge target must be above nominal_rms");
                break;
            case DisturbanceKind::Fidvr:
                if (!(std::isfinite(e.fidvr_sag_rms) && e.fidvr_sag_rms >= 0.0))
                    semantic_error("sag", "fidvr sag level must be >= 0");
                if (!(std::isfinite(e.fidvr_surge_rms) && e.fidvr_surge_rms >= 0.0))
                    semantic_error("surge", "fidvr surge level must be >= 0");
                if (!(e.fidvr_sag_span_s > 0.0 && e.fidvr_sag_span_s < e.span_s))
                    semantic_error("sag_span", "fidvr sag_span must lie inside the span");
                break;
        }
    }

    // Overlap check over [start, start+span) intervals.
    std::vector<const Disturbance*> sorted;
    sorted.reserve(s.events.size());
    for (const Disturbance& e : s.events) sorted.push_back(&e);
    std::sort(sorted.begin(), sorted.end(),
              [](const Disturbance* a, const Disturbance* b) {
                  return a->start_s < b->start_s;
              });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i - 1]->end_s() > sorted[i]->start_s)
            semantic_error("start", "events overlap in time");
    }
}

double envelope_rms(const Scenario& s, double t) {
    if (!(t >= 0.0 && t <= s.duration_s))
        throw std::out_of_range("envelope_rms: t outside [0, duration]");

    const Disturbance* e = event_at(s, t);
    if (e == nullptr) return s.nominal_rms;

    const double u = t - e->start_s;
    const double plateau = [&] {
        switch (e->kind) {
            case DisturbanceKind::Fidvr:
                return u < e->fidvr_sag_span_s ? e->fidvr_sag_rms : e->fidvr_surge_rms;
            default:
                return e->target_rms;
        }
    }();

    if (e->ramp_s > 0.0) {
        if (u < e->ramp_s) return lerp_rms(s.nominal_rms, plateau, u / e->ramp_s);
        const double tail = e->span_s - u;
        if (tail < e->ramp_s) return lerp_rms(s.nominal_rms, plateau, tail / e->ramp_s);
    }
    return plateau;
}

double sample_at(const Scenario& s, double t) {
    const double env = envelope_rms(s, t);
    const double theta = kTwoPi * s.frequency_hz * t + s.initial_phase_rad;
    double v = std::sin(theta);
    for (const Harmonic& h : s.harmonics) {
        v += h.amplitude_fraction * std::sin(static_cast<double>(h.order) * theta);
    }
    v *= std::numbers::sqrt2 * env;
    return v + gaussian_noise(s.seed, t, s.noise_rms);
}

std::vector<double> synthesize(const Scenario& s, double rate_hz) {
    if (!finite_positive(rate_hz))
        throw std::invalid_argument("synthesize: rate must be > 0");
    validate(s);

    const auto count =
        static_cast<std::size_t>(std::floor(s.duration_s * rate_hz + 1e-9));
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        out.push_back(sample_at(s, static_cast<double>(n) / rate_hz));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scenario file parsing

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t line_number = 0;

    bool next_line(std::string_view& line, std::size_t& number) {
        if (pos >= text.size()) return false;
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        line = text.substr(pos, end - pos);
        pos = end + 1;
        number = ++line_number;
        return true;
    }
};

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

double parse_double(std::string_view value, std::size_t line, std::string_view key) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out))
        throw ScenarioError("invalid number '" + std::string(value) + "' for " +
                                std::string(key),
                            line, std::string(key));
    return out;
}

std::uint64_t parse_seed(std::string_view value, std::size_t line) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ScenarioError("invalid integer '" + std::string(value) + "' for seed",
                            line, "seed");
    return static_cast<std::uint64_t>(out);
}

int parse_int(std::string_view value, std::size_t line, std::string_view key) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ScenarioError("invalid integer '" + std::string(value) + "' for " +
                                std::string(key),
                            line, std::string(key));
    return out;
}

// key=value pairs after a directive name, e.g. "sag start=0.5 span=0.1 target=70".
struct Args {
    std::vector<std::pair<std::string_view, std::string_view>> pairs;
    std::size_t line;

    std::string_view require(std::string_view key, std::string_view directive) const {
        for (const auto& [k, v] : pairs) {
            if (k == key) return v;
        }
        throw ScenarioError("missing '" + std::string(key) + "' in " +
                                std::string(directive) + " directive",
                            line, std::string(key));
    }

    std::string_view optional(std::string_view key) const {
        for (const auto& [k, v] : pairs) {
            if (k == key) return v;
        }
        return {};
    }

    void check_known(std::initializer_list<std::string_view> known,
                     std::string_view directive) const {
        for (const auto& [k, v] : pairs) {
            (void)v;
            if (std::find(known.begin(), known.end(), k) == known.end())
                throw ScenarioError("unknown key '" + std::string(k) + "' in " +
                                        std::string(directive) + " directive",
                                    line, std::string(k));
        }
    }
};

Args parse_args(const std::vector<std::string_view>& tokens, std::size_t line) {
    Args args;
    args.line = line;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const std::size_t eq = tokens[i].find('=');
        if (eq == std::string_view::npos || eq == 0 || eq == tokens[i].size() - 1)
            throw ScenarioError("expected key=value, got '" + std::string(tokens[i]) + "'",
                                line);
        args.pairs.emplace_back(tokens[i].substr(0, eq), tokens[i].substr(eq + 1));
    }
    return args;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    Scenario s;
    bool saw_duration = false;

    Cursor cursor{text};
    std::string_view raw;
    std::size_t line = 0;
    while (cursor.next_line(raw, line)) {
        std::string_view body = raw;
        if (const std::size_t hash = body.find('#'); hash != std::string_view::npos)
            body = body.substr(0, hash);
        const std::vector<std::string_view> tokens = split_tokens(body);
        if (tokens.empty()) continue;

        const std::string_view head = tokens[0];
        const std::size_t eq = head.find('=');
        if (eq != std::string_view::npos) {
            // scalar directive: key=value, no further tokens allowed
            if (tokens.size() > 1)
                throw ScenarioError("unexpected token '" + std::string(tokens[1]) + "'",
                                    line);
            const std::string_view key = head.substr(0, eq);
            const std::string_view value = head.substr(eq + 1);
            if (key == "nominal_rms") {
                s.nominal_rms = parse_double(value, line, key);
            } else if (key == "frequency") {
                s.frequency_hz = parse_double(value, line, key);
            } else if (key == "phase") {
                s.initial_phase_rad = parse_double(value, line, key);
            } else if (key == "duration") {
                s.duration_s = parse_double(value, line, key);
                saw_duration = true;
            } else if (key == "noise_rms") {
                s.noise_rms = parse_double(value, line, key);
            } else if (key == "seed") {
                s.seed = parse_seed(value, line);
            } else {
                throw ScenarioError("unknown key '" + std::string(key) + "'", line,
                                    std::string(key));
            }
            continue;
        }

        const Args args = parse_args(tokens, line);
        if (head == "harmonic") {
            args.check_known({"order", "amp"}, head);
            Harmonic h;
            h.order = parse_int(args.require("order", head), line, "order");
            h.amplitude_fraction = parse_double(args.require("amp", head), line, "amp");
            s.harmonics.push_back(h);
        } else if (head == "sag" || head == "surge") {
            args.check_known({"start", "span", "target", "ramp"}, head);
            const double start = parse_double(args.require("start", head), line, "start");
            const double span = parse_double(args.require("span", head), line, "span");
            const double target = parse_double(args.require("target", head), line, "target");
            double ramp = 0.0;
            if (const std::string_view r = args.optional("ramp"); !r.empty())
                ramp = parse_double(r, line, "ramp");
            s.events.push_back(head == "sag" ? Disturbance::sag(start, span, target, ramp)
                                             : Disturbance::surge(start, span, target, ramp));
        } else if (head == "fidvr") {
            args.check_known({"start", "span", "sag", "surge", "sag_span"}, head);
            const double start = parse_double(args.require("start", head), line, "start");
            const double span = parse_double(args.require("span", head), line, "span");
            const double sag = parse_double(args.require("sag", head), line, "sag");
            const double surge = parse_double(args.require("surge", head), line, "surge");
            double sag_span = -1.0;
            if (const std::string_view v = args.optional("sag_span"); !v.empty())
                sag_span = parse_double(v, line, "sag_span");
            s.events.push_back(Disturbance::fidvr(start, span, sag, surge, sag_span));
        } else {
            throw ScenarioError("unknown directive '" + std::string(head) + "'", line,
                                std::string(head));
        }
    }

    if (!saw_duration)
        throw ScenarioError("missing required 'duration=' directive", 0, "duration");
    validate(s);
    return s;
}

}  // namespace sagsurge
