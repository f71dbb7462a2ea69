#include "sagsurge/telemetry.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace sagsurge {

namespace {

constexpr std::array<std::uint16_t, 256> make_crc_table() {
    std::array<std::uint16_t, 256> table{};
    for (int i = 0; i < 256; ++i) {
        auto crc = static_cast<std::uint16_t>(i << 8);
        for (int bit = 0; bit < 8; ++bit) {
            crc = (crc & 0x8000) != 0
                      ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                      : static_cast<std::uint16_t>(crc << 1);
        }
        table[static_cast<std::size_t>(i)] = crc;
    }
    return table;
}

constexpr std::array<std::uint16_t, 256> kCrcTable = make_crc_table();

constexpr std::size_t kHeaderBytes = 12;   // sync + version + type + seq + start
constexpr std::size_t kEventFrameBytes = 24;

void put_u16le(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

std::uint16_t get_u16le(std::span<const std::uint8_t> d, std::size_t at) {
    return static_cast<std::uint16_t>(d[at] | (d[at + 1] << 8));
}

std::uint32_t get_u32le(std::span<const std::uint8_t> d, std::size_t at) {
    return static_cast<std::uint32_t>(d[at]) |
           (static_cast<std::uint32_t>(d[at + 1]) << 8) |
           (static_cast<std::uint32_t>(d[at + 2]) << 16) |
           (static_cast<std::uint32_t>(d[at + 3]) << 24);
}

void write_header(std::vector<std::uint8_t>& out, std::uint8_t type,
                  std::uint32_t sequence, std::uint32_t start_index) {
    out.push_back(kSyncByte0);
    out.push_back(kSyncByte1);
    out.push_back(kProtocolVersion);
    out.push_back(type);
    put_u32le(out, sequence);
    put_u32le(out, start_index);
}

// CRC covers everything after the sync pair, appended big-endian.
void seal(std::vector<std::uint8_t>& out, std::size_t frame_begin) {
    const std::uint16_t crc =
        crc16({out.data() + frame_begin + 2, out.size() - frame_begin - 2});
    out.push_back(static_cast<std::uint8_t>(crc >> 8));
    out.push_back(static_cast<std::uint8_t>(crc & 0xFF));
}

}  // namespace

std::uint16_t crc16(std::span<const std::uint8_t> data) {
    std::uint16_t crc = 0xFFFF;
    for (const std::uint8_t byte : data) {
        crc = static_cast<std::uint16_t>((crc << 8) ^
                                         kCrcTable[((crc >> 8) ^ byte) & 0xFF]);
    }
    return crc;
}

std::vector<std::uint8_t> encode_sample_frame(const SampleFrame& f) {
    if (f.codes.empty() || f.codes.size() > kMaxCodesPerFrame)
        throw std::invalid_argument("sample frame must carry 1..240 codes");

    std::vector<std::uint8_t> out;
    out.reserve(15 + 2 * f.codes.size());
    write_header(out, 0x01, f.sequence, f.start_index);
    out.push_back(static_cast<std::uint8_t>(f.codes.size()));
    for (const std::uint16_t code : f.codes) put_u16le(out, code);
    seal(out, 0);
    return out;
}

std::vector<std::uint8_t> encode_event_frame(const EventFrame& f) {
    std::vector<std::uint8_t> out;
    out.reserve(kEventFrameBytes);
    write_header(out, 0x02, f.sequence, f.start_index);
    out.push_back(static_cast<std::uint8_t>(f.kind));
    out.push_back(static_cast<std::uint8_t>(f.event_class));
    put_u32le(out, f.half_cycle_index);
    put_u32le(out, f.rms_millivolts);
    seal(out, 0);
    return out;
}

std::size_t DecodedStream::count(DiagnosticKind kind) const {
    std::size_t n = 0;
    for (const Diagnostic& d : diagnostics) {
        if (d.kind == kind) ++n;
    }
    return n;
}

DecodedStream decode_stream(std::span<const std::uint8_t> data) {
    DecodedStream out;
    bool have_seq = false;
    std::uint32_t prev_seq = 0;

    const auto check_crc = [&](std::size_t frame, std::size_t total) {
        const std::uint16_t computed =
            crc16(data.subspan(frame + 2, total - 4));
        const std::uint16_t stored = static_cast<std::uint16_t>(
            (data[frame + total - 2] << 8) | data[frame + total - 1]);
        return computed == stored;
    };

    const auto accept = [&](std::size_t frame, std::uint32_t seq) {
        if (have_seq && seq != prev_seq + 1) {
            out.diagnostics.push_back(
                {frame, DiagnosticKind::SequenceGap,
                 "sequence jumped from " + std::to_string(prev_seq) + " to " +
                     std::to_string(seq)});
        }
        have_seq = true;
        prev_seq = seq;
    };

    std::size_t p = 0;
    while (p + 2 <= data.size()) {
        if (data[p] != kSyncByte0 || data[p + 1] != kSyncByte1) {
            ++p;
            continue;
        }

        const auto fail = [&](DiagnosticKind kind, std::string reason) {
            out.diagnostics.push_back({p, kind, std::move(reason)});
            p += 2;  // resume scanning just past the sync pair
        };

        if (p + kHeaderBytes > data.size()) {
            fail(DiagnosticKind::Truncated, "header truncated");
            continue;
        }
        if (data[p + 2] != kProtocolVersion) {
            fail(DiagnosticKind::BadVersion,
                 "unsupported version " + std::to_string(data[p + 2]));
            continue;
        }

        const std::uint8_t type = data[p + 3];
        if (type == 0x01) {
            if (p + kHeaderBytes + 1 > data.size()) {
                fail(DiagnosticKind::Truncated, "sample frame truncated before count");
                continue;
            }
            const std::uint8_t count = data[p + 12];
            if (count == 0 || count > kMaxCodesPerFrame) {
                fail(DiagnosticKind::BadCount,
                     "sample count " + std::to_string(count) + " out of range");
                continue;
            }
            const std::size_t total = 15 + 2 * static_cast<std::size_t>(count);
            if (p + total > data.size()) {
                fail(DiagnosticKind::Truncated, "sample frame truncated");
                continue;
            }
            if (!check_crc(p, total)) {
                fail(DiagnosticKind::Crc, "sample frame CRC mismatch");
                continue;
            }
            SampleFrame f;
            f.sequence = get_u32le(data, p + 4);
            f.start_index = get_u32le(data, p + 8);
            f.codes.resize(count);
            for (std::size_t i = 0; i < count; ++i) {
                f.codes[i] = get_u16le(data, p + 13 + 2 * i);
            }
            accept(p, f.sequence);
            out.frames.emplace_back(std::move(f));
            p += total;
            continue;
        }
        if (type == 0x02) {
            if (p + kEventFrameBytes > data.size()) {
                fail(DiagnosticKind::Truncated, "event frame truncated");
                continue;
            }
            if (!check_crc(p, kEventFrameBytes)) {
                fail(DiagnosticKind::Crc, "event frame CRC mismatch");
                continue;
            }
            const std::uint8_t kind = data[p + 12];
            const std::uint8_t cls = data[p + 13];
            if (kind != 0x01 && kind != 0x02) {
                fail(DiagnosticKind::BadPayload,
                     "unknown event kind " + std::to_string(kind));
                continue;
            }
            if (cls > 0x02) {
                fail(DiagnosticKind::BadPayload,
                     "unknown event class " + std::to_string(cls));
                continue;
            }
            EventFrame f;
            f.sequence = get_u32le(data, p + 4);
            f.start_index = get_u32le(data, p + 8);
            f.kind = static_cast<EventKind>(kind);
            f.event_class = static_cast<WireEventClass>(cls);
            f.half_cycle_index = get_u32le(data, p + 14);
            f.rms_millivolts = get_u32le(data, p + 18);
            accept(p, f.sequence);
            out.frames.emplace_back(std::move(f));
            p += kEventFrameBytes;
            continue;
        }
        fail(DiagnosticKind::BadType, "unknown frame type " + std::to_string(type));
    }
    return out;
}

void TelemetryWriter::push_code(std::uint64_t sample_index, std::uint16_t code) {
    if (pending_.empty()) pending_start_ = static_cast<std::uint32_t>(sample_index);
    pending_.push_back(code);
    if (pending_.size() >= kMaxCodesPerFrame) flush();
}

void TelemetryWriter::push_event(EventKind kind, WireEventClass event_class,
                                 std::uint32_t half_cycle_index,
                                 std::uint32_t rms_millivolts,
                                 std::uint32_t start_index) {
    flush();  // keep frame order aligned with acquisition order
    EventFrame f;
    f.sequence = next_sequence_++;
    f.start_index = start_index;
    f.kind = kind;
    f.event_class = event_class;
    f.half_cycle_index = half_cycle_index;
    f.rms_millivolts = rms_millivolts;
    const std::vector<std::uint8_t> bytes = encode_event_frame(f);
    out_.insert(out_.end(), bytes.begin(), bytes.end());
}

void TelemetryWriter::flush() {
    if (pending_.empty()) return;
    SampleFrame f;
    f.sequence = next_sequence_++;
    f.start_index = pending_start_;
    f.codes = std::move(pending_);
    pending_.clear();
    const std::vector<std::uint8_t> bytes = encode_sample_frame(f);
    out_.insert(out_.end(), bytes.begin(), bytes.end());
}

std::vector<std::uint8_t> TelemetryWriter::take() {
    flush();
    return std::exchange(out_, {});
}

}  // namespace sagsurge
