#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sagsurge {

/// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no final
/// xor. Check value: crc16("123456789") == 0x29B1.
std::uint16_t crc16(std::span<const std::uint8_t> data);

inline constexpr std::size_t kMaxCodesPerFrame = 240;
inline constexpr std::uint8_t kSyncByte0 = 0xA5;
inline constexpr std::uint8_t kSyncByte1 = 0x5A;
inline constexpr std::uint8_t kProtocolVersion = 0x01;

struct SampleFrame {
    std::uint32_t sequence = 0;
    std::uint32_t start_index = 0;
    std::vector<std::uint16_t> codes;  // 1..240

    bool operator==(const SampleFrame&) const = default;
};

enum class EventKind : std::uint8_t { Trip = 0x01, Reconnect = 0x02 };
enum class WireEventClass : std::uint8_t {
    NotApplicable = 0x00,
    Sag = 0x01,
    Surge = 0x02,
};

struct EventFrame {
    std::uint32_t sequence = 0;
    std::uint32_t start_index = 0;
    EventKind kind = EventKind::Trip;
    WireEventClass event_class = WireEventClass::NotApplicable;
    std::uint32_t half_cycle_index = 0;
    std::uint32_t rms_millivolts = 0;

    bool operator==(const EventFrame&) const = default;
};

using Frame = std::variant<SampleFrame, EventFrame>;

/// Wire layout: A5 5A | version | type | sequence LE u32 | start_index LE
/// u32 | payload | CRC-16 big-endian over everything after the sync.
/// Sample payload: count u8 then codes as u16 LE (total 15 + 2*count).
/// Event payload: kind, class, half_cycle_index LE u32, rms LE u32 (total 24).
std::vector<std::uint8_t> encode_sample_frame(const SampleFrame& f);
std::vector<std::uint8_t> encode_event_frame(const EventFrame& f);

enum class DiagnosticKind {
    Crc,
    Truncated,
    BadVersion,
    BadType,
    BadCount,
    BadPayload,
    SequenceGap,
};

struct Diagnostic {
    std::size_t offset = 0;  // byte offset of the offending region
    DiagnosticKind kind = DiagnosticKind::Crc;
    std::string reason;
};

struct DecodedStream {
    std::vector<Frame> frames;
    std::vector<Diagnostic> diagnostics;

    std::size_t count(DiagnosticKind kind) const;
};

/// Total decoder: scans arbitrary bytes for sync patterns, checks version
/// and CRC, reports corruption and sequence gaps as diagnostics, and
/// resynchronizes at the next sync pattern. Never throws on input data.
DecodedStream decode_stream(std::span<const std::uint8_t> data);

/// Sequence-stamping encoder for one outgoing byte stream. Codes are
/// buffered and flushed as sample frames of at most 240 codes; events
/// flush pending codes first so frame order follows acquisition order.
class TelemetryWriter {
public:
    void push_code(std::uint64_t sample_index, std::uint16_t code);
    void push_event(EventKind kind, WireEventClass event_class,
                    std::uint32_t half_cycle_index, std::uint32_t rms_millivolts,
                    std::uint32_t start_index);
    /// Flushes any buffered codes into a final sample frame.
    void flush();

    const std::vector<std::uint8_t>& bytes() const { return out_; }
    std::vector<std::uint8_t> take();

private:
    std::uint32_t next_sequence_ = 0;
    std::uint32_t pending_start_ = 0;
    std::vector<std::uint16_t> pending_;
    std::vector<std::uint8_t> out_;
};

}  // namespace sagsurge
