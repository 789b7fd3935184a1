#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "pod/bytes.hpp"

namespace pod {

struct CodecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Canonical big-endian primitives. Every signed payload and wire message in
// the protocol is built from these so encodings are platform-independent.
void putU8(Bytes& out, std::uint8_t v);
void putU32(Bytes& out, std::uint32_t v);
void putU64(Bytes& out, std::uint64_t v);
void putLenPrefixed(Bytes& out, std::string_view data);  // 4-byte length + raw bytes

// Bounds-checked sequential reader over an encoded buffer.
class ByteReader {
public:
    explicit ByteReader(std::string_view data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    Bytes lenPrefixed();

    bool atEnd() const { return pos_ == data_.size(); }
    std::size_t remaining() const { return data_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (data_.size() - pos_ < n) throw CodecError("truncated buffer");
    }

    std::string_view data_;
    std::size_t pos_ = 0;
};

constexpr std::uint8_t kVoteBodyVersion = 0x01;

struct SignedVoteBody {
    Bytes sid;
    Bytes tx;
    std::uint64_t ts = 0;
    std::uint64_t sn = 0;

    bool operator==(const SignedVoteBody&) const = default;
};

// Normative signing payload for votes:
//   0x01 | len4(sid) | sid | len4(tx) | tx | ts:u64 | sn:u64
// Injective over (sid, tx, ts, sn). Throws CodecError if a field cannot be
// length-prefixed in 4 bytes.
Bytes encodeVoteBody(const SignedVoteBody& body);
std::optional<SignedVoteBody> decodeVoteBody(std::string_view data);

// Guard shared by every length-prefixed field.
bool lengthFitsPrefix(std::size_t len);

// Wire frames: 1-byte tag + 4-byte big-endian length + payload.
enum class FrameTag : std::uint8_t {
    Connect = 0x01,
    Write = 0x02,
    Vote = 0x03,
};

struct Frame {
    FrameTag tag;
    Bytes payload;
};

Bytes encodeFrame(FrameTag tag, std::string_view payload);
// Parses one frame from the front of `data`; returns the frame and the number
// of bytes consumed, or nullopt if `data` does not yet hold a complete frame.
std::optional<std::pair<Frame, std::size_t>> tryDecodeFrame(std::string_view data);

}  // namespace pod
