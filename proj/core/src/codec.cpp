#include "pod/codec.hpp"

#include <limits>

namespace pod {

void putU8(Bytes& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

void putU32(Bytes& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

void putU64(Bytes& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

bool lengthFitsPrefix(std::size_t len) {
    return len <= std::numeric_limits<std::uint32_t>::max();
}

void putLenPrefixed(Bytes& out, std::string_view data) {
    if (!lengthFitsPrefix(data.size())) throw CodecError("field exceeds 4-byte length prefix");
    putU32(out, static_cast<std::uint32_t>(data.size()));
    out.append(data);
}

std::uint8_t ByteReader::u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
}

std::uint32_t ByteReader::u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | static_cast<std::uint8_t>(data_[pos_++]);
    return v;
}

std::uint64_t ByteReader::u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | static_cast<std::uint8_t>(data_[pos_++]);
    return v;
}

Bytes ByteReader::lenPrefixed() {
    std::uint32_t len = u32();
    need(len);
    Bytes out(data_.substr(pos_, len));
    pos_ += len;
    return out;
}

Bytes encodeVoteBody(const SignedVoteBody& body) {
    Bytes out;
    out.reserve(1 + 4 + body.sid.size() + 4 + body.tx.size() + 16);
    putU8(out, kVoteBodyVersion);
    putLenPrefixed(out, body.sid);
    putLenPrefixed(out, body.tx);
    putU64(out, body.ts);
    putU64(out, body.sn);
    return out;
}

std::optional<SignedVoteBody> decodeVoteBody(std::string_view data) {
    try {
        ByteReader r(data);
        if (r.u8() != kVoteBodyVersion) return std::nullopt;
        SignedVoteBody body;
        body.sid = r.lenPrefixed();
        body.tx = r.lenPrefixed();
        body.ts = r.u64();
        body.sn = r.u64();
        if (!r.atEnd()) return std::nullopt;
        return body;
    } catch (const CodecError&) {
        return std::nullopt;
    }
}

Bytes encodeFrame(FrameTag tag, std::string_view payload) {
    if (!lengthFitsPrefix(payload.size())) throw CodecError("frame payload exceeds 4-byte length prefix");
    Bytes out;
    out.reserve(5 + payload.size());
    putU8(out, static_cast<std::uint8_t>(tag));
    putU32(out, static_cast<std::uint32_t>(payload.size()));
    out.append(payload);
    return out;
}

std::optional<std::pair<Frame, std::size_t>> tryDecodeFrame(std::string_view data) {
    if (data.size() < 5) return std::nullopt;
    auto tag = static_cast<std::uint8_t>(data[0]);
    if (tag < 0x01 || tag > 0x03) throw CodecError("unknown frame tag");
    std::uint32_t len = 0;
    for (int i = 1; i <= 4; ++i) len = (len << 8) | static_cast<std::uint8_t>(data[i]);
    if (data.size() - 5 < len) return std::nullopt;
    Frame f{static_cast<FrameTag>(tag), Bytes(data.substr(5, len))};
    return std::make_pair(std::move(f), static_cast<std::size_t>(5) + len);
}

}  // namespace pod
