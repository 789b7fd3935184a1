#include <doctest.h>

#include <random>

#include "pod/bytes.hpp"
#include "pod/codec.hpp"

using namespace pod;

namespace {

Bytes randomBytes(std::mt19937_64& rng, std::size_t maxLen) {
    std::size_t len = rng() % (maxLen + 1);
    Bytes out(len, '\0');
    for (auto& c : out) c = static_cast<char>(rng() & 0xff);
    return out;
}

SignedVoteBody randomBody(std::mt19937_64& rng) {
    SignedVoteBody b;
    b.sid = randomBytes(rng, 12);
    b.tx = randomBytes(rng, 40);
    b.ts = rng();
    b.sn = rng();
    return b;
}

}  // namespace

TEST_CASE("vote body golden bytes: all-empty fields") {
    Bytes enc = encodeVoteBody({"", "", 0, 0});
    CHECK(enc == fromHex("01"
                         "00000000"
                         "00000000"
                         "0000000000000000"
                         "0000000000000000"));
    CHECK(enc.size() == 25);
}

TEST_CASE("vote body golden bytes: one-byte fields") {
    Bytes enc = encodeVoteBody({"A", "t", 1, 2});
    CHECK(enc == fromHex("01"
                         "00000001" "41"
                         "00000001" "74"
                         "0000000000000001"
                         "0000000000000002"));
    CHECK(enc.size() == 27);
}

TEST_CASE("vote body round-trips") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 10000; ++i) {
        SignedVoteBody body = randomBody(rng);
        auto decoded = decodeVoteBody(encodeVoteBody(body));
        REQUIRE(decoded.has_value());
        CHECK(*decoded == body);
    }
}

TEST_CASE("vote body encoding is injective on distinct tuples") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100000; ++i) {
        SignedVoteBody a = randomBody(rng);
        SignedVoteBody b = randomBody(rng);
        if (a == b) continue;
        CHECK(encodeVoteBody(a) != encodeVoteBody(b));
    }
}

TEST_CASE("length prefix guard") {
    CHECK(lengthFitsPrefix(0));
    CHECK(lengthFitsPrefix(0xffffffffull));
    CHECK_FALSE(lengthFitsPrefix(0x100000000ull));
}

TEST_CASE("vote body decode rejects junk") {
    CHECK_FALSE(decodeVoteBody("").has_value());
    CHECK_FALSE(decodeVoteBody("\x02").has_value());  // wrong version
    Bytes valid = encodeVoteBody({"s", "t", 3, 4});
    CHECK_FALSE(decodeVoteBody(valid.substr(0, valid.size() - 1)).has_value());
    CHECK_FALSE(decodeVoteBody(valid + "x").has_value());
}

TEST_CASE("frames round-trip and reject unknown tags") {
    Bytes frame = encodeFrame(FrameTag::Write, "hello");
    auto decoded = tryDecodeFrame(frame);
    REQUIRE(decoded.has_value());
    CHECK(decoded->first.tag == FrameTag::Write);
    CHECK(decoded->first.payload == "hello");
    CHECK(decoded->second == frame.size());

    CHECK_FALSE(tryDecodeFrame(frame.substr(0, 3)).has_value());  // incomplete

    Bytes bad = frame;
    bad[0] = '\x7f';
    CHECK_THROWS_AS((void)tryDecodeFrame(bad), CodecError);
}

TEST_CASE("frame decoding consumes exactly one frame from a stream") {
    Bytes stream = encodeFrame(FrameTag::Connect, "") + encodeFrame(FrameTag::Write, "abc");
    auto first = tryDecodeFrame(stream);
    REQUIRE(first.has_value());
    CHECK(first->first.tag == FrameTag::Connect);
    auto second = tryDecodeFrame(std::string_view(stream).substr(first->second));
    REQUIRE(second.has_value());
    CHECK(second->first.payload == "abc");
}
