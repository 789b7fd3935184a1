#include "pod/bytes.hpp"

#include <stdexcept>

namespace pod {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hexValue(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

std::string toHex(std::string_view data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (unsigned char c : data) {
        out.push_back(kHexDigits[c >> 4]);
        out.push_back(kHexDigits[c & 0xf]);
    }
    return out;
}

Bytes fromHex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("fromHex: odd length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hexValue(hex[i]);
        int lo = hexValue(hex[i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("fromHex: bad digit");
        out.push_back(static_cast<char>((hi << 4) | lo));
    }
    return out;
}

std::string previewBytes(std::string_view data, std::size_t maxBytes) {
    std::string out = toHex(data.substr(0, maxBytes));
    if (data.size() > maxBytes) out += "..";
    out += "/" + std::to_string(data.size());
    return out;
}

}  // namespace pod
