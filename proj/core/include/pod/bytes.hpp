#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pod {

// Byte strings (transactions, keys, signatures, encoded payloads) are carried
// as std::string so they can key maps and compare lexicographically.
using Bytes = std::string;

std::string toHex(std::string_view data);
Bytes fromHex(std::string_view hex);

// Short printable form for logs: hex of the first few bytes plus length.
std::string previewBytes(std::string_view data, std::size_t maxBytes = 8);

}  // namespace pod
