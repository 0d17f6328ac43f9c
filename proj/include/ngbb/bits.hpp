#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ngbb {

// Bit/byte conversions. Bits are serialized LSB-first within each byte;
// every bit-level routine in the library assumes this ordering.

inline std::vector<uint8_t> bytes_to_bits(std::span<const uint8_t> bytes) {
  std::vector<uint8_t> bits;
  bits.reserve(bytes.size() * 8);
  for (uint8_t b : bytes)
    for (int i = 0; i < 8; ++i) bits.push_back((b >> i) & 1u);
  return bits;
}

inline std::vector<uint8_t> bits_to_bytes(std::span<const uint8_t> bits) {
  if (bits.size() % 8 != 0)
    throw std::invalid_argument("bits_to_bytes: length not a multiple of 8");
  std::vector<uint8_t> bytes(bits.size() / 8, 0);
  for (size_t i = 0; i < bits.size(); ++i)
    bytes[i / 8] = static_cast<uint8_t>(bytes[i / 8] | ((bits[i] & 1u) << (i % 8)));
  return bytes;
}

inline std::string to_hex(std::span<const uint8_t> bytes) {
  static const char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0x0f]);
  }
  return out;
}

inline std::vector<uint8_t> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("from_hex: odd length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("from_hex: bad digit");
  };
  std::vector<uint8_t> out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  return out;
}

}  // namespace ngbb
