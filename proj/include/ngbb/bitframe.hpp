#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <stdexcept>
#include <vector>

#include "ngbb/bits.hpp"
#include "ngbb/fec_rs.hpp"
#include "ngbb/linecode.hpp"

namespace ngbb {

// Fibonacci LFSR description used to generate the preamble. The register
// shifts right, emitting bit 0; feedback_taps holds the coefficients of
// degrees 0..degree-1 of the characteristic polynomial, so the recurrence is
// a_{n+degree} = XOR of a_{n+i} over set bits i. A maximal-length run of
// period 2^degree - 1 is completed with one appended bit to reach a whole
// number of bytes.
struct PreambleSpec {
  int degree = 6;
  unsigned feedback_taps = 0b100001;  // x^6 + x^5 + 1
  unsigned seed = 0x3f;
  uint8_t appended_bit = 0;
};

inline constexpr PreambleSpec kPreambleSpec64{6, 0b100001, 0x3f, 0};
// Legacy 32-bit format: degree-5 maximal LFSR (x^5 + x^3 + 1), same
// append-one-bit convention.
inline constexpr PreambleSpec kPreambleSpec32{5, 0b01001, 0x1f, 0};

struct PreamblePattern {
  std::vector<uint8_t> bits;  // 64 (or 32), LSB-first serialization order
  PreambleSpec spec;
};

// Runs the LFSR for one full period and appends spec.appended_bit. Rejects
// all-zero seeds and non-maximal polynomials (period check doubles as a
// primitivity check).
inline PreamblePattern generate_preamble(const PreambleSpec& spec) {
  if (spec.degree < 2 || spec.degree > 16)
    throw std::invalid_argument("generate_preamble: unsupported degree");
  const unsigned mask = (1u << spec.degree) - 1;
  if ((spec.seed & mask) == 0)
    throw std::invalid_argument("generate_preamble: all-zero seed");
  const unsigned period = mask;  // 2^degree - 1 for a maximal sequence
  unsigned state = spec.seed & mask;
  PreamblePattern p;
  p.spec = spec;
  p.bits.reserve(period + 1);
  for (unsigned i = 0; i < period; ++i) {
    p.bits.push_back(static_cast<uint8_t>(state & 1u));
    unsigned fb = 0;
    unsigned taps = spec.feedback_taps & mask;
    while (taps) {
      fb ^= (state >> (std::countr_zero(taps))) & 1u;
      taps &= taps - 1;
    }
    state = (state >> 1) | (fb << (spec.degree - 1));
    if (state == (spec.seed & mask) && i + 1 != period)
      throw std::invalid_argument("generate_preamble: polynomial is not primitive");
  }
  if (state != (spec.seed & mask))
    throw std::invalid_argument("generate_preamble: polynomial is not primitive");
  p.bits.push_back(spec.appended_bit & 1u);
  return p;
}

inline std::vector<uint8_t> preamble_bytes(const PreamblePattern& p) {
  return bits_to_bytes(p.bits);
}

struct FrameLayout {
  int preamble_bytes = 8;
  int data_words = 2;
  int payload_bytes_per_word = rs::kDataBytes;  // 239
  int coded_bytes_per_word = rs::kCodeBytes;    // 255
  int dummy_bytes = 0;                          // trailing filler (32-bit legacy)
  PreambleSpec preamble_spec = kPreambleSpec64;

  int payload_bytes() const { return data_words * payload_bytes_per_word; }
  int coded_region_bytes() const { return data_words * coded_bytes_per_word + dummy_bytes; }
  int total_frame_bytes() const { return preamble_bytes + coded_region_bytes(); }
  double payload_efficiency() const {
    return static_cast<double>(payload_bytes()) / total_frame_bytes();
  }

  // 8-byte preamble, two RS words: 8 + 2*255 = 518 bytes.
  static FrameLayout format64() { return FrameLayout{}; }
  // 4-byte preamble, one RS word plus a dummy byte: 4 + 256 = 260 bytes.
  static FrameLayout format32() {
    FrameLayout l;
    l.preamble_bytes = 4;
    l.data_words = 1;
    l.dummy_bytes = 1;
    l.preamble_spec = kPreambleSpec32;
    return l;
  }
};

struct Frame {
  std::vector<uint8_t> bytes;
};

// frame = preamble || scramble(rs(word_1) || ... || rs(word_n) || dummy).
// The preamble bypasses both the RS encoder and the scrambler; the scrambler
// phase resets at the start of the coded region.
inline Frame build_frame(std::span<const uint8_t> payload, const FrameLayout& layout,
                         const ScramblerSequence& scrambler = kDefaultScrambler) {
  if (static_cast<int>(payload.size()) != layout.payload_bytes())
    throw std::invalid_argument("build_frame: payload size mismatch");
  auto pattern = generate_preamble(layout.preamble_spec);
  Frame f;
  f.bytes = preamble_bytes(pattern);
  if (static_cast<int>(f.bytes.size()) != layout.preamble_bytes)
    throw std::invalid_argument("build_frame: preamble/layout mismatch");
  std::vector<uint8_t> coded;
  coded.reserve(layout.coded_region_bytes());
  for (int w = 0; w < layout.data_words; ++w) {
    auto word = rs_encode(payload.subspan(static_cast<size_t>(w) * layout.payload_bytes_per_word,
                                          layout.payload_bytes_per_word));
    coded.insert(coded.end(), word.begin(), word.end());
  }
  coded.resize(coded.size() + layout.dummy_bytes, 0);
  auto scrambled = scramble(coded, scrambler);
  f.bytes.insert(f.bytes.end(), scrambled.begin(), scrambled.end());
  return f;
}

struct ParsedFrame {
  std::vector<uint8_t> payload;
  std::vector<int> corrections;  // per word
};

struct frame_decode_error : std::runtime_error {
  int word_index;
  explicit frame_decode_error(int w)
      : std::runtime_error("frame_decode_error: uncorrectable RS word " + std::to_string(w)),
        word_index(w) {}
};

inline ParsedFrame parse_frame(const Frame& frame, const FrameLayout& layout,
                               const ScramblerSequence& scrambler = kDefaultScrambler) {
  if (static_cast<int>(frame.bytes.size()) != layout.total_frame_bytes())
    throw std::invalid_argument("parse_frame: frame size mismatch");
  std::span<const uint8_t> coded(frame.bytes.data() + layout.preamble_bytes,
                                 static_cast<size_t>(layout.coded_region_bytes()));
  auto clear = descramble(coded, scrambler);
  ParsedFrame out;
  out.payload.reserve(layout.payload_bytes());
  for (int w = 0; w < layout.data_words; ++w) {
    std::span<const uint8_t> word(clear.data() + static_cast<size_t>(w) * layout.coded_bytes_per_word,
                                  static_cast<size_t>(layout.coded_bytes_per_word));
    auto decoded = rs_decode(word);
    if (!decoded) throw frame_decode_error(w);
    out.payload.insert(out.payload.end(), decoded->data.begin(), decoded->data.end());
    out.corrections.push_back(decoded->corrections);
  }
  return out;
}

}  // namespace ngbb
