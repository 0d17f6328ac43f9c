#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "ngbb/fec_rs.hpp"

using namespace ngbb;

namespace {

// Independent parity oracle: straight polynomial long division of
// x^16 * d(x) by g(x), no LFSR shortcut.
std::vector<uint8_t> long_division_parity(std::span<const uint8_t> data) {
  std::vector<uint8_t> poly(data.begin(), data.end());
  poly.resize(rs::kCodeBytes, 0);  // x^16 * d(x), descending degree
  const auto& g = rs::generator_poly();
  for (int i = 0; i + rs::kParityBytes < rs::kCodeBytes; ++i) {
    uint8_t coef = poly[i];
    if (coef == 0) continue;
    for (int j = 0; j <= rs::kParityBytes; ++j)
      poly[i + j] = static_cast<uint8_t>(poly[i + j] ^
                                         rs::gf_mul(coef, g[rs::kParityBytes - j]));
  }
  return {poly.end() - rs::kParityBytes, poly.end()};
}

std::vector<uint8_t> random_word(std::mt19937_64& rng) {
  std::vector<uint8_t> d(rs::kDataBytes);
  for (auto& b : d) b = static_cast<uint8_t>(rng() & 0xff);
  return d;
}

}  // namespace

TEST_CASE("GF(256) field table self-test") {
  for (int a = 1; a < 256; ++a)
    CHECK(rs::gf_mul(static_cast<uint8_t>(a), rs::gf_inv(static_cast<uint8_t>(a))) == 1);
  // alpha generates the full multiplicative group.
  std::set<uint8_t> powers;
  for (int i = 0; i < 255; ++i) powers.insert(rs::gf_pow(2, i));
  CHECK(powers.size() == 255);
  // Distributivity, exhaustive over a and b with sampled c.
  std::mt19937_64 rng(1);
  for (int a = 0; a < 256; ++a)
    for (int b = 0; b < 256; ++b) {
      uint8_t c = static_cast<uint8_t>(rng() & 0xff);
      uint8_t lhs = rs::gf_mul(static_cast<uint8_t>(a), static_cast<uint8_t>(b ^ c));
      uint8_t rhs = static_cast<uint8_t>(rs::gf_mul(static_cast<uint8_t>(a), static_cast<uint8_t>(b)) ^
                                         rs::gf_mul(static_cast<uint8_t>(a), c));
      REQUIRE(lhs == rhs);
    }
}

TEST_CASE("zero data encodes to the zero codeword") {
  std::vector<uint8_t> zeros(rs::kDataBytes, 0);
  auto cw = rs_encode(zeros);
  CHECK(cw == std::vector<uint8_t>(rs::kCodeBytes, 0));
}

TEST_CASE("encoder parity matches the long-division oracle") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    auto data = random_word(rng);
    auto cw = rs_encode(data);
    std::vector<uint8_t> parity(cw.begin() + rs::kDataBytes, cw.end());
    CHECK(parity == long_division_parity(data));
  }
  // Every codeword evaluates to zero at all 16 generator roots.
  auto data = random_word(rng);
  auto cw = rs_encode(data);
  for (int j = 0; j < rs::kParityBytes; ++j) {
    uint8_t aj = rs::tables().exp[j];
    uint8_t s = 0;
    for (uint8_t r : cw) s = static_cast<uint8_t>(rs::gf_mul(s, aj) ^ r);
    CHECK(s == 0);
  }
}

TEST_CASE("encode size contract") {
  CHECK_THROWS_AS(rs_encode(std::vector<uint8_t>(238)), std::invalid_argument);
  CHECK_THROWS_AS(rs_decode(std::vector<uint8_t>(254)), std::invalid_argument);
}

TEST_CASE("clean roundtrip reports zero corrections") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 25; ++trial) {
    auto data = random_word(rng);
    auto decoded = rs_decode(rs_encode(data));
    REQUIRE(decoded);
    CHECK(decoded->data == data);
    CHECK(decoded->corrections == 0);
  }
}

TEST_CASE("t byte errors are corrected with corrections == t, t = 1..8") {
  std::mt19937_64 rng(3);
  for (int t = 1; t <= rs::kMaxCorrectable; ++t) {
    for (int trial = 0; trial < 30; ++trial) {
      auto data = random_word(rng);
      auto cw = rs_encode(data);
      std::set<int> positions;
      while (static_cast<int>(positions.size()) < t)
        positions.insert(static_cast<int>(rng() % rs::kCodeBytes));
      for (int pos : positions) {
        uint8_t e = static_cast<uint8_t>(1 + rng() % 255);
        cw[pos] = static_cast<uint8_t>(cw[pos] ^ e);
      }
      auto decoded = rs_decode(cw);
      REQUIRE(decoded);
      CHECK(decoded->data == data);
      CHECK(decoded->corrections == t);
    }
  }
}

TEST_CASE("exhaustive single-byte error sweep") {
  std::mt19937_64 rng(4);
  auto data = random_word(rng);
  auto cw = rs_encode(data);
  for (int pos = 0; pos < rs::kCodeBytes; ++pos) {
    for (uint8_t e : {0x01, 0x80, 0xff}) {
      auto corrupted = cw;
      corrupted[pos] = static_cast<uint8_t>(corrupted[pos] ^ e);
      auto decoded = rs_decode(corrupted);
      REQUIRE(decoded);
      CHECK(decoded->data == data);
      CHECK(decoded->corrections == 1);
    }
  }
}

TEST_CASE("9-error patterns are overwhelmingly flagged") {
  std::mt19937_64 rng(5);
  auto data = random_word(rng);
  auto cw = rs_encode(data);
  int silent_wrong = 0;
  const int trials = 500;
  for (int trial = 0; trial < trials; ++trial) {
    auto corrupted = cw;
    std::set<int> positions;
    while (positions.size() < 9) positions.insert(static_cast<int>(rng() % rs::kCodeBytes));
    for (int pos : positions)
      corrupted[pos] = static_cast<uint8_t>(corrupted[pos] ^ (1 + rng() % 255));
    auto decoded = rs_decode(corrupted);
    if (decoded && decoded->data != data) ++silent_wrong;
  }
  CHECK(silent_wrong <= trials / 100);
}
