#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ngbb {

// Reed-Solomon (255, 239) over GF(2^8), field polynomial
// x^8+x^4+x^3+x^2+1 (0x11d), generator roots alpha^0..alpha^15.
// Systematic encoding, corrects up to 8 byte errors per codeword.

namespace rs {

inline constexpr int kDataBytes = 239;
inline constexpr int kCodeBytes = 255;
inline constexpr int kParityBytes = kCodeBytes - kDataBytes;  // 16
inline constexpr int kMaxCorrectable = kParityBytes / 2;      // 8
inline constexpr unsigned kFieldPoly = 0x11d;

struct GfTables {
  std::array<uint8_t, 512> exp{};  // doubled to skip mod-255 on mul
  std::array<uint8_t, 256> log{};
  GfTables() {
    unsigned x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[i] = static_cast<uint8_t>(x);
      log[x] = static_cast<uint8_t>(i);
      x <<= 1;
      if (x & 0x100) x ^= kFieldPoly;
    }
    for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
  }
};

inline const GfTables& tables() {
  static const GfTables t;
  return t;
}

inline uint8_t gf_mul(uint8_t a, uint8_t b) {
  if (a == 0 || b == 0) return 0;
  const auto& t = tables();
  return t.exp[t.log[a] + t.log[b]];
}

inline uint8_t gf_inv(uint8_t a) {
  if (a == 0) throw std::domain_error("gf_inv: zero has no inverse");
  const auto& t = tables();
  return t.exp[255 - t.log[a]];
}

inline uint8_t gf_pow(uint8_t a, int n) {
  if (a == 0) return n == 0 ? 1 : 0;
  const auto& t = tables();
  int e = (t.log[a] * n) % 255;
  if (e < 0) e += 255;
  return t.exp[e];
}

// Generator polynomial g(x) = prod_{i=0}^{15} (x - alpha^i), ascending
// coefficient order, g[16] = 1.
inline const std::array<uint8_t, kParityBytes + 1>& generator_poly() {
  static const auto g = [] {
    std::array<uint8_t, kParityBytes + 1> p{};
    p[0] = 1;
    int deg = 0;
    for (int i = 0; i < kParityBytes; ++i) {
      uint8_t root = tables().exp[i];
      // multiply p by (x + root)
      ++deg;
      for (int j = deg; j > 0; --j)
        p[j] = static_cast<uint8_t>(p[j - 1] ^ gf_mul(p[j], root));
      p[0] = gf_mul(p[0], root);
    }
    return p;
  }();
  return g;
}

struct Decoded {
  std::vector<uint8_t> data;  // 239 bytes
  int corrections = 0;
};

}  // namespace rs

// Systematic encoder: codeword = data || parity, parity = remainder of
// x^16 * d(x) divided by g(x). First byte is the highest-degree coefficient.
inline std::vector<uint8_t> rs_encode(std::span<const uint8_t> data) {
  if (data.size() != rs::kDataBytes)
    throw std::invalid_argument("rs_encode: expected 239 bytes");
  const auto& g = rs::generator_poly();
  std::array<uint8_t, rs::kParityBytes> rem{};
  for (uint8_t d : data) {
    uint8_t feedback = static_cast<uint8_t>(d ^ rem[0]);
    for (int j = 0; j < rs::kParityBytes - 1; ++j)
      rem[j] = static_cast<uint8_t>(rem[j + 1] ^
                                    rs::gf_mul(feedback, g[rs::kParityBytes - 1 - j]));
    rem[rs::kParityBytes - 1] = rs::gf_mul(feedback, g[0]);
  }
  std::vector<uint8_t> out(data.begin(), data.end());
  out.insert(out.end(), rem.begin(), rem.end());
  return out;
}

// Syndrome + Berlekamp-Massey + Chien + Forney. Returns nullopt when more
// than 8 byte errors are detected; a rare miscorrection to another valid
// codeword is possible beyond the designed distance.
inline std::optional<rs::Decoded> rs_decode(std::span<const uint8_t> received) {
  using namespace rs;
  if (received.size() != kCodeBytes)
    throw std::invalid_argument("rs_decode: expected 255 bytes");
  const auto& t = tables();

  // Syndromes S_j = r(alpha^j), j = 0..15; byte i has degree 254-i.
  std::array<uint8_t, kParityBytes> synd{};
  bool clean = true;
  for (int j = 0; j < kParityBytes; ++j) {
    uint8_t s = 0;
    uint8_t aj = t.exp[j];
    for (uint8_t r : received) s = static_cast<uint8_t>(gf_mul(s, aj) ^ r);
    synd[j] = s;
    if (s) clean = false;
  }
  if (clean)
    return Decoded{std::vector<uint8_t>(received.begin(), received.begin() + kDataBytes), 0};

  // Berlekamp-Massey for the error locator Lambda(x).
  std::vector<uint8_t> lambda{1}, prev{1};
  int L = 0, m = 1;
  uint8_t b = 1;
  for (int n = 0; n < kParityBytes; ++n) {
    uint8_t delta = synd[n];
    for (int i = 1; i <= L && i < static_cast<int>(lambda.size()); ++i)
      delta = static_cast<uint8_t>(delta ^ gf_mul(lambda[i], synd[n - i]));
    if (delta == 0) {
      ++m;
    } else if (2 * L <= n) {
      auto tmp = lambda;
      uint8_t coef = gf_mul(delta, gf_inv(b));
      if (lambda.size() < prev.size() + m) lambda.resize(prev.size() + m, 0);
      for (size_t i = 0; i < prev.size(); ++i)
        lambda[i + m] = static_cast<uint8_t>(lambda[i + m] ^ gf_mul(coef, prev[i]));
      prev = tmp;
      L = n + 1 - L;
      b = delta;
      m = 1;
    } else {
      uint8_t coef = gf_mul(delta, gf_inv(b));
      if (lambda.size() < prev.size() + m) lambda.resize(prev.size() + m, 0);
      for (size_t i = 0; i < prev.size(); ++i)
        lambda[i + m] = static_cast<uint8_t>(lambda[i + m] ^ gf_mul(coef, prev[i]));
      ++m;
    }
  }
  while (!lambda.empty() && lambda.back() == 0) lambda.pop_back();
  int deg = static_cast<int>(lambda.size()) - 1;
  if (deg <= 0 || deg > kMaxCorrectable) return std::nullopt;

  // Chien search: error at byte index i (degree 254-i) iff
  // Lambda(alpha^{-(254-i)}) = 0.
  std::vector<int> positions;  // degree of each error location
  for (int pos = 0; pos < kCodeBytes; ++pos) {
    uint8_t xinv = gf_pow(t.exp[1], -pos);  // alpha^{-pos}
    uint8_t v = 0;
    for (int i = deg; i >= 0; --i) v = static_cast<uint8_t>(gf_mul(v, xinv) ^ lambda[i]);
    if (v == 0) positions.push_back(pos);
  }
  if (static_cast<int>(positions.size()) != deg) return std::nullopt;

  // Omega(x) = S(x) Lambda(x) mod x^16.
  std::array<uint8_t, kParityBytes> omega{};
  for (int i = 0; i < kParityBytes; ++i) {
    uint8_t acc = 0;
    for (int j = 0; j <= i && j < static_cast<int>(lambda.size()); ++j)
      acc = static_cast<uint8_t>(acc ^ gf_mul(lambda[j], synd[i - j]));
    omega[i] = acc;
  }

  std::vector<uint8_t> corrected(received.begin(), received.end());
  for (int pos : positions) {
    uint8_t x = gf_pow(t.exp[1], pos);       // X_i = alpha^pos
    uint8_t xinv = gf_inv(x);
    uint8_t num = 0;
    for (int i = kParityBytes - 1; i >= 0; --i)
      num = static_cast<uint8_t>(gf_mul(num, xinv) ^ omega[i]);
    // Lambda'(x): odd-degree terms only.
    uint8_t den = 0;
    for (int i = 1; i < static_cast<int>(lambda.size()); i += 2) {
      uint8_t term = gf_mul(lambda[i], gf_pow(xinv, i - 1));
      den = static_cast<uint8_t>(den ^ term);
    }
    if (den == 0) return std::nullopt;
    // Forney with root base b=0: e = X_i * Omega(X_i^{-1}) / Lambda'(X_i^{-1}).
    uint8_t mag = rs::gf_mul(x, rs::gf_mul(num, gf_inv(den)));
    corrected[kCodeBytes - 1 - pos] = static_cast<uint8_t>(corrected[kCodeBytes - 1 - pos] ^ mag);
  }

  // Verify: all syndromes of the corrected word must vanish.
  for (int j = 0; j < kParityBytes; ++j) {
    uint8_t s = 0;
    uint8_t aj = t.exp[j];
    for (uint8_t r : corrected) s = static_cast<uint8_t>(gf_mul(s, aj) ^ r);
    if (s != 0) return std::nullopt;
  }
  return rs::Decoded{std::vector<uint8_t>(corrected.begin(), corrected.begin() + kDataBytes), deg};
}

}  // namespace ngbb
