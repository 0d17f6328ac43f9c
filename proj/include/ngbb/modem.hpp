#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace ngbb {

using Symbol = std::complex<double>;

// Symbol-rate complex baseband. 875 Msym/s, one bit per symbol, unit symbol
// energy, so Eb = Es. CDR and AGC are ideal; no pulse shaping or oversampling.
inline constexpr double kSymbolRateHz = 875e6;
inline constexpr double kSymbolDurationNs = 8.0 / 7.0;  // 1.142857... ns

struct NoiseSpec {
  double ebn0_db = std::numeric_limits<double>::infinity();
  double snr_db = std::numeric_limits<double>::infinity();
  double bandwidth_hz = 2e9;
  double bitrate_hz = kSymbolRateHz;

  // SNR_dB = EbN0_dB + 10*log10(Rb/B); applied exactly once, both values kept.
  static NoiseSpec from_ebn0(double ebn0_db, double bandwidth_hz = 2e9,
                             double bitrate_hz = kSymbolRateHz) {
    NoiseSpec s;
    s.ebn0_db = ebn0_db;
    s.bandwidth_hz = bandwidth_hz;
    s.bitrate_hz = bitrate_hz;
    s.snr_db = ebn0_db + 10.0 * std::log10(bitrate_hz / bandwidth_hz);
    return s;
  }
  static NoiseSpec from_snr(double snr_db, double bandwidth_hz = 2e9,
                            double bitrate_hz = kSymbolRateHz) {
    NoiseSpec s;
    s.snr_db = snr_db;
    s.bandwidth_hz = bandwidth_hz;
    s.bitrate_hz = bitrate_hz;
    s.ebn0_db = snr_db - 10.0 * std::log10(bitrate_hz / bandwidth_hz);
    return s;
  }
};

// Antipodal mapping of the differentially encoded stream: 0 -> +1, 1 -> -1.
inline std::vector<Symbol> modulate(std::span<const uint8_t> encoded_bits) {
  std::vector<Symbol> out;
  out.reserve(encoded_bits.size());
  for (uint8_t b : encoded_bits) out.emplace_back((b & 1u) ? -1.0 : 1.0, 0.0);
  return out;
}

// Complex AWGN with per-dimension variance N0/2, Es = Eb = 1. Deterministic
// under a fixed seed. Infinite Eb/N0 returns the stream unchanged.
inline std::vector<Symbol> add_awgn(std::span<const Symbol> stream, const NoiseSpec& noise,
                                    uint64_t rng_seed) {
  std::vector<Symbol> out(stream.begin(), stream.end());
  if (std::isinf(noise.ebn0_db)) return out;
  double n0 = std::pow(10.0, -noise.ebn0_db / 10.0);  // N0 = Es / (Es/N0)
  if (n0 <= 0.0) throw std::invalid_argument("add_awgn: noise density must be positive");
  double sigma = std::sqrt(n0 / 2.0);
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  for (auto& s : out) {
    double re = gauss(rng);
    double im = gauss(rng);
    s += Symbol(re, im);
  }
  return out;
}

// Decision variable v_k = Re(y_k * conj(y_{k-1})); bit 1 iff v_k < 0 (exact
// zero decodes to 0). Output length = input length - 1 and is directly the
// pre-differential-encoding bit stream.
inline std::vector<uint8_t> demod_differential(std::span<const Symbol> stream) {
  if (stream.size() < 2)
    throw std::invalid_argument("demod_differential: need at least 2 symbols");
  std::vector<uint8_t> bits(stream.size() - 1);
  for (size_t k = 1; k < stream.size(); ++k) {
    double v = stream[k].real() * stream[k - 1].real() +
               stream[k].imag() * stream[k - 1].imag();
    bits[k - 1] = v < 0.0 ? 1 : 0;
  }
  return bits;
}

enum class BerScheme { dbpsk_differential, bpsk_coherent };

inline double theoretical_ber(double ebn0_db, BerScheme scheme) {
  double g = std::pow(10.0, ebn0_db / 10.0);
  switch (scheme) {
    case BerScheme::dbpsk_differential:
      return 0.5 * std::exp(-g);
    case BerScheme::bpsk_coherent:
      return 0.5 * std::erfc(std::sqrt(g));
  }
  throw std::invalid_argument("theoretical_ber: unknown scheme");
}

}  // namespace ngbb
