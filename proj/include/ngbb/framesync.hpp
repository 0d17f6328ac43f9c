#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "ngbb/bitframe.hpp"

namespace ngbb {

// Byte/frame synchronization: two banks of eight 64-bit correlators, one per
// bit offset k = 1..8, one frame period (518 bytes) apart. Detection requires
// the same k to clear the threshold in both banks.

inline constexpr int kNumCorrelators = 8;
inline constexpr int kBankSeparationBytes = 518;  // P1 start to P2 start
inline constexpr int kDecisionWindowBytes = 526;  // P1 + D1 + P2

struct CorrelatorBankScores {
  std::array<int, kNumCorrelators> scores{};  // index k-1, each 0..n
};

struct SyncParams {
  int gamma = 59;
  int preamble_bits = 64;
  int banks = 2;
  int bank_separation_bytes = kBankSeparationBytes;
};

struct SyncDecision {
  bool detected = false;
  int offset_k = 0;          // 1..8 when detected
  long frame_start_bit = 0;  // bit position of the preamble start
  int bank1_score = 0;
  int bank2_score = 0;
};

inline CorrelatorBankScores correlate_bank(std::span<const uint8_t> bits, size_t start_bit,
                                           const PreamblePattern& pattern) {
  const size_t n = pattern.bits.size();
  if (bits.size() < start_bit + n + kNumCorrelators - 1)
    throw std::invalid_argument("correlate_bank: buffer too short");
  CorrelatorBankScores out;
  for (int k = 0; k < kNumCorrelators; ++k) {
    int score = 0;
    for (size_t i = 0; i < n; ++i)
      score += (bits[start_bit + k + i] & 1u) == (pattern.bits[i] & 1u);
    out.scores[k] = score;
  }
  return out;
}

// The decision window spans P1 + D1 + P2; with the 8 bit offsets the buffer
// must hold 7 bits beyond the 526-byte window.
inline std::pair<CorrelatorBankScores, CorrelatorBankScores> correlate_banks(
    std::span<const uint8_t> window_bits, const PreamblePattern& pattern,
    int bank_separation_bytes = kBankSeparationBytes) {
  size_t bank2_start = static_cast<size_t>(bank_separation_bytes) * 8;
  return {correlate_bank(window_bits, 0, pattern),
          correlate_bank(window_bits, bank2_start, pattern)};
}

// Detected iff some k clears gamma in both banks (score == gamma counts).
// Among qualifying k, the one maximizing min(score1, score2) wins, ties to
// the lowest k.
inline SyncDecision detect(const CorrelatorBankScores& scores1,
                           const CorrelatorBankScores& scores2, const SyncParams& params) {
  SyncDecision d;
  int best_min = -1;
  for (int k = 0; k < kNumCorrelators; ++k) {
    int s1 = scores1.scores[k];
    int s2 = params.banks == 2 ? scores2.scores[k] : s1;
    if (s1 >= params.gamma && s2 >= params.gamma) {
      int m = std::min(s1, s2);
      if (m > best_min) {
        best_min = m;
        d.detected = true;
        d.offset_k = k + 1;
        d.frame_start_bit = k;
        d.bank1_score = s1;
        d.bank2_score = s2;
      }
    }
  }
  return d;
}

namespace detail {

// Exact binomial tail machinery. False-alarm probabilities of interest reach
// 1e-24, far below what naive float products of tails resolve reliably, so
// the analytics run on GMP rationals; the double input p is converted to its
// exact rational value.
inline mpq_class binomial_pmf(int n, int k, const mpq_class& p) {
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  mpq_class succ = 1, fail = 1;
  mpq_class q = 1 - p;
  for (int i = 0; i < k; ++i) succ *= p;
  for (int i = 0; i < n - k; ++i) fail *= q;
  return mpq_class(c) * succ * fail;
}

// P(Binomial(n, 1-p) < gamma): fewer than gamma matching bits.
inline mpq_class p_miss_single_exact(int gamma, const mpq_class& p, int n) {
  mpq_class sum = 0;
  mpq_class match = 1 - p;
  for (int m = 0; m < gamma && m <= n; ++m) sum += binomial_pmf(n, m, match);
  return sum;
}

inline mpq_class p_miss_exact(int gamma, const mpq_class& p, int n, int banks) {
  mpq_class pm1 = p_miss_single_exact(gamma, p, n);
  if (banks == 1) return pm1;
  mpq_class hit = 1 - pm1;
  return 1 - hit * hit;
}

// Per-position probability that n equiprobable random bits score >= gamma:
// sum_{j=gamma}^{n} C(n,j) / 2^n.
inline mpq_class p_false_alarm_single_exact(int gamma, int n) {
  mpz_class count = 0, c;
  for (int j = std::max(gamma, 0); j <= n; ++j) {
    mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(j));
    count += c;
  }
  mpz_class denom = 1;
  denom <<= n;
  return mpq_class(count, denom);
}

}  // namespace detail

inline double p_miss(int gamma, double p, int n, int banks) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p_miss: p out of [0,1]");
  if (gamma < 0 || gamma > n) throw std::invalid_argument("p_miss: gamma out of [0,n]");
  if (banks != 1 && banks != 2) throw std::invalid_argument("p_miss: banks must be 1 or 2");
  return detail::p_miss_exact(gamma, mpq_class(p), n, banks).get_d();
}

// Per-candidate-position false alarm probability; `positions` aggregates by
// union bound (per-frame convention: 510 data bytes x 8 bit offsets = 4080).
inline double p_false_alarm(int gamma, int n, int banks, long positions = 1) {
  if (gamma < 0 || gamma > n) throw std::invalid_argument("p_false_alarm: gamma out of [0,n]");
  if (banks != 1 && banks != 2)
    throw std::invalid_argument("p_false_alarm: banks must be 1 or 2");
  mpq_class q = detail::p_false_alarm_single_exact(gamma, n);
  if (banks == 2) q *= q;
  q *= positions;
  if (q > 1) q = 1;
  return q.get_d();
}

inline constexpr long kFalseAlarmPositionsPerFrame = 510L * 8;

// Monte Carlo miss-probability estimate: each preamble bit flips with
// probability p, independently per bank.
inline double p_miss_mc(int gamma, double p, int n, int banks, long trials, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution flip(p);
  long misses = 0;
  for (long t = 0; t < trials; ++t) {
    bool hit = true;
    for (int b = 0; b < banks && hit; ++b) {
      int matches = 0;
      for (int i = 0; i < n; ++i) matches += !flip(rng);
      hit = matches >= gamma;
    }
    misses += !hit;
  }
  return static_cast<double>(misses) / static_cast<double>(trials);
}

struct SweepRow {
  int n = 64;
  int banks = 2;
  int gamma = 59;
  double p = 0.0;
  double p_miss_analytic = 0.0;
  double p_miss_mc = -1.0;  // -1: not estimated (too rare for the trial budget)
  double p_fa_per_pair = 0.0;
  double p_fa_frame_union = 0.0;
};

struct SweepGrid {
  std::vector<int> preamble_bits{32, 64};
  std::vector<int> banks{1, 2};
  std::vector<int> gammas;        // empty: 59 for n=64, 29 for n=32, else n-5
  std::vector<double> ps{1e-3};   // channel bit-error probabilities
  long mc_trials = 0;             // 0 disables Monte Carlo columns
  double mc_min_expected = 100.0; // only estimate where >= this many events expected
  uint64_t seed = 1;
};

inline std::vector<SweepRow> sweep_curves(const SweepGrid& grid) {
  std::vector<SweepRow> rows;
  for (int n : grid.preamble_bits) {
    std::vector<int> gammas = grid.gammas;
    if (gammas.empty()) gammas = {n == 32 ? 29 : n - 5};
    for (int banks : grid.banks) {
      for (int gamma : gammas) {
        if (gamma < 0 || gamma > n) continue;
        for (double p : grid.ps) {
          SweepRow r;
          r.n = n;
          r.banks = banks;
          r.gamma = gamma;
          r.p = p;
          r.p_miss_analytic = p_miss(gamma, p, n, banks);
          r.p_fa_per_pair = p_false_alarm(gamma, n, banks);
          r.p_fa_frame_union = p_false_alarm(gamma, n, banks, kFalseAlarmPositionsPerFrame);
          if (grid.mc_trials > 0 &&
              r.p_miss_analytic * static_cast<double>(grid.mc_trials) >= grid.mc_min_expected) {
            uint64_t seed = grid.seed ^ (static_cast<uint64_t>(rows.size()) + 1);
            r.p_miss_mc = p_miss_mc(gamma, p, n, banks, grid.mc_trials, seed);
          }
          rows.push_back(r);
        }
      }
    }
  }
  return rows;
}

}  // namespace ngbb
