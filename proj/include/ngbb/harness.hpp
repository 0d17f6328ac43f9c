#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <future>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ngbb/bitframe.hpp"
#include "ngbb/bits.hpp"
#include "ngbb/flowctl.hpp"
#include "ngbb/framesync.hpp"
#include "ngbb/linecode.hpp"
#include "ngbb/linkbudget.hpp"
#include "ngbb/modem.hpp"

namespace ngbb {

// Experiment runner behind the CLI. Every emitted row carries a fingerprint
// of the full scenario (all inputs + seed), so any row can be reproduced from
// its fingerprint inputs alone. Grid points run in parallel with per-point
// derived seeds (seed ^ point index); aggregation is by grid order, so
// scheduling cannot change the output bytes.

struct Scenario {
  uint64_t seed = 1;

  // pipeline configuration
  bool rs_enabled = true;
  int preamble_bits = 64;  // 64 or 32 (legacy format)
  int banks = 2;
  int gamma = 59;
  double impl_degradation_db = 0.0;
  ScramblerSequence scrambler = kDefaultScrambler;

  // ber
  std::vector<double> ebn0_grid_db{6, 7, 8, 9, 10};
  long target_errors = 100;
  long long max_bits = 200'000'000;

  // sync
  std::vector<double> p_grid{1e-3};
  std::vector<int> gamma_grid;  // empty: per-n default (n-5)
  long mc_trials = 0;

  // link
  LinkParams link;
  std::vector<double> distance_grid_m{1, 2, 5, 10, 15, 20, 25, 30, 35, 40};
  std::vector<BlockageEvent> blockage;
  double required_snr_db = 10.5;
  double bitrate_hz = kSymbolRateHz;

  // flow
  FifoConfig fifo;
  IngressPattern ingress{1518, 0, 0, 0};
  long long flow_ticks = 100'000'000;
  long long flow_sample_interval = 0;

  // mask search
  long mask_candidates = 4096;

  FrameLayout layout() const {
    return preamble_bits == 32 ? FrameLayout::format32() : FrameLayout::format64();
  }
};

namespace detail {

inline void fnv1a(uint64_t& h, const void* data, size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
}
template <typename T>
void fnv1a_value(uint64_t& h, const T& v) {
  fnv1a(h, &v, sizeof(v));
}

}  // namespace detail

inline uint64_t scenario_fingerprint(const Scenario& s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  using detail::fnv1a_value;
  fnv1a_value(h, s.seed);
  fnv1a_value(h, s.rs_enabled);
  fnv1a_value(h, s.preamble_bits);
  fnv1a_value(h, s.banks);
  fnv1a_value(h, s.gamma);
  fnv1a_value(h, s.impl_degradation_db);
  detail::fnv1a(h, s.scrambler.bytes.data(), s.scrambler.bytes.size());
  for (double e : s.ebn0_grid_db) fnv1a_value(h, e);
  fnv1a_value(h, s.target_errors);
  fnv1a_value(h, s.max_bits);
  for (double p : s.p_grid) fnv1a_value(h, p);
  for (int g : s.gamma_grid) fnv1a_value(h, g);
  fnv1a_value(h, s.mc_trials);
  fnv1a_value(h, s.link.tx_power_dbm);
  fnv1a_value(h, s.link.tx_gain_dbi);
  fnv1a_value(h, s.link.rx_gain_dbi);
  fnv1a_value(h, s.link.carrier_hz);
  fnv1a_value(h, s.link.noise_figure_db);
  fnv1a_value(h, s.link.bandwidth_hz);
  fnv1a_value(h, s.link.impl_loss_db);
  for (double d : s.distance_grid_m) fnv1a_value(h, d);
  for (const auto& b : s.blockage) fnv1a_value(h, b.attenuation_db);
  fnv1a_value(h, s.required_snr_db);
  fnv1a_value(h, s.bitrate_hz);
  fnv1a_value(h, s.fifo.capacity_bytes);
  fnv1a_value(h, s.fifo.upper_threshold);
  fnv1a_value(h, s.fifo.lower_threshold);
  fnv1a_value(h, s.ingress.frame_bytes);
  fnv1a_value(h, s.ingress.gap_ticks);
  fnv1a_value(h, s.flow_ticks);
  fnv1a_value(h, s.mask_candidates);
  return h;
}

inline std::string fingerprint_hex(uint64_t fp) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, fp);
  return buf;
}

// ---------------------------------------------------------------------------
// Full TX/RX chain for one frame plus the following preamble (so both
// correlator banks see real data).

struct BerRecord {
  double ebn0_db = 0.0;
  double snr_db = 0.0;
  long long frames_sent = 0;
  long long frames_lost_to_sync = 0;
  long long raw_bits = 0;
  long long raw_errors = 0;
  long long payload_bits = 0;
  long long payload_errors = 0;
  long long corrected_bytes = 0;
  long long decode_failures = 0;
  bool complete = true;  // reached the target error count within budget

  double raw_ber() const { return raw_bits ? double(raw_errors) / double(raw_bits) : 0.0; }
  double payload_ber() const {
    return payload_bits ? double(payload_errors) / double(payload_bits) : 0.0;
  }
};

inline BerRecord run_ber_point(const Scenario& s, double ebn0_db, uint64_t seed) {
  BerRecord rec;
  rec.ebn0_db = ebn0_db;
  auto noise = NoiseSpec::from_ebn0(ebn0_db - s.impl_degradation_db);
  rec.snr_db = NoiseSpec::from_ebn0(ebn0_db).snr_db;

  FrameLayout layout = s.layout();
  const auto pattern = generate_preamble(layout.preamble_spec);
  const auto preamble_as_bytes = preamble_bytes(pattern);
  const int payload_len = s.rs_enabled ? layout.payload_bytes() : layout.coded_region_bytes();
  const int frame_bits_len = layout.total_frame_bytes() * 8;
  const int pad_bits = kNumCorrelators - 1;
  SyncParams sync{s.gamma, s.preamble_bits, s.banks, layout.total_frame_bytes()};

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> byte_dist(0, 255);

  while (rec.raw_errors < s.target_errors && rec.raw_bits < s.max_bits) {
    std::vector<uint8_t> payload(payload_len);
    for (auto& b : payload) b = static_cast<uint8_t>(byte_dist(rng));

    // Frame assembly; RS-off mode maps the payload straight into the
    // (still scrambled) coded region, keeping the frame period unchanged.
    std::vector<uint8_t> frame_bytes_v;
    if (s.rs_enabled) {
      frame_bytes_v = build_frame(payload, layout, s.scrambler).bytes;
    } else {
      frame_bytes_v = preamble_as_bytes;
      auto scrambled = scramble(payload, s.scrambler);
      frame_bytes_v.insert(frame_bytes_v.end(), scrambled.begin(), scrambled.end());
    }

    auto tx_bits = bytes_to_bits(frame_bytes_v);
    tx_bits.insert(tx_bits.end(), pattern.bits.begin(), pattern.bits.end());
    for (int i = 0; i < pad_bits; ++i) tx_bits.push_back(static_cast<uint8_t>(byte_dist(rng) & 1));

    // Reference symbol (d0 = 0) + differentially encoded stream.
    std::vector<uint8_t> d{0};
    auto enc = diff_encode(tx_bits, 0);
    d.insert(d.end(), enc.begin(), enc.end());
    auto symbols = add_awgn(modulate(d), noise, rng());
    auto rx_bits = demod_differential(symbols);

    ++rec.frames_sent;
    rec.raw_bits += static_cast<long long>(rx_bits.size());
    for (size_t i = 0; i < rx_bits.size(); ++i) rec.raw_errors += rx_bits[i] != tx_bits[i];

    auto [b1, b2] = correlate_banks(rx_bits, pattern, sync.bank_separation_bytes);
    auto decision = detect(b1, b2, sync);
    if (!decision.detected || decision.offset_k != 1) {
      ++rec.frames_lost_to_sync;
      continue;
    }

    auto rx_frame = bits_to_bytes(std::span(rx_bits.data(), static_cast<size_t>(frame_bits_len)));
    rec.payload_bits += static_cast<long long>(payload.size()) * 8;
    if (s.rs_enabled) {
      Frame f{std::move(rx_frame)};
      try {
        auto parsed = parse_frame(f, layout, s.scrambler);
        for (int c : parsed.corrections) rec.corrected_bytes += c;
        for (size_t i = 0; i < payload.size(); ++i) {
          uint8_t diff = static_cast<uint8_t>(parsed.payload[i] ^ payload[i]);
          rec.payload_errors += std::popcount(static_cast<unsigned>(diff));
        }
      } catch (const frame_decode_error&) {
        ++rec.decode_failures;
        // Uncorrectable frame: count residual errors of the raw data bytes.
        auto clear = descramble(std::span(f.bytes.data() + layout.preamble_bytes,
                                          static_cast<size_t>(layout.coded_region_bytes())),
                                s.scrambler);
        for (int w = 0; w < layout.data_words; ++w)
          for (int i = 0; i < layout.payload_bytes_per_word; ++i) {
            uint8_t got = clear[static_cast<size_t>(w) * layout.coded_bytes_per_word + i];
            uint8_t want = payload[static_cast<size_t>(w) * layout.payload_bytes_per_word + i];
            rec.payload_errors += std::popcount(static_cast<unsigned>(got ^ want));
          }
      }
    } else {
      auto clear = descramble(std::span(rx_frame.data() + layout.preamble_bytes,
                                        payload.size()),
                              s.scrambler);
      for (size_t i = 0; i < payload.size(); ++i)
        rec.payload_errors += std::popcount(static_cast<unsigned>(clear[i] ^ payload[i]));
    }
  }
  rec.complete = rec.raw_errors >= s.target_errors;
  return rec;
}

inline std::vector<BerRecord> run_ber(const Scenario& s) {
  std::vector<std::future<BerRecord>> futures;
  futures.reserve(s.ebn0_grid_db.size());
  for (size_t i = 0; i < s.ebn0_grid_db.size(); ++i) {
    double e = s.ebn0_grid_db[i];
    uint64_t seed = s.seed ^ (i + 1);
    futures.push_back(std::async(std::launch::async,
                                 [&s, e, seed] { return run_ber_point(s, e, seed); }));
  }
  std::vector<BerRecord> out;
  out.reserve(futures.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

inline std::string ber_csv(const Scenario& s, const std::vector<BerRecord>& records) {
  std::string fp = fingerprint_hex(scenario_fingerprint(s));
  std::string out =
      "fingerprint,ebn0_db,snr_db,frames_sent,frames_lost_to_sync,raw_bits,raw_errors,"
      "raw_ber,payload_bits,payload_errors,payload_ber,corrected_bytes,decode_failures,"
      "complete\n";
  char line[512];
  for (const auto& r : records) {
    std::snprintf(line, sizeof(line),
                  "%s,%.4f,%.4f,%lld,%lld,%lld,%lld,%.6e,%lld,%lld,%.6e,%lld,%lld,%d\n",
                  fp.c_str(), r.ebn0_db, r.snr_db, r.frames_sent, r.frames_lost_to_sync,
                  r.raw_bits, r.raw_errors, r.raw_ber(), r.payload_bits, r.payload_errors,
                  r.payload_ber(), r.corrected_bytes, r.decode_failures, r.complete ? 1 : 0);
    out += line;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sync analytics sweep (Figs. of P_m vs p and P_F vs gamma, at desk scale).

inline std::vector<SweepRow> run_sync_experiment(const Scenario& s) {
  SweepGrid grid;
  grid.preamble_bits = {32, 64};
  grid.banks = {1, 2};
  grid.gammas = s.gamma_grid;
  grid.ps = s.p_grid;
  grid.mc_trials = s.mc_trials;
  grid.seed = s.seed;
  return sweep_curves(grid);
}

inline std::string sync_csv(const Scenario& s, const std::vector<SweepRow>& rows) {
  std::string fp = fingerprint_hex(scenario_fingerprint(s));
  std::string out =
      "fingerprint,n,banks,gamma,p,p_miss_analytic,p_miss_mc,p_fa_per_pair,p_fa_frame_union\n";
  char line[320];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%s,%d,%d,%d,%.6e,%.6e,%.6e,%.6e,%.6e\n", fp.c_str(), r.n,
                  r.banks, r.gamma, r.p, r.p_miss_analytic, r.p_miss_mc, r.p_fa_per_pair,
                  r.p_fa_frame_union);
    out += line;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Link model: received power, Eb/N0 and model BER versus distance, with
// blockage what-if columns.

// Model of the post-RS bit error rate for a channel bit error probability p:
// byte error rate pb = 1-(1-p)^8, a word fails beyond 8 byte errors, and the
// per-bit rate scales by the average error density inside failed bytes.
inline double rs_coded_ber_model(double p) {
  if (p <= 0.0) return 0.0;
  const int n = rs::kCodeBytes, t = rs::kMaxCorrectable;
  double pb = 1.0 - std::pow(1.0 - p, 8.0);
  if (pb <= 0.0) return 0.0;
  // sum_{j=t+1}^{n} (j/n) C(n,j) pb^j (1-pb)^(n-j), computed via log terms.
  double sum = 0.0;
  double log_pb = std::log(pb), log_qb = std::log1p(-pb);
  double log_c = 0.0;  // log C(n,0)
  for (int j = 1; j <= n; ++j) {
    log_c += std::log(double(n - j + 1)) - std::log(double(j));
    if (j <= t) continue;
    sum += double(j) / n * std::exp(log_c + j * log_pb + (n - j) * log_qb);
  }
  return sum * (p * 8.0 / pb) / 8.0;
}

struct LinkRow {
  double distance_m = 0.0;
  double rx_power_dbm = 0.0;
  double rx_power_blocked_dbm = 0.0;  // with all blockage events applied
  double ebn0_db = 0.0;
  double ber_uncoded = 0.0;
  double ber_coded = 0.0;
};

inline std::vector<LinkRow> run_link_model(const Scenario& s) {
  std::vector<LinkRow> rows;
  for (double d : s.distance_grid_m) {
    LinkRow r;
    r.distance_m = d;
    r.rx_power_dbm = received_power_dbm(s.link, d);
    r.rx_power_blocked_dbm = received_power_dbm(s.link, d, s.blockage);
    r.ebn0_db = distance_to_ebn0_db(s.link, d, s.bitrate_hz);
    r.ber_uncoded = theoretical_ber(r.ebn0_db, BerScheme::dbpsk_differential);
    r.ber_coded = rs_coded_ber_model(r.ber_uncoded);
    rows.push_back(r);
  }
  return rows;
}

// Largest distance at which the model BER stays at or below target;
// bisection on the monotone BER-vs-distance curve.
inline double range_at_ber(const Scenario& s, double target_ber, bool coded) {
  auto ber_at = [&](double d) {
    double raw = theoretical_ber(distance_to_ebn0_db(s.link, d, s.bitrate_hz),
                                 BerScheme::dbpsk_differential);
    return coded ? rs_coded_ber_model(raw) : raw;
  };
  double lo = 1e-3, hi = 1e-3;
  while (ber_at(hi) <= target_ber && hi < 1e6) hi *= 2;
  if (hi >= 1e6) return hi;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (ber_at(mid) <= target_ber ? lo : hi) = mid;
  }
  return lo;
}

inline std::string link_csv(const Scenario& s, const std::vector<LinkRow>& rows) {
  std::string fp = fingerprint_hex(scenario_fingerprint(s));
  std::string out =
      "fingerprint,distance_m,rx_power_dbm,rx_power_blocked_dbm,ebn0_db,ber_uncoded,ber_coded\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%s,%.4f,%.4f,%.4f,%.4f,%.6e,%.6e\n", fp.c_str(),
                  r.distance_m, r.rx_power_dbm, r.rx_power_blocked_dbm, r.ebn0_db, r.ber_uncoded,
                  r.ber_coded);
    out += line;
  }
  return out;
}

// ---------------------------------------------------------------------------

inline FlowResult run_flow_sim(const Scenario& s) {
  return simulate(s.fifo, s.ingress, s.flow_ticks, s.flow_sample_interval);
}

inline std::string flow_csv(const Scenario& s, const FlowResult& r) {
  std::string fp = fingerprint_hex(scenario_fingerprint(s));
  std::string out = "fingerprint,tick,event,occupancy\n";
  char line[160];
  for (const auto& e : r.trace.events) {
    std::snprintf(line, sizeof(line), "%s,%lld,%s,%ld\n", fp.c_str(), e.tick,
                  event_kind_name(e.kind).c_str(), e.occupancy);
    out += line;
  }
  return out;
}

inline std::string flow_stats_csv(const Scenario& s, const FlowStats& st) {
  std::string fp = fingerprint_hex(scenario_fingerprint(s));
  char line[512];
  std::string out =
      "fingerprint,ticks,bytes_in,bytes_out,final_occupancy,max_occupancy,stop_count,"
      "start_count,overflow,egress_mbps\n";
  std::snprintf(line, sizeof(line), "%s,%lld,%lld,%lld,%ld,%ld,%ld,%ld,%d,%.4f\n", fp.c_str(),
                st.ticks, st.bytes_in, st.bytes_out, st.final_occupancy, st.max_occupancy,
                st.stop_count, st.start_count, st.overflow ? 1 : 0,
                st.egress_bps(s.fifo.write_clock) / 1e6);
  return out + line;
}

// ---------------------------------------------------------------------------
// Scrambler mask search: among random 8-byte masks (plus the all-zero mask as
// a baseline), pick the one minimizing the maximum preamble-correlation score
// over 64-bit windows of scrambled evaluation frames. The corpus mixes
// structured payloads (where an additive scrambler actually matters) with
// random ones.

inline uint64_t pattern_as_word(const PreamblePattern& p) {
  auto bytes = preamble_bytes(p);
  uint64_t w = 0;
  for (size_t i = 0; i < bytes.size() && i < 8; ++i) w |= uint64_t(bytes[i]) << (8 * i);
  return w;
}

// Max 64-bit-window correlation score against the pattern over all bit
// offsets of `bytes` (LSB-first bit order).
inline int max_preamble_score(std::span<const uint8_t> bytes, uint64_t pattern_word) {
  if (bytes.size() < 8) return 0;
  std::vector<uint64_t> words((bytes.size() + 7) / 8 + 1, 0);
  for (size_t i = 0; i < bytes.size(); ++i) words[i / 8] |= uint64_t(bytes[i]) << (8 * (i % 8));
  int best = 0;
  size_t total_bits = bytes.size() * 8;
  for (size_t bit = 0; bit + 64 <= total_bits; ++bit) {
    size_t wi = bit / 64, sh = bit % 64;
    uint64_t window = words[wi] >> sh;
    if (sh) window |= words[wi + 1] << (64 - sh);
    int score = 64 - std::popcount(window ^ pattern_word);
    if (score > best) best = score;
  }
  return best;
}

struct MaskSearchReport {
  ScramblerSequence best;
  int best_max_score = 64;
  int zero_mask_max_score = 64;
  long candidates = 0;
  uint64_t seed = 0;
};

inline MaskSearchReport search_scrambler_mask(const PreamblePattern& pattern, long candidates,
                                              uint64_t seed) {
  if (candidates < 1) throw std::invalid_argument("search_scrambler_mask: trials >= 1 required");
  uint64_t pw = pattern_as_word(pattern);
  FrameLayout layout = FrameLayout::format64();

  // Evaluation corpus: coded regions of frames from structured and random
  // payloads, pre-scrambling.
  std::vector<std::vector<uint8_t>> coded_regions;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> byte_dist(0, 255);
  auto add_payload = [&](const std::vector<uint8_t>& payload) {
    std::vector<uint8_t> coded;
    for (int w = 0; w < layout.data_words; ++w) {
      auto word = rs_encode(std::span(payload.data() + size_t(w) * 239, size_t(239)));
      coded.insert(coded.end(), word.begin(), word.end());
    }
    coded_regions.push_back(std::move(coded));
  };
  for (uint8_t fill : {0x00, 0xff, 0xaa, 0x55})
    add_payload(std::vector<uint8_t>(size_t(layout.payload_bytes()), fill));
  for (int i = 0; i < 4; ++i) {
    std::vector<uint8_t> p(size_t(layout.payload_bytes()));
    for (auto& b : p) b = static_cast<uint8_t>(byte_dist(rng));
    add_payload(p);
  }

  auto evaluate = [&](const ScramblerSequence& mask) {
    int worst = 0;
    for (const auto& region : coded_regions) {
      auto scrambled = scramble(region, mask);
      worst = std::max(worst, max_preamble_score(scrambled, pw));
    }
    return worst;
  };

  MaskSearchReport report;
  report.candidates = candidates;
  report.seed = seed;
  report.zero_mask_max_score = evaluate(ScramblerSequence{});
  report.best = ScramblerSequence{};
  report.best_max_score = report.zero_mask_max_score;
  for (long c = 0; c < candidates; ++c) {
    ScramblerSequence mask;
    for (auto& b : mask.bytes) b = static_cast<uint8_t>(byte_dist(rng));
    int score = evaluate(mask);
    if (score < report.best_max_score) {
      report.best_max_score = score;
      report.best = mask;
    }
  }
  return report;
}

}  // namespace ngbb
