#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ngbb {

// Dual-clock dual-threshold FIFO rate adapter between the 125 MHz GMII
// ingress and the f1 = 100.929 MHz source-byte egress. Clocks are exact
// rationals; the event loop runs in write-clock ticks and schedules reads by
// an integer accumulator, so there is no floating-point clock drift.

struct Rational {
  long long num = 0;
  long long den = 1;
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// f2 = 875 MHz / 8 = 109.375 MHz exactly.
inline constexpr double kEncodedByteClockHz = 109.375e6;
// f1 = (478/518) * f2 = 3734375000/37 Hz = 100.9290540... MHz.
inline constexpr Rational kSourceByteClock{3734375000LL, 37LL};
inline constexpr Rational kGmiiClock{125000000LL, 1LL};
// Eq.-style constants: F1 = 8*f1 = 807.4324... Mbps sustained egress.
inline constexpr double kSourceBitRateBps = 8.0 * 3734375000.0 / 37.0;

struct FifoConfig {
  long capacity_bytes = 32768;
  long upper_threshold = 24576;
  long lower_threshold = 8192;
  Rational write_clock = kGmiiClock;
  Rational read_clock = kSourceByteClock;

  void validate() const {
    if (!(0 < lower_threshold && lower_threshold < upper_threshold &&
          upper_threshold < capacity_bytes))
      throw std::invalid_argument("FifoConfig: need 0 < lower < upper < capacity");
    if (read_clock.to_double() >= write_clock.to_double())
      throw std::invalid_argument("FifoConfig: read clock must be slower than write clock");
  }
};

// Ethernet-frame byte arrivals: fixed-size frames separated by gap_ticks idle
// write ticks; optional random extra gap for randomized ingress tests.
// gap_ticks = 0 models a saturating source.
struct IngressPattern {
  long frame_bytes = 1518;
  long gap_ticks = 12;
  long max_extra_gap_ticks = 0;
  uint64_t jitter_seed = 0;
};

struct FifoEvent {
  enum class Kind { stop_asserted, start_asserted, occupancy_sample, overflow };
  Kind kind;
  long long tick;
  long occupancy;
};

struct FifoTrace {
  std::vector<FifoEvent> events;
};

struct FlowStats {
  long long ticks = 0;
  long long bytes_in = 0;
  long long bytes_out = 0;
  long final_occupancy = 0;
  long max_occupancy = 0;
  long stop_count = 0;
  long start_count = 0;
  bool overflow = false;
  long long overflow_tick = -1;

  bool conserved() const { return bytes_in == bytes_out + final_occupancy; }
  // Sustained egress in bits per second.
  double egress_bps(const Rational& write_clock) const {
    if (ticks == 0) return 0.0;
    return static_cast<double>(bytes_out) * 8.0 * write_clock.to_double() /
           static_cast<double>(ticks);
  }
};

struct FlowResult {
  FifoTrace trace;
  FlowStats stats;
};

// Stop defers NEW frames only; the in-flight frame always completes (the
// start signal "launches a new Ethernet frame"). A write into a full FIFO is
// reported as an overflow event and ends the run.
inline FlowResult simulate(const FifoConfig& config, const IngressPattern& ingress,
                           long long duration_ticks, long long sample_interval = 0) {
  config.validate();
  if (ingress.frame_bytes <= 0) throw std::invalid_argument("simulate: frame_bytes <= 0");

  // Read accumulator: per write tick, credit += ratio_num; a read fires each
  // time credit reaches ratio_den. ratio = read_clock / write_clock < 1.
  long long num = config.read_clock.num * config.write_clock.den;
  long long den = config.read_clock.den * config.write_clock.num;
  long long g = std::gcd(num, den);
  num /= g;
  den /= g;

  std::mt19937_64 jitter(ingress.jitter_seed);

  FlowResult r;
  long occupancy = 0;
  long long credit = 0;
  long in_frame_remaining = 0;  // bytes left of the in-flight frame
  long gap_remaining = 0;
  bool stopped = false;

  auto next_gap = [&]() {
    long gap = ingress.gap_ticks;
    if (ingress.max_extra_gap_ticks > 0)
      gap += static_cast<long>(jitter() % static_cast<uint64_t>(ingress.max_extra_gap_ticks + 1));
    return gap;
  };

  for (long long tick = 0; tick < duration_ticks; ++tick) {
    // Ingress side (write clock domain).
    if (in_frame_remaining == 0 && gap_remaining == 0 && !stopped)
      in_frame_remaining = ingress.frame_bytes;
    if (in_frame_remaining > 0) {
      if (occupancy >= config.capacity_bytes) {
        r.stats.overflow = true;
        r.stats.overflow_tick = tick;
        r.trace.events.push_back({FifoEvent::Kind::overflow, tick, occupancy});
        break;
      }
      ++occupancy;
      ++r.stats.bytes_in;
      if (--in_frame_remaining == 0) gap_remaining = next_gap();
    } else if (gap_remaining > 0) {
      --gap_remaining;
    }

    if (!stopped && occupancy >= config.upper_threshold) {
      stopped = true;
      ++r.stats.stop_count;
      r.trace.events.push_back({FifoEvent::Kind::stop_asserted, tick, occupancy});
    }

    // Egress side: one byte per read-clock tick whenever non-empty.
    credit += num;
    if (credit >= den) {
      credit -= den;
      if (occupancy > 0) {
        --occupancy;
        ++r.stats.bytes_out;
      }
    }

    if (stopped && occupancy <= config.lower_threshold) {
      stopped = false;
      ++r.stats.start_count;
      r.trace.events.push_back({FifoEvent::Kind::start_asserted, tick, occupancy});
    }

    if (occupancy > r.stats.max_occupancy) r.stats.max_occupancy = occupancy;
    if (sample_interval > 0 && tick % sample_interval == 0)
      r.trace.events.push_back({FifoEvent::Kind::occupancy_sample, tick, occupancy});
    ++r.stats.ticks;
  }
  r.stats.final_occupancy = occupancy;
  return r;
}

inline std::string event_kind_name(FifoEvent::Kind k) {
  switch (k) {
    case FifoEvent::Kind::stop_asserted: return "stop";
    case FifoEvent::Kind::start_asserted: return "start";
    case FifoEvent::Kind::occupancy_sample: return "sample";
    case FifoEvent::Kind::overflow: return "overflow";
  }
  return "?";
}

}  // namespace ngbb
