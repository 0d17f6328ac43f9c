#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ngbb {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kHornGainDbi = 22.4;
inline constexpr double kPatchGainDbi = 8.0;

struct LinkParams {
  double tx_power_dbm = 0.0;
  double tx_gain_dbi = kHornGainDbi;
  double rx_gain_dbi = kHornGainDbi;
  double carrier_hz = 60e9;
  double noise_figure_db = 9.0;
  double bandwidth_hz = 2e9;
  // Lumped RF implementation losses. 7.5 dB is a calibration default that
  // reconciles the free-space model with the measured ~35 m range; it is not
  // a measured figure.
  double impl_loss_db = 7.5;

  static LinkParams horn() { return LinkParams{}; }
  static LinkParams patch() {
    LinkParams p;
    p.tx_gain_dbi = kPatchGainDbi;
    p.rx_gain_dbi = kPatchGainDbi;
    return p;
  }
};

struct BlockageEvent {
  enum class Kind { human, closed_door, custom };
  Kind kind = Kind::custom;
  double attenuation_db = 0.0;
  // Optional activity window for time-series scenarios; active everywhere
  // when unset.
  std::optional<double> start_s;
  std::optional<double> stop_s;

  static BlockageEvent human() { return {Kind::human, 20.0, {}, {}}; }
  static BlockageEvent closed_door() { return {Kind::closed_door, 15.0, {}, {}}; }

  bool active_at(std::optional<double> t) const {
    if (!t || !start_s) return true;
    return *t >= *start_s && (!stop_s || *t < *stop_s);
  }
};

// N_L = -174 dBm/Hz + NF + 10*log10(B)
inline double noise_level_dbm(double nf_db, double bandwidth_hz) {
  if (bandwidth_hz <= 0.0) throw std::invalid_argument("noise_level_dbm: bandwidth <= 0");
  return -174.0 + nf_db + 10.0 * std::log10(bandwidth_hz);
}

inline double fspl_db(double distance_m, double carrier_hz) {
  if (distance_m <= 0.0) throw std::domain_error("fspl_db: distance must be positive");
  return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m * carrier_hz / kSpeedOfLight);
}

inline double received_power_dbm(const LinkParams& params, double distance_m,
                                 std::span<const BlockageEvent> events = {},
                                 std::optional<double> time_s = {}) {
  double p = params.tx_power_dbm + params.tx_gain_dbi + params.rx_gain_dbi -
             fspl_db(distance_m, params.carrier_hz) - params.impl_loss_db;
  for (const auto& e : events)
    if (e.active_at(time_s)) p -= e.attenuation_db;
  return p;
}

inline double sensitivity_dbm(double noise_level_dbm, double required_snr_db) {
  return noise_level_dbm + required_snr_db;
}

// Largest distance with received_power >= sensitivity, by closed-form FSPL
// inversion. nullopt when the link never closes (non-finite budget).
inline std::optional<double> max_range_m(const LinkParams& params, double sensitivity_dbm,
                                         std::span<const BlockageEvent> events = {}) {
  double fixed = params.tx_power_dbm + params.tx_gain_dbi + params.rx_gain_dbi -
                 params.impl_loss_db;
  for (const auto& e : events)
    if (e.active_at({})) fixed -= e.attenuation_db;
  double margin_db = fixed - sensitivity_dbm -
                     20.0 * std::log10(4.0 * std::numbers::pi * params.carrier_hz / kSpeedOfLight);
  if (!std::isfinite(margin_db)) return std::nullopt;
  return std::pow(10.0, margin_db / 20.0);
}

// Eb/N0 at a given distance: received power minus the noise density
// integrated over the bit rate. Feeding theoretical_ber gives the model
// BER-versus-distance curve.
inline double distance_to_ebn0_db(const LinkParams& params, double distance_m, double bitrate_hz,
                                  std::span<const BlockageEvent> events = {},
                                  std::optional<double> time_s = {}) {
  if (bitrate_hz <= 0.0) throw std::invalid_argument("distance_to_ebn0_db: bitrate <= 0");
  double pr = received_power_dbm(params, distance_m, events, time_s);
  double noise_in_bitrate = -174.0 + params.noise_figure_db + 10.0 * std::log10(bitrate_hz);
  return pr - noise_in_bitrate;
}

}  // namespace ngbb
