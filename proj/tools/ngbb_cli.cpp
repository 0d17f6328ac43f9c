// ngbb command-line harness: BER curves, sync analytics, link budget tables,
// FIFO flow-control simulation, scrambler mask search and single-frame debug
// dumps. Results go to CSV (with a JSON metadata sidecar) or JSON.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>

#include "ngbb/harness.hpp"

using nlohmann::json;
using namespace ngbb;

namespace {

json scenario_to_json(const Scenario& s) {
  json j;
  j["seed"] = s.seed;
  j["rs_enabled"] = s.rs_enabled;
  j["preamble_bits"] = s.preamble_bits;
  j["banks"] = s.banks;
  j["gamma"] = s.gamma;
  j["impl_degradation_db"] = s.impl_degradation_db;
  j["scrambler"] = to_hex(std::span(s.scrambler.bytes.data(), s.scrambler.bytes.size()));
  j["ebn0_grid_db"] = s.ebn0_grid_db;
  j["target_errors"] = s.target_errors;
  j["max_bits"] = s.max_bits;
  j["p_grid"] = s.p_grid;
  j["gamma_grid"] = s.gamma_grid;
  j["mc_trials"] = s.mc_trials;
  j["link"] = {{"tx_power_dbm", s.link.tx_power_dbm},
               {"tx_gain_dbi", s.link.tx_gain_dbi},
               {"rx_gain_dbi", s.link.rx_gain_dbi},
               {"carrier_hz", s.link.carrier_hz},
               {"noise_figure_db", s.link.noise_figure_db},
               {"bandwidth_hz", s.link.bandwidth_hz},
               {"impl_loss_db", s.link.impl_loss_db}};
  j["distance_grid_m"] = s.distance_grid_m;
  json blk = json::array();
  for (const auto& b : s.blockage) blk.push_back({{"attenuation_db", b.attenuation_db}});
  j["blockage"] = blk;
  j["required_snr_db"] = s.required_snr_db;
  j["bitrate_hz"] = s.bitrate_hz;
  j["fifo"] = {{"capacity_bytes", s.fifo.capacity_bytes},
               {"upper_threshold", s.fifo.upper_threshold},
               {"lower_threshold", s.fifo.lower_threshold}};
  j["ingress"] = {{"frame_bytes", s.ingress.frame_bytes}, {"gap_ticks", s.ingress.gap_ticks}};
  j["flow_ticks"] = s.flow_ticks;
  j["flow_sample_interval"] = s.flow_sample_interval;
  j["mask_candidates"] = s.mask_candidates;
  j["fingerprint"] = fingerprint_hex(scenario_fingerprint(s));
  return j;
}

void scenario_from_json(const json& j, Scenario& s) {
  if (j.contains("seed")) s.seed = j["seed"].get<uint64_t>();
  if (j.contains("rs_enabled")) s.rs_enabled = j["rs_enabled"].get<bool>();
  if (j.contains("preamble_bits")) s.preamble_bits = j["preamble_bits"].get<int>();
  if (j.contains("banks")) s.banks = j["banks"].get<int>();
  if (j.contains("gamma")) s.gamma = j["gamma"].get<int>();
  if (j.contains("impl_degradation_db"))
    s.impl_degradation_db = j["impl_degradation_db"].get<double>();
  if (j.contains("scrambler")) {
    auto bytes = from_hex(j["scrambler"].get<std::string>());
    if (bytes.size() != 8) throw std::invalid_argument("scenario: scrambler must be 8 bytes");
    std::copy(bytes.begin(), bytes.end(), s.scrambler.bytes.begin());
  }
  if (j.contains("ebn0_grid_db")) s.ebn0_grid_db = j["ebn0_grid_db"].get<std::vector<double>>();
  if (j.contains("target_errors")) s.target_errors = j["target_errors"].get<long>();
  if (j.contains("max_bits")) s.max_bits = j["max_bits"].get<long long>();
  if (j.contains("p_grid")) s.p_grid = j["p_grid"].get<std::vector<double>>();
  if (j.contains("gamma_grid")) s.gamma_grid = j["gamma_grid"].get<std::vector<int>>();
  if (j.contains("mc_trials")) s.mc_trials = j["mc_trials"].get<long>();
  if (j.contains("link")) {
    const auto& l = j["link"];
    if (l.contains("preset")) {
      std::string preset = l["preset"].get<std::string>();
      if (preset == "horn")
        s.link = LinkParams::horn();
      else if (preset == "patch")
        s.link = LinkParams::patch();
      else
        throw std::invalid_argument("scenario: unknown antenna preset " + preset);
    }
    if (l.contains("tx_power_dbm")) s.link.tx_power_dbm = l["tx_power_dbm"].get<double>();
    if (l.contains("tx_gain_dbi")) s.link.tx_gain_dbi = l["tx_gain_dbi"].get<double>();
    if (l.contains("rx_gain_dbi")) s.link.rx_gain_dbi = l["rx_gain_dbi"].get<double>();
    if (l.contains("carrier_hz")) s.link.carrier_hz = l["carrier_hz"].get<double>();
    if (l.contains("noise_figure_db")) s.link.noise_figure_db = l["noise_figure_db"].get<double>();
    if (l.contains("bandwidth_hz")) s.link.bandwidth_hz = l["bandwidth_hz"].get<double>();
    if (l.contains("impl_loss_db")) s.link.impl_loss_db = l["impl_loss_db"].get<double>();
  }
  if (j.contains("distance_grid_m"))
    s.distance_grid_m = j["distance_grid_m"].get<std::vector<double>>();
  if (j.contains("blockage")) {
    s.blockage.clear();
    for (const auto& b : j["blockage"]) {
      BlockageEvent e;
      std::string kind = b.value("kind", "custom");
      if (kind == "human")
        e = BlockageEvent::human();
      else if (kind == "closed_door")
        e = BlockageEvent::closed_door();
      if (b.contains("attenuation_db")) e.attenuation_db = b["attenuation_db"].get<double>();
      if (b.contains("start_s")) e.start_s = b["start_s"].get<double>();
      if (b.contains("stop_s")) e.stop_s = b["stop_s"].get<double>();
      s.blockage.push_back(e);
    }
  }
  if (j.contains("required_snr_db")) s.required_snr_db = j["required_snr_db"].get<double>();
  if (j.contains("bitrate_hz")) s.bitrate_hz = j["bitrate_hz"].get<double>();
  if (j.contains("fifo")) {
    const auto& f = j["fifo"];
    if (f.contains("capacity_bytes")) s.fifo.capacity_bytes = f["capacity_bytes"].get<long>();
    if (f.contains("upper_threshold")) s.fifo.upper_threshold = f["upper_threshold"].get<long>();
    if (f.contains("lower_threshold")) s.fifo.lower_threshold = f["lower_threshold"].get<long>();
  }
  if (j.contains("ingress")) {
    const auto& g = j["ingress"];
    if (g.contains("frame_bytes")) s.ingress.frame_bytes = g["frame_bytes"].get<long>();
    if (g.contains("gap_ticks")) s.ingress.gap_ticks = g["gap_ticks"].get<long>();
  }
  if (j.contains("flow_ticks")) s.flow_ticks = j["flow_ticks"].get<long long>();
  if (j.contains("flow_sample_interval"))
    s.flow_sample_interval = j["flow_sample_interval"].get<long long>();
  if (j.contains("mask_candidates")) s.mask_candidates = j["mask_candidates"].get<long>();
}

void write_output(const std::string& out_path, const std::string& content, const Scenario& s) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << content;
  std::ofstream meta(out_path + ".meta.json", std::ios::binary);
  meta << scenario_to_json(s).dump(2) << "\n";
}

json ber_json(const Scenario& s, const std::vector<BerRecord>& records) {
  json rows = json::array();
  std::string fp = fingerprint_hex(scenario_fingerprint(s));
  for (const auto& r : records)
    rows.push_back({{"fingerprint", fp},
                    {"ebn0_db", r.ebn0_db},
                    {"snr_db", r.snr_db},
                    {"frames_sent", r.frames_sent},
                    {"frames_lost_to_sync", r.frames_lost_to_sync},
                    {"raw_bits", r.raw_bits},
                    {"raw_errors", r.raw_errors},
                    {"raw_ber", r.raw_ber()},
                    {"payload_bits", r.payload_bits},
                    {"payload_errors", r.payload_errors},
                    {"payload_ber", r.payload_ber()},
                    {"corrected_bytes", r.corrected_bytes},
                    {"decode_failures", r.decode_failures},
                    {"complete", r.complete}});
  return rows;
}

json sync_json(const Scenario& s, const std::vector<SweepRow>& rows) {
  json out = json::array();
  std::string fp = fingerprint_hex(scenario_fingerprint(s));
  for (const auto& r : rows)
    out.push_back({{"fingerprint", fp},
                   {"n", r.n},
                   {"banks", r.banks},
                   {"gamma", r.gamma},
                   {"p", r.p},
                   {"p_miss_analytic", r.p_miss_analytic},
                   {"p_miss_mc", r.p_miss_mc},
                   {"p_fa_per_pair", r.p_fa_per_pair},
                   {"p_fa_frame_union", r.p_fa_frame_union}});
  return out;
}

json link_json(const Scenario& s, const std::vector<LinkRow>& rows) {
  json out = json::array();
  std::string fp = fingerprint_hex(scenario_fingerprint(s));
  for (const auto& r : rows)
    out.push_back({{"fingerprint", fp},
                   {"distance_m", r.distance_m},
                   {"rx_power_dbm", r.rx_power_dbm},
                   {"rx_power_blocked_dbm", r.rx_power_blocked_dbm},
                   {"ebn0_db", r.ebn0_db},
                   {"ber_uncoded", r.ber_uncoded},
                   {"ber_coded", r.ber_coded}});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"60 GHz near-gigabit DBPSK baseband simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // accept the global options after the subcommand too

  Scenario s;
  std::string scenario_path, out_path, format = "csv";
  app.add_option("--scenario", scenario_path, "Scenario JSON file")->check(CLI::ExistingFile);
  app.add_option("--seed", s.seed, "Master RNG seed");
  app.add_option("--out", out_path, "Output file (stdout if omitted)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  // Shared pipeline overrides.
  auto add_pipeline_flags = [&](CLI::App* cmd) {
    cmd->add_option("--gamma", s.gamma, "Correlation threshold (0..64)");
    cmd->add_option("--preamble", s.preamble_bits, "Preamble length in bits")
        ->check(CLI::IsMember({32, 64}));
    cmd->add_option("--banks", s.banks, "Correlator banks")->check(CLI::IsMember({1, 2}));
  };

  auto* ber = app.add_subcommand("ber", "Monte Carlo BER versus Eb/N0 over the full chain");
  add_pipeline_flags(ber);
  ber->add_option("--ebn0", s.ebn0_grid_db, "Eb/N0 grid in dB");
  ber->add_flag("--rs,!--no-rs", s.rs_enabled, "Enable RS(255,239) coding");
  ber->add_option("--errors", s.target_errors, "Target raw error count per point");
  ber->add_option("--max-bits", s.max_bits, "Bit budget per point");
  ber->add_option("--impl-degradation", s.impl_degradation_db,
                  "Fixed SNR offset overlaying measured hardware curves (dB)");

  auto* sync = app.add_subcommand("sync", "Analytic and Monte Carlo sync miss/false-alarm sweep");
  sync->add_option("--p", s.p_grid, "Channel bit-error probability grid");
  sync->add_option("--gamma-grid", s.gamma_grid, "Threshold grid (default: n-5 per format)");
  sync->add_option("--mc-trials", s.mc_trials, "Monte Carlo trials (0 disables)");

  auto* link = app.add_subcommand("link", "Link budget: power, Eb/N0 and model BER vs distance");
  link->add_option("--distance", s.distance_grid_m, "Distance grid in meters");
  std::string preset;
  link->add_option("--preset", preset, "Antenna preset")->check(CLI::IsMember({"horn", "patch"}));
  link->add_option("--tx-power", s.link.tx_power_dbm, "Tx power (dBm)");
  link->add_option("--nf", s.link.noise_figure_db, "Noise figure (dB)");
  link->add_option("--bandwidth", s.link.bandwidth_hz, "Receiver bandwidth (Hz)");
  link->add_option("--impl-loss", s.link.impl_loss_db, "Lumped implementation loss (dB)");
  link->add_option("--bitrate", s.bitrate_hz, "Bit rate (bps)");
  std::vector<std::string> blockage_args;
  link->add_option("--blockage", blockage_args, "Blockage events: human, closed_door or <dB>");

  auto* flow = app.add_subcommand("flow", "Dual-clock FIFO flow-control simulation");
  flow->add_option("--ticks", s.flow_ticks, "Duration in 125 MHz write ticks");
  flow->add_option("--capacity", s.fifo.capacity_bytes, "FIFO capacity (bytes)");
  flow->add_option("--upper", s.fifo.upper_threshold, "Stop threshold (bytes)");
  flow->add_option("--lower", s.fifo.lower_threshold, "Start threshold (bytes)");
  flow->add_option("--frame-bytes", s.ingress.frame_bytes, "Ingress Ethernet frame size");
  flow->add_option("--gap", s.ingress.gap_ticks, "Idle write ticks between ingress frames");
  flow->add_option("--sample-interval", s.flow_sample_interval,
                   "Occupancy sample period in ticks (0: stats only)");

  auto* mask = app.add_subcommand("mask-search", "Search for a low-false-detection scrambler mask");
  mask->add_option("--candidates", s.mask_candidates, "Number of candidate masks");

  auto* frame = app.add_subcommand("frame", "Single-frame build/parse roundtrip debug dump");
  add_pipeline_flags(frame);
  std::string payload_hex;
  frame->add_option("--payload-hex", payload_hex, "Payload bytes (hex; random if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!scenario_path.empty()) {
      std::ifstream f(scenario_path);
      json j = json::parse(f);
      Scenario base;
      scenario_from_json(j, base);
      // CLI flags already wrote into s; scenario supplies anything not given.
      Scenario merged = base;
      // Re-apply non-default CLI values on top of the scenario file.
      json cli_view = scenario_to_json(s), def_view = scenario_to_json(Scenario{});
      json merged_view = scenario_to_json(base);
      for (auto it = cli_view.begin(); it != cli_view.end(); ++it)
        if (it.key() != "fingerprint" && def_view[it.key()] != it.value())
          merged_view[it.key()] = it.value();
      scenario_from_json(merged_view, merged);
      s = merged;
    }
    if (!preset.empty()) s.link = preset == "horn" ? LinkParams::horn() : LinkParams::patch();
    for (const auto& b : blockage_args) {
      if (b == "human")
        s.blockage.push_back(BlockageEvent::human());
      else if (b == "closed_door")
        s.blockage.push_back(BlockageEvent::closed_door());
      else
        s.blockage.push_back({BlockageEvent::Kind::custom, std::stod(b), {}, {}});
    }

    if (*ber) {
      auto records = run_ber(s);
      write_output(out_path,
                   format == "csv" ? ber_csv(s, records) : ber_json(s, records).dump(2) + "\n", s);
    } else if (*sync) {
      auto rows = run_sync_experiment(s);
      write_output(out_path,
                   format == "csv" ? sync_csv(s, rows) : sync_json(s, rows).dump(2) + "\n", s);
    } else if (*link) {
      auto rows = run_link_model(s);
      double nl = noise_level_dbm(s.link.noise_figure_db, s.link.bandwidth_hz);
      json extra = {{"noise_level_dbm", nl},
                    {"sensitivity_dbm", sensitivity_dbm(nl, s.required_snr_db)},
                    {"range_uncoded_ber_1e6_m", range_at_ber(s, 1e-6, false)},
                    {"range_coded_ber_1e6_m", range_at_ber(s, 1e-6, true)}};
      if (format == "csv") {
        write_output(out_path, link_csv(s, rows), s);
        std::cerr << extra.dump() << "\n";
      } else {
        json out = {{"rows", link_json(s, rows)}, {"summary", extra}};
        write_output(out_path, out.dump(2) + "\n", s);
      }
    } else if (*flow) {
      auto result = run_flow_sim(s);
      std::string content = flow_stats_csv(s, result.stats);
      if (s.flow_sample_interval > 0 || !result.trace.events.empty())
        content += flow_csv(s, result);
      if (format == "json") {
        json j = {{"ticks", result.stats.ticks},
                  {"bytes_in", result.stats.bytes_in},
                  {"bytes_out", result.stats.bytes_out},
                  {"final_occupancy", result.stats.final_occupancy},
                  {"max_occupancy", result.stats.max_occupancy},
                  {"stop_count", result.stats.stop_count},
                  {"start_count", result.stats.start_count},
                  {"overflow", result.stats.overflow},
                  {"egress_mbps", result.stats.egress_bps(s.fifo.write_clock) / 1e6},
                  {"conserved", result.stats.conserved()}};
        content = j.dump(2) + "\n";
      }
      if (result.stats.overflow)
        throw std::runtime_error("fifo overflow at tick " +
                                 std::to_string(result.stats.overflow_tick));
      write_output(out_path, content, s);
    } else if (*mask) {
      auto pattern = generate_preamble(kPreambleSpec64);
      auto report = search_scrambler_mask(pattern, s.mask_candidates, s.seed);
      json j = {{"mask", to_hex(std::span(report.best.bytes.data(), report.best.bytes.size()))},
                {"max_window_score", report.best_max_score},
                {"zero_mask_max_score", report.zero_mask_max_score},
                {"candidates", report.candidates},
                {"seed", report.seed}};
      write_output(out_path, j.dump(2) + "\n", s);
    } else if (*frame) {
      FrameLayout layout = s.layout();
      std::vector<uint8_t> payload;
      if (!payload_hex.empty()) {
        payload = from_hex(payload_hex);
      } else {
        std::mt19937_64 rng(s.seed);
        payload.resize(static_cast<size_t>(layout.payload_bytes()));
        for (auto& b : payload) b = static_cast<uint8_t>(rng() & 0xff);
      }
      auto f = build_frame(payload, layout, s.scrambler);
      auto parsed = parse_frame(f, layout, s.scrambler);
      // One frame per line, lowercase hex, no separators (golden-file format).
      std::string content = to_hex(f.bytes) + "\n";
      if (format == "json") {
        json j = {{"frame_hex", to_hex(f.bytes)},
                  {"payload_hex", to_hex(payload)},
                  {"roundtrip_ok", parsed.payload == payload},
                  {"corrections", parsed.corrections},
                  {"total_frame_bytes", layout.total_frame_bytes()}};
        content = j.dump(2) + "\n";
      }
      if (parsed.payload != payload) throw std::runtime_error("frame roundtrip mismatch");
      write_output(out_path, content, s);
    }
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
