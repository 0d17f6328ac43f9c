#include <catch2/catch_amalgamated.hpp>

#include "ngbb/harness.hpp"

using namespace ngbb;

TEST_CASE("scenario fingerprint is stable and input-sensitive") {
  Scenario a, b;
  CHECK(scenario_fingerprint(a) == scenario_fingerprint(b));
  b.seed = 2;
  CHECK(scenario_fingerprint(a) != scenario_fingerprint(b));
  b = a;
  b.gamma = 58;
  CHECK(scenario_fingerprint(a) != scenario_fingerprint(b));
  CHECK(fingerprint_hex(scenario_fingerprint(a)).size() == 16);
}

TEST_CASE("run_ber: noiseless scenario has zero errors and zero sync losses") {
  Scenario s;
  s.ebn0_grid_db = {std::numeric_limits<double>::infinity()};
  s.target_errors = 1;
  s.max_bits = 100'000;
  auto records = run_ber(s);
  REQUIRE(records.size() == 1);
  CHECK(records[0].raw_errors == 0);
  CHECK(records[0].payload_errors == 0);
  CHECK(records[0].frames_lost_to_sync == 0);
  CHECK(records[0].frames_sent > 0);
}

TEST_CASE("run_ber determinism: identical scenario and seed, identical CSV") {
  Scenario s;
  s.ebn0_grid_db = {5.0, 6.0, 7.0};
  s.target_errors = 50;
  s.max_bits = 2'000'000;
  auto csv1 = ber_csv(s, run_ber(s));
  auto csv2 = ber_csv(s, run_ber(s));
  CHECK(csv1 == csv2);
  Scenario other = s;
  other.seed = 99;
  CHECK(ber_csv(other, run_ber(other)) != csv1);
}

TEST_CASE("run_ber: coded payload BER beats uncoded at a moderate SNR") {
  Scenario coded;
  coded.ebn0_grid_db = {8.0};
  coded.target_errors = 400;
  coded.max_bits = 10'000'000;
  auto c = run_ber(coded)[0];

  Scenario uncoded = coded;
  uncoded.rs_enabled = false;
  auto u = run_ber(uncoded)[0];

  // Raw channel BER agrees between the runs (same channel model).
  CHECK(c.raw_ber() == Catch::Approx(u.raw_ber()).epsilon(0.3));
  CHECK(c.payload_ber() < u.payload_ber());
  CHECK(c.corrected_bytes > 0);
}

TEST_CASE("run_ber: 32-bit legacy format roundtrips") {
  Scenario s;
  s.preamble_bits = 32;
  s.gamma = 29;
  s.ebn0_grid_db = {9.0};
  s.target_errors = 30;
  s.max_bits = 2'000'000;
  auto r = run_ber(s)[0];
  CHECK(r.frames_sent > 0);
  CHECK(r.payload_bits > 0);
}

TEST_CASE("run_sync_experiment emits the documented CSV schema") {
  Scenario s;
  s.p_grid = {1e-3};
  auto rows = run_sync_experiment(s);
  auto csv = sync_csv(s, rows);
  CHECK(csv.rfind("fingerprint,n,banks,gamma,p,p_miss_analytic,p_miss_mc,p_fa_per_pair,"
                  "p_fa_frame_union\n",
                  0) == 0);
  CHECK(rows.size() == 4);  // {32,64} x {1,2} banks, default gamma per n
  CHECK(sync_csv(s, run_sync_experiment(s)) == csv);
}

TEST_CASE("run_link_model trends") {
  Scenario s;
  auto rows = run_link_model(s);
  REQUIRE(rows.size() == s.distance_grid_m.size());
  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].rx_power_dbm < rows[i - 1].rx_power_dbm);
    CHECK(rows[i].ber_uncoded >= rows[i - 1].ber_uncoded);
    CHECK(rows[i].ber_coded <= rows[i].ber_uncoded * 1.0001 + 1e-300);
  }
  // Coded range exceeds uncoded range at model BER 1e-6.
  CHECK(range_at_ber(s, 1e-6, true) > range_at_ber(s, 1e-6, false));

  // A closed-door event drops the blocked-power column by exactly 15 dB.
  Scenario door = s;
  door.blockage = {BlockageEvent::closed_door()};
  auto blocked = run_link_model(door);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(blocked[i].rx_power_dbm - blocked[i].rx_power_blocked_dbm == Catch::Approx(15.0));
    CHECK(blocked[i].rx_power_dbm == Catch::Approx(rows[i].rx_power_dbm));
  }
}

TEST_CASE("run_flow_sim CSV conservation") {
  Scenario s;
  s.flow_ticks = 2'000'000;
  auto r = run_flow_sim(s);
  CHECK(r.stats.conserved());
  auto csv = flow_stats_csv(s, r.stats);
  CHECK(csv.rfind("fingerprint,ticks,bytes_in,bytes_out,", 0) == 0);
}

TEST_CASE("mask search: deterministic, beats the all-zero mask, clears gamma") {
  auto pattern = generate_preamble(kPreambleSpec64);
  auto a = search_scrambler_mask(pattern, 256, 7);
  auto b = search_scrambler_mask(pattern, 256, 7);
  CHECK(a.best.bytes == b.best.bytes);
  CHECK(a.best_max_score <= a.zero_mask_max_score);
  CHECK(a.best_max_score < 59);
  CHECK_THROWS_AS(search_scrambler_mask(pattern, 0, 1), std::invalid_argument);
}
