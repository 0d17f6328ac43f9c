#include <catch2/catch_amalgamated.hpp>

#include "ngbb/linkbudget.hpp"
#include "ngbb/modem.hpp"

using namespace ngbb;

TEST_CASE("noise level") {
  CHECK(noise_level_dbm(9.0, 2e9) == Catch::Approx(-71.99).margin(0.005));
  CHECK(noise_level_dbm(0.0, 1.0) == Catch::Approx(-174.0).margin(1e-12));
  CHECK(noise_level_dbm(9.0, 4e9) - noise_level_dbm(9.0, 2e9) ==
        Catch::Approx(10.0 * std::log10(2.0)));
  CHECK_THROWS_AS(noise_level_dbm(9.0, 0.0), std::invalid_argument);
}

TEST_CASE("free space path loss") {
  CHECK(fspl_db(1.0, 60e9) == Catch::Approx(68.0).margin(0.05));
  CHECK(fspl_db(10.0, 60e9) == Catch::Approx(88.0).margin(0.05));
  CHECK(fspl_db(20.0, 60e9) - fspl_db(10.0, 60e9) == Catch::Approx(20.0 * std::log10(2.0)));
  CHECK_THROWS_AS(fspl_db(0.0, 60e9), std::domain_error);
  CHECK_THROWS_AS(fspl_db(-1.0, 60e9), std::domain_error);
}

TEST_CASE("received power composition") {
  LinkParams horns = LinkParams::horn();
  horns.impl_loss_db = 0.0;
  CHECK(received_power_dbm(horns, 5.0) == Catch::Approx(-37.2).margin(0.05));

  std::vector<BlockageEvent> human{BlockageEvent::human()};
  CHECK(received_power_dbm(horns, 5.0, human) == Catch::Approx(-57.2).margin(0.05));

  LinkParams patch = LinkParams::patch();
  patch.impl_loss_db = 0.0;
  CHECK(received_power_dbm(horns, 7.0) - received_power_dbm(patch, 7.0) ==
        Catch::Approx(2 * (22.4 - 8.0)));

  // dB terms commute: assembling the budget in any order gives the same power.
  double manual = -fspl_db(5.0, horns.carrier_hz) + horns.rx_gain_dbi + horns.tx_power_dbm -
                  horns.impl_loss_db + horns.tx_gain_dbi;
  CHECK(received_power_dbm(horns, 5.0) == Catch::Approx(manual).margin(1e-12));
}

TEST_CASE("sensitivity") {
  CHECK(sensitivity_dbm(-71.99, 10.5) == Catch::Approx(-61.49).margin(1e-9));
  CHECK(sensitivity_dbm(-71.99, 0.0) == Catch::Approx(-71.99));
  CHECK(sensitivity_dbm(-71.99, 11.5) - sensitivity_dbm(-71.99, 10.5) == Catch::Approx(1.0));
}

TEST_CASE("max range inverts the power curve") {
  LinkParams horns = LinkParams::horn();
  horns.impl_loss_db = 0.0;
  auto range = max_range_m(horns, -61.5);
  REQUIRE(range);
  CHECK(*range == Catch::Approx(82.0).margin(2.0));
  // Round-trip: power at the returned distance equals the sensitivity.
  CHECK(received_power_dbm(horns, *range) == Catch::Approx(-61.5).margin(1e-6));

  // 20 dB of blockage costs exactly a factor 10 in range.
  std::vector<BlockageEvent> human{BlockageEvent::human()};
  auto blocked = max_range_m(horns, -61.5, human);
  REQUIRE(blocked);
  CHECK(*range / *blocked == Catch::Approx(10.0).epsilon(1e-9));

  // Infinite implementation loss: no coverage.
  LinkParams dead = horns;
  dead.impl_loss_db = std::numeric_limits<double>::infinity();
  CHECK_FALSE(max_range_m(dead, -61.5));
}

TEST_CASE("received power is strictly decreasing in distance") {
  LinkParams p = LinkParams::horn();
  double prev = received_power_dbm(p, 0.5);
  for (double d = 1.0; d <= 64.0; d *= 2) {
    double v = received_power_dbm(p, d);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("distance to Eb/N0 bridges into the modem BER curves") {
  LinkParams p = LinkParams::horn();
  // Monotone composition: larger distance, lower Eb/N0, higher BER.
  double prev_ebn0 = 1e9, prev_ber = 0;
  for (double d : {1.0, 5.0, 10.0, 20.0, 40.0}) {
    double ebn0 = distance_to_ebn0_db(p, d, kSymbolRateHz);
    double ber = theoretical_ber(ebn0, BerScheme::dbpsk_differential);
    CHECK(ebn0 < prev_ebn0);
    CHECK(ber >= prev_ber);
    prev_ebn0 = ebn0;
    prev_ber = ber;
  }
  // At the distance where Eb/N0 = 10 dB, the model BER is 0.5 e^-10.
  double lo = 0.1, hi = 1000.0;
  for (int i = 0; i < 100; ++i) {
    double mid = std::sqrt(lo * hi);
    (distance_to_ebn0_db(p, mid, kSymbolRateHz) > 10.0 ? lo : hi) = mid;
  }
  CHECK(theoretical_ber(distance_to_ebn0_db(p, lo, kSymbolRateHz), BerScheme::dbpsk_differential) ==
        Catch::Approx(0.5 * std::exp(-10.0)).epsilon(1e-3));
  CHECK_THROWS_AS(distance_to_ebn0_db(p, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("blockage event time windows") {
  BlockageEvent e = BlockageEvent::closed_door();
  CHECK(e.attenuation_db == 15.0);
  e.start_s = 10.0;
  e.stop_s = 20.0;
  LinkParams p = LinkParams::horn();
  std::vector<BlockageEvent> events{e};
  double open = received_power_dbm(p, 5.0, events, 5.0);
  double shut = received_power_dbm(p, 5.0, events, 15.0);
  CHECK(open - shut == Catch::Approx(15.0));
  CHECK(BlockageEvent::human().attenuation_db == 20.0);
}
