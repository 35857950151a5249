#include <doctest.h>

#include <filesystem>

#include "qsched/errors.hpp"
#include "qsched/schedules.hpp"

using namespace qsched;

TEST_CASE("linear anneal formula") {
  const Schedule s = linear_anneal(10, 1.0, 1.0);
  REQUIRE(s.steps() == 10);
  for (int j = 1; j <= 10; ++j) {
    CHECK(s.theta_z[j - 1] == doctest::Approx(j / 11.0).epsilon(1e-15));
    CHECK(s.theta_x[j - 1] == doctest::Approx((11 - j) / 11.0).epsilon(1e-15));
  }
  CHECK(s.label == "L(10,1,1)");

  const Schedule scaled = linear_anneal(4, 2.0, 3.0);
  CHECK(scaled.theta_x[0] == doctest::Approx(2.0 * 4 / 5.0));
  CHECK(scaled.theta_z[3] == doctest::Approx(3.0 * 4 / 5.0));
  CHECK_THROWS_AS(linear_anneal(0, 1.0, 1.0), ConfigError);
}

TEST_CASE("initial schedule catalog") {
  // key 2: all-X pulse, no Z
  auto [s2, m2] = initial_schedule(2);
  CHECK(s2.theta_x == std::vector<double>(10, 1.0));
  CHECK(s2.theta_z == std::vector<double>(10, 0.0));
  CHECK_FALSE(m2.any());

  // key 8: Z string "000000001" is right-aligned to ten entries
  auto [s8, m8] = initial_schedule(8);
  CHECK(s8.theta_x[8] == 1.0);
  CHECK(s8.theta_x[9] == 0.0);
  std::vector<double> z8(10, 0.0);
  z8[9] = 1.0;
  CHECK(s8.theta_z == z8);

  // key 11: trailing half steps
  auto [s11, m11] = initial_schedule(11);
  CHECK(s11.theta_x[8] == 0.5);
  CHECK(s11.theta_x[9] == 0.0);
  CHECK(s11.theta_z[8] == 0.5);
  CHECK(s11.theta_z[9] == 1.0);
  CHECK_FALSE(m11.any());

  // keys 6/7/9/12 use the linear Z grid 0.05..0.95
  auto [s6, m6] = initial_schedule(6);
  CHECK(s6.theta_z[0] == doctest::Approx(0.05));
  CHECK(s6.theta_z[9] == doctest::Approx(0.95));
  CHECK_FALSE(m6.any());

  // keys 10/13 freeze theta_z on the same grid
  auto [s13, m13] = initial_schedule(13);
  CHECK(s13.theta_z == s6.theta_z);
  CHECK(m13.any());
  CHECK(m13.freeze_z == std::vector<bool>(10, true));
  CHECK(m13.freeze_x == std::vector<bool>(10, false));

  CHECK_THROWS_AS(initial_schedule(1), ConfigError);
  CHECK_THROWS_AS(initial_schedule(14), ConfigError);
}

TEST_CASE("builtin learned schedules") {
  for (int key : builtin_learned_keys()) {
    const Schedule s = builtin_learned(key);
    CHECK(s.steps() == 10);
    CHECK(s.label == std::to_string(key));
  }
  const Schedule s154 = builtin_learned(154);
  CHECK(s154.theta_z[0] == 0.748224);
  CHECK(s154.theta_x[0] == 1.35801);
  CHECK(s154.theta_z[9] == 1.745549);
  CHECK(s154.theta_x[9] == 0.339493);
  CHECK_THROWS_AS(builtin_learned(42), ConfigError);
}

TEST_CASE("schedule averaging") {
  const Schedule avg = average_schedules({builtin_learned(154), builtin_learned(157)});
  CHECK(avg.theta_z[0] == doctest::Approx(0.7129705).epsilon(1e-12));
  CHECK(avg.theta_x[0] == doctest::Approx((1.35801 + 1.359167) / 2).epsilon(1e-12));

  Schedule mismatched = linear_anneal(4, 1.0, 1.0);
  CHECK_THROWS_AS(average_schedules({builtin_learned(154), mismatched}), ConfigError);
  CHECK_THROWS_AS(average_schedules({}), ConfigError);
}

TEST_CASE("schedule file round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "qsched_schedules_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "sched.json";

  const Schedule s = builtin_learned(113);
  FreezeMask mask = FreezeMask::frozen_z(10);
  ScheduleProvenance prov;
  prov.initial = "initial-11";
  prov.training_set = "ens0";
  prov.seed = 77;
  prov.final_objective = 0.123;
  save_schedule(s, path, &mask, &prov);

  const LoadedSchedule back = load_schedule(path);
  CHECK(back.schedule.theta_x == s.theta_x);  // bit-exact doubles via JSON
  CHECK(back.schedule.theta_z == s.theta_z);
  CHECK(back.schedule.label == s.label);
  REQUIRE(back.mask.has_value());
  CHECK(back.mask->freeze_z == mask.freeze_z);
  REQUIRE(back.provenance.has_value());
  CHECK(back.provenance->initial == prov.initial);
  CHECK(back.provenance->seed == prov.seed);
  CHECK(back.provenance->final_objective == prov.final_objective);

  CHECK_THROWS_AS(load_schedule(dir / "missing.json"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("schedule reference parsing") {
  const Schedule lit = parse_schedule_ref("L(10,1,1)");
  CHECK(lit.theta_z[0] == doctest::Approx(1.0 / 11.0));
  const Schedule b = parse_schedule_ref("154");
  CHECK(b.theta_z[0] == 0.748224);
  CHECK_THROWS_AS(parse_schedule_ref("L(10,1)"), ConfigError);
  CHECK_THROWS_AS(parse_schedule_ref(""), ConfigError);
  CHECK_THROWS(parse_schedule_ref("/nonexistent/path.json"));
}
