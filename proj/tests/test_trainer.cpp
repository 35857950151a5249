#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "qsched/errors.hpp"
#include "qsched/trainer.hpp"

using namespace qsched;

namespace {

// Smooth concave objective with a unique maximum of 1 at the target angles.
ObjectiveFn quadratic_peak(const Schedule& target) {
  return [target](const Schedule& s) {
    double d2 = 0.0;
    for (int j = 0; j < s.steps(); ++j) {
      d2 += (s.theta_x[j] - target.theta_x[j]) * (s.theta_x[j] - target.theta_x[j]);
      d2 += (s.theta_z[j] - target.theta_z[j]) * (s.theta_z[j] - target.theta_z[j]);
    }
    return 1.0 - d2;
  };
}

Schedule zeros(int p) {
  Schedule s;
  s.theta_x.assign(p, 0.0);
  s.theta_z.assign(p, 0.0);
  s.label = "zeros";
  return s;
}

}  // namespace

TEST_CASE("noisy_search issues exactly the configured number of evaluations") {
  OptimizerConfig cfg;
  cfg.seed = 5;
  int calls = 0;
  ObjectiveFn counting = [&calls](const Schedule& s) {
    ++calls;
    return -s.theta_x[0] * s.theta_x[0];
  };
  std::mt19937_64 rng(cfg.seed);
  Schedule start = zeros(3);
  std::vector<TrajectoryRecord> traj;
  noisy_search(start, FreezeMask::none(3), counting, cfg, rng, counting(start), &traj);
  CHECK(calls == cfg.noisy_evals + 1);  // the one extra is the start evaluation above
  CHECK(traj.size() == static_cast<std::size_t>(cfg.noisy_evals));
}

TEST_CASE("noisy_search only accepts strict improvements") {
  OptimizerConfig cfg;
  cfg.seed = 6;
  Schedule target = zeros(2);
  target.theta_x = {0.4, -0.3};
  target.theta_z = {0.1, 0.2};
  const ObjectiveFn fn = quadratic_peak(target);
  std::mt19937_64 rng(cfg.seed);
  const Schedule start = zeros(2);
  std::vector<TrajectoryRecord> traj;
  const SearchResult res = noisy_search(start, FreezeMask::none(2), fn, cfg, rng,
                                        fn(start), &traj);
  CHECK(res.value > fn(start));
  double best = fn(start);
  for (const auto& r : traj) {
    if (r.accepted) {
      CHECK(r.objective > best);
      best = r.objective;
    } else {
      CHECK(r.objective <= best);
    }
  }
  CHECK(res.value == doctest::Approx(best));
}

TEST_CASE("identical seeds reproduce identical trajectories") {
  OptimizerConfig cfg;
  cfg.seed = 7;
  cfg.max_outer_rounds = 2;
  Schedule target = zeros(3);
  target.theta_x = {0.2, 0.5, -0.1};
  target.theta_z = {0.3, -0.2, 0.4};
  const ObjectiveFn fn = quadratic_peak(target);
  const TrainingRun a = train(zeros(3), FreezeMask::none(3), fn, cfg);
  const TrainingRun b = train(zeros(3), FreezeMask::none(3), fn, cfg);
  REQUIRE(a.trajectory.size() == b.trajectory.size());
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    CHECK(a.trajectory[i].objective == b.trajectory[i].objective);
    CHECK(a.trajectory[i].step_size == b.trajectory[i].step_size);
    CHECK(a.trajectory[i].accepted == b.trajectory[i].accepted);
  }
  CHECK(a.final_schedule.theta_x == b.final_schedule.theta_x);
  CHECK(a.final_schedule.theta_z == b.final_schedule.theta_z);
}

TEST_CASE("freeze mask leaves frozen coordinates bit-identical") {
  OptimizerConfig cfg;
  cfg.seed = 8;
  cfg.max_outer_rounds = 1;
  Schedule start = zeros(4);
  start.theta_z = {0.11, 0.22, 0.33, 0.44};
  Schedule target = start;
  target.theta_x = {0.6, -0.2, 0.3, 0.1};
  target.theta_z[1] = 5.0;  // pull on a frozen coordinate; it must not move
  const TrainingRun run =
      train(start, FreezeMask::frozen_z(4), quadratic_peak(target), cfg);
  CHECK(run.final_schedule.theta_z == start.theta_z);
  CHECK(run.final_schedule.theta_x != start.theta_x);
}

TEST_CASE("powell reaches a quadratic optimum to high precision") {
  Schedule target = zeros(3);
  target.theta_x = {1.3, -0.7, 0.25};
  target.theta_z = {0.5, 0.9, -1.1};
  const ObjectiveFn fn = quadratic_peak(target);
  OptimizerConfig cfg;
  const Schedule start = zeros(3);
  const SearchResult res =
      powell_minimize(start, FreezeMask::none(3), fn, cfg, fn(start));
  CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));
  for (int j = 0; j < 3; ++j) {
    CHECK(res.schedule.theta_x[j] == doctest::Approx(target.theta_x[j]).epsilon(1e-4));
    CHECK(res.schedule.theta_z[j] == doctest::Approx(target.theta_z[j]).epsilon(1e-4));
  }
}

TEST_CASE("train converges on a synthetic objective") {
  Schedule target = zeros(2);
  target.theta_x = {0.8, -0.4};
  target.theta_z = {0.2, 0.6};
  OptimizerConfig cfg;
  cfg.seed = 9;
  const TrainingRun run = train(zeros(2), FreezeMask::none(2), quadratic_peak(target), cfg);
  CHECK(run.final_objective == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(run.final_objective >= run.initial_objective);
}

TEST_CASE("accepted objective values are monotone along the trajectory") {
  Schedule target = zeros(3);
  target.theta_x = {0.3, 0.1, -0.2};
  OptimizerConfig cfg;
  cfg.seed = 10;
  cfg.max_outer_rounds = 3;
  const TrainingRun run = train(zeros(3), FreezeMask::none(3), quadratic_peak(target), cfg);
  double best = -1e300;
  for (const auto& r : run.trajectory) {
    if (r.accepted) {
      CHECK(r.objective >= best);
      best = r.objective;
    }
  }
  CHECK(run.final_objective >= best - 1e-12);
}

TEST_CASE("training log round trip") {
  OptimizerConfig cfg;
  cfg.seed = 11;
  cfg.max_outer_rounds = 1;
  Schedule target = zeros(2);
  target.theta_x = {0.1, 0.2};
  const TrainingRun run = train(zeros(2), FreezeMask::none(2), quadratic_peak(target), cfg);
  const auto path = std::filesystem::temp_directory_path() / "qsched_trainer_log.csv";
  save_training_log(run, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "index,step_size,objective,accepted");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++lines;
  CHECK(lines == run.trajectory.size());
  std::filesystem::remove(path);
}

TEST_CASE("config validation") {
  OptimizerConfig cfg;
  cfg.noisy_evals = 10;  // below the adaptation window
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = OptimizerConfig{};
  cfg.step_grow = 0.9;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = OptimizerConfig{};
  CHECK_NOTHROW(cfg.validate());
}
