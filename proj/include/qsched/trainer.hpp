#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <vector>

#include "qsched/core_sim.hpp"
#include "qsched/schedules.hpp"

namespace qsched {

// Training objective: mean squared ground-state overlap over a fixed set of
// instances (each with a unique ground state).
struct Objective {
  struct Instance {
    DiagonalEnergy diag;
    std::uint64_t ground_state = 0;
  };
  std::vector<Instance> training_set;
  TrotterConfig trotter;
  int num_threads = 1;
};

double objective_value(const Schedule& schedule, const Objective& obj);

// Any maximization target over schedules; the trainer treats it as a black box.
using ObjectiveFn = std::function<double(const Schedule&)>;

ObjectiveFn make_objective_fn(const Objective& obj);

struct OptimizerConfig {
  int noisy_evals = 150;   // objective evaluations per noisy phase
  int adapt_window = 50;   // trials between step-size adaptations
  int accept_hi = 25;      // grow step if acceptances in window >= this
  int accept_lo = 10;      // shrink step if acceptances in window <= this
  double step_grow = 1.5;
  double step_shrink = 0.5;
  double initial_step = 0.1;
  double powell_tol = 1e-6;       // relative per-round tolerance in Powell
  int powell_max_rounds = 30;     // direction-set rounds per Powell phase
  int powell_max_line_iters = 50; // refinement iterations per line search
  double outer_tol = 1e-4;        // relative improvement to continue alternating
  int max_outer_rounds = 20;
  std::uint64_t seed = 0;

  void validate() const;
};

// One record per objective evaluation.
struct TrajectoryRecord {
  std::int64_t index = 0;
  double step_size = 0.0;  // noisy-phase step size; 0 during Powell phases
  double objective = 0.0;
  bool accepted = false;  // strictly improved the best value so far
};

struct TrainingRun {
  Schedule initial;
  FreezeMask mask;
  OptimizerConfig config;
  std::vector<TrajectoryRecord> trajectory;
  Schedule final_schedule;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  int outer_rounds = 0;
};

void save_training_log(const TrainingRun& run, const std::filesystem::path& path);

struct SearchResult {
  Schedule schedule;
  double value = 0.0;
};

// Greedy noisy search: perturbs every unfrozen coordinate by a uniform offset
// in [-step, step], keeps strict improvements, adapts the step size from the
// acceptance count in each window.  Issues exactly cfg.noisy_evals objective
// calls; `start_value` is the precomputed objective at `start`.
SearchResult noisy_search(const Schedule& start, const FreezeMask& mask, const ObjectiveFn& fn,
                          const OptimizerConfig& cfg, std::mt19937_64& rng, double start_value,
                          std::vector<TrajectoryRecord>* trajectory = nullptr);

// Powell's conjugate-direction method on the unfrozen coordinates, maximizing
// fn by minimizing its negation; derivative-free line searches.
SearchResult powell_minimize(const Schedule& start, const FreezeMask& mask, const ObjectiveFn& fn,
                             const OptimizerConfig& cfg, double start_value,
                             std::vector<TrajectoryRecord>* trajectory = nullptr);

// Alternates noisy search and Powell refinement until an outer round improves
// the objective by less than outer_tol (relative) or max_outer_rounds.
TrainingRun train(const Schedule& initial, const FreezeMask& mask, const ObjectiveFn& fn,
                  const OptimizerConfig& cfg);

}  // namespace qsched
