#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qsched/problems.hpp"
#include "qsched/schedules.hpp"

namespace qsched {

struct EnsembleSpec {
  enum class Kind { max2sat, max3sat };
  Kind kind = Kind::max2sat;
  int num_vars = 20;
  int num_clauses = 60;
  int target_count = 100;        // instances to emit (all with unique ground states)
  double hardness_fraction = 0.068;
  std::string reference_schedule = "L(10,1,1)";
  std::uint64_t seed = 0;

  static Kind parse_kind(const std::string& name);
  std::string kind_name() const;
};

// MAX-2-SAT ensemble draw: i != j, independent negations, duplicate clauses
// rejected (clause-level redraw), whole instance redrawn until the ground
// state is unique.
SatInstance gen_max2sat(int num_vars, int num_clauses, std::mt19937_64& rng);

// MAX-3-SAT ensemble draw: variables independent (repeats and tautologies
// allowed), duplicate clauses allowed, unique-ground-state rejection.
SatInstance gen_max3sat(int num_vars, int num_clauses, std::mt19937_64& rng);

// One emitted ensemble member with its verification data.
struct EnsembleInstance {
  std::string id;
  SatInstance instance;
  double ground_energy = 0.0;
  std::uint64_t ground_state = 0;
  std::optional<double> reference_overlap;
};

// Generates spec.target_count instances; instance k comes from RNG stream
// (spec.seed, k), so parallel and serial generation agree exactly.
std::vector<EnsembleInstance> generate_ensemble(const EnsembleSpec& spec, int num_threads = 1);

// Fills in each instance's reference-schedule ground-state overlap (skips
// instances that already carry one).
void compute_reference_overlaps(std::vector<EnsembleInstance>& instances,
                                const Schedule& reference, const TrotterConfig& cfg,
                                int num_threads = 1);

// Retains the floor(fraction*count) instances with smallest reference
// overlap, ties broken by instance id; output sorted hardest first.
std::vector<EnsembleInstance> hardness_filter(std::vector<EnsembleInstance> instances,
                                              const Schedule& reference, double fraction,
                                              const TrotterConfig& cfg, int num_threads = 1);

// Uniform k-subset without replacement as the training set; the full input
// set is the test set.
struct TrainingSplit {
  std::vector<std::size_t> training_indices;
};
TrainingSplit split_training(const std::vector<EnsembleInstance>& hard_set, int k,
                             std::mt19937_64& rng);

// --- ensemble directories ---------------------------------------------------

void write_ensemble(const std::vector<EnsembleInstance>& instances, const EnsembleSpec& spec,
                    const std::filesystem::path& dir);
std::vector<EnsembleInstance> read_ensemble(const std::filesystem::path& dir);

// Hard-subset manifest: retained instance ids plus the hardness cutoff.
void write_hard_manifest(const std::vector<EnsembleInstance>& hard,
                         const std::string& reference_label, double fraction,
                         const std::filesystem::path& path);
std::vector<std::string> read_hard_manifest(const std::filesystem::path& path);

}  // namespace qsched
