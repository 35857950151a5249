#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qsched/core_sim.hpp"

namespace qsched {

struct Literal {
  int variable = 0;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Clause {
  std::vector<Literal> literals;  // k = 2 or 3
};

struct SatInstance {
  int num_vars = 0;
  std::vector<Clause> clauses;
  std::vector<double> weights;  // empty = all clauses weight 1

  double weight(std::size_t clause_index) const {
    return weights.empty() ? 1.0 : weights[clause_index];
  }
};

// Energy E(s) = constant + sum J_ij s_i s_j + sum h_i s_i, s in {+1,-1};
// bit i of a basis index 0 encodes s_i = +1.
struct IsingModel {
  int num_spins = 0;
  struct Coupling {
    int i = 0, j = 0;
    double strength = 0.0;
  };
  struct Field {
    int i = 0;
    double strength = 0.0;
  };
  std::vector<Coupling> couplings;
  std::vector<Field> fields;
  double constant = 0.0;
};

struct GroundStateReport {
  double min_energy = 0.0;
  std::vector<std::uint64_t> optima;
  bool degenerate = false;
};

// Number of violated clauses (weighted) under the assignment encoded by the
// basis index.
double energy_of_assignment(const SatInstance& instance, std::uint64_t assignment);

// Materializes the H_Z diagonal; with materialize=false returns a streaming
// diagonal that recomputes energies per index (same operation contract).
DiagonalEnergy build_diagonal(const SatInstance& instance, bool materialize = true);

DiagonalEnergy ising_diagonal(const IsingModel& model);

// Expands 2-SAT clause terms (1 +/- sz_i)(1 +/- sz_j)/4 into an Ising model
// whose diagonal equals build_diagonal exactly.
IsingModel sat2_to_ising(const SatInstance& instance);

// Exhaustive minimum and argmin set; degeneracy tolerance for real-valued
// models (integer-valued diagonals are exact well below it).
GroundStateReport ground_states(const DiagonalEnergy& diag, double tolerance = 1e-9);

// Clause identity as an unordered literal set (duplicate detection).
std::uint64_t clause_identity(const Clause& clause);

// --- instance files -------------------------------------------------------
// DIMACS-CNF text (p cnf / p wcnf) plus a JSON sidecar `<base>.meta.json`.

struct InstanceMeta {
  std::string generator;
  std::uint64_t seed = 0;
  std::string params;  // ensemble parameters, free-form JSON string
  double ground_energy = 0.0;
  std::uint64_t ground_state = 0;
  bool unique_ground_state = false;
  std::optional<double> reference_overlap;  // under the ensemble's reference schedule
};

void write_dimacs(const SatInstance& instance, const std::filesystem::path& path);
SatInstance read_dimacs(const std::filesystem::path& path);
void write_meta(const InstanceMeta& meta, const std::filesystem::path& cnf_path);
std::optional<InstanceMeta> read_meta(const std::filesystem::path& cnf_path);

}  // namespace qsched
