#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qsched/schedules.hpp"

namespace qsched {

using cplx = std::complex<double>;

// Largest qubit count the simulator will try to allocate a state for.
inline constexpr int kMaxQubits = 30;

// Basis index bit i encodes sigma^z_i: bit 0 <-> +1 (variable true),
// bit 1 <-> -1 (variable false).
struct StateVector {
  int num_qubits = 0;
  std::vector<cplx> amp;

  std::uint64_t dim() const { return std::uint64_t{1} << num_qubits; }
  double norm_sq() const;
};

// Diagonal of H_Z over the computational basis.  Dense mode materializes all
// 2^N energies plus a level table for fast phase application; streaming mode
// keeps only clause terms and recomputes energies on the fly (for sizes where
// the dense array does not fit in memory).
struct DiagonalEnergy {
  int num_qubits = 0;
  std::vector<double> dense;

  struct ClauseTerm {
    std::uint64_t mask = 0;     // variable bits of the clause
    std::uint64_t pattern = 0;  // violating bit pattern under the mask
    double weight = 1.0;
  };
  std::vector<ClauseTerm> terms;  // streaming mode
  double offset = 0.0;

  // Dense-mode acceleration: energies quantized to distinct levels.
  std::vector<double> levels;
  std::vector<std::uint16_t> level_index;

  bool streaming() const { return dense.empty(); }
  std::uint64_t dim() const { return std::uint64_t{1} << num_qubits; }
  double at(std::uint64_t x) const;

  // Builds the level table for dense energies (no-op when there are too many
  // distinct values; phase application then falls back to per-entry sincos).
  void compress();
};

struct TrotterConfig {
  int substeps = 4;  // n
};

// Uniform superposition: the zero-energy ground state of H_X.
StateVector init_plus_state(int num_qubits);

// psi[x] *= exp(i * theta * diag[x]).
void apply_diagonal_phase(StateVector& state, const DiagonalEnergy& diag, double theta);

// exp(i * theta * H_X) with H_X = sum_i (1 - sigma^x_i)/2; factorizes per qubit.
void apply_mixer(StateVector& state, double theta);

// One ansatz step exp[i(thetaX H_X + thetaZ H_Z)] via the symmetric
// second-order split (exp(i thetaZ/2n H_Z) exp(i thetaX/n H_X) exp(i thetaZ/2n H_Z))^n,
// with interior half-Z phases merged.
void apply_step(StateVector& state, const DiagonalEnergy& diag, double theta_x,
                double theta_z, const TrotterConfig& cfg);

// Applies the full schedule to the plus state, step j=1 first.
StateVector run_schedule(const DiagonalEnergy& diag, const Schedule& schedule,
                         const TrotterConfig& cfg);

double squared_overlap(const StateVector& state, std::uint64_t basis_index);

// exp(i*t*H) * v by eigendecomposition; H must be hermitian, dim <= 4096.
// Test oracle and backend for small exact models.
Eigen::VectorXcd dense_evolve(const Eigen::MatrixXcd& hamiltonian,
                              const Eigen::VectorXcd& state, double t);

}  // namespace qsched
