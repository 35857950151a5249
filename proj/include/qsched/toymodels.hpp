#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qsched/problems.hpp"
#include "qsched/schedules.hpp"

namespace qsched {

// Ring/spoke Ising model: K inner spins in a ferromagnetic ring, each coupled
// to one outer spin, opposing fields on inner and outer spins.  Engineered to
// have a unique all-up ground state with a near-degenerate cluster at gap 1/2.
struct RingModelParams {
  int ring_size = 2;  // K, N = 2K
  enum class Variant {
    missing_field,   // field +1/4 on inner spins 0..K-2 only
    reduced_fields,  // field +1/4*(K-1)/K on all K inner spins (same total)
  };
  Variant variant = Variant::missing_field;
};

IsingModel ring_ising(const RingModelParams& params);

// Runs the schedule on the ring model and returns the squared overlap with
// the all-up ground state.
double run_ring(const Schedule& schedule, const RingModelParams& params,
                const TrotterConfig& cfg);

// Three-subspace model on an abstract N-dimensional space (N = n1 + n2 + 1):
// H_Z is constant on each subspace, H_X is built from projectors onto the
// uniform superposition of all states and of subspace 2.  The symmetric
// sector {|u1>,|u2>,|u3>} is invariant, so the dynamics is 3-dimensional.
struct SubspaceModelParams {
  long long n1 = 0;
  long long n2 = 0;
  double a = 1.0;  // coefficient of |U><U|
  double b = 0.0;  // coefficient of |u2><u2|
  double e1 = 1.0;
  double e2 = 1.0;
  double e3 = 0.0;  // ground subspace (dimension 1)
};

struct SubspaceSector {
  Eigen::MatrixXcd h_x;
  Eigen::MatrixXcd h_z;
  Eigen::VectorXcd initial;  // |U>
  int ground_index = 0;      // row of |u3> in the (possibly reduced) basis
};

SubspaceSector subspace_hamiltonians(const SubspaceModelParams& params);

// Exact per-step exponentials (no Trotter needed at this dimension); returns
// |<u3|psi>|^2.
double run_subspace(const Schedule& schedule, const SubspaceModelParams& params);

}  // namespace qsched
