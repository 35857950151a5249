#include "qsched/toymodels.hpp"

#include <cmath>

#include "qsched/errors.hpp"

namespace qsched {

IsingModel ring_ising(const RingModelParams& params) {
  const int k = params.ring_size;
  if (k < 2) throw ConfigError("ring_ising: K must be >= 2");
  IsingModel model;
  model.num_spins = 2 * k;
  for (int i = 0; i < k; ++i) {
    model.couplings.push_back({i, (i + 1) % k, -0.25});  // inner ring
    model.couplings.push_back({i, i + k, -0.25});        // spoke
  }
  for (int i = k; i < 2 * k; ++i) model.fields.push_back({i, -0.25});
  if (params.variant == RingModelParams::Variant::missing_field) {
    for (int i = 0; i < k - 1; ++i) model.fields.push_back({i, 0.25});
  } else {
    const double strength = 0.25 * (k - 1) / k;
    for (int i = 0; i < k; ++i) model.fields.push_back({i, strength});
  }
  return model;
}

double run_ring(const Schedule& schedule, const RingModelParams& params,
                const TrotterConfig& cfg) {
  const DiagonalEnergy diag = ising_diagonal(ring_ising(params));
  const StateVector psi = run_schedule(diag, schedule, cfg);
  return squared_overlap(psi, 0);  // all spins up <-> basis index 0
}

SubspaceSector subspace_hamiltonians(const SubspaceModelParams& params) {
  if (params.n1 < 0 || params.n2 < 0 || params.n1 + params.n2 < 1)
    throw ConfigError("subspace_hamiltonians: need n1 + n2 >= 1, both non-negative");
  const double total = static_cast<double>(params.n1 + params.n2 + 1);

  // Basis rows for the subspaces that are actually present.
  std::vector<int> rows;             // 0 = u1, 1 = u2, 2 = u3
  std::vector<double> u_component;   // <ui|U> = sqrt(ni/N)
  std::vector<double> z_energy;
  if (params.n1 > 0) {
    rows.push_back(0);
    u_component.push_back(std::sqrt(params.n1 / total));
    z_energy.push_back(params.e1);
  }
  if (params.n2 > 0) {
    rows.push_back(1);
    u_component.push_back(std::sqrt(params.n2 / total));
    z_energy.push_back(params.e2);
  }
  rows.push_back(2);
  u_component.push_back(std::sqrt(1.0 / total));
  z_energy.push_back(params.e3);

  const int dim = static_cast<int>(rows.size());
  SubspaceSector sector;
  sector.initial.resize(dim);
  for (int i = 0; i < dim; ++i) sector.initial(i) = u_component[i];
  sector.h_x = params.a * sector.initial * sector.initial.adjoint();
  for (int i = 0; i < dim; ++i)
    if (rows[i] == 1) sector.h_x(i, i) += params.b;
  sector.h_z = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) sector.h_z(i, i) = z_energy[i];
  sector.ground_index = dim - 1;
  return sector;
}

double run_subspace(const Schedule& schedule, const SubspaceModelParams& params) {
  const SubspaceSector sector = subspace_hamiltonians(params);
  Eigen::VectorXcd psi = sector.initial;
  for (int j = 0; j < schedule.steps(); ++j) {
    const Eigen::MatrixXcd h =
        schedule.theta_x[j] * sector.h_x + schedule.theta_z[j] * sector.h_z;
    psi = dense_evolve(h, psi, 1.0);
  }
  return std::norm(psi(sector.ground_index));
}

}  // namespace qsched
