#include "qsched/core_sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qsched/errors.hpp"

namespace qsched {

double StateVector::norm_sq() const {
  double s = 0.0;
  for (const cplx& a : amp) s += std::norm(a);
  return s;
}

double DiagonalEnergy::at(std::uint64_t x) const {
  if (!dense.empty()) return dense[x];
  double e = offset;
  for (const ClauseTerm& t : terms)
    if ((x & t.mask) == t.pattern) e += t.weight;
  return e;
}

void DiagonalEnergy::compress() {
  levels.clear();
  level_index.clear();
  if (dense.empty()) return;
  std::map<double, std::uint16_t> seen;
  std::vector<std::uint16_t> idx(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    auto it = seen.find(dense[i]);
    if (it == seen.end()) {
      if (seen.size() >= 65535) return;  // too many levels; keep raw energies
      it = seen.emplace(dense[i], static_cast<std::uint16_t>(seen.size())).first;
      levels.push_back(dense[i]);
    }
    idx[i] = it->second;
  }
  // remap to sorted level order
  std::vector<double> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint16_t> remap(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    auto pos = std::lower_bound(sorted.begin(), sorted.end(), levels[i]);
    remap[i] = static_cast<std::uint16_t>(pos - sorted.begin());
  }
  for (auto& v : idx) v = remap[v];
  levels = std::move(sorted);
  level_index = std::move(idx);
}

StateVector init_plus_state(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits)
    throw CapacityError("init_plus_state: qubit count " + std::to_string(num_qubits) +
                        " outside supported range [1, " + std::to_string(kMaxQubits) + "]");
  StateVector psi;
  psi.num_qubits = num_qubits;
  const double a = std::pow(2.0, -0.5 * num_qubits);
  psi.amp.assign(psi.dim(), cplx(a, 0.0));
  return psi;
}

namespace {

inline cplx cis(double x) { return {std::cos(x), std::sin(x)}; }

void phase_by_levels(StateVector& state, const DiagonalEnergy& diag, double theta) {
  std::vector<cplx> table(diag.levels.size());
  for (std::size_t k = 0; k < diag.levels.size(); ++k)
    table[k] = cis(theta * diag.levels[k]);
  const std::uint16_t* idx = diag.level_index.data();
  cplx* amp = state.amp.data();
  const std::uint64_t n = state.dim();
  for (std::uint64_t x = 0; x < n; ++x) amp[x] *= table[idx[x]];
}

// Streaming phase for unit-weight clause terms: energy is a violation count,
// so the phase table is indexed by count.
void phase_by_count(StateVector& state, const DiagonalEnergy& diag, double theta) {
  std::vector<cplx> table(diag.terms.size() + 1);
  for (std::size_t k = 0; k < table.size(); ++k)
    table[k] = cis(theta * (diag.offset + static_cast<double>(k)));
  cplx* amp = state.amp.data();
  const std::uint64_t n = state.dim();
  for (std::uint64_t x = 0; x < n; ++x) {
    unsigned c = 0;
    for (const auto& t : diag.terms) c += ((x & t.mask) == t.pattern);
    amp[x] *= table[c];
  }
}

}  // namespace

void apply_diagonal_phase(StateVector& state, const DiagonalEnergy& diag, double theta) {
  if (state.num_qubits != diag.num_qubits)
    throw DimensionError("apply_diagonal_phase: state has " + std::to_string(state.num_qubits) +
                         " qubits, diagonal has " + std::to_string(diag.num_qubits));
  if (!diag.dense.empty()) {
    if (!diag.level_index.empty()) {
      phase_by_levels(state, diag, theta);
    } else {
      cplx* amp = state.amp.data();
      const double* e = diag.dense.data();
      const std::uint64_t n = state.dim();
      for (std::uint64_t x = 0; x < n; ++x) amp[x] *= cis(theta * e[x]);
    }
    return;
  }
  bool unit_weights = true;
  for (const auto& t : diag.terms) unit_weights &= (t.weight == 1.0);
  if (unit_weights) {
    phase_by_count(state, diag, theta);
  } else {
    cplx* amp = state.amp.data();
    const std::uint64_t n = state.dim();
    for (std::uint64_t x = 0; x < n; ++x) amp[x] *= cis(theta * diag.at(x));
  }
}

void apply_mixer(StateVector& state, double theta) {
  // Per qubit: the |+> component keeps phase 1, the |-> component gets
  // exp(i theta).  In the computational basis this is the butterfly
  //   a0' = (a0+a1)/2 + c*(a0-a1)/2,  a1' = (a0+a1)/2 - c*(a0-a1)/2.
  const cplx c = cis(theta);
  cplx* amp = state.amp.data();
  const std::uint64_t dim = state.dim();
  for (int q = 0; q < state.num_qubits; ++q) {
    const std::uint64_t stride = std::uint64_t{1} << q;
    for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
      for (std::uint64_t i = base; i < base + stride; ++i) {
        const cplx a = amp[i];
        const cplx b = amp[i + stride];
        const cplx s = 0.5 * (a + b);
        const cplx d = 0.5 * c * (a - b);
        amp[i] = s + d;
        amp[i + stride] = s - d;
      }
    }
  }
}

void apply_step(StateVector& state, const DiagonalEnergy& diag, double theta_x,
                double theta_z, const TrotterConfig& cfg) {
  if (cfg.substeps < 1) throw ConfigError("apply_step: substeps must be >= 1");
  const int n = cfg.substeps;
  // (Z/2n . X/n . Z/2n)^n with interior half-Z pairs merged into full steps.
  apply_diagonal_phase(state, diag, theta_z / (2.0 * n));
  for (int s = 0; s < n; ++s) {
    apply_mixer(state, theta_x / n);
    apply_diagonal_phase(state, diag, s + 1 < n ? theta_z / n : theta_z / (2.0 * n));
  }
}

StateVector run_schedule(const DiagonalEnergy& diag, const Schedule& schedule,
                         const TrotterConfig& cfg) {
  if (schedule.steps() < 1) throw ConfigError("run_schedule: schedule must have p >= 1");
  StateVector psi = init_plus_state(diag.num_qubits);
  for (int j = 0; j < schedule.steps(); ++j)
    apply_step(psi, diag, schedule.theta_x[j], schedule.theta_z[j], cfg);
  return psi;
}

double squared_overlap(const StateVector& state, std::uint64_t basis_index) {
  if (basis_index >= state.dim())
    throw DimensionError("squared_overlap: basis index out of range");
  return std::norm(state.amp[basis_index]);
}

Eigen::VectorXcd dense_evolve(const Eigen::MatrixXcd& hamiltonian,
                              const Eigen::VectorXcd& state, double t) {
  const Eigen::Index dim = hamiltonian.rows();
  if (dim > 4096) throw CapacityError("dense_evolve: dimension > 4096");
  if (hamiltonian.cols() != dim || state.size() != dim)
    throw DimensionError("dense_evolve: dimension mismatch");
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw ConfigError("dense_evolve: matrix is not hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hamiltonian);
  Eigen::VectorXcd phases(dim);
  for (Eigen::Index k = 0; k < dim; ++k)
    phases(k) = std::polar(1.0, t * es.eigenvalues()(k));
  return es.eigenvectors() * (phases.asDiagonal() * (es.eigenvectors().adjoint() * state));
}

}  // namespace qsched
