// Acceptance suite: one criterion per invocation, one PASS/FAIL line each.
// Usage: acceptance <workdir> <criterion>
//
// The heavy statistical criteria cache per-instance overlaps under <workdir>
// so interrupted runs resume where they stopped and criterion 4 can reuse
// criterion 3's ensemble results.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsched/ensembles.hpp"
#include "qsched/evaluation.hpp"
#include "qsched/rng.hpp"
#include "qsched/schedules.hpp"
#include "qsched/toymodels.hpp"
#include "qsched/trainer.hpp"

using namespace qsched;
namespace fs = std::filesystem;

namespace {

bool g_pass = true;

void report(int criterion, bool ok, const std::string& detail) {
  g_pass = g_pass && ok;
  std::cout << "criterion " << criterion << ": " << (ok ? "PASS" : "FAIL") << " - " << detail
            << std::endl;
}

bool within_tolerance(double got, double expected) {
  // ±5% relative or ±0.0005 absolute, whichever is looser
  const double abs_err = std::abs(got - expected);
  return abs_err <= std::max(0.05 * std::abs(expected), 0.0005);
}

// --- overlap cache ----------------------------------------------------------
// CSV of (instance id, overlap), appended one line per computed instance so a
// killed run loses at most the instance in flight.

std::map<std::string, double> read_cache(const fs::path& path) {
  std::map<std::string, double> cache;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    cache[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
  }
  return cache;
}

std::map<std::string, double> cached_overlaps(const fs::path& path,
                                              const std::vector<EnsembleInstance>& instances,
                                              const Schedule& schedule,
                                              const TrotterConfig& cfg) {
  std::map<std::string, double> cache = read_cache(path);
  std::ofstream out(path, std::ios::app);
  out.precision(17);
  std::size_t done = 0;
  for (const auto& inst : instances) {
    if (cache.count(inst.id)) continue;
    const DiagonalEnergy diag = build_diagonal(inst.instance);
    const StateVector psi = run_schedule(diag, schedule, cfg);
    const double overlap = squared_overlap(psi, inst.ground_state);
    cache[inst.id] = overlap;
    out << inst.id << ',' << overlap << std::endl;  // flush per line
    if (++done % 100 == 0)
      std::cerr << path.filename().string() << ": " << done << " computed\n";
  }
  return cache;
}

std::vector<EvalRecord> to_records(const std::map<std::string, double>& overlaps,
                                   const std::vector<EnsembleInstance>& instances,
                                   const std::string& label) {
  std::vector<EvalRecord> out;
  for (const auto& inst : instances) out.push_back({inst.id, label, overlaps.at(inst.id)});
  return out;
}

std::vector<EnsembleInstance> hard_subset_of(const std::vector<EnsembleInstance>& all,
                                             const std::map<std::string, double>& ref_overlap,
                                             double fraction) {
  std::vector<const EnsembleInstance*> sorted;
  for (const auto& inst : all) sorted.push_back(&inst);
  std::sort(sorted.begin(), sorted.end(), [&](const EnsembleInstance* a,
                                              const EnsembleInstance* b) {
    const double oa = ref_overlap.at(a->id);
    const double ob = ref_overlap.at(b->id);
    if (oa != ob) return oa < ob;
    return a->id < b->id;
  });
  const std::size_t keep = static_cast<std::size_t>(fraction * sorted.size());
  std::vector<EnsembleInstance> out;
  for (std::size_t i = 0; i < keep; ++i) out.push_back(*sorted[i]);
  return out;
}

// Generates the full pool, hardness-filters it by L(10,1,1), and persists the
// hard subset so later runs (criterion 4, final ctest pass) skip the pool.
std::vector<EnsembleInstance> hard_pool(const fs::path& workdir, const std::string& tag,
                                        const EnsembleSpec& spec, const TrotterConfig& cfg,
                                        std::map<std::string, double>* ref_out) {
  const Schedule l10 = linear_anneal(10, 1.0, 1.0);
  const fs::path hard_dir = workdir / (tag + "_hard");
  const fs::path ref_cache = workdir / (tag + "_l10.csv");
  if (fs::exists(hard_dir / "manifest.json")) {
    std::cerr << tag << ": reusing cached hard subset\n";
    auto hard = read_ensemble(hard_dir);
    std::map<std::string, double> ref;
    for (const auto& inst : hard) ref[inst.id] = inst.reference_overlap.value();
    *ref_out = std::move(ref);
    return hard;
  }
  std::cerr << tag << ": generating " << spec.target_count << " instances\n";
  auto all = generate_ensemble(spec, 1);
  const auto ref = cached_overlaps(ref_cache, all, l10, cfg);
  auto hard = hard_subset_of(all, ref, spec.hardness_fraction);
  for (auto& inst : hard) inst.reference_overlap = ref.at(inst.id);
  write_ensemble(hard, spec, hard_dir);
  std::cerr << tag << ": hard subset of " << hard.size() << " instances cached\n";
  *ref_out = ref;
  return hard;
}

// --- toy tables ------------------------------------------------------------

// K = 2..10 rows; columns 154, L(10,1,1), L(80,1,1).
const double kTableMissing[9][3] = {
    {0.409, 0.379, 0.811},       {0.237, 0.208, 0.212},      {0.157, 0.104, 0.0182},
    {0.1, 0.0493, 0.000683},     {0.0582, 0.0233, 1.25e-5},  {0.0313, 0.011, 9.37e-6},
    {0.0169, 0.00524, 1.34e-5},  {0.0095, 0.00248, 4.0e-6},  {0.00543, 0.00118, 5.42e-7},
};

const double kTableReduced[9][3] = {
    {0.422, 0.386, 0.8},         {0.265, 0.228, 0.191},      {0.186, 0.122, 0.0124},
    {0.121, 0.0594, 0.000353},   {0.0704, 0.0283, 0.000214}, {0.0379, 0.0135, 0.000113},
    {0.0204, 0.00647, 3.98e-5},  {0.0115, 0.00309, 6.79e-6}, {0.0066, 0.00147, 2.15e-7},
};

void run_toy_table(int criterion, RingModelParams::Variant variant,
                   const double (&table)[9][3]) {
  const std::vector<Schedule> schedules = {builtin_learned(154), linear_anneal(10, 1.0, 1.0),
                                           linear_anneal(80, 1.0, 1.0)};
  // n=32 to compare against the exact-evolution table values; n=4 leaves the
  // 154 column at K=9 about 6% low, just outside the 5% band.
  const TrotterConfig cfg{32};
  int mismatches = 0;
  double worst_rel = 0.0;
  std::string worst;
  for (int k = 2; k <= 10; ++k) {
    RingModelParams params;
    params.ring_size = k;
    params.variant = variant;
    for (int col = 0; col < 3; ++col) {
      const double got = run_ring(schedules[col], params, cfg);
      const double expected = table[k - 2][col];
      const double rel = std::abs(got - expected) / std::max(std::abs(expected), 1e-300);
      if (rel > worst_rel && std::abs(got - expected) > 0.0005) {
        worst_rel = rel;
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s@K=%d got %.4g expected %.4g",
                      schedules[col].label.c_str(), k, got, expected);
        worst = buf;
      }
      if (!within_tolerance(got, expected)) ++mismatches;
    }
  }
  std::ostringstream detail;
  detail << "27 table entries, " << mismatches << " outside tolerance";
  if (!worst.empty()) detail << "; largest deviation " << worst;
  report(criterion, mismatches == 0, detail.str());
}

// --- criterion 6 helpers ----------------------------------------------------

Eigen::VectorXcd to_eigen(const StateVector& s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim()));
  for (std::uint64_t x = 0; x < s.dim(); ++x) v(static_cast<Eigen::Index>(x)) = s.amp[x];
  return v;
}

Eigen::MatrixXcd dense_hx(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    for (int i = 0; i < n; ++i) {
      h(x, x) += 0.5;
      h(x ^ (Eigen::Index{1} << i), x) -= 0.5;
    }
  }
  return h;
}

SatInstance random_2sat(int n, int m, std::mt19937_64& rng, bool distinct_vars) {
  SatInstance inst;
  inst.num_vars = n;
  std::uniform_int_distribution<int> var(0, n - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int c = 0; c < m; ++c) {
    int i = var(rng);
    int j = var(rng);
    if (distinct_vars)
      while (j == i) j = var(rng);
    Clause clause;
    clause.literals = {{i, coin(rng) != 0}, {j, coin(rng) != 0}};
    inst.clauses.push_back(clause);
  }
  return inst;
}

void criterion_6() {
  std::mt19937_64 rng(606);
  bool ok = true;
  std::ostringstream detail;

  // operator oracles at N <= 3
  double worst_op = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const Eigen::MatrixXcd hx = dense_hx(n);
    for (int trial = 0; trial < 4; ++trial) {
      const SatInstance inst = random_2sat(n, 3 * n, rng, false);
      const DiagonalEnergy diag = build_diagonal(inst);
      Eigen::MatrixXcd hz = Eigen::MatrixXcd::Zero(hx.rows(), hx.cols());
      for (Eigen::Index x = 0; x < hx.rows(); ++x)
        hz(x, x) = diag.at(static_cast<std::uint64_t>(x));

      StateVector psi = init_plus_state(n);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (auto& a : psi.amp) a = cplx(u(rng), u(rng));
      const double norm = std::sqrt(psi.norm_sq());
      for (auto& a : psi.amp) a /= norm;

      const double theta = u(rng) * 2.0;
      StateVector mixed = psi;
      apply_mixer(mixed, theta);
      worst_op = std::max(worst_op,
                          (to_eigen(mixed) - dense_evolve(hx, to_eigen(psi), theta))
                              .cwiseAbs()
                              .maxCoeff());
      StateVector phased = psi;
      apply_diagonal_phase(phased, diag, theta);
      worst_op = std::max(worst_op,
                          (to_eigen(phased) - dense_evolve(hz, to_eigen(psi), theta))
                              .cwiseAbs()
                              .maxCoeff());
    }
  }
  ok = ok && worst_op <= 1e-10;
  detail << "operator error " << worst_op;

  // second-order Trotter convergence
  const SatInstance inst = random_2sat(3, 8, rng, false);
  const DiagonalEnergy diag = build_diagonal(inst);
  const Eigen::MatrixXcd h = 0.8 * dense_hx(3);
  Eigen::MatrixXcd full = h;
  for (Eigen::Index x = 0; x < full.rows(); ++x)
    full(x, x) += 1.1 * diag.at(static_cast<std::uint64_t>(x));
  const Eigen::VectorXcd exact = dense_evolve(full, to_eigen(init_plus_state(3)), 1.0);
  auto error_at = [&](int n) {
    StateVector psi = init_plus_state(3);
    apply_step(psi, diag, 0.8, 1.1, TrotterConfig{n});
    return (to_eigen(psi) - exact).norm();
  };
  const double ratio_a = error_at(4) / error_at(8);
  const double ratio_b = error_at(8) / error_at(16);
  const bool second_order = std::abs(ratio_a - 4.0) <= 2.0 && std::abs(ratio_b - 4.0) <= 2.0;
  ok = ok && second_order;
  detail << "; halving ratios " << ratio_a << ", " << ratio_b;

  // norm preservation across 10^4 operations
  const SatInstance big = random_2sat(8, 24, rng, false);
  const DiagonalEnergy big_diag = build_diagonal(big);
  StateVector psi = init_plus_state(8);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int op = 0; op < 10000; ++op) {
    if (op % 2 == 0)
      apply_mixer(psi, u(rng));
    else
      apply_diagonal_phase(psi, big_diag, u(rng));
  }
  const double drift = std::abs(psi.norm_sq() - 1.0);
  ok = ok && drift <= 1e-10;
  detail << "; norm drift " << drift << " after 10^4 ops";

  report(6, ok, detail.str());
}

void criterion_7() {
  std::mt19937_64 rng(707);
  bool ok = true;
  std::ostringstream detail;

  // encoding equivalence on 100 random instances
  int mismatched_instances = 0;
  std::uniform_int_distribution<int> nvars(2, 12);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = nvars(rng);
    const SatInstance inst = random_2sat(n, 3 * n, rng, true);
    const DiagonalEnergy direct = build_diagonal(inst);
    const DiagonalEnergy via = ising_diagonal(sat2_to_ising(inst));
    for (std::uint64_t x = 0; x < direct.dim(); ++x)
      if (direct.at(x) != via.at(x)) {
        ++mismatched_instances;
        break;
      }
  }
  ok = ok && mismatched_instances == 0;
  detail << mismatched_instances << "/100 instances with encoding mismatch";

  // ring spectra for K <= 8
  bool ring_ok = true;
  for (int k = 2; k <= 8; ++k) {
    RingModelParams params;
    params.ring_size = k;
    params.variant = RingModelParams::Variant::missing_field;
    const DiagonalEnergy diag = ising_diagonal(ring_ising(params));
    const auto report_gs = ground_states(diag);
    if (report_gs.degenerate || report_gs.optima != std::vector<std::uint64_t>{0})
      ring_ok = false;
    int at_gap = 0;
    for (std::uint64_t x = 0; x < diag.dim(); ++x)
      if (std::abs(diag.at(x) - (report_gs.min_energy + 0.5)) < 1e-12) ++at_gap;
    if (at_gap != (1 << k)) ring_ok = false;

    // restoring the missing field merges the cluster into the ground space
    IsingModel restored = ring_ising(params);
    restored.fields.push_back({k - 1, 0.25});
    const auto merged = ground_states(ising_diagonal(restored));
    if (static_cast<int>(merged.optima.size()) != (1 << k) + 1) ring_ok = false;
  }
  ok = ok && ring_ok;
  detail << (ring_ok ? "; ring degeneracy structure confirmed for K=2..8"
                     : "; ring degeneracy structure WRONG");

  report(7, ok, detail.str());
}

void criterion_8() {
  bool ok = true;
  std::ostringstream detail;

  Schedule target;
  target.theta_x = {0.7, -0.3, 0.2};
  target.theta_z = {0.1, 0.4, -0.6};
  ObjectiveFn fn = [&target](const Schedule& s) {
    double d2 = 0.0;
    for (int j = 0; j < s.steps(); ++j) {
      d2 += (s.theta_x[j] - target.theta_x[j]) * (s.theta_x[j] - target.theta_x[j]);
      d2 += (s.theta_z[j] - target.theta_z[j]) * (s.theta_z[j] - target.theta_z[j]);
    }
    return 1.0 - d2;
  };
  Schedule start;
  start.theta_x.assign(3, 0.0);
  start.theta_z.assign(3, 0.0);

  OptimizerConfig cfg;
  cfg.seed = 808;
  const TrainingRun run = train(start, FreezeMask::none(3), fn, cfg);
  const bool converged = std::abs(run.final_objective - 1.0) <= 1e-4;
  ok = ok && converged;
  detail << "optimum gap " << std::abs(run.final_objective - 1.0);

  bool monotone = true;
  double best = -1e300;
  for (const auto& r : run.trajectory)
    if (r.accepted) {
      if (r.objective < best) monotone = false;
      best = r.objective;
    }
  ok = ok && monotone;
  detail << (monotone ? "; accepted trajectory monotone" : "; monotonicity VIOLATED");

  // frozen coordinates stay bit-identical
  Schedule frozen_start = start;
  frozen_start.theta_z = {0.11, 0.22, 0.33};
  const TrainingRun frozen = train(frozen_start, FreezeMask::frozen_z(3), fn, cfg);
  const bool frozen_ok = frozen.final_schedule.theta_z == frozen_start.theta_z;
  ok = ok && frozen_ok;
  detail << (frozen_ok ? "; frozen coordinates untouched" : "; freeze mask VIOLATED");

  // identical seeds reproduce identical trajectories
  const TrainingRun rerun = train(start, FreezeMask::none(3), fn, cfg);
  bool reproducible = run.trajectory.size() == rerun.trajectory.size();
  if (reproducible)
    for (std::size_t i = 0; i < run.trajectory.size(); ++i)
      if (run.trajectory[i].objective != rerun.trajectory[i].objective) reproducible = false;
  ok = ok && reproducible;
  detail << (reproducible ? "; seeded reruns identical" : "; reruns DIFFER");

  // exact evaluation budget per noisy phase
  int calls = 0;
  ObjectiveFn counting = [&calls, &fn](const Schedule& s) {
    ++calls;
    return fn(s);
  };
  std::mt19937_64 rng(3);
  noisy_search(start, FreezeMask::none(3), counting, cfg, rng, fn(start));
  const bool budget = calls == 150;
  ok = ok && budget;
  detail << "; noisy phase used " << calls << " evaluations";

  report(8, ok, detail.str());
}

// --- heavy statistical criteria ----------------------------------------------

struct HardSetData {
  std::vector<EnsembleInstance> hard;
  std::vector<EvalRecord> rec_l10, rec_l80, rec_154, rec_157;
};

// Builds (or resumes) the N=20 MAX-2-SAT ensemble shared by criteria 3 and 4.
HardSetData build_2sat_data(const fs::path& workdir) {
  fs::create_directories(workdir);
  EnsembleSpec spec;
  spec.kind = EnsembleSpec::Kind::max2sat;
  spec.num_vars = 20;
  spec.num_clauses = 60;
  spec.target_count = 3346;
  spec.seed = 1020;
  const TrotterConfig cfg{4};

  HardSetData data;
  std::map<std::string, double> ref;
  data.hard = hard_pool(workdir, "c3", spec, cfg, &ref);
  data.rec_l10 = to_records(ref, data.hard, "L(10,1,1)");
  data.rec_154 = to_records(
      cached_overlaps(workdir / "c3_154.csv", data.hard, builtin_learned(154), cfg), data.hard,
      "154");
  data.rec_l80 = to_records(
      cached_overlaps(workdir / "c3_l80.csv", data.hard, linear_anneal(80, 1.0, 1.0), cfg),
      data.hard, "L(80,1,1)");
  return data;
}

void criterion_3(const fs::path& workdir) {
  const HardSetData data = build_2sat_data(workdir);
  const double m10 = mean_overlap(data.rec_l10);
  const double m80 = mean_overlap(data.rec_l80);
  const double m154 = mean_overlap(data.rec_154);
  const double roa = ratio_of_averages(data.rec_154, data.rec_l10);
  const auto aor = average_of_ratios(data.rec_154, data.rec_l10);

  auto within_half = [](double got, double expected) {
    return std::abs(got - expected) <= 0.5 * expected;
  };
  bool ok = within_half(m10, 0.019) && within_half(m80, 0.288) && within_half(m154, 0.085);
  ok = ok && roa >= 3.0 && aor.value && *aor.value >= 3.5;

  std::ostringstream detail;
  detail.precision(4);
  detail << data.hard.size() << " hard instances; mean overlaps L(10,1,1)=" << m10
         << " (target 0.019), L(80,1,1)=" << m80 << " (0.288), 154=" << m154
         << " (0.085); ratio-of-averages " << roa << " (>=3.0), average-of-ratios "
         << (aor.value ? *aor.value : 0.0) << " (>=3.5, " << aor.excluded_instances.size()
         << " zero-baseline exclusions)";
  report(3, ok, detail.str());
}

void criterion_4(const fs::path& workdir) {
  const HardSetData data = build_2sat_data(workdir);
  const BinAssignment bins = bin_by_hardness(data.rec_l80, 8);
  const ComparisonReport r154 = compare(data.rec_154, data.rec_l10, &bins);
  const ComparisonReport r80 = compare(data.rec_l80, data.rec_l10, &bins);
  const double hardest_154 = r154.per_bin_ratio_of_averages.at(0);
  const double hardest_80 = r80.per_bin_ratio_of_averages.at(0);
  const bool ok = hardest_154 > hardest_80;
  std::ostringstream detail;
  detail.precision(4);
  detail << "hardest-bin ratio-of-averages vs L(10,1,1): 154=" << hardest_154
         << ", L(80,1,1)=" << hardest_80;
  report(4, ok, detail.str());
}

void criterion_5(const fs::path& workdir) {
  fs::create_directories(workdir);
  EnsembleSpec spec;
  spec.kind = EnsembleSpec::Kind::max3sat;
  spec.num_vars = 20;
  spec.num_clauses = 120;
  spec.target_count = 1200;
  spec.seed = 2025;
  const TrotterConfig cfg{4};

  std::map<std::string, double> ref;
  const auto hard = hard_pool(workdir, "c5", spec, cfg, &ref);
  const auto rec_l10 = to_records(ref, hard, "L(10,1,1)");
  const auto rec_154 = to_records(
      cached_overlaps(workdir / "c5_154.csv", hard, builtin_learned(154), cfg), hard, "154");
  const auto rec_157 = to_records(
      cached_overlaps(workdir / "c5_157.csv", hard, builtin_learned(157), cfg), hard, "157");
  const auto rec_l80 = to_records(
      cached_overlaps(workdir / "c5_l80.csv", hard, linear_anneal(80, 1.0, 1.0), cfg), hard,
      "L(80,1,1)");

  const BinAssignment bins = bin_by_hardness(rec_l80, 8);
  const double h154 = compare(rec_154, rec_l10, &bins).per_bin_ratio_of_averages.at(0);
  const double h157 = compare(rec_157, rec_l10, &bins).per_bin_ratio_of_averages.at(0);
  const double h80 = compare(rec_l80, rec_l10, &bins).per_bin_ratio_of_averages.at(0);
  const bool ok = h154 > h80 && h157 > h80;
  std::ostringstream detail;
  detail.precision(4);
  detail << hard.size() << " hard 3-SAT instances; hardest-bin ratio-of-averages vs L(10,1,1): "
         << "154=" << h154 << ", 157=" << h157 << ", L(80,1,1)=" << h80;
  report(5, ok, detail.str());
}

void criterion_9(const fs::path& workdir) {
  fs::create_directories(workdir);
  EnsembleSpec spec;
  spec.kind = EnsembleSpec::Kind::max2sat;
  spec.num_vars = 20;
  spec.num_clauses = 60;
  spec.target_count = 600;
  spec.seed = 909;
  const TrotterConfig cfg{4};

  std::map<std::string, double> ref;
  const auto hard = hard_pool(workdir, "c9", spec, cfg, &ref);

  const fs::path sched_path = workdir / "c9_schedule.json";
  Schedule learned;
  if (fs::exists(sched_path)) {
    learned = load_schedule(sched_path).schedule;
    std::cerr << "reusing trained schedule from " << sched_path << "\n";
  } else {
    auto [start, mask] = initial_schedule(11);
    std::mt19937_64 split_rng = make_stream(spec.seed, 0xA11CE);
    const TrainingSplit split = split_training(hard, 13, split_rng);
    Objective objective;
    objective.trotter = cfg;
    objective.num_threads = 1;
    for (std::size_t idx : split.training_indices) {
      Objective::Instance inst;
      inst.diag = build_diagonal(hard[idx].instance);
      inst.ground_state = hard[idx].ground_state;
      objective.training_set.push_back(std::move(inst));
    }
    OptimizerConfig opt;
    opt.seed = 909;
    opt.max_outer_rounds = 2;  // two noisy + Powell rounds, bounded runtime
    opt.powell_max_rounds = 2;
    std::cerr << "training from initial schedule 11 on k=13 instances\n";
    const TrainingRun run = train(start, mask, make_objective_fn(objective), opt);
    learned = run.final_schedule;
    learned.label = "trained-11";
    std::cerr << "objective " << run.initial_objective << " -> " << run.final_objective << "\n";
    save_schedule(learned, sched_path);
  }
  learned.label = "trained-11";

  const auto rec_l10 = to_records(ref, hard, "L(10,1,1)");
  const auto rec_learned = to_records(
      cached_overlaps(workdir / "c9_trained.csv", hard, learned, cfg), hard, learned.label);
  const double roa = ratio_of_averages(rec_learned, rec_l10);
  const bool ok = roa >= 2.0;
  std::ostringstream detail;
  detail.precision(4);
  detail << hard.size() << " hard instances; trained schedule ratio-of-averages vs L(10,1,1) = "
         << roa << " (>= 2.0 required)";
  report(9, ok, detail.str());
}

void criterion_10() {
  // The CFLLS comparison column cannot be reproduced: the 137 benchmark
  // instances and per-instance anneal times were never published.  What the
  // tool guarantees instead is that externally supplied instance files load
  // through the same DIMACS + sidecar path the generator uses.
  const fs::path dir = fs::temp_directory_path() / "qsched_import_check";
  fs::create_directories(dir);
  const fs::path cnf = dir / "external.cnf";
  {
    std::ofstream out(cnf);
    out << "c externally supplied instance\n";
    out << "p cnf 3 3\n";
    out << "1 2 0\n";
    out << "-1 3 0\n";
    out << "-2 -3 0\n";
  }
  bool ok = true;
  std::string note;
  try {
    const SatInstance inst = read_dimacs(cnf);
    ok = inst.num_vars == 3 && inst.clauses.size() == 3;
    const auto gs = ground_states(build_diagonal(inst));
    ok = ok && gs.min_energy == 0.0;

    InstanceMeta meta;
    meta.generator = "external";
    meta.ground_energy = gs.min_energy;
    meta.ground_state = gs.optima.front();
    meta.unique_ground_state = !gs.degenerate;
    write_meta(meta, cnf);
    ok = ok && read_meta(cnf).has_value();
    note = "import path verified; CFLLS reference overlaps declared non-reproducible "
           "(the original 137 instances and per-instance anneal times are unpublished)";
  } catch (const std::exception& e) {
    ok = false;
    note = std::string("import path failed: ") + e.what();
  }
  fs::remove_all(dir);
  report(10, ok, note);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <workdir> <criterion...>\n";
    return 2;
  }
  const fs::path workdir = argv[1];
  for (int a = 2; a < argc; ++a) {
    const int criterion = std::atoi(argv[a]);
    try {
      switch (criterion) {
        case 1: run_toy_table(1, RingModelParams::Variant::missing_field, kTableMissing); break;
        case 2: run_toy_table(2, RingModelParams::Variant::reduced_fields, kTableReduced); break;
        case 3: criterion_3(workdir); break;
        case 4: criterion_4(workdir); break;
        case 5: criterion_5(workdir); break;
        case 6: criterion_6(); break;
        case 7: criterion_7(); break;
        case 8: criterion_8(); break;
        case 9: criterion_9(workdir); break;
        case 10: criterion_10(); break;
        default:
          std::cerr << "unknown criterion " << criterion << "\n";
          return 2;
      }
    } catch (const std::exception& e) {
      report(criterion, false, std::string("exception: ") + e.what());
    }
  }
  return g_pass ? 0 : 1;
}
