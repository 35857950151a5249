#include "qsched/ensembles.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "qsched/core_sim.hpp"
#include "qsched/errors.hpp"
#include "qsched/rng.hpp"

namespace qsched {

EnsembleSpec::Kind EnsembleSpec::parse_kind(const std::string& name) {
  if (name == "max2sat") return Kind::max2sat;
  if (name == "max3sat") return Kind::max3sat;
  throw ConfigError("unknown ensemble kind: " + name);
}

std::string EnsembleSpec::kind_name() const {
  return kind == Kind::max2sat ? "max2sat" : "max3sat";
}

namespace {

bool has_unique_ground_state(const SatInstance& instance, double* min_energy,
                             std::uint64_t* ground_state) {
  const DiagonalEnergy diag = build_diagonal(instance);
  double min_e = diag.dense[0];
  for (double e : diag.dense) min_e = std::min(min_e, e);
  std::uint64_t argmin = 0;
  int count = 0;
  for (std::uint64_t x = 0; x < diag.dim(); ++x) {
    if (diag.dense[x] == min_e) {
      if (++count > 1) return false;
      argmin = x;
    }
  }
  *min_energy = min_e;
  *ground_state = argmin;
  return true;
}

SatInstance draw_max2sat(int num_vars, int num_clauses, std::mt19937_64& rng) {
  SatInstance instance;
  instance.num_vars = num_vars;
  std::uniform_int_distribution<int> var(0, num_vars - 1);
  std::uniform_int_distribution<int> var_m1(0, num_vars - 2);
  std::uniform_int_distribution<int> coin(0, 1);
  std::unordered_set<std::uint64_t> seen;
  while (static_cast<int>(instance.clauses.size()) < num_clauses) {
    const int i = var(rng);
    int j = var_m1(rng);
    if (j >= i) ++j;
    Clause clause;
    clause.literals = {{i, coin(rng) != 0}, {j, coin(rng) != 0}};
    if (seen.insert(clause_identity(clause)).second)
      instance.clauses.push_back(std::move(clause));
  }
  return instance;
}

SatInstance draw_max3sat(int num_vars, int num_clauses, std::mt19937_64& rng) {
  SatInstance instance;
  instance.num_vars = num_vars;
  std::uniform_int_distribution<int> var(0, num_vars - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int c = 0; c < num_clauses; ++c) {
    Clause clause;
    for (int t = 0; t < 3; ++t) clause.literals.push_back({var(rng), coin(rng) != 0});
    instance.clauses.push_back(std::move(clause));
  }
  return instance;
}

}  // namespace

SatInstance gen_max2sat(int num_vars, int num_clauses, std::mt19937_64& rng) {
  if (num_vars < 2) throw ConfigError("gen_max2sat: need at least 2 variables");
  const long long distinct = 4ll * num_vars * (num_vars - 1) / 2;
  if (num_clauses > distinct)
    throw ConfigError("gen_max2sat: more clauses requested than distinct clauses exist");
  for (;;) {
    SatInstance instance = draw_max2sat(num_vars, num_clauses, rng);
    double min_e;
    std::uint64_t gs;
    if (has_unique_ground_state(instance, &min_e, &gs)) return instance;
  }
}

SatInstance gen_max3sat(int num_vars, int num_clauses, std::mt19937_64& rng) {
  if (num_vars < 1) throw ConfigError("gen_max3sat: need at least 1 variable");
  for (;;) {
    SatInstance instance = draw_max3sat(num_vars, num_clauses, rng);
    double min_e;
    std::uint64_t gs;
    if (has_unique_ground_state(instance, &min_e, &gs)) return instance;
  }
}

namespace {

std::string instance_id(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "inst_%05d", index);
  return buf;
}

template <typename Work>
void parallel_for(std::size_t count, int num_threads, Work&& work) {
  const int threads = std::min<int>(std::max(num_threads, 1), static_cast<int>(count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<EnsembleInstance> generate_ensemble(const EnsembleSpec& spec, int num_threads) {
  std::vector<EnsembleInstance> out(spec.target_count);
  parallel_for(out.size(), num_threads, [&](std::size_t k) {
    std::mt19937_64 rng = make_stream(spec.seed, k);
    EnsembleInstance& inst = out[k];
    inst.id = instance_id(static_cast<int>(k));
    inst.instance = spec.kind == EnsembleSpec::Kind::max2sat
                        ? gen_max2sat(spec.num_vars, spec.num_clauses, rng)
                        : gen_max3sat(spec.num_vars, spec.num_clauses, rng);
    double min_e;
    std::uint64_t gs;
    has_unique_ground_state(inst.instance, &min_e, &gs);
    inst.ground_energy = min_e;
    inst.ground_state = gs;
  });
  return out;
}

void compute_reference_overlaps(std::vector<EnsembleInstance>& instances,
                                const Schedule& reference, const TrotterConfig& cfg,
                                int num_threads) {
  parallel_for(instances.size(), num_threads, [&](std::size_t k) {
    EnsembleInstance& inst = instances[k];
    if (inst.reference_overlap) return;
    const DiagonalEnergy diag = build_diagonal(inst.instance);
    const StateVector psi = run_schedule(diag, reference, cfg);
    inst.reference_overlap = squared_overlap(psi, inst.ground_state);
  });
}

std::vector<EnsembleInstance> hardness_filter(std::vector<EnsembleInstance> instances,
                                              const Schedule& reference, double fraction,
                                              const TrotterConfig& cfg, int num_threads) {
  if (instances.empty()) throw ConfigError("hardness_filter: empty instance list");
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ConfigError("hardness_filter: fraction must be in (0, 1]");
  compute_reference_overlaps(instances, reference, cfg, num_threads);
  std::sort(instances.begin(), instances.end(),
            [](const EnsembleInstance& a, const EnsembleInstance& b) {
              if (*a.reference_overlap != *b.reference_overlap)
                return *a.reference_overlap < *b.reference_overlap;
              return a.id < b.id;
            });
  const std::size_t keep =
      static_cast<std::size_t>(fraction * static_cast<double>(instances.size()));
  instances.resize(keep);
  return instances;
}

TrainingSplit split_training(const std::vector<EnsembleInstance>& hard_set, int k,
                             std::mt19937_64& rng) {
  if (k < 1 || static_cast<std::size_t>(k) > hard_set.size())
    throw ConfigError("split_training: k out of range");
  std::vector<std::size_t> indices(hard_set.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  // Fisher-Yates prefix of length k
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, indices.size() - 1);
    std::swap(indices[i], indices[pick(rng)]);
  }
  TrainingSplit split;
  split.training_indices.assign(indices.begin(), indices.begin() + k);
  std::sort(split.training_indices.begin(), split.training_indices.end());
  return split;
}

// --- ensemble directories ---------------------------------------------------

void write_ensemble(const std::vector<EnsembleInstance>& instances, const EnsembleSpec& spec,
                    const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  nlohmann::json params = {{"kind", spec.kind_name()},
                           {"num_vars", spec.num_vars},
                           {"num_clauses", spec.num_clauses}};
  for (const EnsembleInstance& inst : instances) {
    const auto cnf = dir / (inst.id + ".cnf");
    write_dimacs(inst.instance, cnf);
    InstanceMeta meta;
    meta.generator = spec.kind_name();
    meta.seed = spec.seed;
    meta.params = params.dump();
    meta.ground_energy = inst.ground_energy;
    meta.ground_state = inst.ground_state;
    meta.unique_ground_state = true;
    meta.reference_overlap = inst.reference_overlap;
    write_meta(meta, cnf);
  }
  nlohmann::json manifest = {{"kind", spec.kind_name()},
                             {"num_vars", spec.num_vars},
                             {"num_clauses", spec.num_clauses},
                             {"count", instances.size()},
                             {"seed", spec.seed},
                             {"hardness_fraction", spec.hardness_fraction},
                             {"reference_schedule", spec.reference_schedule}};
  std::ofstream out(dir / "manifest.json");
  if (!out) throw IoError("cannot write ensemble manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

std::vector<EnsembleInstance> read_ensemble(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw IoError("not an ensemble directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".cnf") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no instances in " + dir.string());
  std::vector<EnsembleInstance> out;
  for (const auto& path : files) {
    EnsembleInstance inst;
    inst.id = path.stem().string();
    inst.instance = read_dimacs(path);
    auto meta = read_meta(path);
    if (!meta) throw IoError("missing sidecar for " + path.string());
    inst.ground_energy = meta->ground_energy;
    inst.ground_state = meta->ground_state;
    inst.reference_overlap = meta->reference_overlap;
    out.push_back(std::move(inst));
  }
  return out;
}

void write_hard_manifest(const std::vector<EnsembleInstance>& hard,
                         const std::string& reference_label, double fraction,
                         const std::filesystem::path& path) {
  nlohmann::json j;
  j["reference_schedule"] = reference_label;
  j["fraction"] = fraction;
  j["count"] = hard.size();
  j["cutoff_overlap"] = hard.empty() ? 0.0 : *hard.back().reference_overlap;
  std::vector<std::string> ids;
  for (const auto& inst : hard) ids.push_back(inst.id);
  j["retained_ids"] = ids;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

std::vector<std::string> read_hard_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    return j.at("retained_ids").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad hard-subset manifest " + path.string() + ": " + e.what());
  }
}

}  // namespace qsched
