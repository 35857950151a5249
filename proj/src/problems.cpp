#include "qsched/problems.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qsched/errors.hpp"

namespace qsched {

namespace {

// (mask, pattern) such that the clause is violated iff (x & mask) == pattern.
// Returns nullopt for clauses that can never be violated (tautologies).
std::optional<DiagonalEnergy::ClauseTerm> violation_term(const Clause& clause) {
  DiagonalEnergy::ClauseTerm t;
  for (const Literal& lit : clause.literals) {
    const std::uint64_t bit = std::uint64_t{1} << lit.variable;
    // literal is false iff bit == (negated ? 0 : 1)
    const bool required = !lit.negated;
    if (t.mask & bit) {
      const bool prev = (t.pattern & bit) != 0;
      if (prev != required) return std::nullopt;  // x v !x: always true
      continue;
    }
    t.mask |= bit;
    if (required) t.pattern |= bit;
  }
  return t;
}

void check_capacity(int num_vars, const char* what) {
  if (num_vars < 1 || num_vars > kMaxQubits)
    throw CapacityError(std::string(what) + ": variable count " + std::to_string(num_vars) +
                        " outside supported range [1, " + std::to_string(kMaxQubits) + "]");
}

}  // namespace

double energy_of_assignment(const SatInstance& instance, std::uint64_t assignment) {
  double e = 0.0;
  for (std::size_t c = 0; c < instance.clauses.size(); ++c) {
    auto term = violation_term(instance.clauses[c]);
    if (term && (assignment & term->mask) == term->pattern) e += instance.weight(c);
  }
  return e;
}

DiagonalEnergy build_diagonal(const SatInstance& instance, bool materialize) {
  check_capacity(instance.num_vars, "build_diagonal");
  DiagonalEnergy diag;
  diag.num_qubits = instance.num_vars;
  for (std::size_t c = 0; c < instance.clauses.size(); ++c) {
    auto term = violation_term(instance.clauses[c]);
    if (term) {
      term->weight = instance.weight(c);
      diag.terms.push_back(*term);
    }
  }
  if (!materialize) return diag;

  diag.dense.assign(diag.dim(), 0.0);
  const std::uint64_t full = diag.dim() - 1;
  for (const auto& t : diag.terms) {
    // walk the subcube of assignments matching the violating pattern
    const std::uint64_t free = full & ~t.mask;
    std::uint64_t s = 0;
    do {
      diag.dense[t.pattern | s] += t.weight;
      s = (s - free) & free;
    } while (s != 0);
  }
  diag.compress();
  return diag;
}

DiagonalEnergy ising_diagonal(const IsingModel& model) {
  check_capacity(model.num_spins, "ising_diagonal");
  for (const auto& c : model.couplings)
    if (c.i == c.j) throw ConfigError("ising_diagonal: coupling with i == j");
  DiagonalEnergy diag;
  diag.num_qubits = model.num_spins;
  diag.dense.assign(diag.dim(), model.constant);
  for (const auto& c : model.couplings) {
    const std::uint64_t bi = std::uint64_t{1} << c.i;
    const std::uint64_t bj = std::uint64_t{1} << c.j;
    for (std::uint64_t x = 0; x < diag.dim(); ++x) {
      const bool anti = ((x & bi) != 0) != ((x & bj) != 0);
      diag.dense[x] += anti ? -c.strength : c.strength;
    }
  }
  for (const auto& f : model.fields) {
    const std::uint64_t bi = std::uint64_t{1} << f.i;
    for (std::uint64_t x = 0; x < diag.dim(); ++x)
      diag.dense[x] += (x & bi) ? -f.strength : f.strength;
  }
  diag.compress();
  return diag;
}

IsingModel sat2_to_ising(const SatInstance& instance) {
  IsingModel model;
  model.num_spins = instance.num_vars;
  std::vector<double> h(instance.num_vars, 0.0);
  std::map<std::pair<int, int>, double> j;
  for (std::size_t c = 0; c < instance.clauses.size(); ++c) {
    const Clause& clause = instance.clauses[c];
    if (clause.literals.size() != 2)
      throw ConfigError("sat2_to_ising: clause with k != 2");
    const Literal& a = clause.literals[0];
    const Literal& b = clause.literals[1];
    if (a.variable == b.variable)
      throw ConfigError("sat2_to_ising: clause with repeated variable");
    const double w = instance.weight(c);
    // clause term = (w/4)(1 + sa*sz_i)(1 + sb*sz_j), sa = +1 for a negated
    // literal, -1 otherwise; equals w exactly on the violating assignment.
    const double sa = a.negated ? 1.0 : -1.0;
    const double sb = b.negated ? 1.0 : -1.0;
    model.constant += w / 4.0;
    h[a.variable] += w * sa / 4.0;
    h[b.variable] += w * sb / 4.0;
    const auto key = std::minmax(a.variable, b.variable);
    j[{key.first, key.second}] += w * sa * sb / 4.0;
  }
  for (int i = 0; i < instance.num_vars; ++i)
    if (h[i] != 0.0) model.fields.push_back({i, h[i]});
  for (const auto& [key, strength] : j)
    if (strength != 0.0) model.couplings.push_back({key.first, key.second, strength});
  return model;
}

GroundStateReport ground_states(const DiagonalEnergy& diag, double tolerance) {
  GroundStateReport report;
  const std::uint64_t n = diag.dim();
  double min_e = diag.at(0);
  if (!diag.dense.empty()) {
    for (std::uint64_t x = 1; x < n; ++x) min_e = std::min(min_e, diag.dense[x]);
  } else {
    for (std::uint64_t x = 1; x < n; ++x) min_e = std::min(min_e, diag.at(x));
  }
  report.min_energy = min_e;
  for (std::uint64_t x = 0; x < n; ++x)
    if (diag.at(x) <= min_e + tolerance) report.optima.push_back(x);
  report.degenerate = report.optima.size() > 1;
  return report;
}

std::uint64_t clause_identity(const Clause& clause) {
  std::vector<std::uint32_t> keys;
  for (const Literal& lit : clause.literals)
    keys.push_back(static_cast<std::uint32_t>(lit.variable) << 1 | (lit.negated ? 1u : 0u));
  std::sort(keys.begin(), keys.end());
  std::uint64_t id = 0;
  for (std::uint32_t k : keys) id = id * 0x1fffffull + k + 1;
  return id;
}

// --- instance files -------------------------------------------------------

void write_dimacs(const SatInstance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  const bool weighted = !instance.weights.empty();
  out << "p " << (weighted ? "wcnf" : "cnf") << ' ' << instance.num_vars << ' '
      << instance.clauses.size() << '\n';
  out.precision(17);
  for (std::size_t c = 0; c < instance.clauses.size(); ++c) {
    if (weighted) out << instance.weights[c] << ' ';
    for (const Literal& lit : instance.clauses[c].literals)
      out << (lit.negated ? -(lit.variable + 1) : (lit.variable + 1)) << ' ';
    out << "0\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

SatInstance read_dimacs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  SatInstance instance;
  bool weighted = false;
  std::size_t expected = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      ls >> p >> fmt >> instance.num_vars >> expected;
      if (!ls || (fmt != "cnf" && fmt != "wcnf"))
        throw IoError("bad DIMACS header in " + path.string());
      weighted = (fmt == "wcnf");
      continue;
    }
    Clause clause;
    if (weighted) {
      double w;
      if (!(ls >> w)) throw IoError("bad weighted clause line in " + path.string());
      instance.weights.push_back(w);
    }
    long long v;
    while (ls >> v && v != 0) {
      if (v > instance.num_vars || -v > instance.num_vars)
        throw IoError("variable out of range in " + path.string());
      clause.literals.push_back({static_cast<int>(std::abs(v)) - 1, v < 0});
    }
    if (clause.literals.size() != 2 && clause.literals.size() != 3)
      throw IoError("clause with unsupported width in " + path.string());
    instance.clauses.push_back(std::move(clause));
  }
  if (instance.clauses.size() != expected)
    throw IoError("clause count mismatch in " + path.string());
  return instance;
}

namespace {
std::filesystem::path meta_path(const std::filesystem::path& cnf_path) {
  std::filesystem::path p = cnf_path;
  p.replace_extension(".meta.json");
  return p;
}
}  // namespace

void write_meta(const InstanceMeta& meta, const std::filesystem::path& cnf_path) {
  nlohmann::json j;
  j["generator"] = meta.generator;
  j["seed"] = meta.seed;
  if (!meta.params.empty()) j["params"] = nlohmann::json::parse(meta.params);
  j["ground_energy"] = meta.ground_energy;
  j["ground_state"] = meta.ground_state;
  j["unique_ground_state"] = meta.unique_ground_state;
  if (meta.reference_overlap) j["reference_overlap"] = *meta.reference_overlap;
  std::ofstream out(meta_path(cnf_path));
  if (!out) throw IoError("cannot open for writing: " + meta_path(cnf_path).string());
  out << j.dump(2) << '\n';
}

std::optional<InstanceMeta> read_meta(const std::filesystem::path& cnf_path) {
  std::ifstream in(meta_path(cnf_path));
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad sidecar " + meta_path(cnf_path).string() + ": " + e.what());
  }
  InstanceMeta meta;
  meta.generator = j.value("generator", "");
  meta.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("params")) meta.params = j["params"].dump();
  meta.ground_energy = j.value("ground_energy", 0.0);
  meta.ground_state = j.value("ground_state", std::uint64_t{0});
  meta.unique_ground_state = j.value("unique_ground_state", false);
  if (j.contains("reference_overlap"))
    meta.reference_overlap = j["reference_overlap"].get<double>();
  return meta;
}

}  // namespace qsched
