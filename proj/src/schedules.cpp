#include "qsched/schedules.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "qsched/errors.hpp"

namespace qsched {

bool FreezeMask::any() const {
  return std::any_of(freeze_x.begin(), freeze_x.end(), [](bool b) { return b; }) ||
         std::any_of(freeze_z.begin(), freeze_z.end(), [](bool b) { return b; });
}

Schedule linear_anneal(int p, double x, double z) {
  if (p < 1) throw ConfigError("linear_anneal: p must be >= 1");
  Schedule s;
  s.theta_x.resize(p);
  s.theta_z.resize(p);
  for (int j = 1; j <= p; ++j) {
    s.theta_z[j - 1] = z * j / (p + 1);
    s.theta_x[j - 1] = x * (p + 1 - j) / (p + 1);
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "L(%d,%g,%g)", p, x, z);
  s.label = buf;
  return s;
}

namespace {

constexpr int kCatalogSteps = 10;

std::vector<double> decode_digits(const std::string& digits) {
  // '1' -> 1.0, '0' -> 0.0, '5' -> 0.5; strings shorter than ten entries are
  // right-aligned (left-padded with zeros).
  std::vector<double> v(kCatalogSteps, 0.0);
  const int pad = kCatalogSteps - static_cast<int>(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i) {
    switch (digits[i]) {
      case '0': v[pad + i] = 0.0; break;
      case '1': v[pad + i] = 1.0; break;
      case '5': v[pad + i] = 0.5; break;
      default: throw ConfigError("bad catalog digit");
    }
  }
  return v;
}

std::vector<double> linear_grid() {
  std::vector<double> v(kCatalogSteps);
  for (int j = 0; j < kCatalogSteps; ++j) v[j] = 0.05 + 0.1 * j;
  return v;
}

struct CatalogRow {
  const char* x;
  const char* z;  // "L" = linear grid, "F" = linear grid with theta_z frozen
};

const std::map<int, CatalogRow> kCatalog = {
    {2, {"1111111111", "0000000000"}},
    {3, {"1111111110", "0000000001"}},
    {4, {"1111100000", "0000011111"}},
    {5, {"0000000000", "1111111111"}},
    {6, {"1111111111", "L"}},
    {7, {"1111100000", "L"}},
    {8, {"1111111110", "000000001"}},
    {9, {"1111111110", "L"}},
    {10, {"1111111110", "F"}},
    {11, {"1111111150", "0000000051"}},
    {12, {"1111111150", "L"}},
    {13, {"1111111150", "F"}},
};

}  // namespace

std::pair<Schedule, FreezeMask> initial_schedule(int key) {
  auto it = kCatalog.find(key);
  if (it == kCatalog.end())
    throw ConfigError("initial_schedule: key " + std::to_string(key) +
                      " not in catalog (supported keys: 2..13)");
  Schedule s;
  s.theta_x = decode_digits(it->second.x);
  s.label = "initial-" + std::to_string(key);
  FreezeMask mask = FreezeMask::none(kCatalogSteps);
  const std::string z = it->second.z;
  if (z == "L") {
    s.theta_z = linear_grid();
  } else if (z == "F") {
    s.theta_z = linear_grid();
    mask = FreezeMask::frozen_z(kCatalogSteps);
  } else {
    s.theta_z = decode_digits(z);
  }
  return {std::move(s), std::move(mask)};
}

Schedule average_schedules(const std::vector<Schedule>& schedules) {
  if (schedules.empty()) throw ConfigError("average_schedules: empty list");
  const int p = schedules.front().steps();
  Schedule avg;
  avg.theta_x.assign(p, 0.0);
  avg.theta_z.assign(p, 0.0);
  for (const Schedule& s : schedules) {
    if (s.steps() != p) throw ConfigError("average_schedules: mismatched p");
    for (int j = 0; j < p; ++j) {
      avg.theta_x[j] += s.theta_x[j];
      avg.theta_z[j] += s.theta_z[j];
    }
  }
  for (int j = 0; j < p; ++j) {
    avg.theta_x[j] /= schedules.size();
    avg.theta_z[j] /= schedules.size();
  }
  avg.label = "avg[" + std::to_string(schedules.size()) + "]";
  return avg;
}

namespace {

struct LearnedRow {
  double z[10];
  double x[10];
};

const std::map<int, LearnedRow> kLearned = {
    {8,
     {{-0.279307, 0.313947, 0.614148, -0.220295, 0.256869, 0.465194, -0.212299, 0.312254, 1.50651,
       2.011013},
      {0.985164, 1.711707, 1.308381, 1.272364, 0.71373, 2.073916, 1.340572, 1.037615, 1.217506,
       0.730447}}},
    {31,
     {{0.368606, 0.359748, 0.190667, 0.392364, 0.208514, 0.021365, 0.642995, 1.143198, 1.64574,
       1.814225},
      {1.168114, 1.375238, 1.350988, 1.356165, 1.337642, 1.091975, 1.426565, 1.162721, 0.885662,
       0.431466}}},
    {49,
     {{0.424251, 0.771576, 0.464935, 0.435078, 0.404496, 0.187802, 0.77197, 1.300528, 1.701031,
       1.745732},
      {1.510793, 1.665954, 1.205267, 1.062189, 1.59617, 1.481757, 1.6141, 1.285973, 0.903954,
       0.396039}}},
    {84,
     {{0.1629, -0.496857, 0.450711, -0.791892, 0.326329, -0.475372, 0.433593, 1.033271, 1.659841,
       2.031027},
      {1.945308, 1.142874, 0.875239, 0.914909, 1.373274, 1.191093, 2.016909, 1.142808, 1.104454,
       0.585}}},
    {113,
     {{0.37599, 0.680923, 0.997025, 0.715514, 0.271968, 0.519316, 1.068852, 1.443309, 1.433469,
       1.333607},
      {1.609044, 1.459435, 1.971842, 1.625206, 1.537716, 1.515011, 1.398038, 0.983823, 0.5701,
       0.273691}}},
    {122,
     {{0.489956, 0.510331, 0.740654, 0.538733, 0.245925, 0.08665, 0.761729, 1.188631, 1.418336,
       1.89151},
      {1.683547, 0.979162, 1.878078, 1.631202, 1.16941, 1.055429, 1.635904, 1.172053, 0.795996,
       0.519226}}},
    {154,
     {{0.748224, -0.080047, -0.117857, 0.316126, 0.096738, -0.307805, 1.210155, 1.183015, 1.557269,
       1.745549},
      {1.35801, 0.955197, 1.397257, 1.219015, 1.396977, 1.420552, 1.283791, 0.889047, 0.671747,
       0.339493}}},
    {157,
     {{0.677717, -0.099922, -0.055678, 0.294502, 0.107643, -0.276445, 1.070014, 1.057304, 1.479656,
       1.646192},
      {1.359167, 1.060199, 1.293059, 1.248988, 1.328482, 1.431533, 1.237331, 0.854213, 0.688784,
       0.382808}}},
};

}  // namespace

Schedule builtin_learned(int key) {
  auto it = kLearned.find(key);
  if (it == kLearned.end())
    throw ConfigError("builtin_learned: unknown key " + std::to_string(key));
  Schedule s;
  s.theta_z.assign(it->second.z, it->second.z + 10);
  s.theta_x.assign(it->second.x, it->second.x + 10);
  s.label = std::to_string(key);
  return s;
}

const std::vector<int>& builtin_learned_keys() {
  static const std::vector<int> keys = {8, 31, 49, 84, 113, 122, 154, 157};
  return keys;
}

// --- schedule files ---------------------------------------------------------

void save_schedule(const Schedule& s, const std::filesystem::path& path,
                   const FreezeMask* mask, const ScheduleProvenance* prov) {
  nlohmann::json j;
  j["version"] = 1;
  j["label"] = s.label;
  j["p"] = s.steps();
  j["theta_x"] = s.theta_x;
  j["theta_z"] = s.theta_z;
  if (mask) {
    j["freeze_x"] = mask->freeze_x;
    j["freeze_z"] = mask->freeze_z;
  }
  if (prov) {
    j["provenance"] = {{"initial", prov->initial},
                       {"training_set", prov->training_set},
                       {"seed", prov->seed},
                       {"final_objective", prov->final_objective}};
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

LoadedSchedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad schedule file " + path.string() + ": " + e.what());
  }
  LoadedSchedule loaded;
  try {
    loaded.schedule.label = j.value("label", "");
    loaded.schedule.theta_x = j.at("theta_x").get<std::vector<double>>();
    loaded.schedule.theta_z = j.at("theta_z").get<std::vector<double>>();
    const int p = j.at("p").get<int>();
    if (loaded.schedule.theta_x.size() != loaded.schedule.theta_z.size() ||
        loaded.schedule.steps() != p || p < 1)
      throw IoError("schedule file " + path.string() + ": array lengths do not match p");
    if (j.contains("freeze_x") || j.contains("freeze_z")) {
      FreezeMask mask = FreezeMask::none(p);
      if (j.contains("freeze_x")) mask.freeze_x = j["freeze_x"].get<std::vector<bool>>();
      if (j.contains("freeze_z")) mask.freeze_z = j["freeze_z"].get<std::vector<bool>>();
      if (mask.freeze_x.size() != static_cast<std::size_t>(p) ||
          mask.freeze_z.size() != static_cast<std::size_t>(p))
        throw IoError("schedule file " + path.string() + ": freeze mask length mismatch");
      loaded.mask = std::move(mask);
    }
    if (j.contains("provenance")) {
      const auto& pj = j["provenance"];
      ScheduleProvenance prov;
      prov.initial = pj.value("initial", "");
      prov.training_set = pj.value("training_set", "");
      prov.seed = pj.value("seed", std::uint64_t{0});
      prov.final_objective = pj.value("final_objective", 0.0);
      loaded.provenance = std::move(prov);
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad schedule file " + path.string() + ": " + e.what());
  }
  return loaded;
}

Schedule parse_schedule_ref(const std::string& ref) {
  if (ref.empty()) throw ConfigError("empty schedule reference");
  if (ref.front() == 'L' && ref.find('(') != std::string::npos) {
    int p = 0;
    double x = 0, z = 0;
    char tail = 0;
    if (std::sscanf(ref.c_str(), "L(%d,%lf,%lf%c", &p, &x, &z, &tail) == 4 && tail == ')')
      return linear_anneal(p, x, z);
    throw ConfigError("bad L(p,x,z) literal: " + ref);
  }
  if (std::all_of(ref.begin(), ref.end(), [](char c) { return std::isdigit(c); }))
    return builtin_learned(std::stoi(ref));
  return load_schedule(ref).schedule;
}

}  // namespace qsched
