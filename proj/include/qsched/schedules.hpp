#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qsched {

// A sequence of (theta_x_j, theta_z_j) pairs, j = 1..p.  Angles are
// unconstrained reals; labels are documentation only.
struct Schedule {
  std::vector<double> theta_x;
  std::vector<double> theta_z;
  std::string label;

  int steps() const { return static_cast<int>(theta_x.size()); }
};

// Per-coordinate training freeze flags; frozen coordinates never move.
struct FreezeMask {
  std::vector<bool> freeze_x;
  std::vector<bool> freeze_z;

  static FreezeMask none(int p) { return {std::vector<bool>(p, false), std::vector<bool>(p, false)}; }
  static FreezeMask frozen_z(int p) { return {std::vector<bool>(p, false), std::vector<bool>(p, true)}; }
  bool any() const;
};

// Optional training provenance carried in schedule files.
struct ScheduleProvenance {
  std::string initial;       // initial schedule reference
  std::string training_set;  // id of the training set
  std::uint64_t seed = 0;
  double final_objective = 0.0;
};

// Discrete linear anneal: theta_z_j = z*j/(p+1), theta_x_j = x*(p+1-j)/(p+1).
Schedule linear_anneal(int p, double x, double z);

// Catalog of ten-step initial schedules, keys 2..13 (key 14 is an average of
// unpublished trained schedules and is not constructible here).
std::pair<Schedule, FreezeMask> initial_schedule(int key);

// Elementwise mean over schedules sharing p.
Schedule average_schedules(const std::vector<Schedule>& schedules);

// Trained ten-step schedules shipped with the tool, keys
// {8, 31, 49, 84, 113, 122, 154, 157}.
Schedule builtin_learned(int key);
const std::vector<int>& builtin_learned_keys();

// Schedule file I/O (JSON; lossless round trip).
void save_schedule(const Schedule& s, const std::filesystem::path& path,
                   const FreezeMask* mask = nullptr,
                   const ScheduleProvenance* prov = nullptr);
struct LoadedSchedule {
  Schedule schedule;
  std::optional<FreezeMask> mask;
  std::optional<ScheduleProvenance> provenance;
};
LoadedSchedule load_schedule(const std::filesystem::path& path);

// Parses a schedule reference: builtin key ("154"), L-family literal
// ("L(10,1,1)"), or a file path.
Schedule parse_schedule_ref(const std::string& ref);

}  // namespace qsched
