#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qsched/core_sim.hpp"
#include "qsched/ensembles.hpp"
#include "qsched/schedules.hpp"

namespace qsched {

struct EvalRecord {
  std::string instance_id;
  std::string schedule_label;
  double squared_overlap = 0.0;
};

// One record per (schedule, instance), schedule-major order.
std::vector<EvalRecord> evaluate(const std::vector<Schedule>& schedules,
                                 const std::vector<EnsembleInstance>& instances,
                                 const TrotterConfig& cfg, int num_threads = 1);

std::vector<EvalRecord> records_for(const std::vector<EvalRecord>& records,
                                    const std::string& schedule_label);

double mean_overlap(const std::vector<EvalRecord>& records);

// (mean overlap of a) / (mean overlap of b); records must cover the same
// instance set.
double ratio_of_averages(const std::vector<EvalRecord>& a, const std::vector<EvalRecord>& b);

// Mean over instances of overlap_a/overlap_b.  Instances with a zero
// baseline overlap are excluded and reported rather than producing
// infinities; value is empty if every instance was excluded.
struct AverageOfRatios {
  std::optional<double> value;
  std::vector<std::string> excluded_instances;  // zero-baseline instance ids
};
AverageOfRatios average_of_ratios(const std::vector<EvalRecord>& a,
                                  const std::vector<EvalRecord>& b);

// Equal-count bins sorted ascending by the reference overlap (bin 0 =
// hardest); remainder instances go to the hardest-first bins.
struct BinAssignment {
  int num_bins = 0;
  std::vector<std::string> sorted_ids;  // ascending reference overlap
  std::vector<int> bin_of_sorted;       // bin index per sorted position
  std::vector<double> boundaries;       // largest reference overlap per bin
};
BinAssignment bin_by_hardness(const std::vector<EvalRecord>& reference, int num_bins = 8);

struct ComparisonReport {
  std::string schedule_label;
  std::string baseline_label;
  double mean_overlap_schedule = 0.0;
  double mean_overlap_baseline = 0.0;
  double ratio_of_averages = 0.0;
  AverageOfRatios average_of_ratios;
  std::vector<double> per_bin_ratio_of_averages;  // empty when no binning requested
};

ComparisonReport compare(const std::vector<EvalRecord>& schedule_records,
                         const std::vector<EvalRecord>& baseline_records,
                         const BinAssignment* bins = nullptr);

// --- CSV emission (stable column orders) ------------------------------------

void write_records_csv(const std::vector<EvalRecord>& records,
                       const std::filesystem::path& path);
std::vector<EvalRecord> read_records_csv(const std::filesystem::path& path);
void write_comparison_csv(const std::vector<ComparisonReport>& reports,
                          const std::filesystem::path& path);
void write_bins_csv(const BinAssignment& bins, const std::vector<ComparisonReport>& reports,
                    const std::filesystem::path& path);

}  // namespace qsched
