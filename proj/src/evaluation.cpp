#include "qsched/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "qsched/errors.hpp"

namespace qsched {

std::vector<EvalRecord> evaluate(const std::vector<Schedule>& schedules,
                                 const std::vector<EnsembleInstance>& instances,
                                 const TrotterConfig& cfg, int num_threads) {
  std::vector<EvalRecord> records(schedules.size() * instances.size());
  if (records.empty()) return records;
  const std::size_t per_schedule = instances.size();
  std::atomic<std::size_t> next{0};
  auto work = [&](std::size_t k) {
    const std::size_t s = k / per_schedule;
    const std::size_t i = k % per_schedule;
    const DiagonalEnergy diag = build_diagonal(instances[i].instance);
    const StateVector psi = run_schedule(diag, schedules[s], cfg);
    records[k] = {instances[i].id, schedules[s].label,
                  squared_overlap(psi, instances[i].ground_state)};
  };
  const int threads =
      std::min<int>(std::max(num_threads, 1), static_cast<int>(records.size()));
  if (threads <= 1) {
    for (std::size_t k = 0; k < records.size(); ++k) work(k);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t k = next.fetch_add(1); k < records.size(); k = next.fetch_add(1))
          work(k);
      });
    for (auto& th : pool) th.join();
  }
  return records;
}

std::vector<EvalRecord> records_for(const std::vector<EvalRecord>& records,
                                    const std::string& schedule_label) {
  std::vector<EvalRecord> out;
  for (const EvalRecord& r : records)
    if (r.schedule_label == schedule_label) out.push_back(r);
  return out;
}

double mean_overlap(const std::vector<EvalRecord>& records) {
  if (records.empty()) throw ConfigError("mean_overlap: no records");
  double sum = 0.0;
  for (const EvalRecord& r : records) sum += r.squared_overlap;
  return sum / static_cast<double>(records.size());
}

namespace {

// Pairs a and b records by instance id; throws if the instance sets differ.
std::vector<std::pair<const EvalRecord*, const EvalRecord*>> paired(
    const std::vector<EvalRecord>& a, const std::vector<EvalRecord>& b) {
  if (a.size() != b.size() || a.empty())
    throw ConfigError("metric: record sets empty or of different size");
  std::map<std::string, const EvalRecord*> by_id;
  for (const EvalRecord& r : b) by_id[r.instance_id] = &r;
  std::vector<std::pair<const EvalRecord*, const EvalRecord*>> out;
  for (const EvalRecord& r : a) {
    auto it = by_id.find(r.instance_id);
    if (it == by_id.end())
      throw ConfigError("metric: instance " + r.instance_id + " missing from baseline");
    out.emplace_back(&r, it->second);
  }
  return out;
}

}  // namespace

double ratio_of_averages(const std::vector<EvalRecord>& a, const std::vector<EvalRecord>& b) {
  paired(a, b);  // validate matching instance sets
  const double denom = mean_overlap(b);
  if (denom == 0.0) throw ConfigError("ratio_of_averages: zero baseline mean");
  return mean_overlap(a) / denom;
}

AverageOfRatios average_of_ratios(const std::vector<EvalRecord>& a,
                                  const std::vector<EvalRecord>& b) {
  AverageOfRatios result;
  double sum = 0.0;
  std::size_t used = 0;
  for (const auto& [ra, rb] : paired(a, b)) {
    if (rb->squared_overlap == 0.0) {
      result.excluded_instances.push_back(rb->instance_id);
      continue;
    }
    sum += ra->squared_overlap / rb->squared_overlap;
    ++used;
  }
  if (used > 0) result.value = sum / static_cast<double>(used);
  return result;
}

BinAssignment bin_by_hardness(const std::vector<EvalRecord>& reference, int num_bins) {
  if (reference.empty()) throw ConfigError("bin_by_hardness: no records");
  if (num_bins < 1 || static_cast<std::size_t>(num_bins) > reference.size())
    throw ConfigError("bin_by_hardness: bad bin count");
  std::vector<const EvalRecord*> sorted;
  for (const EvalRecord& r : reference) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const EvalRecord* x, const EvalRecord* y) {
    if (x->squared_overlap != y->squared_overlap)
      return x->squared_overlap < y->squared_overlap;
    return x->instance_id < y->instance_id;
  });
  BinAssignment bins;
  bins.num_bins = num_bins;
  const std::size_t base = sorted.size() / num_bins;
  const std::size_t remainder = sorted.size() % num_bins;
  std::size_t pos = 0;
  for (int b = 0; b < num_bins; ++b) {
    const std::size_t size = base + (static_cast<std::size_t>(b) < remainder ? 1 : 0);
    for (std::size_t k = 0; k < size; ++k, ++pos) {
      bins.sorted_ids.push_back(sorted[pos]->instance_id);
      bins.bin_of_sorted.push_back(b);
    }
    bins.boundaries.push_back(sorted[pos - 1]->squared_overlap);
  }
  return bins;
}

ComparisonReport compare(const std::vector<EvalRecord>& schedule_records,
                         const std::vector<EvalRecord>& baseline_records,
                         const BinAssignment* bins) {
  ComparisonReport report;
  report.schedule_label = schedule_records.front().schedule_label;
  report.baseline_label = baseline_records.front().schedule_label;
  report.mean_overlap_schedule = mean_overlap(schedule_records);
  report.mean_overlap_baseline = mean_overlap(baseline_records);
  report.ratio_of_averages = ratio_of_averages(schedule_records, baseline_records);
  report.average_of_ratios = average_of_ratios(schedule_records, baseline_records);
  if (bins) {
    std::map<std::string, int> bin_of;
    for (std::size_t i = 0; i < bins->sorted_ids.size(); ++i)
      bin_of[bins->sorted_ids[i]] = bins->bin_of_sorted[i];
    std::vector<std::vector<EvalRecord>> sched_bins(bins->num_bins), base_bins(bins->num_bins);
    for (const EvalRecord& r : schedule_records) sched_bins.at(bin_of.at(r.instance_id)).push_back(r);
    for (const EvalRecord& r : baseline_records) base_bins.at(bin_of.at(r.instance_id)).push_back(r);
    for (int b = 0; b < bins->num_bins; ++b)
      report.per_bin_ratio_of_averages.push_back(
          ratio_of_averages(sched_bins[b], base_bins[b]));
  }
  return report;
}

// --- CSV emission -----------------------------------------------------------

void write_records_csv(const std::vector<EvalRecord>& records,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.precision(17);
  out << "instance_id,schedule,overlap\n";
  for (const EvalRecord& r : records)
    out << r.instance_id << ',' << r.schedule_label << ',' << r.squared_overlap << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<EvalRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "instance_id,schedule,overlap")
    throw IoError("bad records CSV header in " + path.string());
  std::vector<EvalRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.rfind(',');
    if (c1 == std::string::npos || c2 == c1)
      throw IoError("bad records CSV line in " + path.string());
    EvalRecord r;
    r.instance_id = line.substr(0, c1);
    r.schedule_label = line.substr(c1 + 1, c2 - c1 - 1);
    r.squared_overlap = std::stod(line.substr(c2 + 1));
    records.push_back(std::move(r));
  }
  return records;
}

void write_comparison_csv(const std::vector<ComparisonReport>& reports,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.precision(17);
  out << "schedule,baseline,mean_overlap,baseline_mean_overlap,ratio_of_averages,"
         "average_of_ratios,excluded_instances\n";
  for (const ComparisonReport& r : reports) {
    out << r.schedule_label << ',' << r.baseline_label << ',' << r.mean_overlap_schedule << ','
        << r.mean_overlap_baseline << ',' << r.ratio_of_averages << ',';
    if (r.average_of_ratios.value)
      out << *r.average_of_ratios.value;
    else
      out << "undefined";
    out << ',' << r.average_of_ratios.excluded_instances.size() << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_bins_csv(const BinAssignment& bins, const std::vector<ComparisonReport>& reports,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.precision(17);
  out << "bin,boundary_overlap";
  for (const ComparisonReport& r : reports) out << ',' << r.schedule_label;
  out << '\n';
  for (int b = 0; b < bins.num_bins; ++b) {
    out << b << ',' << bins.boundaries[b];
    for (const ComparisonReport& r : reports)
      out << ',' << r.per_bin_ratio_of_averages.at(b);
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace qsched
