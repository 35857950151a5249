#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qsched/ensembles.hpp"
#include "qsched/errors.hpp"
#include "qsched/evaluation.hpp"
#include "qsched/rng.hpp"
#include "qsched/toymodels.hpp"
#include "qsched/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitIo = 4;

void write_run_manifest(const fs::path& path, const json& resolved) {
  std::ofstream out(path);
  if (!out) throw qsched::IoError("cannot write manifest: " + path.string());
  out << resolved.dump(2) << '\n';
}

std::vector<qsched::Schedule> parse_schedule_list(const std::string& csv) {
  // comma-separated refs; commas inside L(p,x,z) literals are kept together
  std::vector<qsched::Schedule> out;
  std::string current;
  int depth = 0;
  auto flush = [&] {
    if (!current.empty()) out.push_back(qsched::parse_schedule_ref(current));
    current.clear();
  };
  for (char c : csv) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      flush();
      continue;
    }
    current += c;
  }
  flush();
  if (out.empty()) throw qsched::ConfigError("empty schedule list");
  return out;
}

std::vector<qsched::EnsembleInstance> load_instances(const std::string& instances_path,
                                                     const std::string& subset_manifest) {
  auto instances = qsched::read_ensemble(instances_path);
  if (!subset_manifest.empty()) {
    const auto ids = qsched::read_hard_manifest(subset_manifest);
    std::vector<qsched::EnsembleInstance> subset;
    for (const auto& id : ids) {
      auto it = std::find_if(instances.begin(), instances.end(),
                             [&](const auto& inst) { return inst.id == id; });
      if (it == instances.end())
        throw qsched::IoError("instance " + id + " from manifest not found in ensemble");
      subset.push_back(std::move(*it));
    }
    instances = std::move(subset);
  }
  return instances;
}

int cmd_gen(const std::string& kind, int n, int m, int count, std::uint64_t seed,
            const std::string& out_dir, int threads) {
  qsched::EnsembleSpec spec;
  spec.kind = qsched::EnsembleSpec::parse_kind(kind);
  spec.num_vars = n;
  spec.num_clauses = m;
  spec.target_count = count;
  spec.seed = seed;
  if (fs::exists(fs::path(out_dir) / "manifest.json"))
    throw qsched::ConfigError("output directory already holds an ensemble: " + out_dir);
  auto instances = qsched::generate_ensemble(spec, threads);
  qsched::write_ensemble(instances, spec, out_dir);
  std::cout << "wrote " << instances.size() << " instances to " << out_dir << '\n';
  return 0;
}

int cmd_filter(const std::string& ensemble_dir, const std::string& reference, double fraction,
               int substeps, const std::string& out, int threads) {
  auto instances = qsched::read_ensemble(ensemble_dir);
  const qsched::Schedule ref = qsched::parse_schedule_ref(reference);
  const qsched::TrotterConfig cfg{substeps};
  qsched::compute_reference_overlaps(instances, ref, cfg, threads);
  // cache overlaps back into the sidecars
  for (const auto& inst : instances) {
    const fs::path cnf = fs::path(ensemble_dir) / (inst.id + ".cnf");
    auto meta = qsched::read_meta(cnf);
    if (meta && !meta->reference_overlap) {
      meta->reference_overlap = inst.reference_overlap;
      qsched::write_meta(*meta, cnf);
    }
  }
  auto hard = qsched::hardness_filter(std::move(instances), ref, fraction, cfg, threads);
  const fs::path out_path =
      out.empty() ? fs::path(ensemble_dir) / "hard_subset.json" : fs::path(out);
  qsched::write_hard_manifest(hard, ref.label, fraction, out_path);
  write_run_manifest(out_path.string() + ".manifest.json",
                     {{"command", "filter"},
                      {"ensemble", ensemble_dir},
                      {"reference", ref.label},
                      {"fraction", fraction},
                      {"substeps", substeps},
                      {"retained", hard.size()}});
  std::cout << "retained " << hard.size() << " instances -> " << out_path << '\n';
  return 0;
}

int cmd_train(const std::string& instances_dir, const std::string& subset,
              const std::string& initial, const std::string& initial_file, bool freeze_z, int k,
              std::uint64_t seed, int substeps, int threads, const qsched::OptimizerConfig& base,
              const std::string& out, const std::string& log_path) {
  auto instances = load_instances(instances_dir, subset);

  qsched::Schedule start;
  qsched::FreezeMask mask;
  std::string initial_label;
  if (!initial_file.empty()) {
    auto loaded = qsched::load_schedule(initial_file);
    start = loaded.schedule;
    mask = loaded.mask.value_or(qsched::FreezeMask::none(start.steps()));
    initial_label = initial_file;
  } else {
    const int key = std::stoi(initial);
    std::tie(start, mask) = qsched::initial_schedule(key);
    initial_label = "initial-" + std::to_string(key);
  }
  if (freeze_z) mask = qsched::FreezeMask::frozen_z(start.steps());

  std::mt19937_64 split_rng = qsched::make_stream(seed, 0xA11CE);
  const auto split = qsched::split_training(instances, k, split_rng);

  qsched::Objective objective;
  objective.trotter = qsched::TrotterConfig{substeps};
  objective.num_threads = threads;
  for (std::size_t idx : split.training_indices) {
    qsched::Objective::Instance inst;
    inst.diag = qsched::build_diagonal(instances[idx].instance);
    inst.ground_state = instances[idx].ground_state;
    objective.training_set.push_back(std::move(inst));
  }

  qsched::OptimizerConfig cfg = base;
  cfg.seed = seed;
  const auto run = qsched::train(start, mask, qsched::make_objective_fn(objective), cfg);

  qsched::ScheduleProvenance prov;
  prov.initial = initial_label;
  prov.training_set = instances_dir;
  prov.seed = seed;
  prov.final_objective = run.final_objective;
  qsched::Schedule final = run.final_schedule;
  final.label = "trained-" + initial_label;
  qsched::save_schedule(final, out, &mask, &prov);
  if (!log_path.empty()) qsched::save_training_log(run, log_path);
  write_run_manifest(out + ".manifest.json",
                     {{"command", "train"},
                      {"instances", instances_dir},
                      {"subset", subset},
                      {"initial", initial_label},
                      {"freeze_z", freeze_z},
                      {"k", k},
                      {"seed", seed},
                      {"substeps", substeps},
                      {"noisy_evals", cfg.noisy_evals},
                      {"adapt_window", cfg.adapt_window},
                      {"accept_hi", cfg.accept_hi},
                      {"accept_lo", cfg.accept_lo},
                      {"step_grow", cfg.step_grow},
                      {"step_shrink", cfg.step_shrink},
                      {"initial_step", cfg.initial_step},
                      {"powell_tol", cfg.powell_tol},
                      {"powell_max_rounds", cfg.powell_max_rounds},
                      {"outer_tol", cfg.outer_tol},
                      {"max_outer_rounds", cfg.max_outer_rounds},
                      {"initial_objective", run.initial_objective},
                      {"final_objective", run.final_objective},
                      {"outer_rounds", run.outer_rounds}});
  std::cout << "objective " << run.initial_objective << " -> " << run.final_objective << " in "
            << run.outer_rounds << " outer rounds; schedule written to " << out << '\n';
  return 0;
}

int cmd_eval(const std::string& instances_dir, const std::string& subset,
             const std::string& schedules_csv, const std::string& baseline, int substeps,
             int num_bins, const std::string& bin_ref, const std::string& out_prefix,
             int threads) {
  auto instances = load_instances(instances_dir, subset);
  auto schedules = parse_schedule_list(schedules_csv);
  const qsched::Schedule base = qsched::parse_schedule_ref(baseline);
  const qsched::TrotterConfig cfg{substeps};

  std::vector<qsched::Schedule> all = schedules;
  auto has_label = [&](const std::string& label) {
    return std::any_of(all.begin(), all.end(),
                       [&](const auto& s) { return s.label == label; });
  };
  if (!has_label(base.label)) all.push_back(base);
  qsched::Schedule binref;
  if (num_bins > 0) {
    binref = qsched::parse_schedule_ref(bin_ref);
    if (!has_label(binref.label)) all.push_back(binref);
  }

  const auto records = qsched::evaluate(all, instances, cfg, threads);
  qsched::write_records_csv(records, out_prefix + "records.csv");

  const auto baseline_records = qsched::records_for(records, base.label);
  qsched::BinAssignment bins;
  if (num_bins > 0) bins = qsched::bin_by_hardness(qsched::records_for(records, binref.label), num_bins);

  std::vector<qsched::ComparisonReport> reports;
  for (const auto& s : all)
    reports.push_back(qsched::compare(qsched::records_for(records, s.label), baseline_records,
                                      num_bins > 0 ? &bins : nullptr));
  qsched::write_comparison_csv(reports, out_prefix + "comparison.csv");
  if (num_bins > 0) qsched::write_bins_csv(bins, reports, out_prefix + "bins.csv");
  write_run_manifest(out_prefix + "manifest.json", {{"command", "eval"},
                                                    {"instances", instances_dir},
                                                    {"subset", subset},
                                                    {"schedules", schedules_csv},
                                                    {"baseline", base.label},
                                                    {"substeps", substeps},
                                                    {"bins", num_bins},
                                                    {"bin_ref", num_bins > 0 ? binref.label : ""},
                                                    {"instance_count", instances.size()}});
  std::cout << "evaluated " << all.size() << " schedules on " << instances.size()
            << " instances -> " << out_prefix << "{records,comparison"
            << (num_bins > 0 ? ",bins" : "") << "}.csv\n";
  return 0;
}

int cmd_toy_ring(int k_min, int k_max, const std::string& schedules_csv,
                 const std::string& variant, int substeps, const std::string& out) {
  auto schedules = parse_schedule_list(schedules_csv);
  qsched::RingModelParams params;
  if (variant == "missing")
    params.variant = qsched::RingModelParams::Variant::missing_field;
  else if (variant == "reduced")
    params.variant = qsched::RingModelParams::Variant::reduced_fields;
  else
    throw qsched::ConfigError("unknown ring variant: " + variant);
  const qsched::TrotterConfig cfg{substeps};

  std::ofstream csv(out);
  if (!csv) throw qsched::IoError("cannot open for writing: " + out);
  csv.precision(17);
  csv << "K";
  for (const auto& s : schedules) csv << ',' << s.label;
  csv << '\n';
  for (int k = k_min; k <= k_max; ++k) {
    params.ring_size = k;
    csv << k;
    for (const auto& s : schedules) csv << ',' << qsched::run_ring(s, params, cfg);
    csv << '\n';
    std::cout << "K=" << k << " done\n";
  }
  write_run_manifest(out + ".manifest.json", {{"command", "toy ring"},
                                              {"k_min", k_min},
                                              {"k_max", k_max},
                                              {"variant", variant},
                                              {"substeps", substeps},
                                              {"schedules", schedules_csv}});
  return 0;
}

int cmd_toy_subspace(long long n1, long long n2, double a, double b, double e1, double e2,
                     double e3, const std::string& sweep_b, const std::string& schedules_csv,
                     const std::string& out) {
  auto schedules = parse_schedule_list(schedules_csv);
  std::vector<double> b_values;
  if (sweep_b.empty()) {
    b_values.push_back(b);
  } else {
    double lo, hi;
    int steps;
    if (std::sscanf(sweep_b.c_str(), "%lf:%lf:%d", &lo, &hi, &steps) != 3 || steps < 2)
      throw qsched::ConfigError("bad --sweep-b, expected lo:hi:steps");
    for (int i = 0; i < steps; ++i)
      b_values.push_back(lo + (hi - lo) * i / (steps - 1));
  }
  std::ofstream csv(out);
  if (!csv) throw qsched::IoError("cannot open for writing: " + out);
  csv.precision(17);
  csv << "b";
  for (const auto& s : schedules) csv << ',' << s.label;
  csv << '\n';
  for (double bv : b_values) {
    qsched::SubspaceModelParams params{n1, n2, a, bv, e1, e2, e3};
    csv << bv;
    for (const auto& s : schedules) csv << ',' << qsched::run_subspace(s, params);
    csv << '\n';
  }
  write_run_manifest(out + ".manifest.json", {{"command", "toy subspace"},
                                              {"n1", n1},
                                              {"n2", n2},
                                              {"a", a},
                                              {"b", b},
                                              {"sweep_b", sweep_b},
                                              {"e1", e1},
                                              {"e2", e2},
                                              {"e3", e3},
                                              {"schedules", schedules_csv}});
  return 0;
}

int cmd_report(const std::string& records_path, const std::string& baseline, int num_bins,
               const std::string& bin_ref, const std::string& out_prefix) {
  const auto records = qsched::read_records_csv(records_path);
  std::vector<std::string> labels;
  for (const auto& r : records)
    if (std::find(labels.begin(), labels.end(), r.schedule_label) == labels.end())
      labels.push_back(r.schedule_label);
  const auto baseline_records = qsched::records_for(records, baseline);
  if (baseline_records.empty())
    throw qsched::ConfigError("baseline schedule " + baseline + " not present in records");
  qsched::BinAssignment bins;
  if (num_bins > 0) {
    const auto ref_records = qsched::records_for(records, bin_ref);
    if (ref_records.empty())
      throw qsched::ConfigError("bin reference " + bin_ref + " not present in records");
    bins = qsched::bin_by_hardness(ref_records, num_bins);
  }
  std::vector<qsched::ComparisonReport> reports;
  for (const auto& label : labels)
    reports.push_back(qsched::compare(qsched::records_for(records, label), baseline_records,
                                      num_bins > 0 ? &bins : nullptr));
  qsched::write_comparison_csv(reports, out_prefix + "comparison.csv");
  if (num_bins > 0) qsched::write_bins_csv(bins, reports, out_prefix + "bins.csv");
  std::cout << "report written to " << out_prefix << "comparison.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schedule training and evaluation for MAX-SAT quantum optimization"};
  app.require_subcommand(1);

  int threads = 1;
  app.add_option("--threads", threads, "worker threads for instance-level parallelism");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance ensemble");
  std::string gen_kind = "max2sat", gen_out;
  int gen_n = 20, gen_m = 60, gen_count = 100;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind, "max2sat or max3sat");
  gen->add_option("--n", gen_n, "variable count")->required();
  gen->add_option("--m", gen_m, "clause count")->required();
  gen->add_option("--count", gen_count, "instances to emit")->required();
  gen->add_option("--seed", gen_seed, "master seed")->required();
  gen->add_option("--out", gen_out, "output directory")->required();

  // filter
  auto* filter = app.add_subcommand("filter", "hardness-filter an ensemble");
  std::string flt_dir, flt_ref = "L(10,1,1)", flt_out;
  double flt_fraction = 0.068;
  int flt_substeps = 4;
  filter->add_option("--ensemble", flt_dir, "ensemble directory")->required();
  filter->add_option("--reference", flt_ref, "reference schedule");
  filter->add_option("--fraction", flt_fraction, "retained fraction");
  filter->add_option("--substeps", flt_substeps, "Trotter substeps");
  filter->add_option("--out", flt_out, "hard-subset manifest path");

  // train
  auto* train_cmd = app.add_subcommand("train", "learn a schedule on a training subset");
  std::string trn_dir, trn_subset, trn_initial = "11", trn_initial_file, trn_out = "schedule.json",
              trn_log;
  bool trn_freeze_z = false;
  int trn_k = 13, trn_substeps = 4;
  std::uint64_t trn_seed = 0;
  qsched::OptimizerConfig trn_cfg;
  train_cmd->add_option("--instances", trn_dir, "ensemble directory")->required();
  train_cmd->add_option("--subset", trn_subset, "hard-subset manifest (optional)");
  train_cmd->add_option("--initial", trn_initial, "initial schedule key (2..13)");
  train_cmd->add_option("--initial-file", trn_initial_file, "initial schedule file");
  train_cmd->add_flag("--freeze-z", trn_freeze_z, "hold theta_z fixed during learning");
  train_cmd->add_option("--k", trn_k, "training set size");
  train_cmd->add_option("--seed", trn_seed, "training seed")->required();
  train_cmd->add_option("--substeps", trn_substeps, "Trotter substeps");
  train_cmd->add_option("--noisy-evals", trn_cfg.noisy_evals);
  train_cmd->add_option("--adapt-window", trn_cfg.adapt_window);
  train_cmd->add_option("--accept-hi", trn_cfg.accept_hi);
  train_cmd->add_option("--accept-lo", trn_cfg.accept_lo);
  train_cmd->add_option("--step-grow", trn_cfg.step_grow);
  train_cmd->add_option("--step-shrink", trn_cfg.step_shrink);
  train_cmd->add_option("--initial-step", trn_cfg.initial_step);
  train_cmd->add_option("--powell-tol", trn_cfg.powell_tol);
  train_cmd->add_option("--powell-max-rounds", trn_cfg.powell_max_rounds);
  train_cmd->add_option("--outer-tol", trn_cfg.outer_tol);
  train_cmd->add_option("--max-outer-rounds", trn_cfg.max_outer_rounds);
  train_cmd->add_option("--out", trn_out, "output schedule file");
  train_cmd->add_option("--log", trn_log, "training log path");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate schedules over an instance set");
  std::string evl_dir, evl_subset, evl_schedules, evl_baseline = "L(10,1,1)",
              evl_binref = "L(80,1,1)", evl_prefix = "eval_";
  int evl_substeps = 4, evl_bins = 0;
  eval_cmd->add_option("--instances", evl_dir, "ensemble directory")->required();
  eval_cmd->add_option("--subset", evl_subset, "hard-subset manifest (optional)");
  eval_cmd->add_option("--schedules", evl_schedules, "comma-separated schedule refs")->required();
  eval_cmd->add_option("--baseline", evl_baseline, "baseline schedule ref");
  eval_cmd->add_option("--substeps", evl_substeps, "Trotter substeps");
  eval_cmd->add_option("--bins", evl_bins, "hardness bins (0 = none)");
  eval_cmd->add_option("--bin-ref", evl_binref, "binning reference schedule");
  eval_cmd->add_option("--out-prefix", evl_prefix, "output file prefix");

  // toy
  auto* toy = app.add_subcommand("toy", "toy model reproduction runs");
  toy->require_subcommand(1);
  auto* ring = toy->add_subcommand("ring", "ring/spoke Ising model");
  int ring_kmin = 2, ring_kmax = 10, ring_substeps = 4;
  std::string ring_schedules = "154,L(10,1,1),L(80,1,1)", ring_variant = "missing",
              ring_out = "ring.csv";
  ring->add_option("--k-min", ring_kmin);
  ring->add_option("--k-max", ring_kmax);
  ring->add_option("--schedules", ring_schedules);
  ring->add_option("--variant", ring_variant, "missing or reduced");
  ring->add_option("--substeps", ring_substeps);
  ring->add_option("--out", ring_out);

  auto* subspace = toy->add_subcommand("subspace", "three-subspace model");
  long long sub_n1 = 100, sub_n2 = 50;
  double sub_a = 1.0, sub_b = 0.0, sub_e1 = 1.0, sub_e2 = 1.0, sub_e3 = 0.0;
  std::string sub_sweep, sub_schedules = "L(10,1,1),L(80,1,1)", sub_out = "subspace.csv";
  subspace->add_option("--n1", sub_n1);
  subspace->add_option("--n2", sub_n2);
  subspace->add_option("--a", sub_a);
  subspace->add_option("--b", sub_b);
  subspace->add_option("--e1", sub_e1);
  subspace->add_option("--e2", sub_e2);
  subspace->add_option("--e3", sub_e3);
  subspace->add_option("--sweep-b", sub_sweep, "lo:hi:steps");
  subspace->add_option("--schedules", sub_schedules);
  subspace->add_option("--out", sub_out);

  // report
  auto* report = app.add_subcommand("report", "recompute comparison tables from records CSV");
  std::string rpt_records, rpt_baseline = "L(10,1,1)", rpt_binref = "L(80,1,1)",
              rpt_prefix = "report_";
  int rpt_bins = 0;
  report->add_option("--records", rpt_records, "records CSV")->required();
  report->add_option("--baseline", rpt_baseline);
  report->add_option("--bins", rpt_bins);
  report->add_option("--bin-ref", rpt_binref);
  report->add_option("--out-prefix", rpt_prefix);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(gen_kind, gen_n, gen_m, gen_count, gen_seed, gen_out, threads);
    if (*filter)
      return cmd_filter(flt_dir, flt_ref, flt_fraction, flt_substeps, flt_out, threads);
    if (*train_cmd)
      return cmd_train(trn_dir, trn_subset, trn_initial, trn_initial_file, trn_freeze_z, trn_k,
                       trn_seed, trn_substeps, threads, trn_cfg, trn_out, trn_log);
    if (*eval_cmd)
      return cmd_eval(evl_dir, evl_subset, evl_schedules, evl_baseline, evl_substeps, evl_bins,
                      evl_binref, evl_prefix, threads);
    if (*ring)
      return cmd_toy_ring(ring_kmin, ring_kmax, ring_schedules, ring_variant, ring_substeps,
                          ring_out);
    if (*subspace)
      return cmd_toy_subspace(sub_n1, sub_n2, sub_a, sub_b, sub_e1, sub_e2, sub_e3, sub_sweep,
                              sub_schedules, sub_out);
    if (*report) return cmd_report(rpt_records, rpt_baseline, rpt_bins, rpt_binref, rpt_prefix);
  } catch (const qsched::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const qsched::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const qsched::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
