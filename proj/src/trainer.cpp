#include "qsched/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "qsched/errors.hpp"

namespace qsched {

double objective_value(const Schedule& schedule, const Objective& obj) {
  if (obj.training_set.empty()) throw ConfigError("objective_value: empty training set");
  const std::size_t count = obj.training_set.size();
  std::vector<double> overlaps(count);
  auto eval_one = [&](std::size_t i) {
    const auto& inst = obj.training_set[i];
    const StateVector psi = run_schedule(inst.diag, schedule, obj.trotter);
    overlaps[i] = squared_overlap(psi, inst.ground_state);
  };
  const int threads = std::min<int>(std::max(obj.num_threads, 1), static_cast<int>(count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) eval_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) eval_one(i);
      });
    for (auto& th : pool) th.join();
  }
  // fixed instance-order accumulation for determinism
  double sum = 0.0;
  for (double v : overlaps) sum += v;
  return sum / static_cast<double>(count);
}

ObjectiveFn make_objective_fn(const Objective& obj) {
  return [&obj](const Schedule& s) { return objective_value(s, obj); };
}

void OptimizerConfig::validate() const {
  if (noisy_evals < adapt_window) throw ConfigError("noisy_evals must be >= adapt_window");
  if (adapt_window < 1) throw ConfigError("adapt_window must be >= 1");
  if (!(step_shrink > 0.0 && step_shrink < 1.0 && step_grow > 1.0))
    throw ConfigError("need 0 < step_shrink < 1 < step_grow");
  if (!(powell_tol > 0.0 && outer_tol > 0.0 && initial_step > 0.0))
    throw ConfigError("tolerances and initial_step must be positive");
  if (max_outer_rounds < 1 || powell_max_rounds < 1)
    throw ConfigError("round limits must be >= 1");
}

namespace {

// Packed view of the unfrozen coordinates: theta_x first, then theta_z.
struct FreeCoords {
  std::vector<int> x_slots;
  std::vector<int> z_slots;

  FreeCoords(const Schedule& s, const FreezeMask& mask) {
    const int p = s.steps();
    if (mask.freeze_x.size() != static_cast<std::size_t>(p) ||
        mask.freeze_z.size() != static_cast<std::size_t>(p))
      throw DimensionError("freeze mask length does not match schedule");
    for (int j = 0; j < p; ++j)
      if (!mask.freeze_x[j]) x_slots.push_back(j);
    for (int j = 0; j < p; ++j)
      if (!mask.freeze_z[j]) z_slots.push_back(j);
  }

  std::size_t size() const { return x_slots.size() + z_slots.size(); }

  std::vector<double> pack(const Schedule& s) const {
    std::vector<double> v;
    v.reserve(size());
    for (int j : x_slots) v.push_back(s.theta_x[j]);
    for (int j : z_slots) v.push_back(s.theta_z[j]);
    return v;
  }

  void unpack(const std::vector<double>& v, Schedule& s) const {
    std::size_t k = 0;
    for (int j : x_slots) s.theta_x[j] = v[k++];
    for (int j : z_slots) s.theta_z[j] = v[k++];
  }
};

void log_eval(std::vector<TrajectoryRecord>* trajectory, double step, double value, bool accepted) {
  if (!trajectory) return;
  trajectory->push_back(
      {static_cast<std::int64_t>(trajectory->size()), step, value, accepted});
}

constexpr double kGolden = 1.618034;
constexpr double kCGold = 0.3819660;
constexpr double kZeps = 1e-12;

struct Bracket {
  double ax, bx, cx, fa, fb, fc;
};

// Golden-ratio bracket expansion with parabolic trial steps.
template <typename F>
Bracket bracket_minimum(F&& f, double ax, double bx) {
  Bracket br;
  br.ax = ax;
  br.bx = bx;
  br.fa = f(ax);
  br.fb = f(bx);
  if (br.fb > br.fa) {
    std::swap(br.ax, br.bx);
    std::swap(br.fa, br.fb);
  }
  br.cx = br.bx + kGolden * (br.bx - br.ax);
  br.fc = f(br.cx);
  while (br.fb > br.fc) {
    const double r = (br.bx - br.ax) * (br.fb - br.fc);
    const double q = (br.bx - br.cx) * (br.fb - br.fa);
    double denom = 2.0 * std::copysign(std::max(std::abs(q - r), kZeps), q - r);
    double u = br.bx - ((br.bx - br.cx) * q - (br.bx - br.ax) * r) / denom;
    const double ulim = br.bx + 100.0 * (br.cx - br.bx);
    double fu;
    if ((br.bx - u) * (u - br.cx) > 0.0) {
      fu = f(u);
      if (fu < br.fc) {
        br.ax = br.bx;
        br.fa = br.fb;
        br.bx = u;
        br.fb = fu;
        break;
      }
      if (fu > br.fb) {
        br.cx = u;
        br.fc = fu;
        break;
      }
      u = br.cx + kGolden * (br.cx - br.bx);
      fu = f(u);
    } else if ((br.cx - u) * (u - ulim) > 0.0) {
      fu = f(u);
      if (fu < br.fc) {
        br.bx = br.cx;
        br.cx = u;
        u = br.cx + kGolden * (br.cx - br.bx);
        br.fb = br.fc;
        br.fc = fu;
        fu = f(u);
      }
    } else if ((u - ulim) * (ulim - br.cx) >= 0.0) {
      u = ulim;
      fu = f(u);
    } else {
      u = br.cx + kGolden * (br.cx - br.bx);
      fu = f(u);
    }
    br.ax = br.bx;
    br.bx = br.cx;
    br.cx = u;
    br.fa = br.fb;
    br.fb = br.fc;
    br.fc = fu;
  }
  return br;
}

// Brent's parabolic-interpolation/golden-section minimizer.
template <typename F>
std::pair<double, double> brent_minimize(F&& f, const Bracket& br, double tol, int max_iters) {
  double a = std::min(br.ax, br.cx);
  double b = std::max(br.ax, br.cx);
  double x = br.bx, w = br.bx, v = br.bx;
  double fx = br.fb, fw = br.fb, fv = br.fb;
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < max_iters; ++iter) {
    const double xm = 0.5 * (a + b);
    const double tol1 = tol * std::abs(x) + kZeps;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (!(std::abs(p) >= std::abs(0.5 * q * etemp) || p <= q * (a - x) || p >= q * (b - x))) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = std::copysign(tol1, xm - x);
        golden = false;
      }
    }
    if (golden) {
      e = (x >= xm) ? a - x : b - x;
      d = kCGold * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + std::copysign(tol1, d);
    const double fu = f(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; w = x; x = u;
      fv = fw; fw = fx; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; w = u;
        fv = fw; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return {x, fx};
}

}  // namespace

SearchResult noisy_search(const Schedule& start, const FreezeMask& mask, const ObjectiveFn& fn,
                          const OptimizerConfig& cfg, std::mt19937_64& rng, double start_value,
                          std::vector<TrajectoryRecord>* trajectory) {
  cfg.validate();
  const FreeCoords coords(start, mask);
  Schedule best = start;
  double best_value = start_value;
  double step = cfg.initial_step;
  int window_accepts = 0;
  for (int trial = 1; trial <= cfg.noisy_evals; ++trial) {
    Schedule candidate = best;
    std::uniform_real_distribution<double> offset(-step, step);
    for (int j : coords.x_slots) candidate.theta_x[j] += offset(rng);
    for (int j : coords.z_slots) candidate.theta_z[j] += offset(rng);
    const double value = fn(candidate);
    const bool accepted = value > best_value;
    log_eval(trajectory, step, value, accepted);
    if (accepted) {
      best = std::move(candidate);
      best_value = value;
      ++window_accepts;
    }
    if (trial % cfg.adapt_window == 0) {
      if (window_accepts >= cfg.accept_hi)
        step *= cfg.step_grow;
      else if (window_accepts <= cfg.accept_lo)
        step *= cfg.step_shrink;
      window_accepts = 0;
    }
  }
  return {std::move(best), best_value};
}

SearchResult powell_minimize(const Schedule& start, const FreezeMask& mask, const ObjectiveFn& fn,
                             const OptimizerConfig& cfg, double start_value,
                             std::vector<TrajectoryRecord>* trajectory) {
  cfg.validate();
  const FreeCoords coords(start, mask);
  const std::size_t n = coords.size();
  if (n == 0) return {start, start_value};

  Schedule scratch = start;
  double best_seen = start_value;
  auto g = [&](const std::vector<double>& v) {
    coords.unpack(v, scratch);
    const double value = fn(scratch);
    const bool improved = value > best_seen;
    if (improved) best_seen = value;
    log_eval(trajectory, 0.0, value, improved);
    return -value;
  };

  std::vector<double> point = coords.pack(start);
  double f = -start_value;

  auto line_minimize = [&](std::vector<double>& p, const std::vector<double>& dir, double fp) {
    std::vector<double> probe(n);
    auto along = [&](double alpha) {
      for (std::size_t i = 0; i < n; ++i) probe[i] = p[i] + alpha * dir[i];
      return g(probe);
    };
    const Bracket br = bracket_minimum(along, 0.0, 0.25);
    auto [alpha, falpha] = brent_minimize(along, br, cfg.powell_tol, cfg.powell_max_line_iters);
    if (falpha < fp) {
      for (std::size_t i = 0; i < n; ++i) p[i] += alpha * dir[i];
      return falpha;
    }
    return fp;  // keep the current point if refinement found nothing better
  };

  std::vector<std::vector<double>> directions(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) directions[i][i] = 1.0;

  for (int round = 0; round < cfg.powell_max_rounds; ++round) {
    const double f_begin = f;
    const std::vector<double> p_begin = point;
    double biggest_drop = 0.0;
    std::size_t biggest_dir = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double f_prev = f;
      f = line_minimize(point, directions[i], f);
      if (f_prev - f > biggest_drop) {
        biggest_drop = f_prev - f;
        biggest_dir = i;
      }
    }
    if (2.0 * (f_begin - f) <= cfg.powell_tol * (std::abs(f_begin) + std::abs(f)) + kZeps) break;
    // Powell's replacement test on the extrapolated point.
    std::vector<double> extrapolated(n), displacement(n);
    for (std::size_t i = 0; i < n; ++i) {
      extrapolated[i] = 2.0 * point[i] - p_begin[i];
      displacement[i] = point[i] - p_begin[i];
    }
    const double f_extra = g(extrapolated);
    if (f_extra < f_begin) {
      const double t = 2.0 * (f_begin - 2.0 * f + f_extra) *
                           (f_begin - f - biggest_drop) * (f_begin - f - biggest_drop) -
                       biggest_drop * (f_begin - f_extra) * (f_begin - f_extra);
      if (t < 0.0) {
        f = line_minimize(point, displacement, f);
        directions[biggest_dir] = directions[n - 1];
        directions[n - 1] = displacement;
      }
    }
  }

  Schedule result = start;
  coords.unpack(point, result);
  return {std::move(result), -f};
}

TrainingRun train(const Schedule& initial, const FreezeMask& mask, const ObjectiveFn& fn,
                  const OptimizerConfig& cfg) {
  cfg.validate();
  TrainingRun run;
  run.initial = initial;
  run.mask = mask;
  run.config = cfg;

  std::mt19937_64 rng(cfg.seed);
  double value = fn(initial);
  run.initial_objective = value;
  log_eval(&run.trajectory, 0.0, value, true);

  Schedule current = initial;
  for (int round = 0; round < cfg.max_outer_rounds; ++round) {
    const double before = value;
    SearchResult noisy = noisy_search(current, mask, fn, cfg, rng, value, &run.trajectory);
    SearchResult refined =
        powell_minimize(noisy.schedule, mask, fn, cfg, noisy.value, &run.trajectory);
    current = std::move(refined.schedule);
    value = refined.value;
    run.outer_rounds = round + 1;
    const double rel = (value - before) / std::max(std::abs(before), 1e-12);
    if (rel < cfg.outer_tol) break;
  }

  run.final_schedule = std::move(current);
  run.final_objective = value;
  return run;
}

void save_training_log(const TrainingRun& run, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.precision(17);
  out << "index,step_size,objective,accepted\n";
  for (const TrajectoryRecord& r : run.trajectory)
    out << r.index << ',' << r.step_size << ',' << r.objective << ',' << (r.accepted ? 1 : 0)
        << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace qsched
