#include "gard/bench.hpp"

#include "gard/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

namespace gard::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> effective_fractions(const ExperimentConfig& cfg) {
  if (cfg.experiment == Experiment::kNoiseSuite) return {0.0};
  return cfg.fractions;
}

bool wants_theory(const ExperimentConfig& cfg) {
  return cfg.experiment == Experiment::kSupport || cfg.experiment == Experiment::kCertify;
}

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  std::size_t count = 0;
  for (double x : v) {
    if (std::isnan(x)) continue;
    sum += x;
    ++count;
  }
  return count ? sum / static_cast<double>(count) : kNaN;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(Index v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "1" : "0"; }

std::string csv_safe(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  }
  return s;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& file, const std::vector<std::string>& header) : out_(file) {
    if (!out_) throw std::runtime_error("cannot write " + file.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

TheoryRecord theory_record(const ExperimentConfig& cfg, const datagen::Instance& inst, bool bound_only) {
  TheoryRecord rec;
  const auto s = static_cast<Index>(inst.truth.u0.nnz());
  const double eps = inst.problem.epsilon0;
  rec.s = s;
  rec.epsilon0 = eps;
  rec.bound_only = bound_only;
  rec.tau = linalg::singular_values(inst.problem.x).back();
  if (s == 0) {
    rec.delta_s = rec.mu_s = rec.omega_s_degrees = kNaN;
    rec.bound_noiseless_c = rec.bound_noisy_c = kNaN;
    rec.error_bound_tight = rec.error_bound_loose = kNaN;
    return rec;
  }
  rec.d = (inst.problem.n() + s - 1) / s;
  rec.bound_noiseless_c = theory::bound_noiseless(inst.truth.u0);
  const auto noisy = theory::bound_noisy(inst.truth.u0, eps);
  rec.bound_noisy_c = noisy.value_or(kNaN);
  if (bound_only) {
    rec.delta_s = rec.mu_s = rec.omega_s_degrees = rec.error_bound_tight = kNaN;
    rec.error_bound_loose = noisy ? theory::error_bound(eps, rec.tau, *noisy) : kNaN;
    return rec;
  }
  const theory::TheoryReport rep = theory::certify(inst.problem, inst.truth, s, cfg.budget);
  rec.delta_s = rep.delta_s;
  rec.mu_s = rep.mu_s;
  rec.omega_s_degrees = rep.omega_s_degrees;
  rec.error_bound_tight = rep.error_bound_tight;
  rec.error_bound_loose = rep.error_bound_loose.value_or(kNaN);
  rec.guarantee = eps > 0.0 ? rep.noisy_guarantee.value_or(false) : rep.noiseless_guarantee;
  return rec;
}

struct TaskResult {
  std::vector<TrialOutcome> outcomes;
  std::optional<TheoryRecord> theory;
};

// Runs fn(i) for i in [0, count) on up to `workers` threads. Results land in
// slots by index, so the caller's fold is independent of scheduling.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto loop = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (threads == 1) {
    loop();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(loop);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::kMseSweep:
      return "mse_sweep";
    case Experiment::kScaling:
      return "scaling";
    case Experiment::kSupport:
      return "support_recovery";
    case Experiment::kPhase:
      return "phase_transition";
    case Experiment::kNoiseSuite:
      return "noise_suite";
    case Experiment::kCertify:
      return "certify";
  }
  return "?";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kGard:
      return "gard";
    case Method::kMEst:
      return "m_est";
    case Method::kRomp:
      return "romp";
    case Method::kAdmm:
      return "admm";
  }
  return "?";
}

Experiment parse_experiment(const std::string& s) {
  std::string k = s;
  std::replace(k.begin(), k.end(), '-', '_');
  if (k == "mse_sweep") return Experiment::kMseSweep;
  if (k == "scaling") return Experiment::kScaling;
  if (k == "support" || k == "support_recovery") return Experiment::kSupport;
  if (k == "phase" || k == "phase_transition") return Experiment::kPhase;
  if (k == "noise_suite") return Experiment::kNoiseSuite;
  if (k == "certify") return Experiment::kCertify;
  throw ConfigError("unknown experiment '" + s + "'");
}

Method parse_method(const std::string& s) {
  if (s == "gard") return Method::kGard;
  if (s == "m_est" || s == "m-est") return Method::kMEst;
  if (s == "romp") return Method::kRomp;
  if (s == "admm") return Method::kAdmm;
  throw ConfigError("unknown method '" + s + "' (expected gard, m_est, romp or admm)");
}

Index outlier_count(double fraction, Index n) {
  return static_cast<Index>(std::llround(fraction * static_cast<double>(n)));
}

std::vector<Group> groups(const ExperimentConfig& cfg) {
  std::vector<Group> out;
  switch (cfg.experiment) {
    case Experiment::kScaling:
      for (Index n : cfg.n_values) out.push_back({"n=" + std::to_string(n), n, cfg.m, std::nullopt});
      break;
    case Experiment::kPhase:
      for (Index m : cfg.m_values) out.push_back({"m=" + std::to_string(m), cfg.n, m, std::nullopt});
      break;
    case Experiment::kNoiseSuite:
      for (auto t : cfg.noise_tests) out.push_back({datagen::to_string(t), cfg.n, cfg.m, t});
      break;
    default:
      out.push_back({"", cfg.n, cfg.m, std::nullopt});
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (methods.empty()) throw ConfigError("methods must not be empty");
  if (std::set<Method>(methods.begin(), methods.end()).size() != methods.size()) {
    throw ConfigError("methods must not repeat");
  }
  if (experiment == Experiment::kScaling && n_values.empty()) throw ConfigError("scaling needs n_values");
  if (experiment == Experiment::kPhase && m_values.empty()) throw ConfigError("phase needs m_values");
  if (experiment == Experiment::kNoiseSuite && noise_tests.empty()) throw ConfigError("noise_suite needs noise_tests");
  if (experiment != Experiment::kNoiseSuite && fractions.empty()) throw ConfigError("fractions must not be empty");
  for (double f : fractions) {
    if (!(f >= 0.0 && f < 0.5)) throw ConfigError("fractions must lie in [0, 0.5)");
  }
  if (experiment == Experiment::kPhase && !std::is_sorted(fractions.begin(), fractions.end())) {
    throw ConfigError("phase fractions must be increasing");
  }
  try {
    params.m_est.validate();
    params.romp.validate();
    params.admm.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (params.gard_max_outliers && *params.gard_max_outliers < 0) throw ConfigError("gard max_outliers must be >= 0");
  if (params.gard_epsilon0 && !(*params.gard_epsilon0 >= 0.0)) throw ConfigError("gard epsilon0 must be >= 0");
  if (params.romp_epsilon0 && !(*params.romp_epsilon0 >= 0.0)) throw ConfigError("romp epsilon0 must be >= 0");

  for (const Group& g : groups(*this)) {
    for (double f : effective_fractions(*this)) {
      datagen::GenConfig gc;
      gc.n = g.n;
      gc.m = g.m;
      gc.s = outlier_count(f, g.n);
      gc.inlier = instance.inlier;
      gc.outlier_magnitude = instance.outlier_magnitude;
      gc.hypercube_halfwidth = instance.hypercube_halfwidth;
      gc.theta_std = instance.theta_std;
      gc.y0_peak_band = instance.y0_peak_band;
      try {
        gc.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(e.what()) + " (group " + g.label + ", fraction " + fmt(f) + ")");
      }
      if (experiment == Experiment::kCertify && gc.s < 1) {
        throw ConfigError("certify needs at least one outlier per instance (fraction " + fmt(f) + ")");
      }
    }
  }
}

std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t group_index, std::size_t fraction_index,
                         int trial_index) {
  return derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(cfg.experiment), group_index, fraction_index,
                                       static_cast<std::uint64_t>(trial_index)});
}

datagen::Instance make_trial_instance(const ExperimentConfig& cfg, std::size_t group_index,
                                      std::size_t fraction_index, int trial_index) {
  const std::vector<Group> gs = groups(cfg);
  const Group& g = gs.at(group_index);
  const double fraction = effective_fractions(cfg).at(fraction_index);
  const std::uint64_t seed = trial_seed(cfg, group_index, fraction_index, trial_index);

  datagen::GenConfig gc;
  gc.n = g.n;
  gc.m = g.m;
  gc.seed = seed;
  gc.hypercube_halfwidth = cfg.instance.hypercube_halfwidth;
  gc.theta_std = cfg.instance.theta_std;
  if (g.noise_test) {
    datagen::Instance inst = datagen::gen_instance(gc);
    const Vector noise = datagen::gen_noise_suite(*g.noise_test, g.n, mix64(seed ^ 0x6e6f697365ULL));
    inst.problem.y += noise;
    inst.truth.eta = noise;
    return inst;
  }
  gc.s = outlier_count(fraction, g.n);
  gc.inlier = cfg.instance.inlier;
  gc.outlier_magnitude = cfg.instance.outlier_magnitude;
  gc.outlier_sign = cfg.instance.outlier_sign;
  gc.y0_peak_band = cfg.instance.y0_peak_band;
  return datagen::gen_instance(gc);
}

TrialOutcome run_method(const ExperimentConfig& cfg, Method method, const datagen::Instance& inst,
                        const Group& group) {
  const MethodParams params = group.noise_test ? noise_suite_params(cfg.params, *group.noise_test, group.n)
                                               : cfg.params;
  const Matrix& x = inst.problem.x;
  const Vector& y = inst.problem.y;
  TrialOutcome out;
  out.method = method;
  out.s = static_cast<Index>(inst.truth.u0.nnz());

  Vector theta;
  std::optional<std::vector<Index>> support;
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (method) {
      case Method::kGard: {
        RegressionProblem p = inst.problem;
        p.epsilon0 = params.gard_epsilon0.value_or(inst.problem.epsilon0);
        const GardResult r = gard_solve(p, {params.gard_engine, params.gard_max_outliers});
        theta = r.theta_star;
        support = r.u_star.indices();
        out.iterations = r.iterations;
        break;
      }
      case Method::kMEst: {
        const baselines::MEstimate r = baselines::m_estimate(x, y, params.m_est);
        theta = r.theta;
        std::vector<Index> rejected;
        for (Index i = 0; i < r.weights.size(); ++i)
          if (r.weights(i) == 0.0) rejected.push_back(i);
        support = std::move(rejected);
        out.iterations = r.iterations;
        break;
      }
      case Method::kRomp: {
        const baselines::RompResult r =
            baselines::romp(x, y, params.romp_epsilon0.value_or(inst.problem.epsilon0), params.romp);
        theta = r.theta;
        out.iterations = r.iterations;
        break;
      }
      case Method::kAdmm: {
        const baselines::AdmmResult r = baselines::admm_lasso(x, y, params.admm);
        out.iterations = r.iterations;
        if (r.max_iters_reached) {
          out.status = "failed";
          out.reason = "max_iters_reached";
        }
        theta = r.theta;
        support = r.u.indices();
        break;
      }
    }
  } catch (const std::exception& e) {
    out.status = "failed";
    out.reason = csv_safe(e.what());
  }
  out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (out.status != "ok" || !theta.allFinite()) {
    if (out.status == "ok") {
      out.status = "failed";
      out.reason = "non_finite_estimate";
    }
    out.sq_err = out.rel_err = out.support_correct_pct = out.support_extra_count = kNaN;
    out.success = false;
    return out;
  }
  const Vector diff = theta - inst.truth.theta0;
  out.sq_err = diff.squaredNorm();
  out.rel_err = diff.norm() / inst.truth.theta0.norm();
  out.success = out.rel_err <= kSuccessRelError;
  if (!support || group.noise_test) {
    out.support_correct_pct = out.support_extra_count = kNaN;
    return out;
  }
  const auto& truth = inst.truth.u0.indices();
  std::size_t hit = 0;
  for (Index j : *support)
    if (std::binary_search(truth.begin(), truth.end(), j)) ++hit;
  out.support_correct_pct = truth.empty() ? 100.0 : 100.0 * static_cast<double>(hit) / static_cast<double>(truth.size());
  out.support_extra_count = static_cast<double>(support->size() - hit);
  return out;
}

std::vector<SummaryRow> summarize(const ExperimentConfig& cfg, const std::vector<Group>& gs,
                                  const std::vector<TrialOutcome>& trials) {
  const std::size_t nf = effective_fractions(cfg).size();
  std::vector<SummaryRow> rows;
  for (std::size_t g = 0; g < gs.size(); ++g) {
    for (std::size_t f = 0; f < nf; ++f) {
      for (Method method : cfg.methods) {
        SummaryRow row;
        row.group_index = g;
        row.fraction_index = f;
        row.method = method;
        std::vector<double> sq, correct, extra, times;
        int successes = 0;
        for (const TrialOutcome& t : trials) {
          if (t.group_index != g || t.fraction_index != f || t.method != method) continue;
          ++row.trials;
          times.push_back(t.elapsed_seconds);
          if (t.status != "ok") {
            ++row.failures;
            continue;
          }
          sq.push_back(t.sq_err);
          correct.push_back(t.support_correct_pct);
          extra.push_back(t.support_extra_count);
          if (t.success) ++successes;
        }
        row.mse = mean_of(sq);
        row.mse_db = 10.0 * std::log10(row.mse);
        row.success_rate = row.trials ? static_cast<double>(successes) / row.trials : kNaN;
        row.support_correct_pct = mean_of(correct);
        row.support_extra_mean = mean_of(extra);
        row.mean_time = mean_of(times);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

Crossing find_crossing(const std::vector<double>& fractions, const std::vector<double>& rates) {
  if (fractions.size() != rates.size() || fractions.empty()) {
    throw std::invalid_argument("find_crossing: grid and rates must be non-empty and equal length");
  }
  Crossing c;
  for (std::size_t i = 0; i + 1 < rates.size(); ++i) {
    if (rates[i] >= 0.5 && rates[i + 1] < 0.5) {
      const double t = (rates[i] - 0.5) / (rates[i] - rates[i + 1]);
      c.fraction = fractions[i] + t * (fractions[i + 1] - fractions[i]);
      c.status = "crossed";
      return c;
    }
  }
  c.fraction = kNaN;
  const bool all_above = std::all_of(rates.begin(), rates.end(), [](double r) { return r >= 0.5; });
  const bool all_below = std::all_of(rates.begin(), rates.end(), [](double r) { return r < 0.5; });
  c.status = all_above ? "above_all" : all_below ? "below_all" : "no_crossing";
  return c;
}

BenchResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  BenchResult res;
  res.config = cfg;
  res.groups = groups(cfg);
  const std::vector<double> fractions = effective_fractions(cfg);

  bool bound_only = false;
  if (wants_theory(cfg)) {
    for (const Group& g : res.groups) {
      Index max_s = 0;
      for (double f : fractions) max_s = std::max(max_s, outlier_count(f, g.n));
      try {
        theory::check_budget(g.n, std::max<Index>(max_s, 1), cfg.budget);
      } catch (const theory::BudgetExceededError& e) {
        if (cfg.experiment == Experiment::kCertify) throw;
        bound_only = true;
        res.warnings.push_back(std::string(e.what()) + "; reporting bounds only");
      }
    }
  }

  const std::size_t nf = fractions.size();
  const auto per_group = nf * static_cast<std::size_t>(cfg.trials);
  const std::size_t tasks = res.groups.size() * per_group;
  std::vector<TaskResult> slots(tasks);
  parallel_for(tasks, cfg.workers, [&](std::size_t i) {
    const std::size_t g = i / per_group;
    const std::size_t f = (i % per_group) / static_cast<std::size_t>(cfg.trials);
    const int t = static_cast<int>(i % static_cast<std::size_t>(cfg.trials));
    TaskResult& slot = slots[i];
    std::optional<datagen::Instance> inst;
    std::string failure;
    try {
      inst = make_trial_instance(cfg, g, f, t);
    } catch (const datagen::RankRetryError& e) {
      failure = csv_safe(e.what());
    }
    for (Method method : cfg.methods) {
      TrialOutcome o;
      if (inst) {
        o = run_method(cfg, method, *inst, res.groups[g]);
      } else {
        o.method = method;
        o.status = "failed";
        o.reason = failure;
        o.sq_err = o.rel_err = o.support_correct_pct = o.support_extra_count = kNaN;
      }
      o.group_index = g;
      o.fraction_index = f;
      o.trial_index = t;
      slot.outcomes.push_back(std::move(o));
    }
    if (inst && wants_theory(cfg)) {
      TheoryRecord rec = theory_record(cfg, *inst, bound_only);
      rec.group_index = g;
      rec.fraction_index = f;
      rec.trial_index = t;
      slot.theory = rec;
    }
  });

  for (TaskResult& slot : slots) {
    for (TrialOutcome& o : slot.outcomes) res.trials.push_back(std::move(o));
    if (slot.theory) res.theory.push_back(*slot.theory);
  }
  res.summary = summarize(cfg, res.groups, res.trials);

  if (cfg.experiment == Experiment::kPhase) {
    for (std::size_t g = 0; g < res.groups.size(); ++g) {
      for (Method method : cfg.methods) {
        std::vector<double> rates;
        for (const SummaryRow& row : res.summary)
          if (row.group_index == g && row.method == method) rates.push_back(row.success_rate);
        Crossing c = find_crossing(fractions, rates);
        c.group_index = g;
        c.method = method;
        res.crossings.push_back(c);
      }
    }
  }
  return res;
}

std::vector<std::filesystem::path> write_outputs(const BenchResult& res, const std::filesystem::path& out) {
  const ExperimentConfig& cfg = res.config;
  const std::vector<double> fractions = effective_fractions(cfg);
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  auto sibling = [&](const std::string& suffix) {
    std::filesystem::path p = out;
    p += suffix;
    return p;
  };
  std::vector<std::filesystem::path> written;

  {
    const auto file = sibling("_trials.csv");
    CsvWriter w(file, {"group", "n", "m", "fraction", "s", "trial", "method", "sq_err", "rel_err",
                       "support_correct_pct", "support_extra_count", "success", "iterations", "status", "reason",
                       "elapsed_seconds"});
    for (const TrialOutcome& t : res.trials) {
      const Group& g = res.groups[t.group_index];
      w.row({g.label, fmt(g.n), fmt(g.m), fmt(fractions[t.fraction_index]), fmt(t.s), fmt(t.trial_index),
             to_string(t.method), fmt(t.sq_err), fmt(t.rel_err), fmt(t.support_correct_pct),
             fmt(t.support_extra_count), fmt(t.success), fmt(t.iterations), t.status, t.reason,
             fmt(t.elapsed_seconds)});
    }
    written.push_back(file);
  }

  // Per-(group, fraction) theory means for the support table.
  auto theory_mean = [&](std::size_t g, std::size_t f, auto field) {
    std::vector<double> v;
    for (const TheoryRecord& r : res.theory)
      if (r.group_index == g && r.fraction_index == f) v.push_back(field(r));
    return mean_of(v);
  };
  const bool noisy_bounds =
      std::any_of(res.theory.begin(), res.theory.end(), [](const TheoryRecord& r) { return r.epsilon0 > 0.0; });

  {
    const auto file = sibling(".csv");
    std::vector<std::string> header;
    switch (cfg.experiment) {
      case Experiment::kScaling:
        header = {"n", "m", "fraction", "method", "trials", "failures", "mse", "mse_db", "success_rate", "mean_time"};
        break;
      case Experiment::kNoiseSuite:
        header = {"test", "n", "m", "method", "trials", "failures", "mse", "mse_db", "success_rate", "mean_time"};
        break;
      case Experiment::kPhase:
        header = {"m", "fraction", "method", "trials", "failures", "success_rate", "mse", "mean_time"};
        break;
      case Experiment::kSupport:
        header = {"fraction", "s", "method", "trials", "failures", "mse", "mse_db", "support_correct_pct",
                  "support_extra_mean", "bound_c", "delta_s", "guarantee_rate", "loose_bound_sq", "mode",
                  "mean_time"};
        break;
      default:
        header = {"fraction", "method", "trials", "failures", "mse", "mse_db", "success_rate",
                  "support_correct_pct", "support_extra_mean", "mean_time"};
    }
    CsvWriter w(file, header);
    for (const SummaryRow& r : res.summary) {
      const Group& g = res.groups[r.group_index];
      const double f = fractions[r.fraction_index];
      switch (cfg.experiment) {
        case Experiment::kScaling:
          w.row({fmt(g.n), fmt(g.m), fmt(f), to_string(r.method), fmt(r.trials), fmt(r.failures), fmt(r.mse),
                 fmt(r.mse_db), fmt(r.success_rate), fmt(r.mean_time)});
          break;
        case Experiment::kNoiseSuite:
          w.row({g.label, fmt(g.n), fmt(g.m), to_string(r.method), fmt(r.trials), fmt(r.failures), fmt(r.mse),
                 fmt(r.mse_db), fmt(r.success_rate), fmt(r.mean_time)});
          break;
        case Experiment::kPhase:
          w.row({fmt(g.m), fmt(f), to_string(r.method), fmt(r.trials), fmt(r.failures), fmt(r.success_rate),
                 fmt(r.mse), fmt(r.mean_time)});
          break;
        case Experiment::kSupport: {
          const std::size_t gi = r.group_index, fi = r.fraction_index;
          const double c = theory_mean(gi, fi, [&](const TheoryRecord& t) {
            return noisy_bounds ? t.bound_noisy_c : t.bound_noiseless_c;
          });
          const double delta = theory_mean(gi, fi, [](const TheoryRecord& t) { return t.delta_s; });
          const double flag = theory_mean(gi, fi, [](const TheoryRecord& t) {
            return t.s == 0 || t.bound_only ? kNaN : (t.guarantee ? 1.0 : 0.0);
          });
          const double loose = theory_mean(gi, fi, [](const TheoryRecord& t) {
            return t.error_bound_loose * t.error_bound_loose;
          });
          const bool bound_only = !res.theory.empty() && res.theory.front().bound_only;
          w.row({fmt(f), fmt(outlier_count(f, g.n)), to_string(r.method), fmt(r.trials), fmt(r.failures),
                 fmt(r.mse), fmt(r.mse_db), fmt(r.support_correct_pct), fmt(r.support_extra_mean), fmt(c),
                 fmt(delta), fmt(flag), fmt(loose), bound_only ? "bound_only" : "bruteforce", fmt(r.mean_time)});
          break;
        }
        default:
          w.row({fmt(f), to_string(r.method), fmt(r.trials), fmt(r.failures), fmt(r.mse), fmt(r.mse_db),
                 fmt(r.success_rate), fmt(r.support_correct_pct), fmt(r.support_extra_mean), fmt(r.mean_time)});
      }
    }
    written.push_back(file);
  }

  if (!res.theory.empty()) {
    const auto file = sibling("_theory.csv");
    CsvWriter w(file, {"fraction", "trial", "s", "epsilon0", "mode", "delta_s", "mu_s", "omega_s_degrees", "bound_noiseless_c",
                       "bound_noisy_c", "tau", "sigma_min_lower", "error_bound_tight", "error_bound_loose",
                       "guarantee", "d"});
    for (const TheoryRecord& t : res.theory) {
      w.row({fmt(fractions[t.fraction_index]), fmt(t.trial_index), fmt(t.s), fmt(t.epsilon0), t.bound_only ? "bound_only" : "bruteforce",
             fmt(t.delta_s), fmt(t.mu_s), fmt(t.omega_s_degrees), fmt(t.bound_noiseless_c), fmt(t.bound_noisy_c),
             fmt(t.tau), fmt(std::sqrt(1.0 - t.delta_s)), fmt(t.error_bound_tight), fmt(t.error_bound_loose),
             fmt(t.guarantee), fmt(t.d)});
    }
    written.push_back(file);
  }

  if (!res.crossings.empty()) {
    const auto file = sibling("_crossings.csv");
    CsvWriter w(file, {"m", "method", "crossing_fraction", "status"});
    for (const Crossing& c : res.crossings) {
      w.row({fmt(res.groups[c.group_index].m), to_string(c.method), fmt(c.fraction), c.status});
    }
    written.push_back(file);
  }

  const auto json_file = sibling(".json");
  nlohmann::ordered_json prov;
  prov["software"] = "gard-bench";
  prov["version"] = kVersion;
  prov["experiment"] = to_string(cfg.experiment);
  prov["master_seed"] = cfg.master_seed;
  prov["config"] = nlohmann::ordered_json::parse(config_to_json(cfg));
  prov["warnings"] = res.warnings;
  std::vector<std::string> names;
  for (const auto& p : written) names.push_back(p.filename().string());
  prov["outputs"] = names;
  std::ofstream(json_file) << prov.dump(2) << '\n';
  written.push_back(json_file);
  return written;
}

}  // namespace gard::bench
