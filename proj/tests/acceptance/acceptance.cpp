// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "gard/bench.hpp"
#include "gard/datagen.hpp"
#include "gard/gard.hpp"
#include "gard/linalg.hpp"
#include "gard/rng.hpp"
#include "gard/theory.hpp"
#include "l0_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace gard;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

std::vector<Index> sorted(std::vector<Index> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// 1. Noiseless instances with delta_s below the noiseless bound.
Outcome exact_recovery() {
  int flagged = 0, bad = 0, tried = 0;
  for (std::uint64_t seed = 0; flagged < 500 && tried < 20000; ++seed, ++tried) {
    datagen::GenConfig cfg;
    cfg.n = 30;
    cfg.m = 5;
    cfg.s = 1 + static_cast<Index>(seed % 3);
    cfg.seed = derive_seed(1, {1, seed});
    const auto inst = datagen::gen_instance(cfg);
    const theory::TheoryReport r = theory::certify(inst.problem, inst.truth, cfg.s);
    if (!r.noiseless_guarantee) continue;
    ++flagged;
    const GardResult g = gard_solve(inst.problem);
    const bool ok = sorted(g.support) == inst.truth.u0.indices() &&
                    (g.theta_star - inst.truth.theta0).norm() <= 1e-8;
    if (!ok) ++bad;
  }
  return {flagged >= 500 && bad == 0,
          format("%d flagged of %d instances, %d counterexamples", flagged, tried, bad)};
}

// 2. Noisy instances with delta_s below the noisy bound.
Outcome noisy_recovery() {
  int flagged = 0, bad = 0, tried = 0;
  double worst_ratio = 0.0;
  const double eps0 = 0.5;
  for (std::uint64_t seed = 0; flagged < 200 && tried < 20000; ++seed, ++tried) {
    datagen::GenConfig cfg;
    cfg.n = 30;
    cfg.m = 5;
    cfg.s = 1 + static_cast<Index>(seed % 2);
    cfg.inlier = datagen::GaussianInlier{0.1, eps0};
    cfg.seed = derive_seed(2, {2, seed});
    const auto inst = datagen::gen_instance(cfg);
    double min_u = inst.truth.u0.values().empty() ? 0.0 : 1e300;
    for (double v : inst.truth.u0.values()) min_u = std::min(min_u, std::abs(v));
    if (!(min_u > (2.0 + std::sqrt(6.0)) * inst.problem.epsilon0)) continue;
    const theory::TheoryReport r = theory::certify(inst.problem, inst.truth, cfg.s);
    if (!r.noisy_guarantee.value_or(false)) continue;
    ++flagged;
    const GardResult g = gard_solve(inst.problem);
    const double err = (g.theta_star - inst.truth.theta0).norm();
    worst_ratio = std::max(worst_ratio, err / *r.error_bound_loose);
    if (sorted(g.support) != inst.truth.u0.indices() || err > *r.error_bound_loose) ++bad;
  }
  return {flagged >= 200 && bad == 0, format("%d flagged of %d instances, %d counterexamples, max err/bound %.3f",
                                             flagged, tried, bad, worst_ratio)};
}

// 4. Naive and Cholesky engines.
Outcome engines_agree() {
  Rng rng(4);
  int bad = 0;
  double worst = 0.0;
  const int count = 200;
  for (int i = 0; i < count; ++i) {
    datagen::GenConfig cfg;
    cfg.n = rng.uniform_int(20, 300);
    cfg.m = std::min<Index>(rng.uniform_int(2, 50), cfg.n / 3);
    cfg.s = rng.uniform_int(0, cfg.n / 5);
    if (i % 2) cfg.inlier = datagen::GaussianInlier{0.5, std::nullopt};
    cfg.seed = derive_seed(4, {static_cast<std::uint64_t>(i)});
    const auto inst = datagen::gen_instance(cfg);
    const GardResult a = gard_solve(inst.problem, {Engine::kNaive, std::nullopt});
    const GardResult b = gard_solve(inst.problem, {Engine::kCholesky, std::nullopt});
    const double diff = std::max((a.theta_star - b.theta_star).cwiseAbs().maxCoeff(),
                                 (a.u_star.to_dense() - b.u_star.to_dense()).cwiseAbs().maxCoeff());
    worst = std::max(worst, diff);
    if (a.support != b.support || diff > 1e-8) ++bad;
  }
  return {bad == 0, format("%d instances, %d disagreements, max diff %.2e", count, bad, worst)};
}

// 5. Exhaustive minimum-support decomposition. Mismatches are also checked
// against the noiseless certificate, which should never flag one.
Outcome l0_oracle() {
  Rng rng(5);
  int bad = 0, checked = 0, bad_flagged = 0;
  double worst = 0.0;
  for (int i = 0; checked < 150; ++i) {
    datagen::GenConfig cfg;
    cfg.n = rng.uniform_int(8, 12);
    cfg.m = rng.uniform_int(1, 3);
    cfg.s = rng.uniform_int(0, 2);
    cfg.seed = derive_seed(5, {static_cast<std::uint64_t>(i)});
    const auto inst = datagen::gen_instance(cfg);
    const auto oracle = gard::testing::l0_decompose(inst.problem.x, inst.problem.y, 2);
    if (!oracle) continue;
    ++checked;
    const GardResult g = gard_solve(inst.problem);
    const double diff = std::max((g.theta_star - oracle->theta).cwiseAbs().maxCoeff(),
                                 (g.u_star.to_dense() - oracle->u).cwiseAbs().maxCoeff());
    worst = std::max(worst, diff);
    if (sorted(g.support) == oracle->support && diff <= 1e-8) continue;
    ++bad;
    if (cfg.s > 0 && theory::certify(inst.problem, inst.truth, cfg.s).noiseless_guarantee) ++bad_flagged;
  }
  return {checked >= 100 && bad == 0,
          format("%d instances, %d mismatches (%d of them certificate-flagged), max diff %.2e", checked, bad,
                 bad_flagged, worst)};
}

// 6. delta_s against the RIP constant and the singular-value bound.
Outcome rip_coincidence() {
  Rng rng(6);
  int bad = 0, subsets = 0;
  double worst = 0.0;
  const int count = 60;
  for (int i = 0; i < count; ++i) {
    const Index n = rng.uniform_int(6, 16);
    const Index m = rng.uniform_int(1, 4);
    const Index s = rng.uniform_int(1, 3);
    Matrix a(n, m);
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < m; ++c) a(r, c) = rng.normal(0.0, 1.0);
    const Matrix q = linalg::qr_reduced(a).q;
    const double delta = theory::delta_s_bruteforce(q, s);
    const double mu = theory::rip_constant(q, s);
    worst = std::max(worst, std::abs(delta - mu));
    if (std::abs(delta - mu) > 1e-9) ++bad;
    theory::for_each_subset(n, s, [&](std::span<const Index> sub) {
      Matrix b = Matrix::Zero(n, m + s);
      b.leftCols(m) = q;
      for (Index k = 0; k < s; ++k) b(sub[static_cast<std::size_t>(k)], m + k) = 1.0;
      ++subsets;
      if (linalg::singular_values(b).back() < std::sqrt(1.0 - delta) - 1e-9) ++bad;
    });
  }
  return {bad == 0, format("%d matrices, %d subsets, max |delta - mu| %.2e, %d violations", count, subsets, worst,
                           bad)};
}

std::string method_means(const bench::BenchResult& res, std::size_t g, std::size_t f) {
  std::string out;
  for (const bench::SummaryRow& r : res.summary) {
    if (r.group_index != g || r.fraction_index != f) continue;
    out += format("%s %.4g ", bench::to_string(r.method).c_str(), r.mse);
  }
  if (!out.empty()) out.pop_back();
  return out;
}

double mse_of(const bench::BenchResult& res, std::size_t g, std::size_t f, bench::Method m) {
  for (const bench::SummaryRow& r : res.summary)
    if (r.group_index == g && r.fraction_index == f && r.method == m) return r.mse;
  return std::nan("");
}

// 7. MSE versus outlier fraction.
Outcome mse_trend() {
  bench::ExperimentConfig cfg = bench::preset("mse-desk");
  cfg.fractions = {0.05, 0.10, 0.15, 0.20, 0.25};
  const bench::BenchResult res = bench::run_experiment(cfg);
  bool pass = true;
  std::string detail;
  for (std::size_t f = 0; f < cfg.fractions.size(); ++f) {
    const double gard_mse = mse_of(res, 0, f, bench::Method::kGard);
    if (cfg.fractions[f] <= 0.20 + 1e-12) {
      for (bench::Method m : cfg.methods) {
        if (m == bench::Method::kGard) continue;
        if (!(gard_mse <= mse_of(res, 0, f, m))) pass = false;
      }
    }
    detail += format("%s%.0f%%: %s", f ? "; " : "", 100 * cfg.fractions[f], method_means(res, 0, f).c_str());
  }
  return {pass, detail};
}

// 8. Heavy-tailed Tests A and D.
Outcome noise_suite_order() {
  bench::ExperimentConfig cfg = bench::preset("noise-suite-desk");
  cfg.noise_tests = {datagen::NoiseTest::kA, datagen::NoiseTest::kD};
  const bench::BenchResult res = bench::run_experiment(cfg);
  bool pass = true;
  std::string detail;
  for (std::size_t g = 0; g < res.groups.size(); ++g) {
    const double gard_mse = mse_of(res, g, 0, bench::Method::kGard);
    for (bench::Method m : {bench::Method::kMEst, bench::Method::kAdmm})
      if (!(gard_mse < mse_of(res, g, 0, m))) pass = false;
    detail += format("%sTest %s: %s", g ? "; " : "", res.groups[g].label.c_str(), method_means(res, g, 0).c_str());
  }
  return {pass, detail};
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

// 9. Stable sampler reductions.
Outcome sampler() {
  const std::size_t count = 100000;
  const double gamma = 0.7;
  Rng rng(9), ref_rng(90);
  std::vector<double> draws(count), ref(count);
  for (std::size_t i = 0; i < count; ++i) {
    draws[i] = datagen::sample_alpha_stable({2.0, 0.0, gamma, 0.0}, rng);
    ref[i] = ref_rng.normal(0.0, gamma * std::sqrt(2.0));
  }
  const double ks = ks_statistic(draws, ref);
  const double critical = 1.628 * std::sqrt(2.0 / count);

  const double loc = 1.5, scale = 0.4;
  for (double& v : draws) v = datagen::sample_alpha_stable({1.0, 0.0, scale, loc}, rng);
  std::sort(draws.begin(), draws.end());
  const double median = draws[count / 2];
  const double iqr = 2.0 * scale;
  const double tol = 3.0 * iqr / std::sqrt(static_cast<double>(count));
  const bool pass = ks < critical && std::abs(median - loc) <= tol;
  return {pass, format("alpha=2 KS %.5f (1%% critical %.5f); alpha=1 median %.5f vs %.2f (tol %.5f)", ks, critical,
                       median, loc, tol)};
}

std::string read_without_timing(const std::filesystem::path& file) {
  std::ifstream in(file);
  std::string line, out;
  bool timed = false;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      timed = line.ends_with("time") || line.ends_with("elapsed_seconds");
      header = false;
    }
    if (timed) line = line.substr(0, line.rfind(','));
    out += line + '\n';
  }
  return out;
}

// 10. Byte-identical CSV across runs and worker counts.
Outcome reproducibility(const std::filesystem::path& dir) {
  int compared = 0, bad = 0;
  for (const char* name :
       {"mse-ci", "scaling-ci", "support-noiseless-ci", "phase-ci", "noise-suite-ci", "certify-ci"}) {
    bench::ExperimentConfig cfg = bench::preset(name);
    cfg.trials = 2;
    if (cfg.experiment == bench::Experiment::kSupport) cfg.fractions = {0.0, 1.0 / 30, 2.0 / 30};
    std::vector<std::vector<std::filesystem::path>> runs;
    for (unsigned workers : {1u, 1u, 3u}) {
      cfg.workers = workers;
      const auto out = dir / (std::string(name) + "_" + std::to_string(runs.size()));
      runs.push_back(bench::write_outputs(bench::run_experiment(cfg), out));
    }
    for (std::size_t k = 0; k < runs[0].size(); ++k) {
      if (runs[0][k].extension() != ".csv") continue;
      const std::string ref = read_without_timing(runs[0][k]);
      for (std::size_t r = 1; r < runs.size(); ++r) {
        ++compared;
        if (runs[r].size() != runs[0].size() || read_without_timing(runs[r][k]) != ref) ++bad;
      }
    }
  }
  return {bad == 0, format("%d CSV comparisons over 6 subcommands (workers 1, 1, 3), %d differ", compared, bad)};
}

// 3. Runs after every other criterion so it covers all of them.
Outcome invariants() {
  const InvariantTally t = invariant_tally();
  return {t.runs > 0 && t.violations == 0,
          format("%llu gard_solve runs in this binary, %llu violations", static_cast<unsigned long long>(t.runs),
                 static_cast<unsigned long long>(t.violations))};
}

}  // namespace

int main() {
  const auto dir = std::filesystem::temp_directory_path() / "gard_acceptance";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 exact recovery when delta_s < noiseless bound", exact_recovery},
      {"2 support and error bound when delta_s < noisy bound", noisy_recovery},
      {"4 naive and Cholesky engines agree", engines_agree},
      {"5 GARD matches exhaustive l0 decomposition", l0_oracle},
      {"6 delta_s equals RIP constant, singular-value bound", rip_coincidence},
      {"7 MSE sweep: GARD lowest at fractions <= 20%", mse_trend},
      {"8 noise suite A and D: GARD below M-est and ADMM", noise_suite_order},
      {"9 stable sampler reductions", sampler},
      {"10 reproducible CSV across runs and workers", [&] { return reproducibility(dir); }},
      {"3 convergence invariants", invariants},
  };

  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("[%s] %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
