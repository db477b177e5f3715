#include "gard/datagen.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace gard;
using namespace gard::datagen;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> draws(const StableParams& p, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(count);
  for (double& v : out) v = sample_alpha_stable(p, rng);
  std::sort(out.begin(), out.end());
  return out;
}

double quantile(const std::vector<double>& sorted, double p) {
  return sorted[static_cast<std::size_t>(p * static_cast<double>(sorted.size() - 1))];
}

// CDF of a symmetric stable law S(alpha, 0, gamma, 0) from its characteristic
// function exp(-(gamma t)^alpha): F(x) = 1/2 + (1/pi) int_0^inf sin(tx) phi(t)/t dt.
// Composite Simpson on a fine panel near 0 and a coarser one further out.
double stable_cdf(double x, double alpha, double gamma) {
  auto f = [&](double t) {
    if (t == 0.0) return x;
    return std::sin(t * x) * std::exp(-std::pow(gamma * t, alpha)) / t;
  };
  auto simpson = [&](double a, double b, int panels) {
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return sum * h / 3.0;
  };
  const double tail = std::pow(25.0, 1.0 / alpha) / gamma;  // phi < e^-25 beyond
  double integral = simpson(0.0, 1.0, 20000);
  for (double a = 1.0; a < tail; a *= 2.0) {
    const double b = std::min(2.0 * a, tail);
    const int panels = 2 * static_cast<int>(std::ceil((b - a) * std::abs(x) * 8.0 + 50));
    integral += simpson(a, b, panels);
  }
  return 0.5 + integral / kPi;
}

double normal_cdf(double x, double sd) { return 0.5 * std::erfc(-x / (sd * std::sqrt(2.0))); }

}  // namespace

TEST(GenInstance, CleanInstanceIsExact) {
  GenConfig cfg;
  cfg.n = 30;
  cfg.m = 4;
  cfg.seed = 1;
  const Instance inst = gen_instance(cfg);
  EXPECT_EQ(inst.problem.y, inst.problem.x * inst.truth.theta0);
  EXPECT_EQ(inst.truth.u0.nnz(), 0u);
  EXPECT_EQ(inst.problem.epsilon0, 0.0);
  EXPECT_LE(inst.problem.x.cwiseAbs().maxCoeff(), 1.0);
}

TEST(GenInstance, SameSeedIsBitIdentical) {
  GenConfig cfg;
  cfg.n = 50;
  cfg.m = 3;
  cfg.s = 7;
  cfg.seed = 99;
  cfg.inlier = StableParams{0.45, 0.0, 0.3, 0.0};
  const Instance a = gen_instance(cfg);
  const Instance b = gen_instance(cfg);
  EXPECT_EQ(a.problem.x, b.problem.x);
  EXPECT_EQ(a.problem.y, b.problem.y);
  EXPECT_EQ(a.truth.theta0, b.truth.theta0);
  EXPECT_EQ(a.truth.u0, b.truth.u0);
  EXPECT_EQ(a.truth.eta, b.truth.eta);
  cfg.seed = 100;
  EXPECT_NE(gen_instance(cfg).problem.y, a.problem.y);
}

TEST(GenInstance, OutlierSupportAndValues) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GenConfig cfg;
    cfg.n = 40;
    cfg.m = 5;
    cfg.s = static_cast<Index>(seed % 30);
    cfg.seed = seed;
    cfg.outlier_sign = seed % 2 ? OutlierSign::kFixed : OutlierSign::kRandom;
    const Instance inst = gen_instance(cfg);
    const auto& idx = inst.truth.u0.indices();
    EXPECT_EQ(static_cast<Index>(idx.size()), cfg.s);
    EXPECT_EQ(std::set<Index>(idx.begin(), idx.end()).size(), idx.size());
    for (double v : inst.truth.u0.values()) {
      EXPECT_EQ(std::abs(v), 25.0);
      if (cfg.outlier_sign == OutlierSign::kFixed) EXPECT_EQ(v, 25.0);
    }
    const Vector resid = inst.problem.y - inst.problem.x * inst.truth.theta0 - inst.truth.u0.to_dense();
    EXPECT_LE(resid.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(GenInstance, RandomSignsUseBothSigns) {
  GenConfig cfg;
  cfg.n = 200;
  cfg.m = 2;
  cfg.s = 100;
  cfg.seed = 5;
  const Instance inst = gen_instance(cfg);
  const auto& v = inst.truth.u0.values();
  const auto pos = std::count(v.begin(), v.end(), 25.0);
  EXPECT_GT(pos, 30);
  EXPECT_LT(pos, 70);
}

TEST(GenInstance, TruncatedGaussianRespectsBound) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenConfig cfg;
    cfg.n = 400;
    cfg.m = 5;
    cfg.s = 20;
    cfg.seed = seed;
    cfg.inlier = GaussianInlier{2.0, 28.0};
    const Instance inst = gen_instance(cfg);
    EXPECT_LE(inst.truth.eta.norm(), 28.0);
    EXPECT_EQ(inst.problem.epsilon0, 28.0);
  }
}

TEST(GenInstance, EpsilonDefaultsAndOverride) {
  GenConfig cfg;
  cfg.n = 100;
  cfg.m = 2;
  cfg.inlier = GaussianInlier{0.5, std::nullopt};
  EXPECT_DOUBLE_EQ(gen_instance(cfg).problem.epsilon0, 5.0);
  cfg.inlier = TwoGaussianMix{0.6, 0.8};
  EXPECT_DOUBLE_EQ(gen_instance(cfg).problem.epsilon0, 8.0);
  cfg.epsilon0 = 1.5;
  EXPECT_EQ(gen_instance(cfg).problem.epsilon0, 1.5);
}

TEST(GenInstance, SnrSetsNoiseLevel) {
  GenConfig cfg;
  cfg.n = 20000;
  cfg.m = 3;
  cfg.seed = 8;
  cfg.inlier = SnrGaussianInlier{20.0};
  const Instance inst = gen_instance(cfg);
  const Vector y0 = inst.problem.x * inst.truth.theta0;
  const double ratio_db = 20.0 * std::log10(y0.norm() / inst.truth.eta.norm());
  EXPECT_NEAR(ratio_db, 20.0, 0.1);
}

TEST(GenInstance, PeakBandScalesTheta) {
  GenConfig cfg;
  cfg.n = 60;
  cfg.m = 4;
  cfg.seed = 3;
  cfg.y0_peak_band = std::make_pair(10.0, 20.0);
  const Instance inst = gen_instance(cfg);
  EXPECT_NEAR((inst.problem.x * inst.truth.theta0).cwiseAbs().maxCoeff(), 15.0, 1e-12);
}

TEST(GenInstance, InvalidConfigs) {
  GenConfig cfg;
  cfg.n = 10;
  cfg.m = 3;
  cfg.s = 7;
  EXPECT_THROW((void)gen_instance(cfg), std::invalid_argument);
  cfg.s = 2;
  cfg.theta_std = 0.0;
  EXPECT_THROW((void)gen_instance(cfg), std::invalid_argument);
  cfg.theta_std = 5.0;
  cfg.inlier = GaussianInlier{-1.0, std::nullopt};
  EXPECT_THROW((void)gen_instance(cfg), std::invalid_argument);
  cfg.inlier = StableParams{2.5, 0.0, 1.0, 0.0};
  EXPECT_THROW((void)gen_instance(cfg), std::invalid_argument);
  cfg.inlier = NoInlier{};
  cfg.m = 10;
  EXPECT_THROW((void)gen_instance(cfg), std::invalid_argument);
}

TEST(TruncateToNorm, ClipsLargestEntriesOnly) {
  Vector eta(5);
  eta << 0.1, -10.0, 0.2, 6.0, -0.3;
  const Vector before = eta;
  truncate_to_norm(eta, 5.0);
  EXPECT_NEAR(eta.norm(), 5.0, 1e-12);
  for (Index i : {0, 2, 4}) EXPECT_EQ(eta(i), before(i));
  EXPECT_NEAR(std::abs(eta(1)), std::abs(eta(3)), 1e-12);
  EXPECT_LT(eta(1), 0.0);
  EXPECT_GT(eta(3), 0.0);

  Vector small(2);
  small << 1.0, 1.0;
  truncate_to_norm(small, 5.0);
  EXPECT_EQ(small, Vector::Ones(2));
  EXPECT_THROW(truncate_to_norm(small, -1.0), std::invalid_argument);
}

TEST(AlphaStable, AlphaTwoIsGaussian) {
  // Two-sample Kolmogorov-Smirnov against std::normal_distribution draws.
  const double gamma = 0.7;
  const std::size_t n = 100000;
  const std::vector<double> a = draws({2.0, 0.0, gamma, 0.0}, n, 11);
  std::mt19937_64 gen(12);
  std::normal_distribution<double> normal(0.0, gamma * std::sqrt(2.0));
  std::vector<double> b(n);
  for (double& v : b) v = normal(gen);
  std::sort(b.begin(), b.end());
  double ks = 0.0;
  std::size_t i = 0, j = 0;
  while (i < n && j < n) {
    if (a[i] <= b[j]) ++i;
    else ++j;
    ks = std::max(ks, std::abs(static_cast<double>(i) - static_cast<double>(j)) / static_cast<double>(n));
  }
  const double critical = 1.628 * std::sqrt(2.0 / static_cast<double>(n));  // alpha = 0.01
  EXPECT_LT(ks, critical);
}

TEST(AlphaStable, AlphaOneIsCauchy) {
  const double delta = 1.5;
  const double gamma = 0.4;
  const std::vector<double> v = draws({1.0, 0.0, gamma, delta}, 100000, 13);
  const double q1 = quantile(v, 0.25);
  const double q3 = quantile(v, 0.75);
  const double tol = 3.0 * (q3 - q1) / std::sqrt(static_cast<double>(v.size()));
  EXPECT_NEAR(quantile(v, 0.5), delta, tol);
  EXPECT_NEAR(q1, delta - gamma, tol);
  EXPECT_NEAR(q3, delta + gamma, tol);
}

TEST(AlphaStable, CdfOracleReproducesClosedForms) {
  for (double x : {-2.0, -0.3, 0.0, 0.4, 1.7}) {
    EXPECT_NEAR(stable_cdf(x, 1.0, 0.5), 0.5 + std::atan(x / 0.5) / kPi, 1e-4);
    EXPECT_NEAR(stable_cdf(x, 2.0, 0.5), normal_cdf(x, 0.5 * std::sqrt(2.0)), 1e-4);
  }
}

TEST(AlphaStable, HeavyTailQuantilesMatchNumericCdf) {
  for (const StableParams& p : {StableParams{0.45, 0.0, 0.3, 0.0}, StableParams{0.3, 0.0, 0.1, 0.0}}) {
    const std::vector<double> v = draws(p, 100000, 14);
    for (double prob : {0.25, 0.5, 0.75}) {
      EXPECT_NEAR(stable_cdf(quantile(v, prob), p.alpha, p.gamma), prob, 0.02) << "alpha " << p.alpha;
    }
  }
}

TEST(AlphaStable, SkewedAndBadParameters) {
  Rng rng(15);
  const StableParams skew{1.5, 1.0, 1.0, 0.0};
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(std::isfinite(sample_alpha_stable(skew, rng)));
  EXPECT_THROW((void)sample_alpha_stable({0.0, 0.0, 1.0, 0.0}, rng), std::invalid_argument);
  EXPECT_THROW((void)sample_alpha_stable({1.0, 2.0, 1.0, 0.0}, rng), std::invalid_argument);
  EXPECT_THROW((void)sample_alpha_stable({1.0, 0.0, 0.0, 0.0}, rng), std::invalid_argument);
}

TEST(NoiseSuite, TestDImpulseCount) {
  EXPECT_EQ(noise_d_impulses(10), 1);
  EXPECT_EQ(noise_d_impulses(11), 2);
  EXPECT_EQ(noise_d_impulses(1000), 100);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vector v = gen_noise_suite(NoiseTest::kD, 10, seed);
    EXPECT_EQ((v.array().abs() > 12.0).count(), 1);
  }
}

TEST(NoiseSuite, TestDGaussianPartHasUnitVariance) {
  const Index n = 100000;
  const Vector v = gen_noise_suite(NoiseTest::kD, n, 16);
  double sum = 0.0, sq = 0.0;
  Index count = 0;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(v(i)) > 12.0) continue;
    sum += v(i);
    sq += v(i) * v(i);
    ++count;
  }
  EXPECT_EQ(count, n - noise_d_impulses(n));
  const double mean = sum / count;
  EXPECT_NEAR(sq / count - mean * mean, 1.0, 0.02);
}

TEST(NoiseSuite, DeterministicAndParsed) {
  EXPECT_EQ(gen_noise_suite(NoiseTest::kA, 50, 4), gen_noise_suite(NoiseTest::kA, 50, 4));
  EXPECT_NE(gen_noise_suite(NoiseTest::kA, 50, 4), gen_noise_suite(NoiseTest::kA, 50, 5));
  for (const char* tag : {"A", "B", "C", "D"}) EXPECT_EQ(to_string(parse_noise_test(tag)), tag);
  EXPECT_THROW((void)parse_noise_test("E"), std::invalid_argument);
  EXPECT_EQ(noise_test_stable_params(NoiseTest::kB).alpha, 0.4);
  EXPECT_THROW((void)noise_test_stable_params(NoiseTest::kD), std::invalid_argument);
}

TEST(Rng, DerivedSeedsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t f = 0; f < 10; ++f)
    for (std::uint64_t t = 0; t < 10; ++t) seen.insert(derive_seed(42, {1, f, t}));
  EXPECT_EQ(seen.size(), 100u);
  EXPECT_EQ(derive_seed(42, {1, 2}), derive_seed(42, {1, 2}));
  EXPECT_NE(derive_seed(42, {1, 2}), derive_seed(42, {2, 1}));
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform_open(-1.0, 1.0);
    EXPECT_GT(u, -1.0);
    EXPECT_LT(u, 1.0);
  }
}
