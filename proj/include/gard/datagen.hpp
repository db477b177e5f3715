#pragma once

#include "gard/rng.hpp"
#include "gard/types.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

// Seeded synthetic instances: hypercube design matrices, Gaussian coefficient
// vectors, impulsive +-magnitude outliers and several inlier-noise families.
namespace gard::datagen {

struct NoInlier {};

/// N(0, sigma^2) entries; with truncate_to set, the largest entries are
/// clipped so that |eta|_2 <= truncate_to.
struct GaussianInlier {
  double sigma = 1.0;
  std::optional<double> truncate_to;
};

/// Gaussian inliers whose power sits snr_db below |X theta0|^2.
struct SnrGaussianInlier {
  double snr_db = 20.0;
};

/// Symmetric-or-skewed stable S(alpha, beta, gamma, delta).
struct StableParams {
  double alpha = 2.0;
  double beta = 0.0;
  double gamma = 1.0;
  double delta = 0.0;

  void validate() const;
};

/// Sum of two independent zero-mean Gaussians.
struct TwoGaussianMix {
  double sigma1 = 0.6;
  double sigma2 = 0.8;
};

using InlierModel = std::variant<NoInlier, GaussianInlier, SnrGaussianInlier, StableParams, TwoGaussianMix>;

enum class OutlierSign { kRandom, kFixed };

struct GenConfig {
  Index n = 0;
  Index m = 0;
  Index s = 0;
  double hypercube_halfwidth = 1.0;
  double theta_std = 5.0;
  double outlier_magnitude = 25.0;
  OutlierSign outlier_sign = OutlierSign::kRandom;
  InlierModel inlier = NoInlier{};
  /// When set, theta0 is rescaled so that |X theta0|_inf is the band midpoint.
  std::optional<std::pair<double, double>> y0_peak_band;
  /// Overrides the epsilon0 attached to the generated problem.
  std::optional<double> epsilon0;
  std::uint64_t seed = 0;
  int max_rank_retries = 16;

  void validate() const;
};

class RankRetryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Instance {
  RegressionProblem problem;
  GroundTruth truth;
};

/// epsilon0 on the returned problem: the override when given, else the
/// truncation bound, sigma sqrt(n) for Gaussian families (the expected inlier
/// norm), and 0 for no or stable inliers.
Instance gen_instance(const GenConfig& cfg);

/// Chambers-Mallows-Stuck variate. Throws std::invalid_argument on bad params.
double sample_alpha_stable(const StableParams& p, Rng& rng);

/// Clips the largest-magnitude entries to a common level so that |eta|_2 <= bound.
void truncate_to_norm(Vector& eta, double bound);

enum class NoiseTest { kA, kB, kC, kD };

NoiseTest parse_noise_test(const std::string& tag);
std::string to_string(NoiseTest t);
/// Stable parameters of tests A-C; throws for D.
StableParams noise_test_stable_params(NoiseTest t);

/// A: S(0.45, 0, 0.3, 0); B: S(0.4, 0, 0.1, 0); C: S(0.3, 0, 0.1, 0);
/// D: N(0, 0.6^2) + N(0, 0.8^2) plus +-25 impulses on ceil(0.1 n) indices.
Vector gen_noise_suite(NoiseTest test, Index n, std::uint64_t seed);

/// Number of impulses used by test D.
inline Index noise_d_impulses(Index n) { return (n + 9) / 10; }

}  // namespace gard::datagen
