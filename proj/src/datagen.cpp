#include "gard/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace gard::datagen {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// s distinct indices of 0..n-1, sorted (partial Fisher-Yates).
std::vector<Index> sample_support(Index n, Index s, Rng& rng) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < s; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(i, n - 1));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(s));
  std::sort(pool.begin(), pool.end());
  return pool;
}

Vector gaussian_vector(Index n, double sigma, Rng& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.normal(0.0, sigma);
  return v;
}

}  // namespace

void StableParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("stable: alpha must lie in (0, 2]");
  if (!(beta >= -1.0 && beta <= 1.0)) throw std::invalid_argument("stable: beta must lie in [-1, 1]");
  if (!(gamma > 0.0)) throw std::invalid_argument("stable: gamma must be > 0");
  if (!std::isfinite(delta)) throw std::invalid_argument("stable: delta must be finite");
}

void GenConfig::validate() const {
  if (m < 1 || n <= m) throw std::invalid_argument("GenConfig: need n > m >= 1");
  if (s < 0 || (s > 0 && s >= n - m)) throw std::invalid_argument("GenConfig: need 0 <= s < n - m");
  if (!(hypercube_halfwidth > 0.0) || !(theta_std > 0.0) || !(outlier_magnitude > 0.0)) {
    throw std::invalid_argument("GenConfig: scale parameters must be > 0");
  }
  if (epsilon0 && !(*epsilon0 >= 0.0)) throw std::invalid_argument("GenConfig: epsilon0 must be >= 0");
  if (y0_peak_band && !(y0_peak_band->first > 0.0 && y0_peak_band->first <= y0_peak_band->second)) {
    throw std::invalid_argument("GenConfig: y0 band must satisfy 0 < lo <= hi");
  }
  std::visit(Overloaded{
                 [](const NoInlier&) {},
                 [](const GaussianInlier& g) {
                   if (!(g.sigma > 0.0)) throw std::invalid_argument("GenConfig: sigma must be > 0");
                   if (g.truncate_to && !(*g.truncate_to > 0.0)) {
                     throw std::invalid_argument("GenConfig: truncation bound must be > 0");
                   }
                 },
                 [](const SnrGaussianInlier& g) {
                   if (!std::isfinite(g.snr_db)) throw std::invalid_argument("GenConfig: snr must be finite");
                 },
                 [](const StableParams& p) { p.validate(); },
                 [](const TwoGaussianMix& g) {
                   if (!(g.sigma1 > 0.0) || !(g.sigma2 > 0.0)) {
                     throw std::invalid_argument("GenConfig: mixture sigmas must be > 0");
                   }
                 },
             },
             inlier);
}

double sample_alpha_stable(const StableParams& p, Rng& rng) {
  p.validate();
  const double u = rng.uniform_open(-kPi / 2.0, kPi / 2.0);
  const double w = rng.exponential();
  const double a = p.alpha;
  double x = 0.0;
  if (a == 1.0) {
    const double half_pi = kPi / 2.0;
    const double h = half_pi + p.beta * u;
    x = (2.0 / kPi) * (h * std::tan(u) - p.beta * std::log(half_pi * w * std::cos(u) / h));
    return p.gamma * x + (2.0 / kPi) * p.beta * p.gamma * std::log(p.gamma) + p.delta;
  }
  if (p.beta == 0.0) {
    x = std::sin(a * u) / std::pow(std::cos(u), 1.0 / a) *
        std::pow(std::cos((1.0 - a) * u) / w, (1.0 - a) / a);
  } else {
    const double t = p.beta * std::tan(kPi * a / 2.0);
    const double b = std::atan(t) / a;
    const double scale = std::pow(1.0 + t * t, 1.0 / (2.0 * a));
    x = scale * std::sin(a * (u + b)) / std::pow(std::cos(u), 1.0 / a) *
        std::pow(std::cos(u - a * (u + b)) / w, (1.0 - a) / a);
  }
  return p.gamma * x + p.delta;
}

void truncate_to_norm(Vector& eta, double bound) {
  if (!(bound >= 0.0)) throw std::invalid_argument("truncate_to_norm: bound must be >= 0");
  if (eta.norm() <= bound) return;
  // Water-fill: find level t with sum_i min(|eta_i|, t)^2 = bound^2.
  std::vector<double> mags(static_cast<std::size_t>(eta.size()));
  for (Index i = 0; i < eta.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(eta(i));
  std::sort(mags.begin(), mags.end());
  const std::size_t n = mags.size();
  double below = 0.0;  // sum of squares of entries left unclipped
  double level = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double clipped = static_cast<double>(n - k);
    // Entries k..n-1 clipped at t, with t in [mags[k-1], mags[k]].
    const double t = std::sqrt(std::max(0.0, bound * bound - below) / clipped);
    const double lo = k == 0 ? 0.0 : mags[k - 1];
    if (t >= lo && t <= mags[k]) {
      level = t;
      break;
    }
    below += mags[k] * mags[k];
  }
  for (Index i = 0; i < eta.size(); ++i) eta(i) = std::clamp(eta(i), -level, level);
  // Rounding can leave the norm a few ulps above the bound.
  while (eta.norm() > bound) eta *= std::nextafter(bound / eta.norm(), 0.0);
}

Instance gen_instance(const GenConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const Index n = cfg.n;
  const Index m = cfg.m;
  const double h = cfg.hypercube_halfwidth;

  Matrix x(n, m);
  for (int attempt = 0;; ++attempt) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < m; ++j) x(i, j) = rng.uniform(-h, h);
    }
    try {
      (void)linalg::qr_reduced(x);
      break;
    } catch (const linalg::LinalgError&) {
      if (attempt + 1 >= cfg.max_rank_retries) {
        throw RankRetryError("gen_instance: no full-rank design after " +
                             std::to_string(cfg.max_rank_retries) + " attempts");
      }
    }
  }

  Instance out;
  out.truth.theta0 = gaussian_vector(m, cfg.theta_std, rng);
  if (cfg.y0_peak_band) {
    const double peak = (x * out.truth.theta0).cwiseAbs().maxCoeff();
    const double target = 0.5 * (cfg.y0_peak_band->first + cfg.y0_peak_band->second);
    if (peak > 0.0) out.truth.theta0 *= target / peak;
  }
  const Vector y0 = x * out.truth.theta0;

  std::vector<Index> support = sample_support(n, cfg.s, rng);
  std::vector<double> values;
  values.reserve(support.size());
  for (std::size_t k = 0; k < support.size(); ++k) {
    const bool negative = cfg.outlier_sign == OutlierSign::kRandom && rng.coin();
    values.push_back(negative ? -cfg.outlier_magnitude : cfg.outlier_magnitude);
  }
  out.truth.u0 = SparseVector(n, std::move(support), std::move(values));

  double eps0 = 0.0;
  out.truth.eta = std::visit(
      Overloaded{
          [&](const NoInlier&) -> Vector { return Vector::Zero(n); },
          [&](const GaussianInlier& g) -> Vector {
            Vector eta = gaussian_vector(n, g.sigma, rng);
            if (g.truncate_to) {
              truncate_to_norm(eta, *g.truncate_to);
              eps0 = *g.truncate_to;
            } else {
              eps0 = g.sigma * std::sqrt(static_cast<double>(n));
            }
            return eta;
          },
          [&](const SnrGaussianInlier& g) -> Vector {
            const double sigma = y0.norm() / (std::sqrt(static_cast<double>(n)) * std::pow(10.0, g.snr_db / 20.0));
            eps0 = sigma * std::sqrt(static_cast<double>(n));
            return gaussian_vector(n, sigma, rng);
          },
          [&](const StableParams& p) -> Vector {
            Vector eta(n);
            for (Index i = 0; i < n; ++i) eta(i) = sample_alpha_stable(p, rng);
            return eta;
          },
          [&](const TwoGaussianMix& g) -> Vector {
            Vector a = gaussian_vector(n, g.sigma1, rng);
            Vector b = gaussian_vector(n, g.sigma2, rng);
            eps0 = std::max(g.sigma1, g.sigma2) * std::sqrt(static_cast<double>(n));
            return a + b;
          },
      },
      cfg.inlier);

  out.problem.x = std::move(x);
  out.problem.y = y0 + out.truth.u0.to_dense() + out.truth.eta;
  out.problem.epsilon0 = cfg.epsilon0.value_or(eps0);
  return out;
}

NoiseTest parse_noise_test(const std::string& tag) {
  if (tag == "A") return NoiseTest::kA;
  if (tag == "B") return NoiseTest::kB;
  if (tag == "C") return NoiseTest::kC;
  if (tag == "D") return NoiseTest::kD;
  throw std::invalid_argument("unknown noise test '" + tag + "' (expected A, B, C or D)");
}

std::string to_string(NoiseTest t) {
  switch (t) {
    case NoiseTest::kA:
      return "A";
    case NoiseTest::kB:
      return "B";
    case NoiseTest::kC:
      return "C";
    case NoiseTest::kD:
      return "D";
  }
  return "?";
}

StableParams noise_test_stable_params(NoiseTest t) {
  switch (t) {
    case NoiseTest::kA:
      return {0.45, 0.0, 0.3, 0.0};
    case NoiseTest::kB:
      return {0.4, 0.0, 0.1, 0.0};
    case NoiseTest::kC:
      return {0.3, 0.0, 0.1, 0.0};
    case NoiseTest::kD:
      break;
  }
  throw std::invalid_argument("noise test D is not a stable law");
}

Vector gen_noise_suite(NoiseTest test, Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_noise_suite: n must be >= 1");
  Rng rng(seed);
  if (test != NoiseTest::kD) {
    const StableParams p = noise_test_stable_params(test);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = sample_alpha_stable(p, rng);
    return v;
  }
  Vector v = gaussian_vector(n, 0.6, rng) + gaussian_vector(n, 0.8, rng);
  for (Index i : sample_support(n, noise_d_impulses(n), rng)) v(i) += rng.coin() ? -25.0 : 25.0;
  return v;
}

}  // namespace gard::datagen
