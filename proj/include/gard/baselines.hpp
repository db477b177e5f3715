#pragma once

#include "gard/types.hpp"

#include <optional>
#include <stdexcept>
#include <span>
#include <vector>

// Reference estimators used as competitors in the benchmarks: a Tukey-biweight
// M-estimator solved by IRLS, robust orthogonal matching pursuit (ROMP), and
// ADMM on the generalized lasso with an l1 penalty on the outlier block.
namespace gard::baselines {

/// Consistency constant turning the MAD into a Gaussian scale estimate.
inline constexpr double kMadToSigma = 0.6745;
/// Scale floor, so exact fits do not divide by zero.
inline constexpr double kScaleFloor = 1e-8;

struct IrlsConfig {
  double tuning_c = 4.685;
  int max_iters = 100;
  double param_tol = 1e-6;
  /// When set, residuals are scaled by this constant instead of the
  /// per-iteration MAD / 0.6745 estimate (ROMP: the raw MAD used for atom
  /// selection). A fixed-scale fit starts from the converged MAD-scale fit.
  std::optional<double> fixed_scale;

  void validate() const;
};

struct MEstimate {
  Vector theta;
  Vector weights;
  int iterations = 0;
};

struct RompResult {
  Vector theta;  // full m-vector; unselected atoms are zero
  std::vector<Index> selected_atoms;
  int iterations = 0;
};

struct AdmmConfig {
  double lambda = 1.2;
  double rho0 = 1e-4;
  double rho_growth = 1.1;
  double rho_cap = 5.0;
  double stop_tol = 1e-4;
  int max_iters = 5000;

  void validate() const;
};

struct AdmmResult {
  Vector theta;
  SparseVector u;  // entries with |u_i| < 1e-6 dropped
  int iterations = 0;
  bool max_iters_reached = false;
};

/// Raised when every IRLS weight vanishes.
class DegenerateWeightsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Median absolute deviation; even lengths use the midpoint of the two
/// central order statistics. Throws std::invalid_argument on empty input.
double mad(std::span<const double> v);
double median(std::span<const double> v);

/// Tukey bisquare weight psi(r)/r = (1 - (r/c)^2)^2 on |r| <= c, else 0.
double tukey_weight(double r, double c);
/// Tukey bisquare psi(r) = r * tukey_weight(r, c).
double tukey_psi(double r, double c);
/// Soft-thresholding sign(v) max(|v| - t, 0).
double soft_threshold(double v, double t);

/// argmin_theta sum_i w_i (y_i - x_i^T theta)^2. Throws DegenerateWeightsError
/// when all weights are zero and linalg::LinalgError when X^T W X is singular.
Vector weighted_least_squares(const Matrix& x, const Vector& y, const Vector& w);

MEstimate m_estimate(const Matrix& x, const Vector& y, const IrlsConfig& cfg = {});

RompResult romp(const Matrix& x, const Vector& y, double epsilon0, const IrlsConfig& cfg = {});

AdmmResult admm_lasso(const Matrix& x, const Vector& y, const AdmmConfig& cfg);

/// Objective (1/2)|y - X theta - u|^2 + lambda |u|_1.
double lasso_objective(const Matrix& x, const Vector& y, const Vector& theta, const Vector& u,
                       double lambda);

/// Largest violation of the optimality conditions of the objective above:
/// X^T(y - X theta - u) = 0, residual_i = lambda sign(u_i) on the support and
/// |residual_i| <= lambda off it.
double lasso_kkt_violation(const Matrix& x, const Vector& y, const Vector& theta, const Vector& u,
                           double lambda);

}  // namespace gard::baselines
