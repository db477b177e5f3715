#include "gard/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gard::baselines {

void IrlsConfig::validate() const {
  if (!(tuning_c > 0.0)) throw std::invalid_argument("IrlsConfig: tuning_c must be > 0");
  if (max_iters < 1) throw std::invalid_argument("IrlsConfig: max_iters must be >= 1");
  if (!(param_tol > 0.0)) throw std::invalid_argument("IrlsConfig: param_tol must be > 0");
  if (fixed_scale && !(*fixed_scale > 0.0)) {
    throw std::invalid_argument("IrlsConfig: fixed_scale must be > 0");
  }
}

void AdmmConfig::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("AdmmConfig: lambda must be > 0");
  if (!(rho0 > 0.0) || !(rho0 <= rho_cap)) {
    throw std::invalid_argument("AdmmConfig: need 0 < rho0 <= rho_cap");
  }
  if (!(rho_growth >= 1.0)) throw std::invalid_argument("AdmmConfig: rho_growth must be >= 1");
  if (!(stop_tol > 0.0)) throw std::invalid_argument("AdmmConfig: stop_tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("AdmmConfig: max_iters must be >= 1");
}

double median(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty input");
  std::vector<double> work(v.begin(), v.end());
  const std::size_t mid = work.size() / 2;
  std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(mid), work.end());
  const double upper = work[mid];
  if (work.size() % 2 == 1) return upper;
  const double lower = *std::max_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double mad(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mad: empty input");
  const double center = median(v);
  std::vector<double> dev(v.size());
  std::transform(v.begin(), v.end(), dev.begin(), [center](double x) { return std::abs(x - center); });
  return median(dev);
}

double tukey_weight(double r, double c) {
  const double t = r / c;
  if (std::abs(t) >= 1.0) return 0.0;
  const double a = 1.0 - t * t;
  return a * a;
}

double tukey_psi(double r, double c) { return r * tukey_weight(r, c); }

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

Vector weighted_least_squares(const Matrix& x, const Vector& y, const Vector& w) {
  if (x.rows() != y.size() || w.size() != y.size()) {
    throw linalg::LinalgError(linalg::LinalgError::Kind::kDimensionMismatch,
                              "weighted_least_squares: dimension mismatch");
  }
  if (!(w.maxCoeff() > 0.0)) throw DegenerateWeightsError("IRLS: all weights are zero");
  const Vector sw = w.cwiseSqrt();
  const Matrix xw = sw.asDiagonal() * x;
  const Vector yw = sw.cwiseProduct(y);
  // QR on the scaled system keeps the conditioning of X rather than X^T W X.
  const linalg::QrFactors qr = linalg::qr_reduced(xw);
  return qr.r.triangularView<Eigen::Upper>().solve(qr.q.transpose() * yw);
}

namespace {

double residual_scale(const Vector& r, const IrlsConfig& cfg) {
  if (cfg.fixed_scale) return *cfg.fixed_scale;
  const double s = mad(std::span<const double>(r.data(), static_cast<std::size_t>(r.size()))) / kMadToSigma;
  return std::max(s, kScaleFloor);
}

Vector tukey_weights(const Vector& r, double scale, double c) {
  Vector w(r.size());
  for (Index i = 0; i < r.size(); ++i) w(i) = tukey_weight(r(i) / scale, c);
  return w;
}

MEstimate irls_from(const Matrix& x, const Vector& y, Vector theta, const IrlsConfig& cfg) {
  MEstimate out;
  out.weights = Vector::Ones(y.size());
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const Vector r = y - x * theta;
    const double scale = residual_scale(r, cfg);
    const Vector w = tukey_weights(r, scale, cfg.tuning_c);
    const Vector next = weighted_least_squares(x, y, w);
    const double step = (next - theta).norm();
    const double ref = theta.norm();
    theta = next;
    out.weights = w;
    out.iterations = it;
    if (step <= cfg.param_tol * (1.0 + ref)) break;
  }
  out.theta = std::move(theta);
  return out;
}

}  // namespace

MEstimate m_estimate(const Matrix& x, const Vector& y, const IrlsConfig& cfg) {
  cfg.validate();
  const Vector start = weighted_least_squares(x, y, Vector::Ones(y.size()));
  if (!cfg.fixed_scale) return irls_from(x, y, start, cfg);
  // A fixed scale applied to LS residuals can zero almost every weight under
  // heavy tails, so the fixed-scale pass starts from the MAD-scale fit.
  IrlsConfig adaptive = cfg;
  adaptive.fixed_scale.reset();
  const MEstimate warm = irls_from(x, y, start, adaptive);
  MEstimate out = irls_from(x, y, warm.theta, cfg);
  out.iterations += warm.iterations;
  return out;
}

RompResult romp(const Matrix& x, const Vector& y, double epsilon0, const IrlsConfig& cfg) {
  cfg.validate();
  if (x.cols() < 1 || x.rows() != y.size()) {
    throw linalg::LinalgError(linalg::LinalgError::Kind::kDimensionMismatch, "romp: dimension mismatch");
  }
  const Index m = x.cols();
  RompResult out;
  out.theta = Vector::Zero(m);
  std::vector<char> selected(static_cast<std::size_t>(m), 0);
  Vector r = y;

  while (static_cast<Index>(out.selected_atoms.size()) < m && r.norm() > epsilon0) {
    const double raw = mad(std::span<const double>(r.data(), static_cast<std::size_t>(r.size())));
    const double scale = cfg.fixed_scale.value_or(std::max(raw, kScaleFloor));
    Vector pseudo(r.size());
    for (Index i = 0; i < r.size(); ++i) pseudo(i) = tukey_psi(r(i) / scale, cfg.tuning_c);
    const Vector corr = x.transpose() * pseudo;

    Index best = -1;
    double best_abs = 0.0;
    for (Index j = 0; j < m; ++j) {
      if (selected[static_cast<std::size_t>(j)]) continue;
      const double a = std::abs(corr(j));
      if (a > best_abs) {
        best = j;
        best_abs = a;
      }
    }
    if (best < 0) break;  // pseudo-residuals carry no correlation

    selected[static_cast<std::size_t>(best)] = 1;
    out.selected_atoms.push_back(best);
    ++out.iterations;

    std::vector<Index> cols = out.selected_atoms;
    std::sort(cols.begin(), cols.end());
    Matrix sub(x.rows(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Index>(c)) = x.col(cols[c]);
    const MEstimate fit = m_estimate(sub, y, cfg);
    out.theta.setZero();
    for (std::size_t c = 0; c < cols.size(); ++c) out.theta(cols[c]) = fit.theta(static_cast<Index>(c));
    r = y - x * out.theta;
  }
  return out;
}

AdmmResult admm_lasso(const Matrix& x, const Vector& y, const AdmmConfig& cfg) {
  cfg.validate();
  if (x.rows() != y.size() || x.cols() < 1) {
    throw linalg::LinalgError(linalg::LinalgError::Kind::kDimensionMismatch, "admm_lasso: dimension mismatch");
  }
  const Index n = x.rows();
  const linalg::CholFactor gram = linalg::cholesky(x.transpose() * x);

  // Split u = z: the (theta, u) block is a ridge-coupled least squares whose
  // theta part reduces to a plain LS fit of y - z + d, and z is a shrinkage.
  Vector z = Vector::Zero(n);
  Vector d = Vector::Zero(n);  // scaled dual
  Vector theta = gram.solve(x.transpose() * y);
  Vector u = Vector::Zero(n);
  double rho = cfg.rho0;

  AdmmResult out;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    if (it > 1) {
      const double next = std::min(cfg.rho_cap, cfg.rho_growth * rho);
      d *= rho / next;
      rho = next;
    }
    const Vector theta_prev = theta;
    const Vector z_prev = z;

    theta = gram.solve(x.transpose() * (y - z + d));
    u = (y - x * theta + rho * (z - d)) / (1.0 + rho);
    const double thresh = cfg.lambda / rho;
    for (Index i = 0; i < n; ++i) z(i) = soft_threshold(u(i) + d(i), thresh);
    d += u - z;

    out.iterations = it;
    const double change = std::sqrt((theta - theta_prev).squaredNorm() + (z - z_prev).squaredNorm());
    const double primal = (u - z).norm();
    if (change <= cfg.stop_tol && primal <= cfg.stop_tol) break;
    if (it == cfg.max_iters) out.max_iters_reached = true;
  }
  out.theta = theta;
  out.u = SparseVector::from_dense(z, std::nextafter(1e-6, 0.0));
  return out;
}

double lasso_objective(const Matrix& x, const Vector& y, const Vector& theta, const Vector& u,
                       double lambda) {
  return 0.5 * (y - x * theta - u).squaredNorm() + lambda * u.lpNorm<1>();
}

double lasso_kkt_violation(const Matrix& x, const Vector& y, const Vector& theta, const Vector& u,
                           double lambda) {
  const Vector res = y - x * theta - u;
  double worst = (x.transpose() * res).cwiseAbs().maxCoeff();
  for (Index i = 0; i < u.size(); ++i) {
    if (u(i) != 0.0) {
      worst = std::max(worst, std::abs(res(i) - lambda * (u(i) > 0 ? 1.0 : -1.0)));
    } else {
      worst = std::max(worst, std::abs(res(i)) - lambda);
    }
  }
  return std::max(worst, 0.0);
}

}  // namespace gard::baselines
