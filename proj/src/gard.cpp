#include "gard/gard.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace gard {

namespace {

std::atomic<std::uint64_t> g_runs{0};
std::atomic<std::uint64_t> g_violations{0};

void record_invariants(const GardResult& result, Index n, Index m) {
  bool ok = result.iterations <= n - m;
  for (std::size_t k = 1; k < result.residual_trace.size(); ++k) {
    if (!(result.residual_trace[k] < result.residual_trace[k - 1])) ok = false;
  }
  g_runs.fetch_add(1, std::memory_order_relaxed);
  if (!ok) g_violations.fetch_add(1, std::memory_order_relaxed);
}

// State shared by both engines: the active outlier columns and the residual.
struct Iterate {
  std::vector<Index> support;  // selection order
  std::vector<char> active;    // active[i] != 0 once e_i is in the active matrix
  Vector theta;
  Vector u_active;  // aligned with support
  Vector residual;
};

Vector residual_of(const RegressionProblem& p, const Iterate& it) {
  Vector r = p.y - p.x * it.theta;
  for (std::size_t k = 0; k < it.support.size(); ++k) r(it.support[k]) -= it.u_active(static_cast<Index>(k));
  return r;
}

std::vector<Index> inactive_indices(const Iterate& it) {
  std::vector<Index> out;
  out.reserve(it.active.size());
  for (std::size_t i = 0; i < it.active.size(); ++i) {
    if (!it.active[i]) out.push_back(static_cast<Index>(i));
  }
  return out;
}

// Solve least squares on [X e_S] by a fresh QR of the augmented matrix.
void naive_solve(const RegressionProblem& p, Iterate& it) {
  const Index n = p.n();
  const Index m = p.m();
  const Index k = static_cast<Index>(it.support.size());
  Matrix a(n, m + k);
  a.leftCols(m) = p.x;
  a.rightCols(k).setZero();
  for (Index c = 0; c < k; ++c) a(it.support[static_cast<std::size_t>(c)], m + c) = 1.0;
  const linalg::QrFactors qr = linalg::qr_reduced(a);
  const Vector z = qr.r.triangularView<Eigen::Upper>().solve(qr.q.transpose() * p.y);
  it.theta = z.head(m);
  it.u_active = z.tail(k);
}

double stop_threshold(double epsilon0) { return epsilon0 > 0.0 ? epsilon0 : kNoiselessResidual; }

}  // namespace

std::string_view to_string(Engine engine) {
  switch (engine) {
    case Engine::kNaive:
      return "naive";
    case Engine::kCholesky:
      return "cholesky";
  }
  return "unknown";
}

Index select_outlier_index(const Vector& residual, std::span<const Index> inactive) {
  if (inactive.empty()) throw std::invalid_argument("select_outlier_index: empty inactive set");
  Index best = -1;
  double best_abs = -1.0;
  for (Index j : inactive) {
    if (j < 0 || j >= residual.size()) {
      throw std::invalid_argument("select_outlier_index: index out of range");
    }
    const double a = std::abs(residual(j));
    if (a > best_abs || (a == best_abs && j < best)) {
      best = j;
      best_abs = a;
    }
  }
  return best;
}

GardResult gard_solve(const RegressionProblem& p, const GardOptions& options) {
  p.validate();
  const Index n = p.n();
  const Index m = p.m();
  Index cap = options.max_outliers.value_or(n - m - 1);
  if (cap < 0) throw std::invalid_argument("gard_solve: max_outliers must be >= 0");
  cap = std::min(cap, n - m);
  const double threshold = stop_threshold(p.epsilon0);

  Iterate it;
  it.active.assign(static_cast<std::size_t>(n), 0);
  it.support.reserve(static_cast<std::size_t>(cap));

  GardResult result;
  result.engine = options.engine;

  // Cholesky engine state: L factors A_ac^T A_ac and q = L^{-1} A_ac^T y.
  linalg::CholFactor chol;
  Vector q;

  if (options.engine == Engine::kNaive) {
    naive_solve(p, it);
  } else {
    try {
      chol = linalg::cholesky(p.x.transpose() * p.x);
    } catch (const linalg::LinalgError& e) {
      if (e.kind() != linalg::LinalgError::Kind::kNotPositiveDefinite) throw;
      throw linalg::LinalgError(linalg::LinalgError::Kind::kRankDeficient,
                                std::string("gard_solve: X is rank deficient (") + e.what() + ")");
    }
    // L_0 = R^T for X = QR, so its diagonal carries the QR pivots.
    const double scale = p.x.colwise().norm().maxCoeff();
    for (Index i = 0; i < m; ++i) {
      if (chol(i, i) <= linalg::kRankTolerance * scale) {
        throw linalg::LinalgError(linalg::LinalgError::Kind::kRankDeficient,
                                  "gard_solve: X is rank deficient");
      }
    }
    chol.reserve(m + cap);
    q = chol.forward(p.x.transpose() * p.y);
    const Vector z = chol.backward(q);
    it.theta = z;
    it.u_active.resize(0);
  }
  it.residual = residual_of(p, it);
  result.residual_trace.push_back(it.residual.norm());

  Index k = 0;
  while (result.residual_trace.back() > threshold && k < cap) {
    ++k;
    const std::vector<Index> inactive = inactive_indices(it);
    const Index j = select_outlier_index(it.residual, inactive);
    it.support.push_back(j);
    it.active[static_cast<std::size_t>(j)] = 1;

    if (options.engine == Engine::kNaive) {
      naive_solve(p, it);
    } else {
      // A_ac^T e_j: row j of X followed by zeros (e_j is orthogonal to the
      // previously selected basis columns).
      Vector cross = Vector::Zero(m + k - 1);
      cross.head(m) = p.x.row(j).transpose();
      const Vector v = chol.append(cross, 1.0);
      const double b = chol(m + k - 1, m + k - 1);
      q.conservativeResize(m + k);
      q(m + k - 1) = (p.y(j) - v.dot(q.head(m + k - 1))) / b;
      const Vector z = chol.backward(q);
      it.theta = z.head(m);
      it.u_active = z.tail(k);
    }
    it.residual = residual_of(p, it);
    result.residual_trace.push_back(it.residual.norm());
  }

  result.iterations = k;
  result.cap_reached = result.residual_trace.back() > threshold;
  result.theta_star = it.theta;
  result.support = it.support;

  std::vector<std::pair<Index, double>> entries;
  entries.reserve(it.support.size());
  for (std::size_t c = 0; c < it.support.size(); ++c) {
    entries.emplace_back(it.support[c], it.u_active(static_cast<Index>(c)));
  }
  std::sort(entries.begin(), entries.end());
  std::vector<Index> idx;
  std::vector<double> val;
  for (const auto& [i, v] : entries) {
    idx.push_back(i);
    val.push_back(v);
  }
  result.u_star = SparseVector(n, std::move(idx), std::move(val));

  record_invariants(result, n, m);
  return result;
}

InvariantTally invariant_tally() {
  return InvariantTally{g_runs.load(std::memory_order_relaxed),
                        g_violations.load(std::memory_order_relaxed)};
}

}  // namespace gard
