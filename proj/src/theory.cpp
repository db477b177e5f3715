#include "gard/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

namespace gard::theory {

namespace {

constexpr double kOrthonormalTolerance = 1e-8;
const double kTwoPlusSqrt6 = 2.0 + std::sqrt(6.0);

void require_orthonormal(const Matrix& q) {
  const Matrix gram = q.transpose() * q;
  const double err = linalg::max_abs(gram - Matrix::Identity(q.cols(), q.cols()));
  if (!(err <= kOrthonormalTolerance)) {
    throw std::invalid_argument("theory: q does not have orthonormal columns (err " +
                                std::to_string(err) + ")");
  }
}

double largest_singular_value_of_rows(const Matrix& q, std::span<const Index> rows) {
  Matrix sub(static_cast<Index>(rows.size()), q.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) sub.row(static_cast<Index>(i)) = q.row(rows[i]);
  return linalg::singular_values(sub).front();
}

// Max of fn over all k-subsets, split over workers by enumeration rank.
double parallel_subset_max(Index n, Index k, unsigned workers,
                           const std::function<double(std::span<const Index>)>& fn) {
  workers = std::max(1u, workers);
  std::vector<double> partial(workers, 0.0);
  auto run = [&](unsigned w) {
    std::uint64_t rank = 0;
    double best = 0.0;
    for_each_subset(n, k, [&](std::span<const Index> subset) {
      if (rank++ % workers == w) best = std::max(best, fn(subset));
    });
    partial[w] = best;
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  return *std::max_element(partial.begin(), partial.end());
}

double rip_of_subset(const Matrix& q, std::span<const Index> rows) {
  const Index m = q.cols();
  const Index k = static_cast<Index>(rows.size());
  // Gram of [Q I_S] = [[I_m, Q_S^T], [Q_S, I_k]]; PSD, so its singular values
  // are its eigenvalues.
  Matrix gram = Matrix::Identity(m + k, m + k);
  for (Index i = 0; i < k; ++i) {
    gram.block(m + i, 0, 1, m) = q.row(rows[static_cast<std::size_t>(i)]);
    gram.block(0, m + i, m, 1) = q.row(rows[static_cast<std::size_t>(i)]).transpose();
  }
  const std::vector<double> eig = linalg::singular_values(gram);
  return std::max(1.0 - eig.back(), eig.front() - 1.0);
}

}  // namespace

BudgetExceededError::BudgetExceededError(Index n, Index s, std::uint64_t combinations)
    : std::runtime_error("brute-force budget exceeded: n=" + std::to_string(n) + ", s=" +
                         std::to_string(s) + " needs " + std::to_string(combinations) +
                         " subset evaluations"),
      combinations_(combinations) {}

std::uint64_t binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (Index i = 1; i <= k; ++i) {
    const auto num = static_cast<std::uint64_t>(n - k + i);
    if (out > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    out = out * num / static_cast<std::uint64_t>(i);
  }
  return out;
}

void for_each_subset(Index n, Index k, const std::function<void(std::span<const Index>)>& fn) {
  if (k < 0 || k > n) return;
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    fn(idx);
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

void check_budget(Index n, Index s, const BruteForceBudget& budget) {
  if (n > budget.max_n || s > budget.max_s) throw BudgetExceededError(n, s, binomial(n, s));
}

double delta_subset(const Matrix& q, std::span<const Index> s_set) {
  if (s_set.empty()) throw std::invalid_argument("delta_subset: empty index set");
  for (Index i : s_set) {
    if (i < 0 || i >= q.rows()) throw std::invalid_argument("delta_subset: index out of range");
  }
  require_orthonormal(q);
  return std::min(1.0, largest_singular_value_of_rows(q, s_set));
}

double delta_s_bruteforce(const Matrix& q, Index s, const BruteForceBudget& budget) {
  if (s < 1 || s > q.rows()) throw std::invalid_argument("delta_s_bruteforce: need 1 <= s <= n");
  check_budget(q.rows(), s, budget);
  require_orthonormal(q);
  const double v = parallel_subset_max(q.rows(), s, budget.workers, [&](std::span<const Index> sub) {
    return largest_singular_value_of_rows(q, sub);
  });
  return std::min(1.0, v);
}

double delta_s_upto(const Matrix& q, Index s, const BruteForceBudget& budget) {
  if (s < 1 || s > q.rows()) throw std::invalid_argument("delta_s_upto: need 1 <= s <= n");
  check_budget(q.rows(), s, budget);
  require_orthonormal(q);
  double best = 0.0;
  for (Index k = 1; k <= s; ++k) {
    best = std::max(best, parallel_subset_max(q.rows(), k, budget.workers, [&](std::span<const Index> sub) {
                      return largest_singular_value_of_rows(q, sub);
                    }));
  }
  return std::min(1.0, best);
}

double rip_constant(const Matrix& q, Index s, const BruteForceBudget& budget) {
  if (s < 1 || s > q.rows()) throw std::invalid_argument("rip_constant: need 1 <= s <= n");
  check_budget(q.rows(), s, budget);
  require_orthonormal(q);
  double best = 0.0;
  for (Index k = 1; k <= s; ++k) {
    best = std::max(best, parallel_subset_max(q.rows(), k, budget.workers, [&](std::span<const Index> sub) {
                      return rip_of_subset(q, sub);
                    }));
  }
  return best;
}

double bound_noiseless(const SparseVector& u0) {
  if (u0.empty()) throw std::invalid_argument("bound_noiseless: outlier vector is empty");
  return std::sqrt(u0.min_abs() / (2.0 * u0.norm()));
}

std::optional<double> bound_noisy(const SparseVector& u0, double epsilon0) {
  if (u0.empty()) throw std::invalid_argument("bound_noisy: outlier vector is empty");
  if (!(epsilon0 >= 0.0)) throw std::invalid_argument("bound_noisy: epsilon0 must be >= 0");
  const double numerator = u0.min_abs() - kTwoPlusSqrt6 * epsilon0;
  if (!(numerator > 0.0)) return std::nullopt;
  return std::sqrt(numerator / (2.0 * u0.norm()));
}

double error_bound(double epsilon0, double tau, double t) {
  if (!(epsilon0 >= 0.0) || !(tau > 0.0) || !(t >= 0.0 && t < 1.0)) {
    throw std::domain_error("error_bound: need epsilon0 >= 0, tau > 0, 0 <= t < 1");
  }
  return epsilon0 / (tau * std::sqrt(1.0 - t));
}

ErrorBounds error_bounds(double epsilon0, double tau, double delta_s, std::optional<double> c) {
  ErrorBounds out;
  out.tight = delta_s < 1.0 ? error_bound(epsilon0, tau, delta_s)
                            : std::numeric_limits<double>::infinity();
  if (c) out.loose = error_bound(epsilon0, tau, *c);
  return out;
}

TheoryReport certify(const RegressionProblem& problem, const GroundTruth& truth, Index s,
                     const BruteForceBudget& budget) {
  problem.validate();
  const auto nnz = static_cast<Index>(truth.u0.nnz());
  if (nnz < 1) throw std::invalid_argument("certify: outlier vector is empty");
  if (s < nnz) throw std::invalid_argument("certify: s is smaller than the outlier count");
  check_budget(problem.n(), s, budget);

  const linalg::QrFactors qr = linalg::qr_reduced(problem.x);
  TheoryReport rep;
  rep.s = s;
  rep.delta_s = delta_s_bruteforce(qr.q, s, budget);
  rep.omega_s_degrees = std::acos(rep.delta_s) * 180.0 / std::numbers::pi;
  rep.mu_s = rip_constant(qr.q, s, budget);
  rep.bound_noiseless_c = bound_noiseless(truth.u0);
  rep.bound_noisy_c = bound_noisy(truth.u0, problem.epsilon0);
  // X and R share singular values.
  rep.tau = linalg::singular_values(qr.r).back();
  rep.sigma_min_lower = std::sqrt(std::max(0.0, 1.0 - rep.delta_s));
  const ErrorBounds eb = error_bounds(problem.epsilon0, rep.tau, rep.delta_s, rep.bound_noisy_c);
  rep.error_bound_tight = eb.tight;
  rep.error_bound_loose = eb.loose;
  rep.noiseless_guarantee = rep.delta_s < rep.bound_noiseless_c;
  if (rep.bound_noisy_c) rep.noisy_guarantee = rep.delta_s < *rep.bound_noisy_c;
  rep.d = (problem.n() + s - 1) / s;
  return rep;
}

}  // namespace gard::theory
