#pragma once

#include "gard/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

// Recovery certificates for GARD on concrete instances.
//
// With X = QR, delta_S = |Q_S|_2 is the cosine of the smallest principal angle
// between span(Q) and the coordinate subspace span(I_S); delta_s is its
// maximum over |S| <= s. The exact-recovery and support-recovery conditions
// compare delta_s against bounds computed from the outlier vector alone.
namespace gard::theory {

/// Combination budget for the exhaustive subset sweeps.
struct BruteForceBudget {
  Index max_n = 40;
  Index max_s = 5;
  /// Worker threads for the sweep; the max-reduction is order independent.
  unsigned workers = 1;
};

class BudgetExceededError : public std::runtime_error {
 public:
  BudgetExceededError(Index n, Index s, std::uint64_t combinations);
  std::uint64_t combinations() const noexcept { return combinations_; }

 private:
  std::uint64_t combinations_;
};

/// Binomial coefficient C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(Index n, Index k);

/// Calls fn for every k-subset of {0..n-1} in lexicographic order.
void for_each_subset(Index n, Index k, const std::function<void(std::span<const Index>)>& fn);

/// cos of the smallest principal angle between span(q) and span(I_S): the
/// largest singular value of the rows of q indexed by s_set.
/// Throws std::invalid_argument on an empty set or non-orthonormal q (1e-8).
double delta_subset(const Matrix& q, std::span<const Index> s_set);

/// delta_s over all subsets of size exactly s.
double delta_s_bruteforce(const Matrix& q, Index s, const BruteForceBudget& budget = {});
/// delta_s over all subsets of size 1..s; must agree with delta_s_bruteforce.
double delta_s_upto(const Matrix& q, Index s, const BruteForceBudget& budget = {});

/// Restricted isometry constant of [Q I_S] over all |S| <= s, from the
/// eigenvalues of each Gram matrix: max(1 - lambda_min, lambda_max - 1).
double rip_constant(const Matrix& q, Index s, const BruteForceBudget& budget = {});

/// sqrt(min|u_i| / (2 |u0|_2)). Throws std::invalid_argument when u0 is empty.
double bound_noiseless(const SparseVector& u0);

/// sqrt((min|u_i| - (2 + sqrt 6) epsilon0) / (2 |u0|_2)); nullopt when the
/// numerator is not positive.
std::optional<double> bound_noisy(const SparseVector& u0, double epsilon0);

/// epsilon0 / (tau sqrt(1 - t)). Throws std::domain_error unless
/// epsilon0 >= 0, tau > 0 and 0 <= t < 1.
double error_bound(double epsilon0, double tau, double t);

struct ErrorBounds {
  double tight = 0.0;  // with delta_s
  std::optional<double> loose;  // with the bound c, when c is defined
};
ErrorBounds error_bounds(double epsilon0, double tau, double delta_s, std::optional<double> c);

struct TheoryReport {
  Index s = 0;
  double delta_s = 0.0;
  double omega_s_degrees = 0.0;
  double mu_s = 0.0;
  double bound_noiseless_c = 0.0;
  std::optional<double> bound_noisy_c;
  double tau = 0.0;  // sigma_min(X)
  double sigma_min_lower = 0.0;
  double error_bound_tight = 0.0;
  std::optional<double> error_bound_loose;
  bool noiseless_guarantee = false;
  std::optional<bool> noisy_guarantee;
  /// ceil(n / s); reported only.
  Index d = 0;
};

/// Assembles the certificate for an instance. s must be >= |supp(u0)| >= 1.
TheoryReport certify(const RegressionProblem& problem, const GroundTruth& truth, Index s,
                     const BruteForceBudget& budget = {});

/// Throws BudgetExceededError when (n, s) lies outside the budget.
void check_budget(Index n, Index s, const BruteForceBudget& budget);

}  // namespace gard::theory
