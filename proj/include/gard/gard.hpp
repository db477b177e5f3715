#pragma once

#include "gard/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

// Greedy Algorithm for Robust Denoising.
//
// Models y = X theta + u + eta with u sparse. Starting from the plain
// least-squares fit, each iteration adds the standard-basis column e_j whose
// residual entry is largest in magnitude to the active matrix [X e_S] and
// re-solves least squares, until the residual norm drops to epsilon0.
namespace gard {

enum class Engine {
  kNaive,     // fresh QR of the augmented matrix each step
  kCholesky,  // incremental Cholesky update of the Gram factor
};

std::string_view to_string(Engine engine);

/// Absolute residual threshold used when epsilon0 == 0.
inline constexpr double kNoiselessResidual = 1e-10;

struct GardOptions {
  Engine engine = Engine::kCholesky;
  /// Cap on selected outliers; defaults to n - m - 1.
  std::optional<Index> max_outliers;
};

struct GardResult {
  Vector theta_star;
  SparseVector u_star;
  /// Selected outlier indices in selection order.
  std::vector<Index> support;
  /// residual_trace[k] = |r^(k)|_2, entry 0 is the initial least-squares fit.
  std::vector<double> residual_trace;
  Index iterations = 0;
  Engine engine = Engine::kCholesky;
  /// True when the run stopped on the outlier cap with residual above epsilon0.
  bool cap_reached = false;
};

/// Throws linalg::LinalgError (kRankDeficient) when X is rank deficient and
/// std::invalid_argument when the problem is malformed.
GardResult gard_solve(const RegressionProblem& problem, const GardOptions& options = {});

/// Index of the largest |residual_i| over `inactive`; ties go to the smallest
/// index. Throws std::invalid_argument on an empty set.
Index select_outlier_index(const Vector& residual, std::span<const Index> inactive);

/// Process-wide tally of convergence-invariant checks performed by gard_solve:
/// the residual trace must be strictly decreasing and the iteration count
/// must not exceed n - m.
struct InvariantTally {
  std::uint64_t runs = 0;
  std::uint64_t violations = 0;
};
InvariantTally invariant_tally();

}  // namespace gard
