#pragma once

#include "gard/linalg.hpp"

#include <cstddef>
#include <vector>

namespace gard {

using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

/// Index-sorted (index, value) representation of a sparse n-vector.
/// Indices are 0-based and strictly increasing.
class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(Index length) : length_(length) {}
  /// Throws std::invalid_argument unless indices are strictly increasing and in range.
  SparseVector(Index length, std::vector<Index> indices, std::vector<double> values);

  /// Keeps entries with |v_i| > drop_below.
  static SparseVector from_dense(const Vector& dense, double drop_below = 0.0);

  Index length() const noexcept { return length_; }
  std::size_t nnz() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  const std::vector<Index>& indices() const noexcept { return indices_; }
  const std::vector<double>& values() const noexcept { return values_; }

  Vector to_dense() const;
  double norm() const;
  /// Smallest nonzero magnitude; 0 when empty.
  double min_abs() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  Index length_ = 0;
  std::vector<Index> indices_;
  std::vector<double> values_;
};

/// Observed data y = X theta + e with inlier noise bound epsilon0.
struct RegressionProblem {
  Matrix x;
  Vector y;
  double epsilon0 = 0.0;

  Index n() const noexcept { return x.rows(); }
  Index m() const noexcept { return x.cols(); }
  /// Throws std::invalid_argument on shape or sign violations (n > m, y size,
  /// epsilon0 >= 0, finite entries). Rank is checked by the solvers.
  void validate() const;
};

/// Generator-side truth, used for scoring only.
struct GroundTruth {
  Vector theta0;
  SparseVector u0;
  Vector eta;
};

}  // namespace gard
