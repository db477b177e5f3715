#include "gard/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gard {

SparseVector::SparseVector(Index length, std::vector<Index> indices, std::vector<double> values)
    : length_(length), indices_(std::move(indices)), values_(std::move(values)) {
  if (indices_.size() != values_.size()) {
    throw std::invalid_argument("SparseVector: index/value count mismatch");
  }
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || indices_[i] >= length_) {
      throw std::invalid_argument("SparseVector: index " + std::to_string(indices_[i]) +
                                  " out of range");
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw std::invalid_argument("SparseVector: indices must be strictly increasing");
    }
  }
}

SparseVector SparseVector::from_dense(const Vector& dense, double drop_below) {
  std::vector<Index> idx;
  std::vector<double> val;
  for (Index i = 0; i < dense.size(); ++i) {
    if (std::abs(dense(i)) > drop_below) {
      idx.push_back(i);
      val.push_back(dense(i));
    }
  }
  return SparseVector(dense.size(), std::move(idx), std::move(val));
}

Vector SparseVector::to_dense() const {
  Vector out = Vector::Zero(length_);
  for (std::size_t i = 0; i < indices_.size(); ++i) out(indices_[i]) = values_[i];
  return out;
}

double SparseVector::norm() const {
  double acc = 0.0;
  for (double v : values_) acc += v * v;
  return std::sqrt(acc);
}

double SparseVector::min_abs() const {
  double best = 0.0;
  for (double v : values_) {
    const double a = std::abs(v);
    if (a > 0.0 && (best == 0.0 || a < best)) best = a;
  }
  return best;
}

void RegressionProblem::validate() const {
  if (x.cols() < 1 || x.rows() <= x.cols()) {
    throw std::invalid_argument("RegressionProblem: need n > m >= 1, got " +
                                std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
  }
  if (y.size() != x.rows()) {
    throw std::invalid_argument("RegressionProblem: y has " + std::to_string(y.size()) +
                                " entries, expected " + std::to_string(x.rows()));
  }
  if (!(epsilon0 >= 0.0) || !std::isfinite(epsilon0)) {
    throw std::invalid_argument("RegressionProblem: epsilon0 must be finite and >= 0");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw std::invalid_argument("RegressionProblem: non-finite data");
  }
}

}  // namespace gard
