#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

// Dense real linear algebra for desk-scale problems: reduced Householder QR,
// Cholesky with the append-column update used by the GARD solver, triangular
// solves and a one-sided Jacobi SVD for singular values.
namespace gard::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative tolerance on Householder pivots (and on sigma_min / sigma_max).
inline constexpr double kRankTolerance = 1e-10;
/// Absolute floor on 1 - |v|^2 when appending a unit column.
inline constexpr double kAppendTolerance = 1e-12;
/// Symmetry check applied before factoring a Gram matrix.
inline constexpr double kSymmetryTolerance = 1e-12;

class LinalgError : public std::runtime_error {
 public:
  enum class Kind { kRankDeficient, kNotPositiveDefinite, kDegenerateAppend, kDimensionMismatch };

  LinalgError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct QrFactors {
  Matrix q;  // n x m, orthonormal columns
  Matrix r;  // m x m, upper triangular, positive diagonal
};

/// Reduced QR of a tall full-column-rank matrix. Throws kRankDeficient when a
/// Householder pivot is below rank_tol times the largest column norm.
QrFactors qr_reduced(const Matrix& x, double rank_tol = kRankTolerance);

/// Lower-triangular Cholesky factor L of a Gram matrix G = L L^T.
///
/// The factor keeps spare capacity so that repeated appends (one new column of
/// the factored matrix per call) cost O(k^2) without reallocating.
class CholFactor {
 public:
  CholFactor() = default;
  explicit CholFactor(Matrix lower);

  Index dim() const noexcept { return dim_; }
  /// Copy of the active k x k lower triangle.
  Matrix lower() const { return storage_.topLeftCorner(dim_, dim_); }
  double operator()(Index i, Index j) const { return storage_(i, j); }

  void reserve(Index capacity);

  /// Appends a column a_new to the factored matrix A, given cross = A^T a_new
  /// and self = |a_new|^2. Solves L v = cross and sets the new row to (v^T, b)
  /// with b = sqrt(self - |v|^2). Throws kDegenerateAppend when
  /// self - |v|^2 <= tol. Returns v.
  Vector append(const Vector& cross, double self, double tol = kAppendTolerance);

  /// Solves L w = rhs.
  Vector forward(const Vector& rhs) const;
  /// Solves L^T w = rhs.
  Vector backward(const Vector& rhs) const;
  /// Solves L L^T w = rhs.
  Vector solve(const Vector& rhs) const { return backward(forward(rhs)); }

 private:
  Matrix storage_;
  Index dim_ = 0;
};

/// Cholesky factorization of a symmetric positive definite matrix.
/// Throws kNotPositiveDefinite when a pivot is <= 0 and kDimensionMismatch when
/// g is not square or not symmetric within kSymmetryTolerance (relative).
CholFactor cholesky(const Matrix& g);

/// Pure form of the append update for a standard-basis column: l factors
/// a_ac^T a_ac, and the appended column is e_j (0-based, length a_ac.rows()).
/// The result equals cholesky([a_ac e_j]^T [a_ac e_j]).
CholFactor chol_append(const CholFactor& l, const Matrix& a_ac, Index j,
                       double tol = kAppendTolerance);

/// Least-squares solution argmin |y - a z| given l with l l^T = a^T a.
Vector solve_ls(const CholFactor& l, const Matrix& a, const Vector& y);

/// Singular values in descending order (one-sided Jacobi).
std::vector<double> singular_values(const Matrix& m);

/// Max-norm |A|_max.
inline double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace gard::linalg
