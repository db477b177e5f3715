#include "gard/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace gard::linalg {

namespace {

[[noreturn]] void throw_error(LinalgError::Kind kind, const std::string& what) {
  throw LinalgError(kind, what);
}

}  // namespace

QrFactors qr_reduced(const Matrix& x, double rank_tol) {
  const Index n = x.rows();
  const Index m = x.cols();
  if (m == 0 || n < m) {
    throw_error(LinalgError::Kind::kDimensionMismatch,
                "qr_reduced: need rows >= cols >= 1, got " + std::to_string(n) + "x" +
                    std::to_string(m));
  }
  if (!x.allFinite()) {
    throw_error(LinalgError::Kind::kDimensionMismatch, "qr_reduced: non-finite entry");
  }

  Matrix a = x;
  Matrix reflectors = Matrix::Zero(n, m);  // column k holds v_k in rows k..n-1
  const double scale = x.colwise().norm().maxCoeff();
  if (scale == 0.0) {
    throw_error(LinalgError::Kind::kRankDeficient, "qr_reduced: zero matrix");
  }

  for (Index k = 0; k < m; ++k) {
    auto col = a.col(k).tail(n - k);
    const double norm = col.norm();
    if (norm <= rank_tol * scale) {
      throw_error(LinalgError::Kind::kRankDeficient,
                  "qr_reduced: pivot " + std::to_string(k) + " below rank tolerance");
    }
    const double alpha = col(0) >= 0.0 ? -norm : norm;
    Vector v = col;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm > 0.0) {
      v /= vnorm;
      auto block = a.bottomRightCorner(n - k, m - k);
      block.noalias() -= 2.0 * v * (v.transpose() * block);
    }
    reflectors.col(k).tail(n - k) = v;
  }

  QrFactors f;
  f.r = a.topRows(m).triangularView<Eigen::Upper>();
  f.q = Matrix::Identity(n, m);
  for (Index k = m - 1; k >= 0; --k) {
    const auto v = reflectors.col(k).tail(n - k);
    auto block = f.q.bottomRows(n - k);
    block.noalias() -= 2.0 * v * (v.transpose() * block);
  }
  for (Index i = 0; i < m; ++i) {
    if (f.r(i, i) < 0.0) {
      f.r.row(i) *= -1.0;
      f.q.col(i) *= -1.0;
    }
  }
  return f;
}

CholFactor::CholFactor(Matrix lower) : storage_(std::move(lower)), dim_(storage_.rows()) {
  if (storage_.rows() != storage_.cols()) {
    throw_error(LinalgError::Kind::kDimensionMismatch, "CholFactor: factor must be square");
  }
}

void CholFactor::reserve(Index capacity) {
  if (capacity <= storage_.rows()) return;
  Matrix grown = Matrix::Zero(capacity, capacity);
  grown.topLeftCorner(dim_, dim_) = storage_.topLeftCorner(dim_, dim_);
  storage_ = std::move(grown);
}

Vector CholFactor::forward(const Vector& rhs) const {
  if (rhs.size() != dim_) {
    throw_error(LinalgError::Kind::kDimensionMismatch, "forward substitution: size mismatch");
  }
  Vector w(dim_);
  for (Index i = 0; i < dim_; ++i) {
    double acc = rhs(i);
    for (Index j = 0; j < i; ++j) acc -= storage_(i, j) * w(j);
    w(i) = acc / storage_(i, i);
  }
  return w;
}

Vector CholFactor::backward(const Vector& rhs) const {
  if (rhs.size() != dim_) {
    throw_error(LinalgError::Kind::kDimensionMismatch, "backward substitution: size mismatch");
  }
  Vector w(dim_);
  for (Index i = dim_ - 1; i >= 0; --i) {
    double acc = rhs(i);
    for (Index j = i + 1; j < dim_; ++j) acc -= storage_(j, i) * w(j);
    w(i) = acc / storage_(i, i);
  }
  return w;
}

Vector CholFactor::append(const Vector& cross, double self, double tol) {
  Vector v = forward(cross);
  const double gap = self - v.squaredNorm();
  if (!(gap > tol)) {
    throw_error(LinalgError::Kind::kDegenerateAppend,
                "chol append: appended column is numerically dependent (1 - |v|^2 = " +
                    std::to_string(gap) + ")");
  }
  if (storage_.rows() <= dim_) reserve(std::max<Index>(2 * dim_, dim_ + 1));
  storage_.row(dim_).head(dim_) = v.transpose();
  storage_.row(dim_).tail(storage_.cols() - dim_).setZero();
  storage_(dim_, dim_) = std::sqrt(gap);
  ++dim_;
  return v;
}

CholFactor cholesky(const Matrix& g) {
  const Index k = g.rows();
  if (k != g.cols()) {
    throw_error(LinalgError::Kind::kDimensionMismatch, "cholesky: matrix is not square");
  }
  const double scale = std::max(1.0, max_abs(g));
  if (max_abs(g - g.transpose()) > kSymmetryTolerance * scale) {
    throw_error(LinalgError::Kind::kDimensionMismatch, "cholesky: matrix is not symmetric");
  }
  Matrix l = Matrix::Zero(k, k);
  for (Index j = 0; j < k; ++j) {
    double diag = g(j, j);
    for (Index p = 0; p < j; ++p) diag -= l(j, p) * l(j, p);
    if (!(diag > 0.0)) {
      throw_error(LinalgError::Kind::kNotPositiveDefinite,
                  "cholesky: non-positive pivot at " + std::to_string(j));
    }
    l(j, j) = std::sqrt(diag);
    for (Index i = j + 1; i < k; ++i) {
      double acc = g(i, j);
      for (Index p = 0; p < j; ++p) acc -= l(i, p) * l(j, p);
      l(i, j) = acc / l(j, j);
    }
  }
  return CholFactor(std::move(l));
}

CholFactor chol_append(const CholFactor& l, const Matrix& a_ac, Index j, double tol) {
  if (a_ac.cols() != l.dim()) {
    throw_error(LinalgError::Kind::kDimensionMismatch, "chol_append: factor/matrix size mismatch");
  }
  if (j < 0 || j >= a_ac.rows()) {
    throw_error(LinalgError::Kind::kDimensionMismatch, "chol_append: basis index out of range");
  }
  CholFactor out = l;
  out.reserve(l.dim() + 1);
  // A^T e_j is row j of A.
  out.append(a_ac.row(j).transpose(), 1.0, tol);
  return out;
}

Vector solve_ls(const CholFactor& l, const Matrix& a, const Vector& y) {
  if (a.cols() != l.dim() || a.rows() != y.size()) {
    throw_error(LinalgError::Kind::kDimensionMismatch, "solve_ls: dimension mismatch");
  }
  return l.solve(a.transpose() * y);
}

std::vector<double> singular_values(const Matrix& m) {
  if (m.size() == 0) return {};
  Matrix u = m.rows() >= m.cols() ? m : Matrix(m.transpose());
  const Index cols = u.cols();
  constexpr double eps = 1e-15;
  constexpr int kMaxSweeps = 80;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p + 1 < cols; ++p) {
      for (Index q = p + 1; q < cols; ++q) {
        const double alpha = u.col(p).squaredNorm();
        const double beta = u.col(q).squaredNorm();
        const double gamma = u.col(p).dot(u.col(q));
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        Vector up = u.col(p);
        u.col(p) = c * up - s * u.col(q);
        u.col(q) = s * up + c * u.col(q);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(static_cast<std::size_t>(cols));
  for (Index j = 0; j < cols; ++j) sv[static_cast<std::size_t>(j)] = u.col(j).norm();
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

}  // namespace gard::linalg
