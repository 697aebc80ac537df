#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "sparsemix/errors.hpp"

namespace sparsemix {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Symmetric positive definite matrix held together with its lower Cholesky
/// factor L (A = L Lᵀ, diag(L) > 0). Construct through cholesky(), identity(),
/// diagonal() or from_factor().
class SpdMatrix {
 public:
  SpdMatrix() = default;

  static SpdMatrix identity(Eigen::Index r) {
    SpdMatrix s;
    s.matrix_ = Matrix::Identity(r, r);
    s.factor_ = Matrix::Identity(r, r);
    return s;
  }

  static SpdMatrix diagonal(const Vector& d) {
    if ((d.array() <= 0.0).any() || !d.allFinite()) {
      fail(ErrorCode::NotSpd, "diagonal entries must be positive and finite");
    }
    SpdMatrix s;
    s.matrix_ = d.asDiagonal();
    s.factor_ = d.array().sqrt().matrix().asDiagonal();
    return s;
  }

  /// Takes a lower-triangular factor with strictly positive diagonal.
  static SpdMatrix from_factor(const Matrix& lower) {
    if (lower.rows() != lower.cols()) fail(ErrorCode::InvalidArgument, "factor must be square");
    if ((lower.diagonal().array() <= 0.0).any() || !lower.allFinite()) {
      fail(ErrorCode::NotSpd, "factor diagonal must be positive");
    }
    SpdMatrix s;
    s.factor_ = lower.triangularView<Eigen::Lower>();
    s.matrix_ = s.factor_ * s.factor_.transpose();
    return s;
  }

  Eigen::Index dim() const noexcept { return factor_.rows(); }
  const Matrix& matrix() const noexcept { return matrix_; }
  const Matrix& factor() const noexcept { return factor_; }

  double log_det() const { return 2.0 * factor_.diagonal().array().log().sum(); }

  Vector solve(const Vector& b) const {
    Vector y = factor_.triangularView<Eigen::Lower>().solve(b);
    return factor_.transpose().triangularView<Eigen::Upper>().solve(y);
  }

  Matrix inverse() const {
    Matrix linv = factor_.triangularView<Eigen::Lower>().solve(Matrix::Identity(dim(), dim()));
    Matrix inv = linv.transpose() * linv;
    return 0.5 * (inv + inv.transpose());
  }

  /// dᵀ A⁻¹ d through one triangular solve.
  double inv_quad(const Vector& d) const {
    return factor_.triangularView<Eigen::Lower>().solve(d).squaredNorm();
  }

 private:
  Matrix matrix_;
  Matrix factor_;
};

namespace detail {

inline bool try_llt(const Matrix& a, Matrix& lower) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) return false;
  lower = llt.matrixL();
  return lower.allFinite() && (lower.diagonal().array() > 0.0).all();
}

}  // namespace detail

/// Cholesky factorization. A failed pivot is retried with diagonal jitter of
/// 1e-10 times the mean diagonal, escalating by 10x up to 1e-4; beyond that
/// NotSpd is raised.
inline SpdMatrix cholesky(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    fail(ErrorCode::InvalidArgument, "cholesky needs a non-empty square matrix");
  }
  if (!a.allFinite()) fail(ErrorCode::NotSpd, "matrix has non-finite entries");
  const double scale = a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    fail(ErrorCode::InvalidArgument, "matrix is not symmetric");
  }
  Matrix sym = 0.5 * (a + a.transpose());
  Matrix lower;
  if (detail::try_llt(sym, lower)) return SpdMatrix::from_factor(lower);

  const double mean_diag = sym.diagonal().mean();
  if (mean_diag > 0.0) {
    for (double rel = 1e-10; rel <= 1.0001e-4; rel *= 10.0) {
      Matrix jittered = sym;
      jittered.diagonal().array() += rel * mean_diag;
      if (detail::try_llt(jittered, lower)) return SpdMatrix::from_factor(lower);
    }
  }
  fail(ErrorCode::NotSpd, "matrix is not positive definite (jitter exhausted)");
}

inline double mahalanobis(const Vector& x, const Vector& c, const SpdMatrix& s) {
  if (x.size() != c.size() || x.size() != s.dim()) {
    fail(ErrorCode::InvalidArgument, "mahalanobis: dimension mismatch");
  }
  return std::sqrt(s.inv_quad(x - c));
}

}  // namespace sparsemix
