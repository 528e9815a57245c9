#include "stardmp/matcore.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace stardmp {

namespace {

void require_square(const CMatrix& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw ShapeError(std::string(who) + ": matrix must be square, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

}  // namespace

CMatrix identity(Index n) { return CMatrix::Identity(n, n); }

double max_abs(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

CMatrix adjoint(const CMatrix& a) { return a.adjoint(); }

CMatrix mat_pow(const CMatrix& a, long k) {
  require_square(a, "mat_pow");
  if (k < 0) throw std::invalid_argument("mat_pow: negative exponent");
  CMatrix result = CMatrix::Identity(a.rows(), a.cols());
  CMatrix base = a;
  // Binary exponentiation; k is tiny here but this keeps roundoff growth
  // at O(log k) products.
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

Index rank(const CMatrix& a, const Tolerance& tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff =
      tol.rank_rel * static_cast<double>(std::max(a.rows(), a.cols())) * sv(0);
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++r;
  }
  return r;
}

std::optional<CMatrix> inverse(const CMatrix& a, const Tolerance& tol) {
  require_square(a, "inverse");
  const Index n = a.rows();
  if (n == 0) return CMatrix(0, 0);
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = tol.rank_rel * static_cast<double>(n) * sv(0);
  for (Index i = 0; i < n; ++i) {
    if (!(sv(i) > cutoff)) return std::nullopt;
  }
  Eigen::VectorXd inv_sv = sv.cwiseInverse();
  return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();
}

bool approx_eq(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("approx_eq: shape mismatch");
  }
  const double scale = 1.0 + std::max(max_abs(a), max_abs(b));
  return max_abs(a - b) <= tol.eq_tol * scale;
}

bool is_zero(const CMatrix& a, const Tolerance& tol, double scale) {
  return max_abs(a) <= tol.eq_tol * (1.0 + scale);
}

bool is_hermitian(const CMatrix& a, const Tolerance& tol) {
  require_square(a, "is_hermitian");
  return approx_eq(a, adjoint(a), tol);
}

bool is_nilpotent(const CMatrix& a, const Tolerance& tol) {
  require_square(a, "is_nilpotent");
  const Index n = a.rows();
  if (n == 0) return true;
  const double norm = max_abs(a);
  if (norm == 0.0) return true;
  // Normalize first: nilpotency is scale invariant, and powering the
  // normalized matrix keeps roundoff at machine scale instead of norm^n.
  const CMatrix scaled = a / norm;
  return approx_eq(mat_pow(scaled, static_cast<long>(n)), CMatrix::Zero(n, n), tol);
}

bool is_idempotent(const CMatrix& a, const Tolerance& tol) {
  require_square(a, "is_idempotent");
  return approx_eq(a * a, a, tol);
}

}  // namespace stardmp
