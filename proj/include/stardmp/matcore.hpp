#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>

namespace stardmp {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Comparison policy shared by every numeric decision in the library.
///
/// eq_tol scales entrywise equality tests.  rank_rel is the singular value
/// cutoff per unit of dimension: the effective cutoff used by rank() is
/// rank_rel * max(rows, cols) * sigma_max, so one Tolerance works across
/// matrix sizes.
struct Tolerance {
  double eq_tol = 1e-9;
  double rank_rel = 1e-10;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotAProjection : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

CMatrix identity(Index n);

/// Largest entry modulus; the matrix norm used throughout.
double max_abs(const CMatrix& a);

/// Conjugate transpose.
CMatrix adjoint(const CMatrix& a);

/// a^k by repeated squaring, a^0 = I.  Requires a square and k >= 0.
CMatrix mat_pow(const CMatrix& a, long k);

/// Numerical rank: number of singular values above
/// rank_rel * max(rows, cols) * sigma_max.
Index rank(const CMatrix& a, const Tolerance& tol);

/// Inverse of a square matrix, or nullopt when the rank test says singular.
std::optional<CMatrix> inverse(const CMatrix& a, const Tolerance& tol);

/// Entrywise comparison: max|a - b| <= eq_tol * (1 + max(|a|, |b|)).
/// Throws ShapeError when shapes differ.
bool approx_eq(const CMatrix& a, const CMatrix& b, const Tolerance& tol);

/// Zero test with a caller-supplied magnitude scale:
/// max|a| <= eq_tol * (1 + scale).
bool is_zero(const CMatrix& a, const Tolerance& tol, double scale = 0.0);

bool is_hermitian(const CMatrix& a, const Tolerance& tol);

/// a^n == 0 for n = dimension.
bool is_nilpotent(const CMatrix& a, const Tolerance& tol);

bool is_idempotent(const CMatrix& a, const Tolerance& tol);

}  // namespace stardmp
