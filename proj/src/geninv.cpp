#include "stardmp/geninv.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <vector>

namespace stardmp {

namespace {

void require_square(const CMatrix& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw ShapeError(std::string(who) + ": matrix must be square, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

double sigma_max(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

// Rank of a power a^k against an absolute cutoff anchored at
// sigma_max(a)^k.  Using each power's own largest singular value would let
// roundoff from the nilpotent part masquerade as genuine rank.
Index anchored_rank(const CMatrix& p, double cutoff) {
  Eigen::JacobiSVD<CMatrix> svd(p);
  const auto& sv = svd.singularValues();
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++r;
  }
  return r;
}

// Dimension of the invertible spectral class as the anchored rank of the
// stabilized power a^k.  SVD measures this reliably even when the Schur
// diagonal of a defective zero eigenvalue carries O(eps^{1/k}) noise that
// no magnitude threshold can separate.
Index core_dimension(const CMatrix& a, long k, const Tolerance& tol) {
  const Index n = a.rows();
  if (n == 0) return 0;
  if (k <= 0) return n;
  const double cutoff = tol.rank_rel * static_cast<double>(n) *
                        std::pow(sigma_max(a), static_cast<double>(k));
  return anchored_rank(mat_pow(a, k), cutoff);
}

double cert_threshold(const CMatrix& a, long k) {
  const double power = std::max(2.0, static_cast<double>(k) + 1.0);
  return 1e-7 * (1.0 + std::pow(max_abs(a), power));
}

void finish_cert(InverseCertificate& cert, double threshold) {
  cert.max_residual = 0.0;
  for (const auto& [label, value] : cert.residuals) {
    cert.max_residual = std::max(cert.max_residual, value);
  }
  cert.pass = cert.max_residual <= threshold;
}

InverseCertificate certify_drazin_like(InverseCertificate::Kind kind,
                                       const CMatrix& a, const CMatrix& x, long k,
                                       bool hermitian_ax) {
  // hermitian_ax: (ax)* = ax replaces ax = xa (pseudo core vs Drazin).
  InverseCertificate cert;
  cert.kind = kind;
  const CMatrix ak = mat_pow(a, k);
  cert.residuals["x_ak1_ak"] = max_abs(x * (ak * a) - ak);
  cert.residuals["ax2_x"] = max_abs(a * x * x - x);
  if (hermitian_ax) {
    const CMatrix ax = a * x;
    cert.residuals["ax_hermitian"] = max_abs(ax - adjoint(ax));
  } else {
    cert.residuals["ax_xa"] = max_abs(a * x - x * a);
  }
  finish_cert(cert, cert_threshold(a, k));
  return cert;
}

// Unitary 2x2 whose first column is the normalized (v1, v2).
Eigen::Matrix2cd givens_from(Complex v1, Complex v2) {
  const double nrm = std::sqrt(std::norm(v1) + std::norm(v2));
  Eigen::Matrix2cd g;
  if (nrm == 0.0) {
    g.setIdentity();
    return g;
  }
  const Complex c = v1 / nrm;
  const Complex s = v2 / nrm;
  g << c, -std::conj(s), s, std::conj(c);
  return g;
}

}  // namespace

const char* kind_name(InverseCertificate::Kind k) {
  switch (k) {
    case InverseCertificate::Kind::MoorePenrose: return "moore_penrose";
    case InverseCertificate::Kind::Group: return "group";
    case InverseCertificate::Kind::Drazin: return "drazin";
    case InverseCertificate::Kind::Core: return "core";
    case InverseCertificate::Kind::PseudoCore: return "pseudo_core";
  }
  return "unknown";
}

long index(const CMatrix& a, const Tolerance& tol) {
  require_square(a, "index");
  const Index n = a.rows();
  if (n == 0) return 0;
  const double smax = sigma_max(a);
  Index rank_prev = n;  // rank(a^0) = rank(I)
  CMatrix power = CMatrix::Identity(n, n);
  double scale = 1.0;  // sigma_max(a)^k
  for (long k = 0; k <= static_cast<long>(n); ++k) {
    power = power * a;
    scale *= smax;
    const double cutoff = tol.rank_rel * static_cast<double>(n) * scale;
    const Index rank_next = anchored_rank(power, cutoff);
    if (rank_next == rank_prev) return k;
    rank_prev = rank_next;
  }
  return static_cast<long>(n);  // ranks stabilize within n steps
}

MoorePenroseOutput moore_penrose(const CMatrix& a, const Tolerance& tol) {
  MoorePenroseOutput out;
  if (a.size() == 0) {
    out.pinv = CMatrix(a.cols(), a.rows());
    out.cert.kind = InverseCertificate::Kind::MoorePenrose;
    out.cert.pass = true;
    return out;
  }
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff =
      tol.rank_rel * static_cast<double>(std::max(a.rows(), a.cols())) *
      (sv.size() ? sv(0) : 0.0);
  Eigen::VectorXd inv_sv(sv.size());
  for (Index i = 0; i < sv.size(); ++i) {
    inv_sv(i) = sv(i) > cutoff ? 1.0 / sv(i) : 0.0;
  }
  out.pinv = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();

  const CMatrix& x = out.pinv;
  const CMatrix ax = a * x;
  const CMatrix xa = x * a;
  out.cert.kind = InverseCertificate::Kind::MoorePenrose;
  out.cert.residuals["axa_a"] = max_abs(ax * a - a);
  out.cert.residuals["xax_x"] = max_abs(xa * x - x);
  out.cert.residuals["ax_hermitian"] = max_abs(ax - adjoint(ax));
  out.cert.residuals["xa_hermitian"] = max_abs(xa - adjoint(xa));
  finish_cert(out.cert, cert_threshold(a, 1));
  return out;
}

CMatrix drazin_cline(const CMatrix& a, long k, const Tolerance& tol) {
  require_square(a, "drazin_cline");
  if (k <= 0) {
    auto inv = inverse(a, tol);
    if (inv) return *inv;
    k = 1;  // rank test disagrees with index 0; degrade to the k = 1 formula
  }
  if (core_dimension(a, k, tol) == 0) {
    // Nilpotent: a^k vanishes and the formula collapses to zero.  Evaluating
    // it anyway would pseudo-invert roundoff, whose relative rank cutoff
    // treats the noise as genuine directions.
    return CMatrix::Zero(a.rows(), a.cols());
  }
  const CMatrix ak = mat_pow(a, k);
  const CMatrix mid = moore_penrose(mat_pow(a, 2 * k + 1), tol).pinv;
  return ak * mid * ak;
}

CMatrix drazin_schur(const CMatrix& a, const Tolerance& tol) {
  require_square(a, "drazin_schur");
  const Index n = a.rows();
  if (n == 0) return CMatrix(0, 0);

  // The size of the invertible class comes from the rank of the stabilized
  // power; clustering the Schur diagonal by magnitude alone misreads the
  // eigenvalue noise of defective zero eigenvalues as genuine spectrum.
  const Index r_target = core_dimension(a, index(a, tol), tol);
  if (r_target == 0) return CMatrix::Zero(n, n);

  Eigen::ComplexSchur<CMatrix> schur(a);
  CMatrix t = schur.matrixT();
  CMatrix u = schur.matrixU();

  // Split eigenvalues into the invertible class (the r_target largest by
  // magnitude) and the zero class.
  double theta = -1.0;
  if (r_target < n) {
    std::vector<double> mags(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) mags[static_cast<std::size_t>(i)] = std::abs(t(i, i));
    std::sort(mags.begin(), mags.end(), std::greater<>());
    theta = 0.5 * (mags[static_cast<std::size_t>(r_target - 1)] +
                   mags[static_cast<std::size_t>(r_target)]);
  }
  auto is_zero_class = [&](Complex lambda) { return std::abs(lambda) <= theta; };

  // Bubble the invertible-class eigenvalues to the top-left with adjacent
  // swaps.  Swapping neighbours k, k+1 of a triangular matrix uses the
  // unitary whose first column is the eigenvector of the trailing
  // eigenvalue inside the 2x2 corner.
  bool moved = true;
  while (moved) {
    moved = false;
    for (Index i = 0; i + 1 < n; ++i) {
      if (is_zero_class(t(i, i)) && !is_zero_class(t(i + 1, i + 1))) {
        const Eigen::Matrix2cd g =
            givens_from(t(i, i + 1), t(i + 1, i + 1) - t(i, i));
        t.block(0, i, n, 2) = t.block(0, i, n, 2) * g;
        t.block(i, 0, 2, n) = g.adjoint() * t.block(i, 0, 2, n);
        u.block(0, i, n, 2) = u.block(0, i, n, 2) * g;
        t(i + 1, i) = Complex(0.0, 0.0);
        moved = true;
      }
    }
  }

  Index r = 0;
  while (r < n && !is_zero_class(t(r, r))) ++r;

  CMatrix core = CMatrix::Zero(n, n);
  if (r > 0) {
    const CMatrix t1 = t.topLeftCorner(r, r);
    const CMatrix t1_inv = t1.triangularView<Eigen::Upper>().solve(
        CMatrix::Identity(r, r));
    core.topLeftCorner(r, r) = t1_inv;
    const Index s = n - r;
    if (s > 0) {
      // Drazin inverse of [[T1, T12], [0, N]] with N nilpotent:
      // upper-right block is sum_{j} T1^{-(j+2)} T12 N^j.
      CMatrix t2 = t.bottomRightCorner(s, s);
      for (Index i = 0; i < s; ++i) t2(i, i) = Complex(0.0, 0.0);
      const CMatrix t12 = t.topRightCorner(r, s);
      CMatrix z = CMatrix::Zero(r, s);
      CMatrix t1_inv_pow = t1_inv * t1_inv;
      CMatrix t2_pow = CMatrix::Identity(s, s);
      for (Index j = 0; j < s; ++j) {
        z += t1_inv_pow * t12 * t2_pow;
        t1_inv_pow = t1_inv_pow * t1_inv;
        t2_pow = t2_pow * t2;
      }
      core.topRightCorner(r, s) = z;
    }
  }
  return u * core * u.adjoint();
}

DrazinOutput drazin(const CMatrix& a, const Tolerance& tol) {
  require_square(a, "drazin");
  const Index n = a.rows();
  DrazinOutput out;
  out.result.index = index(a, tol);

  CMatrix candidate = drazin_cline(a, out.result.index, tol);
  InverseCertificate cert = certify_drazin_like(
      InverseCertificate::Kind::Drazin, a, candidate, out.result.index, false);
  if (!cert.pass) {
    // The explicit formula degrades with the conditioning of a^{2k+1};
    // the Schur split only touches the invertible spectral part.
    const CMatrix fallback = drazin_schur(a, tol);
    InverseCertificate cert2 = certify_drazin_like(
        InverseCertificate::Kind::Drazin, a, fallback, out.result.index, false);
    if (cert2.pass || cert2.max_residual < cert.max_residual) {
      candidate = fallback;
      cert = cert2;
    }
  }
  out.result.drazin = candidate;
  out.result.spectral_idempotent = CMatrix::Identity(n, n) - a * candidate;
  out.cert = cert;
  return out;
}

std::optional<GroupInverseOutput> group_inverse(const CMatrix& a,
                                                const Tolerance& tol) {
  require_square(a, "group_inverse");
  if (index(a, tol) > 1) return std::nullopt;
  GroupInverseOutput out;
  out.inverse = drazin(a, tol).result.drazin;
  const CMatrix& x = out.inverse;
  out.cert.kind = InverseCertificate::Kind::Group;
  out.cert.residuals["axa_a"] = max_abs(a * x * a - a);
  out.cert.residuals["xax_x"] = max_abs(x * a * x - x);
  out.cert.residuals["ax_xa"] = max_abs(a * x - x * a);
  finish_cert(out.cert, cert_threshold(a, 1));
  return out;
}

std::optional<CoreInverseOutput> core_inverse(const CMatrix& a,
                                              const Tolerance& tol) {
  require_square(a, "core_inverse");
  auto group = group_inverse(a, tol);
  if (!group) return std::nullopt;
  const Index n = a.rows();
  CoreInverseOutput out;
  out.inverse = group->inverse * a * moore_penrose(a, tol).pinv;
  const CMatrix& x = out.inverse;
  const CMatrix ax = a * x;
  out.cert.kind = InverseCertificate::Kind::Core;
  out.cert.residuals["axa_a"] = max_abs(ax * a - a);
  out.cert.residuals["ax2_x"] = max_abs(ax * x - x);
  out.cert.residuals["ax_hermitian"] = max_abs(ax - adjoint(ax));
  out.cert.residuals["xa2_a"] = max_abs(x * a * a - a);

  // Range conditions, checked as rank equalities: col(x) = col(a) and
  // row(x) = row(a*).  Recorded as 0/1 residuals.
  const Index ra = rank(a, tol);
  const Index rx = rank(x, tol);
  CMatrix cols(n, 2 * n);
  cols << x, a;
  CMatrix rows(2 * n, n);
  rows << x, adjoint(a);
  const bool cols_ok = rank(cols, tol) == rx && rx == ra;
  const bool rows_ok = rank(rows, tol) == rx && rx == ra;
  out.cert.residuals["range_cols"] = cols_ok ? 0.0 : 1.0;
  out.cert.residuals["range_rows"] = rows_ok ? 0.0 : 1.0;
  finish_cert(out.cert, cert_threshold(a, 1));
  return out;
}

PseudoCoreOutput pseudo_core(const CMatrix& a, const Tolerance& tol) {
  require_square(a, "pseudo_core");
  const DrazinOutput dz = drazin(a, tol);
  const long m = std::max<long>(1, dz.result.index);
  const CMatrix am = mat_pow(a, m);
  PseudoCoreOutput out;
  out.pcore = dz.result.drazin * am * moore_penrose(am, tol).pinv;
  out.cert = certify_drazin_like(InverseCertificate::Kind::PseudoCore, a,
                                 out.pcore, dz.result.index, true);
  return out;
}

bool is_projection(const CMatrix& e, const Tolerance& tol) {
  require_square(e, "is_projection");
  return is_idempotent(e, tol) && is_hermitian(e, tol);
}

bool is_ep(const CMatrix& a, const Tolerance& tol) {
  require_square(a, "is_ep");
  auto group = group_inverse(a, tol);
  if (!group) return false;
  return is_hermitian(a * group->inverse, tol);
}

StarDMPReport is_star_dmp(const CMatrix& a, const Tolerance& tol) {
  require_square(a, "is_star_dmp");
  StarDMPReport report;

  const DrazinOutput dz = drazin(a, tol);
  const CMatrix& e = dz.result.spectral_idempotent;
  report.char2 = is_projection(e, tol);

  const PseudoCoreOutput pc = pseudo_core(a, tol);
  report.char3 = approx_eq(pc.pcore, dz.result.drazin, tol);

  const bool commutes = approx_eq(a * e, e * a, tol);
  const bool shifted_invertible = inverse(a + e, tol).has_value();
  // a*e is sized by a (e is near-idempotent, so O(1) or larger when oblique).
  // When the product cancels to roundoff at that ambient scale it is the zero
  // matrix, which is trivially nilpotent; feeding raw noise to the power test
  // would rescale it to O(1) and wrongly reject.
  const CMatrix ae = a * e;
  const double ae_scale = max_abs(a) * (1.0 + max_abs(e));
  const bool nilpotent_part =
      is_zero(ae, tol, ae_scale) || is_nilpotent(ae, tol);
  report.char5 = is_projection(e, tol) && commutes && shifted_invertible &&
                 nilpotent_part;

  report.verdict = report.char2;
  report.consistent =
      report.char2 == report.char3 && report.char3 == report.char5;
  return report;
}

}  // namespace stardmp
