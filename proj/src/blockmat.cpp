#include "stardmp/blockmat.hpp"

#include <algorithm>
#include <cmath>

#include "check_util.hpp"

namespace stardmp {

using detail::all_pass;
using detail::dmp;
using detail::eq_check;
using detail::power_table;
using detail::predicate_check;
using detail::pscale;
using detail::zero_check;

namespace {

void require_blocks(const BlockMatrix& blocks, const char* who) {
  const Index n = blocks.A.rows();
  const auto square_n = [n](const CMatrix& m) {
    return m.rows() == n && m.cols() == n;
  };
  if (n != blocks.A.cols() || !square_n(blocks.B) || !square_n(blocks.C) ||
      !square_n(blocks.D)) {
    throw ShapeError(std::string(who) + ": blocks must be square with equal size");
  }
}

// A^D B D^D C must be nilpotent.  The product frequently cancels to roundoff;
// classify that as the zero matrix (trivially nilpotent) against the ambient
// scale of the four factors instead of renormalizing noise to O(1).
bool cross_nilpotent(const BlockMatrix& blocks, const Tolerance& tol) {
  const CMatrix ad = drazin(blocks.A, tol).result.drazin;
  const CMatrix dd = drazin(blocks.D, tol).result.drazin;
  const CMatrix cross = ad * blocks.B * dd * blocks.C;
  const double scale =
      max_abs(ad) * max_abs(blocks.B) * max_abs(dd) * max_abs(blocks.C);
  return is_zero(cross, tol, scale) || is_nilpotent(cross, tol);
}

// Shared preamble: the diagonal blocks and both products of the off-diagonal
// blocks carry the property under test.
void preamble_checks(const BlockMatrix& blocks, const Tolerance& tol,
                     bool* consistent, std::vector<HypothesisCheck>& out) {
  out.push_back(predicate_check("A_star_dmp", dmp(blocks.A, tol, consistent)));
  out.push_back(predicate_check("D_star_dmp", dmp(blocks.D, tol, consistent)));
  out.push_back(predicate_check("BC_star_dmp",
                                dmp(blocks.B * blocks.C, tol, consistent)));
  out.push_back(predicate_check("CB_star_dmp",
                                dmp(blocks.C * blocks.B, tol, consistent)));
}

std::vector<HypothesisCheck> lemma41_hyps_impl(const CMatrix& B, const CMatrix& C,
                                               const Tolerance& tol,
                                               bool* consistent) {
  if (B.rows() != C.cols() || B.cols() != C.rows()) {
    throw ShapeError("lemma41: need B (r x s) and C (s x r)");
  }
  std::vector<HypothesisCheck> checks;
  checks.push_back(predicate_check("BC_star_dmp", dmp(B * C, tol, consistent)));
  checks.push_back(predicate_check("CB_star_dmp", dmp(C * B, tol, consistent)));
  return checks;
}

std::vector<HypothesisCheck> thm42_hyps_impl(const BlockMatrix& blocks,
                                             const Tolerance& tol,
                                             bool* consistent) {
  require_blocks(blocks, "thm42");
  std::vector<HypothesisCheck> checks;
  preamble_checks(blocks, tol, consistent, checks);
  checks.push_back(eq_check("AB_BD", blocks.A * blocks.B, blocks.B * blocks.D, tol));
  checks.push_back(eq_check("DC_CA", blocks.D * blocks.C, blocks.C * blocks.A, tol));
  checks.push_back(eq_check("Astar_B_BDstar", adjoint(blocks.A) * blocks.B,
                            blocks.B * adjoint(blocks.D), tol));
  checks.push_back(eq_check("Dstar_C_CAstar", adjoint(blocks.D) * blocks.C,
                            blocks.C * adjoint(blocks.A), tol));
  checks.push_back(
      predicate_check("ADBDDC_nilpotent", cross_nilpotent(blocks, tol)));
  return checks;
}

std::vector<HypothesisCheck> thm44_hyps_impl(const BlockMatrix& blocks,
                                             const Tolerance& tol,
                                             bool* consistent) {
  require_blocks(blocks, "thm44");
  std::vector<HypothesisCheck> checks;
  preamble_checks(blocks, tol, consistent, checks);
  checks.push_back(eq_check("AB_BD", blocks.A * blocks.B, blocks.B * blocks.D, tol));
  checks.push_back(eq_check("DC_CA", blocks.D * blocks.C, blocks.C * blocks.A, tol));
  checks.push_back(eq_check("Bstar_A_DBstar", adjoint(blocks.B) * blocks.A,
                            blocks.D * adjoint(blocks.B), tol));
  checks.push_back(
      predicate_check("ADBDDC_nilpotent", cross_nilpotent(blocks, tol)));
  return checks;
}

struct BlockSums {
  bool found = false;
  long witness = 0;
  double res1 = 0.0;
  double res2 = 0.0;
};

// Vanishing conditions coupling B to the spectral projections of A and D:
//   sum_{i=1}^{i(D)} A^{m-i} B D^{i-1} D^pi  and
//   sum_{i=1}^{i(A)} A^{i-1} A^pi B D^{m-i},
// both at one common exponent m.
BlockSums thm46_sums(const BlockMatrix& blocks, const DrazinResult& da,
                     const DrazinResult& dd, const Tolerance& tol) {
  const Index n = blocks.A.rows();
  const long m_lo = std::max<long>({1, da.index, dd.index});
  const long m_hi = m_lo + static_cast<long>(n);
  const auto ap = power_table(blocks.A, m_hi);
  const auto dp = power_table(blocks.D, m_hi);
  // Summands are bounded by base^{m-1} * ||B||; a raw-norm base floored at 1
  // keeps the vanishing cutoff from outgrowing genuine violations.
  const double base = std::max({1.0, max_abs(blocks.A), max_abs(blocks.D)});
  const double b_norm = 1.0 + max_abs(blocks.B);

  BlockSums out;
  for (long m = m_lo; m <= m_hi; ++m) {
    CMatrix sum1 = CMatrix::Zero(n, n);
    for (long i = 1; i <= dd.index; ++i) {
      sum1 += ap[static_cast<std::size_t>(m - i)] * blocks.B *
              dp[static_cast<std::size_t>(i - 1)] * dd.spectral_idempotent;
    }
    CMatrix sum2 = CMatrix::Zero(n, n);
    for (long i = 1; i <= da.index; ++i) {
      sum2 += ap[static_cast<std::size_t>(i - 1)] * da.spectral_idempotent *
              blocks.B * dp[static_cast<std::size_t>(m - i)];
    }
    const double scale = static_cast<double>(m) *
                         std::pow(base, static_cast<double>(m)) * b_norm;
    const double r1 = max_abs(sum1);
    const double r2 = max_abs(sum2);
    if (m == m_lo) {
      out.res1 = r1;
      out.res2 = r2;
    }
    if (is_zero(sum1, tol, scale) && is_zero(sum2, tol, scale)) {
      out.found = true;
      out.witness = m;
      out.res1 = r1;
      out.res2 = r2;
      break;
    }
  }
  return out;
}

// One-directional verdict: hypotheses imply the assembled matrix is *-DMP.
TheoremVerdict one_directional(std::string id, const CMatrix& m,
                               std::vector<HypothesisCheck> checks,
                               bool consistent, const Tolerance& tol) {
  TheoremVerdict v;
  v.theorem_id = std::move(id);
  v.hypothesis_residuals = std::move(checks);
  v.hypotheses_hold = all_pass(v.hypothesis_residuals);
  v.side1 = dmp(m, tol, &consistent);
  v.side2 = true;
  v.equivalence_ok = !v.hypotheses_hold || v.side1;
  v.reports_consistent = consistent;
  return v;
}

}  // namespace

CMatrix assemble(const BlockMatrix& blocks) {
  require_blocks(blocks, "assemble");
  const Index n = blocks.A.rows();
  CMatrix m(2 * n, 2 * n);
  m << blocks.A, blocks.B, blocks.C, blocks.D;
  return m;
}

BlockMatrix extract_blocks(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw ShapeError("extract_blocks: need a square matrix of even dimension");
  }
  const Index n = m.rows() / 2;
  BlockMatrix blocks;
  blocks.A = m.topLeftCorner(n, n);
  blocks.B = m.topRightCorner(n, n);
  blocks.C = m.bottomLeftCorner(n, n);
  blocks.D = m.bottomRightCorner(n, n);
  return blocks;
}

BlockMatrix swap_conjugate(const BlockMatrix& blocks) {
  require_blocks(blocks, "swap_conjugate");
  return BlockMatrix{blocks.D, blocks.C, blocks.B, blocks.A};
}

std::vector<HypothesisCheck> lemma41_hypotheses(const CMatrix& B, const CMatrix& C,
                                                const Tolerance& tol) {
  return lemma41_hyps_impl(B, C, tol, nullptr);
}

std::vector<HypothesisCheck> thm42_hypotheses(const BlockMatrix& blocks,
                                              const Tolerance& tol) {
  return thm42_hyps_impl(blocks, tol, nullptr);
}

std::vector<HypothesisCheck> thm44_hypotheses(const BlockMatrix& blocks,
                                              const Tolerance& tol) {
  return thm44_hyps_impl(blocks, tol, nullptr);
}

TheoremVerdict lemma41_check(const CMatrix& B, const CMatrix& C,
                             const Tolerance& tol) {
  bool consistent = true;
  auto checks = lemma41_hyps_impl(B, C, tol, &consistent);
  const Index r = B.rows();
  const Index s = B.cols();
  CMatrix m = CMatrix::Zero(r + s, r + s);
  m.topRightCorner(r, s) = B;
  m.bottomLeftCorner(s, r) = C;
  return one_directional("L4.1", m, std::move(checks), consistent, tol);
}

TheoremVerdict thm42_check(const BlockMatrix& blocks, const Tolerance& tol) {
  bool consistent = true;
  auto checks = thm42_hyps_impl(blocks, tol, &consistent);
  return one_directional("T4.2", assemble(blocks), std::move(checks), consistent,
                         tol);
}

TheoremVerdict thm44_check(const BlockMatrix& blocks, const Tolerance& tol) {
  bool consistent = true;
  auto checks = thm44_hyps_impl(blocks, tol, &consistent);
  return one_directional("T4.4", assemble(blocks), std::move(checks), consistent,
                         tol);
}

TheoremVerdict thm46_check(const BlockMatrix& blocks, const Tolerance& tol) {
  require_blocks(blocks, "thm46");
  bool consistent = true;
  std::vector<HypothesisCheck> checks;
  preamble_checks(blocks, tol, &consistent, checks);
  const double ps = pscale({&blocks.B, &blocks.C});
  checks.push_back(zero_check("BC_zero", blocks.B * blocks.C, ps, tol));
  checks.push_back(zero_check("CB_zero", blocks.C * blocks.B, ps, tol));
  checks.push_back(eq_check("CA_DC", blocks.C * blocks.A, blocks.D * blocks.C, tol));
  checks.push_back(eq_check("ACstar_CstarD", blocks.A * adjoint(blocks.C),
                            adjoint(blocks.C) * blocks.D, tol));

  const DrazinOutput da = drazin(blocks.A, tol);
  const DrazinOutput dd = drazin(blocks.D, tol);
  const BlockSums sums = thm46_sums(blocks, da.result, dd.result, tol);
  checks.push_back(HypothesisCheck{"coupling_sums_vanish",
                                   std::max(sums.res1, sums.res2), sums.found});

  TheoremVerdict v = one_directional("T4.6", assemble(blocks), std::move(checks),
                                     consistent, tol);
  if (sums.found) v.witness_m = sums.witness;
  v.residuals["coupling_sum1"] = sums.res1;
  v.residuals["coupling_sum2"] = sums.res2;
  return v;
}

TheoremVerdict cor43_check(const BlockMatrix& blocks, const Tolerance& tol) {
  // Conjugating by the half-swap involution turns this statement into the
  // theorem above; hypothesis labels refer to the swapped blocks.
  TheoremVerdict v = thm42_check(swap_conjugate(blocks), tol);
  v.theorem_id = "C4.3";
  return v;
}

TheoremVerdict cor45_check(const BlockMatrix& blocks, const Tolerance& tol) {
  TheoremVerdict v = thm44_check(swap_conjugate(blocks), tol);
  v.theorem_id = "C4.5";
  return v;
}

TheoremVerdict cor47_check(const BlockMatrix& blocks, const Tolerance& tol) {
  TheoremVerdict v = thm46_check(swap_conjugate(blocks), tol);
  v.theorem_id = "C4.7";
  return v;
}

}  // namespace stardmp
