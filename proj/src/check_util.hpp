#pragma once

// Internal helpers shared by the statement-checking translation units.
// Not installed with the public headers.

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "stardmp/additive.hpp"
#include "stardmp/geninv.hpp"
#include "stardmp/matcore.hpp"

namespace stardmp::detail {

inline HypothesisCheck predicate_check(std::string label, bool ok) {
  return HypothesisCheck{std::move(label), ok ? 0.0 : 1.0, ok};
}

inline HypothesisCheck zero_check(std::string label, const CMatrix& expr,
                                  double scale, const Tolerance& tol) {
  const double residual = max_abs(expr);
  return HypothesisCheck{std::move(label), residual,
                         residual <= tol.eq_tol * (1.0 + scale)};
}

inline HypothesisCheck eq_check(std::string label, const CMatrix& x,
                                const CMatrix& y, const Tolerance& tol) {
  return HypothesisCheck{std::move(label), max_abs(x - y), approx_eq(x, y, tol)};
}

inline bool all_pass(const std::vector<HypothesisCheck>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

// *-DMP verdict that also folds the report's internal consistency into an
// accumulator (used for TheoremVerdict.reports_consistent).
inline bool dmp(const CMatrix& m, const Tolerance& tol, bool* consistent) {
  const StarDMPReport r = is_star_dmp(m, tol);
  if (consistent) *consistent = *consistent && r.consistent;
  return r.verdict;
}

inline double pscale(std::initializer_list<const CMatrix*> factors) {
  double s = 1.0;
  for (const CMatrix* f : factors) s *= 1.0 + max_abs(*f);
  return s;
}

inline std::vector<CMatrix> power_table(const CMatrix& a, long top) {
  std::vector<CMatrix> powers;
  powers.reserve(static_cast<std::size_t>(top) + 1);
  powers.push_back(CMatrix::Identity(a.rows(), a.cols()));
  for (long k = 1; k <= top; ++k) powers.push_back(powers.back() * a);
  return powers;
}

}  // namespace stardmp::detail
