#pragma once

#include <map>
#include <optional>
#include <string>

#include "stardmp/matcore.hpp"

namespace stardmp {

/// Residual record for a computed generalized inverse.  Every candidate is
/// checked against its defining equations; pass means all residuals stay
/// below 1e-7 * (1 + |a|^max(2, k+1)) where k is the power appearing in the
/// equations.
struct InverseCertificate {
  enum class Kind { MoorePenrose, Group, Drazin, Core, PseudoCore };
  Kind kind = Kind::MoorePenrose;
  std::map<std::string, double> residuals;
  double max_residual = 0.0;
  bool pass = false;
};

const char* kind_name(InverseCertificate::Kind k);

struct DrazinResult {
  CMatrix drazin;
  long index = 0;
  CMatrix spectral_idempotent;  // I - a * drazin
};

struct MoorePenroseOutput {
  CMatrix pinv;
  InverseCertificate cert;
};

struct DrazinOutput {
  DrazinResult result;
  InverseCertificate cert;
};

struct GroupInverseOutput {
  CMatrix inverse;
  InverseCertificate cert;
};

struct CoreInverseOutput {
  CMatrix inverse;
  InverseCertificate cert;
};

struct PseudoCoreOutput {
  CMatrix pcore;
  InverseCertificate cert;
};

/// Three independently evaluated characterizations of the *-DMP property.
/// char2: the spectral idempotent is a projection.
/// char3: the pseudo core inverse coincides with the Drazin inverse.
/// char5: e = spectral idempotent is a projection commuting with a, a + e
///        invertible and a*e nilpotent.
/// verdict repeats char2; consistent records whether all three agree.
struct StarDMPReport {
  bool char2 = false;
  bool char3 = false;
  bool char5 = false;
  bool verdict = false;
  bool consistent = false;
};

/// Smallest k >= 0 with rank(a^k) == rank(a^{k+1}); a^0 = I.
/// The power ranks are cut off relative to sigma_max(a)^k so that roundoff
/// in high powers cannot inflate the rank.
long index(const CMatrix& a, const Tolerance& tol);

MoorePenroseOutput moore_penrose(const CMatrix& a, const Tolerance& tol);

/// Drazin inverse.  Tries the explicit a^k * mp(a^{2k+1}) * a^k formula
/// first and falls back to a Schur core-nilpotent split when the
/// certificate rejects the candidate.
DrazinOutput drazin(const CMatrix& a, const Tolerance& tol);

/// The two Drazin routes, exposed separately so they can be cross-checked.
CMatrix drazin_cline(const CMatrix& a, long k, const Tolerance& tol);
CMatrix drazin_schur(const CMatrix& a, const Tolerance& tol);

/// Drazin inverse when index <= 1; nullopt otherwise.
std::optional<GroupInverseOutput> group_inverse(const CMatrix& a, const Tolerance& tol);

/// group(a) * a * mp(a) when index <= 1; nullopt otherwise.
std::optional<CoreInverseOutput> core_inverse(const CMatrix& a, const Tolerance& tol);

/// drazin(a) * a^m * mp(a^m) with m = index(a); defined for every square
/// complex matrix.
PseudoCoreOutput pseudo_core(const CMatrix& a, const Tolerance& tol);

/// Hermitian idempotent.
bool is_projection(const CMatrix& a, const Tolerance& tol);

/// Group invertible with a * group(a) Hermitian.
bool is_ep(const CMatrix& a, const Tolerance& tol);

StarDMPReport is_star_dmp(const CMatrix& a, const Tolerance& tol);

}  // namespace stardmp
