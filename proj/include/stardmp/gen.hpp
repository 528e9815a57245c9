#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "stardmp/blockmat.hpp"
#include "stardmp/matcore.hpp"

namespace stardmp {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic instance description.  Identical specs produce bit
/// identical matrices on the same build.
struct GenSpec {
  Index dim = 4;
  Index core_rank = 2;
  std::uint64_t seed = 0;
  double magnitude = 1.0;
};

/// Seeded source of randomness: std::mt19937_64 driving 53-bit uniforms in
/// [0, 1); complex standard normals come from the polar Box-Muller
/// transform applied to two uniforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  Complex cnormal();
  /// Uniform integer in [lo, hi], inclusive.
  long range(long lo, long hi);

 private:
  std::mt19937_64 engine_;
};

/// Derived seed for retries and sub-draws (splitmix64 of seed ^ salt).
std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t salt);

CMatrix random_matrix(Rng& rng, Index rows, Index cols, double magnitude);
CMatrix random_unitary(Rng& rng, Index n);

/// Unrestricted dense complex matrix.
CMatrix gen_random(const GenSpec& spec);
CMatrix gen_random_rect(std::uint64_t seed, Index rows, Index cols, double magnitude);

/// U diag(T, N) U* with T invertible of size core_rank (singular values
/// pinned inside [0.1, 3] * magnitude) and N strictly upper triangular.
CMatrix gen_star_dmp(const GenSpec& spec);

/// U diag(T, 0) U*: group invertible with Hermitian a a^#.
CMatrix gen_ep(const GenSpec& spec);

/// Pair with disjoint supports in a common unitary frame, so
/// ab = ba = a*b = 0 and both factors are *-DMP.  Requires dim >= 2.
std::pair<CMatrix, CMatrix> gen_lemma21_pair(const GenSpec& spec);

/// Hypothesis-satisfying pairs for the respective additive statements.
/// Every instance is re-verified before emission; failing draws are
/// retried with a derived seed and a bounded retry budget.
std::pair<CMatrix, CMatrix> gen_thm23_pair(const GenSpec& spec);
std::pair<CMatrix, CMatrix> gen_thm32_pair(const GenSpec& spec);
std::pair<CMatrix, CMatrix> gen_thm33_pair(const GenSpec& spec);
std::pair<CMatrix, CMatrix> gen_cor24_pair(const GenSpec& spec);
std::pair<CMatrix, CMatrix> gen_cor34_pair(const GenSpec& spec);

/// Triple (a, b, d) for the block triangular criterion.  Even seeds build
/// the coupling inside the core-to-core corner so the sums vanish; odd
/// seeds place mass against a spectral idempotent so they cannot.
struct Lemma22Triple {
  CMatrix a, b, d;
  bool sums_satisfied = false;
};
Lemma22Triple gen_lemma22_triple(const GenSpec& spec);

/// Hypothesis-satisfying block instances for L4.1, T4.2, T4.4, T4.6 (and
/// their mirrored corollaries via swap_conjugate).
BlockMatrix gen_block(const std::string& theorem_id, const GenSpec& spec);

/// A valid instance with exactly one labelled hypothesis broken.
struct NearMiss {
  std::string theorem_id;
  std::string broken;
  std::vector<CMatrix> mats;  // (a, b) for pair statements, (B, C) for L4.1
};

std::vector<std::string> near_miss_theorems();
std::vector<std::string> near_miss_labels(const std::string& theorem_id);
NearMiss gen_near_miss(const std::string& theorem_id, const GenSpec& spec);
NearMiss gen_near_miss(const std::string& theorem_id, const std::string& label,
                       const GenSpec& spec);

/// Labels of the hypotheses that fail on this instance.
std::vector<std::string> broken_hypotheses(const NearMiss& nm, const Tolerance& tol);

}  // namespace stardmp
