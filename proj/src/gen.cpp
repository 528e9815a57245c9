#include "stardmp/gen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <Eigen/QR>

#include "stardmp/additive.hpp"
#include "stardmp/geninv.hpp"

namespace stardmp {

Complex Rng::cnormal() {
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-std::log1p(-u1));
  return std::polar(r, 2.0 * std::numbers::pi * u2);
}

long Rng::range(long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = cap - cap % span;
  std::uint64_t x = raw();
  while (x >= limit) x = raw();
  return lo + static_cast<long>(x % span);
}

std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed ^ (salt * 0x9E3779B97F4A7C15ULL);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CMatrix random_matrix(Rng& rng, Index rows, Index cols, double magnitude) {
  CMatrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) a(i, j) = magnitude * rng.cnormal();
  }
  return a;
}

CMatrix random_unitary(Rng& rng, Index n) {
  if (n == 0) return CMatrix(0, 0);
  const CMatrix g = random_matrix(rng, n, n, 1.0);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  // Pin column phases so that R has positive diagonal (Haar convention).
  for (Index j = 0; j < n; ++j) {
    const Complex d = qr.matrixQR()(j, j);
    const double ad = std::abs(d);
    if (ad > 0) q.col(j) *= d / ad;
  }
  return q;
}

namespace {

constexpr std::uint64_t kSaltRandom = 0x11;
constexpr std::uint64_t kSaltRect = 0x12;
constexpr std::uint64_t kSaltStarDmp = 0x13;
constexpr std::uint64_t kSaltEp = 0x14;
constexpr std::uint64_t kSaltL21 = 0x21;
constexpr std::uint64_t kSaltT23 = 0x22;
constexpr std::uint64_t kSaltT32 = 0x23;
constexpr std::uint64_t kSaltT33 = 0x24;
constexpr std::uint64_t kSaltC24 = 0x25;
constexpr std::uint64_t kSaltC34 = 0x26;
constexpr std::uint64_t kSaltL22 = 0x27;
constexpr std::uint64_t kSaltBlock = 0x31;
constexpr std::uint64_t kSaltNearMiss = 0x41;

double span(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.uniform();
}

Complex phase(Rng& rng) {
  return std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
}

Complex value(Rng& rng, double mag) { return span(rng, 0.1, 1.0) * mag * phase(rng); }

/// W1 diag(s) W2* with singular values in [lo, hi] * mag.
CMatrix invertible_block(Rng& rng, Index n, double mag, double lo = 0.1,
                         double hi = 3.0) {
  if (n == 0) return CMatrix(0, 0);
  const CMatrix w1 = random_unitary(rng, n);
  const CMatrix w2 = random_unitary(rng, n);
  CMatrix d = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) d(i, i) = span(rng, lo, hi) * mag;
  return w1 * d * w2.adjoint();
}

/// W diag(lambda) W* with |lambda| in [lo, hi] * mag; normal, so powers have
/// singular values bounded below by (lo * mag)^k.
CMatrix normal_invertible(Rng& rng, Index n, double mag, double lo, double hi) {
  if (n == 0) return CMatrix(0, 0);
  const CMatrix w = random_unitary(rng, n);
  CMatrix d = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) d(i, i) = span(rng, lo, hi) * mag * phase(rng);
  return w * d * w.adjoint();
}

CMatrix strict_upper(Rng& rng, Index n, double mag) {
  CMatrix a = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) a(i, j) = mag * rng.cnormal();
  }
  return a;
}

CMatrix blockdiag(std::initializer_list<CMatrix> blocks) {
  Index n = 0;
  for (const CMatrix& b : blocks) n += b.rows();
  CMatrix out = CMatrix::Zero(n, n);
  Index at = 0;
  for (const CMatrix& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

/// V diag(T, N) V*: a self-contained *-DMP block of size n with core rank r.
CMatrix star_dmp_block(Rng& rng, Index n, Index r, double mag) {
  const CMatrix v = random_unitary(rng, n);
  const CMatrix core = blockdiag(
      {invertible_block(rng, r, mag), strict_upper(rng, n - r, mag)});
  return v * core * v.adjoint();
}

/// Non-normal invertible upper triangular seed: diagonal radii spaced by at
/// least 0.1 * mag and a guaranteed off-diagonal entry.
CMatrix nonnormal_seed(Rng& rng, Index n, double mag) {
  CMatrix t = strict_upper(rng, n, mag);
  for (Index i = 0; i < n; ++i) {
    t(i, i) = (0.2 + 0.2 * static_cast<double>(i) + 0.1 * rng.uniform()) * mag *
              phase(rng);
  }
  if (n >= 2) t(0, 1) = span(rng, 0.5, 1.5) * mag * phase(rng);
  return t;
}

bool all_pass(const std::vector<HypothesisCheck>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

template <typename T, typename F>
T attempt_loop(const GenSpec& spec, std::uint64_t salt, const char* what, F f) {
  for (std::uint64_t k = 0; k < 64; ++k) {
    Rng rng(seed_mix(seed_mix(spec.seed, salt), k));
    std::optional<T> out = f(rng);
    if (out) return std::move(*out);
  }
  throw GenerationError(std::string(what) + ": retry budget exhausted");
}

Index clamp_rank(const GenSpec& spec, Index limit) {
  return std::clamp<Index>(spec.core_rank, 0, limit);
}

std::pair<CMatrix, CMatrix> conj_pair(const CMatrix& u, const CMatrix& a,
                                      const CMatrix& b) {
  return {u * a * u.adjoint(), u * b * u.adjoint()};
}

}  // namespace

CMatrix gen_random(const GenSpec& spec) {
  Rng rng(seed_mix(spec.seed, kSaltRandom));
  return random_matrix(rng, spec.dim, spec.dim, spec.magnitude);
}

CMatrix gen_random_rect(std::uint64_t seed, Index rows, Index cols,
                        double magnitude) {
  Rng rng(seed_mix(seed, kSaltRect));
  return random_matrix(rng, rows, cols, magnitude);
}

CMatrix gen_star_dmp(const GenSpec& spec) {
  const Index n = spec.dim;
  const Index r = clamp_rank(spec, n);
  return attempt_loop<CMatrix>(
      spec, kSaltStarDmp, "gen_star_dmp", [&](Rng& rng) -> std::optional<CMatrix> {
        const CMatrix u = random_unitary(rng, n);
        const CMatrix core = blockdiag({invertible_block(rng, r, spec.magnitude),
                                        strict_upper(rng, n - r, spec.magnitude)});
        CMatrix a = u * core * u.adjoint();
        const StarDMPReport rep = is_star_dmp(a, Tolerance{});
        if (rep.verdict && rep.consistent) return a;
        return std::nullopt;
      });
}

CMatrix gen_ep(const GenSpec& spec) {
  const Index n = spec.dim;
  const Index r = clamp_rank(spec, n);
  return attempt_loop<CMatrix>(
      spec, kSaltEp, "gen_ep", [&](Rng& rng) -> std::optional<CMatrix> {
        const CMatrix u = random_unitary(rng, n);
        const CMatrix core = blockdiag(
            {invertible_block(rng, r, spec.magnitude), CMatrix::Zero(n - r, n - r)});
        CMatrix a = u * core * u.adjoint();
        if (is_ep(a, Tolerance{}) && is_star_dmp(a, Tolerance{}).consistent) {
          return a;
        }
        return std::nullopt;
      });
}

std::pair<CMatrix, CMatrix> gen_lemma21_pair(const GenSpec& spec) {
  const Index n = spec.dim;
  if (n < 2) throw GenerationError("gen_lemma21_pair: need dim >= 2");
  const Index na = (n + 1) / 2;
  const Index nb = n - na;
  using Pair = std::pair<CMatrix, CMatrix>;
  return attempt_loop<Pair>(
      spec, kSaltL21, "gen_lemma21_pair", [&](Rng& rng) -> std::optional<Pair> {
        const CMatrix u = random_unitary(rng, n);
        const CMatrix a1 =
            star_dmp_block(rng, na, std::min<Index>(spec.core_rank, na),
                           spec.magnitude);
        const CMatrix b2 =
            star_dmp_block(rng, nb, std::min<Index>(spec.core_rank, nb),
                           spec.magnitude);
        auto [a, b] = conj_pair(u, blockdiag({a1, CMatrix::Zero(nb, nb)}),
                                blockdiag({CMatrix::Zero(na, na), b2}));
        if (all_pass(lemma21_hypotheses(a, b, Tolerance{}))) return Pair{a, b};
        return std::nullopt;
      });
}

std::pair<CMatrix, CMatrix> gen_thm23_pair(const GenSpec& spec) {
  const Index n = spec.dim;
  const Index r = clamp_rank(spec, n);
  const Index s1 = (n - r) / 2;
  const Index s2 = n - r - s1;
  const double mag = spec.magnitude;
  using Pair = std::pair<CMatrix, CMatrix>;
  return attempt_loop<Pair>(
      spec, kSaltT23, "gen_thm23_pair", [&](Rng& rng) -> std::optional<Pair> {
        const CMatrix u = random_unitary(rng, n);
        const CMatrix a0 = blockdiag({invertible_block(rng, r, mag),
                                      strict_upper(rng, s1, mag),
                                      CMatrix::Zero(s2, s2)});
        // b = [[B1, 0, B22], [0, 0, 0], [0, 0, B42]]: upper triangular with
        // its singular diagonal slot exactly where a's nilpotent part lives,
        // so every product hypothesis vanishes identically.
        CMatrix b0 = CMatrix::Zero(n, n);
        b0.topLeftCorner(r, r) = invertible_block(rng, r, mag);
        if (rng.uniform() > 0.25) {
          b0.block(r + s1, r + s1, s2, s2) = invertible_block(rng, s2, mag);
        }
        if (rng.uniform() > 0.3) {
          b0.block(0, r + s1, r, s2) = random_matrix(rng, r, s2, mag);
        }
        auto [a, b] = conj_pair(u, a0, b0);
        if (all_pass(thm23_hypotheses(a, b, Tolerance{}))) return Pair{a, b};
        return std::nullopt;
      });
}

std::pair<CMatrix, CMatrix> gen_thm32_pair(const GenSpec& spec) {
  const Index n = spec.dim;
  const double mag = spec.magnitude;
  using Pair = std::pair<CMatrix, CMatrix>;
  return attempt_loop<Pair>(
      spec, kSaltT32, "gen_thm32_pair", [&](Rng& rng) -> std::optional<Pair> {
        const CMatrix u = random_unitary(rng, n);
        CMatrix a0, b0;
        if (rng.uniform() < 0.5 || n < 2) {
          // Simultaneously diagonal normal pair: commuting and *-commuting.
          a0 = CMatrix::Zero(n, n);
          b0 = CMatrix::Zero(n, n);
          for (Index i = 0; i < n; ++i) {
            if (rng.uniform() > 0.25) a0(i, i) = value(rng, mag);
            if (rng.uniform() > 0.25) b0(i, i) = value(rng, mag);
          }
        } else {
          // Non-normal invertible a plus a scalar; half the time the scalar
          // cancels an eigenvalue so both sides of the equivalence are false.
          a0 = nonnormal_seed(rng, n, mag);
          Complex lambda;
          if (rng.uniform() < 0.5) {
            const Index j = rng.range(0, n - 1);
            lambda = -a0(j, j);
          } else {
            bool ok = false;
            for (int t = 0; t < 32 && !ok; ++t) {
              lambda = value(rng, mag);
              ok = true;
              for (Index i = 0; i < n; ++i) {
                if (std::abs(lambda + a0(i, i)) < 0.05 * mag) ok = false;
              }
            }
            if (!ok) lambda = 3.0 * mag;
          }
          b0 = lambda * CMatrix::Identity(n, n);
        }
        auto [a, b] = conj_pair(u, a0, b0);
        if (all_pass(thm32_hypotheses(a, b, Tolerance{}))) return Pair{a, b};
        return std::nullopt;
      });
}

std::pair<CMatrix, CMatrix> gen_thm33_pair(const GenSpec& spec) {
  const Index n = spec.dim;
  const Index r = clamp_rank(spec, n);
  const Index s = n - r;
  const double mag = spec.magnitude;
  using Pair = std::pair<CMatrix, CMatrix>;
  return attempt_loop<Pair>(
      spec, kSaltT33, "gen_thm33_pair", [&](Rng& rng) -> std::optional<Pair> {
        const CMatrix u = random_unitary(rng, n);
        CMatrix a0, b0;
        if (rng.uniform() < 0.5 || s == 0) {
          // a with a live nilpotent part; the filtered commutation relations
          // then force the matching corner of b to be scalar.
          a0 = blockdiag({invertible_block(rng, r, mag), strict_upper(rng, s, mag)});
          b0 = CMatrix::Zero(n, n);
          b0.topLeftCorner(r, r) = invertible_block(rng, r, mag);
          if (s > 0 && rng.uniform() < 0.4) {
            // singular corner: scalar zero, no coupling
          } else if (s > 0) {
            const Complex lambda = value(rng, mag);
            b0.bottomRightCorner(s, s) = lambda * CMatrix::Identity(s, s);
            b0.topRightCorner(r, s) = random_matrix(rng, r, s, mag);
          }
        } else {
          // a = diag(T, 0): the filter annihilates the commutators, so the
          // corner of b is free and may carry its own core and nilpotent part.
          a0 = blockdiag({invertible_block(rng, r, mag), CMatrix::Zero(s, s)});
          const Index r4 = rng.range(0, s);
          const Index s4 = s - r4;
          b0 = CMatrix::Zero(n, n);
          b0.topLeftCorner(r, r) = invertible_block(rng, r, mag);
          b0.block(r, r, r4, r4) = invertible_block(rng, r4, mag);
          b0.block(r + r4, r + r4, s4, s4) = strict_upper(rng, s4, mag);
          if (rng.uniform() > 0.3) {
            b0.block(0, r, r, r4) = random_matrix(rng, r, r4, mag);
          }
        }
        auto [a, b] = conj_pair(u, a0, b0);
        if (all_pass(thm33_hypotheses(a, b, Tolerance{}))) return Pair{a, b};
        return std::nullopt;
      });
}

std::pair<CMatrix, CMatrix> gen_cor24_pair(const GenSpec& spec) {
  const Index n = spec.dim;
  const Index r = clamp_rank(spec, n);
  const Index s = n - r;
  const double mag = spec.magnitude;
  using Pair = std::pair<CMatrix, CMatrix>;
  return attempt_loop<Pair>(
      spec, kSaltC24, "gen_cor24_pair", [&](Rng& rng) -> std::optional<Pair> {
        const CMatrix u = random_unitary(rng, n);
        const CMatrix a0 =
            blockdiag({invertible_block(rng, r, mag), CMatrix::Zero(s, s)});
        // b = diag(B1, B4) with B1 supported on a's range and B4 an EP block
        // supported on its null space, making a^pi b a vanish identically.
        CMatrix b1;
        if (rng.uniform() < 0.5) {
          b1 = invertible_block(rng, r, mag);
        } else {
          const Index rb = r > 0 ? rng.range(0, r) : 0;
          const CMatrix v = random_unitary(rng, r);
          b1 = v *
               blockdiag({invertible_block(rng, rb, mag),
                          CMatrix::Zero(r - rb, r - rb)}) *
               v.adjoint();
        }
        const Index r4 = s > 0 ? rng.range(0, s) : 0;
        const CMatrix v4 = random_unitary(rng, s);
        const CMatrix b4 = v4 *
                           blockdiag({invertible_block(rng, r4, mag),
                                      CMatrix::Zero(s - r4, s - r4)}) *
                           v4.adjoint();
        auto [a, b] = conj_pair(u, a0, blockdiag({b1, b4}));
        if (all_pass(cor24_hypotheses(a, b, Tolerance{}))) return Pair{a, b};
        return std::nullopt;
      });
}

std::pair<CMatrix, CMatrix> gen_cor34_pair(const GenSpec& spec) {
  const Index n = spec.dim;
  const double mag = spec.magnitude;
  using Pair = std::pair<CMatrix, CMatrix>;
  return attempt_loop<Pair>(
      spec, kSaltC34, "gen_cor34_pair", [&](Rng& rng) -> std::optional<Pair> {
        const CMatrix u = random_unitary(rng, n);
        CMatrix a0, b0;
        const double pick = rng.uniform();
        if (pick < 0.4 || n < 2) {
          a0 = CMatrix::Zero(n, n);
          b0 = CMatrix::Zero(n, n);
          for (Index i = 0; i < n; ++i) {
            if (rng.uniform() > 0.25) a0(i, i) = value(rng, mag);
            if (rng.uniform() > 0.25) b0(i, i) = value(rng, mag);
          }
        } else {
          // Invertible non-normal a; b a polynomial in a commutes exactly and
          // the filtered *-commutation hypothesis is vacuous (a^pi = 0).
          a0 = nonnormal_seed(rng, n, mag);
          if (pick < 0.6) {
            const Index j = rng.range(0, n - 1);
            b0 = -a0(j, j) * CMatrix::Identity(n, n);
          } else {
            bool ok = false;
            for (int t = 0; t < 32 && !ok; ++t) {
              const Complex c0 = mag * rng.cnormal();
              const Complex c1 = rng.cnormal();
              const Complex c2 = mag > 1e-6 ? rng.cnormal() / mag : Complex(0, 0);
              b0 = c0 * CMatrix::Identity(n, n) + c1 * a0 + c2 * a0 * a0;
              ok = true;
              for (Index i = 0; i < n; ++i) {
                if (std::abs(b0(i, i)) < 0.05 * mag ||
                    std::abs(a0(i, i) + b0(i, i)) < 0.05 * mag) {
                  ok = false;
                }
              }
            }
            if (!ok) b0 = 3.0 * mag * CMatrix::Identity(n, n);
          }
        }
        auto [a, b] = conj_pair(u, a0, b0);
        if (all_pass(cor34_hypotheses(a, b, Tolerance{}))) return Pair{a, b};
        return std::nullopt;
      });
}

Lemma22Triple gen_lemma22_triple(const GenSpec& spec) {
  const Index n = spec.dim;
  if (n < 2) throw GenerationError("gen_lemma22_triple: need dim >= 2");
  const Index r = n / 2;
  const Index s = n - r;
  const double mag = spec.magnitude;
  const bool satisfying = spec.seed % 2 == 0;
  return attempt_loop<Lemma22Triple>(
      spec, kSaltL22, "gen_lemma22_triple",
      [&](Rng& rng) -> std::optional<Lemma22Triple> {
        const CMatrix va = random_unitary(rng, r);
        const CMatrix vd = random_unitary(rng, s);
        CMatrix a0, d0, b0 = CMatrix::Zero(r, s);
        if (satisfying) {
          const Index ra = std::min<Index>(spec.core_rank, r);
          const Index rd = std::min<Index>(spec.core_rank, s);
          a0 = blockdiag({invertible_block(rng, ra, mag),
                          CMatrix::Zero(r - ra, r - ra)});
          d0 = blockdiag({invertible_block(rng, rd, mag),
                          CMatrix::Zero(s - rd, s - rd)});
          // core-to-core coupling only: both spectral idempotents kill it
          b0.topLeftCorner(ra, rd) = random_matrix(rng, ra, rd, mag);
        } else {
          const Index ra = std::min<Index>(std::max<Index>(spec.core_rank, 1), r);
          const Index rd = std::min<Index>(spec.core_rank, s - 1);
          // cores kept normal with spectrum away from zero so the offending
          // term a^(m-1) b keeps a floor at every exponent in the window
          a0 = blockdiag({normal_invertible(rng, ra, 1.0, 0.9, 1.6),
                          CMatrix::Zero(r - ra, r - ra)});
          d0 = blockdiag({normal_invertible(rng, rd, 1.0, 0.9, 1.6),
                          CMatrix::Zero(s - rd, s - rd)});
          CMatrix e = random_matrix(rng, ra, s - rd, mag);
          for (int t = 0; t < 8 && max_abs(e) < 0.2 * mag; ++t) {
            e = random_matrix(rng, ra, s - rd, mag);
          }
          b0.block(0, rd, ra, s - rd) = e;
        }
        Lemma22Triple out;
        out.a = va * a0 * va.adjoint();
        out.d = vd * d0 * vd.adjoint();
        out.b = va * b0 * vd.adjoint();
        out.sums_satisfied = satisfying;
        const TheoremVerdict v = lemma22_check(out.a, out.b, out.d, Tolerance{});
        if (v.side2 == satisfying && v.equivalence_ok && v.reports_consistent) {
          return out;
        }
        return std::nullopt;
      });
}

BlockMatrix gen_block(const std::string& theorem_id, const GenSpec& spec) {
  if (theorem_id == "C4.3") return swap_conjugate(gen_block("T4.2", spec));
  if (theorem_id == "C4.5") return swap_conjugate(gen_block("T4.4", spec));
  if (theorem_id == "C4.7") return swap_conjugate(gen_block("T4.6", spec));

  const Index n = spec.dim;
  const double mag = spec.magnitude;

  if (theorem_id == "L4.1") {
    return attempt_loop<BlockMatrix>(
        spec, kSaltBlock, "gen_block L4.1",
        [&](Rng& rng) -> std::optional<BlockMatrix> {
          CMatrix b, c;
          const double pick = rng.uniform();
          if (pick < 1.0 / 3.0) {
            b = random_matrix(rng, n, n, mag);
            c = b.adjoint();
          } else {
            const CMatrix u = random_unitary(rng, n);
            CMatrix db = CMatrix::Zero(n, n);
            CMatrix dc = CMatrix::Zero(n, n);
            const bool disjoint = pick < 2.0 / 3.0;
            for (Index j = 0; j < n; ++j) {
              const double w = rng.uniform();
              if (disjoint) {
                if (w < 0.4) {
                  db(j, j) = value(rng, mag);
                } else if (w < 0.8) {
                  dc(j, j) = value(rng, mag);
                }
              } else if (w > 0.3) {
                db(j, j) = value(rng, mag);
                dc(j, j) = value(rng, mag);
              }
            }
            b = u * db * u.adjoint();
            c = u * dc * u.adjoint();
          }
          if (!all_pass(lemma41_hypotheses(b, c, Tolerance{}))) return std::nullopt;
          return BlockMatrix{CMatrix::Zero(n, n), b, c, CMatrix::Zero(n, n)};
        });
  }

  const bool t42 = theorem_id == "T4.2";
  const bool t44 = theorem_id == "T4.4";
  const bool t46 = theorem_id == "T4.6";
  if (!t42 && !t44 && !t46) {
    throw GenerationError("gen_block: unknown theorem id " + theorem_id);
  }

  return attempt_loop<BlockMatrix>(
      spec, kSaltBlock, "gen_block",
      [&](Rng& rng) -> std::optional<BlockMatrix> {
        const CMatrix u = random_unitary(rng, n);
        CMatrix da = CMatrix::Zero(n, n), db = CMatrix::Zero(n, n),
                dc = CMatrix::Zero(n, n), dd = CMatrix::Zero(n, n);
        const auto draw0 = [&](Rng& r2) -> Complex {
          return r2.uniform() < 0.25 ? Complex(0, 0) : value(r2, mag);
        };
        for (Index j = 0; j < n; ++j) {
          const double w = rng.uniform();
          if (t46) {
            // Off-diagonal supports disjoint; coupling to B forbids a mixed
            // zero/nonzero diagonal pair at the same slot.
            if (w < 0.3) {
              da(j, j) = draw0(rng);
              dd(j, j) = draw0(rng);
            } else if (w < 0.65) {
              db(j, j) = value(rng, mag);
              if (rng.uniform() < 0.5) {
                da(j, j) = value(rng, mag);
                dd(j, j) = value(rng, mag);
              }
            } else {
              dc(j, j) = value(rng, mag);
              const Complex v = draw0(rng);
              da(j, j) = v;
              dd(j, j) = v;
            }
          } else {
            // Intertwining forces A and D to agree wherever B or C is live;
            // nilpotency of A^D B D^D C forbids a fully live slot.
            if (w < 0.35) {
              da(j, j) = draw0(rng);
              dd(j, j) = draw0(rng);
            } else if (w < 0.85) {
              const Complex v = draw0(rng);
              da(j, j) = v;
              dd(j, j) = v;
              if (w < 0.6) {
                db(j, j) = value(rng, mag);
              } else {
                dc(j, j) = value(rng, mag);
              }
            } else {
              db(j, j) = value(rng, mag);
              dc(j, j) = value(rng, mag);
            }
          }
        }
        BlockMatrix blocks{u * da * u.adjoint(), u * db * u.adjoint(),
                           u * dc * u.adjoint(), u * dd * u.adjoint()};
        bool ok = false;
        if (t42) ok = all_pass(thm42_hypotheses(blocks, Tolerance{}));
        if (t44) ok = all_pass(thm44_hypotheses(blocks, Tolerance{}));
        if (t46) ok = thm46_check(blocks, Tolerance{}).hypotheses_hold;
        if (!ok) return std::nullopt;
        return blocks;
      });
}

// ---------------------------------------------------------------------------
// Near-miss catalog.  Each template is an exact construction that violates
// the labelled hypothesis by an order-one margin while satisfying every
// other hypothesis identically; a shared unitary conjugation randomizes the
// basis without disturbing any of that.

namespace {

const CMatrix& m0() {
  // Canonical group invertible matrix whose group projector is not
  // Hermitian: an oblique rank-one idempotent.
  static const CMatrix m = [] {
    CMatrix x(2, 2);
    x << 1, 1, 0, 0;
    return x;
  }();
  return m;
}

CMatrix j2(const Complex& scale) {
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = scale;
  return x;
}

Index template_dim(const std::string& theorem_id, const std::string& label,
                   Index requested) {
  Index need = 2;
  if (theorem_id == "L2.1") {
    need = (label == "ab_zero") ? 2 : 3;
  } else if (theorem_id == "T2.3") {
    if (label == "a_star_dmp" || label == "api_ab_zero" ||
        label == "api_astar_b_zero") {
      need = 3;
    } else if (label == "api_ba_zero") {
      need = 4;
    }
  } else if (theorem_id == "T3.3") {
    if (label != "b_star_dmp") need = 3;
  }
  return std::max(requested, need);
}

}  // namespace

std::vector<std::string> near_miss_theorems() {
  return {"L2.1", "T2.3", "T3.2", "T3.3", "L4.1"};
}

std::vector<std::string> near_miss_labels(const std::string& theorem_id) {
  if (theorem_id == "L2.1") {
    return {"a_star_dmp", "b_star_dmp", "ab_zero", "ba_zero", "astar_b_zero"};
  }
  if (theorem_id == "T2.3") {
    return {"a_star_dmp", "b_star_dmp", "api_ab_zero", "api_ba_zero",
            "api_astar_b_zero"};
  }
  if (theorem_id == "T3.2") {
    return {"a_star_dmp", "b_star_dmp", "ab_commute", "astar_b_commute"};
  }
  if (theorem_id == "T3.3") {
    return {"a_star_dmp", "b_star_dmp", "api_commute", "api_star_commute"};
  }
  if (theorem_id == "L4.1") {
    return {"BC_star_dmp", "CB_star_dmp"};
  }
  throw GenerationError("near_miss_labels: unknown theorem id " + theorem_id);
}

NearMiss gen_near_miss(const std::string& theorem_id, const GenSpec& spec) {
  const auto labels = near_miss_labels(theorem_id);
  Rng rng(seed_mix(spec.seed, kSaltNearMiss + 1));
  const auto pick = static_cast<std::size_t>(
      rng.range(0, static_cast<long>(labels.size()) - 1));
  return gen_near_miss(theorem_id, labels[pick], spec);
}

NearMiss gen_near_miss(const std::string& theorem_id, const std::string& label,
                       const GenSpec& spec) {
  const auto labels = near_miss_labels(theorem_id);
  if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
    throw GenerationError("gen_near_miss: " + theorem_id +
                          " has no hypothesis labelled " + label);
  }
  const Index n = template_dim(theorem_id, label, spec.dim);
  const double mag = spec.magnitude;

  return attempt_loop<NearMiss>(
      spec, kSaltNearMiss, "gen_near_miss", [&](Rng& rng) -> std::optional<NearMiss> {
        CMatrix a0 = CMatrix::Zero(n, n);
        CMatrix b0 = CMatrix::Zero(n, n);
        const Complex kappa = span(rng, 0.5, 1.5) * mag * phase(rng);
        const Complex beta = span(rng, 0.5, 1.5) * mag * phase(rng);
        const Complex gamma = span(rng, 0.5, 1.5) * mag * phase(rng);

        if (theorem_id == "L2.1") {
          if (label == "a_star_dmp") {
            a0.topLeftCorner(2, 2) = kappa * m0();
            b0(2, 2) = beta;
          } else if (label == "b_star_dmp") {
            a0(0, 0) = beta;
            b0.block(1, 1, 2, 2) = kappa * m0();
          } else if (label == "ab_zero") {
            a0.topLeftCorner(2, 2) = j2(gamma);
            b0(1, 1) = beta;
          } else if (label == "ba_zero") {
            a0(0, 1) = gamma;
            b0(2, 0) = beta;
          } else {  // astar_b_zero
            a0(0, 1) = gamma;
            b0(0, 2) = beta;
          }
        } else if (theorem_id == "T2.3") {
          const Index r = n - 2;
          if (label == "a_star_dmp") {
            a0.topLeftCorner(2, 2) = kappa * m0();
            b0(2, 2) = beta;
          } else if (label == "b_star_dmp") {
            a0.topLeftCorner(2, 2) = invertible_block(rng, 2, mag);
            b0.topLeftCorner(2, 2) = kappa * m0();
          } else if (label == "api_ab_zero") {
            a0.topLeftCorner(r, r) = invertible_block(rng, r, mag);
            a0.block(r, r, 2, 2) = j2(gamma);
            b0.topLeftCorner(r, r) = invertible_block(rng, r, mag);
            b0(n - 1, n - 1) = beta;
          } else if (label == "api_ba_zero") {
            const Index rr = n - 3;
            a0.topLeftCorner(rr, rr) = invertible_block(rng, rr, mag);
            a0.block(rr, rr, 2, 2) = j2(gamma);
            b0(n - 1, 0) = beta;
          } else {  // api_astar_b_zero
            a0.topLeftCorner(r, r) = invertible_block(rng, r, mag);
            a0.block(r, r, 2, 2) = j2(gamma);
            b0.block(r, r, 2, 2) = j2(beta);
          }
        } else if (theorem_id == "T3.2") {
          if (label == "a_star_dmp") {
            a0.topLeftCorner(2, 2) = kappa * m0();
            b0 = beta * CMatrix::Identity(n, n);
          } else if (label == "b_star_dmp") {
            a0 = beta * CMatrix::Identity(n, n);
            b0.topLeftCorner(2, 2) = kappa * m0();
          } else if (label == "ab_commute") {
            a0 = nonnormal_seed(rng, n, mag);
            b0 = a0.adjoint();
          } else {  // astar_b_commute
            a0 = nonnormal_seed(rng, n, mag);
            b0 = a0;
          }
        } else if (theorem_id == "T3.3") {
          const Index r = n - 2;
          if (label == "a_star_dmp") {
            a0.topLeftCorner(2, 2) = kappa * m0();
            b0(2, 2) = beta;
          } else if (label == "b_star_dmp") {
            a0.topLeftCorner(2, 2) = invertible_block(rng, 2, mag);
            b0.topLeftCorner(2, 2) = kappa * m0();
          } else if (label == "api_commute") {
            a0.topLeftCorner(r, r) = invertible_block(rng, r, mag);
            a0.block(r, r, 2, 2) = j2(gamma);
            b0.topLeftCorner(r, r) = invertible_block(rng, r, mag);
            b0.block(r, r, 2, 2) = j2(beta).adjoint();
          } else {  // api_star_commute
            a0.topLeftCorner(r, r) = invertible_block(rng, r, mag);
            a0.block(r, r, 2, 2) = j2(gamma);
            b0.topLeftCorner(r, r) = invertible_block(rng, r, mag);
            b0.block(r, r, 2, 2) = j2(beta);
          }
        } else {  // L4.1: (a0, b0) hold the off-diagonal blocks (B, C)
          if (label == "BC_star_dmp") {
            a0(0, 0) = beta;
            b0.topLeftCorner(2, 2) = kappa * m0();
          } else {  // CB_star_dmp
            a0.topLeftCorner(2, 2) = kappa * m0();
            b0(0, 0) = beta;
          }
        }

        const CMatrix u = random_unitary(rng, n);
        NearMiss nm;
        nm.theorem_id = theorem_id;
        nm.broken = label;
        nm.mats = {u * a0 * u.adjoint(), u * b0 * u.adjoint()};
        const auto broken = broken_hypotheses(nm, Tolerance{});
        if (broken.size() == 1 && broken.front() == label) return nm;
        return std::nullopt;
      });
}

std::vector<std::string> broken_hypotheses(const NearMiss& nm,
                                           const Tolerance& tol) {
  std::vector<HypothesisCheck> checks;
  if (nm.theorem_id == "L2.1") {
    checks = lemma21_hypotheses(nm.mats.at(0), nm.mats.at(1), tol);
  } else if (nm.theorem_id == "T2.3") {
    checks = thm23_hypotheses(nm.mats.at(0), nm.mats.at(1), tol);
  } else if (nm.theorem_id == "T3.2") {
    checks = thm32_hypotheses(nm.mats.at(0), nm.mats.at(1), tol);
  } else if (nm.theorem_id == "T3.3") {
    checks = thm33_hypotheses(nm.mats.at(0), nm.mats.at(1), tol);
  } else if (nm.theorem_id == "L4.1") {
    checks = lemma41_hypotheses(nm.mats.at(0), nm.mats.at(1), tol);
  } else {
    throw GenerationError("broken_hypotheses: unknown theorem id " +
                          nm.theorem_id);
  }
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.pass) out.push_back(c.label);
  }
  return out;
}

}  // namespace stardmp
