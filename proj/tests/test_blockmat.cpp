#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stardmp/blockmat.hpp"
#include "stardmp/gen.hpp"

using namespace stardmp;

namespace {

const Tolerance tol;

BlockMatrix random_blocks(std::uint64_t seed, Index n) {
  Rng rng(seed);
  BlockMatrix m;
  m.A = random_matrix(rng, n, n, 1.0);
  m.B = random_matrix(rng, n, n, 1.0);
  m.C = random_matrix(rng, n, n, 1.0);
  m.D = random_matrix(rng, n, n, 1.0);
  return m;
}

void expect_one_directional_pass(const TheoremVerdict& v) {
  CAPTURE(v.theorem_id);
  CHECK(v.hypotheses_hold);
  CHECK(v.side1);
  CHECK(v.side2);
  CHECK(v.equivalence_ok);
  CHECK(v.reports_consistent);
}

}  // namespace

TEST_CASE("assemble and extract_blocks round trip") {
  const BlockMatrix m = random_blocks(1, 3);
  const CMatrix whole = assemble(m);
  REQUIRE(whole.rows() == 6);
  const BlockMatrix back = extract_blocks(whole);
  CHECK(max_abs(back.A - m.A) == 0.0);
  CHECK(max_abs(back.B - m.B) == 0.0);
  CHECK(max_abs(back.C - m.C) == 0.0);
  CHECK(max_abs(back.D - m.D) == 0.0);
  CHECK_THROWS_AS((void)extract_blocks(CMatrix::Zero(5, 5)), ShapeError);
  BlockMatrix bad = m;
  bad.B = CMatrix::Zero(2, 3);
  CHECK_THROWS_AS((void)assemble(bad), ShapeError);
}

TEST_CASE("swap_conjugate is the half-swap involution") {
  const BlockMatrix m = random_blocks(2, 3);
  const BlockMatrix sw = swap_conjugate(m);
  CHECK(max_abs(sw.A - m.D) == 0.0);
  CHECK(max_abs(sw.B - m.C) == 0.0);
  CHECK(max_abs(sw.C - m.B) == 0.0);
  CHECK(max_abs(sw.D - m.A) == 0.0);
  const BlockMatrix twice = swap_conjugate(sw);
  CHECK(max_abs(twice.A - m.A) == 0.0);
  CHECK(max_abs(twice.B - m.B) == 0.0);

  // Conjugation by the swap unitary leaves the property invariant.
  for (std::uint64_t s = 0; s < 8; ++s) {
    GenSpec spec{3, 2, 40 + s, 1.0};
    const BlockMatrix inst = gen_block("T4.2", spec);
    const auto direct = is_star_dmp(assemble(inst), tol);
    const auto mirrored = is_star_dmp(assemble(swap_conjugate(inst)), tol);
    CHECK(direct.verdict == mirrored.verdict);
    CHECK(direct.consistent);
    CHECK(mirrored.consistent);
  }
}

TEST_CASE("anti-diagonal criterion on canonical and generated input") {
  SUBCASE("identity off-diagonal blocks give the unitary swap") {
    const auto v = lemma41_check(identity(2), identity(2), tol);
    expect_one_directional_pass(v);
  }
  SUBCASE("nilpotent corner") {
    const auto v = lemma41_check(CMatrix::Constant(1, 1, 1.0), CMatrix::Zero(1, 1), tol);
    expect_one_directional_pass(v);
  }
  SUBCASE("generated off-diagonal pairs") {
    for (std::uint64_t s = 0; s < 15; ++s) {
      GenSpec spec{4, 2, s, 1.0};
      const BlockMatrix m = gen_block("L4.1", spec);
      CHECK(max_abs(m.A) == 0.0);
      CHECK(max_abs(m.D) == 0.0);
      expect_one_directional_pass(lemma41_check(m.B, m.C, tol));
    }
  }
  SUBCASE("hypothesis failure keeps the verdict vacuous") {
    // B C = [[1,1],[0,0]] is not star-DMP, so nothing is claimed.
    CMatrix b(2, 2), c(2, 2);
    b << 1, 1, 0, 0;
    c << 1, 0, 0, 1;
    const auto v = lemma41_check(b, c, tol);
    CHECK_FALSE(v.hypotheses_hold);
    CHECK(v.equivalence_ok);
  }
}

TEST_CASE("intertwined block criteria accept their generators") {
  const char* ids[] = {"T4.2", "T4.4", "T4.6"};
  for (const char* id : ids) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      GenSpec spec{3, 2, 100 + s, 1.0};
      const BlockMatrix m = gen_block(id, spec);
      TheoremVerdict v;
      if (std::string(id) == "T4.2") v = thm42_check(m, tol);
      else if (std::string(id) == "T4.4") v = thm44_check(m, tol);
      else v = thm46_check(m, tol);
      CAPTURE(id);
      CAPTURE(s);
      expect_one_directional_pass(v);
      if (std::string(id) == "T4.6") {
        CHECK(v.witness_m.has_value());
        CHECK(v.residuals.count("coupling_sum1") == 1);
        CHECK(v.residuals.count("coupling_sum2") == 1);
      }
    }
  }
}

TEST_CASE("mirrored corollaries accept swap-conjugated instances") {
  struct Pairing {
    const char* theorem;
    const char* corollary;
    TheoremVerdict (*check)(const BlockMatrix&, const Tolerance&);
  };
  const Pairing pairings[] = {
      {"T4.2", "C4.3", cor43_check},
      {"T4.4", "C4.5", cor45_check},
      {"T4.6", "C4.7", cor47_check},
  };
  for (const auto& p : pairings) {
    for (std::uint64_t s = 0; s < 8; ++s) {
      GenSpec spec{3, 2, 200 + s, 1.0};
      const BlockMatrix m = gen_block(p.corollary, spec);
      const auto v = p.check(m, tol);
      CAPTURE(p.corollary);
      CAPTURE(s);
      CHECK(v.theorem_id == p.corollary);
      expect_one_directional_pass(v);
    }
  }
}

TEST_CASE("hypothesis evaluators expose stable labels") {
  GenSpec spec{3, 2, 5, 1.0};
  const BlockMatrix m42 = gen_block("T4.2", spec);
  const auto h42 = thm42_hypotheses(m42, tol);
  REQUIRE(h42.size() == 9);
  CHECK(h42[0].label == "A_star_dmp");
  CHECK(h42[1].label == "D_star_dmp");
  CHECK(h42[2].label == "BC_star_dmp");
  CHECK(h42[3].label == "CB_star_dmp");
  CHECK(h42[4].label == "AB_BD");
  CHECK(h42[5].label == "DC_CA");
  CHECK(h42[6].label == "Astar_B_BDstar");
  CHECK(h42[7].label == "Dstar_C_CAstar");
  CHECK(h42[8].label == "ADBDDC_nilpotent");
  for (const auto& c : h42) CHECK(c.pass);

  const BlockMatrix m44 = gen_block("T4.4", spec);
  const auto h44 = thm44_hypotheses(m44, tol);
  REQUIRE(h44.size() == 8);
  CHECK(h44[6].label == "Bstar_A_DBstar");
  for (const auto& c : h44) CHECK(c.pass);
}

TEST_CASE("nilpotency hypothesis treats cancelled products as zero") {
  // A and D invertible with disjoint support couplings force
  // A^D B D^D C to cancel numerically; the check must not classify the
  // roundoff as a genuine non-nilpotent matrix.
  for (std::uint64_t s = 0; s < 6; ++s) {
    GenSpec spec{4, 2, 300 + s, 1.0};
    const BlockMatrix m = gen_block("T4.2", spec);
    const auto checks = thm42_hypotheses(m, tol);
    for (const auto& c : checks) {
      if (c.label == "ADBDDC_nilpotent") CHECK(c.pass);
    }
  }
}

TEST_CASE("block checks reject mismatched shapes") {
  BlockMatrix bad;
  bad.A = CMatrix::Zero(2, 2);
  bad.B = CMatrix::Zero(2, 3);
  bad.C = CMatrix::Zero(2, 2);
  bad.D = CMatrix::Zero(2, 2);
  CHECK_THROWS_AS((void)thm42_check(bad, tol), ShapeError);
  CHECK_THROWS_AS((void)thm46_check(bad, tol), ShapeError);
  CHECK_THROWS_AS((void)lemma41_check(CMatrix::Zero(2, 3), CMatrix::Zero(2, 3), tol),
                  ShapeError);
}
