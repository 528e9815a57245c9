#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stardmp/gen.hpp"
#include "stardmp/geninv.hpp"

using namespace stardmp;

namespace {

const Tolerance tol;

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Oblique idempotent: index 1, group invertible, not EP.
const CMatrix kOblique = mat2(1, 1, 0, 0);
// Single nilpotent Jordan block: index 2.
const CMatrix kJordan2 = mat2(0, 1, 0, 0);

void check_penrose(const CMatrix& a, const CMatrix& x, double bound) {
  const CMatrix ax = a * x;
  const CMatrix xa = x * a;
  CHECK(max_abs(ax * a - a) <= bound);
  CHECK(max_abs(xa * x - x) <= bound);
  CHECK(max_abs(ax - adjoint(ax)) <= bound);
  CHECK(max_abs(xa - adjoint(xa)) <= bound);
}

}  // namespace

TEST_CASE("index of canonical matrices") {
  CHECK(index(identity(3), tol) == 0);
  CHECK(index(CMatrix::Zero(2, 2), tol) == 1);
  CHECK(index(mat2(1, 0, 0, 0), tol) == 1);
  CHECK(index(kOblique, tol) == 1);
  CHECK(index(kJordan2, tol) == 2);
  CMatrix shift3 = CMatrix::Zero(3, 3);
  shift3(0, 1) = 1.0;
  shift3(1, 2) = 1.0;
  CHECK(index(shift3, tol) == 3);
  // diag(invertible, J2): index from the nilpotent part.
  CMatrix mixed = CMatrix::Zero(3, 3);
  mixed(0, 0) = Complex(2, 1);
  mixed(1, 2) = 1.0;
  CHECK(index(mixed, tol) == 2);
}

TEST_CASE("moore_penrose frozen oracles") {
  SUBCASE("rank-one square") {
    const auto out = moore_penrose(kOblique, tol);
    CHECK(out.cert.pass);
    CHECK(max_abs(out.pinv - mat2(0.5, 0, 0.5, 0)) <= 1e-12);
  }
  SUBCASE("tall column") {
    CMatrix a(2, 1);
    a << 1.0, 1.0;
    const auto out = moore_penrose(a, tol);
    REQUIRE(out.pinv.rows() == 1);
    REQUIRE(out.pinv.cols() == 2);
    CHECK(max_abs(out.pinv - CMatrix::Constant(1, 2, 0.5)) <= 1e-12);
  }
  SUBCASE("zero matrix pinv is zero transpose shape") {
    const auto out = moore_penrose(CMatrix::Zero(2, 3), tol);
    CHECK(out.pinv.rows() == 3);
    CHECK(out.pinv.cols() == 2);
    CHECK(max_abs(out.pinv) == 0.0);
    CHECK(out.cert.pass);
  }
  SUBCASE("unitary pinv is the adjoint") {
    Rng rng(5);
    const CMatrix u = random_unitary(rng, 4);
    CHECK(max_abs(moore_penrose(u, tol).pinv - u.adjoint()) <= 1e-12);
  }
}

TEST_CASE("moore_penrose satisfies the four equations on random input") {
  Rng rng(17);
  for (int t = 0; t < 60; ++t) {
    const Index rows = 1 + static_cast<Index>(rng.range(0, 5));
    const Index cols = 1 + static_cast<Index>(rng.range(0, 5));
    const CMatrix a = random_matrix(rng, rows, cols, 2.0);
    const auto out = moore_penrose(a, tol);
    CHECK(out.cert.pass);
    const double na = max_abs(a);
    check_penrose(a, out.pinv, 1e-9 * (1.0 + na * na));
  }
}

TEST_CASE("drazin frozen oracles") {
  SUBCASE("nilpotent block maps to zero") {
    const auto out = drazin(kJordan2, tol);
    CHECK(out.result.index == 2);
    CHECK(max_abs(out.result.drazin) == 0.0);
    CHECK(max_abs(out.result.spectral_idempotent - identity(2)) == 0.0);
    CHECK(out.cert.pass);
  }
  SUBCASE("idempotent is its own Drazin inverse") {
    const auto out = drazin(kOblique, tol);
    CHECK(out.result.index == 1);
    CHECK(max_abs(out.result.drazin - kOblique) <= 1e-10);
    CHECK(out.cert.pass);
  }
  SUBCASE("invertible matrix gives the inverse") {
    const CMatrix a = mat2({2, 1}, 0, 1, {0, -1});
    const auto out = drazin(a, tol);
    CHECK(out.result.index == 0);
    CHECK(max_abs(a * out.result.drazin - identity(2)) <= 1e-10);
  }
  SUBCASE("scaled idempotent: 2M has Drazin M/4 when M^2 = 2M") {
    const CMatrix m = mat2(2, 1, 0, 0);
    const auto out = drazin(m, tol);
    CHECK(max_abs(out.result.drazin - 0.25 * m) <= 1e-10);
  }
  SUBCASE("diagonal") {
    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = 4.0;
    d(2, 2) = Complex(0, 2);
    const auto out = drazin(d, tol);
    CMatrix expect = CMatrix::Zero(3, 3);
    expect(0, 0) = 0.25;
    expect(2, 2) = Complex(0, -0.5);
    CHECK(max_abs(out.result.drazin - expect) <= 1e-12);
  }
}

TEST_CASE("drazin certificate equations hold on generated matrices") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    GenSpec spec;
    spec.dim = 5;
    spec.core_rank = static_cast<Index>(s % 6);
    spec.seed = s;
    const CMatrix a = gen_star_dmp(spec);
    const auto out = drazin(a, tol);
    CHECK(out.cert.pass);
    const CMatrix& x = out.result.drazin;
    const CMatrix ak = mat_pow(a, out.result.index);
    const double bound = 1e-7 * (1.0 + std::pow(max_abs(a), out.result.index + 1.0));
    CHECK(max_abs(x * ak * a - ak) <= bound);
    CHECK(max_abs(a * x * x - x) <= bound);
    CHECK(max_abs(a * x - x * a) <= bound);
  }
}

TEST_CASE("drazin_cline and drazin_schur agree") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    GenSpec spec;
    spec.dim = 4;
    spec.core_rank = 2;
    spec.seed = 100 + s;
    const CMatrix a = gen_star_dmp(spec);
    const long k = index(a, tol);
    const CMatrix c = drazin_cline(a, k, tol);
    const CMatrix sc = drazin_schur(a, tol);
    CHECK(max_abs(c - sc) <= 1e-7 * (1.0 + max_abs(c)));
  }
  // Pure nilpotent: both routes must return exactly zero.
  CHECK(max_abs(drazin_cline(kJordan2, 2, tol)) == 0.0);
  CHECK(max_abs(drazin_schur(kJordan2, tol)) == 0.0);
}

TEST_CASE("group inverse existence tracks the index") {
  CHECK_FALSE(group_inverse(kJordan2, tol).has_value());
  auto g = group_inverse(kOblique, tol);
  REQUIRE(g.has_value());
  CHECK(max_abs(g->inverse - kOblique) <= 1e-10);
  CHECK(g->cert.pass);
  auto gz = group_inverse(CMatrix::Zero(2, 2), tol);
  REQUIRE(gz.has_value());
  CHECK(max_abs(gz->inverse) == 0.0);
}

TEST_CASE("core inverse frozen oracle and rejection") {
  CHECK_FALSE(core_inverse(kJordan2, tol).has_value());
  auto c = core_inverse(kOblique, tol);
  REQUIRE(c.has_value());
  // group(M) * M * pinv(M) for the oblique idempotent collapses to the
  // orthogonal projector onto its column space.
  CHECK(max_abs(c->inverse - mat2(1, 0, 0, 0)) <= 1e-10);
  CHECK(c->cert.pass);
}

TEST_CASE("pseudo core inverse basics") {
  SUBCASE("agrees with core inverse at index one") {
    const auto pc = pseudo_core(kOblique, tol);
    CHECK(max_abs(pc.pcore - mat2(1, 0, 0, 0)) <= 1e-10);
    CHECK(pc.cert.pass);
  }
  SUBCASE("nilpotent gives zero") {
    const auto pc = pseudo_core(kJordan2, tol);
    CHECK(max_abs(pc.pcore) == 0.0);
    CHECK(pc.cert.pass);
  }
  SUBCASE("adjoint compatibility is transposed, not direct") {
    // For a = [[i]]: pcore(a) = [[-i]] while pcore(a*) = [[i]], so
    // pcore(a*) equals pcore(a)* and differs from pcore(a).
    CMatrix a(1, 1);
    a(0, 0) = Complex(0, 1);
    const CMatrix p = pseudo_core(a, tol).pcore;
    const CMatrix ps = pseudo_core(adjoint(a), tol).pcore;
    CHECK(max_abs(p - CMatrix::Constant(1, 1, Complex(0, -1))) <= 1e-12);
    CHECK(max_abs(ps - adjoint(p)) <= 1e-12);
    CHECK(max_abs(ps - p) > 1.0);  // the un-transposed identity fails
  }
  SUBCASE("adjoint compatibility on generated instances") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      GenSpec spec;
      spec.dim = 4;
      spec.core_rank = 2;
      spec.seed = 200 + s;
      const CMatrix a = gen_star_dmp(spec);
      const CMatrix p = pseudo_core(a, tol).pcore;
      const CMatrix ps = pseudo_core(adjoint(a), tol).pcore;
      CHECK(max_abs(ps - adjoint(p)) <= 1e-7 * (1.0 + max_abs(p)));
    }
  }
}

TEST_CASE("projection and EP predicates") {
  CHECK(is_projection(mat2(1, 0, 0, 0), tol));
  CHECK(is_projection(identity(3), tol));
  CHECK_FALSE(is_projection(kOblique, tol));  // idempotent but oblique
  CHECK_FALSE(is_projection(mat2(0.5, 0, 0, 0.5), tol));

  CHECK(is_ep(identity(2), tol));
  CHECK(is_ep(CMatrix::Zero(2, 2), tol));
  CHECK_FALSE(is_ep(kOblique, tol));
  CHECK_FALSE(is_ep(kJordan2, tol));  // no group inverse at all
  for (std::uint64_t s = 0; s < 10; ++s) {
    GenSpec spec;
    spec.dim = 4;
    spec.core_rank = 2;
    spec.seed = 300 + s;
    CHECK(is_ep(gen_ep(spec), tol));
  }
}

TEST_CASE("star-DMP characterizations agree and classify correctly") {
  SUBCASE("hermitian yes, oblique no, nilpotent yes") {
    const auto h = is_star_dmp(mat2(2, {1, 1}, {1, -1}, -3), tol);
    CHECK(h.verdict);
    CHECK(h.consistent);
    const auto o = is_star_dmp(kOblique, tol);
    CHECK_FALSE(o.verdict);
    CHECK(o.consistent);
    const auto nil = is_star_dmp(kJordan2, tol);
    CHECK(nil.verdict);
    CHECK(nil.consistent);
  }
  SUBCASE("generated star-DMP instances pass all three characterizations") {
    for (std::uint64_t s = 0; s < 25; ++s) {
      GenSpec spec;
      spec.dim = 5;
      spec.core_rank = static_cast<Index>(s % 6);
      spec.seed = 400 + s;
      const auto rep = is_star_dmp(gen_star_dmp(spec), tol);
      CHECK(rep.verdict);
      CHECK(rep.char2);
      CHECK(rep.char3);
      CHECK(rep.char5);
      CHECK(rep.consistent);
    }
  }
  SUBCASE("unrestricted random matrices stay internally consistent") {
    for (std::uint64_t s = 0; s < 25; ++s) {
      GenSpec spec;
      spec.dim = 4;
      spec.seed = 500 + s;
      CHECK(is_star_dmp(gen_random(spec), tol).consistent);
    }
  }
}

TEST_CASE("error paths require square input") {
  const CMatrix rect = CMatrix::Zero(2, 3);
  CHECK_THROWS_AS((void)index(rect, tol), ShapeError);
  CHECK_THROWS_AS((void)drazin(rect, tol), ShapeError);
  CHECK_THROWS_AS((void)group_inverse(rect, tol), ShapeError);
  CHECK_THROWS_AS((void)core_inverse(rect, tol), ShapeError);
  CHECK_THROWS_AS((void)pseudo_core(rect, tol), ShapeError);
  CHECK_THROWS_AS((void)is_star_dmp(rect, tol), ShapeError);
}
