// Acceptance gate: ten numbered criteria, one PASS/FAIL line each, exit
// status equal to the number of failures.  Criteria 1-8 exercise the
// library directly; 9 and 10 drive the installed CLI binary.
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stardmp/additive.hpp"
#include "stardmp/blockmat.hpp"
#include "stardmp/gen.hpp"
#include "stardmp/geninv.hpp"

using namespace stardmp;
using Json = nlohmann::ordered_json;

namespace {

#ifndef STARDMP_BIN
#error "STARDMP_BIN must point at the CLI binary"
#endif

const Tolerance tol;

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args, const std::string& tag) {
  const std::string path = "/tmp/stardmp_acceptance_" + tag + ".json";
  const std::string cmd =
      std::string(STARDMP_BIN) + " " + args + " > " + path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

// --- criterion bodies ------------------------------------------------------

bool penrose_suite(std::string& detail) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  long checked = 0;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const Index rows = 1 + static_cast<Index>(s % 8);
    const Index cols = 1 + static_cast<Index>((s / 8) % 8);
    const CMatrix a = gen_random_rect(s, rows, cols, 0.25 + (s % 7) * 0.5);
    const CMatrix x = moore_penrose(a, tol).pinv;
    const CMatrix ax = a * x;
    const CMatrix xa = x * a;
    const double res = std::max(
        std::max(max_abs(ax * a - a), max_abs(xa * x - x)),
        std::max(max_abs(ax - adjoint(ax)), max_abs(xa - adjoint(xa))));
    const double na = max_abs(a);
    const double bound = 1e-9 * (1.0 + na * na);
    worst = std::max(worst, res / bound);
    if (res > bound) {
      detail = "residual over bound at seed " + std::to_string(s);
      return false;
    }
    ++checked;
  }
  const double secs =
      std::chrono::duration<double>(clock::now() - t0).count();
  if (secs >= 30.0) {
    detail = "runtime " + std::to_string(secs) + "s exceeds 30s";
    return false;
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "%ld matrices, worst residual at %.1e of bound, %.1fs",
                checked, worst, secs);
  detail = buf;
  return true;
}

bool drazin_suite(std::string& detail) {
  long certified = 0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    CMatrix a;
    switch (s % 5) {
      case 0: {  // strictly upper triangular: nilpotent of full index
        Rng rng(seed_mix(s, 0xA1));
        const Index n = 2 + static_cast<Index>(s % 5);
        a = CMatrix::Zero(n, n);
        for (Index i = 0; i + 1 < n; ++i) a(i, i + 1) = rng.cnormal();
        break;
      }
      case 1: {  // idempotent (possibly oblique) via P = U [I r; 0 0] U^-1
        Rng rng(seed_mix(s, 0xA2));
        const Index n = 3 + static_cast<Index>(s % 4);
        // Diagonally dominant similarity keeps the idempotent well scaled.
        const CMatrix u = random_matrix(rng, n, n, 0.5) +
                          2.0 * CMatrix::Identity(n, n);
        CMatrix d = CMatrix::Zero(n, n);
        for (Index i = 0; i < n / 2 + 1; ++i) d(i, i) = 1.0;
        a = u * d * u.inverse();
        break;
      }
      default: {  // mixed index via the seeded star-DMP generator
        GenSpec spec;
        spec.dim = 2 + static_cast<Index>(s % 6);
        spec.core_rank = static_cast<Index>(s % (spec.dim + 1));
        spec.seed = s;
        a = gen_star_dmp(spec);
        break;
      }
    }
    const auto out = drazin(a, tol);
    if (!out.cert.pass) {
      detail = "certificate failed at seed " + std::to_string(s) +
               " (max residual " + std::to_string(out.cert.max_residual) + ")";
      return false;
    }
    ++certified;
  }

  long compared = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    GenSpec spec;
    spec.dim = 4;
    spec.core_rank = static_cast<Index>(s % 5);
    spec.seed = 7000 + s;
    const CMatrix a = gen_star_dmp(spec);
    const CMatrix c = drazin_cline(a, index(a, tol), tol);
    const CMatrix sc = drazin_schur(a, tol);
    if (max_abs(c - sc) > 1e-7) {
      detail = "route disagreement at seed " + std::to_string(s);
      return false;
    }
    ++compared;
  }
  detail = std::to_string(certified) + " certificates, " +
           std::to_string(compared) + " route comparisons";
  return true;
}

bool consistency_suite(std::string& detail) {
  long consistent = 0, adjoint_checked = 0;
  for (std::uint64_t s = 0; s < 1500; ++s) {
    GenSpec spec;
    spec.dim = 1 + static_cast<Index>(s % 8);
    spec.core_rank = static_cast<Index>(s % (spec.dim + 1));
    spec.seed = s;
    CMatrix a;
    if (s < 500) a = gen_star_dmp(spec);
    else if (s < 1000) a = gen_ep(spec);
    else a = gen_random(spec);
    const StarDMPReport rep = is_star_dmp(a, tol);
    if (!rep.consistent) {
      detail = "characterizations disagree at seed " + std::to_string(s);
      return false;
    }
    ++consistent;
    if (rep.verdict) {
      // The adjoint of the pseudo core inverse is the pseudo core inverse
      // of the adjoint (the un-starred identity is false in general).
      const CMatrix p = pseudo_core(a, tol).pcore;
      const CMatrix ps = pseudo_core(adjoint(a), tol).pcore;
      if (max_abs(ps - adjoint(p)) > 1e-7 * (1.0 + max_abs(p))) {
        detail = "adjoint compatibility failed at seed " + std::to_string(s);
        return false;
      }
      ++adjoint_checked;
    }
  }
  detail = std::to_string(consistent) + " consistent, " +
           std::to_string(adjoint_checked) + " adjoint-property checks";
  return true;
}

bool sum_and_product_closure(std::string& detail) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    GenSpec spec{4, 2, s, 1.0};
    const auto [a, b] = gen_lemma21_pair(spec);
    const auto rep = is_star_dmp(a + b, tol);
    if (!rep.verdict || !rep.consistent) {
      detail = "sum not star-DMP at seed " + std::to_string(s);
      return false;
    }
  }
  for (std::uint64_t s = 0; s < 200; ++s) {
    GenSpec spec{4, 2, 500 + s, 1.0};
    const auto [a, b] = gen_thm32_pair(spec);
    const auto rep = is_star_dmp(a * b, tol);
    if (!rep.verdict || !rep.consistent) {
      detail = "product not star-DMP at seed " + std::to_string(s);
      return false;
    }
  }
  detail = "200 orthogonal sums + 200 commuting products closed";
  return true;
}

bool triangular_equivalence(std::string& detail) {
  long satisfied = 0, violated = 0, form_disagreements = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    GenSpec spec{3, 2, s, 1.0};
    const auto t = gen_lemma22_triple(spec);
    const auto v = lemma22_check(t.a, t.b, t.d, tol);
    if (!v.equivalence_ok || !v.reports_consistent) {
      detail = "equivalence failed at seed " + std::to_string(s);
      return false;
    }
    if (v.side2 != t.sums_satisfied) {
      detail = "sum criterion missed the construction at seed " +
               std::to_string(s);
      return false;
    }
    t.sums_satisfied ? ++satisfied : ++violated;
    if (v.residuals.at("statement_form_disagrees") != 0.0) ++form_disagreements;
  }
  if (satisfied != 100 || violated != 100) {
    detail = "construction split " + std::to_string(satisfied) + "/" +
             std::to_string(violated) + " instead of 100/100";
    return false;
  }
  detail = "100 satisfying + 100 violating, " +
           std::to_string(form_disagreements) +
           " disagreements between the two sum variants";
  return true;
}

bool additive_formula(std::string& detail) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    GenSpec spec{4, 2, 9000 + s, 1.0};
    const auto [a, b] = gen_thm32_pair(spec);
    const auto add = drazin_add_commuting(a, b, tol);
    const CMatrix direct = drazin(a + b, tol).result.drazin;
    if (max_abs(add.value - direct) > 1e-7) {
      detail = "formula residual over 1e-7 at seed " + std::to_string(s);
      return false;
    }
    const auto v = thm32_verify(a, b, tol);
    if (!v.hypotheses_hold || !v.equivalence_ok || !v.reports_consistent) {
      detail = "verdict failed at seed " + std::to_string(s);
      return false;
    }
  }
  detail = "200 commuting pairs, formula matches the direct computation";
  return true;
}

bool perturbation_equivalences(std::string& detail) {
  struct Case {
    const char* name;
    std::pair<CMatrix, CMatrix> (*gen)(const GenSpec&);
    TheoremVerdict (*verify)(const CMatrix&, const CMatrix&, const Tolerance&);
  };
  const Case cases[] = {
      {"T2.3", gen_thm23_pair, thm23_verify},
      {"T3.3", gen_thm33_pair, thm33_verify},
      {"C2.4", gen_cor24_pair, cor24_verify},
      {"C3.4", gen_cor34_pair, cor34_verify},
  };
  for (const auto& c : cases) {
    for (std::uint64_t s = 0; s < 100; ++s) {
      GenSpec spec{4, 2, 11000 + s, 1.0};
      const auto [a, b] = c.gen(spec);
      const auto v = c.verify(a, b, tol);
      if (!v.hypotheses_hold || !v.equivalence_ok || !v.reports_consistent) {
        detail = std::string(c.name) + " failed at seed " + std::to_string(s);
        return false;
      }
    }
  }
  detail = "100 instances each for T2.3 / T3.3 / C2.4 / C3.4";
  return true;
}

bool block_criteria(std::string& detail) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    GenSpec spec{3, 2, 13000 + s, 1.0};
    {
      const BlockMatrix m = gen_block("L4.1", spec);
      const auto v = lemma41_check(m.B, m.C, tol);
      if (!v.hypotheses_hold || !v.side1 || !v.reports_consistent) {
        detail = "L4.1 failed at seed " + std::to_string(s);
        return false;
      }
    }
    const struct {
      const char* theorem;
      TheoremVerdict (*check)(const BlockMatrix&, const Tolerance&);
      TheoremVerdict (*mirror)(const BlockMatrix&, const Tolerance&);
    } rows[] = {
        {"T4.2", thm42_check, cor43_check},
        {"T4.4", thm44_check, cor45_check},
        {"T4.6", thm46_check, cor47_check},
    };
    for (const auto& row : rows) {
      const BlockMatrix m = gen_block(row.theorem, spec);
      const auto v = row.check(m, tol);
      if (!v.hypotheses_hold || !v.side1 || !v.reports_consistent) {
        detail = std::string(row.theorem) + " failed at seed " + std::to_string(s);
        return false;
      }
      // The mirrored statement must accept the half-swapped instance.
      const auto vm = row.mirror(swap_conjugate(m), tol);
      if (!vm.hypotheses_hold || !vm.side1 || !vm.reports_consistent) {
        detail = std::string(row.theorem) + " mirror failed at seed " +
                 std::to_string(s);
        return false;
      }
    }
  }
  detail = "100 instances per statement, mirrors included";
  return true;
}

bool fuzz_campaign(std::string& detail) {
  const CliRun r = run_cli("fuzz --count 10000 --dim 4 --seed 0", "fuzz");
  if (r.exit_code != 0) {
    detail = "fuzz exited " + std::to_string(r.exit_code);
    return false;
  }
  const Json j = Json::parse(r.out, nullptr, false);
  if (j.is_discarded()) {
    detail = "fuzz report unparseable";
    return false;
  }
  const long inconsistent = j.value("inconsistent", -1L);
  const long failed = j.value("failed", -1L);
  const long nm = j.value("near_miss_instances", 0L);
  const long exact = j.value("near_miss_exact", -1L);
  if (inconsistent != 0 || failed != 0) {
    detail = "failures in the fuzz report";
    return false;
  }
  if (nm <= 0 || exact < static_cast<long>(0.95 * static_cast<double>(nm))) {
    detail = "near-miss exactness " + std::to_string(exact) + "/" +
             std::to_string(nm) + " below 95%";
    return false;
  }
  detail = std::to_string(j.value("instances", 0L)) + " instances, " +
           std::to_string(exact) + "/" + std::to_string(nm) +
           " near-misses exact";
  return true;
}

bool determinism(std::string& detail) {
  const CliRun v1 = run_cli("verify T3.2 --random 50 --dim 4 --seed 1", "det_v1");
  const CliRun v2 = run_cli("verify T3.2 --random 50 --dim 4 --seed 1", "det_v2");
  if (v1.exit_code != 0 || v1.out != v2.out) {
    detail = "verify reports differ between identical runs";
    return false;
  }
  const CliRun f1 = run_cli("fuzz --count 300 --dim 4 --seed 7", "det_f1");
  const CliRun f2 = run_cli("fuzz --count 300 --dim 4 --seed 7", "det_f2");
  if (f1.exit_code != 0 || f1.out != f2.out) {
    detail = "fuzz reports differ between identical runs";
    return false;
  }
  detail = "verify and fuzz byte-identical across repeated runs";
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    std::function<bool(std::string&)> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "four-equation pseudoinverse residuals on 1000 seeded matrices",
       penrose_suite},
      {2, "Drazin certificates on 500 matrices and 200 route cross-checks",
       drazin_suite},
      {3, "three-way characterization consistency on 1500 matrices",
       consistency_suite},
      {4, "closure of orthogonal sums and commuting products", sum_and_product_closure},
      {5, "block triangular sum criterion equivalence on 200 triples",
       triangular_equivalence},
      {6, "additive Drazin formula against the direct computation",
       additive_formula},
      {7, "perturbation equivalences T2.3 / T3.3 / C2.4 / C3.4",
       perturbation_equivalences},
      {8, "2x2 block criteria with swap mirrors", block_criteria},
      {9, "10k-instance fuzz with labelled near-misses", fuzz_campaign},
      {10, "byte-identical repeated reports", determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    const bool ok = c.body(detail);
    if (!ok) ++failures;
    std::printf("%s %2d: %s%s%s\n", ok ? "PASS" : "FAIL", c.number, c.title,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
