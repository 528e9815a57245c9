#include "stardmp/cli_app.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "stardmp/additive.hpp"
#include "stardmp/blockmat.hpp"
#include "stardmp/gen.hpp"
#include "stardmp/geninv.hpp"
#include "stardmp/io.hpp"
#include "stardmp/matcore.hpp"

namespace stardmp {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFalse = 1;
constexpr int kExitNoInverse = 2;
constexpr int kExitFailure = 3;
constexpr int kExitUsage = 64;

Json error_json(const std::string& message) {
  Json j;
  j["error"] = message;
  return j;
}

struct BatchOpts {
  std::string file;
  long random_count = 0;
  long count = 100;
  Index dim = 4;
  Index core_rank = 2;
  std::uint64_t seed = 0;
  double magnitude = 1.0;
  Tolerance tol;
};

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {
      "L2.1", "L2.2", "T2.3", "C2.4", "L3.1", "T3.2", "T3.3", "C3.4",
      "L4.1", "T4.2", "C4.3", "T4.4", "C4.5", "T4.6", "C4.7"};
  return ids;
}

bool is_block_id(const std::string& id) {
  return id == "T4.2" || id == "C4.3" || id == "T4.4" || id == "C4.5" ||
         id == "T4.6" || id == "C4.7";
}

TheoremVerdict check_block(const std::string& id, const BlockMatrix& m,
                           const Tolerance& tol) {
  if (id == "T4.2") return thm42_check(m, tol);
  if (id == "C4.3") return cor43_check(m, tol);
  if (id == "T4.4") return thm44_check(m, tol);
  if (id == "C4.5") return cor45_check(m, tol);
  if (id == "T4.6") return thm46_check(m, tol);
  return cor47_check(m, tol);
}

TheoremVerdict verify_pair(const std::string& id, const CMatrix& a,
                           const CMatrix& b, const Tolerance& tol) {
  if (id == "L2.1") return lemma21_verify(a, b, tol);
  if (id == "T2.3") return thm23_verify(a, b, tol);
  if (id == "C2.4") return cor24_verify(a, b, tol);
  if (id == "L3.1") return lemma31_verify(a, b, tol);
  if (id == "T3.2") return thm32_verify(a, b, tol);
  if (id == "T3.3") return thm33_verify(a, b, tol);
  return cor34_verify(a, b, tol);
}

TheoremVerdict verdict_from_json(const std::string& id, const Json& j,
                                 const Tolerance& tol) {
  if (id == "L2.2") {
    auto [a, b, d] = triple_from_json(j);
    return lemma22_check(a, b, d, tol);
  }
  if (id == "L4.1") {
    auto [b, c] = bc_pair_from_json(j);
    return lemma41_check(b, c, tol);
  }
  if (is_block_id(id)) return check_block(id, block_from_json(j), tol);
  auto [a, b] = pair_from_json(j);
  return verify_pair(id, a, b, tol);
}

std::pair<CMatrix, CMatrix> gen_pair_for(const std::string& id,
                                         const GenSpec& spec) {
  if (id == "L2.1") return gen_lemma21_pair(spec);
  if (id == "T2.3") return gen_thm23_pair(spec);
  if (id == "C2.4") return gen_cor24_pair(spec);
  if (id == "L3.1" || id == "T3.2") return gen_thm32_pair(spec);
  if (id == "T3.3") return gen_thm33_pair(spec);
  return gen_cor34_pair(spec);  // C3.4
}

TheoremVerdict verdict_from_seed(const std::string& id, const GenSpec& spec,
                                 const Tolerance& tol) {
  if (id == "L2.2") {
    const Lemma22Triple t = gen_lemma22_triple(spec);
    return lemma22_check(t.a, t.b, t.d, tol);
  }
  if (id == "L4.1") {
    const BlockMatrix m = gen_block(id, spec);
    return lemma41_check(m.B, m.C, tol);
  }
  if (is_block_id(id)) return check_block(id, gen_block(id, spec), tol);
  auto [a, b] = gen_pair_for(id, spec);
  return verify_pair(id, a, b, tol);
}

struct Tally {
  long instances = 0;
  long passed = 0;
  long failed = 0;
  long inconsistent = 0;
  std::vector<std::pair<std::string, Json>> failures;
};

Json report_json(const std::string& command, const Tally& t) {
  Json j;
  j["command"] = command;
  j["instances"] = t.instances;
  j["passed"] = t.passed;
  j["failed"] = t.failed;
  j["inconsistent"] = t.inconsistent;
  Json fails = Json::array();
  for (const auto& [key, v] : t.failures) fails.push_back(Json::array({key, v}));
  j["failures"] = std::move(fails);
  return j;
}

int do_compute(const std::string& kind, const std::string& path,
               const Tolerance& tol, std::ostream& out) {
  const CMatrix a = matrix_from_json(load_json_file(path));
  Json j;
  j["command"] = "compute";
  j["kind"] = kind;
  InverseCertificate cert;
  if (kind == "mp") {
    const MoorePenroseOutput r = moore_penrose(a, tol);
    j["result"] = matrix_to_json(r.pinv);
    cert = r.cert;
  } else if (kind == "drazin") {
    const DrazinOutput r = drazin(a, tol);
    j["result"] = matrix_to_json(r.result.drazin);
    j["index"] = r.result.index;
    j["spectral_idempotent"] = matrix_to_json(r.result.spectral_idempotent);
    cert = r.cert;
  } else if (kind == "group") {
    const auto r = group_inverse(a, tol);
    if (!r) {
      j["error"] = "group inverse does not exist (index exceeds 1)";
      out << dump(j) << "\n";
      return kExitNoInverse;
    }
    j["result"] = matrix_to_json(r->inverse);
    cert = r->cert;
  } else if (kind == "core") {
    const auto r = core_inverse(a, tol);
    if (!r) {
      j["error"] = "core inverse does not exist (index exceeds 1)";
      out << dump(j) << "\n";
      return kExitNoInverse;
    }
    j["result"] = matrix_to_json(r->inverse);
    cert = r->cert;
  } else {  // pcore
    const PseudoCoreOutput r = pseudo_core(a, tol);
    j["result"] = matrix_to_json(r.pcore);
    cert = r.cert;
  }
  j["certificate"] = certificate_to_json(cert);
  out << dump(j) << "\n";
  return cert.pass ? kExitOk : kExitFailure;
}

int do_check(const std::string& predicate, const std::string& path,
             const Tolerance& tol, std::ostream& out) {
  const CMatrix a = matrix_from_json(load_json_file(path));
  Json j;
  j["command"] = "check";
  j["predicate"] = predicate;
  if (predicate == "projection" || predicate == "ep") {
    const bool v =
        predicate == "projection" ? is_projection(a, tol) : is_ep(a, tol);
    j["value"] = v;
    out << dump(j) << "\n";
    return v ? kExitOk : kExitFalse;
  }
  const StarDMPReport rep = is_star_dmp(a, tol);
  j["report"] = report_to_json(rep);
  out << dump(j) << "\n";
  if (!rep.consistent) return kExitFailure;
  return rep.verdict ? kExitOk : kExitFalse;
}

int do_verify(const std::string& id, const BatchOpts& o, std::ostream& out) {
  Tally t;
  const auto record = [&](const std::string& key, const TheoremVerdict& v) {
    ++t.instances;
    if (!v.reports_consistent) ++t.inconsistent;
    if (v.equivalence_ok && v.reports_consistent) {
      ++t.passed;
    } else {
      ++t.failed;
      t.failures.emplace_back(key, verdict_to_json(v));
    }
  };
  if (!o.file.empty()) {
    record(o.file, verdict_from_json(id, load_json_file(o.file), o.tol));
  } else {
    for (long i = 0; i < o.random_count; ++i) {
      const GenSpec spec{o.dim, o.core_rank, o.seed + static_cast<std::uint64_t>(i),
                         o.magnitude};
      record(std::to_string(spec.seed), verdict_from_seed(id, spec, o.tol));
    }
  }
  out << dump(report_json("verify " + id, t)) << "\n";
  return (t.failed == 0 && t.inconsistent == 0) ? kExitOk : kExitFailure;
}

int do_fuzz(const BatchOpts& o, std::ostream& out) {
  Tally t;
  for (long i = 0; i < o.count; ++i) {
    GenSpec spec;
    spec.dim = o.dim;
    spec.core_rank = static_cast<Index>((i / 3) % (o.dim + 1));
    spec.seed = o.seed + static_cast<std::uint64_t>(i);
    spec.magnitude = o.magnitude;
    CMatrix a;
    switch (i % 3) {
      case 0: a = gen_star_dmp(spec); break;
      case 1: a = gen_ep(spec); break;
      default: a = gen_random(spec); break;
    }
    const StarDMPReport rep = is_star_dmp(a, o.tol);
    ++t.instances;
    if (rep.consistent) {
      ++t.passed;
    } else {
      ++t.failed;
      ++t.inconsistent;
      t.failures.emplace_back(std::to_string(spec.seed), report_to_json(rep));
    }
  }

  // Near-miss sweep: every labelled hypothesis must be reported broken on
  // its own instance; exactness is tracked for the report.
  std::vector<std::pair<std::string, std::string>> catalog;
  for (const std::string& id : near_miss_theorems()) {
    for (const std::string& label : near_miss_labels(id)) {
      catalog.emplace_back(id, label);
    }
  }
  const long nm_count = std::max<long>(1, o.count / 10);
  long nm_exact = 0;
  for (long i = 0; i < nm_count; ++i) {
    const auto& [id, label] = catalog[static_cast<std::size_t>(i) % catalog.size()];
    const GenSpec spec{o.dim, o.core_rank,
                       o.seed + static_cast<std::uint64_t>(o.count + i),
                       o.magnitude};
    const NearMiss nm = gen_near_miss(id, label, spec);
    const auto broken = broken_hypotheses(nm, o.tol);
    const bool labelled =
        std::find(broken.begin(), broken.end(), label) != broken.end();
    ++t.instances;
    if (labelled && broken.size() == 1) ++nm_exact;
    if (labelled) {
      ++t.passed;
    } else {
      ++t.failed;
      ++t.inconsistent;
      Json info;
      info["theorem"] = id;
      info["expected"] = label;
      info["broken"] = broken;
      t.failures.emplace_back(std::to_string(spec.seed), std::move(info));
    }
  }

  Json j = report_json("fuzz", t);
  j["near_miss_instances"] = nm_count;
  j["near_miss_exact"] = nm_exact;
  out << dump(j) << "\n";
  return t.inconsistent == 0 ? kExitOk : kExitFailure;
}

int do_gen(const std::string& id, const BatchOpts& o, std::ostream& out) {
  for (long i = 0; i < o.count; ++i) {
    const GenSpec spec{o.dim, o.core_rank, o.seed + static_cast<std::uint64_t>(i),
                       o.magnitude};
    Json line;
    line["seed"] = spec.seed;
    line["theorem"] = id;
    line["hypotheses_verified"] = true;
    if (id == "random") {
      line["matrix"] = matrix_to_json(gen_random(spec));
    } else if (id == "star_dmp") {
      line["matrix"] = matrix_to_json(gen_star_dmp(spec));
    } else if (id == "ep") {
      line["matrix"] = matrix_to_json(gen_ep(spec));
    } else if (id == "L2.2") {
      const Lemma22Triple t = gen_lemma22_triple(spec);
      line.update(triple_to_json(t.a, t.b, t.d));
      line["sums_satisfied"] = t.sums_satisfied;
    } else if (id == "L4.1") {
      const BlockMatrix m = gen_block(id, spec);
      line.update(bc_pair_to_json(m.B, m.C));
    } else if (is_block_id(id)) {
      line.update(block_to_json(gen_block(id, spec)));
    } else {
      auto [a, b] = gen_pair_for(id, spec);
      line.update(pair_to_json(a, b));
    }
    out << line.dump() << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"generalized inverses and *-DMP verification toolkit"};
  app.name("stardmp");
  app.require_subcommand(1);

  std::string kind, predicate, theorem, input_file;
  BatchOpts opts;

  const auto add_tol = [&opts](CLI::App* sub) {
    sub->add_option("--eq-tol", opts.tol.eq_tol, "entrywise comparison tolerance");
    sub->add_option("--rank-rel", opts.tol.rank_rel,
                    "relative singular value cutoff for rank decisions");
  };
  const auto add_gen_opts = [&opts, &add_tol](CLI::App* sub) {
    sub->add_option("--dim", opts.dim, "instance dimension")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", opts.seed, "base seed for the instance stream");
    sub->add_option("--core-rank", opts.core_rank, "core rank of generated cores")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--magnitude", opts.magnitude, "entry scale")
        ->check(CLI::PositiveNumber);
    add_tol(sub);
  };

  CLI::App* compute =
      app.add_subcommand("compute", "compute a generalized inverse with certificate");
  compute->add_option("kind", kind, "one of mp|group|drazin|core|pcore")
      ->required()
      ->check(CLI::IsMember({"mp", "group", "drazin", "core", "pcore"}));
  compute->add_option("input", input_file, "matrix JSON file")->required();
  add_tol(compute);

  CLI::App* check =
      app.add_subcommand("check", "decide a predicate with a cross-checked report");
  check->add_option("predicate", predicate, "one of projection|ep|stardmp")
      ->required()
      ->check(CLI::IsMember({"projection", "ep", "stardmp"}));
  check->add_option("input", input_file, "matrix JSON file")->required();
  add_tol(check);

  CLI::App* verify = app.add_subcommand(
      "verify", "check a statement on a file instance or a generated batch");
  verify->add_option("theorem", theorem, "statement id")
      ->required()
      ->check(CLI::IsMember(theorem_ids()));
  verify->add_option("--file", opts.file, "instance JSON file");
  verify->add_option("--random", opts.random_count, "number of generated instances")
      ->check(CLI::PositiveNumber);
  add_gen_opts(verify);

  CLI::App* fuzz = app.add_subcommand(
      "fuzz", "stress the characterization cross-check and near-miss detection");
  fuzz->add_option("--count", opts.count, "number of generated matrices")
      ->check(CLI::PositiveNumber);
  add_gen_opts(fuzz);

  CLI::App* gen =
      app.add_subcommand("gen", "emit generated instances as JSON lines");
  {
    std::vector<std::string> gen_ids = theorem_ids();
    gen_ids.emplace_back("random");
    gen_ids.emplace_back("star_dmp");
    gen_ids.emplace_back("ep");
    gen->add_option("--theorem", theorem, "statement id or matrix kind")
        ->required()
        ->check(CLI::IsMember(gen_ids));
  }
  gen->add_option("--count", opts.count, "number of instances")
      ->check(CLI::PositiveNumber);
  add_gen_opts(gen);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    out << dump(error_json(e.what())) << "\n";
    return kExitUsage;
  }

  try {
    if (compute->parsed()) return do_compute(kind, input_file, opts.tol, out);
    if (check->parsed()) return do_check(predicate, input_file, opts.tol, out);
    if (verify->parsed()) {
      if (opts.file.empty() == (opts.random_count == 0)) {
        const std::string msg = "verify needs exactly one of --file or --random";
        err << msg << "\n";
        out << dump(error_json(msg)) << "\n";
        return kExitUsage;
      }
      return do_verify(theorem, opts, out);
    }
    if (fuzz->parsed()) return do_fuzz(opts, out);
    if (gen->parsed()) return do_gen(theorem, opts, out);
  } catch (const JsonFormatError& e) {
    err << e.what() << "\n";
    out << dump(error_json(e.what())) << "\n";
    return kExitUsage;
  } catch (const ShapeError& e) {
    err << e.what() << "\n";
    out << dump(error_json(e.what())) << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    out << dump(error_json(e.what())) << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace stardmp
