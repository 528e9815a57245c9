#include "stardmp/io.hpp"

#include <fstream>
#include <sstream>

namespace stardmp {

namespace {

const Json& field(const Json& j, const char* key, const char* context) {
  if (!j.is_object() || !j.contains(key)) {
    throw JsonFormatError(std::string(context) + ": missing field \"" + key + "\"");
  }
  return j.at(key);
}

Index int_field(const Json& j, const char* key, const char* context) {
  const Json& v = field(j, key, context);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw JsonFormatError(std::string(context) + ": \"" + key +
                          "\" must be an integer");
  }
  const long long raw = v.get<long long>();
  if (raw < 0) {
    throw JsonFormatError(std::string(context) + ": \"" + key +
                          "\" must be nonnegative");
  }
  return static_cast<Index>(raw);
}

}  // namespace

Json matrix_to_json(const CMatrix& a) {
  Json data = Json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      data.push_back(Json::array({a(i, j).real(), a(i, j).imag()}));
    }
  }
  Json out;
  out["rows"] = a.rows();
  out["cols"] = a.cols();
  out["data"] = std::move(data);
  return out;
}

CMatrix matrix_from_json(const Json& j) {
  const Index rows = int_field(j, "rows", "matrix");
  const Index cols = int_field(j, "cols", "matrix");
  const Json& data = field(j, "data", "matrix");
  if (!data.is_array()) throw JsonFormatError("matrix: \"data\" must be an array");
  if (static_cast<Index>(data.size()) != rows * cols) {
    throw JsonFormatError("matrix: \"data\" has " + std::to_string(data.size()) +
                          " entries, expected " + std::to_string(rows * cols));
  }
  CMatrix a(rows, cols);
  Index flat = 0;
  for (const Json& entry : data) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
        !entry[1].is_number()) {
      throw JsonFormatError("matrix: data entries must be [re, im] number pairs");
    }
    a(flat / cols, flat % cols) =
        Complex(entry[0].get<double>(), entry[1].get<double>());
    ++flat;
  }
  return a;
}

Json pair_to_json(const CMatrix& a, const CMatrix& b) {
  Json out;
  out["a"] = matrix_to_json(a);
  out["b"] = matrix_to_json(b);
  return out;
}

std::pair<CMatrix, CMatrix> pair_from_json(const Json& j) {
  return {matrix_from_json(field(j, "a", "pair")),
          matrix_from_json(field(j, "b", "pair"))};
}

Json triple_to_json(const CMatrix& a, const CMatrix& b, const CMatrix& d) {
  Json out;
  out["a"] = matrix_to_json(a);
  out["b"] = matrix_to_json(b);
  out["d"] = matrix_to_json(d);
  return out;
}

std::tuple<CMatrix, CMatrix, CMatrix> triple_from_json(const Json& j) {
  return {matrix_from_json(field(j, "a", "triple")),
          matrix_from_json(field(j, "b", "triple")),
          matrix_from_json(field(j, "d", "triple"))};
}

Json block_to_json(const BlockMatrix& m) {
  Json out;
  out["A"] = matrix_to_json(m.A);
  out["B"] = matrix_to_json(m.B);
  out["C"] = matrix_to_json(m.C);
  out["D"] = matrix_to_json(m.D);
  return out;
}

BlockMatrix block_from_json(const Json& j) {
  return BlockMatrix{matrix_from_json(field(j, "A", "block")),
                     matrix_from_json(field(j, "B", "block")),
                     matrix_from_json(field(j, "C", "block")),
                     matrix_from_json(field(j, "D", "block"))};
}

Json bc_pair_to_json(const CMatrix& b, const CMatrix& c) {
  Json out;
  out["B"] = matrix_to_json(b);
  out["C"] = matrix_to_json(c);
  return out;
}

std::pair<CMatrix, CMatrix> bc_pair_from_json(const Json& j) {
  return {matrix_from_json(field(j, "B", "bc_pair")),
          matrix_from_json(field(j, "C", "bc_pair"))};
}

Json certificate_to_json(const InverseCertificate& cert) {
  Json residuals = Json::object();
  for (const auto& [label, value] : cert.residuals) residuals[label] = value;
  Json out;
  out["kind"] = kind_name(cert.kind);
  out["residuals"] = std::move(residuals);
  out["max_residual"] = cert.max_residual;
  out["pass"] = cert.pass;
  return out;
}

Json report_to_json(const StarDMPReport& report) {
  Json out;
  out["char2"] = report.char2;
  out["char3"] = report.char3;
  out["char5"] = report.char5;
  out["verdict"] = report.verdict;
  out["consistent"] = report.consistent;
  return out;
}

Json verdict_to_json(const TheoremVerdict& v) {
  Json residuals = Json::object();
  for (const auto& check : v.hypothesis_residuals) {
    residuals[check.label] = check.residual;
  }
  for (const auto& [label, value] : v.residuals) residuals[label] = value;
  Json out;
  out["theorem"] = v.theorem_id;
  out["hypotheses_hold"] = v.hypotheses_hold;
  out["side1"] = v.side1;
  out["side2"] = v.side2;
  out["witness_m"] = v.witness_m ? Json(*v.witness_m) : Json(nullptr);
  out["equivalence_ok"] = v.equivalence_ok;
  out["residuals"] = std::move(residuals);
  return out;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw JsonFormatError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw JsonFormatError(path + ": " + e.what());
  }
  return j;
}

std::string dump(const Json& j) { return j.dump(2); }

}  // namespace stardmp
