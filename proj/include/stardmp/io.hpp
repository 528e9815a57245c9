#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "stardmp/additive.hpp"
#include "stardmp/blockmat.hpp"
#include "stardmp/geninv.hpp"
#include "stardmp/matcore.hpp"

namespace stardmp {

using Json = nlohmann::ordered_json;

class JsonFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"rows": n, "cols": m, "data": [[re, im], ...]} with row-major data.
Json matrix_to_json(const CMatrix& a);
CMatrix matrix_from_json(const Json& j);

Json pair_to_json(const CMatrix& a, const CMatrix& b);
std::pair<CMatrix, CMatrix> pair_from_json(const Json& j);

Json triple_to_json(const CMatrix& a, const CMatrix& b, const CMatrix& d);
std::tuple<CMatrix, CMatrix, CMatrix> triple_from_json(const Json& j);

Json block_to_json(const BlockMatrix& m);
BlockMatrix block_from_json(const Json& j);

Json bc_pair_to_json(const CMatrix& b, const CMatrix& c);
std::pair<CMatrix, CMatrix> bc_pair_from_json(const Json& j);

Json certificate_to_json(const InverseCertificate& cert);
Json report_to_json(const StarDMPReport& report);
Json verdict_to_json(const TheoremVerdict& v);

/// Parses the file (or throws JsonFormatError with a readable message).
Json load_json_file(const std::string& path);

/// Fixed-precision printing so identical runs emit identical bytes.
std::string dump(const Json& j);

}  // namespace stardmp
