#pragma once

// JSON file format shared by the CLI:
//
//   {
//     "vars": 1 | 2,
//     "size": r,
//     "degrees": [m] | [m1, m2],
//     "kind": "laurent" | "analytic",          (optional, default laurent)
//     "coeffs": [ { "index": [k] | [j, k],
//                   "matrix": [[[re, im], ...], ...] }, ... ]
//   }
//
// Missing indices are zero coefficients. Laurent files are checked for
// Q_{-k} = Q_k^*; analytic files must use nonnegative indices only.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fejer/poly.hpp"

namespace fejer::poly {

using PolyValue = std::variant<MatrixLaurentPoly1, MatrixAnalyticPoly1,
                               MatrixLaurentPoly2, MatrixAnalyticPoly2>;

/// Throws Error(kArgument) on any schema violation.
PolyValue from_json(const nlohmann::json& doc);

nlohmann::json to_json(const MatrixLaurentPoly1& q);
nlohmann::json to_json(const MatrixAnalyticPoly1& p);
nlohmann::json to_json(const MatrixLaurentPoly2& q);
nlohmann::json to_json(const MatrixAnalyticPoly2& f);

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, Index rows, Index cols);

/// Reads and parses a polynomial file; malformed JSON and schema errors both
/// surface as Error(kArgument).
PolyValue read_poly_file(const std::string& path);

/// Parses an array of analytic two-variable polynomials.
std::vector<MatrixAnalyticPoly2> factors2_from_json(const nlohmann::json& doc);

}  // namespace fejer::poly
