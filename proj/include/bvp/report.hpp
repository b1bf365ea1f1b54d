#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bvp/func.hpp"

namespace bvp {

using Json = nlohmann::ordered_json;

/// 17-significant-digit decimal form; round-trips doubles exactly.
std::string format_float(double v);
/// "re" when imaginary part is zero, otherwise "re+imi" / "re-imi".
std::string format_complex(Complex v);

/// RFC-4180 field quoting (quotes applied only when needed).
std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

/// JSON building blocks with floats carried as doubles; serialize with
/// dump_json so every float prints with 17 significant digits.
Json complex_json(Complex v);
Json matrix_json(const Matrix& m);

/// Deterministic writer: objects keep insertion order, doubles print via
/// format_float, two-space indentation.
void dump_json(const Json& j, std::ostream& os, int indent = 0);
std::string dump_json(const Json& j);

}  // namespace bvp
