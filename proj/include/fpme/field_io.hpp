#pragma once

#include <filesystem>
#include <string>

#include "fpme/field.hpp"

namespace fpme {

// 17-significant-digit decimal form (round-trips a double exactly)
std::string format_double(double x);

// Columnar text format: header "# N R n", then one node per line as
// "x1 [x2] value" with round-trip precision, nodes in flattened index order.
void write_field(const ScalarField& f, const std::filesystem::path& path);
ScalarField read_field(const std::filesystem::path& path);

}  // namespace fpme
