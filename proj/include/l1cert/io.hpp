#pragma once

#include <string>

#include "l1cert/certify.hpp"
#include "l1cert/common.hpp"

namespace l1cert::io {

/// Parses an instance document: keys "phi", "psi" (arrays of rows), "b",
/// optional "x_star", "delta", "lambda", "seed", "name".
certify::ProblemInstance parse_instance(const std::string& json_text);

certify::ProblemInstance load_instance(const std::string& path);

/// Serializes with round-trip-exact decimal doubles.
std::string instance_to_json(const certify::ProblemInstance& instance);

void save_instance(const certify::ProblemInstance& instance, const std::string& path);

}  // namespace l1cert::io
