#include "l1cert/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace l1cert::io {

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw InvalidInputError("'" + key + "' must be a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Matrix M(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw InvalidInputError("'" + key + "' has inconsistent row lengths");
    for (std::size_t c = 0; c < cols; ++c)
      M(static_cast<Index>(r), static_cast<Index>(c)) = j[r][c].get<double>();
  }
  if (!M.allFinite()) throw InvalidInputError("'" + key + "' contains non-finite entries");
  return M;
}

Vector parse_vector(const json& j, const std::string& key) {
  if (!j.is_array()) throw InvalidInputError("'" + key + "' must be an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j[i].get<double>();
  if (!v.allFinite()) throw InvalidInputError("'" + key + "' contains non-finite entries");
  return v;
}

json matrix_to_json(const Matrix& M) {
  json rows = json::array();
  for (Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(row);
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

certify::ProblemInstance parse_instance(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidInputError(std::string("instance parse error: ") + e.what());
  }
  certify::ProblemInstance inst;
  if (!j.contains("phi") || !j.contains("psi") || !j.contains("b"))
    throw InvalidInputError("instance requires 'phi', 'psi', and 'b'");
  inst.phi = parse_matrix(j["phi"], "phi");
  inst.psi = parse_matrix(j["psi"], "psi");
  inst.b = parse_vector(j["b"], "b");
  if (inst.psi.rows() != inst.phi.cols())
    throw InvalidInputError("psi must have one row per column of phi");
  if (inst.b.size() != inst.phi.rows())
    throw InvalidInputError("b must have one entry per row of phi");
  if (j.contains("x_star")) {
    inst.x_star = parse_vector(j["x_star"], "x_star");
    if (inst.x_star->size() != inst.phi.cols())
      throw InvalidInputError("x_star must have one entry per column of phi");
  }
  if (j.contains("delta")) {
    inst.delta = j["delta"].get<double>();
    if (*inst.delta < 0) throw InvalidInputError("delta must be nonnegative");
  }
  if (j.contains("lambda")) {
    inst.lambda = j["lambda"].get<double>();
    if (*inst.lambda <= 0) throw InvalidInputError("lambda must be positive");
  }
  if (j.contains("seed")) inst.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("name")) inst.name = j["name"].get<std::string>();
  return inst;
}

certify::ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open instance file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string instance_to_json(const certify::ProblemInstance& instance) {
  json j;
  j["phi"] = matrix_to_json(instance.phi);
  j["psi"] = matrix_to_json(instance.psi);
  j["b"] = vector_to_json(instance.b);
  if (instance.x_star) j["x_star"] = vector_to_json(*instance.x_star);
  if (instance.delta) j["delta"] = *instance.delta;
  if (instance.lambda) j["lambda"] = *instance.lambda;
  if (instance.seed) j["seed"] = *instance.seed;
  if (!instance.name.empty()) j["name"] = instance.name;
  return j.dump(2) + "\n";
}

void save_instance(const certify::ProblemInstance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write instance file: " + path);
  out << instance_to_json(instance);
}

}  // namespace l1cert::io
