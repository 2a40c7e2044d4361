#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace l1cert {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using IndexSet = std::vector<Index>;

struct InvalidInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotConvergedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a structural hypothesis (full row rank of Phi, etc.) fails.
struct AssumptionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// r(J) = +inf: the cosupport kernel meets Ker(Phi) nontrivially.
struct UnboundedRatioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptySubspaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Columns of M selected by idx, in the given order.
inline Matrix select_columns(const Matrix& M, const IndexSet& idx) {
  Matrix out(M.rows(), static_cast<Index>(idx.size()));
  for (Index j = 0; j < out.cols(); ++j) out.col(j) = M.col(idx[static_cast<std::size_t>(j)]);
  return out;
}

inline Vector select_entries(const Vector& v, const IndexSet& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (Index j = 0; j < out.size(); ++j) out(j) = v(idx[static_cast<std::size_t>(j)]);
  return out;
}

/// Sorted complement of idx inside {0, ..., size-1}.
inline IndexSet complement(const IndexSet& idx, Index size) {
  std::vector<bool> in(static_cast<std::size_t>(size), false);
  for (Index i : idx) in[static_cast<std::size_t>(i)] = true;
  IndexSet out;
  for (Index i = 0; i < size; ++i)
    if (!in[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

inline bool all_finite(const Matrix& M) { return M.allFinite(); }

}  // namespace l1cert
