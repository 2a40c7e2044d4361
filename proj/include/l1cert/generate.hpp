#pragma once

#include <cstdint>
#include <random>

#include "l1cert/certify.hpp"
#include "l1cert/common.hpp"

namespace l1cert::generate {

enum class PsiKind { Identity, TightFrame, Random };

struct GenerateOptions {
  Index m = 4;
  Index n = 8;
  Index l = 8;  // ignored for identity
  Index sparsity = 2;
  PsiKind psi = PsiKind::Identity;
  std::uint64_t seed = 0;
  bool rounded_phi = false;  // entries snapped to {-1, 0, 1}: breeds ties
};

Matrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng);

/// Uniform sample on the sphere of the given radius.
Vector sphere_noise(Index dim, double radius, std::mt19937_64& rng);

/// Gaussian Phi with unit-norm rows; Psi per kind (tight frame satisfies
/// lambda_max(Psi Psi') = 1); x_star with the requested analysis sparsity
/// when Psi is the identity. Fully reproducible from the seed.
certify::ProblemInstance random_instance(const GenerateOptions& opt);

}  // namespace l1cert::generate
