#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "otbary/rng.hpp"

namespace otbary {

// Mean and symmetric positive-definite covariance.
struct GaussianParams {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Validates symmetry (within 1e-12) and positive definiteness, then
// symmetrizes exactly.
GaussianParams make_gaussian(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

// Symmetric square root by eigendecomposition; eigenvalues are clamped
// at 1e-14 so near-singular inputs stay invertible downstream.
Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& matrix);

// n i.i.d. rows, Cholesky factor times standard normals.
Eigen::MatrixXd sample(const GaussianParams& params, Eigen::Index count, std::uint64_t seed);

// Weighted mean and biased (MLE) covariance. A singular covariance is
// repaired with a small diagonal jitter and a warning on stderr.
GaussianParams mle(const Eigen::MatrixXd& points,
                   const std::optional<Eigen::VectorXd>& weights = std::nullopt);

// Bures-Wasserstein distance:
// sqrt(||m_a - m_b||^2 + tr(S_a + S_b - 2 (S_a^{1/2} S_b S_a^{1/2})^{1/2})).
double bures_distance(const GaussianParams& a, const GaussianParams& b);

// Fixed-point iteration for the Gaussian barycenter: mean is the
// weighted average of means; covariance iterates
//   S <- S^{-1/2} (sum_n pi_n (S^{1/2} S_n S^{1/2})^{1/2})^2 S^{-1/2}
// from S_0 = sum_n pi_n S_n until the Frobenius change drops below tol.
GaussianParams gaussian_barycenter(const std::vector<GaussianParams>& family,
                                   const Eigen::VectorXd& weights, double tol = 1e-10,
                                   int max_iter = 500);

// Wishart draw via Bartlett decomposition; df must be an integer >= d.
Eigen::MatrixXd sample_wishart(int df, const Eigen::MatrixXd& scale, SplitMix64& rng);

}  // namespace otbary
