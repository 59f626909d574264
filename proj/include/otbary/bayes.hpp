#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "otbary/gaussian.hpp"
#include "otbary/measure.hpp"

namespace otbary {

struct RegressionData {
  Eigen::MatrixXd X;  // n x p
  Eigen::VectorXd y;  // n
  Eigen::VectorXd true_beta;
  double sigma2 = 1.0;
};

// y = X beta + noise with standard-normal covariates; an empty beta
// defaults to all ones.
RegressionData generate_data(Eigen::Index n, Eigen::Index p = 2,
                             const Eigen::VectorXd& beta = Eigen::VectorXd(),
                             double sigma2 = 1.0, std::uint64_t seed = 0);

// Exact conjugate posterior N(m_*, V_*) with
//   V_* = (V0^{-1} + X'X / sigma2)^{-1},
//   m_* = V_* (V0^{-1} m0 + X'y / sigma2).
// Empty prior arguments default to m0 = 0, V0 = 16 I.
GaussianParams oracle_posterior(const RegressionData& data,
                                const Eigen::VectorXd& prior_mean = Eigen::VectorXd(),
                                const Eigen::MatrixXd& prior_covariance = Eigen::MatrixXd());

// Conjugate update under the power likelihood: the data precision
// contribution is scaled by alpha (= n / n_k when correcting a subset
// for sample size).
GaussianParams subset_power_posterior(const RegressionData& subset, double alpha,
                                      const Eigen::VectorXd& prior_mean = Eigen::VectorXd(),
                                      const Eigen::MatrixXd& prior_covariance = Eigen::MatrixXd());

// Wasserstein posterior: draws from every subset posterior become
// uniform empirical measures whose free-support barycenter (uniform
// family weights, m atoms) approximates the full-data posterior.
DiscreteMeasure wasp(const std::vector<GaussianParams>& subset_posteriors,
                     int draws_per_subset, Eigen::Index support_size, std::uint64_t seed,
                     int threads = 1);

}  // namespace otbary
