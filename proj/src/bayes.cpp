#include "otbary/bayes.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>
#include <utility>

#include "otbary/barycenter.hpp"
#include "otbary/errors.hpp"

namespace otbary {

namespace {

struct Prior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

Prior resolve_prior(Eigen::Index p, const Eigen::VectorXd& mean,
                    const Eigen::MatrixXd& covariance) {
  Prior prior;
  prior.mean = mean.size() == 0 ? Eigen::VectorXd::Zero(p) : mean;
  prior.covariance = covariance.size() == 0
                         ? Eigen::MatrixXd(16.0 * Eigen::MatrixXd::Identity(p, p))
                         : covariance;
  if (prior.mean.size() != p || prior.covariance.rows() != p ||
      prior.covariance.cols() != p) {
    throw ValidationError("posterior: prior dimensions do not match p = " +
                          std::to_string(p));
  }
  return prior;
}

GaussianParams conjugate_update(const RegressionData& data, double alpha,
                                const Prior& prior) {
  if (data.y.size() != data.X.rows()) {
    throw ValidationError("posterior: X and y row counts differ");
  }
  if (!(data.sigma2 > 0.0)) throw ValidationError("posterior: sigma2 must be positive");
  const Eigen::Index p = data.X.cols();
  const Eigen::MatrixXd prior_precision =
      prior.covariance.llt().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd precision =
      prior_precision + (alpha / data.sigma2) * (data.X.transpose() * data.X);
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("posterior: precision matrix not positive definite");
  }
  const Eigen::MatrixXd covariance = llt.solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::VectorXd lhs =
      prior_precision * prior.mean + (alpha / data.sigma2) * (data.X.transpose() * data.y);
  return make_gaussian(llt.solve(lhs), 0.5 * (covariance + covariance.transpose()));
}

}  // namespace

RegressionData generate_data(Eigen::Index n, Eigen::Index p, const Eigen::VectorXd& beta,
                             double sigma2, std::uint64_t seed) {
  if (p < 1) throw ValidationError("generate_data: p must be positive");
  if (n < p) throw ValidationError("generate_data: need n >= p");
  if (!(sigma2 > 0.0)) throw ValidationError("generate_data: sigma2 must be positive");
  Eigen::VectorXd coefficients = beta.size() == 0 ? Eigen::VectorXd::Ones(p) : beta;
  if (coefficients.size() != p) {
    throw ValidationError("generate_data: beta length does not match p");
  }

  SplitMix64 rng(seed);
  RegressionData data;
  data.X.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < p; ++k) data.X(i, k) = rng.next_normal();
  }
  data.y = data.X * coefficients;
  const double sigma = std::sqrt(sigma2);
  for (Eigen::Index i = 0; i < n; ++i) data.y[i] += sigma * rng.next_normal();
  data.true_beta = std::move(coefficients);
  data.sigma2 = sigma2;
  return data;
}

GaussianParams oracle_posterior(const RegressionData& data, const Eigen::VectorXd& prior_mean,
                                const Eigen::MatrixXd& prior_covariance) {
  const Prior prior = resolve_prior(data.X.cols(), prior_mean, prior_covariance);
  return conjugate_update(data, 1.0, prior);
}

GaussianParams subset_power_posterior(const RegressionData& subset, double alpha,
                                      const Eigen::VectorXd& prior_mean,
                                      const Eigen::MatrixXd& prior_covariance) {
  if (!(alpha > 0.0)) throw ValidationError("subset_power_posterior: alpha must be positive");
  const Prior prior = resolve_prior(subset.X.cols(), prior_mean, prior_covariance);
  return conjugate_update(subset, alpha, prior);
}

DiscreteMeasure wasp(const std::vector<GaussianParams>& subset_posteriors,
                     int draws_per_subset, Eigen::Index support_size, std::uint64_t seed,
                     int threads) {
  if (subset_posteriors.empty()) throw ValidationError("wasp: no subset posteriors");
  if (draws_per_subset < 1) throw ValidationError("wasp: draws_per_subset must be positive");
  if (support_size < 1) throw ValidationError("wasp: support size must be positive");

  std::vector<DiscreteMeasure> empiricals;
  empiricals.reserve(subset_posteriors.size());
  for (std::size_t k = 0; k < subset_posteriors.size(); ++k) {
    empiricals.push_back(
        make_measure(sample(subset_posteriors[k], draws_per_subset, derive_seed(seed, k))));
  }

  SolverOptions opts;
  opts.support_size = support_size;
  opts.rng_seed = derive_seed(seed, 0xbacca);
  opts.threads = threads;
  return solve(make_family(std::move(empiricals)), opts).measure();
}

}  // namespace otbary
