#include "otbary/gaussian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>
#include <string>

#include "otbary/errors.hpp"

namespace otbary {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kEigenvalueFloor = 1e-14;

void require_spd(const Eigen::MatrixXd& covariance, const char* what) {
  if (covariance.rows() != covariance.cols() || covariance.rows() < 1) {
    throw ValidationError(std::string(what) + ": covariance must be square");
  }
  if (!covariance.allFinite()) {
    throw ValidationError(std::string(what) + ": non-finite covariance entry");
  }
  const double asymmetry = (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > kSymmetryTolerance) {
    throw ValidationError(std::string(what) + ": covariance asymmetric by " +
                          std::to_string(asymmetry));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(covariance);
  if (eigen.eigenvalues().minCoeff() <= 0.0) {
    throw ValidationError(std::string(what) + ": covariance not positive definite");
  }
}

}  // namespace

GaussianParams make_gaussian(Eigen::VectorXd mean, Eigen::MatrixXd covariance) {
  if (mean.size() != covariance.rows()) {
    throw ValidationError("gaussian: mean length " + std::to_string(mean.size()) +
                          " does not match covariance size " +
                          std::to_string(covariance.rows()));
  }
  if (!mean.allFinite()) throw ValidationError("gaussian: non-finite mean entry");
  require_spd(covariance, "gaussian");
  covariance = 0.5 * (covariance + covariance.transpose()).eval();
  return GaussianParams{std::move(mean), std::move(covariance)};
}

Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& matrix) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(matrix);
  const Eigen::VectorXd clamped = eigen.eigenvalues().cwiseMax(kEigenvalueFloor);
  return eigen.eigenvectors() * clamped.cwiseSqrt().asDiagonal() *
         eigen.eigenvectors().transpose();
}

Eigen::MatrixXd sample(const GaussianParams& params, Eigen::Index count, std::uint64_t seed) {
  require_spd(params.covariance, "sample");
  if (count < 1) throw ValidationError("sample: count must be positive");
  Eigen::LLT<Eigen::MatrixXd> llt(params.covariance);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("sample: Cholesky factorization failed");
  }
  const Eigen::MatrixXd factor = llt.matrixL();
  const Eigen::Index d = params.mean.size();

  SplitMix64 rng(seed);
  Eigen::MatrixXd draws(count, d);
  for (Eigen::Index i = 0; i < count; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) draws(i, k) = rng.next_normal();
  }
  draws = draws * factor.transpose();
  draws.rowwise() += params.mean.transpose();
  return draws;
}

GaussianParams mle(const Eigen::MatrixXd& points,
                   const std::optional<Eigen::VectorXd>& weights) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  if (n < 2) throw ValidationError("mle: need at least 2 points");
  Eigen::VectorXd w =
      weights ? *weights : Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  if (w.size() != n || (w.array() <= 0.0).any()) {
    throw ValidationError("mle: weights must be strictly positive, one per point");
  }
  w /= w.sum();

  const Eigen::VectorXd mean = points.transpose() * w;
  Eigen::MatrixXd centered = points.rowwise() - mean.transpose();
  Eigen::MatrixXd covariance =
      centered.transpose() * w.asDiagonal() * centered;
  covariance = 0.5 * (covariance + covariance.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(covariance);
  if (eigen.eigenvalues().minCoeff() <= 0.0) {
    const double trace = covariance.trace();
    const double jitter = 1e-10 * (trace > 0.0 ? trace / static_cast<double>(d) : 1.0);
    std::cerr << "mle: singular covariance, adding diagonal jitter " << jitter << "\n";
    covariance += jitter * Eigen::MatrixXd::Identity(d, d);
  }
  return GaussianParams{mean, covariance};
}

double bures_distance(const GaussianParams& a, const GaussianParams& b) {
  require_spd(a.covariance, "bures_distance");
  require_spd(b.covariance, "bures_distance");
  if (a.mean.size() != b.mean.size()) {
    throw ValidationError("bures_distance: dimension mismatch");
  }
  const Eigen::MatrixXd root_a = spd_sqrt(a.covariance);
  const Eigen::MatrixXd cross = spd_sqrt(root_a * b.covariance * root_a);
  const double trace_term =
      a.covariance.trace() + b.covariance.trace() - 2.0 * cross.trace();
  const double squared = (a.mean - b.mean).squaredNorm() + std::max(trace_term, 0.0);
  return std::sqrt(std::max(squared, 0.0));
}

GaussianParams gaussian_barycenter(const std::vector<GaussianParams>& family,
                                   const Eigen::VectorXd& weights, double tol,
                                   int max_iter) {
  if (family.empty()) throw ValidationError("gaussian_barycenter: empty family");
  if (weights.size() != static_cast<Eigen::Index>(family.size())) {
    throw ValidationError("gaussian_barycenter: weight count mismatch");
  }
  const Eigen::Index d = family.front().mean.size();
  for (const auto& g : family) {
    require_spd(g.covariance, "gaussian_barycenter");
    if (g.mean.size() != d) {
      throw ValidationError("gaussian_barycenter: dimension mismatch");
    }
  }

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t n = 0; n < family.size(); ++n) {
    mean += weights[static_cast<Eigen::Index>(n)] * family[n].mean;
    sigma += weights[static_cast<Eigen::Index>(n)] * family[n].covariance;
  }

  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(sigma);
    const Eigen::VectorXd clamped = eigen.eigenvalues().cwiseMax(kEigenvalueFloor);
    const Eigen::MatrixXd root = eigen.eigenvectors() * clamped.cwiseSqrt().asDiagonal() *
                                 eigen.eigenvectors().transpose();
    const Eigen::MatrixXd inv_root = eigen.eigenvectors() *
                                     clamped.cwiseSqrt().cwiseInverse().asDiagonal() *
                                     eigen.eigenvectors().transpose();
    Eigen::MatrixXd blended = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t n = 0; n < family.size(); ++n) {
      blended += weights[static_cast<Eigen::Index>(n)] *
                 spd_sqrt(root * family[n].covariance * root);
    }
    Eigen::MatrixXd next = inv_root * blended * blended * inv_root;
    next = 0.5 * (next + next.transpose()).eval();
    const double change = (next - sigma).norm();
    sigma = std::move(next);
    if (change < tol) return GaussianParams{mean, sigma};
  }
  throw NumericalError("gaussian_barycenter: no convergence within " +
                       std::to_string(max_iter) + " iterations");
}

Eigen::MatrixXd sample_wishart(int df, const Eigen::MatrixXd& scale, SplitMix64& rng) {
  const Eigen::Index d = scale.rows();
  require_spd(scale, "sample_wishart");
  if (df < d) throw ValidationError("sample_wishart: df must be at least the dimension");
  Eigen::LLT<Eigen::MatrixXd> llt(scale);
  const Eigen::MatrixXd chol = llt.matrixL();

  // Bartlett factor: chi-square diagonal (integer df as a sum of
  // squared normals), standard normals below it.
  Eigen::MatrixXd bartlett = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    double chi2 = 0.0;
    for (int t = 0; t < df - static_cast<int>(i); ++t) {
      const double z = rng.next_normal();
      chi2 += z * z;
    }
    bartlett(i, i) = std::sqrt(chi2);
    for (Eigen::Index j = 0; j < i; ++j) bartlett(i, j) = rng.next_normal();
  }
  const Eigen::MatrixXd la = chol * bartlett;
  return la * la.transpose();
}

}  // namespace otbary
