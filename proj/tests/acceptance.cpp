// Acceptance suite: every release-gating criterion as one timed check
// with a single PASS/FAIL line. Progress goes to stderr, the verdict
// table to stdout; the exit code is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "otbary/barycenter.hpp"
#include "otbary/bayes.hpp"
#include "otbary/experiments.hpp"
#include "otbary/gaussian.hpp"
#include "otbary/metrics.hpp"
#include "otbary/projection.hpp"
#include "otbary/rng.hpp"
#include "otbary/transport.hpp"

using namespace otbary;

namespace {

struct Criterion {
  std::string name;
  double time_budget_seconds;  // 0 = untimed
  std::function<std::string()> run;  // returns "" on pass, reason on fail
};

DiscreteMeasure random_measure(SplitMix64& rng, int m, int d, bool uniform = true,
                               double scale = 1.0) {
  Eigen::MatrixXd pts(m, d);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < d; ++k) pts(i, k) = scale * rng.next_normal();
  }
  if (uniform) return make_measure(pts);
  Eigen::VectorXd w(m);
  for (int i = 0; i < m; ++i) w[i] = rng.next_double_open();
  return make_measure(pts, Eigen::VectorXd(w / w.sum()));
}

std::string check_trace(const std::vector<double>& trace) {
  for (std::size_t k = 1; k < trace.size(); ++k) {
    if (trace[k] > trace[k - 1] + 1e-10) {
      return "objective rose from " + std::to_string(trace[k - 1]) + " to " +
             std::to_string(trace[k]) + " at step " + std::to_string(k);
    }
  }
  return "";
}

// --- 1-3 -------------------------------------------------------------------

int certified_plans = 0;

std::string criterion_permutation_oracle() {
  SplitMix64 rng(1001);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(5));  // 2..6
    const int d = 1 + static_cast<int>(rng.next_below(3));
    const auto a = random_measure(rng, n, d);
    const auto b = random_measure(rng, n, d);
    const auto plan = solve_ot(a, b);
    const double oracle = oracles::permutation_ot_cost(a.support(), b.support());
    if (std::abs(plan.cost - oracle) > 1e-9 * std::max(1.0, std::abs(oracle))) {
      return "trial " + std::to_string(trial) + ": cost " + std::to_string(plan.cost) +
             " vs oracle " + std::to_string(oracle);
    }
    if (certificate_violation(plan, a, b) > 1e-7) {
      return "certificate violated on trial " + std::to_string(trial);
    }
    ++certified_plans;
  }
  return "";
}

std::string criterion_quantile_oracle() {
  SplitMix64 rng(1002);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(50));
    const auto a = random_measure(rng, n, 1);
    const auto b = random_measure(rng, n, 1);
    const auto plan = solve_ot(a, b);
    const double oracle =
        oracles::sorted_matching_cost(a.support().col(0), b.support().col(0));
    if (std::abs(plan.cost - oracle) > 1e-9 * std::max(1.0, std::abs(oracle))) {
      return "trial " + std::to_string(trial) + ": cost " + std::to_string(plan.cost) +
             " vs sorted " + std::to_string(oracle);
    }
    if (certificate_violation(plan, a, b) > 1e-7) {
      return "certificate violated on trial " + std::to_string(trial);
    }
    ++certified_plans;
  }
  return "";
}

std::string criterion_certificates() {
  // The certificate was evaluated alongside criteria 1-2 on every plan.
  if (certified_plans < 700) {
    return "only " + std::to_string(certified_plans) + " certified plans (expected 700)";
  }
  return "";
}

// --- 4 ----------------------------------------------------------------------

std::string criterion_monotone_descent() {
  SplitMix64 rng(1004);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_below(3));
    const int n_measures = 1 + static_cast<int>(rng.next_below(4));
    std::vector<DiscreteMeasure> measures;
    Eigen::Index pooled_atoms = 0;
    for (int n = 0; n < n_measures; ++n) {
      measures.push_back(random_measure(rng, 2 + static_cast<int>(rng.next_below(12)), d,
                                        rng.next_below(2) == 0, 1.0 + 3.0 * rng.next_double()));
      pooled_atoms += measures.back().size();
    }
    Eigen::VectorXd pi(n_measures);
    for (int n = 0; n < n_measures; ++n) pi[n] = rng.next_double_open();
    pi /= pi.sum();

    SolverOptions opts;
    opts.support_size = 1 + static_cast<int>(rng.next_below(
                                static_cast<std::uint64_t>(std::min<Eigen::Index>(6, pooled_atoms))));
    opts.step_size = 0.1 + 0.1 * static_cast<double>(rng.next_below(5));  // 0.1 .. 0.5
    opts.tolerance = 1e-8;
    opts.max_iterations = 60;
    opts.rng_seed = derive_seed(4242, static_cast<std::uint64_t>(trial));
    const auto state = solve(make_family(measures, pi), opts);
    const std::string failure = check_trace(state.objective_trace);
    if (!failure.empty()) return "trial " + std::to_string(trial) + ": " + failure;
  }
  return "";
}

// --- 5 ----------------------------------------------------------------------

std::string criterion_gradient_check() {
  SplitMix64 rng(1005);
  int instances = 0;
  while (instances < 50) {
    const int d = 1 + static_cast<int>(rng.next_below(3));
    const int m = 2 + static_cast<int>(rng.next_below(5));
    const auto current = random_measure(rng, m, d, false);
    const int n_targets = 1 + static_cast<int>(rng.next_below(4));
    std::vector<DiscreteMeasure> targets;
    for (int n = 0; n < n_targets; ++n) {
      targets.push_back(random_measure(rng, 2 + static_cast<int>(rng.next_below(8)), d));
    }
    const auto family = make_family(targets);

    std::vector<Eigen::MatrixXd> plans, supports;
    for (const auto& target : family.measures()) {
      plans.push_back(solve_ot(current, target).plan);
      supports.push_back(target.support());
    }
    const auto gradient = approx_gradient(current, family);
    if (gradient.vectors.cwiseAbs().maxCoeff() < 1e-3) continue;  // keep it nondegenerate
    ++instances;

    const double h = 1e-6;
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index k = 0; k < d; ++k) {
        Eigen::MatrixXd bumped = current.support();
        bumped(i, k) += h;
        const double up = oracles::frozen_plan_objective(bumped, plans, supports,
                                                         family.family_weights());
        bumped(i, k) -= 2.0 * h;
        const double down = oracles::frozen_plan_objective(bumped, plans, supports,
                                                           family.family_weights());
        const double numeric = (up - down) / (2.0 * h);
        const double analytic = current.weights()[i] * gradient.vectors(i, k);
        if (std::abs(analytic - numeric) > 1e-4 * std::max(1.0, std::abs(numeric))) {
          return "instance " + std::to_string(instances) + " atom " + std::to_string(i) +
                 ": analytic " + std::to_string(analytic) + " vs numeric " +
                 std::to_string(numeric);
        }
      }
    }
  }
  return "";
}

// --- 6 ----------------------------------------------------------------------

std::string criterion_gauss_bench() {
  GaussBenchConfig config;
  config.repeats = 20;
  config.atom_grid = {10, 50, 150};
  config.seed = 1006;
  const auto rows = run_gauss_bench(config);

  std::map<int, std::vector<double>> w2, mean_err, cov_err;
  for (const auto& row : rows) {
    w2[row.n_atoms].push_back(row.w2_mc);
    mean_err[row.n_atoms].push_back(row.mean_err);
    cov_err[row.n_atoms].push_back(row.cov_err);
  }
  const auto mean = [](const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  };
  const double w2_10 = mean(w2[10]), w2_150 = mean(w2[150]);
  const double cov_10 = mean(cov_err[10]), cov_150 = mean(cov_err[150]);
  const double loc_10 = mean(mean_err[10]), loc_150 = mean(mean_err[150]);
  std::fprintf(stderr, "  gauss-bench means: w2 %.4f->%.4f cov %.4f->%.4f loc %.4f->%.4f\n",
               w2_10, w2_150, cov_10, cov_150, loc_10, loc_150);
  if (!(w2_150 < w2_10)) return "semi-discrete W2 did not decrease with support size";
  if (!(cov_150 < cov_10)) return "covariance error did not decrease with support size";
  if (!(loc_10 <= 2.0 * loc_150)) return "location error at n=10 above 2x its n=150 value";
  return "";
}

// --- 7 ----------------------------------------------------------------------

std::string criterion_stability_bound() {
  SplitMix64 rng(1007);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_below(3));
    const int n_measures = 1 + static_cast<int>(rng.next_below(4));
    std::vector<DiscreteMeasure> originals, perturbed;
    for (int n = 0; n < n_measures; ++n) {
      const int m = 1 + static_cast<int>(rng.next_below(8));
      Eigen::MatrixXd pts(m, d);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < d; ++j) pts(i, j) = 2.0 * rng.next_normal();
      }
      Eigen::MatrixXd moved = pts;
      const double magnitude = 0.5 * rng.next_double();
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < d; ++j) moved(i, j) += magnitude * rng.next_normal();
      }
      originals.push_back(make_measure(pts));
      perturbed.push_back(make_measure(moved));
    }
    const auto candidate = random_measure(rng, 1 + static_cast<int>(rng.next_below(6)), d);
    const auto result =
        stability_gap(make_family(originals), make_family(perturbed), candidate);
    if (result.gap > result.bound + 1e-9) {
      return "trial " + std::to_string(trial) + ": gap " + std::to_string(result.gap) +
             " above bound " + std::to_string(result.bound);
    }
  }
  return "";
}

// --- 8 ----------------------------------------------------------------------

std::string criterion_wasp() {
  WaspConfig config;
  config.n = 2000;
  config.subset_counts = {5};
  config.support_sizes = {10, 100, 200};
  config.repeats = 10;
  config.seed = 1008;
  const auto records = run_wasp(config);

  std::map<int, std::map<int, double>> w2_by_rep;   // rep -> m -> w2
  std::map<int, std::vector<double>> cov_by_m;      // m -> cov errors (m=0: baseline)
  for (const auto& record : records) {
    w2_by_rep[record.rep][record.m] = record.w2_to_oracle;
    cov_by_m[record.m].push_back(record.cov_err);
  }
  int wins = 0;
  for (const auto& [rep, by_m] : w2_by_rep) {
    if (by_m.at(100) < by_m.at(10)) ++wins;
  }
  const auto mean = [](const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  };
  const double cov_wasp = mean(cov_by_m[200]);
  const double cov_raw = mean(cov_by_m[0]);
  std::fprintf(stderr, "  wasp: m=100 beats m=10 in %d/10 reps; cov %.5f (wasp) vs %.5f (raw)\n",
               wins, cov_wasp, cov_raw);
  if (wins < 8) return "m=100 beat m=10 in only " + std::to_string(wins) + "/10 repetitions";
  if (!(cov_wasp < cov_raw)) {
    return "WASP(m=200) covariance error " + std::to_string(cov_wasp) +
           " not below the raw-sample baseline " + std::to_string(cov_raw);
  }
  return "";
}

// --- 9 ----------------------------------------------------------------------

std::string criterion_classification() {
  const auto train = to_labeled_measures(make_glyph_dataset(50, derive_seed(1009, 1)));
  const auto test = to_labeled_measures(make_glyph_dataset(50, derive_seed(1009, 2)));
  ClassifyConfig config;
  config.support_sizes = {10, 20, 40, 80};
  config.seed = 1009;
  const auto rows = run_classify(train, test, config);

  double at_40 = 0.0;
  double best = 0.0;
  for (const auto& row : rows) {
    std::fprintf(stderr, "  classify m=%d accuracy=%.3f f1=%.3f\n", row.m,
                 row.report.accuracy, row.report.f1);
    best = std::max(best, row.report.accuracy);
    if (row.m == 40) at_40 = row.report.accuracy;
  }
  if (at_40 < 0.95) return "accuracy at m=40 is " + std::to_string(at_40);
  if (at_40 < best - 0.02) {
    return "no early-gain plateau: accuracy(40)=" + std::to_string(at_40) + " but max=" +
           std::to_string(best);
  }
  return "";
}

// --- 10 ---------------------------------------------------------------------

std::string criterion_dvq() {
  std::vector<int> labels;
  const auto data = make_blobs(3000, 10, 3, 10.0, derive_seed(1010, 1), &labels);
  DvqConfig config;
  config.cluster_counts = {3};
  config.split_counts = {2, 5};
  config.seed = 1010;
  const auto rows = run_dvq(data, labels, config);

  double kmeans_ari = 0.0;
  for (const auto& row : rows) {
    if (row.method == "kmeans") kmeans_ari = row.ari;
  }
  for (const auto& row : rows) {
    if (row.method != "dvq") continue;
    std::fprintf(stderr, "  dvq S=%d ari=%.4f (kmeans %.4f)\n", row.S, row.ari, kmeans_ari);
    if (row.ari < 0.95) {
      return "S=" + std::to_string(row.S) + " ARI " + std::to_string(row.ari);
    }
    if (std::abs(row.ari - kmeans_ari) > 0.05) {
      return "S=" + std::to_string(row.S) + " ARI deviates from k-means by " +
             std::to_string(std::abs(row.ari - kmeans_ari));
    }
  }
  return "";
}

// --- 11 ---------------------------------------------------------------------

std::string criterion_fixed_point() {
  SplitMix64 rng(1011);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_below(3));
    const int m = 2 + static_cast<int>(rng.next_below(12));
    const auto mu = random_measure(rng, m, d);
    SolverOptions opts;
    opts.support_size = m;
    opts.rng_seed = derive_seed(1011, static_cast<std::uint64_t>(trial));
    const auto state = solve(make_family({mu}), opts);
    if (state.iteration > 3) {
      return "trial " + std::to_string(trial) + " took " + std::to_string(state.iteration) +
             " iterations";
    }
    const double distance = w2_distance(state.measure(), mu);
    if (distance > 1e-9) {
      return "trial " + std::to_string(trial) + " off by W2 " + std::to_string(distance);
    }
    const std::string failure = check_trace(state.objective_trace);
    if (!failure.empty()) return failure;
  }
  return "";
}

// --- 12 ---------------------------------------------------------------------

std::string criterion_gaussian_oracle() {
  SplitMix64 rng(1012);
  // Fixed-point residual on random 2D/3D families.
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng.next_below(2));
    std::vector<GaussianParams> family;
    const int count = 2 + static_cast<int>(rng.next_below(3));
    for (int n = 0; n < count; ++n) {
      Eigen::MatrixXd a(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) a(i, j) = rng.next_normal();
      }
      family.push_back(make_gaussian(
          Eigen::VectorXd::Zero(d),
          Eigen::MatrixXd(a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(d, d))));
    }
    const Eigen::VectorXd pi = Eigen::VectorXd::Constant(count, 1.0 / count);
    const auto bary = gaussian_barycenter(family, pi);
    const Eigen::MatrixXd root = spd_sqrt(bary.covariance);
    Eigen::MatrixXd blended = Eigen::MatrixXd::Zero(d, d);
    for (int n = 0; n < count; ++n) {
      blended += pi[n] * spd_sqrt(root * family[static_cast<std::size_t>(n)].covariance * root);
    }
    const double residual = (blended - bary.covariance).norm();
    if (residual >= 1e-8) {
      return "trial " + std::to_string(trial) + " residual " + std::to_string(residual);
    }
  }
  // Exact 1D closed form sigma* = sum pi_n sigma_n.
  for (int trial = 0; trial < 100; ++trial) {
    const int count = 2 + static_cast<int>(rng.next_below(4));
    std::vector<GaussianParams> family;
    Eigen::VectorXd pi(count);
    double expected = 0.0;
    for (int n = 0; n < count; ++n) pi[n] = rng.next_double_open();
    pi /= pi.sum();
    for (int n = 0; n < count; ++n) {
      const double sigma = 0.2 + 3.0 * rng.next_double();
      Eigen::MatrixXd cov(1, 1);
      cov << sigma * sigma;
      family.push_back(make_gaussian(Eigen::VectorXd::Zero(1), cov));
      expected += pi[n] * sigma;
    }
    const auto bary = gaussian_barycenter(family, pi);
    if (std::abs(std::sqrt(bary.covariance(0, 0)) - expected) > 1e-10) {
      return "1d trial " + std::to_string(trial) + ": sigma " +
             std::to_string(std::sqrt(bary.covariance(0, 0))) + " vs " +
             std::to_string(expected);
    }
  }
  return "";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"OT cost equals exhaustive permutation minimum (500 instances)", 10.0,
       criterion_permutation_oracle},
      {"1D cost equals sorted quantile matching (200 instances)", 5.0,
       criterion_quantile_oracle},
      {"dual feasibility + complementary slackness on all plans above", 0.0,
       criterion_certificates},
      {"monotone descent on every solver trace", 0.0, criterion_monotone_descent},
      {"frozen-plan gradient matches finite differences (50 instances)", 0.0,
       criterion_gradient_check},
      {"Gaussian benchmark error trends over the atom grid", 300.0, criterion_gauss_bench},
      {"stability gap below 4*R*delta (500 trials)", 0.0, criterion_stability_bound},
      {"WASP resolution and covariance trends (n=2000, K=5)", 300.0, criterion_wasp},
      {"two-glyph nearest-prototype accuracy and plateau", 180.0, criterion_classification},
      {"DVQ matches vanilla k-means on separated blobs", 120.0, criterion_dvq},
      {"single-measure barycenter is a fixed point", 0.0, criterion_fixed_point},
      {"Bures-Wasserstein oracle residual and 1D closed form", 0.0,
       criterion_gaussian_oracle},
  };

  int failures = 0;
  std::vector<std::string> lines;
  for (std::size_t index = 0; index < criteria.size(); ++index) {
    const auto& criterion = criteria[index];
    std::fprintf(stderr, "[%2zu/12] running: %s\n", index + 1, criterion.name.c_str());
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      failure = criterion.run();
    } catch (const std::exception& error) {
      failure = std::string("exception: ") + error.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (failure.empty() && criterion.time_budget_seconds > 0.0 &&
        seconds > criterion.time_budget_seconds) {
      failure = "over time budget (" + std::to_string(seconds) + "s > " +
                std::to_string(criterion.time_budget_seconds) + "s)";
    }
    char line[512];
    std::snprintf(line, sizeof(line), "[%2zu/12] %-62s %s (%.1fs)%s%s", index + 1,
                  criterion.name.c_str(), failure.empty() ? "PASS" : "FAIL", seconds,
                  failure.empty() ? "" : " -- ", failure.c_str());
    lines.emplace_back(line);
    std::fprintf(stderr, "%s\n", line);
    if (!failure.empty()) ++failures;
  }

  std::printf("\n=== acceptance criteria ===\n");
  for (const auto& line : lines) std::printf("%s\n", line.c_str());
  std::printf("%d/12 passed\n", 12 - failures);
  return failures;
}
