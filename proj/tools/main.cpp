// Batch driver for the free-support barycenter toolkit. Subcommands: ot,
// barycenter, gauss-bench, wasp, classify, dvq. Every command accepts a
// key=value config file (values overridden by command-line flags), is
// deterministic given --seed, writes results as CSV/JSON under --out,
// and logs to stderr. Exit codes: 0 success, 1 validation error, 2
// numerical failure.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "otbary/barycenter.hpp"
#include "otbary/csv.hpp"
#include "otbary/errors.hpp"
#include "otbary/experiments.hpp"
#include "otbary/measure.hpp"
#include "otbary/transport.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace otbary;

namespace {

struct CommonOptions {
  std::string out;
  std::string config;
  std::uint64_t seed = 1;
  int threads = 1;
  bool dry_run = false;
  bool out_required = false;
};

void add_common(CLI::App* cmd, CommonOptions* common, bool out_required) {
  common->out_required = out_required;
  cmd->add_option("--out", common->out, "Output path");
  cmd->add_option("--seed", common->seed, "Master RNG seed")->capture_default_str();
  cmd->add_option("--threads", common->threads, "Worker pool size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--dry-run", common->dry_run, "Validate the configuration and exit");
  cmd->add_option("--config", common->config,
                  "Config file with key=value lines (command-line flags win)");
}

std::string trimmed(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

// key=value lines; keys are the long option names (dashes and
// underscores interchangeable), list values comma-separated. Values
// from the file fill only options absent from the command line.
void apply_config(CLI::App* cmd, const CommonOptions& common) {
  if (common.config.empty()) return;
  std::ifstream stream(common.config);
  if (!stream) throw ValidationError("cannot open config file " + common.config);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const std::string location = common.config + ":" + std::to_string(line_no);
    const std::string content = trimmed(line);
    if (content.empty() || content[0] == '#') continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(location + ": expected key=value");
    }
    std::string key = trimmed(content.substr(0, eq));
    for (auto& c : key) {
      if (c == '_') c = '-';
    }
    const std::string value = trimmed(content.substr(eq + 1));
    if (key.empty() || key == "config") {
      throw ValidationError(location + ": invalid key");
    }
    auto* option = cmd->get_option_no_throw("--" + key);
    if (option == nullptr) {
      throw ValidationError(location + ": unknown key '" + key + "' for this command");
    }
    if (option->count() > 0) continue;
    std::stringstream pieces(value);
    std::string piece;
    while (std::getline(pieces, piece, ',')) option->add_result(trimmed(piece));
    option->run_callback();
  }
}

void finish_common(CLI::App* cmd, CommonOptions* common) {
  apply_config(cmd, *common);
  if (common->out_required && common->out.empty()) {
    throw ValidationError(cmd->get_name() + ": --out is required");
  }
}

fs::path prepare_out_dir(const std::string& out) {
  const fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ValidationError("cannot create output directory " + out);
  }
  return dir;
}

void require_file(const std::string& path, const std::string& what) {
  if (!fs::is_regular_file(path)) {
    throw ValidationError(what + " does not exist: " + path);
  }
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream stream(path);
  if (!stream) throw ValidationError("cannot write " + path.string());
  stream << text;
  std::cerr << "wrote " << path.string() << "\n";
}

std::vector<LabeledMeasure> load_image_dir(const fs::path& dir) {
  std::vector<LabeledMeasure> items;
  for (const auto& [file, label] : read_labels_csv(dir / "labels.csv")) {
    items.push_back(LabeledMeasure{image_to_measure(read_image_csv(dir / file)), label});
  }
  return items;
}

// ---------------------------------------------------------------------------

int run_ot(const std::string& source_path, const std::string& target_path,
           const std::string& plan_out, const CommonOptions& common) {
  require_file(source_path, "source");
  require_file(target_path, "target");
  if (common.dry_run) return 0;

  const auto source = read_measure_csv(source_path);
  const auto target = read_measure_csv(target_path);
  const auto plan = solve_ot(source, target);

  json result;
  result["cost"] = plan.cost;
  result["w2"] = std::sqrt(std::max(plan.cost, 0.0));
  if (!plan_out.empty()) {
    std::ofstream stream(plan_out);
    if (!stream) throw ValidationError("cannot write " + plan_out);
    stream.precision(17);
    stream << "i,j,mass\n";
    for (Eigen::Index i = 0; i < plan.plan.rows(); ++i) {
      for (Eigen::Index j = 0; j < plan.plan.cols(); ++j) {
        if (plan.plan(i, j) > 0.0) {
          stream << i << "," << j << "," << plan.plan(i, j) << "\n";
        }
      }
    }
    result["plan_path"] = plan_out;
    std::cerr << "wrote " << plan_out << "\n";
  }
  if (common.out.empty()) {
    std::cout << result.dump(2) << "\n";
  } else {
    write_text_file(common.out, result.dump(2) + "\n");
  }
  return 0;
}

int run_barycenter(const std::vector<std::string>& inputs, const std::vector<double>& pi,
                   Eigen::Index support_size, double eta, double tolerance, int max_iter,
                   const std::string& init_file, const CommonOptions& common) {
  for (const auto& path : inputs) require_file(path, "input measure");
  if (!init_file.empty()) require_file(init_file, "initial support");
  if (!pi.empty() && pi.size() != inputs.size()) {
    throw ValidationError("--pi must list one weight per input");
  }
  if (common.dry_run) return 0;

  std::vector<DiscreteMeasure> measures;
  for (const auto& path : inputs) measures.push_back(read_measure_csv(path));
  std::optional<Eigen::VectorXd> weights;
  if (!pi.empty()) {
    weights = Eigen::Map<const Eigen::VectorXd>(pi.data(), static_cast<Eigen::Index>(pi.size()));
  }
  const auto family = make_family(std::move(measures), weights);

  SolverOptions opts;
  opts.step_size = eta;
  opts.tolerance = tolerance;
  opts.max_iterations = max_iter;
  opts.rng_seed = common.seed;
  opts.threads = common.threads;
  if (init_file.empty()) {
    opts.support_size = support_size;
  } else {
    opts.init_mode = InitMode::kUserSupplied;
    opts.initial_support = read_measure_csv(init_file).support();
  }
  const auto state = solve(family, opts);

  const auto dir = prepare_out_dir(common.out);
  write_measure_csv(dir / "barycenter.csv", state.measure());
  std::cerr << "wrote " << (dir / "barycenter.csv").string() << "\n";

  json trace;
  trace["objective"] = state.objective_trace;
  trace["iterations"] = state.iteration;
  trace["m"] = state.support.rows();
  trace["seed"] = common.seed;
  write_text_file(dir / "trace.json", trace.dump(2) + "\n");
  return 0;
}

int run_gauss_bench_cmd(GaussBenchConfig config, const CommonOptions& common) {
  config.seed = common.seed;
  config.threads = common.threads;
  if (common.dry_run) return 0;

  const auto rows = run_gauss_bench(config);
  std::string csv = "rep,n_atoms,w2_mc,w2_stderr,mean_err,bures_cov_err\n";
  for (const auto& row : rows) {
    csv += std::to_string(row.rep) + "," + std::to_string(row.n_atoms) + "," +
           format_double(row.w2_mc) + "," + format_double(row.w2_std_error) + "," +
           format_double(row.mean_err) + "," + format_double(row.cov_err) + "\n";
  }
  write_text_file(prepare_out_dir(common.out) / "results.csv", csv);
  return 0;
}

int run_wasp_cmd(WaspConfig config, const CommonOptions& common) {
  config.seed = common.seed;
  config.threads = common.threads;
  if (common.dry_run) return 0;

  json records = json::array();
  for (const auto& record : run_wasp(config)) {
    records.push_back({{"K", record.K},
                       {"m", record.m},
                       {"rep", record.rep},
                       {"seed", record.seed},
                       {"baseline", record.m == 0},
                       {"w2_to_oracle", record.w2_to_oracle},
                       {"mean_err", record.mean_err},
                       {"cov_err", record.cov_err}});
  }
  json result;
  result["records"] = records;
  write_text_file(prepare_out_dir(common.out) / "results.json", result.dump(2) + "\n");
  return 0;
}

int run_classify_cmd(ClassifyConfig config, const std::string& train_dir,
                     const std::string& test_dir, int per_class,
                     const CommonOptions& common) {
  const bool synthetic = train_dir.empty() && test_dir.empty();
  if (!synthetic && (train_dir.empty() || test_dir.empty())) {
    throw ValidationError("provide both --train-dir and --test-dir, or neither");
  }
  if (!synthetic) {
    require_file(fs::path(train_dir) / "labels.csv", "train labels");
    require_file(fs::path(test_dir) / "labels.csv", "test labels");
  }
  config.seed = common.seed;
  config.threads = common.threads;
  if (common.dry_run) return 0;

  std::vector<LabeledMeasure> train, test;
  if (synthetic) {
    std::cerr << "no data directories given; generating the two-glyph benchmark\n";
    train = to_labeled_measures(make_glyph_dataset(per_class, derive_seed(common.seed, 1)));
    test = to_labeled_measures(make_glyph_dataset(per_class, derive_seed(common.seed, 2)));
  } else {
    train = load_image_dir(train_dir);
    test = load_image_dir(test_dir);
  }

  std::string csv = "m,accuracy,precision,recall,f1\n";
  for (const auto& row : run_classify(train, test, config)) {
    csv += std::to_string(row.m) + "," + format_double(row.report.accuracy) + "," +
           format_double(row.report.precision) + "," + format_double(row.report.recall) +
           "," + format_double(row.report.f1) + "\n";
  }
  write_text_file(prepare_out_dir(common.out) / "metrics.csv", csv);
  return 0;
}

int run_dvq_cmd(DvqConfig config, const std::string& data_path, const std::string& labels_path,
                int synth_n, int synth_d, int synth_k, double separation,
                const CommonOptions& common) {
  if (!data_path.empty()) require_file(data_path, "data");
  if (!labels_path.empty()) require_file(labels_path, "labels");
  config.seed = common.seed;
  config.threads = common.threads;
  if (common.dry_run) return 0;

  Eigen::MatrixXd data;
  std::optional<std::vector<int>> labels;
  if (data_path.empty()) {
    std::cerr << "no --data given; generating " << synth_n << " points in " << synth_k
              << " blobs\n";
    std::vector<int> truth;
    data = make_blobs(synth_n, synth_d, synth_k, separation, derive_seed(common.seed, 3),
                      &truth);
    labels = std::move(truth);
  } else {
    data = read_matrix_csv(data_path);
    if (!labels_path.empty()) labels = read_label_column_csv(labels_path);
  }

  std::string csv = "k,S,method,ari,nmi,silhouette,ch\n";
  for (const auto& row : run_dvq(data, labels, config)) {
    csv += std::to_string(row.k) + "," + std::to_string(row.S) + "," + row.method + "," +
           format_double(row.ari) + "," + format_double(row.nmi) + "," +
           format_double(row.silhouette) + "," + format_double(row.calinski_harabasz) + "\n";
  }
  write_text_file(prepare_out_dir(common.out) / "results.csv", csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-support Wasserstein barycenters: exact transport, particle flow, "
               "and the benchmark pipelines built on them"};
  app.require_subcommand(1);

  // --- ot ------------------------------------------------------------
  CommonOptions ot_common;
  std::string ot_source, ot_target, ot_plan_out;
  auto* ot_cmd = app.add_subcommand("ot", "Exact optimal transport between two measures");
  ot_cmd->add_option("--source", ot_source, "Source measure CSV")->required();
  ot_cmd->add_option("--target", ot_target, "Target measure CSV")->required();
  ot_cmd->add_option("--plan-out", ot_plan_out, "Write the plan as i,j,mass triplets");
  add_common(ot_cmd, &ot_common, false);

  // --- barycenter ------------------------------------------------------
  CommonOptions bary_common;
  std::vector<std::string> bary_inputs;
  std::vector<double> bary_pi;
  Eigen::Index bary_m = 0;
  double bary_eta = 0.5;
  double bary_tol = 1e-6;
  int bary_max_iter = 200;
  std::string bary_init_file;
  auto* bary_cmd = app.add_subcommand("barycenter", "Free-support barycenter of measures");
  bary_cmd->add_option("--input", bary_inputs, "Measure CSV (repeatable)")->required();
  bary_cmd->add_option("--pi", bary_pi, "Family weights (default uniform)")->delimiter(',');
  bary_cmd->add_option("--m", bary_m, "Support size (k-means pooled init)");
  bary_cmd->add_option("--eta", bary_eta, "Step size in (0, 0.5]")->capture_default_str();
  bary_cmd->add_option("--tolerance", bary_tol, "Relative objective tolerance")
      ->capture_default_str();
  bary_cmd->add_option("--max-iter", bary_max_iter, "Iteration cap")->capture_default_str();
  bary_cmd->add_option("--init-file", bary_init_file,
                       "Measure CSV whose support seeds the solver (overrides --m)");
  add_common(bary_cmd, &bary_common, true);

  // --- gauss-bench ------------------------------------------------------
  CommonOptions gauss_common;
  GaussBenchConfig gauss_config;
  auto* gauss_cmd =
      app.add_subcommand("gauss-bench", "Gaussian oracle benchmark over an atom grid");
  gauss_cmd->add_option("--repeats", gauss_config.repeats)->capture_default_str();
  gauss_cmd->add_option("--atom-grid", gauss_config.atom_grid, "Support sizes")
      ->delimiter(',')
      ->capture_default_str();
  gauss_cmd->add_option("--samples", gauss_config.samples_per_component)
      ->capture_default_str();
  gauss_cmd->add_option("--mc-samples", gauss_config.mc_sample_size)->capture_default_str();
  gauss_cmd->add_option("--mc-repeats", gauss_config.mc_repeats)->capture_default_str();
  gauss_cmd->add_option("--tolerance", gauss_config.tolerance)->capture_default_str();
  gauss_cmd->add_option("--max-iter", gauss_config.max_iterations)->capture_default_str();
  add_common(gauss_cmd, &gauss_common, true);

  // --- wasp ------------------------------------------------------------
  CommonOptions wasp_common;
  WaspConfig wasp_config;
  auto* wasp_cmd = app.add_subcommand(
      "wasp", "Divide-and-conquer posterior aggregation for conjugate linear regression");
  wasp_cmd->add_option("--n", wasp_config.n, "Observations")->capture_default_str();
  wasp_cmd->add_option("--k-list", wasp_config.subset_counts, "Subset counts K")
      ->delimiter(',')
      ->capture_default_str();
  wasp_cmd->add_option("--m-list", wasp_config.support_sizes, "Barycenter support sizes")
      ->delimiter(',')
      ->capture_default_str();
  wasp_cmd->add_option("--repeats", wasp_config.repeats)->capture_default_str();
  wasp_cmd->add_option("--draws", wasp_config.draws_per_subset)->capture_default_str();
  wasp_cmd->add_option("--mc-samples", wasp_config.mc_sample_size)->capture_default_str();
  wasp_cmd->add_option("--mc-repeats", wasp_config.mc_repeats)->capture_default_str();
  add_common(wasp_cmd, &wasp_common, true);

  // --- classify ----------------------------------------------------------
  CommonOptions classify_common;
  ClassifyConfig classify_config;
  std::string train_dir, test_dir;
  int per_class = 50;
  auto* classify_cmd = app.add_subcommand(
      "classify", "Nearest-prototype image classification with barycenter prototypes");
  classify_cmd->add_option("--train-dir", train_dir,
                           "Directory of image CSVs plus labels.csv");
  classify_cmd->add_option("--test-dir", test_dir, "Directory of image CSVs plus labels.csv");
  classify_cmd->add_option("--m-list", classify_config.support_sizes, "Prototype sizes")
      ->delimiter(',')
      ->capture_default_str();
  classify_cmd->add_option("--per-class", per_class, "Synthetic images per class")
      ->capture_default_str();
  classify_cmd->add_option("--tolerance", classify_config.tolerance)->capture_default_str();
  classify_cmd->add_option("--max-iter", classify_config.max_iterations)
      ->capture_default_str();
  add_common(classify_cmd, &classify_common, true);

  // --- dvq ---------------------------------------------------------------
  CommonOptions dvq_common;
  DvqConfig dvq_config;
  std::string dvq_data, dvq_labels;
  int synth_n = 3000, synth_d = 10, synth_k = 3;
  double separation = 10.0;
  auto* dvq_cmd = app.add_subcommand(
      "dvq", "Distributed vector quantization clustering via subset summaries");
  dvq_cmd->add_option("--data", dvq_data, "Point CSV with x1..xd header");
  dvq_cmd->add_option("--labels", dvq_labels, "Ground-truth label column CSV");
  dvq_cmd->add_option("--k-list", dvq_config.cluster_counts, "Cluster counts")
      ->delimiter(',')
      ->capture_default_str();
  dvq_cmd->add_option("--s-list", dvq_config.split_counts, "Subset counts S")
      ->delimiter(',')
      ->capture_default_str();
  dvq_cmd->add_option("--fraction", dvq_config.summary_fraction, "Per-subset summary fraction")
      ->capture_default_str();
  dvq_cmd->add_option("--synth-n", synth_n, "Synthetic points")->capture_default_str();
  dvq_cmd->add_option("--synth-d", synth_d, "Synthetic dimension")->capture_default_str();
  dvq_cmd->add_option("--synth-k", synth_k, "Synthetic blob count")->capture_default_str();
  dvq_cmd->add_option("--separation", separation, "Synthetic blob separation")
      ->capture_default_str();
  dvq_cmd->add_option("--tolerance", dvq_config.tolerance)->capture_default_str();
  dvq_cmd->add_option("--max-iter", dvq_config.max_iterations)->capture_default_str();
  add_common(dvq_cmd, &dvq_common, true);

  try {
    app.parse(argc, argv);
    if (ot_cmd->parsed()) {
      finish_common(ot_cmd, &ot_common);
      return run_ot(ot_source, ot_target, ot_plan_out, ot_common);
    }
    if (bary_cmd->parsed()) {
      finish_common(bary_cmd, &bary_common);
      return run_barycenter(bary_inputs, bary_pi, bary_m, bary_eta, bary_tol, bary_max_iter,
                            bary_init_file, bary_common);
    }
    if (gauss_cmd->parsed()) {
      finish_common(gauss_cmd, &gauss_common);
      return run_gauss_bench_cmd(gauss_config, gauss_common);
    }
    if (wasp_cmd->parsed()) {
      finish_common(wasp_cmd, &wasp_common);
      return run_wasp_cmd(wasp_config, wasp_common);
    }
    if (classify_cmd->parsed()) {
      finish_common(classify_cmd, &classify_common);
      return run_classify_cmd(classify_config, train_dir, test_dir, per_class,
                              classify_common);
    }
    if (dvq_cmd->parsed()) {
      finish_common(dvq_cmd, &dvq_common);
      return run_dvq_cmd(dvq_config, dvq_data, dvq_labels, synth_n, synth_d, synth_k,
                         separation, dvq_common);
    }
    return 1;
  } catch (const CLI::ParseError& error) {
    return app.exit(error) == 0 ? 0 : 1;
  } catch (const ValidationError& error) {
    std::cerr << "validation error: " << error.what() << "\n";
    return 1;
  } catch (const NumericalError& error) {
    std::cerr << "numerical error: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  }
}
