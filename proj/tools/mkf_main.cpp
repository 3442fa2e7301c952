// Command-line harness: fit | bench | stream | gen.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mkf/errors.hpp"
#include "mkf/eval.hpp"
#include "mkf/geometry.hpp"
#include "mkf/init.hpp"
#include "mkf/io.hpp"
#include "mkf/kflats.hpp"
#include "mkf/median_kflats.hpp"
#include "mkf/synth.hpp"

using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

mkf::InitMode parse_init_mode(const std::string& s) {
  if (s == "random") return mkf::InitMode::Random;
  if (s == "nn") return mkf::InitMode::FarthestInsertion;
  throw mkf::InvalidParams("init must be 'random' or 'nn'");
}

// Setting spec: "d=4,K=3,D=6" or "dims=1,2,3;D=5".
struct Setting {
  std::vector<int> dims;
  int D = 0;
  int K() const { return static_cast<int>(dims.size()); }
  int fit_dim() const { return *std::max_element(dims.begin(), dims.end()); }
};

Setting parse_setting(const std::string& spec) {
  int d = 0, K = 0;
  Setting out;
  std::string chunk;
  std::stringstream outer(spec);
  while (std::getline(outer, chunk, ';')) {
    if (chunk.rfind("dims=", 0) == 0) {
      std::stringstream list(chunk.substr(5));
      std::string v;
      while (std::getline(list, v, ',')) out.dims.push_back(std::stoi(v));
      continue;
    }
    std::stringstream inner(chunk);
    std::string kv;
    while (std::getline(inner, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw mkf::InvalidParams("bad setting token '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      const int value = std::stoi(kv.substr(eq + 1));
      if (key == "d") d = value;
      else if (key == "K") K = value;
      else if (key == "D") out.D = value;
      else throw mkf::InvalidParams("unknown setting key '" + key + "'");
    }
  }
  if (out.dims.empty()) {
    if (d < 1 || K < 1)
      throw mkf::InvalidParams("setting needs d and K (or dims=...)");
    out.dims.assign(K, d);
  }
  if (out.D < 2) throw mkf::InvalidParams("setting needs D >= 2");
  for (int di : out.dims) {
    if (di < 1 || di >= out.D)
      throw mkf::InvalidParams("setting needs 1 <= d_i < D");
  }
  return out;
}

// Target dimension of the optional SVD reduction: none | 5 | 4K | integer.
std::optional<int> parse_project(const std::string& spec, int K) {
  if (spec == "none") return std::nullopt;
  if (spec == "4K") return 4 * K;
  try {
    const int m = std::stoi(spec);
    if (m < 1) throw mkf::InvalidParams("project dimension must be >= 1");
    return m;
  } catch (const std::invalid_argument&) {
    throw mkf::InvalidParams("project must be none, 4K, or an integer");
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// fit

int cmd_fit(const std::string& input, int K, int d, const std::string& algo,
            const std::string& init, int restarts, std::uint64_t seed,
            double dt, bool affine, const std::string& project,
            const std::string& truth_path, const std::string& out_prefix) {
  const auto start = std::chrono::steady_clock::now();

  mkf::PointCloud cloud{mkf::read_matrix_file(input), false};
  if (const auto m = parse_project(project, K)) {
    cloud = mkf::svd_project(cloud, *m);
  }
  cloud = affine ? mkf::homogenize(cloud) : mkf::normalize_to_sphere(cloud);

  mkf::FitConfig config;
  config.dt = dt;
  config.rng_seed = seed;
  const mkf::InitMode init_mode = parse_init_mode(init);

  mkf::FitReport report;
  if (algo == "mkf") {
    report = mkf::run_with_restarts(cloud, K, d, config, restarts, init_mode,
                                    mkf::Selection::L1);
  } else if (algo == "kf") {
    report = mkf::kflats_with_restarts(cloud, K, d, restarts, init_mode, seed);
  } else {
    throw mkf::InvalidParams("algo must be 'mkf' or 'kf'");
  }

  json record;
  record["config"] = {{"input", input},   {"K", K},
                      {"d", d},           {"algo", algo},
                      {"init", init},     {"restarts", restarts},
                      {"seed", seed},     {"dt", dt},
                      {"affine", affine}, {"project", project}};
  record["l1_energy"] = report.l1_energy;
  record["l2_energy"] = report.l2_energy;
  record["iters"] = report.iters;
  record["converged"] = report.converged;
  if (!truth_path.empty()) {
    const auto truth = mkf::read_labels_file(truth_path);
    record["error_rate"] = mkf::misclassification_rate(report.labels, truth);
  }
  record["wall_ms"] = elapsed_ms(start);

  mkf::write_labels_file(out_prefix + ".labels", report.labels);
  write_json_file(out_prefix + ".json", record);
  std::cout << record.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct TrialResult {
  double mkf_error = -1, kf_error = -1;
  double mkf_runtime_s = 0, kf_runtime_s = 0;
};

int cmd_bench(const std::string& setting_spec, double outlier_frac, int trials,
              const std::string& algos, std::uint64_t seed, int restarts_mkf,
              int restarts_kf, const std::string& init, double dt, int jobs,
              const std::string& out_prefix) {
  const Setting setting = parse_setting(setting_spec);
  bool run_mkf = false, run_kf = false;
  std::stringstream algo_list(algos);
  std::string algo;
  while (std::getline(algo_list, algo, ',')) {
    if (algo == "mkf") run_mkf = true;
    else if (algo == "kf") run_kf = true;
    else throw mkf::InvalidParams("unknown algo '" + algo + "'");
  }
  if (!run_mkf && !run_kf) throw mkf::InvalidParams("algos must name mkf or kf");
  if (trials < 1) throw mkf::InvalidParams("trials must be >= 1");
  const mkf::InitMode init_mode = parse_init_mode(init);

  std::vector<TrialResult> results(trials);
  auto run_trial = [&](int t) {
    mkf::SynthParams params;
    params.K = setting.K();
    params.dims = setting.dims;
    params.D = setting.D;
    params.outlier_frac = outlier_frac;
    params.seed = seed + static_cast<std::uint64_t>(t);
    const mkf::LabeledDataset data = mkf::generate_hlm(params);
    const mkf::PointCloud cloud = mkf::normalize_to_sphere(data.cloud);
    const int d_fit = setting.fit_dim();

    if (run_mkf) {
      mkf::FitConfig config;
      config.dt = dt;
      config.rng_seed = params.seed;
      const auto t0 = std::chrono::steady_clock::now();
      const auto report =
          mkf::run_with_restarts(cloud, params.K, d_fit, config, restarts_mkf,
                                 init_mode, mkf::Selection::L1);
      results[t].mkf_runtime_s = elapsed_ms(t0) / 1e3;
      results[t].mkf_error =
          mkf::misclassification_rate(report.labels, data.truth);
    }
    if (run_kf) {
      // K-flats runs on the raw coordinates: sphere normalization is part of
      // the median fitter's pipeline, and it would mask the leverage that
      // large-norm outliers exert on the least-squares objective.
      const auto t0 = std::chrono::steady_clock::now();
      const auto report = mkf::kflats_with_restarts(
          data.cloud, params.K, d_fit, restarts_kf, init_mode, params.seed);
      results[t].kf_runtime_s = elapsed_ms(t0) / 1e3;
      results[t].kf_error =
          mkf::misclassification_rate(report.labels, data.truth);
    }
  };

  const int workers = std::max(1, std::min(jobs, trials));
  if (workers == 1) {
    for (int t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int t = w; t < trials; t += workers) run_trial(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  json record;
  record["config"] = {{"setting", setting_spec},
                      {"outlier_frac", outlier_frac},
                      {"trials", trials},
                      {"algos", algos},
                      {"seed", seed},
                      {"restarts_mkf", restarts_mkf},
                      {"restarts_kf", restarts_kf},
                      {"init", init},
                      {"dt", dt}};

  std::ofstream csv(out_prefix + ".csv");
  csv << "algo,trials,mean_error,median_error,std_error,mean_runtime_s\n";
  auto emit = [&](const std::string& algo, auto error_of, auto runtime_of) {
    std::vector<double> errors, runtimes;
    for (const auto& r : results) {
      errors.push_back(error_of(r));
      runtimes.push_back(runtime_of(r));
    }
    const mkf::TrialStats stats = mkf::aggregate(errors, runtimes);
    csv << algo << ',' << trials << ',' << stats.mean << ',' << stats.median
        << ',' << stats.stddev << ',' << stats.mean_runtime << '\n';
    record[algo] = {{"errors", errors},
                    {"mean_error", stats.mean},
                    {"median_error", stats.median},
                    {"std_error", stats.stddev},
                    {"runtimes_s", runtimes},
                    {"mean_runtime_s", stats.mean_runtime}};
  };
  if (run_mkf) {
    emit("mkf", [](const TrialResult& r) { return r.mkf_error; },
         [](const TrialResult& r) { return r.mkf_runtime_s; });
  }
  if (run_kf) {
    emit("kf", [](const TrialResult& r) { return r.kf_error; },
         [](const TrialResult& r) { return r.kf_runtime_s; });
  }
  write_json_file(out_prefix + ".json", record);
  std::cout << record.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// stream

int cmd_stream(int K, int d, double dt, std::uint64_t seed,
               const std::string& bases_out) {
  mkf::FitConfig config;
  config.dt = dt;
  config.rng_seed = seed;

  std::optional<mkf::OnlineSession> session;
  std::string line;
  long line_number = 0;
  long dim = -1;
  while (std::getline(std::cin, line)) {
    ++line_number;
    if (line.empty()) continue;
    const Eigen::VectorXd raw = mkf::parse_point_line(line, line_number, dim);
    if (!session) {
      dim = raw.size();
      if (d >= dim)
        throw mkf::InvalidParams("d must be below the ambient dimension");
      session = mkf::make_online_session(K, d, static_cast<int>(dim), config);
    }
    std::cout << mkf::mkf_feed(*session, raw) << '\n';
  }

  if (!bases_out.empty()) {
    std::ofstream out(bases_out);
    out << std::setprecision(17);
    if (!session) {
      // No input: emit the initialization for the requested setup only if
      // the ambient dimension is known; with none, emit nothing.
      return 0;
    }
    for (size_t i = 0; i < session->state.bases.size(); ++i) {
      out << "# basis " << (i + 1) << '\n';
      const auto& rows = session->state.bases[i].rows;
      for (long r = 0; r < rows.rows(); ++r) {
        for (long c = 0; c < rows.cols(); ++c) {
          if (c) out << ' ';
          out << rows(r, c);
        }
        out << '\n';
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// gen

int cmd_gen(const std::string& setting_spec, int n_per, double noise_std,
            double outlier_frac, std::uint64_t seed,
            const std::string& out_prefix) {
  const Setting setting = parse_setting(setting_spec);
  mkf::SynthParams params;
  params.K = setting.K();
  params.dims = setting.dims;
  params.D = setting.D;
  params.n_per = n_per;
  params.noise_std = noise_std;
  params.outlier_frac = outlier_frac;
  params.seed = seed;
  const mkf::LabeledDataset data = mkf::generate_hlm(params);
  mkf::write_matrix_file(out_prefix + ".csv", data.cloud.points);
  mkf::write_labels_file(out_prefix + ".labels", data.truth);
  std::cout << "wrote " << data.cloud.size() << " points (" << params.D
            << "-dim) to " << out_prefix << ".csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Median K-flats subspace clustering"};
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "Fit subspaces to a matrix file");
  std::string fit_input, fit_algo = "mkf", fit_init = "random";
  std::string fit_project = "none", fit_truth, fit_out = "fit";
  int fit_K = 0, fit_d = 0, fit_restarts = 0;
  std::uint64_t fit_seed = 0;
  double fit_dt = 0.01;
  bool fit_affine = false;
  fit->add_option("--input", fit_input, "Input matrix file")->required();
  fit->add_option("--K", fit_K, "Number of subspaces")->required();
  fit->add_option("--d", fit_d, "Subspace dimension")->required();
  fit->add_option("--algo", fit_algo, "mkf | kf");
  fit->add_option("--init", fit_init, "random | nn");
  fit->add_option("--restarts", fit_restarts, "Restart count (0 = default)");
  fit->add_option("--seed", fit_seed, "RNG seed");
  fit->add_option("--dt", fit_dt, "SGD step size");
  fit->add_flag("--affine", fit_affine, "Add a homogeneous coordinate");
  fit->add_option("--project", fit_project, "none | 5 | 4K | m");
  fit->add_option("--truth", fit_truth, "Truth labels for error_rate");
  fit->add_option("--out", fit_out, "Output prefix");

  // bench
  auto* bench = app.add_subcommand("bench", "Synthetic benchmark");
  std::string bench_setting, bench_algos = "mkf,kf", bench_init = "random";
  std::string bench_out = "bench";
  double bench_outlier = 0.30, bench_dt = 0.01;
  int bench_trials = 20, bench_rmkf = 5, bench_rkf = 30, bench_jobs = 1;
  std::uint64_t bench_seed = 0;
  bench->add_option("--setting", bench_setting, "e.g. d=4,K=3,D=6 or dims=1,2,3;D=5")
      ->required();
  bench->add_option("--outlier-frac", bench_outlier, "Outlier fraction");
  bench->add_option("--trials", bench_trials, "Trial count");
  bench->add_option("--algos", bench_algos, "Comma list of mkf,kf");
  bench->add_option("--seed", bench_seed, "Base RNG seed");
  bench->add_option("--restarts-mkf", bench_rmkf, "MKF restarts");
  bench->add_option("--restarts-kf", bench_rkf, "KF restarts");
  bench->add_option("--init", bench_init, "random | nn");
  bench->add_option("--dt", bench_dt, "SGD step size");
  bench->add_option("--jobs", bench_jobs, "Parallel trial workers");
  bench->add_option("--out", bench_out, "Output prefix");

  // stream
  auto* stream = app.add_subcommand("stream", "Online fitting from stdin");
  int stream_K = 0, stream_d = 0;
  double stream_dt = 0.01;
  std::uint64_t stream_seed = 0;
  std::string stream_bases;
  stream->add_option("--K", stream_K, "Number of subspaces")->required();
  stream->add_option("--d", stream_d, "Subspace dimension")->required();
  stream->add_option("--dt", stream_dt, "SGD step size");
  stream->add_option("--seed", stream_seed, "RNG seed");
  stream->add_option("--bases-out", stream_bases, "Final bases file");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  std::string gen_setting, gen_out = "data";
  int gen_nper = 250;
  double gen_noise = 0.05, gen_outlier = 0.05;
  std::uint64_t gen_seed = 0;
  gen->add_option("--setting", gen_setting, "e.g. d=4,K=3,D=6")->required();
  gen->add_option("--n-per", gen_nper, "Points per subspace");
  gen->add_option("--noise-std", gen_noise, "Per-coordinate orthogonal noise std");
  gen->add_option("--outlier-frac", gen_outlier, "Outlier fraction");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "Output prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit) {
      const int restarts =
          fit_restarts > 0 ? fit_restarts : (fit_algo == "kf" ? 30 : 5);
      return cmd_fit(fit_input, fit_K, fit_d, fit_algo, fit_init, restarts,
                     fit_seed, fit_dt, fit_affine, fit_project, fit_truth,
                     fit_out);
    }
    if (*bench) {
      return cmd_bench(bench_setting, bench_outlier, bench_trials, bench_algos,
                       bench_seed, bench_rmkf, bench_rkf, bench_init, bench_dt,
                       bench_jobs, bench_out);
    }
    if (*stream) {
      return cmd_stream(stream_K, stream_d, stream_dt, stream_seed,
                        stream_bases);
    }
    if (*gen) {
      return cmd_gen(gen_setting, gen_nper, gen_noise, gen_outlier, gen_seed,
                     gen_out);
    }
  } catch (const mkf::InvalidParams& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
