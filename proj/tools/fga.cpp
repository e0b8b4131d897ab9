// Command-line driver for the federated graph analytics experiments.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fga/harness.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"federated graph analytics with differential privacy"};
  app.set_config("--config", "", "flat key=value config file; flags override");
  app.allow_config_extras(false);

  std::string dataset;
  std::vector<double> synthetic;
  int m = 4;
  double rho = 0.3;
  double sigma = 0.2;
  std::vector<double> epsilons = {3.0};
  std::vector<double> fractions = {0.45, 0.1, 0.45};
  std::vector<std::string> protocols;
  std::string query = "triangle";
  std::string dpsu_mode = "single-flip";
  int trials = 10;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string backend = "reference";
  int threads = 1;
  double degree_cap = 0.0;
  bool bench = false;
  bool fixed_split = false;
  bool noise_free = false;

  app.add_option("--dataset", dataset, "edge-list dataset path");
  app.add_option("--synthetic", synthetic,
                 "Erdos-Renyi instance as n,p (used when no dataset)")
      ->delimiter(',')
      ->expected(0, 2);
  app.add_option("--m", m, "client count");
  app.add_option("--rho", rho, "sampling rate in (0,1]");
  app.add_option("--sigma", sigma, "overlapping rate in [0,1)");
  app.add_option("--epsilon", epsilons, "privacy budget sweep")
      ->delimiter(',');
  app.add_option("--budget-fractions", fractions,
                 "feat_plus split as f1,f2,f3")
      ->delimiter(',')
      ->expected(0, 3);
  app.add_option("--protocol", protocols,
                 "protocol to run: baseline|feat|feat_plus (repeatable)");
  app.add_option("--query", query, "query spec: triangle | kstar:K");
  app.add_option("--dpsu-mode", dpsu_mode, "single-flip | literal-alg3");
  app.add_option("--trials", trials, "trials per grid point");
  app.add_option("--seed", seed, "root seed");
  app.add_option("--out", out_path, "metrics CSV output path (default stdout)");
  app.add_option("--backend", backend, "group backend: reference | ristretto");
  app.add_option("--threads", threads, "parallel trial workers");
  app.add_option("--degree-cap", degree_cap,
                 "public degree cap for sensitivity (0: true max degree)");
  app.add_flag("--bench", bench, "benchmark group ops instead of experiments");
  app.add_flag("--fixed-split", fixed_split, "reuse one split for all trials");
  app.add_flag("--noise-free", noise_free, "disable all randomness (testing)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (bench) {
      auto group = fga::make_backend(backend);
      fga::BenchReport report =
          fga::bench_group_ops(*group, {10, 100, 1000, 10000});
      std::cout << report.to_string();
      return 0;
    }

    fga::ExperimentConfig cfg;
    cfg.dataset_path = dataset;
    if (!synthetic.empty()) {
      if (synthetic.size() != 2)
        throw CLI::ValidationError("--synthetic expects n,p");
      cfg.synthetic_n = static_cast<int>(synthetic[0]);
      cfg.synthetic_p = synthetic[1];
    }
    cfg.m = m;
    cfg.rho = rho;
    cfg.sigma = sigma;
    cfg.epsilons = epsilons;
    if (fractions.size() != 3)
      throw CLI::ValidationError("--budget-fractions expects f1,f2,f3");
    cfg.f1 = fractions[0];
    cfg.f2 = fractions[1];
    cfg.f3 = fractions[2];
    cfg.protocols.clear();
    if (protocols.empty()) protocols = {"baseline", "feat", "feat_plus"};
    for (const std::string& p : protocols)
      cfg.protocols.push_back(fga::parse_protocol(p));
    cfg.query = fga::QuerySpec::parse(query);
    if (dpsu_mode == "single-flip") {
      cfg.dpsu_mode = fga::DpsuMode::kSingleFlip;
    } else if (dpsu_mode == "literal-alg3") {
      cfg.dpsu_mode = fga::DpsuMode::kLiteralChain;
    } else {
      throw CLI::ValidationError("--dpsu-mode must be single-flip or literal-alg3");
    }
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.degree_cap = degree_cap;
    cfg.fixed_split = fixed_split;
    cfg.noiseless = noise_free;
    cfg.backend = backend;
    cfg.threads = threads;

    fga::MetricsReport report = fga::run_experiment(cfg);
    if (out_path.empty()) {
      fga::emit_csv(report, std::cout);
    } else {
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("cannot open output: " + out_path);
      fga::emit_csv(report, out);
    }
    return 0;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
