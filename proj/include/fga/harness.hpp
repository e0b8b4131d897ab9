#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fga/graph.hpp"
#include "fga/protocols.hpp"

namespace fga {

enum class Protocol { kBaseline, kFeat, kFeatPlus };

std::string protocol_name(Protocol p);
Protocol parse_protocol(const std::string& name);

struct ExperimentConfig {
  // Input graph: a dataset path, or an Erdos-Renyi instance when empty.
  std::string dataset_path;
  int synthetic_n = 100;
  double synthetic_p = 0.1;

  int m = 4;
  double rho = 0.3;
  double sigma = 0.2;
  std::vector<double> epsilons = {3.0};
  double f1 = 0.45, f2 = 0.10, f3 = 0.45;  // feat_plus budget fractions
  std::vector<Protocol> protocols = {Protocol::kBaseline, Protocol::kFeat,
                                     Protocol::kFeatPlus};
  QuerySpec query;
  DpsuMode dpsu_mode = DpsuMode::kSingleFlip;
  double degree_cap = 0.0;  // 0: true max union degree (non-private default)
  int trials = 10;
  std::uint64_t seed = 1;
  bool fixed_split = false;  // reuse the trial-0 split for every trial
  bool noiseless = false;    // test mode
  std::string backend = "reference";
  int threads = 1;
};

struct MetricsRow {
  std::string protocol;
  std::string query;
  double epsilon = 0;
  double rho = 0;
  double sigma = 0;
  int m = 0;
  int trials = 0;
  double truth = 0;          // mean ground truth across trials
  double mean_estimate = 0;
  double mse = 0;
  double mre = 0;            // nan when some trial's ground truth is zero
  double seconds = 0;        // protocol execution only, summed over trials
};

struct MetricsReport {
  std::vector<MetricsRow> rows;
};

// One row per (protocol, epsilon) grid point. Splits are re-drawn per trial
// from the seed (unless fixed_split), ground truth is the exact count on
// the union, and every protocol at a given trial sees the same split.
MetricsReport run_experiment(const ExperimentConfig& cfg);

// Columns: protocol,query,epsilon,rho,sigma,m,trials,truth,mean_estimate,
// mse,mre,seconds.
void emit_csv(const MetricsReport& report, std::ostream& out);
MetricsReport parse_csv(std::istream& in);

struct BenchRow {
  std::string op;
  int batch = 0;
  double seconds = 0;
  double ops_per_sec = 0;
};

struct BenchReport {
  std::string backend;
  std::vector<BenchRow> rows;

  std::string to_string() const;
};

// Micro-benchmark of exponentiation, bit encryption, and full threshold
// decryption at the given batch sizes.
BenchReport bench_group_ops(const GroupBackend& group,
                            const std::vector<int>& batch_sizes);

}  // namespace fga
