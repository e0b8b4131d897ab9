#include "fga/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fga/elgamal.hpp"

namespace fga {

std::string protocol_name(Protocol p) {
  switch (p) {
    case Protocol::kBaseline: return "baseline";
    case Protocol::kFeat: return "feat";
    case Protocol::kFeatPlus: return "feat_plus";
  }
  throw std::logic_error("unreachable");
}

Protocol parse_protocol(const std::string& name) {
  if (name == "baseline") return Protocol::kBaseline;
  if (name == "feat") return Protocol::kFeat;
  if (name == "feat_plus") return Protocol::kFeatPlus;
  throw std::invalid_argument("unknown protocol: " + name);
}

namespace {

double exact_query(const Graph& g, const QuerySpec& query) {
  if (query.kind == QuerySpec::Kind::kTriangle)
    return static_cast<double>(count_triangles_exact(g));
  return count_kstars_exact(g, query.k);
}

Graph load_input_graph(const ExperimentConfig& cfg) {
  if (!cfg.dataset_path.empty()) {
    std::ifstream in(cfg.dataset_path);
    if (!in) throw std::runtime_error("cannot open dataset: " + cfg.dataset_path);
    return load_edge_list(in).graph;
  }
  RngStream rng(cfg.seed, 0x67656e);
  return erdos_renyi(cfg.synthetic_n, cfg.synthetic_p, rng);
}

struct TrialOutcome {
  double estimate = 0;
  double truth = 0;
  double seconds = 0;
};

}  // namespace

MetricsReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.epsilons.empty()) throw std::invalid_argument("epsilon sweep is empty");
  if (cfg.protocols.empty()) throw std::invalid_argument("protocol list is empty");

  const Graph global = load_input_graph(cfg);
  auto group = make_backend(cfg.backend);

  // Splits depend only on (seed, trial) so every protocol and epsilon sees
  // the same federated instance for a given trial.
  auto split_for_trial = [&](int trial) {
    SplitConfig sc{cfg.m, cfg.rho, cfg.sigma,
                   cfg.seed ^ (0x73706c69ULL + (cfg.fixed_split ? 0 : trial))};
    return split_federated(global, sc);
  };

  MetricsReport report;
  std::size_t grid_index = 0;
  for (Protocol protocol : cfg.protocols) {
    for (double epsilon : cfg.epsilons) {
      std::vector<TrialOutcome> outcomes(cfg.trials);
      std::atomic<int> next_trial{0};

      auto worker = [&]() {
        for (;;) {
          int trial = next_trial.fetch_add(1);
          if (trial >= cfg.trials) return;
          SubgraphCollection parts = split_for_trial(trial);
          Graph truth_graph = union_graphs(parts);
          TrialOutcome& out = outcomes[trial];
          out.truth = exact_query(truth_graph, cfg.query);

          RngStream rng(cfg.seed,
                        0x747269 + grid_index * 1000003ULL + trial * 7919ULL);
          ProtocolOptions opts{group.get(), cfg.dpsu_mode,
                               SlotCountPolicy::kNoisySlots, cfg.noiseless};
          auto start = std::chrono::steady_clock::now();
          switch (protocol) {
            case Protocol::kBaseline: {
              PrivacyLedger ledger(epsilon);
              Graph noisy = run_baseline(parts, epsilon, rng, &ledger,
                                         cfg.noiseless);
              out.estimate = exact_query(noisy, cfg.query);
              break;
            }
            case Protocol::kFeat: {
              PrivacyLedger ledger(epsilon);
              out.estimate =
                  run_feat(parts, epsilon, cfg.query, rng, opts, &ledger)
                      .estimate;
              break;
            }
            case Protocol::kFeatPlus: {
              PrivacyLedger ledger(epsilon);
              PrivacyBudget budget = split_budget(epsilon, cfg.f1, cfg.f2, cfg.f3);
              DeltaPolicy delta{cfg.degree_cap};
              out.estimate = run_feat_plus(parts, budget, delta, cfg.query,
                                           rng, opts, &ledger)
                                 .estimate;
              break;
            }
          }
          out.seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        }
      };

      int nthreads = cfg.threads > 0 ? cfg.threads
                                     : static_cast<int>(
                                           std::thread::hardware_concurrency());
      nthreads = std::max(1, std::min(nthreads, cfg.trials));
      if (nthreads == 1) {
        worker();
      } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
      }

      MetricsRow row;
      row.protocol = protocol_name(protocol);
      row.query = cfg.query.to_string();
      row.epsilon = epsilon;
      row.rho = cfg.rho;
      row.sigma = cfg.sigma;
      row.m = cfg.m;
      row.trials = cfg.trials;
      bool truth_has_zero = false;
      for (const TrialOutcome& o : outcomes) {
        row.truth += o.truth / cfg.trials;
        row.mean_estimate += o.estimate / cfg.trials;
        row.mse += (o.estimate - o.truth) * (o.estimate - o.truth) / cfg.trials;
        row.seconds += o.seconds;
        if (o.truth == 0.0) truth_has_zero = true;
      }
      if (truth_has_zero) {
        row.mre = std::numeric_limits<double>::quiet_NaN();
      } else {
        for (const TrialOutcome& o : outcomes)
          row.mre += std::abs(o.estimate - o.truth) / o.truth / cfg.trials;
      }
      report.rows.push_back(std::move(row));
      ++grid_index;
    }
  }
  return report;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void emit_csv(const MetricsReport& report, std::ostream& out) {
  out << "protocol,query,epsilon,rho,sigma,m,trials,truth,mean_estimate,mse,"
         "mre,seconds\n";
  for (const MetricsRow& r : report.rows) {
    out << r.protocol << ',' << r.query << ',' << fmt(r.epsilon) << ','
        << fmt(r.rho) << ',' << fmt(r.sigma) << ',' << r.m << ',' << r.trials
        << ',' << fmt(r.truth) << ',' << fmt(r.mean_estimate) << ','
        << fmt(r.mse) << ',' << fmt(r.mre) << ',' << fmt(r.seconds) << '\n';
  }
}

MetricsReport parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv");
  MetricsReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 12)
      throw std::runtime_error("csv row with wrong arity: " + line);
    MetricsRow r;
    r.protocol = fields[0];
    r.query = fields[1];
    r.epsilon = std::stod(fields[2]);
    r.rho = std::stod(fields[3]);
    r.sigma = std::stod(fields[4]);
    r.m = std::stoi(fields[5]);
    r.trials = std::stoi(fields[6]);
    r.truth = std::stod(fields[7]);
    r.mean_estimate = std::stod(fields[8]);
    r.mse = std::stod(fields[9]);
    r.mre = std::stod(fields[10]);
    r.seconds = std::stod(fields[11]);
    report.rows.push_back(std::move(r));
  }
  return report;
}

std::string BenchReport::to_string() const {
  std::ostringstream out;
  out << "group op benchmark (" << backend << ")\n";
  out << "op          batch      seconds     ops/sec\n";
  for (const BenchRow& r : rows) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-11s %-10d %-11.6f %.0f\n", r.op.c_str(),
                  r.batch, r.seconds, r.ops_per_sec);
    out << buf;
  }
  return out.str();
}

BenchReport bench_group_ops(const GroupBackend& group,
                            const std::vector<int>& batch_sizes) {
  BenchReport report;
  report.backend = std::string(group.name());
  RngStream rng(0xbe9c, 0);
  Keygen keys = keygen(group, 3, rng);

  auto timed = [&](const std::string& op, int batch, auto&& body) {
    auto start = std::chrono::steady_clock::now();
    body();
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    report.rows.push_back(
        {op, batch, secs, secs > 0 ? batch / secs : 0.0});
  };

  for (int batch : batch_sizes) {
    timed("exp", batch, [&] {
      GroupElement acc = group.generator();
      for (int i = 0; i < batch; ++i)
        acc = group.exp(acc, keys.shares[0].sk);
    });
    std::vector<BitCiphertext> cts;
    cts.reserve(batch);
    timed("encrypt", batch, [&] {
      for (int i = 0; i < batch; ++i)
        cts.push_back(encrypt_bit(group, i & 1, keys.joint, rng));
    });
    timed("decrypt", batch, [&] {
      std::vector<GroupElement> partials(keys.shares.size());
      for (int i = 0; i < batch; ++i) {
        for (std::size_t s = 0; s < keys.shares.size(); ++s)
          partials[s] = partial_decrypt(group, cts[i], keys.shares[s]);
        combine(group, cts[i], partials, static_cast<int>(keys.shares.size()));
      }
    });
  }
  return report;
}

}  // namespace fga
