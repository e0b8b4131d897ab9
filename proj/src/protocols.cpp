#include "fga/protocols.hpp"

#include <cmath>
#include <stdexcept>

namespace fga {

bool is_valid_partition(const PartitionAssignment& u, int node_count) {
  std::vector<int> seen(node_count, 0);
  for (const auto& members : u.members) {
    for (int v : members) {
      if (v < 0 || v >= node_count) return false;
      if (seen[v]++) return false;
    }
  }
  for (int c : seen)
    if (c != 1) return false;
  return true;
}

double query_sensitivity(const DeltaPolicy& policy, const QuerySpec& query,
                         const SubgraphCollection& parts) {
  double cap = policy.degree_cap;
  if (cap <= 0.0) {
    Graph u = union_graphs(parts);
    int max_deg = 0;
    for (int v = 0; v < u.node_count(); ++v)
      max_deg = std::max(max_deg, u.degree(v));
    cap = static_cast<double>(max_deg);
  }
  if (query.kind == QuerySpec::Kind::kTriangle) return std::max(cap, 1.0);
  return std::max(generalized_binomial(cap, query.k - 1), 1.0);
}

Graph run_baseline(const SubgraphCollection& parts, double epsilon,
                   RngStream& rng, PrivacyLedger* ledger, bool noiseless) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const int m = parts.client_count();
  const EdgeDomainIndex domain(parts.universe_n);
  const double eps_local = epsilon / m;
  RrChannel ch =
      noiseless ? RrChannel::noiseless() : RrChannel::with_epsilon(eps_local);

  Graph merged(parts.universe_n);
  for (int i = 0; i < m; ++i) {
    RngStream ci = rng.substream(0x200 + i);
    const Graph& gi = parts.parts[i];
    for (std::uint64_t slot = 0; slot < domain.size; ++slot) {
      auto [a, b] = domain.edge_at(slot);
      int bit = gi.has_edge(a, b) ? 1 : 0;
      if (rr_apply(bit, ch, ci) == 1) merged.add_edge(a, b);
    }
    if (ledger && !noiseless)
      ledger->record("baseline-client-" + std::to_string(i),
                     "randomized-response", eps_local);
  }
  return merged;
}

namespace {

double run_query(const Graph& gprime, const QuerySpec& query,
                 const RrChannel& ch) {
  if (query.kind == QuerySpec::Kind::kTriangle)
    return feat_triangles(gprime, ch);
  return feat_kstar(gprime, query.k, ch);
}

}  // namespace

QueryResult run_feat(const SubgraphCollection& parts, double epsilon,
                     const QuerySpec& query, RngStream& rng,
                     const ProtocolOptions& opts, PrivacyLedger* ledger) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!opts.group) throw std::invalid_argument("feat needs a group backend");
  RrChannel ch = opts.noiseless ? RrChannel::noiseless()
                                : RrChannel::with_epsilon(epsilon);
  DpsuOptions dpsu{ch, opts.dpsu_mode, opts.group, ledger, nullptr};
  RngStream collect = rng.substream(0x636f6c);
  Graph gprime = dpsu_collect_graph(parts, dpsu, collect);
  double estimate = run_query(gprime, query, ch);
  return {estimate, query, ledger ? ledger->total() : epsilon};
}

PartitionAssignment partition_nodes(const SubgraphCollection& parts,
                                    double eps2, RngStream& rng,
                                    PrivacyLedger* ledger, bool noiseless) {
  if (!noiseless && !(eps2 > 0.0))
    throw std::invalid_argument("partition budget must be positive");
  const int m = parts.client_count();
  const int n = parts.universe_n;

  PartitionAssignment out;
  out.members.assign(m, {});

  // Every client perturbs all n local degrees; draws come from one stream
  // per client so clients stay independent.
  std::vector<std::vector<double>> noisy(m, std::vector<double>(n));
  for (int j = 0; j < m; ++j) {
    RngStream cj = rng.substream(0x300 + j);
    LaplaceChannel lap = noiseless
                             ? LaplaceChannel{1.0, 1.0, 0.0}
                             : LaplaceChannel::with(static_cast<double>(m), eps2);
    for (int v = 0; v < n; ++v) {
      double noise = noiseless ? 0.0 : laplace_sample(lap, cj);
      noisy[j][v] = static_cast<double>(parts.parts[j].degree(v)) + noise;
    }
  }
  for (int v = 0; v < n; ++v) {
    int best = 0;
    for (int j = 1; j < m; ++j)
      if (noisy[j][v] > noisy[best][v]) best = j;
    out.members[best].push_back(v);
  }
  if (ledger && !noiseless)
    ledger->record("partition", "laplace-degree", eps2);
  return out;
}

QueryResult run_feat_plus(const SubgraphCollection& parts,
                          const PrivacyBudget& budget,
                          const DeltaPolicy& delta, const QuerySpec& query,
                          RngStream& rng, const ProtocolOptions& opts,
                          PrivacyLedger* ledger) {
  if (!opts.group) throw std::invalid_argument("feat_plus needs a group backend");
  if (std::abs(budget.eps1 + budget.eps2 + budget.eps3 - budget.epsilon_total) >
      1e-9 * std::max(1.0, budget.epsilon_total))
    throw std::invalid_argument("budget parts do not sum to the total");

  RrChannel ch1 = opts.noiseless ? RrChannel::noiseless()
                                 : RrChannel::with_epsilon(budget.eps1);

  // Phase I: global graph collection.
  DpsuOptions dpsu{ch1, opts.dpsu_mode, opts.group, ledger, nullptr};
  RngStream collect = rng.substream(0x636f6c);
  Graph gprime = dpsu_collect_graph(parts, dpsu, collect);

  // Phase II: partition, local queries, perturbation, aggregation.
  RngStream part_rng = rng.substream(0x706172);
  PartitionAssignment u =
      partition_nodes(parts, budget.eps2, part_rng, ledger, opts.noiseless);

  const int m = parts.client_count();
  double sensitivity = query_sensitivity(delta, query, parts);
  LaplaceChannel lap = opts.noiseless
                           ? LaplaceChannel{1.0, 1.0, 0.0}
                           : LaplaceChannel::with(sensitivity, budget.eps3);
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    RngStream ci = rng.substream(0x400 + i);
    double qi;
    if (query.kind == QuerySpec::Kind::kTriangle) {
      qi = featplus_triangles(gprime, parts.parts[i], u.members[i], ch1);
    } else {
      qi = featplus_kstar(gprime, parts.parts[i], u.members[i], query.k, ch1,
                          opts.slot_policy);
    }
    if (!opts.noiseless) qi += laplace_sample(lap, ci);
    total += qi;
  }
  if (ledger && !opts.noiseless)
    ledger->record("perturbation", "laplace-query", budget.eps3);
  return {total, query, ledger ? ledger->total() : budget.epsilon_total};
}

}  // namespace fga
