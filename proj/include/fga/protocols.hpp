#pragma once

#include <vector>

#include "fga/dp.hpp"
#include "fga/dpsu.hpp"
#include "fga/graph.hpp"
#include "fga/group.hpp"
#include "fga/queries.hpp"

namespace fga {

// Disjoint node sets U_1..U_m covering the universe.
struct PartitionAssignment {
  std::vector<std::vector<int>> members;
};

bool is_valid_partition(const PartitionAssignment& u, int node_count);

// Query sensitivity from a public degree cap D: one edge joins at most D
// triangles and at most C(D, k-1) k-stars per endpoint. cap = 0 means "use
// the true maximum degree of the union", a non-private default meant for
// experiments only.
struct DeltaPolicy {
  double degree_cap = 0.0;
};

double query_sensitivity(const DeltaPolicy& policy, const QuerySpec& query,
                         const SubgraphCollection& parts);

struct ProtocolOptions {
  const GroupBackend* group = nullptr;  // required by feat / feat_plus
  DpsuMode dpsu_mode = DpsuMode::kSingleFlip;
  SlotCountPolicy slot_policy = SlotCountPolicy::kNoisySlots;
  bool noiseless = false;  // test mode: all randomness disabled
};

struct QueryResult {
  double estimate = 0.0;
  QuerySpec query;
  double epsilon_charged = 0.0;
};

// Every client randomizes its full upper-triangular adjacency with
// epsilon / m; the server returns the union of the noisy subgraphs.
Graph run_baseline(const SubgraphCollection& parts, double epsilon,
                   RngStream& rng, PrivacyLedger* ledger = nullptr,
                   bool noiseless = false);

// Set-union collection with the whole budget, then a calibrated query on
// the collected graph.
QueryResult run_feat(const SubgraphCollection& parts, double epsilon,
                     const QuerySpec& query, RngStream& rng,
                     const ProtocolOptions& opts,
                     PrivacyLedger* ledger = nullptr);

// Degree-based node partition: every client reports each node's local
// degree plus Lap(m / eps2); the node goes to the client with the largest
// noisy degree, lowest index winning ties.
PartitionAssignment partition_nodes(const SubgraphCollection& parts,
                                    double eps2, RngStream& rng,
                                    PrivacyLedger* ledger = nullptr,
                                    bool noiseless = false);

// Phase I: collection with eps1. Phase II: partition with eps2, local
// queries against the published graph, Laplace perturbation with eps3,
// server-side sum.
QueryResult run_feat_plus(const SubgraphCollection& parts,
                          const PrivacyBudget& budget,
                          const DeltaPolicy& delta, const QuerySpec& query,
                          RngStream& rng, const ProtocolOptions& opts,
                          PrivacyLedger* ledger = nullptr);

}  // namespace fga
