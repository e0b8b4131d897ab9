#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fga/dp.hpp"
#include "fga/graph.hpp"

namespace fga {

struct QuerySpec {
  enum class Kind { kKstar, kTriangle };
  Kind kind = Kind::kTriangle;
  int k = 2;  // only used for k-stars

  std::string to_string() const;
  static QuerySpec parse(const std::string& text);  // "triangle" | "kstar:K"
};

// Counts of node triples by how many of their three slots are edges.
struct TripletCensus {
  std::uint64_t t0 = 0;
  std::uint64_t t1 = 0;
  std::uint64_t t2 = 0;
  std::uint64_t t3 = 0;
};

// Census over all C(n,3) triples via the degree/wedge closed form; only the
// triangle count needs neighbor intersections.
TripletCensus triplet_census(const Graph& g);

// Unbiased degree estimate from a count over n_slots independently flipped
// slots: (d' - n_slots * p) / (1 - 2p). Rejects p = 1/2.
double calibrate_degree(double d_prime, double n_slots, const RrChannel& ch);

// Falling-factorial binomial d(d-1)...(d-k+1)/k! on real d, no clamping;
// negative values are meaningful noise.
double generalized_binomial(double d, int k);

// Estimators over a noisy global graph where every edge-domain slot went
// through one randomized-response application.
double feat_kstar(const Graph& gprime, int k, const RrChannel& ch);
double feat_triangles(const Graph& gprime, const RrChannel& ch);

// How many slots feed the degree calibration for a partitioned client:
// the actually-noisy slot count (default) or the literal node count.
enum class SlotCountPolicy { kNoisySlots, kNodeCount };

// Closed triangles of the merged graph with the triple's smallest node as
// apex, classified by how many of the three edges lie in the client's own
// subgraph. T3 is noise free.
struct LocalTriangleCensus {
  std::uint64_t T0 = 0;
  std::uint64_t T1 = 0;
  std::uint64_t T2 = 0;
  std::uint64_t T3 = 0;
};

// Joint histogram over apex triples (smallest node in the client's node
// set): count_by[a][b] = #triples with a own-subgraph edges and b further
// edges present only in the noisy graph. a + b = 3 means closed.
struct LocalTripleCensus {
  std::uint64_t count_by[4][4] = {};

  LocalTriangleCensus closed() const {
    return {count_by[0][3], count_by[1][2], count_by[2][1], count_by[3][0]};
  }
};

LocalTripleCensus local_triple_census(const Graph& gbar, const Graph& gi,
                                      std::span<const int> ui);

// Debiasing closed forms, one per class of triples. Each inverts the
// transition induced by independent per-slot flips on the noisy slots.
double debias_T0(double t0, double t1, double t2, double T0, const RrChannel& ch);
double debias_T1(double t0, double t1, double T1, const RrChannel& ch);
double debias_T2(double T2, double S, const RrChannel& ch);

// Partitioned estimators: one client's contribution over its node set.
double featplus_kstar(const Graph& gprime, const Graph& gi,
                      std::span<const int> ui, int k, const RrChannel& ch,
                      SlotCountPolicy policy = SlotCountPolicy::kNoisySlots);
double featplus_triangles(const Graph& gprime, const Graph& gi,
                          std::span<const int> ui, const RrChannel& ch);

double mse(std::span<const double> estimates, double truth);
double mre(std::span<const double> estimates, double truth);

}  // namespace fga
