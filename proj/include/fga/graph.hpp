#pragma once

#include <bit>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "fga/rng.hpp"

namespace fga {

using Edge = std::pair<int, int>;  // always stored with first < second

// Undirected, unattributed graph over node ids [0, n). Adjacency is a bit
// matrix, so membership tests are O(1) and neighbor-set intersections run
// over packed 64-bit words.
class Graph {
 public:
  explicit Graph(int node_count);

  int node_count() const { return n_; }
  std::size_t edge_count() const { return edge_count_; }

  // Adds (i, j); returns false when the edge was already present.
  // Self-loops and out-of-range endpoints are rejected.
  bool add_edge(int i, int j);
  bool has_edge(int i, int j) const;
  int degree(int v) const { return degree_[v]; }

  std::span<const std::uint64_t> neighbor_words(int v) const {
    return {adj_.data() + static_cast<std::size_t>(v) * words_, words_};
  }
  std::size_t words_per_row() const { return words_; }

  template <typename F>
  void for_each_neighbor(int v, F&& f) const {
    auto row = neighbor_words(v);
    for (std::size_t w = 0; w < row.size(); ++w) {
      std::uint64_t bits = row[w];
      while (bits) {
        int b = std::countr_zero(bits);
        f(static_cast<int>(w * 64 + b));
        bits &= bits - 1;
      }
    }
  }

  // Sorted (i < j, lexicographic) edge list.
  std::vector<Edge> edges() const;

  bool operator==(const Graph& other) const = default;

 private:
  int n_;
  std::size_t words_;
  std::size_t edge_count_ = 0;
  std::vector<std::uint64_t> adj_;
  std::vector<int> degree_;
};

// Bijection between unordered pairs (i, j), i < j, over n nodes and the
// index range [0, n(n-1)/2). Pairs are ordered row-major: (0,1), (0,2),
// ..., (0,n-1), (1,2), ...
struct EdgeDomainIndex {
  explicit EdgeDomainIndex(int node_count);

  int n;
  std::uint64_t size;  // n(n-1)/2

  std::uint64_t index_of(int i, int j) const;
  Edge edge_at(std::uint64_t index) const;
};

// m client subgraphs over one shared node universe.
struct SubgraphCollection {
  int universe_n = 0;
  std::vector<Graph> parts;

  int client_count() const { return static_cast<int>(parts.size()); }
};

struct SplitConfig {
  int m = 4;             // client count
  double rho = 0.3;      // sampling rate, (0, 1]
  double sigma = 0.2;    // overlapping rate, [0, 1)
  std::uint64_t seed = 0;
};

struct LoadedEdgeList {
  Graph graph;
  // original_ids[v] is the id the node carried in the input file.
  std::vector<long long> original_ids;
};

// Parses SNAP-style edge lists: '#' comment lines, two whitespace-separated
// integer node ids per data line. Node ids are relabeled to a contiguous
// [0, n) range; direction and duplicates are dropped.
LoadedEdgeList load_edge_list(std::istream& in);

// Canonical form: one "i j" pair per line, i < j, sorted.
void serialize_edge_list(const Graph& g, std::ostream& out);

// Splits g into cfg.m subgraphs of floor(rho * |E|) edges each. A pool of
// floor(sigma * rho * |E| * m / 2) edges is assigned to two clients apiece;
// the rest are dealt round-robin. Throws when the quota cannot be met.
SubgraphCollection split_federated(const Graph& g, const SplitConfig& cfg);

Graph union_graphs(const SubgraphCollection& parts);
Graph union_graphs(const Graph& a, const Graph& b);

// Exact counting oracles (ground truth for the experiment harness).
std::uint64_t count_triangles_exact(const Graph& g);
double count_kstars_exact(const Graph& g, int k);

// G(n, p) generator used for desk-scale experiments and tests.
Graph erdos_renyi(int n, double p, RngStream& rng);

}  // namespace fga
