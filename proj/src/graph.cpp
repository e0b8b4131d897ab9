#include "fga/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fga {

Graph::Graph(int node_count) : n_(node_count), words_((node_count + 63) / 64) {
  if (node_count <= 0) throw std::invalid_argument("graph needs at least one node");
  adj_.assign(static_cast<std::size_t>(n_) * words_, 0);
  degree_.assign(n_, 0);
}

bool Graph::add_edge(int i, int j) {
  if (i == j) throw std::invalid_argument("self-loops are not allowed");
  if (i < 0 || j < 0 || i >= n_ || j >= n_)
    throw std::out_of_range("edge endpoint outside node range");
  std::size_t wi = static_cast<std::size_t>(i) * words_ + j / 64;
  std::uint64_t mask = 1ULL << (j % 64);
  if (adj_[wi] & mask) return false;
  adj_[wi] |= mask;
  adj_[static_cast<std::size_t>(j) * words_ + i / 64] |= 1ULL << (i % 64);
  ++degree_[i];
  ++degree_[j];
  ++edge_count_;
  return true;
}

bool Graph::has_edge(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_) return false;
  return (adj_[static_cast<std::size_t>(i) * words_ + j / 64] >> (j % 64)) & 1;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (int i = 0; i < n_; ++i) {
    for_each_neighbor(i, [&](int j) {
      if (j > i) out.emplace_back(i, j);
    });
  }
  return out;
}

EdgeDomainIndex::EdgeDomainIndex(int node_count) : n(node_count) {
  if (node_count < 2) throw std::invalid_argument("edge domain needs n >= 2");
  size = static_cast<std::uint64_t>(n) * (n - 1) / 2;
}

std::uint64_t EdgeDomainIndex::index_of(int i, int j) const {
  if (i == j) throw std::invalid_argument("edge domain excludes self-loops");
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw std::out_of_range("edge domain endpoint outside node range");
  if (i > j) std::swap(i, j);
  std::uint64_t row_offset =
      static_cast<std::uint64_t>(i) * (2 * n - i - 1) / 2;
  return row_offset + static_cast<std::uint64_t>(j - i - 1);
}

Edge EdgeDomainIndex::edge_at(std::uint64_t index) const {
  if (index >= size) throw std::out_of_range("edge domain index out of range");
  // Row offsets are triangular numbers; locate the row by a sqrt estimate
  // and fix up by at most one step.
  auto row_offset = [&](std::uint64_t i) {
    return i * (2 * static_cast<std::uint64_t>(n) - i - 1) / 2;
  };
  double nn = static_cast<double>(n);
  double est = nn - 0.5 -
               std::sqrt((nn - 0.5) * (nn - 0.5) - 2.0 * static_cast<double>(index));
  std::uint64_t i = est <= 0 ? 0 : static_cast<std::uint64_t>(est);
  if (i >= static_cast<std::uint64_t>(n - 1)) i = n - 2;
  while (i > 0 && row_offset(i) > index) --i;
  while (row_offset(i + 1) <= index) ++i;
  std::uint64_t j = i + 1 + (index - row_offset(i));
  return {static_cast<int>(i), static_cast<int>(j)};
}

LoadedEdgeList load_edge_list(std::istream& in) {
  std::vector<std::pair<long long, long long>> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    std::istringstream ls(line);
    long long a, b;
    if (!(ls >> a >> b)) {
      throw std::runtime_error("edge list parse error at line " +
                               std::to_string(lineno) + ": " + line);
    }
    std::string extra;
    if (ls >> extra) {
      throw std::runtime_error("edge list parse error at line " +
                               std::to_string(lineno) +
                               ": expected exactly two node ids");
    }
    raw.emplace_back(a, b);
  }
  if (raw.empty()) throw std::runtime_error("edge list is empty");

  std::map<long long, int> relabel;
  for (const auto& [a, b] : raw) {
    relabel.emplace(a, 0);
    relabel.emplace(b, 0);
  }
  std::vector<long long> original;
  original.reserve(relabel.size());
  int next = 0;
  for (auto& [id, compact] : relabel) {
    compact = next++;
    original.push_back(id);
  }

  Graph g(next);
  for (const auto& [a, b] : raw) {
    if (a == b) continue;  // drop self-loops
    g.add_edge(relabel[a], relabel[b]);
  }
  return {std::move(g), std::move(original)};
}

void serialize_edge_list(const Graph& g, std::ostream& out) {
  for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

namespace {

void fisher_yates(std::vector<Edge>& v, RngStream& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = rng.next_below(i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

SubgraphCollection split_federated(const Graph& g, const SplitConfig& cfg) {
  if (cfg.m < 1) throw std::invalid_argument("client count must be >= 1");
  if (cfg.rho <= 0.0 || cfg.rho > 1.0)
    throw std::invalid_argument("sampling rate must be in (0, 1]");
  if (cfg.sigma < 0.0 || cfg.sigma >= 1.0)
    throw std::invalid_argument("overlapping rate must be in [0, 1)");

  std::vector<Edge> all = g.edges();
  const std::size_t quota =
      static_cast<std::size_t>(cfg.rho * static_cast<double>(all.size()));
  if (quota < 1)
    throw std::invalid_argument("infeasible split: rho * |E| < 1");

  RngStream rng(cfg.seed, /*stream=*/0x51735ULL);
  fisher_yates(all, rng);

  std::size_t pool_size = static_cast<std::size_t>(
      cfg.sigma * cfg.rho * static_cast<double>(all.size()) * cfg.m / 2.0);
  pool_size = std::min(pool_size, all.size());

  SubgraphCollection out;
  out.universe_n = g.node_count();
  out.parts.assign(cfg.m, Graph(g.node_count()));
  std::vector<std::size_t> count(cfg.m, 0);

  // Overlap pool: each edge goes to two distinct clients that still have
  // room, so it is guaranteed to sit in >= 2 subgraphs.
  std::vector<Edge> rest;
  rest.reserve(all.size());
  for (std::size_t e = 0; e < pool_size; ++e) {
    std::vector<int> eligible;
    for (int c = 0; c < cfg.m; ++c)
      if (count[c] < quota) eligible.push_back(c);
    if (eligible.size() < 2) {
      rest.push_back(all[e]);
      continue;
    }
    std::size_t a = rng.next_below(eligible.size());
    std::size_t b = rng.next_below(eligible.size() - 1);
    if (b >= a) ++b;
    for (int c : {eligible[a], eligible[b]}) {
      out.parts[c].add_edge(all[e].first, all[e].second);
      ++count[c];
    }
  }
  rest.insert(rest.end(), all.begin() + pool_size, all.end());

  // Round-robin deal from the remaining edges. The cursor wraps, so when
  // m * quota exceeds the supply an edge may serve several clients.
  if (!rest.empty()) {
    std::size_t cursor = 0;
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (int c = 0; c < cfg.m; ++c) {
        if (count[c] >= quota) continue;
        std::size_t scanned = 0;
        while (scanned < rest.size()) {
          const Edge& e = rest[cursor];
          cursor = (cursor + 1) % rest.size();
          ++scanned;
          if (out.parts[c].add_edge(e.first, e.second)) {
            ++count[c];
            progressed = true;
            break;
          }
        }
      }
    }
  }
  for (int c = 0; c < cfg.m; ++c) {
    if (count[c] < quota)
      throw std::runtime_error("infeasible split: not enough distinct edges");
  }
  return out;
}

Graph union_graphs(const SubgraphCollection& parts) {
  if (parts.parts.empty()) throw std::invalid_argument("empty collection");
  Graph out(parts.universe_n);
  for (const Graph& part : parts.parts) {
    for (const auto& [i, j] : part.edges()) out.add_edge(i, j);
  }
  return out;
}

Graph union_graphs(const Graph& a, const Graph& b) {
  if (a.node_count() != b.node_count())
    throw std::invalid_argument("union over mismatched node universes");
  Graph out = a;
  for (const auto& [i, j] : b.edges()) out.add_edge(i, j);
  return out;
}

std::uint64_t count_triangles_exact(const Graph& g) {
  // Each triangle a < b < c is counted once, at its edge (a, b), by
  // intersecting the two neighbor rows above b.
  std::uint64_t total = 0;
  const std::size_t words = g.words_per_row();
  for (const auto& [i, j] : g.edges()) {
    auto ri = g.neighbor_words(i);
    auto rj = g.neighbor_words(j);
    std::size_t w0 = (j + 1) / 64;
    for (std::size_t w = w0; w < words; ++w) {
      std::uint64_t bits = ri[w] & rj[w];
      if (w == w0 && (j + 1) % 64 != 0)
        bits &= ~0ULL << ((j + 1) % 64);
      total += std::popcount(bits);
    }
  }
  return total;
}

double count_kstars_exact(const Graph& g, int k) {
  if (k < 1) throw std::invalid_argument("k-star needs k >= 1");
  double total = 0;
  for (int v = 0; v < g.node_count(); ++v) {
    double d = g.degree(v);
    if (d < k) continue;
    double term = 1;
    for (int i = 0; i < k; ++i) term *= (d - i) / (i + 1);
    total += term;
  }
  return total;
}

Graph erdos_renyi(int n, double p, RngStream& rng) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("edge probability");
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.next_bernoulli(p)) g.add_edge(i, j);
  return g;
}

}  // namespace fga
