#include "fga/queries.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace fga {

namespace {

// e^{2 eps} - 2 e^{eps} - 1 = 0 there; the documented forbidden value for
// the 1-edge debias contract.
constexpr double kT1SingularEpsilon = 0.8813735870195430;  // ln(1 + sqrt 2)

void require_calibratable(const RrChannel& ch) {
  if (ch.flip_prob >= 0.5)
    throw std::invalid_argument(
        "calibration is singular at flip probability 1/2 (epsilon = 0)");
}

}  // namespace

std::string QuerySpec::to_string() const {
  if (kind == Kind::kTriangle) return "triangle";
  return "kstar:" + std::to_string(k);
}

QuerySpec QuerySpec::parse(const std::string& text) {
  if (text == "triangle") return {Kind::kTriangle, 0};
  if (text.rfind("kstar:", 0) == 0) {
    int k = std::stoi(text.substr(6));
    if (k < 2) throw std::invalid_argument("k-star query needs k >= 2");
    return {Kind::kKstar, k};
  }
  throw std::invalid_argument("unknown query spec: " + text);
}

TripletCensus triplet_census(const Graph& g) {
  const std::uint64_t n = g.node_count();
  const std::uint64_t m = g.edge_count();
  std::uint64_t t3 = count_triangles_exact(g);
  std::uint64_t wedges = 0;  // paths of length two, open or closed
  for (int v = 0; v < g.node_count(); ++v) {
    std::uint64_t d = g.degree(v);
    wedges += d * (d - 1) / 2;
  }
  TripletCensus c;
  c.t3 = t3;
  c.t2 = wedges - 3 * t3;
  c.t1 = m * (n - 2) - 2 * c.t2 - 3 * c.t3;
  c.t0 = n * (n - 1) * (n - 2) / 6 - c.t1 - c.t2 - c.t3;
  return c;
}

double calibrate_degree(double d_prime, double n_slots, const RrChannel& ch) {
  require_calibratable(ch);
  double p = ch.flip_prob;
  return (d_prime - n_slots * p) / (1.0 - 2.0 * p);
}

double generalized_binomial(double d, int k) {
  if (k < 0) throw std::invalid_argument("binomial needs k >= 0");
  double acc = 1.0;
  for (int i = 0; i < k; ++i) acc *= (d - i) / (i + 1);
  return acc;
}

double feat_kstar(const Graph& gprime, int k, const RrChannel& ch) {
  if (k < 2) throw std::invalid_argument("k-star estimator needs k >= 2");
  require_calibratable(ch);
  const int n = gprime.node_count();
  double total = 0.0;
  for (int v = 0; v < n; ++v) {
    double d = calibrate_degree(gprime.degree(v), n, ch);
    total += generalized_binomial(d, k);
  }
  return total;
}

double feat_triangles(const Graph& gprime, const RrChannel& ch) {
  TripletCensus c = triplet_census(gprime);
  if (ch.is_noiseless()) return static_cast<double>(c.t3);
  return debias_T0(static_cast<double>(c.t0), static_cast<double>(c.t1),
                   static_cast<double>(c.t2), static_cast<double>(c.t3), ch);
}

double debias_T0(double t0, double t1, double t2, double T0,
                 const RrChannel& ch) {
  if (ch.is_noiseless()) return T0;
  require_calibratable(ch);
  long double x = std::exp(static_cast<long double>(ch.epsilon));
  long double d = (x - 1) * (x - 1) * (x - 1);
  return static_cast<double>((-static_cast<long double>(t0) + x * t1 -
                              x * x * t2 + x * x * x * T0) /
                             d);
}

double debias_T1(double t0, double t1, double T1, const RrChannel& ch) {
  if (ch.is_noiseless()) return T1;
  require_calibratable(ch);
  if (std::abs(ch.epsilon - kT1SingularEpsilon) < 1e-12) {
    throw std::invalid_argument(
        "1-edge debias is singular at epsilon = ln(1 + sqrt 2) ~ 0.881374");
  }
  long double x = std::exp(static_cast<long double>(ch.epsilon));
  long double d = (x - 1) * (x - 1);
  return static_cast<double>(
      (static_cast<long double>(t0) - x * t1 + x * x * T1) / d);
}

double debias_T2(double T2, double S, const RrChannel& ch) {
  require_calibratable(ch);
  double p = ch.flip_prob;
  return (T2 - S * p) / (1.0 - 2.0 * p);
}

LocalTripleCensus local_triple_census(const Graph& gbar, const Graph& gi,
                                      std::span<const int> ui) {
  if (gbar.node_count() != gi.node_count())
    throw std::invalid_argument("census over mismatched node universes");
  const int n = gbar.node_count();
  const std::size_t words = gbar.words_per_row();

  // Per-node slot classes: own edge (in gi), noisy-only edge (in gbar but
  // not gi), absent. gi must be a subgraph of gbar for the classes to
  // partition; gbar is built as a union so that always holds.
  std::vector<std::uint64_t> own(static_cast<std::size_t>(n) * words);
  std::vector<std::uint64_t> noisy(own.size());
  std::vector<std::uint64_t> absent(own.size());
  std::vector<std::uint64_t> valid(words, 0);
  for (int v = 0; v < n; ++v) valid[v / 64] |= 1ULL << (v % 64);
  for (int v = 0; v < n; ++v) {
    auto bar = gbar.neighbor_words(v);
    auto mine = gi.neighbor_words(v);
    std::uint64_t self = 0;
    for (std::size_t w = 0; w < words; ++w) {
      self = (static_cast<std::size_t>(v / 64) == w) ? (1ULL << (v % 64)) : 0;
      std::size_t base = static_cast<std::size_t>(v) * words + w;
      own[base] = mine[w];
      noisy[base] = bar[w] & ~mine[w];
      absent[base] = ~bar[w] & valid[w] & ~self;
    }
  }

  auto row = [&](const std::vector<std::uint64_t>& layer, int v) {
    return layer.data() + static_cast<std::size_t>(v) * words;
  };

  LocalTripleCensus census;
  for (int j : ui) {
    const std::uint64_t* rows_j[3] = {row(own, j), row(noisy, j), row(absent, j)};
    for (int k = j + 1; k < n; ++k) {
      int c1;
      if (gi.has_edge(j, k)) c1 = 0;
      else if (gbar.has_edge(j, k)) c1 = 1;
      else c1 = 2;
      const std::uint64_t* rows_k[3] = {row(own, k), row(noisy, k),
                                        row(absent, k)};
      std::size_t w0 = static_cast<std::size_t>(k + 1) / 64;
      std::uint64_t head_mask =
          ((k + 1) % 64 == 0) ? ~0ULL : (~0ULL << ((k + 1) % 64));
      for (int x = 0; x < 3; ++x) {
        for (int y = 0; y < 3; ++y) {
          std::uint64_t cnt = 0;
          for (std::size_t w = w0; w < words; ++w) {
            std::uint64_t bits = rows_j[x][w] & rows_k[y][w];
            if (w == w0) bits &= head_mask;
            cnt += std::popcount(bits);
          }
          if (!cnt) continue;
          int a = (c1 == 0) + (x == 0) + (y == 0);
          int b = (c1 == 1) + (x == 1) + (y == 1);
          census.count_by[a][b] += cnt;
        }
      }
    }
  }
  return census;
}

double featplus_kstar(const Graph& gprime, const Graph& gi,
                      std::span<const int> ui, int k, const RrChannel& ch,
                      SlotCountPolicy policy) {
  if (k < 2) throw std::invalid_argument("k-star estimator needs k >= 2");
  require_calibratable(ch);
  Graph gbar = union_graphs(gprime, gi);
  const int n = gbar.node_count();
  double total = 0.0;
  for (int v : ui) {
    double d1 = gi.degree(v);
    double d2 = gbar.degree(v) - d1;
    double slots = policy == SlotCountPolicy::kNoisySlots
                       ? static_cast<double>(n) - 1.0 - d1
                       : static_cast<double>(n);
    double d = d1 + calibrate_degree(d2, slots, ch);
    total += generalized_binomial(d, k);
  }
  return total;
}

double featplus_triangles(const Graph& gprime, const Graph& gi,
                          std::span<const int> ui, const RrChannel& ch) {
  Graph gbar = union_graphs(gprime, gi);
  LocalTripleCensus c = local_triple_census(gbar, gi, ui);
  LocalTriangleCensus closed = c.closed();
  double est_T0 = debias_T0(static_cast<double>(c.count_by[0][0]),
                            static_cast<double>(c.count_by[0][1]),
                            static_cast<double>(c.count_by[0][2]),
                            static_cast<double>(closed.T0), ch);
  double est_T1 = debias_T1(static_cast<double>(c.count_by[1][0]),
                            static_cast<double>(c.count_by[1][1]),
                            static_cast<double>(closed.T1), ch);
  double wedges_in_gi =
      static_cast<double>(c.count_by[2][0] + c.count_by[2][1]);
  double est_T2 = debias_T2(static_cast<double>(closed.T2), wedges_in_gi, ch);
  return est_T0 + est_T1 + est_T2 + static_cast<double>(closed.T3);
}

double mse(std::span<const double> estimates, double truth) {
  if (estimates.empty()) throw std::invalid_argument("mse over empty sample");
  double acc = 0.0;
  for (double e : estimates) acc += (e - truth) * (e - truth);
  return acc / static_cast<double>(estimates.size());
}

double mre(std::span<const double> estimates, double truth) {
  if (estimates.empty()) throw std::invalid_argument("mre over empty sample");
  if (truth == 0.0)
    throw std::invalid_argument("mre is undefined for zero ground truth");
  double acc = 0.0;
  for (double e : estimates) acc += std::abs(e - truth) / std::abs(truth);
  return acc / static_cast<double>(estimates.size());
}

}  // namespace fga
