#include <doctest.h>

#include <cmath>

#include "fga/protocols.hpp"
#include "test_support.hpp"

using namespace fga;

namespace {

SubgraphCollection random_parts(RngStream& rng, int n, int m, double p) {
  SubgraphCollection parts;
  parts.universe_n = n;
  for (int i = 0; i < m; ++i) parts.parts.push_back(erdos_renyi(n, p, rng));
  return parts;
}

}  // namespace

TEST_SUITE("protocols") {

TEST_CASE("baseline with randomness disabled returns the true union") {
  RngStream gen(1, 0);
  SubgraphCollection parts = random_parts(gen, 12, 3, 0.25);
  RngStream rng(2, 0);
  Graph out = run_baseline(parts, 2.0, rng, nullptr, /*noiseless=*/true);
  CHECK(out == union_graphs(parts));
}

TEST_CASE("baseline ledger charges epsilon over m per client") {
  RngStream gen(3, 0);
  SubgraphCollection parts = random_parts(gen, 10, 4, 0.2);
  PrivacyLedger ledger(2.0);
  RngStream rng(4, 0);
  run_baseline(parts, 2.0, rng, &ledger);
  auto entries = ledger.entries();
  REQUIRE(entries.size() == 4);
  for (const auto& e : entries) CHECK(e.epsilon == 0.5);
  CHECK(ledger.total() == 2.0);
}

TEST_CASE("baseline per-slot density matches the closed form") {
  // a slot owned by exactly one of m clients comes out present with
  // probability 1 - (1 - q1) * (1 - q0)^(m-1), q1 = 1 - p, q0 = p
  const int m = 3;
  const double eps = 1.8;
  SubgraphCollection parts;
  parts.universe_n = 10;
  parts.parts.assign(m, Graph(10));
  parts.parts[1].add_edge(2, 3);  // single owner
  const double p_local = 1.0 / (1.0 + std::exp(eps / m));

  const int runs = 20000;
  int on_owned = 0, on_empty = 0;
  for (int r = 0; r < runs; ++r) {
    RngStream rng(1000 + r, 0);
    Graph out = run_baseline(parts, eps, rng);
    if (out.has_edge(2, 3)) ++on_owned;
    if (out.has_edge(5, 6)) ++on_empty;
  }
  double q1 = 1 - p_local, q0 = p_local;
  double expect_owned = 1 - (1 - q1) * std::pow(1 - q0, m - 1);
  double expect_empty = 1 - std::pow(1 - q0, m);
  CHECK(static_cast<double>(on_owned) / runs ==
        doctest::Approx(expect_owned).epsilon(0.03));
  CHECK(static_cast<double>(on_empty) / runs ==
        doctest::Approx(expect_empty).epsilon(0.03));
}

TEST_CASE("feat with randomness disabled returns exact statistics") {
  auto group = make_reference_backend();
  RngStream gen(5, 0);
  SubgraphCollection parts = random_parts(gen, 14, 3, 0.25);
  Graph uni = union_graphs(parts);
  ProtocolOptions opts;
  opts.group = group.get();
  opts.noiseless = true;

  RngStream rng(6, 0);
  QueryResult tri = run_feat(parts, 2.0, QuerySpec{}, rng, opts);
  CHECK(tri.estimate ==
        doctest::Approx(static_cast<double>(count_triangles_exact(uni))));

  QueryResult stars =
      run_feat(parts, 2.0, QuerySpec::parse("kstar:2"), rng, opts);
  CHECK(stars.estimate == doctest::Approx(count_kstars_exact(uni, 2)));
}

TEST_CASE("feat on a four-triangle instance in noiseless mode") {
  // Union is K4: exactly four triangles, spread over three clients.
  auto group = make_reference_backend();
  SubgraphCollection parts;
  parts.universe_n = 4;
  parts.parts.assign(3, Graph(4));
  parts.parts[0].add_edge(0, 1);
  parts.parts[0].add_edge(0, 2);
  parts.parts[1].add_edge(1, 2);
  parts.parts[1].add_edge(1, 3);
  parts.parts[2].add_edge(2, 3);
  parts.parts[2].add_edge(0, 3);
  ProtocolOptions opts;
  opts.group = group.get();
  opts.noiseless = true;
  RngStream rng(7, 0);
  CHECK(run_feat(parts, 1.0, QuerySpec{}, rng, opts).estimate ==
        doctest::Approx(4.0));
}

TEST_CASE("feat ledger records one full charge") {
  auto group = make_reference_backend();
  RngStream gen(8, 0);
  SubgraphCollection parts = random_parts(gen, 8, 3, 0.3);
  ProtocolOptions opts;
  opts.group = group.get();
  PrivacyLedger ledger(2.0);
  RngStream rng(9, 0);
  run_feat(parts, 2.0, QuerySpec{}, rng, opts, &ledger);
  CHECK(ledger.total() == 2.0);
  CHECK(ledger.entries().size() == 1);
}

TEST_CASE("feat triangle mean is within three standard errors of the truth") {
  auto group = make_reference_backend();
  RngStream gen(10, 0);
  Graph global = erdos_renyi(16, 0.35, gen);
  SubgraphCollection parts = split_federated(global, {3, 0.4, 0.2, 77});
  Graph uni = union_graphs(parts);
  double exact = static_cast<double>(count_triangles_exact(uni));
  ProtocolOptions opts;
  opts.group = group.get();

  const int sims = 600;
  std::vector<double> estimates;
  for (int s = 0; s < sims; ++s) {
    RngStream rng(2000 + s, 0);
    estimates.push_back(
        run_feat(parts, 2.0, QuerySpec{}, rng, opts).estimate);
  }
  CHECK(std::abs(testing::mean(estimates) - exact) <
        3 * testing::sem(estimates));
}

TEST_CASE("partition assigns every node to exactly one client") {
  RngStream gen(11, 0);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 3 + static_cast<int>(gen.next_below(20));
    int m = 1 + static_cast<int>(gen.next_below(5));
    SubgraphCollection parts = random_parts(gen, n, m, 0.3);
    RngStream rng(3000 + trial, 0);
    PartitionAssignment u = partition_nodes(parts, 0.3, rng);
    CHECK(is_valid_partition(u, n));
    CHECK(static_cast<int>(u.members.size()) == m);
  }
}

TEST_CASE("partition with one client takes everything") {
  RngStream gen(12, 0);
  SubgraphCollection parts = random_parts(gen, 9, 1, 0.3);
  RngStream rng(13, 0);
  PartitionAssignment u = partition_nodes(parts, 0.3, rng);
  CHECK(u.members[0].size() == 9);
}

TEST_CASE("noise-free partition picks the max-degree client, ties to lowest") {
  SubgraphCollection parts;
  parts.universe_n = 4;
  parts.parts.assign(3, Graph(4));
  // node 0 degrees: client0=2, client1=1, client2=1
  parts.parts[0].add_edge(0, 1);
  parts.parts[0].add_edge(0, 2);
  parts.parts[1].add_edge(0, 3);
  parts.parts[2].add_edge(0, 1);
  RngStream rng(14, 0);
  PartitionAssignment u =
      partition_nodes(parts, 0.3, rng, nullptr, /*noiseless=*/true);
  REQUIRE(u.members[0].size() >= 1);
  CHECK(u.members[0][0] == 0);  // degree 2 beats 1
  // nodes 1..3 tie across clients at equal degree; lowest index wins
  for (int v : u.members[1]) CHECK(v != 0);
}

TEST_CASE("argmax is invariant to a constant shift of all noisy degrees") {
  // shifting every client's degree for one node cannot change the winner;
  // equivalent check: the winner only depends on pairwise differences
  RngStream rng(15, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> degrees(4);
    for (double& d : degrees) d = rng.next_double() * 10;
    double shift = rng.next_double() * 100 - 50;
    int best = 0, best_shifted = 0;
    for (int j = 1; j < 4; ++j) {
      if (degrees[j] > degrees[best]) best = j;
      if (degrees[j] + shift > degrees[best_shifted] + shift)
        best_shifted = j;
    }
    CHECK(best == best_shifted);
  }
}

TEST_CASE("feat_plus with randomness disabled returns exact statistics") {
  auto group = make_reference_backend();
  RngStream gen(16, 0);
  SubgraphCollection parts = random_parts(gen, 15, 3, 0.2);
  Graph uni = union_graphs(parts);
  ProtocolOptions opts;
  opts.group = group.get();
  opts.noiseless = true;
  PrivacyBudget budget = split_budget(3.0, 0.45, 0.10, 0.45);

  RngStream rng(17, 0);
  QueryResult tri =
      run_feat_plus(parts, budget, DeltaPolicy{}, QuerySpec{}, rng, opts);
  CHECK(tri.estimate ==
        doctest::Approx(static_cast<double>(count_triangles_exact(uni))));

  QueryResult stars = run_feat_plus(parts, budget, DeltaPolicy{},
                                    QuerySpec::parse("kstar:2"), rng, opts);
  CHECK(stars.estimate == doctest::Approx(count_kstars_exact(uni, 2)));
}

TEST_CASE("feat_plus ledger charges the three phases") {
  auto group = make_reference_backend();
  RngStream gen(18, 0);
  SubgraphCollection parts = random_parts(gen, 8, 3, 0.3);
  ProtocolOptions opts;
  opts.group = group.get();
  PrivacyBudget budget = split_budget(3.0, 0.45, 0.10, 0.45);
  PrivacyLedger ledger(3.0);
  RngStream rng(19, 0);
  run_feat_plus(parts, budget, DeltaPolicy{}, QuerySpec{}, rng, opts, &ledger);
  auto entries = ledger.entries();
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].epsilon == doctest::Approx(1.35).epsilon(1e-12));
  CHECK(entries[1].epsilon == doctest::Approx(0.30).epsilon(1e-12));
  CHECK(entries[2].epsilon == doctest::Approx(1.35).epsilon(1e-12));
  CHECK(ledger.total() == 3.0);
}

TEST_CASE("an under-provisioned ledger aborts the run") {
  auto group = make_reference_backend();
  RngStream gen(20, 0);
  SubgraphCollection parts = random_parts(gen, 8, 3, 0.3);
  ProtocolOptions opts;
  opts.group = group.get();
  PrivacyBudget budget = split_budget(3.0, 0.45, 0.10, 0.45);
  PrivacyLedger ledger(2.0);  // cap below eps1 + eps2 + eps3
  RngStream rng(21, 0);
  CHECK_THROWS_AS(run_feat_plus(parts, budget, DeltaPolicy{}, QuerySpec{}, rng,
                                opts, &ledger),
                  std::runtime_error);
}

TEST_CASE("feat_plus triangle mean is within three standard errors") {
  auto group = make_reference_backend();
  RngStream gen(22, 0);
  Graph global = erdos_renyi(16, 0.35, gen);
  SubgraphCollection parts = split_federated(global, {3, 0.4, 0.2, 99});
  Graph uni = union_graphs(parts);
  double exact = static_cast<double>(count_triangles_exact(uni));
  ProtocolOptions opts;
  opts.group = group.get();
  PrivacyBudget budget = split_budget(3.0, 0.45, 0.10, 0.45);

  const int sims = 600;
  std::vector<double> estimates;
  for (int s = 0; s < sims; ++s) {
    RngStream rng(4000 + s, 0);
    estimates.push_back(run_feat_plus(parts, budget, DeltaPolicy{},
                                      QuerySpec{}, rng, opts)
                            .estimate);
  }
  CHECK(std::abs(testing::mean(estimates) - exact) <
        3 * testing::sem(estimates));
}

TEST_CASE("sensitivity policy uses the degree cap") {
  RngStream gen(23, 0);
  SubgraphCollection parts = random_parts(gen, 10, 2, 0.3);
  QuerySpec tri;
  QuerySpec stars = QuerySpec::parse("kstar:3");

  DeltaPolicy capped{6.0};
  CHECK(query_sensitivity(capped, tri, parts) == doctest::Approx(6.0));
  CHECK(query_sensitivity(capped, stars, parts) ==
        doctest::Approx(generalized_binomial(6.0, 2)));

  DeltaPolicy open{};  // falls back to the true max union degree
  Graph uni = union_graphs(parts);
  int maxdeg = 0;
  for (int v = 0; v < uni.node_count(); ++v)
    maxdeg = std::max(maxdeg, uni.degree(v));
  CHECK(query_sensitivity(open, tri, parts) ==
        doctest::Approx(static_cast<double>(maxdeg)));
}

}  // TEST_SUITE
