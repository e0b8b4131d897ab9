#pragma once

#include <mutex>
#include <string>
#include <vector>

#include "fga/rng.hpp"

namespace fga {

// Randomized response over single bits with flip probability
// p = 1 / (1 + e^eps). A noiseless channel (p = 0) stands in for the
// eps -> infinity test mode.
struct RrChannel {
  double epsilon;
  double flip_prob;

  static RrChannel with_epsilon(double eps);
  static RrChannel noiseless();
  bool is_noiseless() const { return flip_prob == 0.0; }
};

int rr_apply(int bit, const RrChannel& ch, RngStream& rng);

struct LaplaceChannel {
  double sensitivity;
  double epsilon;
  double scale;  // sensitivity / epsilon

  static LaplaceChannel with(double sensitivity, double epsilon);
};

// Zero-mean Laplace draw via inverse CDF on a 64-bit uniform.
double laplace_sample(const LaplaceChannel& ch, RngStream& rng);

// Three-way budget for the partitioned protocol: collection, partition,
// perturbation. The parts always sum to the total exactly (the last part
// is derived by subtraction).
struct PrivacyBudget {
  double epsilon_total;
  double eps1;
  double eps2;
  double eps3;
};

PrivacyBudget split_budget(double epsilon_total, double f1, double f2, double f3);

// Append-only record of every epsilon charged during one protocol run.
// Over-spending beyond the configured cap is a hard error.
class PrivacyLedger {
 public:
  struct Entry {
    std::string phase;
    std::string mechanism;
    double epsilon;
  };

  explicit PrivacyLedger(double epsilon_cap) : cap_(epsilon_cap) {}

  void record(std::string phase, std::string mechanism, double epsilon);
  double total() const;
  double cap() const { return cap_; }
  std::vector<Entry> entries() const;

  // CSV rows: phase,mechanism,epsilon
  std::string dump_csv() const;

 private:
  double cap_;
  mutable std::mutex mu_;
  std::vector<Entry> entries_;
};

}  // namespace fga
