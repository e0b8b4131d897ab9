#include "fga/dp.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fga {

RrChannel RrChannel::with_epsilon(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("rr channel needs epsilon > 0");
  return {eps, 1.0 / (1.0 + std::exp(eps))};
}

RrChannel RrChannel::noiseless() {
  return {std::numeric_limits<double>::infinity(), 0.0};
}

int rr_apply(int bit, const RrChannel& ch, RngStream& rng) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("rr input must be a bit");
  return rng.next_bernoulli(ch.flip_prob) ? 1 - bit : bit;
}

LaplaceChannel LaplaceChannel::with(double sensitivity, double epsilon) {
  if (!(sensitivity > 0.0))
    throw std::invalid_argument("laplace channel needs sensitivity > 0");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("laplace channel needs epsilon > 0");
  return {sensitivity, epsilon, sensitivity / epsilon};
}

double laplace_sample(const LaplaceChannel& ch, RngStream& rng) {
  double u = rng.next_open_double() - 0.5;  // (-0.5, 0.5)
  double mag = -ch.scale * std::log1p(-2.0 * std::abs(u));
  return u < 0 ? -mag : mag;
}

PrivacyBudget split_budget(double epsilon_total, double f1, double f2, double f3) {
  if (!(epsilon_total > 0.0))
    throw std::invalid_argument("budget must be positive");
  if (f1 < 0.0 || f2 < 0.0 || f3 < 0.0)
    throw std::invalid_argument("budget fractions must be nonnegative");
  if (std::abs(f1 + f2 + f3 - 1.0) > 1e-9)
    throw std::invalid_argument("budget fractions must sum to 1");
  double eps1 = epsilon_total * f1;
  double eps2 = epsilon_total * f2;
  double eps3 = epsilon_total - eps1 - eps2;
  return {epsilon_total, eps1, eps2, eps3};
}

void PrivacyLedger::record(std::string phase, std::string mechanism,
                           double epsilon) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("negative epsilon charge");
  std::lock_guard lock(mu_);
  double spent = 0;
  for (const Entry& e : entries_) spent += e.epsilon;
  if (spent + epsilon > cap_ * (1.0 + 1e-12) + 1e-12) {
    throw std::runtime_error("privacy budget exceeded: charging " +
                             std::to_string(epsilon) + " on top of " +
                             std::to_string(spent) + " with cap " +
                             std::to_string(cap_));
  }
  entries_.push_back({std::move(phase), std::move(mechanism), epsilon});
}

double PrivacyLedger::total() const {
  std::lock_guard lock(mu_);
  double spent = 0;
  for (const Entry& e : entries_) spent += e.epsilon;
  return spent;
}

std::vector<PrivacyLedger::Entry> PrivacyLedger::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::string PrivacyLedger::dump_csv() const {
  std::ostringstream out;
  out << "phase,mechanism,epsilon\n";
  for (const Entry& e : entries()) {
    out << e.phase << ',' << e.mechanism << ',' << e.epsilon << '\n';
  }
  return out.str();
}

}  // namespace fga
