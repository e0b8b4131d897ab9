#include "fga/group.hpp"

#include <sodium.h>

#include <cstring>
#include <mutex>
#include <stdexcept>
#include <string>

namespace fga {

namespace {

// ---------------------------------------------------------------------------
// Reference backend: quadratic-residue subgroup of Z_p^* for the safe prime
// p = 2q + 1. 61-bit modulus keeps all arithmetic in __uint128_t.
// ---------------------------------------------------------------------------

constexpr std::uint64_t kP = 2305843009213691579ULL;  // safe prime, 61 bits
constexpr std::uint64_t kQ = 1152921504606845789ULL;  // (p - 1) / 2, prime
constexpr std::uint64_t kG = 4;                       // 2^2, generates QR_p

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % kP);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t e) {
  std::uint64_t acc = 1;
  while (e) {
    if (e & 1) acc = mulmod(acc, base);
    base = mulmod(base, base);
    e >>= 1;
  }
  return acc;
}

std::uint64_t load_u64(const GroupElement& a) {
  std::uint64_t v;
  std::memcpy(&v, a.bytes.data(), sizeof(v));
  return v;
}

std::uint64_t load_u64(const GroupScalar& a) {
  std::uint64_t v;
  std::memcpy(&v, a.bytes.data(), sizeof(v));
  return v;
}

GroupElement make_element(std::uint64_t v) {
  GroupElement e;
  std::memcpy(e.bytes.data(), &v, sizeof(v));
  return e;
}

GroupScalar make_scalar(std::uint64_t v) {
  GroupScalar s;
  std::memcpy(s.bytes.data(), &v, sizeof(v));
  return s;
}

class ReferenceBackend final : public GroupBackend {
 public:
  std::string_view name() const override { return "reference"; }
  std::size_t element_size() const override { return 8; }

  GroupElement identity() const override { return make_element(1); }
  GroupElement generator() const override { return make_element(kG); }
  bool is_identity(const GroupElement& a) const override {
    return load_u64(a) == 1;
  }

  GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
    return make_element(mulmod(load_u64(a), load_u64(b)));
  }

  GroupElement exp(const GroupElement& base, const GroupScalar& e) const override {
    return make_element(powmod(load_u64(base), load_u64(e)));
  }

  GroupElement inverse(const GroupElement& a) const override {
    return make_element(powmod(load_u64(a), kP - 2));
  }

  GroupScalar scalar_add(const GroupScalar& a, const GroupScalar& b) const override {
    unsigned __int128 s =
        static_cast<unsigned __int128>(load_u64(a)) + load_u64(b);
    return make_scalar(static_cast<std::uint64_t>(s % kQ));
  }

  GroupScalar random_scalar(RngStream& rng) const override {
    return make_scalar(1 + rng.next_below(kQ - 1));
  }

  bool is_valid(const GroupElement& a) const override {
    std::uint64_t v = load_u64(a);
    if (v == 0 || v >= kP) return false;
    // Subgroup membership: v^q == 1.
    return powmod(v, kQ) == 1;
  }
};

// ---------------------------------------------------------------------------
// Production backend: ristretto255 (libsodium).
// ---------------------------------------------------------------------------

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw std::runtime_error("sodium_init failed");
  });
}

class RistrettoBackend final : public GroupBackend {
 public:
  RistrettoBackend() { ensure_sodium(); }

  std::string_view name() const override { return "ristretto"; }
  std::size_t element_size() const override {
    return crypto_core_ristretto255_BYTES;
  }

  GroupElement identity() const override { return GroupElement{}; }

  GroupElement generator() const override {
    GroupElement g;
    std::uint8_t one[crypto_core_ristretto255_SCALARBYTES] = {1};
    crypto_scalarmult_ristretto255_base(g.bytes.data(), one);
    return g;
  }

  bool is_identity(const GroupElement& a) const override {
    return a == GroupElement{};
  }

  GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
    if (is_identity(a)) return b;
    if (is_identity(b)) return a;
    GroupElement r;
    if (crypto_core_ristretto255_add(r.bytes.data(), a.bytes.data(),
                                     b.bytes.data()) != 0)
      throw std::runtime_error("ristretto255 add failed");
    return r;
  }

  GroupElement exp(const GroupElement& base, const GroupScalar& e) const override {
    if (is_identity(base) || scalar_is_zero(e)) return identity();
    GroupElement r;
    if (crypto_scalarmult_ristretto255(r.bytes.data(), e.bytes.data(),
                                       base.bytes.data()) != 0) {
      // Only reachable when the product is the neutral element.
      return identity();
    }
    return r;
  }

  GroupElement inverse(const GroupElement& a) const override {
    if (is_identity(a)) return identity();
    GroupElement r;
    GroupElement zero{};
    if (crypto_core_ristretto255_sub(r.bytes.data(), zero.bytes.data(),
                                     a.bytes.data()) != 0)
      throw std::runtime_error("ristretto255 negate failed");
    return r;
  }

  GroupScalar scalar_add(const GroupScalar& a, const GroupScalar& b) const override {
    GroupScalar r;
    crypto_core_ristretto255_scalar_add(r.bytes.data(), a.bytes.data(),
                                        b.bytes.data());
    return r;
  }

  GroupScalar random_scalar(RngStream& rng) const override {
    for (;;) {
      std::uint8_t wide[crypto_core_ristretto255_NONREDUCEDSCALARBYTES];
      for (std::size_t i = 0; i < sizeof(wide); i += 8) {
        std::uint64_t word = rng.next_u64();
        std::memcpy(wide + i, &word, 8);
      }
      GroupScalar s;
      crypto_core_ristretto255_scalar_reduce(s.bytes.data(), wide);
      if (!scalar_is_zero(s)) return s;
    }
  }

  bool is_valid(const GroupElement& a) const override {
    if (is_identity(a)) return true;
    return crypto_core_ristretto255_is_valid_point(a.bytes.data()) == 1;
  }

 private:
  static bool scalar_is_zero(const GroupScalar& s) {
    return s == GroupScalar{};
  }
};

}  // namespace

std::unique_ptr<GroupBackend> make_reference_backend() {
  return std::make_unique<ReferenceBackend>();
}

std::unique_ptr<GroupBackend> make_ristretto_backend() {
  return std::make_unique<RistrettoBackend>();
}

std::unique_ptr<GroupBackend> make_backend(std::string_view name) {
  if (name == "reference") return make_reference_backend();
  if (name == "ristretto") return make_ristretto_backend();
  throw std::invalid_argument("unknown group backend: " + std::string(name));
}

}  // namespace fga
