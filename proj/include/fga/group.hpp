#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string_view>

#include "fga/rng.hpp"

namespace fga {

// Opaque fixed-size buffers; only the first element_size()/scalar bytes are
// meaningful for a given backend, the rest stay zero so equality and
// serialization work uniformly.
struct GroupElement {
  std::array<std::uint8_t, 32> bytes{};
  bool operator==(const GroupElement&) const = default;
};

struct GroupScalar {
  std::array<std::uint8_t, 32> bytes{};
  bool operator==(const GroupScalar&) const = default;
};

// Prime-order group interface. Two implementations: a Schnorr subgroup of a
// 61-bit safe prime (fast, debuggable) and ristretto255 via libsodium
// (>= 128-bit security). Both expose byte-exact fixed-width encodings.
class GroupBackend {
 public:
  virtual ~GroupBackend() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t element_size() const = 0;

  virtual GroupElement identity() const = 0;
  virtual GroupElement generator() const = 0;
  virtual bool is_identity(const GroupElement& a) const = 0;

  virtual GroupElement mul(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement exp(const GroupElement& base, const GroupScalar& e) const = 0;
  virtual GroupElement inverse(const GroupElement& a) const = 0;

  virtual GroupScalar scalar_add(const GroupScalar& a, const GroupScalar& b) const = 0;
  // Uniform in [1, q): never the zero scalar.
  virtual GroupScalar random_scalar(RngStream& rng) const = 0;

  // Rejects malformed encodings (used when parsing wire bytes).
  virtual bool is_valid(const GroupElement& a) const = 0;
};

std::unique_ptr<GroupBackend> make_reference_backend();
std::unique_ptr<GroupBackend> make_ristretto_backend();

// Named lookup used by the CLI: "reference" or "ristretto".
std::unique_ptr<GroupBackend> make_backend(std::string_view name);

}  // namespace fga
