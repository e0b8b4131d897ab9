#pragma once

#include <cstdint>
#include <vector>

#include "fga/group.hpp"
#include "fga/rng.hpp"

namespace fga {

// Additive key share: pk_i = g^{sk_i}. Decryption needs all m shares.
struct KeyShare {
  GroupScalar sk;
  GroupElement pk;
};

struct JointPublicKey {
  GroupElement pk;  // product of all pk_i = g^{sum sk_i}
};

// ElGamal encryption of a bit b as (g^r, pk^r * g^b).
struct BitCiphertext {
  GroupElement c1;
  GroupElement c2;

  bool operator==(const BitCiphertext&) const = default;
};

struct Keygen {
  std::vector<KeyShare> shares;
  JointPublicKey joint;
};

Keygen keygen(const GroupBackend& group, int m, RngStream& rng);

BitCiphertext encrypt_bit(const GroupBackend& group, int bit,
                          const JointPublicKey& pk, RngStream& rng);

// Multiplies in a fresh encryption of zero: plaintext is preserved while
// both components change (the blinding scalar is never zero).
BitCiphertext rerandomize(const GroupBackend& group, const BitCiphertext& ct,
                          const JointPublicKey& pk, RngStream& rng);

// One share's contribution c1^{sk_i}.
GroupElement partial_decrypt(const GroupBackend& group, const BitCiphertext& ct,
                             const KeyShare& share);

// Combines exactly expected_shares partials: c2 / prod(partials) must land on
// the identity (bit 0) or the generator (bit 1); anything else is corruption.
int combine(const GroupBackend& group, const BitCiphertext& ct,
            const std::vector<GroupElement>& partials, int expected_shares);

// Wire format for a ciphertext vector: u32 LE count, u8 element width, then
// count * 2 fixed-width element encodings (c1 then c2 per slot). Byte-exact
// round trips are part of the contract.
std::vector<std::uint8_t> serialize_ciphertexts(
    const GroupBackend& group, const std::vector<BitCiphertext>& cts);
std::vector<BitCiphertext> parse_ciphertexts(const GroupBackend& group,
                                             const std::vector<std::uint8_t>& bytes);

}  // namespace fga
