#include "fga/elgamal.hpp"

#include <cstring>
#include <stdexcept>

namespace fga {

Keygen keygen(const GroupBackend& group, int m, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("keygen needs at least one party");
  Keygen out;
  out.shares.reserve(m);
  GroupElement joint = group.identity();
  for (int i = 0; i < m; ++i) {
    GroupScalar sk = group.random_scalar(rng);
    GroupElement pk = group.exp(group.generator(), sk);
    joint = group.mul(joint, pk);
    out.shares.push_back({sk, pk});
  }
  out.joint = {joint};
  return out;
}

BitCiphertext encrypt_bit(const GroupBackend& group, int bit,
                          const JointPublicKey& pk, RngStream& rng) {
  if (bit != 0 && bit != 1)
    throw std::invalid_argument("plaintext must be a bit");
  GroupScalar r = group.random_scalar(rng);
  GroupElement c1 = group.exp(group.generator(), r);
  GroupElement c2 = group.exp(pk.pk, r);
  if (bit == 1) c2 = group.mul(c2, group.generator());
  return {c1, c2};
}

BitCiphertext rerandomize(const GroupBackend& group, const BitCiphertext& ct,
                          const JointPublicKey& pk, RngStream& rng) {
  GroupScalar s = group.random_scalar(rng);
  return {group.mul(ct.c1, group.exp(group.generator(), s)),
          group.mul(ct.c2, group.exp(pk.pk, s))};
}

GroupElement partial_decrypt(const GroupBackend& group, const BitCiphertext& ct,
                             const KeyShare& share) {
  return group.exp(ct.c1, share.sk);
}

int combine(const GroupBackend& group, const BitCiphertext& ct,
            const std::vector<GroupElement>& partials, int expected_shares) {
  if (static_cast<int>(partials.size()) != expected_shares)
    throw std::invalid_argument("decryption requires one partial per key share");
  GroupElement mask = group.identity();
  for (const GroupElement& p : partials) mask = group.mul(mask, p);
  GroupElement plain = group.mul(ct.c2, group.inverse(mask));
  if (group.is_identity(plain)) return 0;
  if (plain == group.generator()) return 1;
  throw std::runtime_error("ciphertext corruption: decryption is not a bit");
}

std::vector<std::uint8_t> serialize_ciphertexts(
    const GroupBackend& group, const std::vector<BitCiphertext>& cts) {
  const std::size_t width = group.element_size();
  std::vector<std::uint8_t> out;
  out.reserve(5 + cts.size() * 2 * width);
  std::uint32_t count = static_cast<std::uint32_t>(cts.size());
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>(count >> (8 * i)));
  out.push_back(static_cast<std::uint8_t>(width));
  for (const BitCiphertext& ct : cts) {
    out.insert(out.end(), ct.c1.bytes.begin(), ct.c1.bytes.begin() + width);
    out.insert(out.end(), ct.c2.bytes.begin(), ct.c2.bytes.begin() + width);
  }
  return out;
}

std::vector<BitCiphertext> parse_ciphertexts(
    const GroupBackend& group, const std::vector<std::uint8_t>& bytes) {
  const std::size_t width = group.element_size();
  if (bytes.size() < 5) throw std::runtime_error("ciphertext vector truncated");
  std::uint32_t count = 0;
  for (int i = 0; i < 4; ++i)
    count |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  if (bytes[4] != width)
    throw std::runtime_error("ciphertext vector width does not match backend");
  if (bytes.size() != 5 + static_cast<std::size_t>(count) * 2 * width)
    throw std::runtime_error("ciphertext vector length mismatch");
  std::vector<BitCiphertext> out(count);
  const std::uint8_t* p = bytes.data() + 5;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::memcpy(out[i].c1.bytes.data(), p, width);
    p += width;
    std::memcpy(out[i].c2.bytes.data(), p, width);
    p += width;
    if (!group.is_valid(out[i].c1) || !group.is_valid(out[i].c2))
      throw std::runtime_error("ciphertext vector contains invalid elements");
  }
  return out;
}

}  // namespace fga
