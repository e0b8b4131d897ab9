#include "fga/dpsu.hpp"

#include <cstring>
#include <stdexcept>

namespace fga {

void InProcessChannel::send(std::vector<std::uint8_t> message) {
  queue_.push_back(std::move(message));
}

std::vector<std::uint8_t> InProcessChannel::receive() {
  if (queue_.empty()) throw std::runtime_error("receive on empty channel");
  std::vector<std::uint8_t> front = std::move(queue_.front());
  queue_.pop_front();
  return front;
}

namespace {

std::vector<std::uint8_t> serialize_elements(const GroupBackend& group,
                                             const std::vector<GroupElement>& es) {
  const std::size_t width = group.element_size();
  std::vector<std::uint8_t> out;
  out.reserve(5 + es.size() * width);
  std::uint32_t count = static_cast<std::uint32_t>(es.size());
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>(count >> (8 * i)));
  out.push_back(static_cast<std::uint8_t>(width));
  for (const GroupElement& e : es)
    out.insert(out.end(), e.bytes.begin(), e.bytes.begin() + width);
  return out;
}

std::vector<GroupElement> parse_elements(const GroupBackend& group,
                                         const std::vector<std::uint8_t>& bytes) {
  const std::size_t width = group.element_size();
  if (bytes.size() < 5) throw std::runtime_error("element vector truncated");
  std::uint32_t count = 0;
  for (int i = 0; i < 4; ++i)
    count |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  if (bytes[4] != width)
    throw std::runtime_error("element vector width does not match backend");
  if (bytes.size() != 5 + static_cast<std::size_t>(count) * width)
    throw std::runtime_error("element vector length mismatch");
  std::vector<GroupElement> out(count);
  for (std::uint32_t i = 0; i < count; ++i)
    std::memcpy(out[i].bytes.data(), bytes.data() + 5 + i * width, width);
  return out;
}

void trace_write(DpsuTrace* trace, std::size_t slot, int client, int input_bit,
                 int output_bit) {
  if (!trace) return;
  DpsuTrace::Slot& s = trace->slots[slot];
  s.writer_client = client;
  s.input_bit = input_bit;
  s.output_bit = output_bit;
}

}  // namespace

Graph dpsu_collect_graph(const SubgraphCollection& parts,
                         const DpsuOptions& opts, RngStream& rng) {
  if (!opts.group) throw std::invalid_argument("dpsu needs a group backend");
  if (parts.parts.empty()) throw std::invalid_argument("empty collection");
  const GroupBackend& group = *opts.group;
  const int m = parts.client_count();
  const EdgeDomainIndex domain(parts.universe_n);
  const std::size_t N = domain.size;
  for (const Graph& part : parts.parts) {
    if (part.node_count() != parts.universe_n)
      throw std::invalid_argument("subgraphs must share one node universe");
  }

  if (opts.trace) {
    opts.trace->slots.assign(N, {});
  }

  RngStream key_rng = rng.substream(0x6b6579);
  Keygen keys = keygen(group, m, key_rng);

  // Chain channels: client i writes chain[i], client i+1 (or the server for
  // the last client) reads it.
  std::vector<InProcessChannel> chain(m);

  // Client 1: flag vector over the whole domain, randomized, encrypted.
  {
    RngStream c1 = rng.substream(0x100);
    const Graph& g1 = parts.parts[0];
    std::vector<BitCiphertext> cts;
    cts.reserve(N);
    for (std::size_t slot = 0; slot < N; ++slot) {
      auto [a, b] = domain.edge_at(slot);
      int bit = g1.has_edge(a, b) ? 1 : 0;
      int noisy = rr_apply(bit, opts.channel, c1);
      if (opts.trace) ++opts.trace->slots[slot].draws;
      trace_write(opts.trace, slot, 0, bit, noisy);
      cts.push_back(encrypt_bit(group, noisy, keys.joint, c1));
    }
    chain[0].send(serialize_ciphertexts(group, cts));
  }

  // Clients 2..m edit the vector slot by slot and forward it.
  for (int i = 1; i < m; ++i) {
    RngStream ci = rng.substream(0x100 + i);
    const Graph& gi = parts.parts[i];
    std::vector<BitCiphertext> cts =
        parse_ciphertexts(group, chain[i - 1].receive());
    if (cts.size() != N)
      throw std::runtime_error("ciphertext vector length mismatch in chain");
    for (std::size_t slot = 0; slot < N; ++slot) {
      auto [a, b] = domain.edge_at(slot);
      if (gi.has_edge(a, b)) {
        int noisy = rr_apply(1, opts.channel, ci);
        if (opts.trace) ++opts.trace->slots[slot].draws;
        trace_write(opts.trace, slot, i, 1, noisy);
        cts[slot] = encrypt_bit(group, noisy, keys.joint, ci);
      } else if (opts.mode == DpsuMode::kSingleFlip) {
        cts[slot] = rerandomize(group, cts[slot], keys.joint, ci);
      } else {
        int noisy = rr_apply(0, opts.channel, ci);
        if (opts.trace) ++opts.trace->slots[slot].draws;
        if (noisy == 1) {
          trace_write(opts.trace, slot, i, 0, 1);
          cts[slot] = encrypt_bit(group, 1, keys.joint, ci);
        }
      }
    }
    chain[i].send(serialize_ciphertexts(group, cts));
  }

  // Joint decryption: the server hands the c1 components back to every
  // client and combines their partial decryptions.
  std::vector<BitCiphertext> final_cts =
      parse_ciphertexts(group, chain[m - 1].receive());
  std::vector<GroupElement> c1s(N);
  for (std::size_t slot = 0; slot < N; ++slot) c1s[slot] = final_cts[slot].c1;
  std::vector<std::uint8_t> request = serialize_elements(group, c1s);

  std::vector<std::vector<GroupElement>> partials(m);
  for (int i = 0; i < m; ++i) {
    InProcessChannel to_client, to_server;
    to_client.send(request);
    std::vector<GroupElement> received = parse_elements(group, to_client.receive());
    std::vector<GroupElement> mine(N);
    for (std::size_t slot = 0; slot < N; ++slot)
      mine[slot] = group.exp(received[slot], keys.shares[i].sk);
    to_server.send(serialize_elements(group, mine));
    partials[i] = parse_elements(group, to_server.receive());
  }

  if (opts.ledger && !opts.channel.is_noiseless())
    opts.ledger->record("graph-collection", "dpsu-randomized-response",
                        opts.channel.epsilon);

  Graph out(parts.universe_n);
  std::vector<GroupElement> slot_partials(m);
  for (std::size_t slot = 0; slot < N; ++slot) {
    for (int i = 0; i < m; ++i) slot_partials[i] = partials[i][slot];
    if (combine(group, final_cts[slot], slot_partials, m) == 1) {
      auto [a, b] = domain.edge_at(slot);
      out.add_edge(a, b);
    }
  }
  return out;
}

}  // namespace fga
