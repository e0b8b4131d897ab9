#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "fga/dp.hpp"
#include "fga/elgamal.hpp"
#include "fga/graph.hpp"
#include "fga/group.hpp"

namespace fga {

// Ordered reliable message transport between protocol parties. The bundled
// implementation is an in-process queue; a socket transport can implement
// the same interface without touching the protocol code.
class ByteChannel {
 public:
  virtual ~ByteChannel() = default;
  virtual void send(std::vector<std::uint8_t> message) = 0;
  virtual std::vector<std::uint8_t> receive() = 0;
};

class InProcessChannel final : public ByteChannel {
 public:
  void send(std::vector<std::uint8_t> message) override;
  std::vector<std::uint8_t> receive() override;

 private:
  std::deque<std::vector<std::uint8_t>> queue_;
};

// How clients after the first treat slots they do not own.
//   kSingleFlip    — rerandomize only; each slot's plaintext is decided by a
//                    single randomized-response draw (the calibration math
//                    in the estimators assumes this).
//   kLiteralChain  — additionally flip unowned zero slots to one with
//                    probability p, compounding flips across clients.
enum class DpsuMode { kSingleFlip, kLiteralChain };

// Instrumentation for the single-report invariant: which draw decided each
// slot and what went in and out of it.
struct DpsuTrace {
  struct Slot {
    int draws = 0;             // randomized-response draws touching the slot
    int writer_client = -1;    // client whose write survived
    int input_bit = -1;        // bit fed to the surviving draw
    int output_bit = -1;       // plaintext left in the slot
  };
  std::vector<Slot> slots;
};

struct DpsuOptions {
  RrChannel channel = RrChannel::noiseless();
  DpsuMode mode = DpsuMode::kSingleFlip;
  const GroupBackend* group = nullptr;  // required
  PrivacyLedger* ledger = nullptr;      // optional
  DpsuTrace* trace = nullptr;           // optional
};

// Set-union graph collection: client 1 encrypts a randomized flag vector
// over the full edge domain, every later client edits the slots it owns,
// and all clients jointly decrypt for the server. One pass around the
// chain; ciphertext vectors travel serialized through ByteChannels.
Graph dpsu_collect_graph(const SubgraphCollection& parts,
                         const DpsuOptions& opts, RngStream& rng);

}  // namespace fga
