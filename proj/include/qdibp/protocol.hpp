#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qdibp/ghz_state.hpp"
#include "qdibp/layout.hpp"
#include "qdibp/rng.hpp"
#include "qdibp/shuffle.hpp"

namespace qdibp {

struct ActorId {
  enum class Kind { Broker, Trent, Dealer };

  Kind kind = Kind::Trent;
  int index = -1;  // broker index when kind == Broker

  static ActorId broker(int i) { return {Kind::Broker, i}; }
  static ActorId trent() { return {Kind::Trent, -1}; }
  static ActorId dealer() { return {Kind::Dealer, -1}; }

  std::string label() const;
  bool operator==(const ActorId&) const = default;
};

/// The entangled resource handed out by the dealer. Small widths get the
/// explicit 2^p representation with honest transform-based sampling; widths
/// over the structured cap fall back to the closed phase form, which is the
/// same state family tracked analytically.
using EntangledResource = std::variant<GhzDiagonalState, GhzPhaseState>;

EntangledResource dealer_distribute(const Dimensions& dims,
                                    int cap = GhzDiagonalState::kDefaultCap);

void apply_phase_oracle(EntangledResource& res, const BitVec& v);
std::vector<BitVec> sample_measurement(EntangledResource& res, Rng& rng,
                                       int solved_register = -1);

/// One line of the replayable record. Core fields are always present;
/// `peer` and `seg` are set on message events, `perm` on debug permutation
/// events.
struct TraceEvent {
  std::string event;
  std::string actor;
  int phase = 0;
  std::string payload_hex;
  std::uint64_t nonce = 0;
  std::string peer;
  int seg = -1;
  std::vector<int> perm;
};

struct ProtocolConfig {
  int n = 0;
  int m = 0;
  std::vector<BitVec> secrets;  // one per broker, m bits each
  std::uint64_t seed = 0;
  bool debug_permutations = false;
  int structured_cap = GhzDiagonalState::kDefaultCap;
  int dealer_broker = -1;  // -1: Trent deals (the default role assignment)
  // Fault injection: classical messages on these (from, to) label pairs are
  // dropped. Empty in normal operation.
  std::vector<std::pair<std::string, std::string>> drop_edges;
};

struct ProtocolTrace {
  ProtocolConfig config;
  std::vector<BitVec> phase1_registers;  // y_0..y_n (index n = aggregator)
  BitVec t;
  BitVec shuffled_t;
  std::vector<Permutation> permutations;  // populated only with debug flag
  std::vector<BitVec> phase3_registers;
  // Per broker: the n blocks of its segment sum XORed with its own secret,
  // in block-position order, and the same list with one occurrence of the
  // broker's own secret removed.
  std::vector<std::vector<BitVec>> decoded_blocks;
  std::vector<std::vector<BitVec>> recovered;
  std::vector<TraceEvent> events;
  bool r6_violated = false;
  bool ambiguous_self_filter = false;

  ProtocolTrace() : t(1), shuffled_t(1) {}
};

/// Raised when fault injection leaves a party without a message it needs.
struct ProtocolAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Phase1Result {
  std::vector<BitVec> registers;
  BitVec t;
};

/// Quantum half of Phase 1: every broker encodes its extended secret into
/// the shared resource, all parties measure, and the XOR of the outcomes is
/// the aggregated vector.
Phase1Result phase1(const std::vector<BitVec>& secrets, const Dimensions& dims,
                    EntangledResource& resource, Rng& measure_rng);

struct Phase2Result {
  AggregatedVector shuffled;
  std::vector<Permutation> perms;
};

Phase2Result phase2(const AggregatedVector& t, Rng& trent_rng);

struct Phase3Result {
  std::vector<BitVec> registers;
  std::vector<BitVec> segment_sums;  // per broker: its segment of the shuffled vector
  std::vector<std::vector<BitVec>> decoded_blocks;
  std::vector<std::vector<BitVec>> recovered;
  bool ambiguous = false;
};

Phase3Result phase3(const AggregatedVector& shuffled_t,
                    const std::vector<BitVec>& secrets, const Dimensions& dims,
                    EntangledResource& resource, Rng& measure_rng);

/// Runs all three phases over the simulated authenticated channels, with
/// message deliveries interleaved under the scheduler stream and a barrier
/// between phases. Deterministic per seed.
ProtocolTrace run_full(const ProtocolConfig& config);

/// JSON-lines rendering: a config line, one line per event, a summary line.
/// Byte-stable for a fixed trace.
std::string trace_to_jsonl(const ProtocolTrace& trace);

bool r6_satisfied(const std::vector<BitVec>& secrets);

}  // namespace qdibp
