#include "qdibp/protocol.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace qdibp {

namespace {

void check_secrets(const std::vector<BitVec>& secrets, const Dimensions& dims) {
  if (secrets.size() != static_cast<std::size_t>(dims.n))
    throw std::invalid_argument("protocol: need one secret per broker");
  for (const BitVec& s : secrets)
    if (s.size() != dims.block_width())
      throw std::invalid_argument("protocol: secret width does not match m");
}

// Deterministic in-place shuffle used to interleave within-phase deliveries.
template <typename T>
void scheduler_shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i)
    std::swap(items[i - 1], items[rng.below(i)]);
}

struct Decoded {
  std::vector<BitVec> blocks;
  std::vector<BitVec> recovered;
  bool ambiguous = false;
};

// XORs the broker's secret into every block of its segment sum and drops one
// occurrence of the broker's own secret (the decode of its zero diagonal
// block). More than one occurrence means self-filtering is ambiguous, which
// can only happen when the uniqueness rule R6 is violated.
Decoded decode_segment(const BitVec& segment_sum, const BitVec& secret,
                       const Dimensions& dims) {
  Decoded out;
  for (int k = 0; k < dims.n; ++k)
    out.blocks.push_back(block(segment_sum, k, dims) ^ secret);
  std::size_t own = std::count(out.blocks.begin(), out.blocks.end(), secret);
  if (own == 0)
    throw std::runtime_error("decode: own secret missing from segment sum");
  out.ambiguous = own > 1;
  bool dropped = false;
  for (const BitVec& b : out.blocks) {
    if (!dropped && b == secret) {
      dropped = true;
      continue;
    }
    out.recovered.push_back(b);
  }
  return out;
}

}  // namespace

std::string ActorId::label() const {
  switch (kind) {
    case Kind::Broker: return "broker_" + std::to_string(index);
    case Kind::Trent: return "trent";
    case Kind::Dealer: return "dealer";
  }
  return "?";
}

EntangledResource dealer_distribute(const Dimensions& dims, int cap) {
  int p = static_cast<int>(dims.p());
  int r = dims.n + 1;
  if (p <= cap) return GhzDiagonalState(p, r, cap);
  return GhzPhaseState(p, r);
}

void apply_phase_oracle(EntangledResource& res, const BitVec& v) {
  std::visit([&](auto& state) { state.apply_phase_oracle(v); }, res);
}

std::vector<BitVec> sample_measurement(EntangledResource& res, Rng& rng,
                                       int solved_register) {
  return std::visit(
      [&](auto& state) { return state.sample_measurement(rng, solved_register); }, res);
}

bool r6_satisfied(const std::vector<BitVec>& secrets) {
  std::set<BitVec> seen;
  for (const BitVec& s : secrets) {
    if (s.is_zero()) return false;
    if (!seen.insert(s).second) return false;
  }
  return true;
}

Phase1Result phase1(const std::vector<BitVec>& secrets, const Dimensions& dims,
                    EntangledResource& resource, Rng& measure_rng) {
  check_secrets(secrets, dims);
  for (int i = 0; i < dims.n; ++i)
    apply_phase_oracle(resource, build_extended(i, secrets[static_cast<std::size_t>(i)], dims).bits);
  std::vector<BitVec> registers = sample_measurement(resource, measure_rng);
  BitVec t(dims.p());
  for (const BitVec& y : registers) t ^= y;
  return Phase1Result{std::move(registers), std::move(t)};
}

Phase2Result phase2(const AggregatedVector& t, Rng& trent_rng) {
  std::vector<Permutation> perms;
  perms.reserve(static_cast<std::size_t>(t.dims.n));
  for (int i = 0; i < t.dims.n; ++i) perms.push_back(random_permutation(t.dims.n, trent_rng));
  return Phase2Result{shuffle_aggregated(t, perms), std::move(perms)};
}

Phase3Result phase3(const AggregatedVector& shuffled_t,
                    const std::vector<BitVec>& secrets, const Dimensions& dims,
                    EntangledResource& resource, Rng& measure_rng) {
  if (!shuffled_t.shuffled)
    throw std::invalid_argument("phase3: aggregated vector has not been shuffled");
  check_secrets(secrets, dims);
  apply_phase_oracle(resource, shuffled_t.bits);
  Phase3Result out;
  out.registers = sample_measurement(resource, measure_rng);
  for (int i = 0; i < dims.n; ++i) {
    BitVec sum(dims.segment_width());
    for (const BitVec& y : out.registers) sum ^= segment(y, i, dims);
    Decoded dec = decode_segment(sum, secrets[static_cast<std::size_t>(i)], dims);
    out.segment_sums.push_back(std::move(sum));
    out.decoded_blocks.push_back(std::move(dec.blocks));
    out.recovered.push_back(std::move(dec.recovered));
    out.ambiguous = out.ambiguous || dec.ambiguous;
  }
  return out;
}

ProtocolTrace run_full(const ProtocolConfig& config) {
  Dimensions dims(config.n, config.m);
  check_secrets(config.secrets, dims);

  ProtocolTrace trace;
  trace.config = config;

  Rng scheduler = Rng::derive(config.seed, "scheduler");
  Rng measure1 = Rng::derive(config.seed, "phase1/measure");
  Rng measure3 = Rng::derive(config.seed, "phase3/measure");
  Rng trent_perms = Rng::derive(config.seed, "trent/permutations");

  std::uint64_t nonce = 0;
  auto emit = [&](TraceEvent ev) {
    ev.nonce = nonce++;
    trace.events.push_back(std::move(ev));
  };
  auto dropped = [&](const std::string& from, const std::string& to) {
    for (const auto& [f, t] : config.drop_edges)
      if (f == from && t == to) return true;
    return false;
  };

  ActorId dealer =
      config.dealer_broker < 0 ? ActorId::dealer() : ActorId::broker(config.dealer_broker);

  trace.r6_violated = !r6_satisfied(config.secrets);
  if (trace.r6_violated)
    emit({.event = "warning",
          .actor = "harness",
          .phase = 0,
          .payload_hex = "",
          .peer = "",
          .seg = -1,
          .perm = {}});

  // ---- Phase 1: brokers encode, everyone measures, results flow to the
  // aggregator over authenticated channels.
  EntangledResource res1 = dealer_distribute(dims, config.structured_cap);
  emit({.event = "entangle", .actor = dealer.label(), .phase = 1, .payload_hex = ""});

  std::vector<int> order(static_cast<std::size_t>(config.n));
  for (int i = 0; i < config.n; ++i) order[static_cast<std::size_t>(i)] = i;
  scheduler_shuffle(order, scheduler);
  for (int i : order) {
    apply_phase_oracle(res1, build_extended(i, config.secrets[static_cast<std::size_t>(i)], dims).bits);
    emit({.event = "encode", .actor = ActorId::broker(i).label(), .phase = 1});
  }

  trace.phase1_registers = sample_measurement(res1, measure1);
  std::vector<int> measure_order(static_cast<std::size_t>(config.n + 1));
  for (int j = 0; j <= config.n; ++j) measure_order[static_cast<std::size_t>(j)] = j;
  scheduler_shuffle(measure_order, scheduler);
  for (int j : measure_order) {
    ActorId who = j == config.n ? ActorId::trent() : ActorId::broker(j);
    emit({.event = "measure",
          .actor = who.label(),
          .phase = 1,
          .payload_hex = trace.phase1_registers[static_cast<std::size_t>(j)].to_hex()});
  }

  std::vector<int> senders = order;
  scheduler_shuffle(senders, scheduler);
  std::set<int> trent_received;
  for (int i : senders) {
    std::string from = ActorId::broker(i).label();
    if (dropped(from, "trent")) continue;
    emit({.event = "message",
          .actor = from,
          .phase = 1,
          .payload_hex = trace.phase1_registers[static_cast<std::size_t>(i)].to_hex(),
          .peer = "trent"});
    trent_received.insert(i);
  }
  for (int i = 0; i < config.n; ++i)
    if (!trent_received.count(i))
      throw ProtocolAbort("protocol abort: missing message " +
                          ActorId::broker(i).label() + " -> trent (phase 1)");

  BitVec t(dims.p());
  for (const BitVec& y : trace.phase1_registers) t ^= y;
  trace.t = t;
  emit({.event = "aggregate", .actor = "trent", .phase = 1, .payload_hex = t.to_hex()});

  // ---- Phase 2: the aggregator's private block shuffle.
  Phase2Result p2 = phase2(AggregatedVector{dims, t, false}, trent_perms);
  trace.shuffled_t = p2.shuffled.bits;
  if (config.debug_permutations) {
    trace.permutations = p2.perms;
    for (int i = 0; i < config.n; ++i)
      emit({.event = "permutation",
            .actor = "trent",
            .phase = 2,
            .payload_hex = "",
            .peer = "",
            .seg = i,
            .perm = p2.perms[static_cast<std::size_t>(i)].map()});
  }
  emit({.event = "shuffle", .actor = "trent", .phase = 2, .payload_hex = trace.shuffled_t.to_hex()});

  // ---- Phase 3: the aggregator encodes the shuffled vector, everyone
  // measures, segments flow to their recipients.
  EntangledResource res3 = dealer_distribute(dims, config.structured_cap);
  emit({.event = "entangle", .actor = dealer.label(), .phase = 3, .payload_hex = ""});
  apply_phase_oracle(res3, trace.shuffled_t);
  emit({.event = "encode", .actor = "trent", .phase = 3});

  trace.phase3_registers = sample_measurement(res3, measure3);
  scheduler_shuffle(measure_order, scheduler);
  for (int j : measure_order) {
    ActorId who = j == config.n ? ActorId::trent() : ActorId::broker(j);
    emit({.event = "measure",
          .actor = who.label(),
          .phase = 3,
          .payload_hex = trace.phase3_registers[static_cast<std::size_t>(j)].to_hex()});
  }

  // Every broker keeps its own segment private and sends segment j to broker
  // j alone; the aggregator sends broker i its segment i.
  struct Delivery {
    ActorId from;
    ActorId to;
    int seg;
  };
  std::vector<Delivery> deliveries;
  for (int i = 0; i < config.n; ++i)
    for (int j = 0; j < config.n; ++j)
      if (j != i) deliveries.push_back({ActorId::broker(i), ActorId::broker(j), j});
  for (int i = 0; i < config.n; ++i)
    deliveries.push_back({ActorId::trent(), ActorId::broker(i), i});
  scheduler_shuffle(deliveries, scheduler);

  // received[i] collects segment i values addressed to broker i, keyed by
  // sender register index (n = the aggregator).
  std::vector<std::map<int, BitVec>> received(static_cast<std::size_t>(config.n));
  for (const Delivery& d : deliveries) {
    if (dropped(d.from.label(), d.to.label())) continue;
    int sender_reg = d.from.kind == ActorId::Kind::Trent ? config.n : d.from.index;
    BitVec payload =
        segment(trace.phase3_registers[static_cast<std::size_t>(sender_reg)], d.seg, dims);
    emit({.event = "message",
          .actor = d.from.label(),
          .phase = 3,
          .payload_hex = payload.to_hex(),
          .peer = d.to.label(),
          .seg = d.seg});
    received[static_cast<std::size_t>(d.to.index)].emplace(sender_reg, std::move(payload));
  }

  for (int i = 0; i < config.n; ++i) {
    auto& inbox = received[static_cast<std::size_t>(i)];
    for (int j = 0; j <= config.n; ++j) {
      if (j == i) continue;  // own segment, never transmitted
      if (!inbox.count(j)) {
        ActorId from = j == config.n ? ActorId::trent() : ActorId::broker(j);
        throw ProtocolAbort("protocol abort: missing segment message " + from.label() +
                            " -> " + ActorId::broker(i).label() + " (phase 3)");
      }
    }
    BitVec sum = segment(trace.phase3_registers[static_cast<std::size_t>(i)], i, dims);
    for (const auto& [sender, seg_bits] : inbox) sum ^= seg_bits;
    emit({.event = "decode", .actor = ActorId::broker(i).label(), .phase = 3,
          .payload_hex = sum.to_hex()});
    Decoded dec = decode_segment(sum, config.secrets[static_cast<std::size_t>(i)], dims);
    if (dec.ambiguous) {
      trace.ambiguous_self_filter = true;
      emit({.event = "warning", .actor = ActorId::broker(i).label(), .phase = 3});
    }
    BitVec joined(std::max<std::size_t>(1, dec.recovered.size() * dims.block_width()));
    for (std::size_t k = 0; k < dec.recovered.size(); ++k)
      joined.paste(k * dims.block_width(), dec.recovered[k]);
    emit({.event = "recovered", .actor = ActorId::broker(i).label(), .phase = 3,
          .payload_hex = joined.to_hex()});
    trace.decoded_blocks.push_back(std::move(dec.blocks));
    trace.recovered.push_back(std::move(dec.recovered));
  }

  return trace;
}

std::string trace_to_jsonl(const ProtocolTrace& trace) {
  using json = nlohmann::ordered_json;
  std::string out;

  json config;
  config["event"] = "config";
  config["n"] = trace.config.n;
  config["m"] = trace.config.m;
  json secrets = json::array();
  for (const BitVec& s : trace.config.secrets) secrets.push_back(s.to_hex());
  config["secrets_hex"] = std::move(secrets);
  config["seed"] = trace.config.seed;
  config["debug_permutations"] = trace.config.debug_permutations;
  out += config.dump();
  out += '\n';

  for (const TraceEvent& ev : trace.events) {
    json line;
    line["event"] = ev.event;
    line["actor"] = ev.actor;
    line["phase"] = ev.phase;
    line["payload_hex"] = ev.payload_hex;
    line["nonce"] = ev.nonce;
    if (!ev.peer.empty()) line["peer"] = ev.peer;
    if (ev.seg >= 0) line["seg"] = ev.seg;
    if (!ev.perm.empty()) line["perm"] = ev.perm;
    out += line.dump();
    out += '\n';
  }

  json summary;
  summary["event"] = "summary";
  summary["t_hex"] = trace.t.to_hex();
  summary["shuffled_t_hex"] = trace.shuffled_t.to_hex();
  json rec = json::array();
  for (const auto& list : trace.recovered) {
    json inner = json::array();
    for (const BitVec& b : list) inner.push_back(b.to_hex());
    rec.push_back(std::move(inner));
  }
  summary["recovered_hex"] = std::move(rec);
  summary["r6_violated"] = trace.r6_violated;
  summary["ambiguous_self_filter"] = trace.ambiguous_self_filter;
  out += summary.dump();
  out += '\n';
  return out;
}

}  // namespace qdibp
