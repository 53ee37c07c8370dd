#include "qdibp/circuits.hpp"

#include <algorithm>
#include <stdexcept>

namespace qdibp {

namespace {

const char* kind_name(Gate::Kind k) {
  switch (k) {
    case Gate::Kind::H: return "h";
    case Gate::Kind::X: return "x";
    case Gate::Kind::Cnot: return "cnot";
    case Gate::Kind::XorOracle: return "xor_oracle";
    case Gate::Kind::Measure: return "measure";
  }
  return "?";
}

// Shared skeleton of both phase circuits: GHZ preparation for every qubit
// position, |-> targets, oracles, the global Hadamard layer, and measurement
// markers. Oracles are given as (owner register, mask, target qubit).
GateList build_phase_circuit(const Dimensions& dims,
                             const std::vector<std::tuple<int, BitVec, int>>& oracles,
                             int num_targets, int cap) {
  const int p = static_cast<int>(dims.p());
  const int r = dims.n + 1;
  GateList gl;
  gl.num_qubits = r * p + num_targets;
  if (gl.num_qubits > cap)
    throw std::invalid_argument("phase circuit needs " + std::to_string(gl.num_qubits) +
                                " qubits, above cap " + std::to_string(cap));

  // r-uniform scheme: the qubits at position k of every register form one
  // GHZ_r tuple.
  GateList tree = ghz_prep_gates(r);
  for (int k = 0; k < p; ++k) {
    for (const Gate& g : tree.gates) {
      Gate mapped = g;
      for (int& q : mapped.qubits) q = q * p + k;
      gl.gates.push_back(std::move(mapped));
    }
  }

  for (int t = 0; t < num_targets; ++t) {
    int q = r * p + t;
    gl.gates.push_back({Gate::Kind::X, {q}, std::nullopt});
    gl.gates.push_back({Gate::Kind::H, {q}, std::nullopt});
  }

  for (const auto& [reg, mask, target] : oracles) {
    Gate g{Gate::Kind::XorOracle, {}, mask};
    for (int k = 0; k < p; ++k) g.qubits.push_back(reg * p + k);
    g.qubits.push_back(target);
    gl.gates.push_back(std::move(g));
  }

  for (int j = 0; j < r; ++j)
    for (int k = 0; k < p; ++k)
      gl.gates.push_back({Gate::Kind::H, {j * p + k}, std::nullopt});

  for (int j = 0; j < r; ++j) {
    Gate g{Gate::Kind::Measure, {}, std::nullopt};
    for (int k = 0; k < p; ++k) g.qubits.push_back(j * p + k);
    gl.gates.push_back(std::move(g));
  }
  return gl;
}

}  // namespace

GateList ghz_prep_gates(int r) {
  if (r < 2) throw std::invalid_argument("ghz_prep_gates: need at least 2 qubits");
  GateList gl;
  gl.num_qubits = r;
  gl.gates.push_back({Gate::Kind::H, {0}, std::nullopt});
  for (int step = 1; step < r; step <<= 1)
    for (int i = 0; i < step && i + step < r; ++i)
      gl.gates.push_back({Gate::Kind::Cnot, {i, i + step}, std::nullopt});
  return gl;
}

int cnot_depth(const GateList& gl) {
  std::vector<int> depth(static_cast<std::size_t>(gl.num_qubits), 0);
  int max_depth = 0;
  for (const Gate& g : gl.gates) {
    if (g.kind != Gate::Kind::Cnot) continue;
    int d = 1 + std::max(depth[static_cast<std::size_t>(g.qubits[0])],
                         depth[static_cast<std::size_t>(g.qubits[1])]);
    depth[static_cast<std::size_t>(g.qubits[0])] = d;
    depth[static_cast<std::size_t>(g.qubits[1])] = d;
    max_depth = std::max(max_depth, d);
  }
  return max_depth;
}

nlohmann::json gate_list_to_json(const GateList& gl) {
  nlohmann::json out = nlohmann::json::array();
  for (const Gate& g : gl.gates) {
    nlohmann::json item;
    item["gate"] = kind_name(g.kind);
    item["qubits"] = g.qubits;
    if (g.mask) item["mask_hex"] = g.mask->to_hex();
    out.push_back(std::move(item));
  }
  return out;
}

GateList build_phase1_circuit(const Dimensions& dims,
                              const std::vector<ExtendedSecret>& extended, int cap) {
  if (extended.size() != static_cast<std::size_t>(dims.n))
    throw std::invalid_argument("build_phase1_circuit: one extended vector per broker");
  const int p = static_cast<int>(dims.p());
  std::vector<std::tuple<int, BitVec, int>> oracles;
  std::vector<bool> seen(static_cast<std::size_t>(dims.n), false);
  for (const ExtendedSecret& e : extended) {
    if (e.dims != dims || e.bits.size() != dims.p())
      throw std::invalid_argument("build_phase1_circuit: dimension mismatch");
    if (e.owner < 0 || e.owner >= dims.n || seen[static_cast<std::size_t>(e.owner)])
      throw std::invalid_argument("build_phase1_circuit: bad owner set");
    seen[static_cast<std::size_t>(e.owner)] = true;
    oracles.emplace_back(e.owner, e.bits, (dims.n + 1) * p + e.owner);
  }
  std::sort(oracles.begin(), oracles.end(),
            [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
  return build_phase_circuit(dims, oracles, dims.n, cap);
}

GateList build_phase3_circuit(const Dimensions& dims, const BitVec& shuffled_t, int cap) {
  if (shuffled_t.size() != dims.p())
    throw std::invalid_argument("build_phase3_circuit: vector is not p bits wide");
  const int p = static_cast<int>(dims.p());
  std::vector<std::tuple<int, BitVec, int>> oracles;
  oracles.emplace_back(dims.n, shuffled_t, (dims.n + 1) * p);
  return build_phase_circuit(dims, oracles, 1, cap);
}

DenseState run_gate_list(const GateList& gl, int cap) {
  DenseState state(gl.num_qubits, cap);
  for (const Gate& g : gl.gates) {
    switch (g.kind) {
      case Gate::Kind::H:
        state.apply_h(g.qubits[0]);
        break;
      case Gate::Kind::X:
        state.apply_x(g.qubits[0]);
        break;
      case Gate::Kind::Cnot:
        state.apply_cnot(g.qubits[0], g.qubits[1]);
        break;
      case Gate::Kind::XorOracle: {
        // Input qubits are contiguous by construction; the target is last.
        int input_start = g.qubits.front();
        int target = g.qubits.back();
        state.apply_xor_oracle(*g.mask, input_start, target);
        break;
      }
      case Gate::Kind::Measure:
        break;
    }
  }
  return state;
}

std::vector<std::vector<int>> measured_registers(const GateList& gl) {
  std::vector<std::vector<int>> groups;
  for (const Gate& g : gl.gates)
    if (g.kind == Gate::Kind::Measure) groups.push_back(g.qubits);
  return groups;
}

std::vector<double> register_distribution(const DenseState& state,
                                          const std::vector<std::vector<int>>& groups) {
  std::size_t total_bits = 0;
  for (const auto& g : groups) total_bits += g.size();
  if (total_bits > 26)
    throw std::invalid_argument("register_distribution: outcome space too large");
  std::vector<double> dist(std::size_t{1} << total_bits, 0.0);
  auto amps = state.amps();
  for (std::size_t idx = 0; idx < amps.size(); ++idx) {
    double w = std::norm(amps[idx]);
    if (w == 0.0) continue;
    std::size_t outcome = 0;
    std::size_t shift = 0;
    for (const auto& g : groups) {
      for (std::size_t b = 0; b < g.size(); ++b)
        outcome |= ((idx >> g[b]) & 1u) << (shift + b);
      shift += g.size();
    }
    dist[outcome] += w;
  }
  return dist;
}

DiscreteSampler::DiscreteSampler(std::vector<double> weights)
    : cumulative_(std::move(weights)) {
  if (cumulative_.empty())
    throw std::invalid_argument("DiscreteSampler: empty distribution");
  double acc = 0.0;
  for (double& w : cumulative_) {
    acc += w;
    w = acc;
  }
  if (acc <= 0.0) throw std::invalid_argument("DiscreteSampler: zero total weight");
}

std::size_t DiscreteSampler::sample(Rng& rng) const {
  double u = rng.unit() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

std::vector<BitVec> split_outcome(std::size_t index, int registers, int p) {
  std::vector<BitVec> out;
  out.reserve(static_cast<std::size_t>(registers));
  for (int j = 0; j < registers; ++j) {
    BitVec v(static_cast<std::size_t>(p));
    for (int b = 0; b < p; ++b)
      if ((index >> (j * p + b)) & 1) v.set_bit(static_cast<std::size_t>(b), true);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace qdibp
