#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdibp/bitvec.hpp"
#include "qdibp/dense_state.hpp"
#include "qdibp/layout.hpp"
#include "qdibp/rng.hpp"

#include "json.hpp"

namespace qdibp {

struct Gate {
  enum class Kind { H, X, Cnot, XorOracle, Measure };

  Kind kind;
  // H/X: {q}. Cnot: {control, target}. XorOracle: the input-register qubits
  // in ascending position order followed by the target. Measure: one
  // register's qubits, least significant first.
  std::vector<int> qubits;
  std::optional<BitVec> mask;  // XorOracle only
};

struct GateList {
  int num_qubits = 0;
  std::vector<Gate> gates;
};

/// H on qubit 0 followed by a doubling CNOT fan-out; applied to |0...0> this
/// yields (|0...0> + |1...1>)/sqrt(2) in ceil(log2 r) CNOT layers.
GateList ghz_prep_gates(int r);

/// Longest chain of CNOTs sharing qubits; single-qubit gates don't count.
int cnot_depth(const GateList& gl);

nlohmann::json gate_list_to_json(const GateList& gl);

/// Full broker-side encoding circuit: per-position GHZ preparation across all
/// n+1 registers, one |-> target per broker, each broker's XOR oracle on its
/// own register, a global Hadamard layer on every register, and measurement
/// markers. Register j occupies qubits [j*p, (j+1)*p); brokers are registers
/// 0..n-1, the aggregator register n; broker i's target is qubit (n+1)*p + i.
GateList build_phase1_circuit(const Dimensions& dims,
                              const std::vector<ExtendedSecret>& extended,
                              int cap = DenseState::kDefaultCap);

/// Dissemination circuit: same layout with a single oracle on register n
/// carrying the shuffled aggregated vector, and one target qubit (n+1)*p.
GateList build_phase3_circuit(const Dimensions& dims, const BitVec& shuffled_t,
                              int cap = DenseState::kDefaultCap);

/// Applies every gate (Measure markers are skipped) starting from |0...0>.
DenseState run_gate_list(const GateList& gl, int cap = DenseState::kDefaultCap);

/// Qubit groups of the Measure markers, in marker order.
std::vector<std::vector<int>> measured_registers(const GateList& gl);

/// Exact outcome distribution over the measured registers, marginalized over
/// every unmeasured qubit. Outcome index = sum_j y_j << (j*p) with y_j the
/// value of marker group j.
std::vector<double> register_distribution(const DenseState& state,
                                          const std::vector<std::vector<int>>& groups);

/// Draws outcome indices from a fixed distribution in O(log n) per draw.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::vector<double> weights);
  std::size_t sample(Rng& rng) const;

 private:
  std::vector<double> cumulative_;
};

/// Splits a sampled outcome index back into per-register vectors of width p.
std::vector<BitVec> split_outcome(std::size_t index, int registers, int p);

}  // namespace qdibp
