#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qdibp/bitvec.hpp"
#include "qdibp/rng.hpp"

namespace qdibp {

/// Full 2^n statevector with little-endian qubit indexing: bit q of a basis
/// index is the state of qubit q. Serves as the brute-force oracle that
/// validates the structured simulator gate by gate on tiny instances.
class DenseState {
 public:
  static constexpr int kDefaultCap = 24;

  /// |0...0> on num_qubits qubits.
  explicit DenseState(int num_qubits, int cap = kDefaultCap);

  int num_qubits() const { return num_qubits_; }
  std::span<const std::complex<double>> amps() const { return amps_; }
  std::span<std::complex<double>> amps() { return amps_; }

  void apply_h(int q);
  void apply_x(int q);
  void apply_cnot(int control, int target);

  /// |y>|x> -> |y ^ (mask . x)>|x>: flips `target` on the basis states whose
  /// input-register bits [input_start, input_start + mask.size()) have odd
  /// overlap with the mask. The target must lie outside the input range.
  void apply_xor_oracle(const BitVec& mask, int input_start, int target);

  double norm_sq() const;

  /// |<this|other>|^2; global phase therefore drops out.
  double fidelity(const DenseState& other) const;

  /// One computational-basis measurement of all qubits.
  std::size_t sample_basis(Rng& rng) const;

 private:
  void check_qubit(int q) const;

  int num_qubits_;
  std::vector<std::complex<double>> amps_;
};

}  // namespace qdibp
