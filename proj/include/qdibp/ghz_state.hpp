#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qdibp/bitvec.hpp"
#include "qdibp/rng.hpp"

namespace qdibp {

/// In-place fast Walsh-Hadamard transform with 2^(-k/2) normalization for
/// length 2^k. Self-inverse. Throws for lengths that are not a power of two.
void wht(std::span<std::complex<double>> amps);

/// The protocol's entangled resource: r registers of p qubits whose joint
/// state is supported on the diagonal basis terms |x>|x>...|x>, so 2^p
/// amplitudes suffice. amps[x] multiplies the term with every register
/// holding x.
///
/// Measurement simulates H^(x)p on every register followed by a
/// computational-basis readout: the Walsh-Hadamard transform of the
/// amplitudes gives the distribution of the XOR of all register outcomes,
/// and conditioned on that XOR the tuple is uniform. That rule is derived
/// from the transform alone, so sampling makes no assumption about which
/// phase vector the oracles encoded.
class GhzDiagonalState {
 public:
  static constexpr int kDefaultCap = 20;

  GhzDiagonalState(int p, int r, int cap = kDefaultCap);

  int width() const { return p_; }
  int registers() const { return r_; }
  std::span<const std::complex<double>> amps() const { return amps_; }

  /// Multiplies amps[x] by (-1)^(v . x). Width of v must equal p.
  void apply_phase_oracle(const BitVec& v);

  double norm_sq() const;

  /// Exact distribution of z = XOR of all measured registers: |WHT(amps)|^2.
  std::vector<double> phase_distribution() const;

  /// Exact joint distribution over full register tuples, indexed by
  /// sum_j y_j << (j*p). Only for r*p small enough to enumerate.
  std::vector<double> tuple_distribution() const;

  /// One measurement of all r registers, returned in register order.
  /// Register `solved_register` (default the last) is completed from the
  /// sampled XOR value; the rest are drawn uniformly.
  std::vector<BitVec> sample_measurement(Rng& rng, int solved_register = -1) const;

 private:
  int p_;
  int r_;
  std::vector<std::complex<double>> amps_;
};

/// Closed form of the same family: amps[x] = 2^(-p/2) * (-1)^(mask . x).
/// Every state reachable from the uniform initial state through phase
/// oracles has this shape, which lets the protocol run at widths where 2^p
/// amplitudes do not fit in memory. Equivalence with GhzDiagonalState is
/// pinned by exact-distribution tests at small p.
class GhzPhaseState {
 public:
  GhzPhaseState(int p, int r);

  int width() const { return p_; }
  int registers() const { return r_; }
  const BitVec& mask() const { return mask_; }

  void apply_phase_oracle(const BitVec& v);

  /// Delta distribution at the accumulated mask. Only for small p.
  std::vector<double> phase_distribution() const;

  std::vector<BitVec> sample_measurement(Rng& rng, int solved_register = -1) const;

 private:
  int p_;
  int r_;
  BitVec mask_;
};

}  // namespace qdibp
