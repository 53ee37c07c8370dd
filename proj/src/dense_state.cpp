#include "qdibp/dense_state.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qdibp {

DenseState::DenseState(int num_qubits, int cap) : num_qubits_(num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("DenseState: need at least one qubit");
  if (cap > 28) throw std::invalid_argument("DenseState: cap above hard limit 28");
  if (num_qubits > cap)
    throw std::invalid_argument("DenseState: " + std::to_string(num_qubits) +
                                " qubits exceed cap " + std::to_string(cap));
  amps_.assign(std::size_t{1} << num_qubits, {0.0, 0.0});
  amps_[0] = {1.0, 0.0};
}

void DenseState::apply_h(int q) {
  check_qubit(q);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    if (idx & bit) continue;
    std::complex<double> a0 = amps_[idx];
    std::complex<double> a1 = amps_[idx | bit];
    amps_[idx] = (a0 + a1) * inv_sqrt2;
    amps_[idx | bit] = (a0 - a1) * inv_sqrt2;
  }
}

void DenseState::apply_x(int q) {
  check_qubit(q);
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t idx = 0; idx < amps_.size(); ++idx)
    if (!(idx & bit)) std::swap(amps_[idx], amps_[idx | bit]);
}

void DenseState::apply_cnot(int control, int target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target)
    throw std::invalid_argument("apply_cnot: control and target collide");
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t idx = 0; idx < amps_.size(); ++idx)
    if ((idx & cbit) && !(idx & tbit)) std::swap(amps_[idx], amps_[idx | tbit]);
}

void DenseState::apply_xor_oracle(const BitVec& mask, int input_start, int target) {
  check_qubit(target);
  check_qubit(input_start);
  int width = static_cast<int>(mask.size());
  if (input_start + width > num_qubits_)
    throw std::out_of_range("apply_xor_oracle: input register out of range");
  if (target >= input_start && target < input_start + width)
    throw std::invalid_argument("apply_xor_oracle: target inside input register");
  const std::uint64_t m = mask.to_u64();
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    if (idx & tbit) continue;
    std::uint64_t x = (idx >> input_start) & ((std::uint64_t{1} << width) - 1);
    if (std::popcount(x & m) & 1) std::swap(amps_[idx], amps_[idx | tbit]);
  }
}

double DenseState::norm_sq() const {
  double sum = 0.0, comp = 0.0;
  for (const auto& a : amps_) {
    double term = std::norm(a) - comp;
    double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return sum;
}

double DenseState::fidelity(const DenseState& other) const {
  if (num_qubits_ != other.num_qubits_)
    throw std::invalid_argument("fidelity: qubit count mismatch");
  std::complex<double> inner{0.0, 0.0};
  for (std::size_t idx = 0; idx < amps_.size(); ++idx)
    inner += std::conj(amps_[idx]) * other.amps_[idx];
  return std::norm(inner);
}

std::size_t DenseState::sample_basis(Rng& rng) const {
  double u = rng.unit() * norm_sq();
  double acc = 0.0;
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    acc += std::norm(amps_[idx]);
    if (u < acc) return idx;
  }
  return amps_.size() - 1;
}

void DenseState::check_qubit(int q) const {
  if (q < 0 || q >= num_qubits_)
    throw std::out_of_range("DenseState: qubit index out of range");
}

}  // namespace qdibp
