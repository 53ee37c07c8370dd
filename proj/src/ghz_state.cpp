#include "qdibp/ghz_state.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qdibp {

namespace {

constexpr double kNormTolerance = 1e-12;

// Kahan-compensated sum of squared magnitudes; plain accumulation loses more
// than the 1e-12 norm tolerance at 2^20 entries.
double norm_sq_of(std::span<const std::complex<double>> amps) {
  double sum = 0.0, comp = 0.0;
  for (const auto& a : amps) {
    double term = std::norm(a) - comp;
    double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return sum;
}

// Draws r register outcomes whose XOR equals z: all but `solved` uniform,
// `solved` completed from the constraint.
std::vector<BitVec> assemble_tuple(int p, int r, const BitVec& z, Rng& rng, int solved) {
  if (solved < 0) solved = r - 1;
  if (solved >= r) throw std::out_of_range("sample_measurement: register index out of range");
  std::vector<BitVec> out;
  out.reserve(static_cast<std::size_t>(r));
  BitVec acc = z;
  for (int k = 0; k < r; ++k) {
    if (k == solved) {
      out.push_back(BitVec::zero(static_cast<std::size_t>(p)));  // placeholder
      continue;
    }
    BitVec y = BitVec::random(static_cast<std::size_t>(p), rng);
    acc ^= y;
    out.push_back(std::move(y));
  }
  out[static_cast<std::size_t>(solved)] = acc;
  return out;
}

}  // namespace

void wht(std::span<std::complex<double>> amps) {
  std::size_t n = amps.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("wht: length must be a power of two");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t half = 1; half < n; half <<= 1) {
    for (std::size_t base = 0; base < n; base += half << 1) {
      for (std::size_t i = base; i < base + half; ++i) {
        std::complex<double> a = amps[i];
        std::complex<double> b = amps[i + half];
        amps[i] = (a + b) * inv_sqrt2;
        amps[i + half] = (a - b) * inv_sqrt2;
      }
    }
  }
}

GhzDiagonalState::GhzDiagonalState(int p, int r, int cap) : p_(p), r_(r) {
  if (p < 1) throw std::invalid_argument("GhzDiagonalState: p must be positive");
  if (cap > 30) throw std::invalid_argument("GhzDiagonalState: cap above hard limit 30");
  if (p > cap)
    throw std::invalid_argument("GhzDiagonalState: p=" + std::to_string(p) +
                                " exceeds cap " + std::to_string(cap));
  if (r < 2) throw std::invalid_argument("GhzDiagonalState: need at least 2 registers");
  std::size_t size = std::size_t{1} << p;
  amps_.assign(size, std::complex<double>(std::pow(2.0, -0.5 * p), 0.0));
}

void GhzDiagonalState::apply_phase_oracle(const BitVec& v) {
  if (v.size() != static_cast<std::size_t>(p_))
    throw std::invalid_argument("apply_phase_oracle: mask width mismatch");
  std::uint64_t mask = v.to_u64();
  for (std::size_t x = 0; x < amps_.size(); ++x)
    if (std::popcount(x & mask) & 1) amps_[x] = -amps_[x];
}

double GhzDiagonalState::norm_sq() const { return norm_sq_of(amps_); }

std::vector<double> GhzDiagonalState::phase_distribution() const {
  std::vector<std::complex<double>> hat(amps_.begin(), amps_.end());
  wht(hat);
  std::vector<double> dist(hat.size());
  for (std::size_t z = 0; z < hat.size(); ++z) dist[z] = std::norm(hat[z]);
  return dist;
}

std::vector<double> GhzDiagonalState::tuple_distribution() const {
  int total_bits = p_ * r_;
  if (total_bits > 26)
    throw std::invalid_argument("tuple_distribution: tuple space too large to enumerate");
  std::vector<double> z_dist = phase_distribution();
  // Conditioned on z, tuples are uniform over the 2^((r-1)p) solutions.
  double per_tuple = std::pow(2.0, -static_cast<double>((r_ - 1) * p_));
  std::vector<double> out(std::size_t{1} << total_bits, 0.0);
  std::uint64_t reg_mask = (std::uint64_t{1} << p_) - 1;
  for (std::uint64_t idx = 0; idx < out.size(); ++idx) {
    std::uint64_t z = 0;
    for (int j = 0; j < r_; ++j) z ^= (idx >> (j * p_)) & reg_mask;
    out[idx] = z_dist[z] * per_tuple;
  }
  return out;
}

std::vector<BitVec> GhzDiagonalState::sample_measurement(Rng& rng,
                                                         int solved_register) const {
  std::vector<double> dist = phase_distribution();
  double total = 0.0, comp = 0.0;
  for (double d : dist) {
    double term = d - comp;
    double next = total + term;
    comp = (next - total) - term;
    total = next;
  }
  if (std::fabs(total - 1.0) > kNormTolerance)
    throw std::runtime_error("sample_measurement: state is not normalized");
  double u = rng.unit() * total;
  std::size_t z_index = dist.size() - 1;
  double acc = 0.0;
  for (std::size_t z = 0; z < dist.size(); ++z) {
    acc += dist[z];
    if (u < acc) {
      z_index = z;
      break;
    }
  }
  BitVec z(static_cast<std::size_t>(p_));
  for (int b = 0; b < p_; ++b)
    if ((z_index >> b) & 1) z.set_bit(static_cast<std::size_t>(b), true);
  return assemble_tuple(p_, r_, z, rng, solved_register);
}

GhzPhaseState::GhzPhaseState(int p, int r)
    : p_(p), r_(r), mask_(static_cast<std::size_t>(std::max(p, 1))) {
  if (p < 1) throw std::invalid_argument("GhzPhaseState: p must be positive");
  if (r < 2) throw std::invalid_argument("GhzPhaseState: need at least 2 registers");
}

void GhzPhaseState::apply_phase_oracle(const BitVec& v) {
  if (v.size() != static_cast<std::size_t>(p_))
    throw std::invalid_argument("apply_phase_oracle: mask width mismatch");
  mask_ ^= v;
}

std::vector<double> GhzPhaseState::phase_distribution() const {
  if (p_ > 26)
    throw std::invalid_argument("phase_distribution: too wide to enumerate");
  std::vector<double> dist(std::size_t{1} << p_, 0.0);
  dist[mask_.to_u64()] = 1.0;
  return dist;
}

std::vector<BitVec> GhzPhaseState::sample_measurement(Rng& rng,
                                                      int solved_register) const {
  // WHT of 2^(-p/2)(-1)^(mask.x) is the delta at mask, so z = mask with
  // probability one; the r-1 free registers are drawn as in the dense case.
  // Consume one draw for z to keep the stream layout identical to
  // GhzDiagonalState::sample_measurement.
  (void)rng.unit();
  return assemble_tuple(p_, r_, mask_, rng, solved_register);
}

}  // namespace qdibp
