#include "qdibp/stats.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace qdibp {

namespace {

// Regularized lower incomplete gamma P(a, x) by series expansion; valid and
// fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 500; ++n) {
    term *= x / (a + n);
    sum += term;
    if (term < sum * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by Lentz continued fraction;
// valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi_square_survival(int df, double x) {
  if (df <= 0) throw std::invalid_argument("chi_square_survival: df must be positive");
  if (x <= 0.0) return 1.0;
  double a = 0.5 * df;
  double half = 0.5 * x;
  if (half < a + 1.0) return 1.0 - gamma_p_series(a, half);
  return gamma_q_cf(a, half);
}

double chi_square_uniform(std::span<const std::uint64_t> counts) {
  if (counts.empty()) throw std::invalid_argument("chi_square_uniform: no cells");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  double expect = static_cast<double>(total) / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) {
    double d = static_cast<double>(c) - expect;
    stat += d * d / expect;
  }
  return stat;
}

double tv_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("tv_distance: size mismatch");
  double l1 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) l1 += std::fabs(a[i] - b[i]);
  return 0.5 * l1;
}

std::vector<double> to_distribution(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  std::vector<double> out(counts.size(), 0.0);
  if (total == 0) return out;
  for (std::size_t i = 0; i < counts.size(); ++i)
    out[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return out;
}

}  // namespace qdibp
