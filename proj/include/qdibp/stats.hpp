#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qdibp {

/// Upper-tail probability P(X >= x) for a chi-square variable with `df`
/// degrees of freedom, via the regularized incomplete gamma function.
double chi_square_survival(int df, double x);

/// Chi-square statistic of observed counts against a uniform distribution
/// over counts.size() cells.
double chi_square_uniform(std::span<const std::uint64_t> counts);

/// Total-variation distance between two distributions on the same index set:
/// half the L1 distance. Sizes must agree.
double tv_distance(std::span<const double> a, std::span<const double> b);

/// Normalizes counts to an empirical distribution.
std::vector<double> to_distribution(std::span<const std::uint64_t> counts);

}  // namespace qdibp
