#pragma once

#include <vector>

#include "qdibp/layout.hpp"
#include "qdibp/rng.hpp"

namespace qdibp {

/// A bijection on {0, ..., n-1}.
class Permutation {
 public:
  explicit Permutation(std::vector<int> map);

  static Permutation identity(int n);

  int degree() const { return static_cast<int>(map_.size()); }
  int operator()(int k) const;
  Permutation inverse() const;

  const std::vector<int>& map() const { return map_; }

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> map_;
};

/// Uniform draw from S_n (Fisher-Yates).
Permutation random_permutation(int n, Rng& rng);

/// Rearranges the blocks of every segment: output segment i has block k equal
/// to input block perms[i](k). Segment order is unchanged.
BitVec apply_block_permutations(const BitVec& bits,
                                const std::vector<Permutation>& perms,
                                const Dimensions& dims);

/// Trent's Phase 2 shuffle: one private permutation per segment. Refuses an
/// already-shuffled vector.
AggregatedVector shuffle_aggregated(const AggregatedVector& t,
                                    const std::vector<Permutation>& perms);

/// True iff every segment of `a` holds the same multiset of m-bit blocks as
/// the corresponding segment of `b`.
bool is_block_permutation(const AggregatedVector& a, const AggregatedVector& b);

}  // namespace qdibp
