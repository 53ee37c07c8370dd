#include "qdibp/shuffle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace qdibp {

Permutation::Permutation(std::vector<int> map) : map_(std::move(map)) {
  if (map_.empty()) throw std::invalid_argument("Permutation: degree must be positive");
  std::vector<bool> seen(map_.size(), false);
  for (int v : map_) {
    if (v < 0 || v >= static_cast<int>(map_.size()) || seen[v])
      throw std::invalid_argument("Permutation: map is not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> map(static_cast<std::size_t>(n));
  std::iota(map.begin(), map.end(), 0);
  return Permutation(std::move(map));
}

int Permutation::operator()(int k) const {
  if (k < 0 || k >= degree())
    throw std::out_of_range("Permutation: argument out of range");
  return map_[static_cast<std::size_t>(k)];
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(map_.size());
  for (std::size_t k = 0; k < map_.size(); ++k)
    inv[static_cast<std::size_t>(map_[k])] = static_cast<int>(k);
  return Permutation(std::move(inv));
}

Permutation random_permutation(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("random_permutation: degree must be positive");
  std::vector<int> map(static_cast<std::size_t>(n));
  std::iota(map.begin(), map.end(), 0);
  for (std::size_t i = map.size(); i > 1; --i)
    std::swap(map[i - 1], map[rng.below(i)]);
  return Permutation(std::move(map));
}

BitVec apply_block_permutations(const BitVec& bits,
                                const std::vector<Permutation>& perms,
                                const Dimensions& dims) {
  if (bits.size() != dims.p())
    throw std::invalid_argument("apply_block_permutations: vector is not p bits wide");
  if (perms.size() != static_cast<std::size_t>(dims.n))
    throw std::invalid_argument("apply_block_permutations: need one permutation per segment");
  for (const Permutation& s : perms)
    if (s.degree() != dims.n)
      throw std::invalid_argument("apply_block_permutations: permutation degree mismatch");
  BitVec out(dims.p());
  for (int i = 0; i < dims.n; ++i) {
    BitVec seg = segment(bits, i, dims);
    const Permutation& sigma = perms[static_cast<std::size_t>(i)];
    for (int k = 0; k < dims.n; ++k) {
      std::size_t offset = static_cast<std::size_t>(i) * dims.segment_width() +
                           static_cast<std::size_t>(k) * dims.block_width();
      out.paste(offset, block(seg, sigma(k), dims));
    }
  }
  return out;
}

AggregatedVector shuffle_aggregated(const AggregatedVector& t,
                                    const std::vector<Permutation>& perms) {
  if (t.shuffled)
    throw std::invalid_argument("shuffle_aggregated: vector is already shuffled");
  return AggregatedVector{t.dims, apply_block_permutations(t.bits, perms, t.dims), true};
}

bool is_block_permutation(const AggregatedVector& a, const AggregatedVector& b) {
  if (a.dims != b.dims)
    throw std::invalid_argument("is_block_permutation: dimension mismatch");
  const Dimensions& dims = a.dims;
  for (int i = 0; i < dims.n; ++i) {
    std::vector<BitVec> blocks_a, blocks_b;
    BitVec seg_a = segment(a.bits, i, dims);
    BitVec seg_b = segment(b.bits, i, dims);
    for (int k = 0; k < dims.n; ++k) {
      blocks_a.push_back(block(seg_a, k, dims));
      blocks_b.push_back(block(seg_b, k, dims));
    }
    std::sort(blocks_a.begin(), blocks_a.end());
    std::sort(blocks_b.begin(), blocks_b.end());
    if (blocks_a != blocks_b) return false;
  }
  return true;
}

}  // namespace qdibp
