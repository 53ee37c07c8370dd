#pragma once

#include <cstddef>
#include <vector>

#include "qdibp/bitvec.hpp"

namespace qdibp {

/// Protocol dimensions: n brokers exchanging m-bit secrets. Every register
/// and classical vector in the protocol is p = n^2*m bits wide, organized as
/// n segments of n*m bits, each split into n blocks of m bits, all
/// enumerated right to left (index 0 = least significant).
struct Dimensions {
  int n = 0;
  int m = 0;

  Dimensions(int brokers, int bits_per_secret);

  std::size_t p() const { return static_cast<std::size_t>(n) * n * m; }
  std::size_t segment_width() const { return static_cast<std::size_t>(n) * m; }
  std::size_t block_width() const { return static_cast<std::size_t>(m); }

  bool operator==(const Dimensions&) const = default;
};

/// The n^2*m-bit encoding a broker feeds into its phase oracle: the owner's
/// segment carries the primary pattern, every other segment the auxiliary
/// pattern.
struct ExtendedSecret {
  Dimensions dims;
  int owner = 0;  // broker index in [0, n)
  BitVec bits;
};

/// The XOR of all extended secret vectors (t), or its block-shuffled form.
/// Block (i, j) holds s_i ^ s_j; diagonal blocks are zero.
struct AggregatedVector {
  Dimensions dims;
  BitVec bits;
  bool shuffled = false;
};

/// Segment with block `i` zeroed and the secret everywhere else.
BitVec primary_segment(int i, const BitVec& secret, const Dimensions& dims);

/// Segment with the secret in block `i` and zeros everywhere else.
BitVec auxiliary_segment(int i, const BitVec& secret, const Dimensions& dims);

/// Assembles the full extended secret vector: primary pattern at the owner's
/// segment, auxiliary pattern at every other segment.
ExtendedSecret build_extended(int i, const BitVec& secret, const Dimensions& dims);

/// XOR of all n extended vectors. Requires exactly one vector per owner
/// index; order of the list does not matter.
AggregatedVector aggregate(const std::vector<ExtendedSecret>& extended,
                           const Dimensions& dims);

/// Builds t directly from its block structure, block (i,j) = s_i ^ s_j with a
/// zero diagonal. Independent of `aggregate`; serves as its test oracle.
AggregatedVector expected_blocks(const std::vector<BitVec>& secrets,
                                 const Dimensions& dims);

/// Segment j of a p-bit vector (aggregated vector or measured register).
BitVec segment(const BitVec& v, int j, const Dimensions& dims);

/// Block k of an (n*m)-bit segment.
BitVec block(const BitVec& seg, int k, const Dimensions& dims);

}  // namespace qdibp
