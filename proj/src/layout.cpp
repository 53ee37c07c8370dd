#include "qdibp/layout.hpp"

#include <stdexcept>
#include <string>

namespace qdibp {

namespace {

void check_broker_index(int i, const Dimensions& dims) {
  if (i < 0 || i >= dims.n)
    throw std::out_of_range("layout: broker index " + std::to_string(i) +
                            " out of range for n=" + std::to_string(dims.n));
}

void check_secret_width(const BitVec& s, const Dimensions& dims) {
  if (s.size() != dims.block_width())
    throw std::invalid_argument("layout: secret width " + std::to_string(s.size()) +
                                " does not match m=" + std::to_string(dims.m));
}

}  // namespace

Dimensions::Dimensions(int brokers, int bits_per_secret)
    : n(brokers), m(bits_per_secret) {
  if (n < 2) throw std::invalid_argument("Dimensions: need at least 2 brokers");
  if (m < 1) throw std::invalid_argument("Dimensions: secrets need at least 1 bit");
}

BitVec primary_segment(int i, const BitVec& secret, const Dimensions& dims) {
  check_broker_index(i, dims);
  check_secret_width(secret, dims);
  BitVec seg(dims.segment_width());
  for (int k = 0; k < dims.n; ++k)
    if (k != i) seg.paste(static_cast<std::size_t>(k) * dims.m, secret);
  return seg;
}

BitVec auxiliary_segment(int i, const BitVec& secret, const Dimensions& dims) {
  check_broker_index(i, dims);
  check_secret_width(secret, dims);
  BitVec seg(dims.segment_width());
  seg.paste(static_cast<std::size_t>(i) * dims.m, secret);
  return seg;
}

ExtendedSecret build_extended(int i, const BitVec& secret, const Dimensions& dims) {
  check_broker_index(i, dims);
  check_secret_width(secret, dims);
  BitVec bits(dims.p());
  BitVec primary = primary_segment(i, secret, dims);
  BitVec auxiliary = auxiliary_segment(i, secret, dims);
  for (int j = 0; j < dims.n; ++j)
    bits.paste(static_cast<std::size_t>(j) * dims.segment_width(),
               j == i ? primary : auxiliary);
  return ExtendedSecret{dims, i, bits};
}

AggregatedVector aggregate(const std::vector<ExtendedSecret>& extended,
                           const Dimensions& dims) {
  if (extended.size() != static_cast<std::size_t>(dims.n))
    throw std::invalid_argument("aggregate: expected one extended vector per broker");
  std::vector<bool> seen(dims.n, false);
  BitVec bits(dims.p());
  for (const ExtendedSecret& e : extended) {
    if (e.dims != dims || e.bits.size() != dims.p())
      throw std::invalid_argument("aggregate: dimension mismatch");
    check_broker_index(e.owner, dims);
    if (seen[e.owner])
      throw std::invalid_argument("aggregate: duplicate owner index " +
                                  std::to_string(e.owner));
    seen[e.owner] = true;
    bits ^= e.bits;
  }
  return AggregatedVector{dims, bits, false};
}

AggregatedVector expected_blocks(const std::vector<BitVec>& secrets,
                                 const Dimensions& dims) {
  if (secrets.size() != static_cast<std::size_t>(dims.n))
    throw std::invalid_argument("expected_blocks: need one secret per broker");
  for (const BitVec& s : secrets) check_secret_width(s, dims);
  BitVec bits(dims.p());
  for (int i = 0; i < dims.n; ++i) {
    for (int j = 0; j < dims.n; ++j) {
      if (i == j) continue;  // diagonal blocks stay zero
      std::size_t offset =
          static_cast<std::size_t>(i) * dims.segment_width() +
          static_cast<std::size_t>(j) * dims.block_width();
      bits.paste(offset, secrets[static_cast<std::size_t>(i)] ^
                             secrets[static_cast<std::size_t>(j)]);
    }
  }
  return AggregatedVector{dims, bits, false};
}

BitVec segment(const BitVec& v, int j, const Dimensions& dims) {
  check_broker_index(j, dims);
  if (v.size() != dims.p())
    throw std::invalid_argument("segment: vector is not p bits wide");
  return v.slice(static_cast<std::size_t>(j) * dims.segment_width(),
                 dims.segment_width());
}

BitVec block(const BitVec& seg, int k, const Dimensions& dims) {
  check_broker_index(k, dims);
  if (seg.size() != dims.segment_width())
    throw std::invalid_argument("block: segment is not n*m bits wide");
  return seg.slice(static_cast<std::size_t>(k) * dims.block_width(),
                   dims.block_width());
}

}  // namespace qdibp
