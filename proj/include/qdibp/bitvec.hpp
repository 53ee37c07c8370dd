#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qdibp/rng.hpp"

namespace qdibp {

/// Fixed-length bit vector over GF(2). Bit 0 is the least significant
/// (rightmost) position, matching the right-to-left enumeration used for
/// registers, segments and blocks throughout the protocol. Length is part of
/// the value: operations on mismatched lengths throw rather than zero-extend.
///
/// Values are immutable in spirit: every operation returns a fresh vector,
/// and the few mutators (set_bit, paste) are used only during construction.
class BitVec {
 public:
  /// Zero vector of `len` bits. Throws std::invalid_argument for len == 0.
  explicit BitVec(std::size_t len);

  static BitVec zero(std::size_t len) { return BitVec(len); }

  /// Each bit drawn independently from the stream.
  static BitVec random(std::size_t len, Rng& rng);

  /// Parses a binary string, most-significant bit leftmost. Whitespace and
  /// group separators are ignored; after removing them the text must contain
  /// exactly `len` characters from {0,1}.
  static BitVec parse(std::string_view text, std::size_t len);

  /// Parses lowercase/uppercase hex, most-significant digit leftmost; the
  /// length is carried separately and must cover every nonzero bit.
  static BitVec from_hex(std::string_view hex, std::size_t len);

  /// Low `len` bits of `value`, for len <= 64.
  static BitVec from_u64(std::uint64_t value, std::size_t len);

  std::size_t size() const { return len_; }

  bool bit(std::size_t i) const;
  void set_bit(std::size_t i, bool v);

  /// Bits [start, start + count) as a new vector.
  BitVec slice(std::size_t start, std::size_t count) const;

  /// Copies `src` into bits [start, start + src.size()).
  void paste(std::size_t start, const BitVec& src);

  bool is_zero() const;

  /// Value as an unsigned integer; requires size() <= 64.
  std::uint64_t to_u64() const;

  /// MSB-left binary rendering. When group > 0 a space is inserted every
  /// `group` bits counted from the right, e.g. "010 101 010".
  std::string format(std::size_t group = 0) const;

  /// Lowercase hex, MSB-left, ceil(len/4) digits; length carried separately.
  std::string to_hex() const;

  friend BitVec operator^(const BitVec& a, const BitVec& b);
  BitVec& operator^=(const BitVec& b);

  bool operator==(const BitVec&) const = default;
  std::strong_ordering operator<=>(const BitVec&) const = default;

  friend int dot(const BitVec& a, const BitVec& b);

 private:
  void check_index(std::size_t i) const;

  std::size_t len_;
  std::vector<std::uint64_t> words_;  // bit i lives in words_[i/64] bit i%64
};

/// Bitwise XOR; lengths must agree.
inline BitVec xor_vec(const BitVec& a, const BitVec& b) { return a ^ b; }

/// Inner product mod 2: parity of the bitwise AND. Lengths must agree.
int dot(const BitVec& a, const BitVec& b);

}  // namespace qdibp
