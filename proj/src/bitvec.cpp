#include "qdibp/bitvec.hpp"

#include <bit>
#include <cctype>
#include <stdexcept>

namespace qdibp {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t words_for(std::size_t len) { return (len + kWordBits - 1) / kWordBits; }

// Mask selecting the valid bits of the final word.
std::uint64_t tail_mask(std::size_t len) {
  std::size_t rem = len % kWordBits;
  return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

}  // namespace

BitVec::BitVec(std::size_t len) : len_(len), words_(words_for(len), 0) {
  if (len == 0) throw std::invalid_argument("BitVec: length must be positive");
}

BitVec BitVec::random(std::size_t len, Rng& rng) {
  BitVec v(len);
  for (std::size_t w = 0; w < v.words_.size(); ++w) v.words_[w] = rng.next_u64();
  v.words_.back() &= tail_mask(len);
  return v;
}

BitVec BitVec::parse(std::string_view text, std::size_t len) {
  std::string digits;
  digits.reserve(text.size());
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '_') continue;
    if (c != '0' && c != '1')
      throw std::invalid_argument("BitVec::parse: invalid character in bit string");
    digits.push_back(c);
  }
  if (digits.size() != len)
    throw std::invalid_argument("BitVec::parse: expected " + std::to_string(len) +
                                " bits, got " + std::to_string(digits.size()));
  BitVec v(len);
  for (std::size_t i = 0; i < len; ++i)
    if (digits[len - 1 - i] == '1') v.set_bit(i, true);
  return v;
}

BitVec BitVec::from_hex(std::string_view hex, std::size_t len) {
  BitVec v(len);
  std::size_t nibble = 0;  // counted from the least significant digit
  for (std::size_t idx = hex.size(); idx-- > 0; ++nibble) {
    char c = hex[idx];
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else throw std::invalid_argument("BitVec::from_hex: invalid hex digit");
    for (int b = 0; b < 4; ++b) {
      if (!(d & (1 << b))) continue;
      std::size_t pos = nibble * 4 + static_cast<std::size_t>(b);
      if (pos >= len)
        throw std::invalid_argument("BitVec::from_hex: value wider than declared length");
      v.set_bit(pos, true);
    }
  }
  return v;
}

BitVec BitVec::from_u64(std::uint64_t value, std::size_t len) {
  if (len > 64) throw std::invalid_argument("BitVec::from_u64: len > 64");
  BitVec v(len);
  if (len < 64 && (value >> len) != 0)
    throw std::invalid_argument("BitVec::from_u64: value wider than length");
  v.words_[0] = value;
  return v;
}

bool BitVec::bit(std::size_t i) const {
  check_index(i);
  return (words_[i / kWordBits] >> (i % kWordBits)) & 1;
}

void BitVec::set_bit(std::size_t i, bool v) {
  check_index(i);
  std::uint64_t m = std::uint64_t{1} << (i % kWordBits);
  if (v) words_[i / kWordBits] |= m;
  else words_[i / kWordBits] &= ~m;
}

BitVec BitVec::slice(std::size_t start, std::size_t count) const {
  if (count == 0 || start + count > len_)
    throw std::out_of_range("BitVec::slice: range out of bounds");
  BitVec out(count);
  for (std::size_t i = 0; i < count; ++i)
    if (bit(start + i)) out.set_bit(i, true);
  return out;
}

void BitVec::paste(std::size_t start, const BitVec& src) {
  if (start + src.len_ > len_)
    throw std::out_of_range("BitVec::paste: range out of bounds");
  for (std::size_t i = 0; i < src.len_; ++i) set_bit(start + i, src.bit(i));
}

bool BitVec::is_zero() const {
  for (std::uint64_t w : words_)
    if (w != 0) return false;
  return true;
}

std::uint64_t BitVec::to_u64() const {
  if (len_ > 64) throw std::invalid_argument("BitVec::to_u64: vector wider than 64 bits");
  return words_[0];
}

std::string BitVec::format(std::size_t group) const {
  std::string out;
  for (std::size_t i = len_; i-- > 0;) {
    out.push_back(bit(i) ? '1' : '0');
    if (group != 0 && i != 0 && i % group == 0) out.push_back(' ');
  }
  return out;
}

std::string BitVec::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::size_t n_digits = (len_ + 3) / 4;
  std::string out;
  out.reserve(n_digits);
  for (std::size_t d = n_digits; d-- > 0;) {
    int v = 0;
    for (int b = 3; b >= 0; --b) {
      std::size_t pos = d * 4 + static_cast<std::size_t>(b);
      v <<= 1;
      if (pos < len_ && bit(pos)) v |= 1;
    }
    out.push_back(digits[v]);
  }
  return out;
}

BitVec operator^(const BitVec& a, const BitVec& b) {
  BitVec out = a;
  out ^= b;
  return out;
}

BitVec& BitVec::operator^=(const BitVec& b) {
  if (len_ != b.len_)
    throw std::invalid_argument("BitVec: XOR of vectors with different lengths");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= b.words_[w];
  return *this;
}

int dot(const BitVec& a, const BitVec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: vectors with different lengths");
  // Parity of the AND, folded word by word.
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < a.words_.size(); ++w) acc ^= a.words_[w] & b.words_[w];
  return std::popcount(acc) & 1;
}

void BitVec::check_index(std::size_t i) const {
  if (i >= len_) throw std::out_of_range("BitVec: bit index out of range");
}

}  // namespace qdibp
