#include "amcsp/bits.hpp"

#include "amcsp/error.hpp"

namespace amcsp {

BitString::BitString(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw ValidationError("BitString: values must be 0 or 1");
    bits_.push_back(static_cast<std::uint8_t>(b));
  }
}

BitString BitString::parse(std::string_view text) {
  BitString out;
  out.bits_.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw ValidationError("BitString: unexpected character '" + std::string(1, c) + "'");
    }
    out.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

BitString BitString::from_index(std::uint64_t index, std::size_t n) {
  BitString out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.bits_[n - 1 - i] = static_cast<std::uint8_t>(i < 64 ? (index >> i) & 1U : 0U);
  }
  return out;
}

BitString BitString::concat(const BitString& a, const BitString& b) {
  BitString out = a;
  out.append(b);
  return out;
}

void BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

BitString BitString::slice(std::size_t begin, std::size_t length) const {
  if (begin + length > bits_.size()) throw ValidationError("BitString::slice out of range");
  BitString out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(begin),
                   bits_.begin() + static_cast<std::ptrdiff_t>(begin + length));
  return out;
}

std::size_t BitString::weight() const {
  std::size_t w = 0;
  for (auto b : bits_) w += b;
  return w;
}

std::uint64_t BitString::to_index() const {
  if (bits_.size() > 64) throw ValidationError("BitString::to_index: longer than 64 bits");
  std::uint64_t x = 0;
  for (auto b : bits_) x = (x << 1) | b;
  return x;
}

std::string BitString::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

BitString& BitString::operator^=(const BitString& other) {
  if (other.size() != size()) throw ValidationError("BitString xor: length mismatch");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] ^= other.bits_[i];
  return *this;
}

}  // namespace amcsp
