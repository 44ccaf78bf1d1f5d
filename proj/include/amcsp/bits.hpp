#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace amcsp {

// A fixed-length string over {0,1}. Position 0 is the leftmost character of
// the textual form, and lexicographic order on strings coincides with
// numeric order on the MSB-first index (see from_index / to_index).
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t n, bool value = false) : bits_(n, value ? 1 : 0) {}
  BitString(std::initializer_list<int> bits);

  static BitString parse(std::string_view text);
  static BitString from_index(std::uint64_t index, std::size_t n);
  static BitString concat(const BitString& a, const BitString& b);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }

  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }
  void flip(std::size_t i) { bits_[i] ^= 1; }
  void push_back(bool value) { bits_.push_back(value ? 1 : 0); }
  void append(const BitString& other);

  BitString slice(std::size_t begin, std::size_t length) const;
  std::size_t weight() const;
  std::uint64_t to_index() const;
  std::string to_string() const;

  BitString& operator^=(const BitString& other);
  friend BitString operator^(BitString a, const BitString& b) { return a ^= b; }

  const std::vector<std::uint8_t>& raw() const { return bits_; }

  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace amcsp
