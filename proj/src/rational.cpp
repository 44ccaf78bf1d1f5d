#include "amcsp/rational.hpp"

#include <cctype>

#include "amcsp/error.hpp"

namespace amcsp {

namespace {

BigInt parse_int(const std::string& s) {
  if (s.empty()) throw ValidationError("empty integer in rational '" + s + "'");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw ValidationError("malformed integer '" + s + "'");
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) {
      throw ValidationError("malformed integer '" + s + "'");
    }
  }
  return BigInt(s);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw ValidationError("zero denominator in '" + text + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const bool negative = !whole.empty() && whole[0] == '-';
    BigInt w = (whole.empty() || whole == "-" || whole == "+") ? BigInt(0) : parse_int(whole);
    BigInt f = frac.empty() ? BigInt(0) : parse_int(frac);
    if (frac.find_first_of("+-") != std::string::npos) {
      throw ValidationError("malformed decimal '" + text + "'");
    }
    BigInt num = (negative ? -w : w) * scale + f;
    return Rational(negative ? BigInt(-num) : num, scale);
  }
  return Rational(parse_int(text));
}

std::string to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

BigInt floor_of(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  BigInt f = num / den;
  if (num < 0 && f * den != num) f -= 1;
  return f;
}

BigInt ceil_of(const Rational& q) {
  BigInt f = floor_of(q);
  if (Rational(f) != q) f += 1;
  return f;
}

}  // namespace amcsp
