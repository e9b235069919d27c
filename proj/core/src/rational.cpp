#include "evcrp/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cstdlib>
#include <stdexcept>

namespace evcrp {

namespace {

using boost::multiprecision::cpp_int;

std::int64_t parse_int64(std::string_view text) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc::result_out_of_range)
    throw std::out_of_range("integer literal out of int64 range");
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("bad integer literal");
  return value;
}

Rational from_big(const cpp_int& num, const cpp_int& den) {
  static const cpp_int lo = std::numeric_limits<std::int64_t>::min();
  static const cpp_int hi = std::numeric_limits<std::int64_t>::max();
  const cpp_int g = gcd(num, den);
  const cpp_int n = g == 0 ? num : num / g;
  const cpp_int d = g == 0 ? den : den / g;
  if (n < lo || n > hi || d < lo || d > hi)
    throw std::out_of_range("rational literal out of int64 range");
  return {static_cast<std::int64_t>(n), static_cast<std::int64_t>(d)};
}

Rational parse_decimal_form(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }

  cpp_int mantissa = 0;
  int digits = 0;
  int frac_digits = 0;
  for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++digits)
    mantissa = mantissa * 10 + (text[i] - '0');
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9';
         ++i, ++digits, ++frac_digits)
      mantissa = mantissa * 10 + (text[i] - '0');
  }
  if (digits == 0) throw std::invalid_argument("bad rational literal");

  std::int64_t exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    exponent = parse_int64(text.substr(i + 1));
    i = text.size();
  }
  if (i != text.size()) throw std::invalid_argument("bad rational literal");
  if (exponent > 64 || exponent < -64)
    throw std::out_of_range("rational literal exponent out of range");

  if (negative) mantissa = -mantissa;
  const std::int64_t shift = exponent - frac_digits;
  cpp_int num = mantissa;
  cpp_int den = 1;
  if (shift >= 0)
    num *= pow(cpp_int(10), static_cast<unsigned>(shift));
  else
    den = pow(cpp_int(10), static_cast<unsigned>(-shift));
  return from_big(num, den);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::int64_t num = parse_int64(text.substr(0, slash));
    const std::int64_t den = parse_int64(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return {num, den};
  }
  return parse_decimal_form(text);
}

std::string format_rational(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());

  std::int64_t den = value.denominator();
  int twos = 0;
  int fives = 0;
  while (den % 2 == 0) den /= 2, ++twos;
  while (den % 5 == 0) den /= 5, ++fives;
  if (den != 1)
    return std::to_string(value.numerator()) + "/" +
           std::to_string(value.denominator());

  const int places = std::max(twos, fives);
  cpp_int scaled = cpp_int(value.numerator()) * pow(cpp_int(10), places);
  scaled /= value.denominator();

  std::string digits = cpp_int(abs(scaled)).str();
  if (static_cast<int>(digits.size()) <= places)
    digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
  std::string out = scaled < 0 ? "-" : "";
  out += digits.substr(0, digits.size() - places);
  std::string frac = digits.substr(digits.size() - places);
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  if (!frac.empty()) out += "." + frac;
  return out;
}

}  // namespace evcrp
