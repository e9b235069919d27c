#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace evcrp {

// Exact arithmetic for prices and costs. Keeping costs rational means
// comparisons and ties are exact; no floating-point epsilon anywhere in
// the cost path.
using Rational = boost::rational<std::int64_t>;

// Parses a decimal literal ("31", "-2", "4.5", "1.25e-3") or a quotient
// ("9/2") into an exact rational. Throws std::invalid_argument on anything
// else, std::out_of_range when int64 arithmetic would overflow.
Rational parse_rational(std::string_view text);

// Exact, locale-independent rendering. Values with a terminating decimal
// expansion print as decimals ("4.5", "-2", "31"); everything else prints
// as "p/q".
std::string format_rational(const Rational& value);

}  // namespace evcrp
