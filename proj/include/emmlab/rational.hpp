#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string_view>

namespace emmlab {

// Arbitrary-precision rational. Constructing from a double is exact.
using Rational = boost::multiprecision::cpp_rational;

// Parses "p/q", "p", or a decimal literal ("0.25") into an exact rational.
// Throws ValidationError on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

}  // namespace emmlab
