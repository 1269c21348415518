#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace addcomb {

/// Exact rational used for every combinatorial quantity (doubling, density, decrements).
using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

/// "p/q" (always with a denominator, "3/1" for integers) so reports round-trip losslessly.
std::string to_string(const Rational& r);

/// Accepts "p/q" or a bare integer "p".
Rational parse_rational(std::string_view text);

}  // namespace addcomb
