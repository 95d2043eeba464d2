#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace cuspflow {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Natural log of x > 0, valid far beyond double range.
double log_big(const BigInt& x);

/// Natural log of r > 0.
double log_rat(const BigRat& r);

/// floor(sqrt(x)) for x >= 0.
BigInt isqrt_floor(const BigInt& x);

/// Largest r with r^k <= x (x >= 0, k >= 1).
BigInt iroot_floor(const BigInt& x, unsigned k);

/// Smallest r with r^k >= x.
BigInt iroot_ceil(const BigInt& x, unsigned k);

BigInt floor_rat(const BigRat& r);
BigInt ceil_rat(const BigRat& r);

BigRat abs_rat(const BigRat& r);

/// Parses "p/q" or a plain integer or a decimal literal ("0.125") exactly.
std::optional<BigRat> parse_rational(const std::string& s);

/// "p/q" (or "p" when the denominator is 1).
std::string rat_string(const BigRat& r);

/// Double with 12 significant digits, the fixed text format for all float output.
std::string fmt_double(double v);

}  // namespace cuspflow
