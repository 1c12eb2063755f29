#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "diffbound/errors.hpp"

namespace diffbound {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt num(const BigRat& q) { return boost::multiprecision::numerator(q); }
inline BigInt den(const BigRat& q) { return boost::multiprecision::denominator(q); }

inline int sign(const BigRat& q) { return q.sign(); }
inline int sign(const BigInt& n) { return n.sign(); }

inline BigInt gcd(const BigInt& a, const BigInt& b) {
    return boost::multiprecision::gcd(a, b);
}
inline BigInt lcm(const BigInt& a, const BigInt& b) {
    return boost::multiprecision::lcm(a, b);
}
inline BigInt abs(const BigInt& n) { return boost::multiprecision::abs(n); }
inline BigRat abs(const BigRat& q) { return boost::multiprecision::abs(q); }

// Canonical text: "p" when the denominator is 1, else "p/q", q > 0.
std::string to_string(const BigRat& q);
std::string to_string(const BigInt& n);

// Parses "p", "-p", "p/q". Throws ParseError on anything else.
BigRat parse_rational(const std::string& text);

// Exact binomial coefficient C(n, k); 0 when k < 0 or k > n (n >= 0).
BigInt binomial(const BigInt& n, unsigned k);

// Least common multiple of denominators; 1 for an empty range.
BigInt common_denominator(const std::vector<BigRat>& values);

}  // namespace diffbound
